//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.
//!
//! The 252-vertex sweep is run once through the binary; its JSON report
//! feeds criteria 1–11 together with direct library computations, and its
//! exit status and wall clock feed criterion 12.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use jnucleus::bases::BasisFamily;
use jnucleus::bose_mesner::{adjacency_matrix, eigenspace, eigenvalues, primitive_idempotents};
use jnucleus::combinatorics::{binomial_u64, enumerate_vertices, GroundParams};
use jnucleus::dual::DualData;
use jnucleus::nucleus::{multiplicities, nucleus};
use jnucleus::report::sweep_instances;

const DEFAULT_SWEEP: u64 = 252;
const LARGE_SWEEP: u64 = 500;

type Outcome = Result<String, String>;

struct SweepRun {
    exit: Option<i32>,
    elapsed: Duration,
    report: Option<Value>,
}

fn run_sweep(max_vertices: u64, json: Option<&PathBuf>) -> SweepRun {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jnucleus"));
    cmd.args(["sweep", "--max-vertices", &max_vertices.to_string()]);
    if let Some(path) = json {
        cmd.arg("--json").arg(path);
    }
    let start = Instant::now();
    let out = cmd.output().expect("jnucleus binary runs");
    let elapsed = start.elapsed();
    let report = json
        .and_then(|p| std::fs::read_to_string(p).ok())
        .and_then(|s| serde_json::from_str(&s).ok());
    SweepRun {
        exit: out.status.code(),
        elapsed,
        report,
    }
}

/// Status of every named check, keyed by instance.
struct Statuses {
    by_instance: BTreeMap<(u64, u64), BTreeMap<String, (String, String)>>,
}

impl Statuses {
    fn from_report(report: &Value) -> Self {
        let mut by_instance: BTreeMap<(u64, u64), BTreeMap<String, (String, String)>> = BTreeMap::new();
        for c in report["checks"].as_array().into_iter().flatten() {
            let inst = (c["instance"][0].as_u64().unwrap_or(0), c["instance"][1].as_u64().unwrap_or(0));
            by_instance.entry(inst).or_default().insert(
                c["name"].as_str().unwrap_or("").to_string(),
                (
                    c["status"].as_str().unwrap_or("").to_string(),
                    c["detail"].as_str().unwrap_or("").to_string(),
                ),
            );
        }
        Statuses { by_instance }
    }

    /// Every expected instance reports every named check as PASS.
    fn require(&self, names: &[&str]) -> Outcome {
        let expected: BTreeSet<(u64, u64)> = sweep_instances(DEFAULT_SWEEP)
            .iter()
            .map(|p| (p.n() as u64, p.d() as u64))
            .collect();
        let got: BTreeSet<(u64, u64)> = self.by_instance.keys().copied().collect();
        if expected != got {
            return Err(format!("sweep covered {} instances, expected {}", got.len(), expected.len()));
        }
        for (inst, checks) in &self.by_instance {
            for name in names {
                match checks.get(*name) {
                    Some((status, _)) if status == "PASS" => {}
                    Some((_, detail)) => return Err(format!("J{inst:?} {name}: {detail}")),
                    None => return Err(format!("J{inst:?} has no check {name}")),
                }
            }
        }
        Ok(format!("{} checks × {} instances", names.len(), expected.len()))
    }
}

fn instance(n: usize, d: usize) -> GroundParams {
    GroundParams::new(n, d).expect("valid instance")
}

fn criterion_spectrum(st: &Statuses) -> Outcome {
    let mut slowest = Duration::ZERO;
    for p in sweep_instances(DEFAULT_SWEEP) {
        let start = Instant::now();
        let a = adjacency_matrix(&p, &enumerate_vertices(p));
        let mut total = 0u64;
        for &t in &eigenvalues(&p) {
            let dim = eigenspace(&a, t).map_err(|e| e.to_string())?.dim() as u64;
            if dim == 0 {
                return Err(format!("{p}: θ = {t} has a zero eigenspace"));
            }
            total += dim;
        }
        if total != p.num_vertices() {
            return Err(format!("{p}: eigenspace dimensions sum to {total}"));
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(1) {
            return Err(format!("{p}: spectrum took {elapsed:?}"));
        }
        slowest = slowest.max(elapsed);
    }
    let p = instance(5, 2);
    let sd = primitive_idempotents(&p, &adjacency_matrix(&p, &enumerate_vertices(p))).map_err(|e| e.to_string())?;
    if sd.theta != vec![6, 1, -2] || sd.mults != vec![1, 4, 5] {
        return Err(format!("J(5,2): θ = {:?}, m = {:?}", sd.theta, sd.mults));
    }
    if eigenvalues(&instance(7, 3)) != vec![12, 5, 0, -3] {
        return Err("J(7,3) eigenvalues".into());
    }
    st.require(&["adjacency_spectrum", "multiplicity_closed_form"])?;
    Ok(format!("slowest spectrum {slowest:?}"))
}

fn criterion_dimensions(st: &Statuses) -> Outcome {
    for (n, d, dims) in [(5, 2, vec![1, 2, 1]), (7, 3, vec![1, 3, 3, 1]), (9, 4, vec![1, 4, 6, 4, 1])] {
        let p = instance(n, d);
        let order = enumerate_vertices(p);
        let sd = primitive_idempotents(&p, &adjacency_matrix(&p, &order)).map_err(|e| e.to_string())?;
        let dd = DualData::build(&p, &order, &p.default_base(), &sd).map_err(|e| e.to_string())?;
        let nd = nucleus(&p, &sd, &dd).map_err(|e| e.to_string())?;
        if nd.dims_parts != dims || nd.dims_estar != dims || nd.dim() != 1 << d {
            return Err(format!("{p}: 𝒩_i dims {:?}, E*_i𝒩 dims {:?}", nd.dims_parts, nd.dims_estar));
        }
    }
    st.require(&[
        "nucleus_sum_direct",
        "nucleus_endpoints",
        "dim_nucleus_parts",
        "dim_estar_nucleus",
        "dim_nucleus_total",
    ])
}

fn criterion_transition(st: &Statuses) -> Outcome {
    for p in sweep_instances(DEFAULT_SWEEP) {
        let bf = BasisFamily::build(&p, &enumerate_vertices(p), &p.default_base()).map_err(|e| e.to_string())?;
        let m = bf.len();
        let prod = bf.zeta.mul(&bf.moebius).map_err(|e| e.to_string())?;
        if prod != jnucleus::linalg::ExactMatrix::identity(m) {
            return Err(format!("{p}: zeta·moebius ≠ I"));
        }
    }
    st.require(&["transition_matrices_inverse"])
}

fn criterion_multiplicities(st: &Statuses) -> Outcome {
    for p in sweep_instances(DEFAULT_SWEEP) {
        let mult = multiplicities(&p).map_err(|e| e.to_string())?.mult;
        let d = p.d() as u64;
        let mut running = 0;
        for (i, m) in mult.iter().enumerate() {
            running += m;
            if running != binomial_u64(d, i as i64) {
                return Err(format!("{p}: Σ_{{r≤{i}}} mult_r = {running}"));
            }
        }
    }
    st.require(&["multiplicity_consistency"])
}

fn criterion_end_to_end(default: &SweepRun, large: &SweepRun) -> Outcome {
    let failures = default
        .report
        .as_ref()
        .and_then(|r| r["summary"]["failed"].as_u64())
        .ok_or("no JSON report from the default sweep")?;
    if default.exit != Some(0) || failures != 0 {
        return Err(format!("sweep {DEFAULT_SWEEP}: exit {:?}, {failures} FAIL entries", default.exit));
    }
    if default.elapsed >= Duration::from_secs(600) {
        return Err(format!("sweep {DEFAULT_SWEEP} took {:?}", default.elapsed));
    }
    if large.exit != Some(0) {
        return Err(format!("sweep {LARGE_SWEEP}: exit {:?}", large.exit));
    }
    if large.elapsed >= Duration::from_secs(3600) {
        return Err(format!("sweep {LARGE_SWEEP} took {:?}", large.elapsed));
    }
    Ok(format!(
        "sweep {DEFAULT_SWEEP} in {:.1}s, sweep {LARGE_SWEEP} in {:.1}s",
        default.elapsed.as_secs_f64(),
        large.elapsed.as_secs_f64()
    ))
}

fn main() {
    let dir = std::env::temp_dir().join(format!("jnucleus-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let json = dir.join("sweep.json");
    let default = run_sweep(DEFAULT_SWEEP, Some(&json));
    let st = default
        .report
        .as_ref()
        .map(Statuses::from_report)
        .unwrap_or(Statuses { by_instance: BTreeMap::new() });

    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 spectrum", criterion_spectrum(&st)),
        ("2 idempotent formula", st.require(&["idempotent_formula_matches_eigenprojector", "spectral_decomposition"])),
        ("3 Q-polynomial", st.require(&["krein_q_polynomial"])),
        ("4 nucleus dimensions", criterion_dimensions(&st)),
        ("5 T-module closure", st.require(&["t_module_closure"])),
        (
            "6 bases",
            st.require(&[
                "linear_independence_nuc",
                "linear_independence_vee",
                "basis_nuc_of_nucleus",
                "basis_vee_of_nucleus",
                "basis_nuc_of_estar_slices",
                "basis_vee_of_nucleus_parts",
            ]),
        ),
        (
            "7 actions of A and A*",
            st.require(&["action_A_vee", "action_A_nuc", "action_Astar_nuc", "action_Astar_vee"]),
        ),
        (
            "8 memberships",
            st.require(&[
                "membership_eigenspace_sum",
                "membership_dual_eigenspace_sum",
                "membership_vee_in_nucleus_part",
                "membership_nuc_in_estar_slice",
            ]),
        ),
        ("9 transition matrices", criterion_transition(&st)),
        (
            "10 subconstituent structure",
            st.require(&[
                "subconstituent_edge_types",
                "product_isomorphism",
                "components_after_removal",
                "components_match_alpha_nuc",
            ]),
        ),
        ("11 multiplicity consistency", criterion_multiplicities(&st)),
    ];
    let large = run_sweep(LARGE_SWEEP, None);
    results.push(("12 end-to-end", criterion_end_to_end(&default, &large)));
    let _ = std::fs::remove_dir_all(&dir);

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(note) => println!("PASS  criterion {name}: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
