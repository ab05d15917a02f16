//! The full check battery for one instance, sweeps over many instances, and
//! the JSON report.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bases::{
    apply_a_nuc, apply_a_vee, apply_astar_nuc, apply_astar_vee, membership_violations, project_vee,
    verify_bases, BasisFamily,
};
use crate::bose_mesner::{
    adjacency_matrix, distance_matrices, distance_matrix_row_sums, eigenspace, intersection_array,
    krein_parameters, multiplicity_closed_form, primitive_idempotents, q_polynomial_violation,
    verify_spectral, IntersectionArray, SpectralData,
};
use crate::combinatorics::{
    binomial_u64, distance, enumerate_vertices, GroundParams, SubsetOfX, Vertex, VertexOrder,
};
use crate::dual::{dual_spectral_violation, verify_dual_idempotents, DualData};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Subspace};
use crate::nucleus::{multiplicities, nucleus, verify_t_module, NucleusData};
use crate::rational::Rational;
use crate::subconstituent::{
    components_after_removal, components_after_swapped_removal, components_match_alpha_nuc,
    product_isomorphism, subconstituent_graph, ComponentSummary, SubconstituentGraph,
};

pub const SCHEMA: &str = "jnucleus/1";
pub const DEFAULT_MAX_VERTICES: u64 = 252;
pub const HARD_CAP: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instance: (usize, usize),
    pub base_vertex: String,
    pub status: Status,
    pub detail: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub instance: (usize, usize),
    pub base_vertex: String,
    pub num_vertices: u64,
    pub wall_clock_ms: u128,
    pub checks: Vec<CheckResult>,
}

impl InstanceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_vertices: Option<u64>,
    pub force: bool,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceTiming {
    pub instance: (usize, usize),
    pub num_vertices: u64,
    pub wall_clock_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub instances: Vec<InstanceTiming>,
}

impl RunReport {
    pub fn new(config: RunConfig, instances: Vec<InstanceReport>) -> Self {
        let timings = instances
            .iter()
            .map(|r| InstanceTiming {
                instance: r.instance,
                num_vertices: r.num_vertices,
                wall_clock_ms: r.wall_clock_ms,
            })
            .collect();
        let count = instances.len();
        let checks: Vec<CheckResult> = instances.into_iter().flat_map(|r| r.checks).collect();
        let passed = checks.iter().filter(|c| c.passed()).count();
        RunReport {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            config,
            summary: Summary {
                instances: count,
                checks: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
            instances: timings,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Every `(n, d)` with `d ≥ 1`, `n > 2d` and `C(n,d) ≤ max_vertices`, by
/// vertex count and then `(n, d)`.
pub fn sweep_instances(max_vertices: u64) -> Vec<GroundParams> {
    let mut out = Vec::new();
    let mut d = 1;
    while binomial_u64(2 * d as u64 + 1, d as i64) <= max_vertices {
        let mut n = 2 * d + 1;
        while binomial_u64(n as u64, d as i64) <= max_vertices {
            out.push(GroundParams::new(n, d).expect("n > 2d"));
            n += 1;
        }
        d += 1;
    }
    out.sort_by_key(|p| (p.num_vertices(), p.n(), p.d()));
    out
}

/// Collects checks for one instance and base vertex.
struct Battery {
    instance: (usize, usize),
    base: String,
    checks: Vec<CheckResult>,
}

impl Battery {
    fn record(&mut self, name: &str, outcome: Result<Option<String>>) {
        let (status, detail) = match outcome {
            Ok(None) => (Status::Pass, String::new()),
            Ok(Some(why)) => (Status::Fail, why),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            instance: self.instance,
            base_vertex: self.base.clone(),
            status,
            detail,
        });
    }

    fn blocked(&mut self, names: &[&str], why: &str) {
        for name in names {
            self.record(name, Ok(Some(format!("not run: {why}"))));
        }
    }
}

fn unless(ok: bool, why: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(why())
    }
}

/// First failure over all `α ⊆ x`, checked in parallel.
fn per_alpha(
    order: &[SubsetOfX],
    f: impl Fn(&SubsetOfX) -> Result<Option<String>> + Sync,
) -> Result<Option<String>> {
    let results: Vec<Result<Option<String>>> = order.par_iter().map(&f).collect();
    for r in results {
        if let Some(why) = r? {
            return Ok(Some(why));
        }
    }
    Ok(None)
}

fn as_violation(r: Result<impl Sized>) -> Result<Option<String>> {
    match r {
        Ok(_) => Ok(None),
        Err(Error::Verification(why)) => Ok(Some(why)),
        Err(e) => Err(e),
    }
}

const SPECTRAL_CHECKS: &[&str] = &[
    "adjacency_spectrum",
    "multiplicity_closed_form",
    "idempotent_formula_matches_eigenprojector",
    "spectral_decomposition",
    "krein_q_polynomial",
];
const DUAL_CHECKS: &[&str] = &["dual_idempotents", "dual_adjacency_spectral"];
const NUCLEUS_CHECKS: &[&str] = &[
    "nucleus_sum_direct",
    "nucleus_endpoints",
    "dim_nucleus_parts",
    "dim_estar_nucleus",
    "dim_nucleus_total",
    "t_module_closure",
];
const BASIS_CHECKS: &[&str] = &[
    "alpha_support_sizes",
    "alpha_nuc_supports_partition",
    "transition_matrices_inverse",
    "projection_vee_to_nuc",
    "action_A_vee",
    "action_A_nuc",
    "action_Astar_nuc",
    "action_Astar_vee",
];
const MEMBERSHIP_CHECKS: [&str; 4] = [
    "membership_eigenspace_sum",
    "membership_dual_eigenspace_sum",
    "membership_vee_in_nucleus_part",
    "membership_nuc_in_estar_slice",
];
const SPANNING_CHECKS: &[&str] = &[
    "linear_independence_nuc",
    "linear_independence_vee",
    "basis_nuc_of_nucleus",
    "basis_vee_of_nucleus",
    "basis_nuc_of_estar_slices",
    "basis_vee_of_nucleus_parts",
];

/// Runs the whole battery for `J(n,d)` with base vertex `x`.
pub fn run_instance(p: &GroundParams, x: &Vertex) -> InstanceReport {
    let start = Instant::now();
    let mut b = Battery {
        instance: (p.n(), p.d()),
        base: x.to_string(),
        checks: Vec::new(),
    };
    let order = enumerate_vertices(*p);
    let ia = intersection_array(p);

    b.record("vertex_order", Ok(vertex_order_violation(p, &order)));
    b.record("subconstituent_sizes", Ok(layer_size_violation(p, &order, x, &ia)));
    b.record("intersection_numbers", Ok(intersection_number_violation(&order, x, &ia)));
    let a = adjacency_matrix(p, &order);
    b.record("distance_matrices", distance_matrix_violation(p, &order, &ia));

    let sd = match primitive_idempotents(p, &a) {
        Ok(sd) => sd,
        Err(e) => {
            let why = format!("primitive idempotents: {e}");
            b.blocked(SPECTRAL_CHECKS, &why);
            b.blocked(DUAL_CHECKS, &why);
            b.blocked(NUCLEUS_CHECKS, &why);
            b.blocked(BASIS_CHECKS, &why);
            b.blocked(&MEMBERSHIP_CHECKS, &why);
            b.blocked(SPANNING_CHECKS, &why);
            return finish_instance(b, p, x, &order, &ia, None, start);
        }
    };
    let eigenspaces: Vec<Result<Subspace>> = sd.theta.par_iter().map(|&t| eigenspace(&a, t)).collect();
    b.record("adjacency_spectrum", Ok(spectrum_violation(p, &sd, &eigenspaces)));
    b.record(
        "multiplicity_closed_form",
        Ok((0..sd.mults.len())
            .find(|&i| sd.mults[i] != multiplicity_closed_form(p, i))
            .map(|i| format!("m_{i} = {} ≠ C(N,{i}) − C(N,{}) = {}", sd.mults[i], i as i64 - 1, multiplicity_closed_form(p, i)))),
    );
    b.record("idempotent_formula_matches_eigenprojector", formula_vs_projector(&sd, eigenspaces));
    b.record("spectral_decomposition", as_violation(verify_spectral(&sd, &a, ia.valency)));
    b.record(
        "krein_q_polynomial",
        krein_parameters(&sd).map(|kt| {
            q_polynomial_violation(&kt).map(|(h, i, j)| format!("triangle condition fails at q^{h}_{{{i},{j}}} = {}", kt.get(h, i, j)))
        }),
    );

    let dd = match DualData::build(p, &order, x, &sd) {
        Ok(dd) => dd,
        Err(e) => {
            let why = format!("dual data: {e}");
            b.blocked(DUAL_CHECKS, &why);
            b.blocked(NUCLEUS_CHECKS, &why);
            b.blocked(BASIS_CHECKS, &why);
            b.blocked(&MEMBERSHIP_CHECKS, &why);
            b.blocked(SPANNING_CHECKS, &why);
            return finish_instance(b, p, x, &order, &ia, None, start);
        }
    };
    b.record("dual_idempotents", as_violation(verify_dual_idempotents(&dd, &ia.k_i)));
    b.record("dual_adjacency_spectral", Ok(dual_spectral_violation(&dd)));

    let nd = match nucleus(p, &sd, &dd) {
        Ok(nd) => Some(nd),
        Err(e) => {
            b.record("nucleus_sum_direct", Ok(Some(e.to_string())));
            b.blocked(&NUCLEUS_CHECKS[1..], "nucleus not built");
            None
        }
    };
    if let Some(nd) = &nd {
        b.record("nucleus_sum_direct", Ok(None));
        b.record("nucleus_endpoints", nucleus_endpoint_violation(&dd, nd));
        b.record("dim_nucleus_parts", Ok(dims_parts_violation(nd)));
        b.record("dim_estar_nucleus", dims_estar_violation(nd));
        b.record(
            "dim_nucleus_total",
            Ok(unless(nd.dim() == 1 << p.d(), || format!("dim 𝒩 = {} ≠ 2^{}", nd.dim(), p.d()))),
        );
        b.record(
            "t_module_closure",
            verify_t_module(nd, &a, &dd.dual_adjacency).map(|ok| unless(ok, || "𝒩 is not closed under A and A*".into())),
        );
    }
    b.record(
        "multiplicity_consistency",
        as_violation(multiplicities(p)),
    );

    let bf = match BasisFamily::build(p, &order, x) {
        Ok(bf) => bf,
        Err(e) => {
            let why = format!("α vectors: {e}");
            b.blocked(BASIS_CHECKS, &why);
            b.blocked(&MEMBERSHIP_CHECKS, &why);
            b.blocked(SPANNING_CHECKS, &why);
            return finish_instance(b, p, x, &order, &ia, None, start);
        }
    };
    b.record("alpha_support_sizes", Ok(bf.support_size_violation()));
    b.record(
        "alpha_nuc_supports_partition",
        Ok(unless(bf.supports_partition(), || "supports of the α^𝒩 do not partition X".into())),
    );
    b.record("transition_matrices_inverse", bf.transition_violation());
    b.record("projection_vee_to_nuc", per_alpha(&bf.order, |al| as_violation(project_vee(&dd, &bf, al))));
    b.record("action_A_vee", per_alpha(&bf.order, |al| as_violation(apply_a_vee(&a, &bf, al))));
    b.record("action_A_nuc", per_alpha(&bf.order, |al| as_violation(apply_a_nuc(&a, &bf, al))));
    b.record("action_Astar_nuc", per_alpha(&bf.order, |al| as_violation(apply_astar_nuc(&dd, &bf, al))));
    b.record("action_Astar_vee", per_alpha(&bf.order, |al| as_violation(apply_astar_vee(&dd, &bf, al))));

    match &nd {
        Some(nd) => {
            let all: Vec<Result<[Option<String>; 4]>> = bf
                .order
                .par_iter()
                .map(|al| membership_violations(&sd, &dd, nd, &bf, al))
                .collect();
            match all.into_iter().collect::<Result<Vec<_>>>() {
                Ok(all) => {
                    for (k, name) in MEMBERSHIP_CHECKS.iter().enumerate() {
                        b.record(name, Ok(all.iter().find_map(|v| v[k].clone())));
                    }
                }
                Err(e) => b.blocked(&MEMBERSHIP_CHECKS, &e.to_string()),
            }
            match verify_bases(nd, &bf) {
                Ok(v) => {
                    let rank = |vs: &[Vec<Rational>]| {
                        Subspace::span(order.len(), vs.to_vec()).map(|s| s.dim())
                    };
                    let full = 1usize << p.d();
                    b.record(
                        "linear_independence_nuc",
                        rank(&bf.nuc_vectors).map(|r| unless(r == full, || format!("rank {{α^𝒩}} = {r} ≠ {full}"))),
                    );
                    b.record(
                        "linear_independence_vee",
                        rank(&bf.vee_vectors).map(|r| unless(r == full, || format!("rank {{α^∨}} = {r} ≠ {full}"))),
                    );
                    b.record("basis_nuc_of_nucleus", Ok(unless(v.nuc_spans_nucleus, || "{α^𝒩} is not a basis of 𝒩".into())));
                    b.record("basis_vee_of_nucleus", Ok(unless(v.vee_spans_nucleus, || "{α^∨} is not a basis of 𝒩".into())));
                    b.record(
                        "basis_nuc_of_estar_slices",
                        Ok(v.nuc_spans_estar_slice
                            .iter()
                            .position(|&ok| !ok)
                            .map(|i| format!("{{α^𝒩 : |α| = D−{i}}} is not a basis of E*_{i}𝒩"))),
                    );
                    b.record(
                        "basis_vee_of_nucleus_parts",
                        Ok(v.vee_spans_part
                            .iter()
                            .position(|&ok| !ok)
                            .map(|i| format!("{{α^∨ : |α| = D−{i}}} is not a basis of 𝒩_{i}"))),
                    );
                }
                Err(e) => b.blocked(SPANNING_CHECKS, &e.to_string()),
            }
        }
        None => {
            b.blocked(&MEMBERSHIP_CHECKS, "nucleus not built");
            b.blocked(SPANNING_CHECKS, "nucleus not built");
        }
    }
    finish_instance(b, p, x, &order, &ia, Some(&bf), start)
}

fn finish_instance(
    mut b: Battery,
    p: &GroundParams,
    x: &Vertex,
    order: &VertexOrder,
    ia: &IntersectionArray,
    bf: Option<&BasisFamily>,
    start: Instant,
) -> InstanceReport {
    let graphs: Vec<Result<SubconstituentGraph>> =
        (0..=p.d()).into_par_iter().map(|i| subconstituent_graph(p, order, x, i)).collect();
    let graphs = match graphs.into_iter().collect::<Result<Vec<_>>>() {
        Ok(g) => g,
        Err(e) => {
            b.record("subconstituent_edge_types", Ok(Some(e.to_string())));
            b.blocked(
                &[
                    "product_isomorphism",
                    "components_after_removal",
                    "components_after_swapped_removal",
                    "components_match_alpha_nuc",
                ],
                "subconstituent graphs not built",
            );
            return b.into_report(p, start);
        }
    };
    b.record(
        "subconstituent_edge_types",
        Ok(graphs.iter().find_map(|g| {
            let i = g.i;
            let expected = (ia.k_i[i] * ia.a[i] / 2) as usize;
            unless(g.edges.len() == expected, || {
                format!("Γ_{i}(x) has {} edges, expected k_i·a_i/2 = {expected}", g.edges.len())
            })
        })),
    );
    let first_failure = |f: &(dyn Fn(&SubconstituentGraph) -> Result<Option<String>> + Sync)| {
        let rs: Vec<Result<Option<String>>> = graphs.par_iter().map(f).collect();
        rs.into_iter().collect::<Result<Vec<_>>>().map(|v| v.into_iter().flatten().next())
    };
    b.record("product_isomorphism", first_failure(&|g| as_violation(product_isomorphism(g))));
    b.record("components_after_removal", first_failure(&|g| as_violation(components_after_removal(g))));
    b.record(
        "components_after_swapped_removal",
        first_failure(&|g| as_violation(components_after_swapped_removal(g))),
    );
    match bf {
        Some(bf) => b.record(
            "components_match_alpha_nuc",
            first_failure(&|g| {
                let cp = components_after_removal(g)?;
                Ok(unless(components_match_alpha_nuc(&cp, g, bf), || {
                    format!("components of Γ_{}(x) differ from {{α^𝒩 : |α| = D−{}}}", g.i, g.i)
                }))
            }),
        ),
        None => b.blocked(&["components_match_alpha_nuc"], "α vectors not built"),
    }
    b.into_report(p, start)
}

impl Battery {
    fn into_report(self, p: &GroundParams, start: Instant) -> InstanceReport {
        InstanceReport {
            instance: self.instance,
            base_vertex: self.base,
            num_vertices: p.num_vertices(),
            wall_clock_ms: start.elapsed().as_millis(),
            checks: self.checks,
        }
    }
}

fn vertex_order_violation(p: &GroundParams, order: &VertexOrder) -> Option<String> {
    if order.len() as u64 != p.num_vertices() {
        return Some(format!("|X| = {} ≠ C({},{}) = {}", order.len(), p.n(), p.d(), p.num_vertices()));
    }
    let vs = order.vertices();
    if let Some(k) = (1..vs.len()).find(|&k| vs[k - 1].set().colex_cmp(vs[k].set()) != std::cmp::Ordering::Less) {
        return Some(format!("vertex order not strictly colex at position {k}"));
    }
    (0..vs.len())
        .find(|&k| order.position(&vs[k]) != Some(k))
        .map(|k| format!("rank of {} is not {k}", vs[k]))
}

fn layer_size_violation(p: &GroundParams, order: &VertexOrder, x: &Vertex, ia: &IntersectionArray) -> Option<String> {
    let mut sizes = vec![0u64; p.d() + 1];
    for y in order.iter() {
        sizes[distance(x, y)] += 1;
    }
    unless(sizes == ia.k_i, || format!("|Γ_i(x)| = {sizes:?}, expected k_i = {:?}", ia.k_i))
}

/// `c_i`, `a_i`, `b_i` counted at every vertex against the base vertex.
fn intersection_number_violation(
    order: &VertexOrder,
    x: &Vertex,
    ia: &IntersectionArray,
) -> Option<String> {
    let vs = order.vertices();
    let dist_x: Vec<usize> = vs.iter().map(|y| distance(x, y)).collect();
    let bad: Vec<Option<String>> = (0..vs.len())
        .into_par_iter()
        .map(|k| {
            let i = dist_x[k];
            let mut counts = [0u64; 3];
            for (m, z) in vs.iter().enumerate() {
                if distance(&vs[k], z) == 1 {
                    let j = dist_x[m];
                    counts[j + 1 - i] += 1;
                }
            }
            let expected = [ia.c_at(i), ia.a[i], ia.b_at(i)];
            unless(counts == expected, || {
                format!("at {} (distance {i}): (c,a,b) = {counts:?}, expected {expected:?}", vs[k])
            })
        })
        .collect();
    bad.into_iter().flatten().next()
}

/// `Σ A_i = J`, row sums `k_i`, and `A_1 = A`.
fn distance_matrix_violation(p: &GroundParams, order: &VertexOrder, ia: &IntersectionArray) -> Result<Option<String>> {
    let ais = distance_matrices(p, order);
    let sums = distance_matrix_row_sums(&ais)?;
    if sums != ia.k_i {
        return Ok(Some(format!("row sums of A_i = {sums:?}, expected k_i = {:?}", ia.k_i)));
    }
    let n = order.len();
    let mut total = ExactMatrix::zeros(n, n);
    for m in &ais {
        total = total.add(m)?;
    }
    if total != ExactMatrix::ones(n, n) {
        return Ok(Some("Σ A_i ≠ J".into()));
    }
    if ais[0] != ExactMatrix::identity(n) {
        return Ok(Some("A_0 ≠ I".into()));
    }
    if let Some(i) = ais.iter().position(|m| !m.is_symmetric()) {
        return Ok(Some(format!("A_{i} is not symmetric")));
    }
    if p.d() >= 1 && ais[1] != adjacency_matrix(p, order) {
        return Ok(Some("A_1 ≠ A".into()));
    }
    // A·A_i = b_{i-1}A_{i-1} + a_i A_i + c_{i+1}A_{i+1}, which also makes the A_i commute
    let d = p.d();
    for i in 0..=d {
        let int = |v: u64| Rational::from_int(v as i64);
        let mut rhs = ais[i].scale(&int(ia.a[i]));
        if i > 0 {
            rhs = rhs.add(&ais[i - 1].scale(&int(ia.b_at(i - 1))))?;
        }
        if i < d {
            rhs = rhs.add(&ais[i + 1].scale(&int(ia.c_at(i + 1))))?;
        }
        if d >= 1 && ais[1].mul(&ais[i])? != rhs {
            return Ok(Some(format!("A·A_{i} breaks the three-term recurrence")));
        }
    }
    Ok(None)
}

fn spectrum_violation(p: &GroundParams, sd: &SpectralData, eigenspaces: &[Result<Subspace>]) -> Option<String> {
    let mut total = 0u64;
    for (i, es) in eigenspaces.iter().enumerate() {
        let dim = match es {
            Ok(s) => s.dim() as u64,
            Err(e) => return Some(format!("ker(A − θ_{i}I): {e}")),
        };
        if dim == 0 {
            return Some(format!("θ_{i} = {} is not an eigenvalue of A", sd.theta[i]));
        }
        if dim != sd.mults[i] {
            return Some(format!("dim ker(A − θ_{i}I) = {dim} but trace(E_{i}) = {}", sd.mults[i]));
        }
        total += dim;
    }
    unless(total == p.num_vertices(), || format!("Σ m_i = {total} ≠ |X| = {}", p.num_vertices()))
}

fn formula_vs_projector(sd: &SpectralData, eigenspaces: Vec<Result<Subspace>>) -> Result<Option<String>> {
    let results: Vec<Result<Option<String>>> = eigenspaces
        .into_par_iter()
        .enumerate()
        .map(|(r, es)| {
            let proj = es?.orthogonal_projector()?;
            Ok(unless(proj == sd.idempotents[r], || {
                format!("E_{r} from the polynomial formula differs from the projector onto ker(A − θ_{r}I)")
            }))
        })
        .collect();
    for r in results {
        if let Some(why) = r? {
            return Ok(Some(why));
        }
    }
    Ok(None)
}

fn nucleus_endpoint_violation(dd: &DualData, nd: &NucleusData) -> Result<Option<String>> {
    let n = dd.dual_adjacency.rows();
    let d = nd.parts.len() - 1;
    if nd.parts[0] != Subspace::coordinate(n, [dd.base_index])? {
        return Ok(Some("𝒩_0 ≠ E*_0V".into()));
    }
    let ones = Subspace::span(n, vec![vec![Rational::one(); n]])?;
    Ok(unless(nd.parts[d] == ones, || format!("𝒩_{d} ≠ E_0V")))
}

fn dims_parts_violation(nd: &NucleusData) -> Option<String> {
    let d = nd.parts.len() - 1;
    (0..=d).find_map(|i| {
        let expected = binomial_u64(d as u64, i as i64) as usize;
        unless(nd.dims_parts[i] == expected, || {
            format!("dim 𝒩_{i} = {} ≠ C({d},{i}) = {expected}", nd.dims_parts[i])
        })
    })
}

fn dims_estar_violation(nd: &NucleusData) -> Result<Option<String>> {
    let d = nd.parts.len() - 1;
    let bad = (0..=d).find_map(|i| {
        let expected = binomial_u64(d as u64, i as i64) as usize;
        unless(nd.dims_estar[d - i] == expected, || {
            format!("dim E*_{}𝒩 = {} ≠ C({d},{i}) = {expected}", d - i, nd.dims_estar[d - i])
        })
    });
    if bad.is_some() {
        return Ok(bad);
    }
    Ok(unless(nd.estar_decomposition_holds()?, || "𝒩 ≠ ⊕ E*_i𝒩".into()))
}

/// Runs `run_instance` on every instance of the sweep, concurrently.
pub fn run_sweep(max_vertices: u64) -> Vec<InstanceReport> {
    sweep_instances(max_vertices)
        .par_iter()
        .map(|p| run_instance(p, &p.default_base()))
        .collect()
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_json(m: &ExactMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| json!(rationals(m.row(r)))).collect())
}

pub fn inspect_spectrum(p: &GroundParams, x: &Vertex) -> Result<Value> {
    let order = enumerate_vertices(*p);
    let sd = primitive_idempotents(p, &adjacency_matrix(p, &order))?;
    let dd = DualData::build(p, &order, x, &sd)?;
    let ia = intersection_array(p);
    Ok(json!({
        "theta": sd.theta,
        "theta_star": rationals(&dd.theta_star),
        "mults": sd.mults,
        "intersection_array": {"c": ia.c, "a": ia.a, "b": ia.b, "k": ia.k_i},
    }))
}

pub fn inspect_nucleus(p: &GroundParams, x: &Vertex) -> Result<Value> {
    let order = enumerate_vertices(*p);
    let sd = primitive_idempotents(p, &adjacency_matrix(p, &order))?;
    let dd = DualData::build(p, &order, x, &sd)?;
    let nd = nucleus(p, &sd, &dd)?;
    let bf = BasisFamily::build(p, &order, x)?;
    let verdict = verify_bases(&nd, &bf)?;
    Ok(json!({
        "dims_Ni": nd.dims_parts,
        "dims_EstarN": nd.dims_estar,
        "dim_N": nd.dim(),
        "direct": nd.estar_decomposition_holds()?,
        "multiplicities": multiplicities(p)?.mult,
        "bases": verdict,
    }))
}

pub fn inspect_bases(p: &GroundParams, x: &Vertex) -> Result<Value> {
    let report = run_instance(p, x);
    let order = enumerate_vertices(*p);
    let bf = BasisFamily::build(p, &order, x)?;
    let alphas: Vec<Value> = bf
        .order
        .iter()
        .zip(bf.support_sizes())
        .map(|(al, (v, n))| json!({"alpha": al.to_string(), "vee_support": v, "nuc_support": n}))
        .collect();
    let names = BASIS_CHECKS
        .iter()
        .chain(MEMBERSHIP_CHECKS.iter())
        .chain(SPANNING_CHECKS.iter());
    let mut results = serde_json::Map::new();
    for name in names {
        if let Some(c) = report.check(name) {
            results.insert(name.to_string(), json!(c.status));
        }
    }
    let mut out = json!({"alphas": alphas, "checks": results});
    if p.d() <= 4 {
        out["order"] = json!(bf.order.iter().map(ToString::to_string).collect::<Vec<_>>());
        out["zeta"] = matrix_json(&bf.zeta);
        out["moebius"] = matrix_json(&bf.moebius);
    }
    Ok(out)
}

/// Component structure for one `i`, or for every `i` when `i` is `None`.
pub fn inspect_components(p: &GroundParams, x: &Vertex, i: Option<usize>) -> Result<Value> {
    let order = enumerate_vertices(*p);
    let one = |i: usize| -> Result<ComponentSummary> {
        let g = subconstituent_graph(p, &order, x, i)?;
        Ok(components_after_removal(&g)?.summary(i))
    };
    match i {
        Some(i) => Ok(json!(one(i)?)),
        None => Ok(json!((0..=p.d()).map(one).collect::<Result<Vec<_>>>()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_instance_lists() {
        let small: Vec<(usize, usize)> = sweep_instances(10).iter().map(|p| (p.n(), p.d())).collect();
        assert!(small.contains(&(5, 2)));
        assert!(small.contains(&(3, 1)));
        assert!(!small.contains(&(11, 1)));
        let mid: Vec<(usize, usize)> = sweep_instances(130).iter().map(|p| (p.n(), p.d())).collect();
        assert!(mid.contains(&(9, 4)));
        assert!(mid.contains(&(130, 1)));
        assert!(!mid.contains(&(11, 4)));
        let big: Vec<(usize, usize)> = sweep_instances(500).iter().map(|p| (p.n(), p.d())).collect();
        assert!(big.contains(&(11, 5)));
        assert!(sweep_instances(500).iter().all(|p| p.num_vertices() <= 500 && p.n() > 2 * p.d()));
    }

    #[test]
    fn j52_battery_passes() {
        let p = GroundParams::new(5, 2).unwrap();
        let r = run_instance(&p, &p.default_base());
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed()).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert!(r.checks.len() >= 30);
        let mut names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), r.checks.len());
    }

    #[test]
    fn battery_on_other_base_vertex() {
        let p = GroundParams::new(7, 3).unwrap();
        let x = Vertex::parse(&p, "[2,5,7]").unwrap();
        let r = run_instance(&p, &x);
        assert!(r.all_passed());
        assert_eq!(r.base_vertex, "[2,5,7]");
    }

    #[test]
    fn report_summary_counts() {
        let p = GroundParams::new(5, 2).unwrap();
        let r = RunReport::new(RunConfig::default(), vec![run_instance(&p, &p.default_base())]);
        assert_eq!(r.summary.passed + r.summary.failed, r.checks.len());
        assert_eq!(r.summary.instances, 1);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], "jnucleus/1");
        assert_eq!(v["checks"][0]["status"], "PASS");
    }

    #[test]
    fn inspect_fragments() {
        let p = GroundParams::new(5, 2).unwrap();
        let x = p.default_base();
        let s = inspect_spectrum(&p, &x).unwrap();
        assert_eq!(s["theta"], json!([6, 1, -2]));
        assert_eq!(s["theta_star"], json!(["4", "2/3", "-8/3"]));
        let c = inspect_components(&p, &x, Some(1)).unwrap();
        assert_eq!(c["num_components"], 2);
        assert_eq!(c["component_size"], 3);
        let p = GroundParams::new(7, 3).unwrap();
        let nn = inspect_nucleus(&p, &p.default_base()).unwrap();
        assert_eq!(nn["dim_N"], 8);
        assert_eq!(nn["dims_EstarN"], json!([1, 3, 3, 1]));
    }
}
