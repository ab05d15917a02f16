//! `jnucleus verify|sweep|inspect`
//!
//! Exit status is 0 when every check passes, 1 when any check fails or a
//! computation errors, and 2 for invalid arguments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jnucleus::combinatorics::{GroundParams, Vertex};
use jnucleus::report::{
    inspect_bases, inspect_components, inspect_nucleus, inspect_spectrum, run_instance, run_sweep,
    InstanceReport, RunConfig, RunReport, DEFAULT_MAX_VERTICES, HARD_CAP,
};

#[derive(Parser)]
#[command(name = "jnucleus", version, about = "Exact verification of the nucleus of the Johnson graph J(N,D)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on one instance.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Base vertex, e.g. "[1,2]"; defaults to {1..D}.
        #[arg(long)]
        base_vertex: Option<String>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run instances above the vertex cap.
        #[arg(long)]
        force: bool,
    },
    /// Run every check on all instances with at most `max-vertices` vertices.
    Sweep {
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Print one JSON fragment describing an instance.
    Inspect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        what: What,
        #[arg(long)]
        base_vertex: Option<String>,
        /// Subconstituent index for `components`; all when omitted.
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Spectrum,
    Nucleus,
    Bases,
    Components,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn configure_threads() -> usize {
    if let Some(k) = std::env::var("JNUCLEUS_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if k > 0 {
            // fails only if the pool already exists, which cannot happen here
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    rayon::current_num_threads()
}

/// Validated instance and base vertex, or the exit code for bad input.
fn instance(n: usize, d: usize, base: Option<&str>, force: bool) -> Result<(GroundParams, Vertex), ExitCode> {
    let p = GroundParams::new(n, d).map_err(usage_error)?;
    if p.num_vertices() > HARD_CAP && !force {
        return Err(usage_error(format!(
            "{p} has {} vertices, above the cap of {HARD_CAP} (use --force to run anyway)",
            p.num_vertices()
        )));
    }
    let x = match base {
        Some(s) => Vertex::parse(&p, s).map_err(usage_error)?,
        None => p.default_base(),
    };
    Ok((p, x))
}

fn print_instance(r: &InstanceReport) {
    let passed = r.checks.iter().filter(|c| c.passed()).count();
    println!(
        "J({},{}) x={} |X|={}: {passed}/{} PASS ({} ms)",
        r.instance.0,
        r.instance.1,
        r.base_vertex,
        r.num_vertices,
        r.checks.len(),
        r.wall_clock_ms
    );
    for c in r.checks.iter().filter(|c| !c.passed()) {
        println!("  FAIL {}: {}", c.name, c.detail);
    }
}

fn finish(report: RunReport, json: Option<PathBuf>) -> ExitCode {
    println!(
        "{} instances, {} checks, {} passed, {} failed",
        report.summary.instances, report.summary.checks, report.summary.passed, report.summary.failed
    );
    if let Some(path) = json {
        if let Err(e) = std::fs::write(&path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = configure_threads();
    match cli.command {
        Command::Verify { n, d, base_vertex, json, force } => {
            let (p, x) = match instance(n, d, base_vertex.as_deref(), force) {
                Ok(v) => v,
                Err(code) => return code,
            };
            let r = run_instance(&p, &x);
            print_instance(&r);
            let config = RunConfig {
                command: "verify".into(),
                n: Some(n),
                d: Some(d),
                base_vertex: Some(x.to_string()),
                max_vertices: None,
                force,
                threads,
            };
            finish(RunReport::new(config, vec![r]), json)
        }
        Command::Sweep { max_vertices, json, force } => {
            if max_vertices == 0 {
                return usage_error("--max-vertices must be at least 1");
            }
            if max_vertices > HARD_CAP && !force {
                return usage_error(format!(
                    "--max-vertices {max_vertices} is above the cap of {HARD_CAP} (use --force to run anyway)"
                ));
            }
            let reports = run_sweep(max_vertices);
            for r in &reports {
                print_instance(r);
            }
            let config = RunConfig {
                command: "sweep".into(),
                max_vertices: Some(max_vertices),
                force,
                threads,
                ..RunConfig::default()
            };
            finish(RunReport::new(config, reports), json)
        }
        Command::Inspect { n, d, what, base_vertex, i, force } => {
            let (p, x) = match instance(n, d, base_vertex.as_deref(), force) {
                Ok(v) => v,
                Err(code) => return code,
            };
            if let Some(i) = i {
                if i > d {
                    return usage_error(format!("--i {i} exceeds D = {d}"));
                }
            }
            let out = match what {
                What::Spectrum => inspect_spectrum(&p, &x),
                What::Nucleus => inspect_nucleus(&p, &x),
                What::Bases => inspect_bases(&p, &x),
                What::Components => inspect_components(&p, &x, i),
            };
            match out {
                Ok(v) => {
                    println!("{}", serde_json::to_string(&v).expect("json value serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
