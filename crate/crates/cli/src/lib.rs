//! The `hf` command-line tool: argument handling, configuration files,
//! result caching and output for every `hf-core` pipeline.

pub mod args;
pub mod cache;
pub mod config;
pub mod plot;
pub mod values;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use hf_core::estimate::{circle_samples, disk_samples};
use hf_core::ifs::{BranchSystemSummary, DISTORTION};
use hf_core::island::{build_digraph_with, find_islands_with, DigraphSummary, IslandOptions, Rejection};
use hf_core::rescale::entropy_ladder_with;
use hf_core::{
    certificate::CertificateMetadata, certify, certify_polylike, entropy_from_polylike, render_escape, separated_entropy_estimate,
    sft_entropy, verify_conjugacy, BranchSystem, Budgets, CertificationRequest, ComplexVal, ConjugacyReport, Disk,
    EntropyCertificate, EntropyEstimate, InverseBranch, LadderReport, RoutePreference, TwoCycleCertificate, Window,
};
use serde::Serialize;

use args::{BudgetArgs, Cli, Command, RouteArg, SampleSet};
use cache::Cache;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SUBCOMMANDS: [&str; 10] =
    ["eval", "entropy-sft", "estimate", "islands", "digraph", "horseshoe", "polylike", "certify", "ladder", "render"];

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain { stage: &'static str, message: String },
}

fn domain(stage: &'static str, e: impl std::fmt::Display) -> Failure {
    Failure::Domain { stage, message: e.to_string() }
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    error: &'a str,
    stage: &'a str,
}

/// Runs one command; returns the process exit code (0 ok, 1 domain error, 2 usage error).
pub fn run(argv: impl IntoIterator<Item = OsString>) -> i32 {
    let argv = match config::expand(argv.into_iter().collect(), &SUBCOMMANDS) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        // A second call in the same process keeps the existing pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(&cli).and_then(|json| emit(&json, cli.global.out.as_deref())) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Domain { stage, message }) => {
            eprintln!("{}", serde_json::to_string(&ErrorOut { error: &message, stage }).expect("serializes"));
            1
        }
    }
}

fn emit(json: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, format!("{json}\n")).map_err(|e| domain("output", format!("{}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{json}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(domain("output", e)),
            _ => Ok(()),
        },
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn cache_for(cli: &Cli) -> Option<Cache> {
    if cli.global.no_cache {
        return None;
    }
    let dir = cli.global.cache_dir.clone().or_else(default_cache_dir)?;
    Some(Cache::new(dir, VERSION))
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME").map(PathBuf::from).or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("hf"))
}

/// Cached result for `request`, computing and storing it on a miss.
fn cached<R: Serialize>(cache: Option<&Cache>, command: &str, request: &R, compute: impl FnOnce() -> Result<String, Failure>) -> Result<String, Failure> {
    if let Some(hit) = cache.and_then(|c| c.lookup(command, request)) {
        return Ok(hit);
    }
    let out = compute()?;
    if let Some(c) = cache {
        if let Err(e) = c.store(command, request, &out) {
            eprintln!("warning: cache store in {} failed: {e}", c.dir().display());
        }
    }
    Ok(out)
}

fn budgets(b: &BudgetArgs) -> Result<Budgets, Failure> {
    if !(b.k_growth > 1.0) {
        return Err(Failure::Usage("--k-growth must exceed 1".into()));
    }
    if b.depth == 0 {
        return Err(Failure::Usage("--depth must be at least 1".into()));
    }
    Ok(Budgets {
        zero_steps: b.zero_steps,
        k_max: b.k_max,
        k_growth: b.k_growth,
        grid_density: b.grid,
        critical_grid: b.critical_grid,
        depth: b.depth,
        tolerance: b.tolerance,
        delta: b.delta,
    })
}

#[derive(Serialize)]
struct EvalOut {
    function: String,
    z: ComplexVal,
    value: ComplexVal,
    derivative: ComplexVal,
}

#[derive(Serialize)]
struct SftOut {
    n: usize,
    entropy: f64,
}

#[derive(Serialize)]
struct EstimateOut {
    function: String,
    sample_set: &'static str,
    center: ComplexVal,
    radius: f64,
    estimate: EntropyEstimate,
}

#[derive(Serialize)]
struct IslandOut {
    core: ComplexVal,
    containment_margin: f64,
    boundary_points: usize,
    degree: i64,
}

#[derive(Serialize)]
struct IslandsOut {
    function: String,
    source: Disk,
    target: Disk,
    islands: Vec<IslandOut>,
    rejected: Vec<Rejection>,
}

#[derive(Serialize)]
struct DigraphOut {
    function: String,
    digraph: DigraphSummary,
    min_out_degree: usize,
    two_cycle: Option<TwoCycleCertificate>,
}

#[derive(Serialize)]
struct HorseshoeOut {
    function: String,
    system: BranchSystemSummary,
    report: ConjugacyReport,
    bound: Option<f64>,
}

#[derive(Serialize)]
struct PolylikeOut {
    function: String,
    degree: u32,
    containment_margin: f64,
    boundary_points: usize,
    certificate: EntropyCertificate,
}

#[derive(Serialize)]
struct RenderOut {
    function: String,
    window: Window,
    iterations: u32,
    escape_radius: f64,
    width: usize,
    height: usize,
    escaped_pixels: usize,
    pixel_hash: String,
    image: Option<String>,
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Eval(a) => {
            let j = a.f.eval_jet(a.z).map_err(|e| domain("evaluation", e))?;
            Ok(pretty(&EvalOut { function: a.f.canonical(), z: a.z, value: j.value, derivative: j.deriv }))
        }
        Command::EntropySft(a) => Ok(pretty(&SftOut { n: a.matrix.n(), entropy: sft_entropy(&a.matrix) })),
        Command::Estimate(a) => {
            let (name, samples) = match a.sample_set {
                SampleSet::Circle => ("circle", circle_samples(a.samples).into_iter().map(|z| a.center + a.radius * z).collect()),
                SampleSet::Disk => ("disk", disk_samples(a.center, a.radius, a.samples, a.seed)),
            };
            let nan = ComplexVal::new(f64::NAN, f64::NAN);
            let estimate =
                separated_entropy_estimate(|z| a.f.eval(z).unwrap_or(nan), &samples, a.n_max, a.epsilon).map_err(|e| domain("estimate", e))?;
            Ok(pretty(&EstimateOut { function: a.f.canonical(), sample_set: name, center: a.center, radius: a.radius, estimate }))
        }
        Command::Islands(a) => {
            let source = Disk::new(a.source_center, a.source_radius);
            let target = Disk::new(a.target_center, a.target_radius);
            let s = find_islands_with(&a.f, &source, &target, &IslandOptions { grid_density: a.grid, ..IslandOptions::default() });
            let islands = s
                .witnesses
                .iter()
                .map(|w| IslandOut {
                    core: w.core,
                    containment_margin: w.containment_margin,
                    boundary_points: w.lifted_boundary.len(),
                    degree: w.univalence.degree,
                })
                .collect();
            Ok(pretty(&IslandsOut { function: a.f.canonical(), source, target, islands, rejected: s.rejected }))
        }
        Command::Digraph(a) => {
            let opts = IslandOptions { grid_density: a.grid, ..IslandOptions::default() };
            let g = build_digraph_with(&a.f, &a.centers.0, a.gamma, a.delta, &opts).map_err(|e| domain("geometry", e))?;
            let graph = g.digraph();
            let two_cycle = match a.k {
                Some(k) => Some(hf_core::find_two_cycles(&graph, k).map_err(|e| domain("two_cycle", e))?),
                None => None,
            };
            Ok(pretty(&DigraphOut { function: a.f.canonical(), digraph: g.summary(), min_out_degree: graph.min_out_degree(), two_cycle }))
        }
        Command::Horseshoe(a) => {
            let gamma = a.delta / (8.0 * DISTORTION);
            let opts = IslandOptions { grid_density: a.grid, ..IslandOptions::default() };
            let s = find_islands_with(&a.f, &Disk::new(a.a, gamma), &Disk::new(a.a, a.delta), &opts);
            let branches = s.witnesses.iter().map(|w| InverseBranch::from_witness(&a.f, w)).collect();
            let bs = BranchSystem::build(&a.f, a.a, a.delta, branches).map_err(|e| domain("branch_system", e))?;
            let report = verify_conjugacy(&bs, &a.f, a.depth, a.tolerance).map_err(|e| domain("conjugacy", e))?;
            let bound = report.pass.then(|| (bs.n_symbols() as f64).ln());
            Ok(pretty(&HorseshoeOut { function: a.f.canonical(), system: bs.summary(), report, bound }))
        }
        Command::Polylike(a) => {
            let v = Disk::new(a.v_center, a.v_radius);
            let d = Disk::new(a.d_center.unwrap_or(a.v_center), a.d_radius.unwrap_or(a.v_radius));
            let p = certify_polylike(&a.f, &d, &v, a.seed).map_err(|e| domain("polylike", e))?;
            Ok(pretty(&PolylikeOut {
                function: a.f.canonical(),
                degree: p.degree,
                containment_margin: p.containment_margin,
                boundary_points: p.u_boundary.vertices.len(),
                certificate: entropy_from_polylike(&a.f, &p),
            }))
        }
        Command::Certify(a) => {
            if a.target < 2 {
                return Err(Failure::Usage("--target must be at least 2".into()));
            }
            let req = CertificationRequest {
                f: a.f.clone(),
                target_m: a.target,
                route: match a.route {
                    RouteArg::Auto => RoutePreference::Auto,
                    RouteArg::Zeros => RoutePreference::Zeros,
                    RouteArg::Islands => RoutePreference::Islands,
                },
                budgets: budgets(&a.budgets)?,
                translate: a.translate_c.zip(a.translate_d),
                probes: a.probes.as_ref().map(|p| p.0.clone()),
            };
            let json = cached(cache_for(cli).as_ref(), "certify", &req, || {
                certify(&req).map(|c| c.to_json()).map_err(|e| domain(e.stage(), e))
            })?;
            if !a.timestamp {
                return Ok(json);
            }
            let mut cert: EntropyCertificate = serde_json::from_str(&json).map_err(|e| domain("cache", e))?;
            cert.metadata = Some(CertificateMetadata { issued_at: chrono::Utc::now().to_rfc3339(), tool_version: VERSION.into() });
            Ok(cert.to_json())
        }
        Command::Ladder(a) => {
            let b = budgets(&a.budgets)?;
            let request = (a.f.source(), &a.targets.0, &b);
            let json = cached(cache_for(cli).as_ref(), "ladder", &request, || Ok(pretty(&entropy_ladder_with(&a.f, &a.targets.0, &b))))?;
            if let Some(path) = &a.plot {
                let report: LadderReport = serde_json::from_str(&json).map_err(|e| domain("cache", e))?;
                plot::save_ladder(&report, path).map_err(|e| domain("output", e))?;
            }
            Ok(json)
        }
        Command::Render(a) => {
            if a.iterations == 0 || a.width == 0 || a.height == 0 || a.width * a.height > hf_core::render::MAX_PIXELS {
                return Err(Failure::Usage("need iterations >= 1 and 1 <= width x height <= 8192 x 8192".into()));
            }
            let window = Window::square(a.center, a.half_width);
            let raster = render_escape(&a.f, &window, a.iterations, a.escape_radius, a.width, a.height);
            if let Some(path) = &a.image {
                plot::save_raster(&raster, path).map_err(|e| domain("output", e))?;
            }
            Ok(pretty(&RenderOut {
                function: a.f.canonical(),
                window,
                iterations: a.iterations,
                escape_radius: a.escape_radius,
                width: a.width,
                height: a.height,
                escaped_pixels: raster.counts.iter().filter(|&&c| c > 0).count(),
                pixel_hash: raster.pixel_hash(),
                image: a.image.as_ref().map(|p| p.display().to_string()),
            }))
        }
    }
}
