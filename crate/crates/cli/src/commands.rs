use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use rotomo_core::basis::CoefficientTable;
use rotomo_core::rotor::io::{load_block, load_grid, save_block, save_grid};
use rotomo_core::rotor::{
    add_shot_noise, alignment_trace, make_test_state, simulate_pr,
    DensityBlock, MeasurementGrid,
};
use rotomo_core::tomography::{reconstruct_block_with, Reconstruction};

use crate::config::ExperimentConfig;
use crate::{CliError, CoeffsArgs, ReconstructArgs, RoundtripArgs, SimulateArgs};

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn simulate_config(cfg: &ExperimentConfig, block: &DensityBlock, seed: Option<u64>) -> Result<MeasurementGrid, CliError> {
    let spec = cfg.spec();
    let plan = cfg.plan(None);
    let grid = simulate_pr(block, &spec, &*plan.x_grid()?, &plan.times(&spec)?)?;
    Ok(match &cfg.noise {
        Some(n) => add_shot_noise(&grid, n.samples_per_time, seed.unwrap_or(n.seed))?,
        None => grid,
    })
}

pub fn simulate(args: &SimulateArgs) -> Result<u8, CliError> {
    let cfg = ExperimentConfig::load(&args.config)?;
    let spec = cfg.spec();
    let state_path = cfg.path(args.state.as_deref(), &cfg.paths.state, "state")?;
    let out = cfg.path(args.out.as_deref(), &cfg.paths.data, "out")?;
    let state = load_block(&state_path).map_err(CliError::core_at(&state_path))?;
    if (state.k(), state.m()) != (spec.k, spec.m) {
        return Err(CliError::Config(format!(
            "state has (k, m) = ({}, {}) but spec has ({}, {})",
            state.k(),
            state.m(),
            spec.k,
            spec.m
        )));
    }
    if state.j_max() > cfg.j_max {
        return Err(CliError::Config(format!(
            "state reaches J = {} beyond j_max = {}",
            state.j_max(),
            cfg.j_max
        )));
    }
    let block = state.with_j_max(cfg.j_max)?;
    let grid = simulate_config(&cfg, &block, args.seed)?;
    save_grid(&out, &grid).map_err(CliError::core_at(&out))?;
    if let Some(p) = &args.trace {
        let mut s = String::from("t,cos2\n");
        for (t, c) in alignment_trace(&grid) {
            let _ = writeln!(s, "{t:?},{c:?}");
        }
        write_file(p, &s)?;
    }
    println!("trace = {:.12}", block.trace());
    println!("period = {:?}", spec.window_period());
    println!("n_t = {} n_x = {} n_periods = {}", grid.n_t(), grid.n_x(), grid.times().n_periods());
    Ok(0)
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<u8, CliError> {
    let cfg = ExperimentConfig::load(&args.config)?;
    let spec = cfg.spec();
    let data = cfg.path(args.data.as_deref(), &cfg.paths.data, "data")?;
    let out = cfg.path(args.out.as_deref(), &cfg.paths.out, "out")?;
    if args.threshold.is_some() && args.state.is_none() {
        return Err(CliError::Usage("--threshold needs --state to compare against".into()));
    }
    let grid = load_grid(&data).map_err(CliError::core_at(&data))?;
    let opts = cfg.options(args.search_cap, args.psd);
    let Reconstruction { block, diagnostics } = reconstruct_block_with(&grid, &spec, cfg.j_max, &opts)?;
    save_block(&out, &block).map_err(CliError::core_at(&out))?;

    let mut report = diagnostics.report();
    let mut code = 0;
    let mut error = None;
    if let Some(p) = &args.state {
        let truth = load_block(p).map_err(CliError::core_at(p))?;
        let err = block.max_abs_diff(&truth);
        let _ = writeln!(report, "\nmax_abs_error={err:e}");
        if args.threshold.is_some_and(|t| !(err < t)) {
            code = 1;
        }
        error = Some(err);
    }
    match cfg.path(args.report.as_deref(), &cfg.paths.report, "report") {
        Ok(p) => {
            write_file(&p, &report)?;
            println!("residual = {:e}", diagnostics.residual);
            println!("flagged = {}", diagnostics.flagged().count());
            if let Some(e) = error {
                println!("max_abs_error = {e:e}");
            }
        }
        Err(_) => print!("{report}"),
    }
    Ok(code)
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("--j-range expects lo:hi or a single J, got {s:?}"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    if hi > 2 * rotomo_core::MAX_J {
        return Err(CliError::Usage(format!("--j-range upper bound {hi} exceeds {}", 2 * rotomo_core::MAX_J)));
    }
    Ok((lo, hi))
}

pub fn coeffs(args: &CoeffsArgs) -> Result<u8, CliError> {
    let (lo, hi) = parse_range(&args.j_range)?;
    let table = CoefficientTable::for_km(args.k, args.m);
    let mut s = format!("# k={} m={}\n# J dJ L value\n", args.k, args.m);
    for r in table.rows(lo, hi)? {
        if args.delta_j.is_some_and(|d| d != r.dj) || args.l.is_some_and(|l| l != r.l) {
            continue;
        }
        let _ = writeln!(s, "{} {} {} {:?}", r.j, r.dj, r.l, r.value);
    }
    match &args.out {
        Some(p) => write_file(p, &s)?,
        None => print!("{s}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct ElementMetric {
    j1: u32,
    j2: u32,
    true_re: f64,
    true_im: f64,
    est_re: f64,
    est_im: f64,
    abs_error: f64,
}

#[derive(Serialize)]
struct Metrics {
    kind: String,
    j_max: u32,
    seed: u64,
    n_t: usize,
    n_x: usize,
    n_periods: u32,
    max_error: f64,
    residual: f64,
    threshold: f64,
    passed: bool,
    flagged: usize,
    elements: Vec<ElementMetric>,
}

pub fn roundtrip(args: &RoundtripArgs) -> Result<u8, CliError> {
    let cfg = ExperimentConfig::load(&args.config)?;
    let spec = cfg.spec();
    let seed = args.seed.unwrap_or(cfg.state.seed);
    let threshold = args.threshold.unwrap_or(cfg.roundtrip.threshold);
    let truth = make_test_state(cfg.state_kind()?, spec.k, spec.m, cfg.j_max, seed, cfg.state.kick_strength)?;
    let grid = simulate_config(&cfg, &truth, None)?;
    let r = reconstruct_block_with(&grid, &spec, cfg.j_max, &cfg.options(None, false))?;
    let max_error = r.block.max_abs_diff(&truth);
    let passed = max_error < threshold;
    let mut elements = Vec::new();
    for j1 in truth.js() {
        for j2 in truth.js().filter(|&j2| j2 <= j1) {
            let (t, e) = (truth.get(j1, j2), r.block.get(j1, j2));
            elements.push(ElementMetric {
                j1,
                j2,
                true_re: t.re,
                true_im: t.im,
                est_re: e.re,
                est_im: e.im,
                abs_error: (t - e).norm(),
            });
        }
    }
    let metrics = Metrics {
        kind: spec.kind.to_string(),
        j_max: cfg.j_max,
        seed,
        n_t: grid.n_t(),
        n_x: grid.n_x(),
        n_periods: grid.times().n_periods(),
        max_error,
        residual: r.diagnostics.residual,
        threshold,
        passed,
        flagged: r.diagnostics.flagged().count(),
        elements,
    };
    if let Ok(p) = cfg.path(args.out.as_deref(), &cfg.paths.out, "out") {
        let text = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
        write_file(&p, &text)?;
    }
    println!("max_error = {max_error:e}");
    println!("residual = {:e}", r.diagnostics.residual);
    println!("threshold = {threshold:e}");
    println!("{}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { 0 } else { 1 })
}
