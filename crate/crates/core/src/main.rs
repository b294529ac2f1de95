use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ridge_recovery::adversary::{
    det_lower_bound_experiment, ran_lower_bound_experiment, RandomizedConfig, RecoverAlgorithm, SamplingAlgorithm,
    SeededRecoverAlgorithm, UniformRandomAlgorithm, ZeroModelAlgorithm,
};
use ridge_recovery::harness::sweep::write_csv;
use ridge_recovery::harness::{
    calibrate_spline_constant, calibration_profiles, draw_instance, run_sweep, summarize, sup_error_estimate,
    AlgorithmKind, EstimateOptions, ExperimentConfig, HarnessError, LowerBoundKind,
};
use ridge_recovery::recovery::{recover, VertexMode};
use ridge_recovery::CountingOracle;

#[derive(Parser)]
#[command(name = "ridge-recovery", version, about = "Ridge function recovery and lower-bound experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configuration's seeds with a single seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the vertex mode.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<VertexMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Recover one instance and report the model and its error.
    Recover(Common),
    /// Error-versus-budget sweep written as CSV.
    Sweep(Common),
    /// Deterministic or randomized lower-bound experiment.
    LowerBound(Common),
    /// Calibrate the quasi-interpolation constant.
    Calibrate(Common),
}

fn parse_mode(s: &str) -> Result<VertexMode, String> {
    s.parse()
}

fn load(common: &Common) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seeds = vec![seed];
    }
    if let Some(mode) = common.mode {
        cfg.mode = mode;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&PathBuf>, value: &Value) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Io(e.to_string()))?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| HarnessError::Io(e.to_string())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, HarnessError> {
    serde_json::to_value(v).map_err(|e| HarnessError::Io(e.to_string()))
}

fn cmd_recover(common: &Common) -> Result<(), HarnessError> {
    let cfg = load(common)?.with_constants();
    let seed = cfg.seeds[0];
    let truth = draw_instance(&cfg.profile_family, cfg.r, cfg.d, cfg.class(), seed)?;
    let params = cfg.params(seed)?;
    let mut oracle = CountingOracle::unlimited(&truth);
    let res = recover(&mut oracle, &params)?;
    let opts = EstimateOptions { resolution: cfg.error_grid_resolution, random_samples: cfg.random_samples, seed };
    let err = sup_error_estimate(&truth, &res.model, &opts)?;
    let model = match &res.model {
        ridge_recovery::Model::Constant { value } => json!({ "kind": "constant", "value": value }),
        ridge_recovery::Model::Ridge { direction, profile } => {
            json!({ "kind": "ridge", "direction": direction, "knots": 2 * profile.n + 1, "degree": profile.degree })
        }
    };
    emit(
        common.out.as_ref(),
        &json!({
            "seed": seed,
            "params": to_value(&params)?,
            "scenario": to_value(&res.scenario)?,
            "samples_used": res.samples_used,
            "diagnostics": to_value(&res.diagnostics)?,
            "model": model,
            "true_direction": truth.direction(),
            "error": err.value,
            "error_method": to_value(&err.method)?,
            "witness": err.certificate_points.first(),
        }),
    )
}

fn cmd_sweep(common: &Common) -> Result<(), HarnessError> {
    let cfg = load(common)?;
    if cfg.budget_grid.is_empty() {
        return Err(HarnessError::Config("budget_grid is empty".into()));
    }
    let rows = run_sweep(&cfg)?;
    let out = common.out.clone().or_else(|| cfg.output_path.clone());
    match &out {
        Some(path) => write_csv(path, &rows)?,
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for row in &rows {
                w.serialize(row).map_err(|e| HarnessError::Io(e.to_string()))?;
            }
            w.flush().map_err(|e| HarnessError::Io(e.to_string()))?;
        }
    }
    if out.is_some() {
        emit(None, &to_value(&summarize(&rows, cfg.r, cfg.p))?)?;
    }
    Ok(())
}

fn cmd_lower_bound(common: &Common) -> Result<(), HarnessError> {
    let cfg = load(common)?.with_constants();
    let lb = cfg
        .lower_bound
        .clone()
        .ok_or_else(|| HarnessError::Config("missing `lower_bound` section".into()))?;
    let seed = cfg.seeds[0];
    let params = cfg.params(seed)?;
    let alg: Box<dyn SamplingAlgorithm> = match (lb.algorithm, lb.kind) {
        (AlgorithmKind::ZeroModel, _) => Box::new(ZeroModelAlgorithm { queries: lb.n, point_seed: seed }),
        (AlgorithmKind::Recover, LowerBoundKind::Deterministic) => Box::new(RecoverAlgorithm { params }),
        (AlgorithmKind::Recover, LowerBoundKind::Randomized) => Box::new(SeededRecoverAlgorithm { params }),
        (AlgorithmKind::UniformRandom, _) => Box::new(UniformRandomAlgorithm { queries: lb.n }),
    };
    let value = match lb.kind {
        LowerBoundKind::Deterministic => to_value(&det_lower_bound_experiment(alg.as_ref(), lb.n, cfg.d, cfg.r, cfg.p, seed)?)?,
        LowerBoundKind::Randomized => {
            let rc = RandomizedConfig {
                num_seeds: lb.num_seeds.unwrap_or(100),
                delta: cfg.delta,
                base_seed: seed,
                sparsity: lb.sparsity,
                ..Default::default()
            };
            to_value(&ran_lower_bound_experiment(alg.as_ref(), lb.n, cfg.d, cfg.r, cfg.p, &rc)?)?
        }
    };
    emit(common.out.as_ref(), &value)
}

fn cmd_calibrate(common: &Common) -> Result<(), HarnessError> {
    let mut cfg = load(common)?;
    let c = calibrate_spline_constant(cfg.r0(), &calibration_profiles(cfg.r), &[8, 16, 32, 64])?;
    cfg.c_r_spline = Some(c);
    if let Some(path) = &common.out {
        emit(Some(path), &to_value(&cfg)?)?;
    }
    emit(None, &json!({ "c_r_spline": c, "r": cfg.r, "r0": cfg.r0() }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Recover(c) => cmd_recover(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::LowerBound(c) => cmd_lower_bound(c),
        Command::Calibrate(c) => cmd_calibrate(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.category(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
