//! Subcommand execution: builds optimizer specs from the parsed config,
//! runs the corresponding harness experiment, and writes the declared
//! outputs. Exit status 0 comes from here returning `Ok`; any runtime
//! failure (I/O, harness precondition) surfaces as a [`RunError`].

use std::fmt;
use std::fs;
use std::path::Path;

use optbench_core::harness::{
    oscillation_metric, records_to_csv, regret_defaults, render_line_chart,
    run_regret_experiment, run_synthetic_experiment, run_training_experiment, synthetic_defaults,
    training_defaults, RegretConfig, Series, Trajectory,
};
use optbench_core::objective::generate_two_moons;
use optbench_core::optim::{Algorithm, LrSchedule, OptimizerSpec};

use crate::config::{RunConfig, Subcommand};

/// Two-moons task shape used by the train subcommand.
const MOONS_SAMPLES: usize = 200;
const MOONS_NOISE: f64 = 0.2;
const MLP_HIDDEN: usize = 16;
const TRAIN_SIGMA: f64 = 0.0;

#[derive(Debug)]
pub struct RunError(pub String);

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for RunError {}

impl From<optbench_core::Error> for RunError {
    fn from(e: optbench_core::Error) -> Self {
        RunError(e.to_string())
    }
}

fn write_file(path: &str, contents: &str) -> Result<(), RunError> {
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| RunError(format!("cannot create directory for '{path}': {e}")))?;
        }
    }
    fs::write(path, contents).map_err(|e| RunError(format!("cannot write '{path}': {e}")))
}

/// Writes a trajectory in the canonical CSV schema.
pub fn write_trajectory_csv(traj: &Trajectory, path: &str) -> Result<(), RunError> {
    write_file(path, &records_to_csv(&traj.records))
}

/// Renders named series to a standalone SVG file.
pub fn render_svg_lines(series: &[Series], path: &str) -> Result<(), RunError> {
    let svg = render_line_chart(series)?;
    write_file(path, &svg)
}

/// Optimizer spec for one algorithm under the active subcommand's protocol,
/// with any explicit CLI overrides applied on top.
fn resolved_spec(config: &RunConfig, algorithm: Algorithm) -> OptimizerSpec {
    let mut spec = match config.subcommand {
        Subcommand::Synthetic | Subcommand::Compare => synthetic_defaults(algorithm),
        Subcommand::Train => training_defaults(algorithm),
        Subcommand::Regret => {
            if algorithm == Algorithm::Diffgrad {
                regret_defaults()
            } else {
                OptimizerSpec::new(algorithm).with_lr_schedule(LrSchedule::InvSqrtT)
            }
        }
    };
    if let Some(lr) = config.lr {
        spec.lr = lr;
    }
    if let Some(beta1) = config.beta1 {
        spec.beta1 = beta1;
    }
    if let Some(beta2) = config.beta2 {
        spec.beta2 = beta2;
    }
    if let Some(eps) = config.eps {
        spec.epsilon = eps;
    }
    if let Some(placement) = config.eps_placement {
        spec.eps_placement = placement;
    }
    // The friction variant is a diffgrad concept; other optimizers ignore it.
    if algorithm == Algorithm::Diffgrad {
        spec.dfc_variant = config.variant;
    }
    spec
}

fn trajectory_series(traj: &Trajectory) -> (Series, Series) {
    let loss: Vec<(f64, f64)> = traj
        .records
        .iter()
        .map(|r| (r.iteration as f64, r.loss))
        .collect();
    let theta: Vec<(f64, f64)> = traj
        .records
        .iter()
        .map(|r| (r.iteration as f64, r.theta))
        .collect();
    (Series::new("loss", loss), Series::new("theta", theta))
}

fn run_synthetic(config: &RunConfig) -> Result<(), RunError> {
    let algorithm = config.optimizers[0];
    let spec = resolved_spec(config, algorithm);
    let traj = run_synthetic_experiment(config.function, &spec, config.theta0, config.iters)?;
    if let Some(path) = &config.out {
        write_trajectory_csv(&traj, path)?;
    }
    if let Some(path) = &config.svg {
        let (loss, theta) = trajectory_series(&traj);
        render_svg_lines(&[loss, theta], path)?;
    }
    println!(
        "synthetic {} {}: final_loss={} final_theta={}",
        config.function.name(),
        algorithm.name(),
        traj.final_loss().unwrap(),
        traj.final_theta().unwrap()
    );
    Ok(())
}

fn run_train(config: &RunConfig) -> Result<(), RunError> {
    let algorithm = config.optimizers[0];
    let spec = resolved_spec(config, algorithm);
    let data = generate_two_moons(MOONS_SAMPLES, MOONS_NOISE, config.seed)?;
    let (traj, accuracy) = run_training_experiment(
        &data,
        MLP_HIDDEN,
        &spec,
        config.epochs,
        config.batch,
        TRAIN_SIGMA,
        config.seed,
    )?;
    if let Some(path) = &config.out {
        write_trajectory_csv(&traj, path)?;
    }
    if let Some(path) = &config.svg {
        let (loss, _) = trajectory_series(&traj);
        render_svg_lines(&[loss], path)?;
    }
    println!(
        "train {} epochs={} batch={} seed={}: final_accuracy={}",
        algorithm.name(),
        config.epochs,
        config.batch,
        config.seed,
        accuracy
    );
    Ok(())
}

fn run_regret(config: &RunConfig) -> Result<(), RunError> {
    let algorithm = config.optimizers[0];
    let regret_config = RegretConfig {
        iters: config.iters,
        seed: config.seed,
        spec: resolved_spec(config, algorithm),
        theta0: config.theta0,
        ..RegretConfig::default()
    };
    let outcome = run_regret_experiment(&regret_config)?;
    let report = &outcome.report;
    if let Some(path) = &config.out {
        let mut csv = String::from("iteration,regret,avg_regret\n");
        for (i, r) in report.regret_per_t.iter().enumerate() {
            let t = i + 1;
            csv.push_str(&format!("{t},{r},{}\n", r / t as f64));
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = &config.svg {
        let avg: Vec<(f64, f64)> = report
            .regret_per_t
            .iter()
            .enumerate()
            .map(|(i, r)| ((i + 1) as f64, r / (i + 1) as f64))
            .collect();
        render_svg_lines(&[Series::new("avg_regret", avg)], path)?;
    }
    println!(
        "regret {} T={} seed={}: theta_star={} R(T)={} R(T)/T={}",
        algorithm.name(),
        config.iters,
        config.seed,
        report.theta_star[0],
        report.total_regret(),
        report.total_regret() / config.iters as f64
    );
    match report.bound_value {
        Some(bound) => println!("regret bound: {bound} (holds: {})", report.total_regret() <= bound),
        None => println!("regret bound: not applicable"),
    }
    Ok(())
}

struct CompareRow {
    algorithm: Algorithm,
    final_loss: f64,
    final_theta: f64,
    oscillation: f64,
    loss_series: Series,
}

fn run_compare(config: &RunConfig) -> Result<(), RunError> {
    let window = config.iters.min(50);
    // One experiment per optimizer; each owns its output file, the summary
    // is assembled after all of them finish.
    let mut results: Vec<Option<Result<CompareRow, RunError>>> =
        (0..config.optimizers.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for &algorithm in &config.optimizers {
            let spec = resolved_spec(config, algorithm);
            handles.push(scope.spawn(move || -> Result<CompareRow, RunError> {
                let traj =
                    run_synthetic_experiment(config.function, &spec, config.theta0, config.iters)?;
                if let Some(dir) = &config.out {
                    let path = Path::new(dir).join(format!("{}.csv", algorithm.name()));
                    write_trajectory_csv(&traj, path.to_str().unwrap())?;
                }
                let oscillation = oscillation_metric(&traj, window)?;
                let (loss, _) = trajectory_series(&traj);
                Ok(CompareRow {
                    algorithm,
                    final_loss: traj.final_loss().unwrap(),
                    final_theta: traj.final_theta().unwrap(),
                    oscillation,
                    loss_series: Series::new(algorithm.name(), loss.points),
                })
            }));
        }
        for (slot, handle) in results.iter_mut().zip(handles) {
            *slot = Some(handle.join().expect("compare worker panicked"));
        }
    });

    let mut rows = Vec::with_capacity(results.len());
    for slot in results {
        rows.push(slot.expect("missing compare result")?);
    }

    if let Some(path) = &config.summary {
        let mut csv = String::from("optimizer,final_loss,final_theta,oscillation\n");
        for row in &rows {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                row.algorithm.name(),
                row.final_loss,
                row.final_theta,
                row.oscillation
            ));
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = &config.svg {
        let series: Vec<Series> = rows.iter().map(|r| r.loss_series.clone()).collect();
        render_svg_lines(&series, path)?;
    }
    for row in &rows {
        println!(
            "compare {} {}: final_loss={} final_theta={} oscillation={}",
            config.function.name(),
            row.algorithm.name(),
            row.final_loss,
            row.final_theta,
            row.oscillation
        );
    }
    Ok(())
}

/// Runs the configured subcommand to completion.
pub fn dispatch(config: &RunConfig) -> Result<(), RunError> {
    match config.subcommand {
        Subcommand::Synthetic => run_synthetic(config),
        Subcommand::Train => run_train(config),
        Subcommand::Regret => run_regret(config),
        Subcommand::Compare => run_compare(config),
    }
}
