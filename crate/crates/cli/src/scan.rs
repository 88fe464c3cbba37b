//! The `scan-ratio` subcommand: revival height across a grid of coupling
//! ratios, alongside the closed-form quasi-dark estimates.
//!
//! The scanned ratio is Ω/(g√n) = 1/tanθ.  For each grid point the scenario
//! is re-run with Ω adjusted accordingly and the revival height of the
//! logarithmic negativity is measured; the analytic columns come from the
//! closed-form purification estimator evaluated at a fixed reference κt.

use std::sync::Mutex;

use lambdasim_core::semiclassical::ratio_scan_estimate;

use crate::config::ScenarioConfig;
use crate::output::{fmt, write_output};
use crate::revival::revival_height;
use crate::runner::{check_records, integrate};
use crate::CliError;

/// Reference point κt at which the quasi-dark weight is evaluated for the
/// analytic columns.
pub const KT_REF: f64 = 10.0;

/// Expands `ratio_min..=ratio_max` with step `ratio_step` into a grid,
/// rejecting grids that are too small to locate a maximum.
pub fn ratio_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || min <= 0.0 || step <= 0.0 {
        return Err(CliError::config(format!(
            "ratio grid needs ratio_min > 0 and ratio_step > 0, got \
             ratio_min = {min}, ratio_max = {max}, ratio_step = {step}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as i64 + 1;
    if count < 3 {
        return Err(CliError::config(format!(
            "ratio grid has {} point(s); at least 3 are required",
            count.max(0)
        )));
    }
    Ok((0..count).map(|k| min + k as f64 * step).collect())
}

fn height_for_ratio(cfg: &ScenarioConfig, ratio: f64) -> Result<f64, CliError> {
    let mut sub = cfg.clone();
    sub.params.omega = sub.params.g * (sub.params.n as f64).sqrt() * ratio;
    let (_, traj) = integrate(&sub)?;
    check_records(&traj)?;
    Ok(revival_height(&traj.log_negativity_series()))
}

/// Runs the grid across `threads` workers; results are assembled in grid
/// order no matter which worker finishes first.
pub fn scan_heights(
    cfg: &ScenarioConfig,
    ratios: &[f64],
    threads: usize,
) -> Result<Vec<f64>, CliError> {
    let threads = threads.max(1).min(ratios.len().max(1));
    let slots: Mutex<Vec<Option<Result<f64, CliError>>>> =
        Mutex::new(vec![None; ratios.len()]);
    std::thread::scope(|scope| {
        for worker in 0..threads {
            let slots = &slots;
            scope.spawn(move || {
                let mut idx = worker;
                while idx < ratios.len() {
                    let result = height_for_ratio(cfg, ratios[idx]);
                    slots.lock().unwrap()[idx] = Some(result);
                    idx += threads;
                }
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every grid point was scheduled"))
        .collect()
}

pub fn cmd_scan(cfg: &ScenarioConfig, threads: usize) -> Result<(), CliError> {
    let params = &cfg.params;
    if params.kappa <= 0.0 {
        return Err(CliError::config(
            "scan-ratio studies cavity decay; kappa must be positive".into(),
        ));
    }
    if params.gamma0 > 0.0 || params.gamma2 > 0.0 || params.gamma10 > 0.0 || params.gamma12 > 0.0
    {
        return Err(CliError::config(
            "scan-ratio isolates cavity decay; all qutrit decay rates must be zero".into(),
        ));
    }
    let ratios = ratio_grid(cfg.ratio_min, cfg.ratio_max, cfg.ratio_step)?;
    let heights = scan_heights(cfg, &ratios, threads)?;

    let thetas: Vec<f64> = ratios.iter().map(|r| (1.0 / r).atan()).collect();
    let estimates = ratio_scan_estimate(params, &thetas, KT_REF)
        .map_err(|e| CliError::numerical(format!("analytic estimate failed: {e}")))?;

    let mut csv = String::from("ratio,revival_height,estimate,p100_ref\n");
    for ((ratio, height), (estimate, p100)) in
        ratios.iter().zip(heights.iter()).zip(estimates.iter())
    {
        csv.push_str(&fmt(*ratio));
        for value in [*height, *estimate, *p100] {
            csv.push(',');
            csv.push_str(&fmt(value));
        }
        csv.push('\n');
    }
    write_output(cfg.output_path.as_deref(), &csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_file, resolve};

    #[test]
    fn grid_expansion_counts_endpoints() {
        let g = ratio_grid(0.01, 0.20, 0.01).unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 0.01).abs() < 1e-12);
        assert!((g[19] - 0.20).abs() < 1e-12);
    }

    #[test]
    fn undersized_grids_are_rejected() {
        assert_eq!(ratio_grid(0.1, 0.1, 0.01).unwrap_err().code, 1);
        assert_eq!(ratio_grid(0.1, 0.11, 0.01).unwrap_err().code, 1);
        assert!(ratio_grid(0.1, 0.12, 0.01).is_ok());
        assert_eq!(ratio_grid(0.0, 0.2, 0.01).unwrap_err().code, 1);
        assert_eq!(ratio_grid(0.1, 0.2, 0.0).unwrap_err().code, 1);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let cfg = resolve(
            &parse_file(
                "n = 2\np = 2\nkappa = 0.2\ninitial_state = sc:0.1.1\n\
                 t_max = 5.0\ndt = 0.01\nrecord_every = 20\n",
                "t",
            )
            .unwrap(),
        )
        .unwrap();
        let ratios = [0.05, 0.10, 0.15, 0.20];
        let serial = scan_heights(&cfg, &ratios, 1).unwrap();
        let parallel = scan_heights(&cfg, &ratios, 3).unwrap();
        assert_eq!(serial.len(), 4);
        for (a, b) in serial.iter().zip(parallel.iter()) {
            assert_eq!(a, b, "thread fan-out must not change the assembled grid");
        }
    }

    #[test]
    fn qutrit_decay_is_rejected() {
        let cfg = resolve(
            &parse_file("n = 2\np = 2\nkappa = 0.1\ngamma0 = 0.1\n", "t").unwrap(),
        )
        .unwrap();
        let err = cmd_scan(&cfg, 1).unwrap_err();
        assert_eq!(err.code, 1);
        assert!(err.message.contains("qutrit decay"));

        let cfg = resolve(&parse_file("n = 2\np = 2\n", "t").unwrap()).unwrap();
        let err = cmd_scan(&cfg, 1).unwrap_err();
        assert!(err.message.contains("kappa"));
    }
}
