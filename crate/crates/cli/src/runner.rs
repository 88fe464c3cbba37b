//! The `run` subcommand: integrate one scenario and emit its time series.

use std::sync::Arc;

use lambdasim_core::basis::{Representation, SectorBasis};
use lambdasim_core::lindblad::{
    evolve, max_stable_step, DensityMatrix, TrackedState, Trajectory,
};
use lambdasim_core::operators::{hamiltonian, jump_channels};

use crate::config::ScenarioConfig;
use crate::output::{fmt, write_output};
use crate::states::build_state;
use crate::CliError;

/// Largest tolerated trace deviation in an emitted record.
pub const TRACE_BOUND: f64 = 1e-8;
/// Most negative tolerated density-matrix eigenvalue in an emitted record.
pub const EIGENVALUE_FLOOR: f64 = -1e-8;

/// Builds the scenario's operators and integrates it.
pub fn integrate(cfg: &ScenarioConfig) -> Result<(Arc<SectorBasis>, Trajectory), CliError> {
    let params = &cfg.params;
    let as_config = |e: lambdasim_core::Error| CliError::config(e.to_string());

    let sym = Arc::new(SectorBasis::symmetric(params.n, params.p).map_err(as_config)?);
    let basis = match cfg.representation {
        Representation::Symmetric => sym.clone(),
        Representation::Full => Arc::new(SectorBasis::full(params.n, params.p).map_err(as_config)?),
    };
    let h = hamiltonian(params, &basis).map_err(as_config)?;
    let channels = jump_channels(params, &basis).map_err(as_config)?;

    let v0 = build_state(&cfg.initial_state, params, &sym, &basis)?;
    let rho0 = DensityMatrix::pure(&v0, &basis).map_err(as_config)?;
    let tracked: Vec<TrackedState> = cfg
        .populations
        .iter()
        .map(|ps| {
            build_state(&ps.spec, params, &sym, &basis).map(|vector| TrackedState {
                name: ps.name.clone(),
                vector,
            })
        })
        .collect::<Result<_, _>>()?;

    let dt = cfg.step();
    let guard = max_stable_step(params);
    if dt > guard * (1.0 + 1e-12) {
        return Err(CliError::config(format!(
            "dt = {dt} exceeds the stability guard {guard:.6e} for these parameters; \
             lower dt or drop the key to derive it automatically"
        )));
    }

    let trajectory = evolve(
        params,
        &rho0,
        &h,
        &channels,
        cfg.t_max,
        dt,
        cfg.record_every,
        &tracked,
    )
    .map_err(|e| CliError::numerical(format!("integration aborted: {e}")))?;
    Ok((basis, trajectory))
}

/// Refuses to emit records from a numerically corrupted evolution.  The
/// comparisons are written so that NaN in either diagnostic also fails.
pub fn check_records(traj: &Trajectory) -> Result<(), CliError> {
    for (i, rec) in traj.records.iter().enumerate() {
        let ok = rec.trace_deviation <= TRACE_BOUND && rec.min_eigenvalue >= EIGENVALUE_FLOOR;
        if !ok {
            return Err(CliError::numerical(format!(
                "state integrity violated at t = {}: trace deviation {:e}, \
                 smallest eigenvalue {:e}",
                traj.times[i], rec.trace_deviation, rec.min_eigenvalue
            )));
        }
    }
    Ok(())
}

/// Renders the recorded trajectory as CSV.
pub fn render_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t_g,E_N,purity,trace_dev,min_eig");
    for name in &traj.population_names {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for (t, rec) in traj.times.iter().zip(traj.records.iter()) {
        s.push_str(&fmt(*t));
        for value in [
            rec.log_negativity,
            rec.purity,
            rec.trace_deviation,
            rec.min_eigenvalue,
        ] {
            s.push(',');
            s.push_str(&fmt(value));
        }
        for value in &rec.populations {
            s.push(',');
            s.push_str(&fmt(*value));
        }
        s.push('\n');
    }
    s
}

pub fn cmd_run(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let (_, trajectory) = integrate(cfg)?;
    check_records(&trajectory)?;
    write_output(cfg.output_path.as_deref(), &render_csv(&trajectory))
}
