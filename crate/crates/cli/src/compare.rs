//! The `compare` subcommand: exact Lindblad evolution against the
//! semiclassical rate model, on the same time grid.
//!
//! Two rate models run side by side: the five-state dominant-path model
//! supplies population counterparts for the tracked normal-mode states, and
//! the full three-excitation ladder supplies a reconstructed density matrix
//! whose logarithmic negativity is compared against the exact one.

use std::sync::Arc;

use lambdasim_core::basis::{Representation, SectorBasis};
use lambdasim_core::measures::log_negativity;
use lambdasim_core::semiclassical::{
    build_rate_model, dominant_path_states, ladder_labels, reconstruct_density, solve_rates,
};
use lambdasim_core::spectral::SemiclassicalLabel;

use crate::config::ScenarioConfig;
use crate::output::{fmt, write_output};
use crate::runner::{check_records, integrate};
use crate::states::{PopulationSpec, StateSpec};
use crate::CliError;

fn column_name(label: SemiclassicalLabel) -> String {
    format!("sc:{}.{}.{}", label.k0, label.kp, label.km)
}

pub fn cmd_compare(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let params = &cfg.params;
    let as_config = |e: lambdasim_core::Error| CliError::config(e.to_string());

    if cfg.representation != Representation::Symmetric {
        return Err(CliError::config(
            "compare uses the permutation-symmetric representation".into(),
        ));
    }
    let initial = match &cfg.initial_state {
        StateSpec::Semiclassical(label) => *label,
        other => {
            return Err(CliError::config(format!(
                "compare needs a normal-mode initial state (sc:k0.kp.km), got `{}`",
                crate::states::state_name(other)
            )))
        }
    };
    if params.n < 5 * params.p {
        eprintln!(
            "warning: n = {} is small for the rate model; n >= {} recommended",
            params.n,
            5 * params.p
        );
    }

    let dominant = dominant_path_states(params.p).map_err(as_config)?;

    // Exact side: track the dominant-path populations during the evolution.
    let mut sub = cfg.clone();
    sub.populations = dominant
        .iter()
        .map(|&label| PopulationSpec {
            name: column_name(label),
            spec: StateSpec::Semiclassical(label),
        })
        .collect();
    let (_, traj) = integrate(&sub)?;
    check_records(&traj)?;

    // Rate-model side, on exactly the recorded grid.
    let seed = |labels: &[SemiclassicalLabel]| -> Result<Vec<f64>, CliError> {
        let i = labels.iter().position(|&l| l == initial).ok_or_else(|| {
            CliError::config(format!(
                "initial state {} is outside the rate model's ladder",
                column_name(initial)
            ))
        })?;
        let mut p0 = vec![0.0; labels.len()];
        p0[i] = 1.0;
        Ok(p0)
    };

    let dominant_model = build_rate_model(params, &dominant).map_err(as_config)?;
    let dominant_trace = solve_rates(&dominant_model, &seed(&dominant)?, &traj.times)
        .map_err(|e| CliError::numerical(format!("rate model failed: {e}")))?;

    let ladder = ladder_labels(params.p);
    let ladder_model = build_rate_model(params, &ladder).map_err(as_config)?;
    let ladder_trace = solve_rates(&ladder_model, &seed(&ladder)?, &traj.times)
        .map_err(|e| CliError::numerical(format!("rate model failed: {e}")))?;

    let sym = Arc::new(SectorBasis::symmetric(params.n, params.p).map_err(as_config)?);
    let mut csv = String::from("t_g");
    for label in &dominant {
        let name = column_name(*label);
        csv.push_str(&format!(",p_exact_{name},p_rate_{name}"));
    }
    csv.push_str(",en_exact,en_rate\n");

    for (k, (t, rec)) in traj.times.iter().zip(traj.records.iter()).enumerate() {
        csv.push_str(&fmt(*t));
        for (j, label) in dominant.iter().enumerate() {
            let rate_pop = dominant_trace
                .population(*label, k)
                .expect("solved on the same grid");
            csv.push(',');
            csv.push_str(&fmt(rec.populations[j]));
            csv.push(',');
            csv.push_str(&fmt(rate_pop));
        }
        let rho = reconstruct_density(&ladder_trace, params, &sym, *t)
            .map_err(|e| CliError::numerical(format!("reconstruction failed: {e}")))?;
        let en_rate = log_negativity(rho.matrix(), &sym)
            .map_err(|e| CliError::numerical(format!("reconstruction failed: {e}")))?;
        csv.push(',');
        csv.push_str(&fmt(rec.log_negativity));
        csv.push(',');
        csv.push_str(&fmt(en_rate));
        csv.push('\n');
    }
    write_output(cfg.output_path.as_deref(), &csv)
}
