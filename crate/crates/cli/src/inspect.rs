//! The `inspect-dark` subcommand: a diagnostic dump of the master dark state
//! of the configured sector.
//!
//! The report lists the state's amplitudes over the symmetric basis, the
//! residual ‖Hv‖ under the configured (possibly detuned) Hamiltonian, the
//! Schmidt spectrum and logarithmic negativity across the qutrit–boson
//! split, and the dimension of the zero-energy subspace of the sector.

use std::sync::Arc;

use lambdasim_core::basis::SectorBasis;
use lambdasim_core::linalg::CMat;
use lambdasim_core::measures::{log_negativity, schmidt_coefficients};
use lambdasim_core::operators::hamiltonian;
use lambdasim_core::spectral::{master_dark_state, zero_energy_basis};

use crate::config::ScenarioConfig;
use crate::output::{fmt, write_output};
use crate::CliError;

pub fn cmd_inspect(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let report = render_report(cfg)?;
    write_output(cfg.output_path.as_deref(), &report)
}

/// Builds the report text; split out so tests can assert on the content.
pub fn render_report(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let params = &cfg.params;
    let as_config = |e: lambdasim_core::Error| CliError::config(e.to_string());

    let sym = Arc::new(SectorBasis::symmetric(params.n, params.p).map_err(as_config)?);
    let dark = master_dark_state(params, &sym).map_err(as_config)?;
    let labels = sym.sym_labels().expect("symmetric basis");

    let h = hamiltonian(params, &sym).map_err(as_config)?;
    let hv = h.apply(&dark.vector);
    let residual: f64 = hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let rho = CMat::outer(&dark.vector, &dark.vector);
    let en = log_negativity(&rho, &sym).map_err(as_config)?;
    let schmidt = schmidt_coefficients(&dark.vector, &sym).map_err(as_config)?;

    // The zero-energy subspace is defined by the undetuned Hamiltonian.
    let mut undetuned = params.clone();
    undetuned.delta = 0.0;
    let zero_dim = zero_energy_basis(&undetuned, &sym, params.p)
        .map_err(as_config)?
        .len();

    let mut report = format!(
        "# master dark state: n = {}, p = {}, omega = {}, g = {}, delta = {}\n",
        params.n,
        params.p,
        fmt(params.omega),
        fmt(params.g),
        fmt(params.delta),
    );
    for (i, z) in dark.vector.iter().enumerate() {
        if z.norm() > 1e-14 {
            let l = labels[i];
            report.push_str(&format!(
                "amplitude,{}.{}.{},{},{}\n",
                l.n1,
                l.n2,
                l.nc,
                fmt(z.re),
                fmt(z.im)
            ));
        }
    }
    report.push_str(&format!("hamiltonian_residual,{}\n", fmt(residual)));
    report.push_str(&format!("log_negativity,{}\n", fmt(en)));
    for (k, c) in schmidt.iter().enumerate() {
        report.push_str(&format!("schmidt,{k},{}\n", fmt(*c)));
    }
    report.push_str(&format!("zero_energy_dimension,{zero_dim}\n"));
    Ok(report)
}
