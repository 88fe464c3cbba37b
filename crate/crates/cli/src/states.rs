//! Named states for initial conditions and population tracking.
//!
//! Scenario files refer to states by short names:
//!
//! * `vacuum` — everything in the lowest level, no photons;
//! * `zp0` / `zp1` — the first and second vectors of the zero-energy basis
//!   (zp0 is the master dark state), optionally suffixed `@p` to pick a
//!   sector other than the configured one, e.g. `zp1@3`;
//! * `sc:k0.kp.km` — the normal-mode eigenstate with the given occupation of
//!   the dark, upper and lower collective modes, e.g. `sc:1.1.1`.
//!
//! Zero-energy labels always refer to the zero-detuning spectrum: a detuned
//! scenario starting from `zp1` prepares the state the undetuned Hamiltonian
//! protects and then evolves it under the detuned one.

use std::sync::Arc;

use lambdasim_core::basis::{embed_symmetric, Representation, SectorBasis, SymLabel};
use lambdasim_core::operators::ModelParams;
use lambdasim_core::spectral::{
    master_dark_state, semiclassical_eigenstate, zero_energy_basis, SemiclassicalLabel,
};
use lambdasim_core::C64;

use crate::CliError;

/// A state name resolved to its structural meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    Vacuum,
    /// `index`-th vector of the zero-energy basis of sector `p` (or the
    /// configured sector when `None`).  Index 0 is the master dark state.
    ZeroEnergy { index: usize, p: Option<usize> },
    Semiclassical(SemiclassicalLabel),
}

/// A tracked population: the original name (used as the CSV column header)
/// plus the parsed state.
#[derive(Debug, Clone)]
pub struct PopulationSpec {
    pub name: String,
    pub spec: StateSpec,
}

/// Parses a state name (`vacuum`, `zp0`, `zp1@3`, `sc:1.1.1`, ...).
pub fn parse_state(s: &str) -> Result<StateSpec, String> {
    let s = s.trim();
    if s == "vacuum" {
        return Ok(StateSpec::Vacuum);
    }
    if let Some(rest) = s.strip_prefix("sc:") {
        let parts: Vec<&str> = rest.split('.').collect();
        if parts.len() != 3 {
            return Err(format!(
                "semiclassical state must be sc:k0.kp.km with three occupations, got `{s}`"
            ));
        }
        let occ = |t: &str| -> Result<usize, String> {
            t.parse::<usize>()
                .map_err(|_| format!("`{t}` is not a non-negative integer in `{s}`"))
        };
        return Ok(StateSpec::Semiclassical(SemiclassicalLabel {
            k0: occ(parts[0])?,
            kp: occ(parts[1])?,
            km: occ(parts[2])?,
        }));
    }
    let (head, sector) = match s.split_once('@') {
        Some((h, q)) => {
            let q = q
                .parse::<usize>()
                .map_err(|_| format!("`{q}` is not a sector number in `{s}`"))?;
            (h, Some(q))
        }
        None => (s, None),
    };
    match head {
        "zp0" => Ok(StateSpec::ZeroEnergy { index: 0, p: sector }),
        "zp1" => Ok(StateSpec::ZeroEnergy { index: 1, p: sector }),
        other => Err(format!(
            "unknown state `{other}`; expected vacuum, zp0[@p], zp1[@p], or sc:k0.kp.km"
        )),
    }
}

/// Parses a population entry, keeping the original text as the column name.
pub fn parse_population(s: &str) -> Result<PopulationSpec, String> {
    let spec = parse_state(s)?;
    Ok(PopulationSpec {
        name: s.trim().to_string(),
        spec,
    })
}

/// Builds the state vector over `target`.  Structured states are constructed
/// over the symmetric basis `sym` and embedded when the target is the full
/// tensor-product basis.
pub fn build_state(
    spec: &StateSpec,
    params: &ModelParams,
    sym: &Arc<SectorBasis>,
    target: &Arc<SectorBasis>,
) -> Result<Vec<C64>, CliError> {
    let on_sym: Vec<C64> = match spec {
        StateSpec::Vacuum => {
            let mut v = vec![C64::new(0.0, 0.0); sym.len()];
            let i = sym
                .index_of_sym(&SymLabel { n1: 0, n2: 0, nc: 0 })
                .expect("every sector basis contains the vacuum");
            v[i] = C64::new(1.0, 0.0);
            v
        }
        StateSpec::ZeroEnergy { index, p } => {
            let sector = p.unwrap_or(params.p);
            let mut pq = params.clone();
            pq.p = sector;
            if *index == 0 {
                master_dark_state(&pq, sym)
                    .map_err(|e| CliError::config(format!("cannot build zp0@{sector}: {e}")))?
                    .vector
            } else {
                // The zero-energy basis is defined by the undetuned Hamiltonian.
                pq.delta = 0.0;
                let vectors = zero_energy_basis(&pq, sym, sector)
                    .map_err(|e| CliError::config(format!("cannot build zp1@{sector}: {e}")))?;
                vectors.into_iter().nth(*index).ok_or_else(|| {
                    CliError::config(format!(
                        "zp{index}@{sector} does not exist: the zero-energy subspace of \
                         sector {sector} has dimension {}",
                        sector / 2 + 1
                    ))
                })?
            }
        }
        StateSpec::Semiclassical(label) => semiclassical_eigenstate(*label, params, sym)
            .map_err(|e| CliError::config(format!("cannot build state {label}: {e}")))?,
    };
    match target.representation() {
        Representation::Symmetric => Ok(on_sym),
        Representation::Full => embed_symmetric(&on_sym, sym, target)
            .map_err(|e| CliError::config(format!("cannot embed state: {e}"))),
    }
}

/// Canonical display name for a state, used in reports.
pub fn state_name(spec: &StateSpec) -> String {
    match spec {
        StateSpec::Vacuum => "vacuum".into(),
        StateSpec::ZeroEnergy { index, p: None } => format!("zp{index}"),
        StateSpec::ZeroEnergy { index, p: Some(q) } => format!("zp{index}@{q}"),
        StateSpec::Semiclassical(l) => format!("sc:{}.{}.{}", l.k0, l.kp, l.km),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_state_form() {
        assert_eq!(parse_state("vacuum").unwrap(), StateSpec::Vacuum);
        assert_eq!(
            parse_state("zp0").unwrap(),
            StateSpec::ZeroEnergy { index: 0, p: None }
        );
        assert_eq!(
            parse_state("zp1@3").unwrap(),
            StateSpec::ZeroEnergy { index: 1, p: Some(3) }
        );
        assert_eq!(
            parse_state(" sc:1.1.1 ").unwrap(),
            StateSpec::Semiclassical(SemiclassicalLabel { k0: 1, kp: 1, km: 1 })
        );
        assert!(parse_state("zp2x").is_err());
        assert!(parse_state("sc:1.1").is_err());
        assert!(parse_state("zp1@x").is_err());
    }

    #[test]
    fn builds_normalized_vectors_in_both_representations() {
        let mut params = ModelParams::new(3, 2);
        params.omega = 0.3;
        let sym = Arc::new(SectorBasis::symmetric(3, 2).unwrap());
        let full = Arc::new(SectorBasis::full(3, 2).unwrap());
        for name in ["vacuum", "zp0", "zp1@2", "sc:0.1.1"] {
            let spec = parse_state(name).unwrap();
            for target in [&sym, &full] {
                let v = build_state(&spec, &params, &sym, target).unwrap();
                assert_eq!(v.len(), target.len());
                let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-10, "{name}: norm {norm}");
            }
        }
    }

    #[test]
    fn zp1_outside_its_sector_is_a_config_error() {
        let params = ModelParams::new(3, 1);
        let sym = Arc::new(SectorBasis::symmetric(3, 1).unwrap());
        let spec = parse_state("zp1").unwrap();
        let err = build_state(&spec, &params, &sym, &sym).unwrap_err();
        assert_eq!(err.code, 1);
        assert!(err.message.contains("dimension"));
    }

    #[test]
    fn zero_energy_states_ignore_detuning() {
        let mut params = ModelParams::new(4, 3);
        params.omega = 0.15;
        let sym = Arc::new(SectorBasis::symmetric(4, 3).unwrap());
        let spec = parse_state("zp1").unwrap();
        let reference = build_state(&spec, &params, &sym, &sym).unwrap();
        params.delta = 0.7;
        let detuned = build_state(&spec, &params, &sym, &sym).unwrap();
        for (a, b) in reference.iter().zip(detuned.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
