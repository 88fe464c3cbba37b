//! Master-equation integration: ρ̇ = −i[H,ρ] + Σ rate·(LρL† − ½{L†L,ρ}).
//!
//! The integrator is a deterministic fixed-step classical 4th-order scheme.
//! Matrices are small (all sector dimensions are desk-scale), so the density
//! matrix is dense and the right-hand side is applied operator-by-operator
//! with sparse jump operators — no superoperator is ever materialised.
//!
//! Two properties are treated as diagnostics, never corrected: the trace is
//! not renormalised (its drift measures integration quality), and Hermiticity
//! is restored each step by averaging with the adjoint (a projection that
//! removes the only non-physical direction roundoff can push into).

#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::linalg::{CMat, SpMat};
use crate::measures;
use crate::operators::{JumpChannel, ModelParams, Operator};
use crate::C64;
use alloc::sync::Arc;

/// A density matrix tied to the basis it is written in.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMat,
    basis: Arc<SectorBasis>,
}

fn bases_match(a: &SectorBasis, b: &SectorBasis) -> bool {
    a.representation() == b.representation() && a.n() == b.n() && a.p_max() == b.p_max()
}

impl DensityMatrix {
    /// Projector onto a normalised pure state.
    pub fn pure(v: &[C64], basis: &Arc<SectorBasis>) -> Result<Self> {
        if v.len() != basis.len() {
            return Err(Error::BasisMismatch {
                expected: format!("vector of length {}", basis.len()),
                found: format!("length {}", v.len()),
            });
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "pure state must be normalised, got norm {norm}"
            )));
        }
        Ok(DensityMatrix {
            matrix: CMat::outer(v, v),
            basis: Arc::clone(basis),
        })
    }

    /// Wrap an explicit matrix, enforcing the density-matrix invariants:
    /// unit trace to 1e-8, Hermiticity to 1e-10, positivity to -1e-8.
    pub fn from_matrix(matrix: CMat, basis: &Arc<SectorBasis>) -> Result<Self> {
        if matrix.rows() != basis.len() || matrix.cols() != basis.len() {
            return Err(Error::BasisMismatch {
                expected: format!("{0} x {0} matrix", basis.len()),
                found: format!("{} x {}", matrix.rows(), matrix.cols()),
            });
        }
        let dm = DensityMatrix {
            matrix,
            basis: Arc::clone(basis),
        };
        dm.validate()?;
        Ok(dm)
    }

    /// Check the invariants without consuming the matrix.
    pub fn validate(&self) -> Result<()> {
        let tr = measures::trace_deviation(&self.matrix);
        if tr > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace deviates from 1 by {tr:.3e}"
            )));
        }
        let mut herm = 0.0f64;
        for i in 0..self.matrix.rows() {
            for j in 0..self.matrix.cols() {
                let d = (self.matrix.get(i, j) - self.matrix.get(j, i).conj()).norm();
                herm = herm.max(d);
            }
        }
        if herm > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "density matrix is non-Hermitian by {herm:.3e}"
            )));
        }
        let lo = measures::min_eigenvalue(&self.matrix)?;
        if lo < -1e-8 {
            return Err(Error::InvalidParameter(format!(
                "density matrix has negative eigenvalue {lo:.3e}"
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }
}

/// A named state whose population ⟨v|ρ|v⟩ is recorded along a trajectory.
#[derive(Debug, Clone)]
pub struct TrackedState {
    pub name: String,
    pub vector: Vec<C64>,
}

/// Observables at one recorded time.
#[derive(Debug, Clone)]
pub struct Record {
    /// Logarithmic negativity across the qutrit–boson split.
    pub log_negativity: f64,
    /// Tr ρ².
    pub purity: f64,
    /// max(|Re Tr ρ − 1|, |Im Tr ρ|) — integration-quality diagnostic.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of ρ — positivity diagnostic.
    pub min_eigenvalue: f64,
    /// ⟨v|ρ|v⟩ for each tracked state, in input order.
    pub populations: Vec<f64>,
}

/// A time series of observable records on a strictly increasing grid of
/// dimensionless g·t values.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Names of the tracked populations, in record order.
    pub population_names: Vec<String>,
    pub records: Vec<Record>,
}

impl Trajectory {
    /// The logarithmic-negativity series, convenient for revival analysis.
    pub fn log_negativity_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.log_negativity).collect()
    }
}

/// Default integration step, `0.005 / max(ε, κ, Γ_total, |Δ|)`.
pub fn default_step(params: &ModelParams) -> f64 {
    0.005 / params.dynamical_scale()
}

/// Largest accepted integration step, `0.05 / max(ε, κ, Γ_total, |Δ|)`.
/// Beyond this the fixed-step scheme is not trustworthy for these generators.
pub fn max_stable_step(params: &ModelParams) -> f64 {
    0.05 / params.dynamical_scale()
}

/// One jump channel with its adjoint and Gram matrix precomputed.
struct PreparedChannel {
    rate: f64,
    l: SpMat,
    l_dag: SpMat,
    gram: SpMat,
}

fn prepare_channels(channels: &[JumpChannel], dim: usize) -> Result<Vec<PreparedChannel>> {
    channels
        .iter()
        .map(|ch| {
            if ch.op.dim() != dim {
                return Err(Error::BasisMismatch {
                    expected: format!("jump operator of dimension {dim}"),
                    found: format!("dimension {}", ch.op.dim()),
                });
            }
            let l = ch.op.matrix().clone();
            let l_dag = l.dagger();
            let gram = l_dag.mul_sparse(&l);
            Ok(PreparedChannel {
                rate: ch.rate,
                l,
                l_dag,
                gram,
            })
        })
        .collect()
}

/// Generator applied to `rho`, written into `out` (`tmp` is scratch).
fn rhs_into(h: &SpMat, channels: &[PreparedChannel], rho: &CMat, out: &mut CMat, tmp: &mut CMat) {
    let i = C64::new(0.0, 1.0);
    out.fill_zero();
    h.acc_sparse_dense(rho, -i, out); // -i H ρ
    h.acc_dense_sparse(rho, i, out); // +i ρ H
    for ch in channels {
        let r = C64::new(ch.rate, 0.0);
        let half = C64::new(-0.5 * ch.rate, 0.0);
        tmp.fill_zero();
        ch.l.acc_sparse_dense(rho, C64::new(1.0, 0.0), tmp); // tmp = L ρ
        ch.l_dag.acc_dense_sparse(tmp, r, out); // out += rate (Lρ) L†
        ch.gram.acc_sparse_dense(rho, half, out); // out -= rate/2 L†L ρ
        ch.gram.acc_dense_sparse(rho, half, out); // out -= rate/2 ρ L†L
    }
}

/// The master-equation generator −i[H,ρ] + Σ rate·(LρL† − ½{L†L,ρ}).
///
/// Trace-free to roundoff by construction of the dissipator.  Errors on any
/// dimension mismatch between `h`, the channels, and `rho`.
pub fn rhs(h: &Operator, channels: &[JumpChannel], rho: &CMat) -> Result<CMat> {
    let d = h.dim();
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::BasisMismatch {
            expected: format!("{d} x {d} density matrix"),
            found: format!("{} x {}", rho.rows(), rho.cols()),
        });
    }
    let prepared = prepare_channels(channels, d)?;
    let mut out = CMat::zeros(d, d);
    let mut tmp = CMat::zeros(d, d);
    rhs_into(h.matrix(), &prepared, rho, &mut out, &mut tmp);
    Ok(out)
}

/// Integrate the master equation from `rho0` to `t_max` with fixed step `dt`,
/// recording observables every `record_every` steps (the initial and final
/// times are always recorded).
///
/// `params` supplies the stability guard `dt ≤ 0.05/max(ε, κ, Γ_total, |Δ|)`;
/// it must be the same parameter set the operators were built from.  Each
/// step re-symmetrises ρ ← (ρ+ρ†)/2; the trace is never renormalised.  Any
/// non-finite entry aborts with the time it appeared at.
#[allow(clippy::too_many_arguments)]
pub fn evolve(
    params: &ModelParams,
    rho0: &DensityMatrix,
    h: &Operator,
    channels: &[JumpChannel],
    t_max: f64,
    dt: f64,
    record_every: usize,
    tracked: &[TrackedState],
) -> Result<Trajectory> {
    params.validate()?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "step must be positive and finite, got {dt}"
        )));
    }
    let guard = max_stable_step(params);
    if dt > guard * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "step {dt} exceeds the stability guard {guard:.6e} for these parameters"
        )));
    }
    if record_every == 0 {
        return Err(Error::InvalidParameter(
            "record_every must be at least 1".into(),
        ));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_max must be non-negative and finite, got {t_max}"
        )));
    }
    if !bases_match(rho0.basis(), h.basis()) {
        return Err(Error::BasisMismatch {
            expected: String::from("state and Hamiltonian over the same basis"),
            found: String::from("different bases"),
        });
    }
    let d = h.dim();
    for ts in tracked {
        if ts.vector.len() != d {
            return Err(Error::BasisMismatch {
                expected: format!("tracked state '{}' of length {d}", ts.name),
                found: format!("length {}", ts.vector.len()),
            });
        }
    }
    let prepared = prepare_channels(channels, d)?;
    let split = rho0.basis().qutrit_boson_split();

    let mut rho = rho0.matrix().clone();
    let steps = if t_max == 0.0 {
        0
    } else {
        ((t_max / dt) - 1e-9).ceil().max(1.0) as usize
    };

    let mut times = Vec::new();
    let mut records = Vec::new();
    let mut push_record = |t: f64, rho: &CMat| -> Result<()> {
        let mut populations = Vec::with_capacity(tracked.len());
        for ts in tracked {
            populations.push(measures::population(rho, &ts.vector)?);
        }
        records.push(Record {
            log_negativity: measures::log_negativity_with(rho, &split)?,
            purity: measures::purity(rho),
            trace_deviation: measures::trace_deviation(rho),
            min_eigenvalue: measures::min_eigenvalue(rho)?,
            populations,
        });
        times.push(t);
        Ok(())
    };

    push_record(0.0, &rho)?;

    let mut k1 = CMat::zeros(d, d);
    let mut k2 = CMat::zeros(d, d);
    let mut k3 = CMat::zeros(d, d);
    let mut k4 = CMat::zeros(d, d);
    let mut stage = CMat::zeros(d, d);
    let mut tmp = CMat::zeros(d, d);
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let third = C64::new(dt / 3.0, 0.0);

    for s in 1..=steps {
        rhs_into(h.matrix(), &prepared, &rho, &mut k1, &mut tmp);
        stage.clone_from(&rho);
        stage.add_scaled(&k1, half);
        rhs_into(h.matrix(), &prepared, &stage, &mut k2, &mut tmp);
        stage.clone_from(&rho);
        stage.add_scaled(&k2, half);
        rhs_into(h.matrix(), &prepared, &stage, &mut k3, &mut tmp);
        stage.clone_from(&rho);
        stage.add_scaled(&k3, full);
        rhs_into(h.matrix(), &prepared, &stage, &mut k4, &mut tmp);

        rho.add_scaled(&k1, sixth);
        rho.add_scaled(&k2, third);
        rho.add_scaled(&k3, third);
        rho.add_scaled(&k4, sixth);
        rho.hermitize();

        let t = s as f64 * dt;
        if !rho.all_finite() {
            return Err(Error::NonFinite { t });
        }
        if s % record_every == 0 || s == steps {
            push_record(t, &rho)?;
        }
    }

    Ok(Trajectory {
        times,
        population_names: tracked.iter().map(|ts| ts.name.clone()).collect(),
        records,
    })
}
