//! The classical reduction of the dissipative dynamics: transition rates
//! between normal-mode Fock states, rate-equation solutions, the dominant-path
//! five-state model, diagonal density-matrix reconstruction, and the
//! closed-form purification estimates.
//!
//! In the frozen-register approximation the eigenstates are bare Fock states
//! of the three normal modes, so every jump-operator matrix element is a
//! single entry of a small ladder matrix — no diagonalisation is involved
//! until the probabilities are mapped back onto sector states.

#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{embed_symmetric, Representation, SectorBasis};
use crate::error::{Error, Result};
use crate::lindblad::DensityMatrix;
use crate::linalg::{expm, CMat};
use crate::measures;
use crate::operators::{individual_decay_op, ModelParams};
use crate::spectral::{
    group_multiplets, master_dark_state, sector_eigenstates, semiclassical_eigenstate,
    semiclassical_modes, SemiclassicalLabel,
};
use crate::C64;

/// Transition-rate matrix between normal-mode Fock states.
///
/// `gamma[α][β]` (row α, column β) is the rate from state β into state α for
/// α ≠ β; each diagonal entry is minus its column sum, so columns sum to zero
/// and total probability is conserved.
#[derive(Debug, Clone)]
pub struct RateModel {
    states: Vec<SemiclassicalLabel>,
    energies: Vec<f64>,
    gamma: CMat,
}

impl RateModel {
    pub fn states(&self) -> &[SemiclassicalLabel] {
        &self.states
    }

    /// Normal-mode energies `(kp - km) ε`, in state order.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// The generator matrix (real entries stored as complex).
    pub fn gamma(&self) -> &CMat {
        &self.gamma
    }

    /// Rate from `from` into `to` (zero if either label is absent).
    pub fn rate(&self, from: SemiclassicalLabel, to: SemiclassicalLabel) -> f64 {
        match (self.index_of(to), self.index_of(from)) {
            (Some(r), Some(c)) => self.gamma.get(r, c).re,
            _ => 0.0,
        }
    }

    pub fn index_of(&self, label: SemiclassicalLabel) -> Option<usize> {
        self.states.iter().position(|&s| s == label)
    }
}

/// Populations over a set of normal-mode states on a time grid.
#[derive(Debug, Clone)]
pub struct PopulationTrace {
    pub times: Vec<f64>,
    pub states: Vec<SemiclassicalLabel>,
    /// `populations[k][α]` is the population of state α at `times[k]`.
    pub populations: Vec<Vec<f64>>,
}

impl PopulationTrace {
    /// Population of `label` at time index `k`.
    pub fn population(&self, label: SemiclassicalLabel, k: usize) -> Option<f64> {
        let i = self.states.iter().position(|&s| s == label)?;
        self.populations.get(k).map(|row| row[i])
    }
}

/// All normal-mode labels `(k0, kp, km)` with `k0+kp+km ≤ p_cut`, in
/// ascending lexicographic order.
pub fn ladder_labels(p_cut: usize) -> Vec<SemiclassicalLabel> {
    let mut out = Vec::new();
    for k0 in 0..=p_cut {
        for kp in 0..=(p_cut - k0) {
            for km in 0..=(p_cut - k0 - kp) {
                out.push(SemiclassicalLabel { k0, kp, km });
            }
        }
    }
    out.sort();
    out
}

/// Annihilation matrix of one normal mode over a label list (index 0 = C0,
/// 1 = C+, 2 = C-).
fn ladder_lowering(labels: &[SemiclassicalLabel], which: usize) -> CMat {
    let index = |l: &SemiclassicalLabel| labels.iter().position(|x| x == l);
    let mut m = CMat::zeros(labels.len(), labels.len());
    for (j, l) in labels.iter().enumerate() {
        let (occ, lower) = match which {
            0 => (l.k0, SemiclassicalLabel { k0: l.k0.wrapping_sub(1), ..*l }),
            1 => (l.kp, SemiclassicalLabel { kp: l.kp.wrapping_sub(1), ..*l }),
            _ => (l.km, SemiclassicalLabel { km: l.km.wrapping_sub(1), ..*l }),
        };
        if occ == 0 {
            continue;
        }
        if let Some(i) = index(&lower) {
            m.set(i, j, C64::new((occ as f64).sqrt(), 0.0));
        }
    }
    m
}

/// Build the transition-rate matrix over the requested labels:
///
/// ```text
/// γ_{αβ} = κ|⟨α|ĉ|β⟩|² + nΓ₀|⟨α|â₁|β⟩|² + Γ₂|⟨α|â₂†â₁|β⟩|²   (α ≠ β)
/// ```
///
/// The first-ground-level register enters only through the collective
/// enhancement `√n` of the qutrit-decay channel (the same replacement the
/// frozen-register Hamiltonian uses).  Matrix elements are evaluated on the
/// closed ladder containing every label reachable by lowering, then sampled
/// onto the requested subset; diagonals balance the sampled columns.
pub fn build_rate_model(params: &ModelParams, labels: &[SemiclassicalLabel]) -> Result<RateModel> {
    params.validate()?;
    let p_cut = labels.iter().map(|l| l.excitation()).max().unwrap_or(0);
    let closed = ladder_labels(p_cut);
    let mixing = semiclassical_modes(params)?;
    let (s, c) = (mixing.theta.sin(), mixing.theta.cos());
    let r = core::f64::consts::FRAC_1_SQRT_2;

    let c0 = ladder_lowering(&closed, 0);
    let cp = ladder_lowering(&closed, 1);
    let cm = ladder_lowering(&closed, 2);
    // Bare modes in terms of normal modes (the inverse mixing).
    let mut boson = c0.clone();
    boson.scale_mut(C64::new(c, 0.0));
    boson.add_scaled(&cp, C64::new(s * r, 0.0));
    boson.add_scaled(&cm, C64::new(s * r, 0.0));
    let mut a1 = cp.clone();
    a1.scale_mut(C64::new(r, 0.0));
    a1.add_scaled(&cm, C64::new(-r, 0.0));
    let mut a2 = c0.clone();
    a2.scale_mut(C64::new(-s, 0.0));
    a2.add_scaled(&cp, C64::new(c * r, 0.0));
    a2.add_scaled(&cm, C64::new(c * r, 0.0));
    let a2d_a1 = a2.dagger().mul(&a1);

    let pos: Vec<usize> = labels
        .iter()
        .map(|l| {
            closed
                .iter()
                .position(|x| x == l)
                .expect("closed ladder contains every requested label")
        })
        .collect();

    let d = labels.len();
    let mut gamma = CMat::zeros(d, d);
    let n = params.n as f64;
    for (col, &jb) in pos.iter().enumerate() {
        for (row, &ia) in pos.iter().enumerate() {
            if row == col {
                continue;
            }
            let g = params.kappa * boson.get(ia, jb).norm_sqr()
                + n * params.gamma0 * a1.get(ia, jb).norm_sqr()
                + params.gamma2 * a2d_a1.get(ia, jb).norm_sqr();
            gamma.set(row, col, C64::new(g, 0.0));
        }
    }
    for col in 0..d {
        let outflow: f64 = (0..d).filter(|&r| r != col).map(|r| gamma.get(r, col).re).sum();
        gamma.set(col, col, C64::new(-outflow, 0.0));
    }

    let energies = labels.iter().map(|l| l.energy(params)).collect();
    Ok(RateModel {
        states: labels.to_vec(),
        energies,
        gamma,
    })
}

/// The five states that carry the three-excitation purification cascade:
/// the initial `(1;11)`, the intermediate `(1;10)` / `(1;01)` pair, the
/// quasi-dark `(1;00)`, and the vacuum `(0;00)`.
///
/// Only the three-excitation sector has this distinguished set; other `p`
/// require building the rate model over explicit labels.
pub fn dominant_path_states(p: usize) -> Result<Vec<SemiclassicalLabel>> {
    if p != 3 {
        return Err(Error::Unsupported(format!(
            "the dominant-path set is specific to the three-excitation sector, got p = {p}"
        )));
    }
    Ok(vec![
        SemiclassicalLabel { k0: 1, kp: 1, km: 1 },
        SemiclassicalLabel { k0: 1, kp: 1, km: 0 },
        SemiclassicalLabel { k0: 1, kp: 0, km: 1 },
        SemiclassicalLabel { k0: 1, kp: 0, km: 0 },
        SemiclassicalLabel { k0: 0, kp: 0, km: 0 },
    ])
}

/// Propagate the rate equation `dP/dt = γP` exactly from `p0` across the
/// (ascending, non-negative) time grid via matrix exponentials.
///
/// Errors on negative input probabilities, a sum away from 1, or a
/// non-ascending grid.
pub fn solve_rates(model: &RateModel, p0: &[f64], times: &[f64]) -> Result<PopulationTrace> {
    let d = model.states.len();
    if p0.len() != d {
        return Err(Error::InvalidParameter(format!(
            "initial distribution has {} entries, model has {d} states",
            p0.len()
        )));
    }
    if p0.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidParameter(
            "initial probabilities must be non-negative".into(),
        ));
    }
    let total: f64 = p0.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "initial probabilities sum to {total}, expected 1"
        )));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidParameter("times must be non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be ascending".into()));
    }

    let mut populations = Vec::with_capacity(times.len());
    let mut current: Vec<f64> = p0.to_vec();
    let mut t_prev = 0.0f64;
    for &t in times {
        let dt = t - t_prev;
        if dt > 0.0 {
            let mut gen = model.gamma.clone();
            gen.scale_mut(C64::new(dt, 0.0));
            let prop = expm(&gen);
            let mut next = vec![0.0f64; d];
            for (r, nx) in next.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (c, &cur) in current.iter().enumerate() {
                    acc += prop.get(r, c).re * cur;
                }
                *nx = acc;
            }
            current = next;
            t_prev = t;
        }
        let sum: f64 = current.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || current.iter().any(|&x| x < -1e-12) {
            return Err(Error::Numerical(format!(
                "rate propagation left the probability simplex at t = {t} (sum {sum})"
            )));
        }
        populations.push(current.clone());
    }

    Ok(PopulationTrace {
        times: times.to_vec(),
        states: model.states.clone(),
        populations,
    })
}

/// The diagonal normal-mode ansatz ρ = Σ_α P_α(t)|E_α⟩⟨E_α| at one grid time.
///
/// Eigenstates are built over `basis` (permutation-symmetric); populations
/// are renormalised for roundoff only (they already sum to 1 ± 1e-9).
pub fn reconstruct_density(
    trace: &PopulationTrace,
    params: &ModelParams,
    basis: &Arc<SectorBasis>,
    t: f64,
) -> Result<DensityMatrix> {
    let k = trace
        .times
        .iter()
        .position(|&x| (x - t).abs() <= 1e-9 * t.abs().max(1.0))
        .ok_or_else(|| Error::InvalidParameter(format!("t = {t} is not on the trace grid")))?;
    let d = basis.len();
    let mut rho = CMat::zeros(d, d);
    let mut total = 0.0f64;
    for (i, &label) in trace.states.iter().enumerate() {
        let p = trace.populations[k][i].max(0.0);
        if p == 0.0 {
            continue;
        }
        total += p;
        let v = semiclassical_eigenstate(label, params, basis)?;
        for r in 0..d {
            if v[r].norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..d {
                let add = v[r] * v[c].conj() * p;
                rho.set(r, c, rho.get(r, c) + add);
            }
        }
    }
    if total <= 0.0 {
        return Err(Error::Numerical("reconstruction has zero weight".into()));
    }
    rho.scale_mut(C64::new(1.0 / total, 0.0));
    DensityMatrix::from_matrix(rho, basis)
}

/// Closed-form estimate of the quasi-dark-state population under boson loss
/// only, starting from `(1;11)`:
///
/// ```text
/// P(t) = e^{−κt} (1 − e^{[sinθ/(2(sinθ+cosθ))]κt})²
/// ```
///
/// Kept exactly in this printed form.  Its limits are sensible — 0 at t = 0,
/// and → 1 as κt → ∞ at θ = π/2 (ideal purification) — but at finite θ it
/// decays at rate κcosθ/(sinθ+cosθ) ≈ κ/tanθ, which overstates the leakage
/// of the quasi-dark state: the only allowed escape, `(1;00) → (0;00)`,
/// carries rate κcos²θ ≈ κ/tan²θ.  Against the dominant-path rate solution
/// at tanθ = 10 the two therefore diverge by O(1) already at κt = 10; see
/// the rate model for the faithful description.
pub fn analytic_p100(t: f64, theta: f64, kappa: f64) -> f64 {
    let (s, c) = (theta.sin(), theta.cos());
    let kt = kappa * t;
    let inner = (s / (2.0 * (s + c)) * kt).exp();
    (-kt).exp() * (1.0 - inner) * (1.0 - inner)
}

/// Purification-quality estimate across a grid of mixing angles.
///
/// For each θ the closed-form survival probability [`analytic_p100`] is
/// evaluated at the reference time `κt = kt_ref`, giving the quasi-dark
/// population P.  The estimator pairs the approximate end-state
/// `ρ̃ = P|E_{1;00}⟩⟨E_{1;00}| + (1−P)|E_{0;00}⟩⟨E_{0;00}|`
/// with its ensemble-weighted pure-state entanglement `P · E_N(|E_{1;00}⟩)`
/// (the vacuum component carries none), which credits the dark component
/// with its full entanglement rather than letting the vacuum admixture mask
/// it.  The two factors pull in opposite directions — the dark state gets
/// more entangled with the drive, but survives it less — so the product
/// peaks at an interior ratio.  Returns `(estimate, P)` per grid point.
pub fn ratio_scan_estimate(
    params: &ModelParams,
    theta_grid: &[f64],
    kt_ref: f64,
) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    if !(params.kappa > 0.0) {
        return Err(Error::InvalidParameter(
            "the ratio-scan estimate needs a positive boson-loss rate".into(),
        ));
    }
    if !(kt_ref > 0.0) || !kt_ref.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "reference time must be positive, got {kt_ref}"
        )));
    }
    let half_pi = core::f64::consts::FRAC_PI_2;
    let t_ref = kt_ref / params.kappa;

    let mut out = Vec::with_capacity(theta_grid.len());
    for &theta in theta_grid {
        if !(theta > 0.0 && theta < half_pi) {
            return Err(Error::InvalidParameter(format!(
                "mixing angle {theta} outside (0, pi/2)"
            )));
        }
        let p100 = analytic_p100(t_ref, theta, params.kappa);

        // |E_{1;00}⟩ is exactly the one-excitation master dark state, so its
        // entanglement is cheap over the one-excitation sector.
        let mut dark_params = params.clone();
        dark_params.p = 1;
        dark_params.omega = params.g * (params.n as f64).sqrt() / theta.tan();
        let small = Arc::new(SectorBasis::symmetric(params.n, 1)?);
        let dark = master_dark_state(&dark_params, &small)?;
        let rho = CMat::outer(&dark.vector, &dark.vector);
        let en_dark = measures::log_negativity(&rho, &small)?;
        out.push((p100 * en_dark, p100));
    }
    Ok(out)
}

/// Probability of one final multiplet in the two-step individual-decay
/// cascade, with the eigenstate indices (within the one-excitation block,
/// ascending energy) it groups.
#[derive(Debug, Clone)]
pub struct MultipletProbability {
    pub indices: Vec<usize>,
    /// Mean energy of the multiplet.
    pub energy: f64,
    pub probability: f64,
}

/// Outcome of the individual-decay branching estimate.
#[derive(Debug, Clone)]
pub struct IndividualDecayReport {
    /// Final one-excitation multiplets, ascending in energy.
    pub multiplets: Vec<MultipletProbability>,
    /// Intermediates that were populated but had zero outflow; their branch
    /// weight is dropped (contributes 0).
    pub dead_branches: usize,
}

/// Two-step branching probabilities of the individual-decay cascade
/// `(1;11) → {two-excitation eigenstates} → {one-excitation multiplets}`:
///
/// ```text
/// P_m = Σ_k  [Γ(E₂ᵏ→E₁ᵐ) / Σ_{m'} Γ(E₂ᵏ→E₁ᵐ')] · [Γ(init→E₂ᵏ) / Σ_{k'} Γ(init→E₂ᵏ')]
/// ```
///
/// with `Γ(α→β) = Σ_i Γ₁₀ |⟨β|Â₁₀ⁱ|α⟩|²` summed over per-qutrit channels.
/// Individual decay breaks permutation symmetry, so this needs the full
/// representation (and therefore small `n`), plus `Γ₁₀ > 0` and a
/// three-excitation sector to start from.
pub fn individual_decay_probabilities(
    params: &ModelParams,
    basis: &Arc<SectorBasis>,
) -> Result<IndividualDecayReport> {
    params.validate()?;
    if basis.representation() != Representation::Full {
        return Err(Error::Unsupported(
            "individual decay branching needs the full representation".into(),
        ));
    }
    if !(params.gamma10 > 0.0) {
        return Err(Error::InvalidParameter(
            "individual decay branching needs gamma10 > 0".into(),
        ));
    }
    if params.p != 3 || basis.p_max() < 3 {
        return Err(Error::InvalidParameter(
            "the cascade starts from the three-excitation state (1;11)".into(),
        ));
    }

    // Initial state: (1;11) built symmetrically, expanded to the full basis.
    let sym = Arc::new(SectorBasis::symmetric(basis.n(), basis.p_max())?);
    let init_sym = semiclassical_eigenstate(
        SemiclassicalLabel { k0: 1, kp: 1, km: 1 },
        params,
        &sym,
    )?;
    let init = embed_symmetric(&init_sym, sym.as_ref(), basis.as_ref())?;

    let ops: Vec<_> = (0..basis.n())
        .map(|q| individual_decay_op(basis, q, 0))
        .collect::<Result<_>>()?;
    // Γ(α→β)/Γ₁₀ for a fixed source, over a list of targets.
    let branch_rates = |source: &[C64], targets: &[(f64, Vec<C64>)]| -> Vec<f64> {
        let dropped: Vec<Vec<C64>> = ops.iter().map(|op| op.apply(source)).collect();
        targets
            .iter()
            .map(|(_, tv)| {
                dropped
                    .iter()
                    .map(|w| {
                        let ov: C64 = tv.iter().zip(w).map(|(a, b)| a.conj() * *b).sum();
                        ov.norm_sqr()
                    })
                    .sum()
            })
            .collect()
    };

    let eig2 = sector_eigenstates(params, basis, 2)?;
    let eig1 = sector_eigenstates(params, basis, 1)?;

    let first: Vec<f64> = branch_rates(&init, &eig2);
    let first_total: f64 = first.iter().sum();
    if first_total <= 0.0 {
        return Err(Error::Numerical(
            "the initial state has no individual-decay outflow".into(),
        ));
    }

    let mut p_final = vec![0.0f64; eig1.len()];
    let mut dead_branches = 0usize;
    for (k, (_, v2)) in eig2.iter().enumerate() {
        let weight = first[k] / first_total;
        if weight == 0.0 {
            continue;
        }
        let second: Vec<f64> = branch_rates(v2, &eig1);
        let second_total: f64 = second.iter().sum();
        if second_total <= 0.0 {
            dead_branches += 1;
            continue;
        }
        for (m, &rate) in second.iter().enumerate() {
            p_final[m] += weight * rate / second_total;
        }
    }

    let energies1: Vec<f64> = eig1.iter().map(|e| e.0).collect();
    let scale = energies1.iter().fold(0.0f64, |m, &w| m.max(w.abs())).max(1.0);
    let groups = group_multiplets(&energies1, 1e-9 * scale);
    let multiplets = groups
        .into_iter()
        .map(|idx| {
            let probability = idx.iter().map(|&m| p_final[m]).sum();
            let energy = idx.iter().map(|&m| energies1[m]).sum::<f64>() / idx.len() as f64;
            MultipletProbability {
                indices: idx,
                energy,
                probability,
            }
        })
        .collect();

    Ok(IndividualDecayReport {
        multiplets,
        dead_branches,
    })
}

/// One-excitation eigenstates of the full-representation block, for pairing
/// an [`IndividualDecayReport`] with the states it refers to.
pub fn one_excitation_eigenstates(
    params: &ModelParams,
    basis: &Arc<SectorBasis>,
) -> Result<Vec<(f64, Vec<C64>)>> {
    sector_eigenstates(params, basis, 1)
}
