//! Hamiltonians and jump operators as sparse matrices over a [`SectorBasis`].
//!
//! The model: `n` qutrits with ground levels 0 and 2 and excited level 1,
//! coupled to one lossy bosonic mode. In the permutation-symmetric
//! representation the qutrit levels are described by bosonic occupations
//! (`a0`, `a1`, `a2` for levels 0, 1, 2; `c` for the mode) and the
//! Hamiltonian reads
//!
//! ```text
//! H = Δ a₁†a₁ + g (c† a₀† a₁ + h.c.) + Ω (a₂† a₁ + h.c.),
//! ```
//!
//! while in the full representation it is the equivalent per-qutrit sum
//! `Σ_k (g c |0⟩_k⟨1| + Ω |2⟩_k⟨1| + h.c.) + Δ Σ_k |1⟩_k⟨1|`
//! (written here with the annihilation-side orientation). Every term moves a
//! single excitation between the registers counted by
//! `N̂ = a₁†a₁ + a₂†a₂ + c†c`, so `[H, N̂] = 0` holds exactly, entry by
//! entry. At `Δ = 0` each term also flips the parity of the excited-level
//! occupation, which makes the spectrum symmetric about zero.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use crate::basis::{Representation, SectorBasis, SymLabel};
use crate::error::{Error, Result};
use crate::linalg::{CMat, SpMat};
use crate::C64;

/// Physical parameters of a scenario. `g` sets the energy scale (use
/// `g = 1`); all rates are in units of `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Number of qutrits.
    pub n: usize,
    /// Excitation number of the initial sector (also the basis cutoff).
    pub p: usize,
    /// Qutrit–boson coupling.
    pub g: f64,
    /// Rabi amplitude of the classical drive on the 1↔2 transition.
    pub omega: f64,
    /// Detuning of the excited level.
    pub delta: f64,
    /// Boson loss rate.
    pub kappa: f64,
    /// Collective decay rate, level 1 → 0.
    pub gamma0: f64,
    /// Collective decay rate, level 1 → 2.
    pub gamma2: f64,
    /// Individual decay rate per qutrit, level 1 → 0.
    pub gamma10: f64,
    /// Individual decay rate per qutrit, level 1 → 2.
    pub gamma12: f64,
}

impl ModelParams {
    /// Parameters with `g = 1`, no drive, no dissipation, no detuning.
    pub fn new(n: usize, p: usize) -> Self {
        ModelParams {
            n,
            p,
            g: 1.0,
            omega: 0.0,
            delta: 0.0,
            kappa: 0.0,
            gamma0: 0.0,
            gamma2: 0.0,
            gamma10: 0.0,
            gamma12: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.g > 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidParameter(format!("g must be positive, got {}", self.g)));
        }
        for (name, v) in [
            ("omega", self.omega),
            ("delta", self.delta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [
            ("kappa", self.kappa),
            ("gamma0", self.gamma0),
            ("gamma2", self.gamma2),
            ("gamma10", self.gamma10),
            ("gamma12", self.gamma12),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "rate {name} must be non-negative and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Characteristic coherent frequency `ε = √(g²n + Ω²)`.
    pub fn epsilon(&self) -> f64 {
        (self.g * self.g * self.n as f64 + self.omega * self.omega).sqrt()
    }

    /// Mode mixing angle `θ = atan(g√n / Ω)`, with `Ω = 0` giving exactly
    /// `π/2`.
    pub fn theta(&self) -> f64 {
        (self.g * (self.n as f64).sqrt()).atan2(self.omega)
    }

    /// Aggregate dissipation scale: collective channels are enhanced by the
    /// ensemble size, individual channels act on every qutrit.
    pub fn total_decay_rate(&self) -> f64 {
        let nf = self.n as f64;
        nf * self.gamma0 + self.gamma2 + nf * (self.gamma10 + self.gamma12)
    }

    /// Fastest frequency in the generator; used for integrator step guards.
    pub fn dynamical_scale(&self) -> f64 {
        self.epsilon()
            .max(self.kappa)
            .max(self.total_decay_rate())
            .max(self.delta.abs())
    }
}

/// A sparse matrix bound to the basis it was built on.
#[derive(Debug, Clone)]
pub struct Operator {
    matrix: SpMat,
    basis: Arc<SectorBasis>,
}

impl Operator {
    pub fn new(matrix: SpMat, basis: Arc<SectorBasis>) -> Result<Self> {
        if matrix.rows() != basis.len() || matrix.cols() != basis.len() {
            return Err(Error::BasisMismatch {
                expected: format!("{0}x{0} matrix", basis.len()),
                found: format!("{}x{} matrix", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Operator { matrix, basis })
    }

    pub fn matrix(&self) -> &SpMat {
        &self.matrix
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dagger(&self) -> Operator {
        Operator { matrix: self.matrix.dagger(), basis: Arc::clone(&self.basis) }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.matvec(v)
    }

    /// `Tr(A ρ)` for a density matrix on the same basis.
    pub fn expectation(&self, rho: &CMat) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (r, c, v) in self.matrix.triplets() {
            acc += v * rho.get(c, r);
        }
        acc
    }

    /// Same dimension and representation (cheap compatibility check).
    pub fn same_basis(&self, other: &Operator) -> bool {
        self.basis.len() == other.basis.len()
            && self.basis.n() == other.basis.n()
            && self.basis.p_max() == other.basis.p_max()
            && self.basis.representation() == other.basis.representation()
    }
}

/// Bosonic registers of the symmetric representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Level-0 register. Annihilating it changes the qutrit number, which
    /// leaves the fixed-`n` basis, so this operator is identically zero.
    A0,
    /// Excited-level register.
    A1,
    /// Level-2 register.
    A2,
    /// The bosonic mode.
    C,
}

fn require_symmetric(basis: &SectorBasis, what: &str) -> Result<()> {
    if basis.representation() != Representation::Symmetric {
        return Err(Error::Unsupported(format!("{what} requires the symmetric representation")));
    }
    Ok(())
}

fn require_full(basis: &SectorBasis, what: &str) -> Result<()> {
    if basis.representation() != Representation::Full {
        return Err(Error::Unsupported(format!("{what} requires the full representation")));
    }
    Ok(())
}

/// Triplet builder over symmetric labels: `f(source) -> (target, amplitude)`
/// entries, one matrix element per source state.
fn sym_op(
    basis: &Arc<SectorBasis>,
    mut f: impl FnMut(SymLabel) -> Option<(SymLabel, f64)>,
) -> Operator {
    let labels = basis.sym_labels().expect("symmetric basis");
    let mut t = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if let Some((target, amp)) = f(l) {
            let j = basis
                .index_of_sym(&target)
                .expect("matrix element target must stay inside the sector");
            t.push((j, i, C64::new(amp, 0.0)));
        }
    }
    let d = basis.len();
    Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) }
}

/// Annihilation operator of one bosonic register on a symmetric basis.
pub fn mode_op(basis: &Arc<SectorBasis>, mode: Mode) -> Result<Operator> {
    require_symmetric(basis, "mode_op")?;
    Ok(match mode {
        Mode::A0 => {
            let d = basis.len();
            Operator { matrix: SpMat::zeros(d, d), basis: Arc::clone(basis) }
        }
        Mode::A1 => sym_op(basis, |l| {
            (l.n1 > 0).then(|| (SymLabel { n1: l.n1 - 1, ..l }, (l.n1 as f64).sqrt()))
        }),
        Mode::A2 => sym_op(basis, |l| {
            (l.n2 > 0).then(|| (SymLabel { n2: l.n2 - 1, ..l }, (l.n2 as f64).sqrt()))
        }),
        Mode::C => sym_op(basis, |l| {
            (l.nc > 0).then(|| (SymLabel { nc: l.nc - 1, ..l }, (l.nc as f64).sqrt()))
        }),
    })
}

/// Boson annihilation on either representation (internal; the public
/// symmetric-only surface is [`mode_op`]).
fn boson_lower(basis: &Arc<SectorBasis>) -> Operator {
    match basis.representation() {
        Representation::Symmetric => mode_op(basis, Mode::C).expect("symmetric basis"),
        Representation::Full => {
            let labels = basis.full_labels().expect("full basis");
            let mut t = Vec::new();
            for (i, l) in labels.iter().enumerate() {
                if l.nc > 0 {
                    let mut target = l.clone();
                    target.nc -= 1;
                    let j = basis.index_of_full(&target).expect("lowering stays in sector");
                    t.push((j, i, C64::new((l.nc as f64).sqrt(), 0.0)));
                }
            }
            let d = basis.len();
            Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) }
        }
    }
}

/// Collective decay operator taking level 1 to `target_level` (0 or 2).
///
/// Symmetric representation: the two-register product `a_μ† a₁` with matrix
/// element `√(n1 (n_μ + 1))`. Full representation: `Σ_k |μ⟩_k⟨1|`.
pub fn collective_decay_op(basis: &Arc<SectorBasis>, target_level: u8) -> Result<Operator> {
    if target_level != 0 && target_level != 2 {
        return Err(Error::InvalidParameter(format!(
            "collective decay target must be level 0 or 2, got {target_level}"
        )));
    }
    match basis.representation() {
        Representation::Symmetric => {
            let n = basis.n() as u32;
            Ok(sym_op(basis, |l| {
                if l.n1 == 0 {
                    return None;
                }
                if target_level == 0 {
                    let n0 = n - l.n1 - l.n2;
                    Some((
                        SymLabel { n1: l.n1 - 1, ..l },
                        ((l.n1 * (n0 + 1)) as f64).sqrt(),
                    ))
                } else {
                    Some((
                        SymLabel { n1: l.n1 - 1, n2: l.n2 + 1, ..l },
                        ((l.n1 * (l.n2 + 1)) as f64).sqrt(),
                    ))
                }
            }))
        }
        Representation::Full => {
            let d = basis.len();
            let mut t = Vec::new();
            for q in 0..basis.n() {
                let op = individual_decay_op(basis, q, target_level)?;
                t.extend(op.matrix.triplets());
            }
            Ok(Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) })
        }
    }
}

/// Single-qutrit decay operator `|μ⟩_q⟨1|` (full representation only).
pub fn individual_decay_op(
    basis: &Arc<SectorBasis>,
    qutrit: usize,
    target_level: u8,
) -> Result<Operator> {
    require_full(basis, "individual_decay_op")?;
    if target_level != 0 && target_level != 2 {
        return Err(Error::InvalidParameter(format!(
            "individual decay target must be level 0 or 2, got {target_level}"
        )));
    }
    if qutrit >= basis.n() {
        return Err(Error::InvalidParameter(format!(
            "qutrit index {qutrit} out of range for n = {}",
            basis.n()
        )));
    }
    let labels = basis.full_labels().expect("full basis");
    let mut t = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        if l.levels[qutrit] == 1 {
            let mut target = l.clone();
            target.levels[qutrit] = target_level;
            let j = basis.index_of_full(&target).expect("decay stays in sector");
            t.push((j, i, C64::new(1.0, 0.0)));
        }
    }
    let d = basis.len();
    Ok(Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) })
}

/// Conserved excitation number `N̂` (diagonal).
pub fn number_op(basis: &Arc<SectorBasis>) -> Operator {
    let d = basis.len();
    let t = (0..d)
        .map(|i| (i, i, C64::new(basis.excitation(i) as f64, 0.0)))
        .collect();
    Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) }
}

/// Parity of the excited-level occupation, `exp(iπ a₁†a₁)` (diagonal ±1).
pub fn excited_parity_op(basis: &Arc<SectorBasis>) -> Operator {
    let d = basis.len();
    let excited = |i: usize| -> u32 {
        match basis.as_ref() {
            SectorBasis::Symmetric(_) => basis.sym_labels().unwrap()[i].n1,
            SectorBasis::Full(_) => {
                basis.full_labels().unwrap()[i].levels.iter().filter(|&&l| l == 1).count() as u32
            }
        }
    };
    let t = (0..d)
        .map(|i| {
            let sign = if excited(i) % 2 == 0 { 1.0 } else { -1.0 };
            (i, i, C64::new(sign, 0.0))
        })
        .collect();
    Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) }
}

/// Append a Hermitian pair of triplets for one directed matrix element.
fn push_hermitian(t: &mut Vec<(usize, usize, C64)>, row: usize, col: usize, amp: f64) {
    t.push((row, col, C64::new(amp, 0.0)));
    t.push((col, row, C64::new(amp, 0.0)));
}

/// Hamiltonian in the symmetric representation.
pub fn hamiltonian_symmetric(params: &ModelParams, basis: &Arc<SectorBasis>) -> Result<Operator> {
    params.validate()?;
    require_symmetric(basis, "hamiltonian_symmetric")?;
    if basis.n() != params.n {
        return Err(Error::BasisMismatch {
            expected: format!("basis with n = {}", params.n),
            found: format!("n = {}", basis.n()),
        });
    }
    let labels = basis.sym_labels().unwrap();
    let n = params.n as u32;
    let mut t = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        if params.delta != 0.0 && l.n1 > 0 {
            t.push((i, i, C64::new(params.delta * l.n1 as f64, 0.0)));
        }
        if l.n1 == 0 {
            continue;
        }
        let n0 = n - l.n1 - l.n2;
        // g c† a₀† a₁: one excitation moves from the qutrits to the mode.
        let target = SymLabel { n1: l.n1 - 1, nc: l.nc + 1, ..*l };
        let j = basis.index_of_sym(&target).expect("coupling stays in sector");
        push_hermitian(&mut t, j, i, params.g * ((l.n1 * (n0 + 1) * (l.nc + 1)) as f64).sqrt());
        // Ω a₂† a₁: one qutrit moves from level 1 to level 2.
        let target = SymLabel { n1: l.n1 - 1, n2: l.n2 + 1, ..*l };
        let j = basis.index_of_sym(&target).expect("drive stays in sector");
        push_hermitian(&mut t, j, i, params.omega * ((l.n1 * (l.n2 + 1)) as f64).sqrt());
    }
    let d = basis.len();
    Ok(Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) })
}

/// Hamiltonian in the full per-qutrit representation.
pub fn hamiltonian_full(params: &ModelParams, basis: &Arc<SectorBasis>) -> Result<Operator> {
    params.validate()?;
    require_full(basis, "hamiltonian_full")?;
    if basis.n() != params.n {
        return Err(Error::BasisMismatch {
            expected: format!("basis with n = {}", params.n),
            found: format!("n = {}", basis.n()),
        });
    }
    let labels = basis.full_labels().unwrap();
    let mut t = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let excited = l.levels.iter().filter(|&&x| x == 1).count();
        if params.delta != 0.0 && excited > 0 {
            t.push((i, i, C64::new(params.delta * excited as f64, 0.0)));
        }
        for q in 0..l.levels.len() {
            if l.levels[q] != 1 {
                continue;
            }
            let mut target = l.clone();
            target.levels[q] = 0;
            target.nc += 1;
            let j = basis.index_of_full(&target).expect("coupling stays in sector");
            push_hermitian(&mut t, j, i, params.g * ((l.nc + 1) as f64).sqrt());
            let mut target = l.clone();
            target.levels[q] = 2;
            let j = basis.index_of_full(&target).expect("drive stays in sector");
            push_hermitian(&mut t, j, i, params.omega);
        }
    }
    let d = basis.len();
    Ok(Operator { matrix: SpMat::from_triplets(d, d, t), basis: Arc::clone(basis) })
}

/// Hamiltonian in whichever representation the basis uses.
pub fn hamiltonian(params: &ModelParams, basis: &Arc<SectorBasis>) -> Result<Operator> {
    match basis.representation() {
        Representation::Symmetric => hamiltonian_symmetric(params, basis),
        Representation::Full => hamiltonian_full(params, basis),
    }
}

/// Quadratic semiclassical Hamiltonian
/// `H_sc = g√n (c†a₁ + h.c.) + Ω (a₂†a₁ + h.c.)`
/// on the three-mode Fock space `(a1, a2, c)` truncated at total excitation
/// `p`. The level-0 register is treated as a classical reservoir (`a₀ ≈ √n`),
/// which is the `n ≫ p` limit of the symmetric Hamiltonian.
///
/// The returned operator carries its own basis whose labels `(n1, n2, nc)`
/// are read as the three mode occupations.
pub fn hamiltonian_semiclassical(params: &ModelParams) -> Result<Operator> {
    params.validate()?;
    let p = params.p;
    // With n = max(p, 1) the symmetric label set is exactly the three-mode
    // Fock space truncated at p (the n1+n2 <= n constraint is inactive).
    let basis = Arc::new(SectorBasis::symmetric(p.max(1), p)?);
    let labels = basis.sym_labels().unwrap();
    let gn = params.g * (params.n as f64).sqrt();
    let mut t = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        if l.n1 == 0 {
            continue;
        }
        let target = SymLabel { n1: l.n1 - 1, nc: l.nc + 1, ..*l };
        let j = basis.index_of_sym(&target).expect("coupling stays in cutoff");
        push_hermitian(&mut t, j, i, gn * ((l.n1 * (l.nc + 1)) as f64).sqrt());
        let target = SymLabel { n1: l.n1 - 1, n2: l.n2 + 1, ..*l };
        let j = basis.index_of_sym(&target).expect("drive stays in cutoff");
        push_hermitian(&mut t, j, i, params.omega * ((l.n1 * (l.n2 + 1)) as f64).sqrt());
    }
    let d = basis.len();
    Ok(Operator { matrix: SpMat::from_triplets(d, d, t), basis })
}

/// One dissipative channel: Lindblad operator with its rate.
#[derive(Debug, Clone)]
pub struct JumpChannel {
    pub rate: f64,
    pub op: Operator,
}

/// All jump channels with nonzero rate, in a fixed order: boson loss,
/// collective 1→0, collective 1→2, then the per-qutrit channels.
///
/// Individual rates require the full representation — a single-qutrit jump
/// leaves the permutation-symmetric subspace.
pub fn jump_channels(params: &ModelParams, basis: &Arc<SectorBasis>) -> Result<Vec<JumpChannel>> {
    params.validate()?;
    let mut out = Vec::new();
    if params.kappa > 0.0 {
        out.push(JumpChannel { rate: params.kappa, op: boson_lower(basis) });
    }
    if params.gamma0 > 0.0 {
        out.push(JumpChannel { rate: params.gamma0, op: collective_decay_op(basis, 0)? });
    }
    if params.gamma2 > 0.0 {
        out.push(JumpChannel { rate: params.gamma2, op: collective_decay_op(basis, 2)? });
    }
    for (rate, level) in [(params.gamma10, 0u8), (params.gamma12, 2u8)] {
        if rate > 0.0 {
            if basis.representation() != Representation::Full {
                return Err(Error::Unsupported(
                    "individual decay channels require the full representation".into(),
                ));
            }
            for q in 0..basis.n() {
                out.push(JumpChannel { rate, op: individual_decay_op(basis, q, level)? });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::embed_symmetric;
    use crate::linalg::eigvalsh;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(n: usize, p: usize) -> Arc<SectorBasis> {
        Arc::new(SectorBasis::symmetric(n, p).unwrap())
    }

    fn full(n: usize, p: usize) -> Arc<SectorBasis> {
        Arc::new(SectorBasis::full(n, p).unwrap())
    }

    fn random_vec(d: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..d)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn mode_op_matrix_elements() {
        let basis = sym(4, 3);
        let a2 = mode_op(&basis, Mode::A2).unwrap();
        let i = basis.index_of_sym(&SymLabel { n1: 0, n2: 1, nc: 0 }).unwrap();
        let j = basis.index_of_sym(&SymLabel { n1: 0, n2: 0, nc: 0 }).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); basis.len()];
        v[i] = C64::new(1.0, 0.0);
        let w = a2.apply(&v);
        assert!((w[j] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(w.iter().filter(|x| x.norm() > 0.0).count(), 1);

        // c annihilates every nc=0 state.
        let c = mode_op(&basis, Mode::C).unwrap();
        for (i, l) in basis.sym_labels().unwrap().iter().enumerate() {
            if l.nc == 0 {
                let mut v = vec![C64::new(0.0, 0.0); basis.len()];
                v[i] = C64::new(1.0, 0.0);
                assert!(c.apply(&v).iter().all(|x| x.norm() == 0.0));
            }
        }

        // Number operator action: <a2† a2> = n2.
        let k = basis.index_of_sym(&SymLabel { n1: 0, n2: 2, nc: 1 }).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); basis.len()];
        v[k] = C64::new(1.0, 0.0);
        let w = a2.apply(&v);
        let norm2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm2 - 2.0).abs() < 1e-14);

        // The level-0 register cannot be annihilated inside a fixed-n basis.
        assert_eq!(mode_op(&basis, Mode::A0).unwrap().matrix().nnz(), 0);

        assert!(mode_op(&full(2, 1), Mode::C).is_err());
    }

    #[test]
    fn symmetric_hamiltonian_single_qutrit_spectrum() {
        let basis = sym(1, 1);
        let mut params = ModelParams::new(1, 1);
        params.omega = 0.15;
        let h = hamiltonian_symmetric(&params, &basis).unwrap();
        let vals = eigvalsh(&h.matrix().to_dense()).unwrap();
        let e = (1.0f64 + 0.15 * 0.15).sqrt();
        assert_eq!(vals.len(), 4);
        assert!((vals[0] + e).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12);
        assert!(vals[2].abs() < 1e-12);
        assert!((vals[3] - e).abs() < 1e-12);
    }

    #[test]
    fn symmetric_hamiltonian_frozen_block_energies() {
        // n=4, Ω=0.15: the single-excitation block has energies 0, ±2.00561711.
        let basis = sym(4, 3);
        let mut params = ModelParams::new(4, 3);
        params.omega = 0.15;
        let h = hamiltonian_symmetric(&params, &basis).unwrap().matrix().to_dense();
        let idx: Vec<usize> = (0..basis.len()).filter(|&i| basis.excitation(i) == 1).collect();
        assert_eq!(idx.len(), 3);
        let block = CMat::from_fn(3, 3, |a, b| h.get(idx[a], idx[b]));
        let vals = eigvalsh(&block).unwrap();
        assert!((vals[0] + 2.00561711).abs() < 1e-7);
        assert!(vals[1].abs() < 1e-12);
        assert!((vals[2] - 2.00561711).abs() < 1e-7);
        assert!((vals[2] - params.epsilon()).abs() < 1e-12);
    }

    #[test]
    fn hamiltonians_are_hermitian_and_trace_free_at_zero_detuning() {
        let mut params = ModelParams::new(4, 3);
        params.omega = 0.3;
        let hs = hamiltonian_symmetric(&params, &sym(4, 3)).unwrap();
        let hf = hamiltonian_full(&params, &full(4, 3)).unwrap();
        let hsc = hamiltonian_semiclassical(&params).unwrap();
        for h in [&hs, &hf, &hsc] {
            let d = h.matrix().to_dense();
            let mut diff = d.clone();
            diff.add_scaled(&d.dagger(), C64::new(-1.0, 0.0));
            assert!(diff.max_abs() < 1e-14);
            for i in 0..d.rows() {
                assert_eq!(d.get(i, i), C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn hamiltonian_commutes_with_excitation_number() {
        let mut params = ModelParams::new(4, 3);
        params.omega = 0.2;
        params.delta = 0.7;
        for basis in [sym(4, 3), full(3, 2)] {
            params.n = basis.n();
            let h = hamiltonian(&params, &basis).unwrap().matrix().to_dense();
            let nop = number_op(&basis).matrix().to_dense();
            let mut comm = h.mul(&nop);
            comm.add_scaled(&nop.mul(&h), C64::new(-1.0, 0.0));
            assert_eq!(comm.max_abs(), 0.0);
        }
    }

    #[test]
    fn hamiltonian_anticommutes_with_excited_parity_at_zero_detuning() {
        let mut params = ModelParams::new(4, 3);
        params.omega = 0.4;
        for basis in [sym(4, 3), full(3, 2)] {
            params.n = basis.n();
            let h = hamiltonian(&params, &basis).unwrap().matrix().to_dense();
            let pi = excited_parity_op(&basis).matrix().to_dense();
            let mut anti = h.mul(&pi);
            anti.add_scaled(&pi.mul(&h), C64::new(1.0, 0.0));
            assert_eq!(anti.max_abs(), 0.0);
        }
    }

    #[test]
    fn full_hamiltonian_matches_symmetric_on_embedded_vectors() {
        let mut params = ModelParams::new(4, 3);
        params.omega = 0.15;
        params.delta = 0.25;
        let sb = sym(4, 3);
        let fb = full(4, 3);
        let hs = hamiltonian_symmetric(&params, &sb).unwrap();
        let hf = hamiltonian_full(&params, &fb).unwrap();
        for seed in 0..3u64 {
            let v = random_vec(sb.len(), seed);
            let lhs = hf.apply(&embed_symmetric(&v, &sb, &fb).unwrap());
            let rhs = embed_symmetric(&hs.apply(&v), &sb, &fb).unwrap();
            let err: f64 = lhs
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-12, "embedding mismatch {err}");
        }
    }

    #[test]
    fn full_hamiltonian_annihilates_vacuum_and_splits_bright_dark() {
        let fb = full(2, 1);
        let params = ModelParams::new(2, 1);
        let h = hamiltonian_full(&params, &fb).unwrap();
        let vac = fb
            .index_of_full(&crate::basis::FullLabel { levels: vec![0, 0], nc: 0 })
            .unwrap();
        let mut v = vec![C64::new(0.0, 0.0); fb.len()];
        v[vac] = C64::new(1.0, 0.0);
        assert!(h.apply(&v).iter().all(|x| x.norm() == 0.0));

        // With Ω=0 only the symmetric excited combination couples to the
        // mode: eigenvalues ±√2 g once each, 0 with multiplicity d-2.
        let vals = eigvalsh(&h.matrix().to_dense()).unwrap();
        let d = fb.len();
        assert!((vals[0] + 2f64.sqrt()).abs() < 1e-12);
        assert!((vals[d - 1] - 2f64.sqrt()).abs() < 1e-12);
        for v in &vals[1..d - 1] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn semiclassical_spectrum_is_the_mode_ladder() {
        let mut params = ModelParams::new(20, 2);
        params.omega = 0.1 * (20f64).sqrt();
        let h = hamiltonian_semiclassical(&params).unwrap();
        let eps = params.epsilon();
        assert!((eps - 4.494441010848846).abs() < 1e-12);
        // Expected multiset {(k+ - k-) eps} over k0+k+ +k- <= 2.
        let mut expected = Vec::new();
        for k0 in 0..=2 {
            for kp in 0..=(2 - k0) {
                for km in 0..=(2 - k0 - kp) {
                    expected.push((kp as f64 - km as f64) * eps);
                }
            }
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let vals = eigvalsh(&h.matrix().to_dense()).unwrap();
        assert_eq!(vals.len(), expected.len());
        for (a, b) in vals.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }

        params.p = 0;
        let h0 = hamiltonian_semiclassical(&params).unwrap();
        assert_eq!(h0.dim(), 1);
        assert_eq!(h0.matrix().nnz(), 0);
    }

    #[test]
    fn jump_channel_inventory() {
        let mut params = ModelParams::new(4, 3);
        assert!(jump_channels(&params, &sym(4, 3)).unwrap().is_empty());

        params.kappa = 0.1;
        let ch = jump_channels(&params, &sym(4, 3)).unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].rate, 0.1);

        params.kappa = 0.0;
        params.gamma10 = 0.05;
        assert!(jump_channels(&params, &sym(4, 3)).is_err());
        let ch = jump_channels(&params, &full(4, 3)).unwrap();
        assert_eq!(ch.len(), 4);
    }

    #[test]
    fn jump_channels_never_raise_excitation() {
        let mut params = ModelParams::new(4, 3);
        params.kappa = 0.1;
        params.gamma0 = 0.05;
        params.gamma2 = 0.01;
        params.gamma10 = 0.02;
        params.gamma12 = 0.03;
        let basis = full(4, 3);
        for ch in jump_channels(&params, &basis).unwrap() {
            for (r, c, v) in ch.op.matrix().triplets() {
                assert!(v.norm() > 0.0);
                assert!(basis.excitation(r) <= basis.excitation(c));
            }
        }
    }

    #[test]
    fn collective_decay_matches_sum_of_individual() {
        let basis = full(3, 2);
        for level in [0u8, 2u8] {
            let coll = collective_decay_op(&basis, level).unwrap().matrix().to_dense();
            let mut acc = CMat::zeros(basis.len(), basis.len());
            for q in 0..3 {
                acc.add_scaled(
                    &individual_decay_op(&basis, q, level).unwrap().matrix().to_dense(),
                    C64::new(1.0, 0.0),
                );
            }
            acc.add_scaled(&coll, C64::new(-1.0, 0.0));
            assert_eq!(acc.max_abs(), 0.0);
        }
    }

    #[test]
    fn params_validation() {
        let mut p = ModelParams::new(4, 3);
        assert!(p.validate().is_ok());
        p.kappa = -0.1;
        assert!(p.validate().is_err());
        p.kappa = 0.0;
        p.g = 0.0;
        assert!(p.validate().is_err());
        p.g = 1.0;
        p.n = 0;
        assert!(p.validate().is_err());
    }
}
