//! Exact spectral structure of the coupled qutrit–boson sector Hamiltonian.
//!
//! The excitation number is conserved, so every sector decomposes into finite
//! blocks that can be diagonalised exactly.  This module constructs the
//! distinguished states of those blocks:
//!
//! * [`master_dark_state`] — the closed-form zero-energy state annihilated by
//!   the excited-state register, the attractor of the dissipative dynamics;
//! * [`zero_energy_basis`] — an orthonormal basis of the full zero-energy
//!   subspace of a block, ordered so the master dark state comes first;
//! * [`semiclassical_modes`] / [`semiclassical_eigenstate`] — the normal-mode
//!   (polaritonic) approximation obtained by freezing the first-ground-level
//!   register at its initial occupation;
//! * [`sector_eigenstates`] / [`group_multiplets`] — brute-force exact
//!   diagonalisation of one excitation block, with degeneracy grouping.

#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{binomial, embed_symmetric, Representation, SectorBasis, SymLabel};
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMat};
use crate::operators::{hamiltonian, ModelParams};
use crate::C64;

/// A zero-energy state of one excitation block, annihilated by the
/// excited-register lowering operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DarkState {
    /// Excitation number of the block the state lives in.
    pub p: usize,
    /// Amplitudes over the basis the state was built for.
    pub vector: Vec<C64>,
}

/// Occupations `(k0, kp, km)` of the three normal modes: the zero mode and
/// the upper/lower polaritons.  The corresponding energy is `(kp - km) * ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemiclassicalLabel {
    /// Zero-mode occupation.
    pub k0: usize,
    /// Upper-polariton occupation (energy `+ε` each).
    pub kp: usize,
    /// Lower-polariton occupation (energy `-ε` each).
    pub km: usize,
}

impl SemiclassicalLabel {
    /// Total excitation carried by the label.
    pub fn excitation(&self) -> usize {
        self.k0 + self.kp + self.km
    }

    /// Normal-mode energy `(kp - km) * ε` for the given parameters.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        (self.kp as f64 - self.km as f64) * params.epsilon()
    }
}

impl core::fmt::Display for SemiclassicalLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({};{}{})", self.k0, self.kp, self.km)
    }
}

/// The orthogonal transformation from the bare modes to the normal modes of
/// the frozen-register Hamiltonian.
///
/// Rows are the normal modes `(C0, C+, C-)`, columns the bare modes
/// `(c, a2, a1)`:
///
/// ```text
/// C0 =  cosθ c - sinθ a2
/// C± = (sinθ c + cosθ a2 ± a1) / √2
/// ```
///
/// The sign of the `a1` column is fixed so that `C+` excitations carry
/// energy `+ε`, i.e. `H = ε (C+†C+ - C-†C-)` in the frozen-register
/// approximation.  `θ = atan2(g√n, Ω)`, so `Ω = 0` gives exactly `θ = π/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMixing {
    /// Mixing angle `θ = atan2(g√n, Ω)` in `(0, π/2]`.
    pub theta: f64,
    /// Row-major coefficients of `(C0, C+, C-)` over `(c, a2, a1)`.
    pub matrix: [[f64; 3]; 3],
}

impl ModeMixing {
    /// Coefficient rows of the bare modes `(c, a2, a1)` over `(C0, C+, C-)`
    /// — the transpose, since the mixing matrix is orthogonal.
    pub fn inverse(&self) -> [[f64; 3]; 3] {
        let m = &self.matrix;
        [
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ]
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Unnormalised master-dark-state amplitude on the label `(n1=0, n2=k, nc=p-k)`.
///
/// The closed form is a binomial superposition of states with `k` qutrits
/// transferred to the second ground level and `p-k` photons:
///
/// ```text
/// α_k ∝ (-1)^(p-k) √C(n,k) g^k Ω^(p-k) / √((p-k)!)
/// ```
///
/// written multiplicatively so that `Ω = 0` degenerates gracefully to the
/// single fully transferred component `k = p`.
fn dark_amplitude(n: usize, p: usize, g: f64, omega: f64, k: usize) -> f64 {
    let sign = if (p - k) % 2 == 0 { 1.0 } else { -1.0 };
    sign * binomial(n as u32, k as u32).sqrt()
        * g.powi(k as i32)
        * omega.powi((p - k) as i32)
        / factorial(p - k).sqrt()
}

/// Multiply by a global phase so the largest-magnitude amplitude is real
/// and positive.  No-op on the zero vector.
fn fix_phase(v: &mut [C64]) {
    let mut best = 0usize;
    let mut mag = 0.0f64;
    for (i, a) in v.iter().enumerate() {
        if a.norm_sqr() > mag {
            mag = a.norm_sqr();
            best = i;
        }
    }
    if mag == 0.0 {
        return;
    }
    let phase = v[best] / v[best].norm();
    for a in v.iter_mut() {
        *a /= phase;
    }
}

fn normalize(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in v.iter_mut() {
            *a /= norm;
        }
    }
    norm
}

/// Build the master dark state of the excitation-`p` block (`p` taken from
/// `params`) over the given basis.
///
/// The state is supported on labels with an empty excited register, so it is
/// annihilated exactly (structurally, not just numerically) by the
/// excited-register lowering operators, and it has zero energy at any
/// detuning.  The overall phase makes the largest amplitude real positive.
///
/// Errors if `p > n` (the closed form needs at least `p` qutrits) or if the
/// basis cannot hold excitation `p`.  A full-representation basis gets the
/// symmetric construction expanded through [`embed_symmetric`].
pub fn master_dark_state(params: &ModelParams, basis: &Arc<SectorBasis>) -> Result<DarkState> {
    params.validate()?;
    let (n, p) = (params.n, params.p);
    if p > n {
        return Err(Error::InvalidParameter(format!(
            "master dark state needs p <= n, got p = {p}, n = {n}"
        )));
    }
    if basis.n() != n {
        return Err(Error::BasisMismatch {
            expected: format!("basis over {n} qutrits"),
            found: format!("{} qutrits", basis.n()),
        });
    }
    if p > basis.p_max() {
        return Err(Error::InvalidParameter(format!(
            "basis holds excitation <= {}, dark state needs {p}",
            basis.p_max()
        )));
    }
    match basis.representation() {
        Representation::Symmetric => {
            let mut v = vec![C64::new(0.0, 0.0); basis.len()];
            for k in 0..=p {
                let label = SymLabel {
                    n1: 0,
                    n2: k as u32,
                    nc: (p - k) as u32,
                };
                let i = basis
                    .index_of_sym(&label)
                    .ok_or_else(|| Error::Numerical(String::from("dark-state label missing")))?;
                v[i] = C64::new(dark_amplitude(n, p, params.g, params.omega, k), 0.0);
            }
            normalize(&mut v);
            fix_phase(&mut v);
            Ok(DarkState { p, vector: v })
        }
        Representation::Full => {
            let sym = Arc::new(SectorBasis::symmetric(n, basis.p_max())?);
            let inner = master_dark_state(params, &sym)?;
            let vector = embed_symmetric(&inner.vector, sym.as_ref(), basis.as_ref())?;
            Ok(DarkState { p, vector })
        }
    }
}

/// Orthonormal basis of the zero-energy subspace of the excitation-`p` block,
/// over a permutation-symmetric basis, at zero detuning.
///
/// The first vector is the master dark state; each further vector is the
/// projection of the normal-mode state `(p-2k; kk)` (equal upper/lower
/// polariton occupation, hence zero normal-mode energy) onto the exact null
/// space, Gram–Schmidt-orthogonalised against its predecessors.  This gives a
/// deterministic, physically labelled ordering.  The subspace dimension is
/// `⌊p/2⌋ + 1`.
///
/// Errors if the detuning is nonzero (the parity argument that protects the
/// subspace needs it), if the null-space threshold is ambiguous (an eigenvalue
/// falls within a decade of the cutoff), or if the dimension found differs
/// from `⌊p/2⌋ + 1`.
pub fn zero_energy_basis(
    params: &ModelParams,
    basis: &Arc<SectorBasis>,
    p: usize,
) -> Result<Vec<Vec<C64>>> {
    params.validate()?;
    if params.delta != 0.0 {
        return Err(Error::InvalidParameter(String::from(
            "zero-energy subspace is only protected at zero detuning",
        )));
    }
    if basis.representation() != Representation::Symmetric {
        return Err(Error::Unsupported(String::from(
            "zero-energy basis is built over the permutation-symmetric representation",
        )));
    }
    if p > basis.p_max() || p > basis.n() {
        return Err(Error::InvalidParameter(format!(
            "block p = {p} not contained in basis (n = {}, p_max = {})",
            basis.n(),
            basis.p_max()
        )));
    }

    let h = hamiltonian(params, basis)?;
    let dense = h.matrix().to_dense();
    let block: Vec<usize> = (0..basis.len())
        .filter(|&i| basis.excitation(i) == p as u32)
        .collect();
    let b = block.len();
    let mut hb = CMat::zeros(b, b);
    for (bi, &i) in block.iter().enumerate() {
        for (bj, &j) in block.iter().enumerate() {
            hb.set(bi, bj, dense.get(i, j));
        }
    }
    let (evals, evecs) = eigh(&hb)?;
    let scale = evals.iter().fold(0.0f64, |m, &w| m.max(w.abs()));
    let tau = 1e-10 * scale;
    let mut null_cols = Vec::new();
    for (k, &w) in evals.iter().enumerate() {
        if scale == 0.0 || w.abs() < tau {
            null_cols.push(k);
        } else if w.abs() < 10.0 * tau {
            return Err(Error::Numerical(format!(
                "zero-energy threshold ambiguous: eigenvalue {w:.3e} within a decade of cutoff {tau:.3e}"
            )));
        }
    }
    let expected = p / 2 + 1;
    if null_cols.len() != expected {
        return Err(Error::Numerical(format!(
            "zero-energy subspace of block p = {p} has dimension {}, expected {expected}",
            null_cols.len()
        )));
    }

    // Project a candidate (block coordinates) onto the numerical null space.
    let project = |v: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); b];
        for &col in &null_cols {
            let mut ov = C64::new(0.0, 0.0);
            for i in 0..b {
                ov += evecs.get(i, col).conj() * v[i];
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += ov * evecs.get(i, col);
            }
        }
        out
    };
    let restrict = |v: &[C64]| -> Vec<C64> { block.iter().map(|&i| v[i]).collect() };

    let dark = master_dark_state(params, basis)?;
    let mut first = project(&restrict(&dark.vector));
    let fid: f64 = first.iter().map(|a| a.norm_sqr()).sum();
    if fid < 1.0 - 1e-10 {
        return Err(Error::Numerical(format!(
            "master dark state lies outside the numerical null space (fidelity {fid:.12})"
        )));
    }
    normalize(&mut first);
    fix_phase(&mut first);

    let mut vecs = vec![first];
    for k in 1..expected {
        let label = SemiclassicalLabel {
            k0: p - 2 * k,
            kp: k,
            km: k,
        };
        let cand = semiclassical_eigenstate(label, params, basis)?;
        let mut u = project(&restrict(&cand));
        for q in &vecs {
            let ov: C64 = q.iter().zip(&u).map(|(a, b)| a.conj() * *b).sum();
            for (ui, qi) in u.iter_mut().zip(q) {
                *ui -= ov * *qi;
            }
        }
        let norm = normalize(&mut u);
        if norm < 1e-6 {
            return Err(Error::Numerical(format!(
                "zero-energy candidate {label} collapsed under orthogonalisation (norm {norm:.3e})"
            )));
        }
        fix_phase(&mut u);
        vecs.push(u);
    }

    // Lift block coordinates back to full basis length.
    Ok(vecs
        .into_iter()
        .map(|u| {
            let mut f = vec![C64::new(0.0, 0.0); basis.len()];
            for (bi, &i) in block.iter().enumerate() {
                f[i] = u[bi];
            }
            f
        })
        .collect())
}

/// Normal-mode transformation for the frozen-register approximation.
///
/// Errors only on invalid parameters; `Ω = 0` is fine and yields exactly
/// `θ = π/2` (the boson mode hybridises fully with the excited register).
pub fn semiclassical_modes(params: &ModelParams) -> Result<ModeMixing> {
    params.validate()?;
    let theta = params.theta();
    let (s, c) = (theta.sin(), theta.cos());
    let r = core::f64::consts::FRAC_1_SQRT_2;
    Ok(ModeMixing {
        theta,
        matrix: [[c, -s, 0.0], [s * r, c * r, r], [s * r, c * r, -r]],
    })
}

/// Build the normal-mode Fock state `|k0; kp km⟩` as a vector over the given
/// permutation-symmetric basis, by applying the creation polynomial
/// `(k0! kp! km!)^(-1/2) (C0†)^k0 (C+†)^kp (C-†)^km` to the vacuum.
///
/// The state only involves the boson mode, the second ground level, and the
/// excited level; the remaining qutrits stay in the first ground level.
/// Errors if any amplitude would require more than `n` qutrits out of the
/// first ground level (`n1 + n2 > n`), which is where the frozen-register
/// approximation stops making sense as an embedding.
pub fn semiclassical_eigenstate(
    label: SemiclassicalLabel,
    params: &ModelParams,
    basis: &Arc<SectorBasis>,
) -> Result<Vec<C64>> {
    params.validate()?;
    if basis.representation() != Representation::Symmetric {
        return Err(Error::Unsupported(String::from(
            "normal-mode eigenstates are built over the permutation-symmetric representation",
        )));
    }
    let total = label.excitation();
    if total > basis.p_max() {
        return Err(Error::InvalidParameter(format!(
            "label {label} carries excitation {total}, basis holds <= {}",
            basis.p_max()
        )));
    }
    let mixing = semiclassical_modes(params)?;

    // Work on an auxiliary three-mode ladder: the symmetric label set with
    // n = p_max makes the qutrit-count constraint inactive, so it is exactly
    // the three-mode Fock space truncated at `total` quanta.
    let mini = SectorBasis::symmetric(total.max(1), total)?;
    let mini_labels = mini.sym_labels().expect("symmetric basis has labels");
    let mut v = vec![C64::new(0.0, 0.0); mini.len()];
    let vac = mini
        .index_of_sym(&SymLabel { n1: 0, n2: 0, nc: 0 })
        .expect("vacuum present");
    v[vac] = C64::new(1.0, 0.0);

    // One creation operator: row gives coefficients over (c†, a2†, a1†).
    let create = |v: &[C64], row: &[f64; 3]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (j, amp) in v.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let lab = mini_labels[j];
            let targets = [
                (row[0], SymLabel { n1: lab.n1, n2: lab.n2, nc: lab.nc + 1 }, lab.nc + 1),
                (row[1], SymLabel { n1: lab.n1, n2: lab.n2 + 1, nc: lab.nc }, lab.n2 + 1),
                (row[2], SymLabel { n1: lab.n1 + 1, n2: lab.n2, nc: lab.nc }, lab.n1 + 1),
            ];
            for (co, t, occ) in targets {
                if co == 0.0 {
                    continue;
                }
                if let Some(i) = mini.index_of_sym(&t) {
                    out[i] += *amp * co * (occ as f64).sqrt();
                }
            }
        }
        out
    };

    for _ in 0..label.k0 {
        v = create(&v, &mixing.matrix[0]);
    }
    for _ in 0..label.kp {
        v = create(&v, &mixing.matrix[1]);
    }
    for _ in 0..label.km {
        v = create(&v, &mixing.matrix[2]);
    }
    let pref = 1.0 / (factorial(label.k0) * factorial(label.kp) * factorial(label.km)).sqrt();
    for a in v.iter_mut() {
        *a *= pref;
    }

    // Scatter into the physical basis, rejecting overflow of the register.
    let mut out = vec![C64::new(0.0, 0.0); basis.len()];
    for (j, amp) in v.iter().enumerate() {
        if amp.norm_sqr() <= 1e-28 {
            continue;
        }
        let lab = mini_labels[j];
        if (lab.n1 + lab.n2) as usize > basis.n() {
            return Err(Error::InvalidParameter(format!(
                "normal-mode state {label} needs {} qutrits out of the first ground level, ensemble has {}",
                lab.n1 + lab.n2,
                basis.n()
            )));
        }
        let i = basis
            .index_of_sym(&lab)
            .ok_or_else(|| Error::Numerical(String::from("normal-mode label missing")))?;
        out[i] = *amp;
    }
    normalize(&mut out);
    Ok(out)
}

/// Exact eigenpairs of the excitation-`p` block, ascending in energy.
/// Vectors are returned at full basis length (zero outside the block).
pub fn sector_eigenstates(
    params: &ModelParams,
    basis: &Arc<SectorBasis>,
    p: usize,
) -> Result<Vec<(f64, Vec<C64>)>> {
    params.validate()?;
    if p > basis.p_max() {
        return Err(Error::InvalidParameter(format!(
            "block p = {p} not contained in basis (p_max = {})",
            basis.p_max()
        )));
    }
    let h = hamiltonian(params, basis)?;
    let dense = h.matrix().to_dense();
    let block: Vec<usize> = (0..basis.len())
        .filter(|&i| basis.excitation(i) == p as u32)
        .collect();
    let b = block.len();
    let mut hb = CMat::zeros(b, b);
    for (bi, &i) in block.iter().enumerate() {
        for (bj, &j) in block.iter().enumerate() {
            hb.set(bi, bj, dense.get(i, j));
        }
    }
    let (evals, evecs) = eigh(&hb)?;
    Ok((0..b)
        .map(|k| {
            let mut v = vec![C64::new(0.0, 0.0); basis.len()];
            for (bi, &i) in block.iter().enumerate() {
                v[i] = evecs.get(bi, k);
            }
            (evals[k], v)
        })
        .collect())
}

/// Group ascending energies into degenerate multiplets: consecutive values
/// closer than `tol` land in the same group.  Returns index groups.
pub fn group_multiplets(energies: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &e) in energies.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (e - energies[*g.last().expect("nonempty")]).abs() <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}
