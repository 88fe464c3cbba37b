//! State diagnostics: partial transpose, logarithmic negativity, purity,
//! populations.
//!
//! Entanglement is always measured across the qutrits-versus-mode cut. A
//! sector basis does not enumerate the whole product of its qutrit and boson
//! factor spaces, so density matrices are first scattered into the padded
//! product space described by [`SplitMap`]; the padding only contributes
//! zero eigenvalues and leaves every spectral quantity unchanged.

use alloc::format;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use crate::basis::{SectorBasis, SplitMap};
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, CMat};
use crate::C64;

/// Partial transpose of `rho` with respect to the boson factor, returned on
/// the padded product space of the qutrits-versus-mode bipartition.
///
/// Entry `((q, b), (q', b'))` of the output equals entry `((q, b'), (q', b))`
/// of the embedded `rho`; the result is Hermitian with the same trace.
pub fn partial_transpose_boson(rho: &CMat, basis: &SectorBasis) -> CMat {
    partial_transpose_boson_with(rho, &basis.qutrit_boson_split())
}

/// [`partial_transpose_boson`] with a precomputed split (for hot loops).
pub fn partial_transpose_boson_with(rho: &CMat, split: &SplitMap) -> CMat {
    debug_assert_eq!(rho.rows(), split.pairs.len());
    debug_assert_eq!(rho.cols(), split.pairs.len());
    let bc = split.b_count;
    let dim = split.a_count * bc;
    let mut out = CMat::zeros(dim, dim);
    for (i, &(ai, bi)) in split.pairs.iter().enumerate() {
        for (j, &(aj, bj)) in split.pairs.iter().enumerate() {
            // Boson indices swap between row and column.
            out.set(ai * bc + bj, aj * bc + bi, rho.get(i, j));
        }
    }
    out
}

/// Logarithmic negativity `log₂ Σ|λ_i|` over the eigenvalues of the partial
/// transpose, clamped at zero from below (roundoff can push the trace norm
/// of a separable state marginally under 1).
pub fn log_negativity(rho: &CMat, basis: &SectorBasis) -> Result<f64> {
    log_negativity_with(rho, &basis.qutrit_boson_split())
}

/// [`log_negativity`] with a precomputed split (for hot loops).
pub fn log_negativity_with(rho: &CMat, split: &SplitMap) -> Result<f64> {
    let pt = partial_transpose_boson_with(rho, split);
    let vals = eigvalsh(&pt)?;
    let trace_norm: f64 = vals.iter().map(|v| v.abs()).sum();
    Ok(trace_norm.max(1.0).log2())
}

/// `Tr ρ²`; equals 1 exactly for pure states.
pub fn purity(rho: &CMat) -> f64 {
    // For Hermitian ρ, Tr ρ² is the squared Frobenius norm.
    let f = rho.frobenius_norm();
    f * f
}

/// `|Tr ρ − 1|`, the integration-quality diagnostic.
pub fn trace_deviation(rho: &CMat) -> f64 {
    (rho.trace().re - 1.0).abs().max(rho.trace().im.abs())
}

/// Smallest eigenvalue of `rho` (positivity diagnostic).
pub fn min_eigenvalue(rho: &CMat) -> Result<f64> {
    let vals = eigvalsh(rho)?;
    vals.first().copied().ok_or_else(|| Error::Numerical("empty density matrix".into()))
}

/// `⟨v|ρ|v⟩` for a normalized state vector; real and clamped to `[0, 1]`
/// within a small tolerance for integrator drift.
pub fn population(rho: &CMat, v: &[C64]) -> Result<f64> {
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "population requires a normalized state, got norm {norm}"
        )));
    }
    let val = rho.sandwich(v, v);
    if val.im.abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "population has a non-real expectation value ({} + {}i)",
            val.re, val.im
        )));
    }
    let tol = 1e-6;
    if val.re < -tol || val.re > 1.0 + tol {
        return Err(Error::Numerical(format!("population {} outside [0, 1]", val.re)));
    }
    Ok(val.re.clamp(0.0, 1.0))
}

/// Schmidt coefficients (descending singular values) of a pure state across
/// the qutrits-versus-mode cut. For a normalized state they square-sum to 1,
/// and `E_N = 2 log₂ (Σ σ_i)` — an independent oracle for [`log_negativity`].
pub fn schmidt_coefficients(psi: &[C64], basis: &SectorBasis) -> Result<Vec<f64>> {
    let split = basis.qutrit_boson_split();
    if psi.len() != split.pairs.len() {
        return Err(Error::BasisMismatch {
            expected: format!("state of length {}", split.pairs.len()),
            found: format!("length {}", psi.len()),
        });
    }
    // Amplitude matrix A over (qutrit, boson); singular values via the small
    // Gram matrix A†A on the boson side.
    let bc = split.b_count;
    let mut a = CMat::zeros(split.a_count, bc);
    for (i, &(ai, bi)) in split.pairs.iter().enumerate() {
        a.set(ai, bi, psi[i]);
    }
    let gram = a.dagger().mul(&a);
    let vals = eigvalsh(&gram)?;
    let mut sigma: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{embed_symmetric, SymLabel};
    use alloc::sync::Arc;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_state(d: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<C64> =
            (0..d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= c(n, 0.0);
        }
        v
    }

    fn projector(v: &[C64]) -> CMat {
        CMat::outer(v, v)
    }

    /// Embed rho into the padded product space without transposing.
    fn pad(rho: &CMat, split: &crate::basis::SplitMap) -> CMat {
        let bc = split.b_count;
        let dim = split.a_count * bc;
        let mut out = CMat::zeros(dim, dim);
        for (i, &(ai, bi)) in split.pairs.iter().enumerate() {
            for (j, &(aj, bj)) in split.pairs.iter().enumerate() {
                out.set(ai * bc + bi, aj * bc + bj, rho.get(i, j));
            }
        }
        out
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let basis = SectorBasis::symmetric(3, 2).unwrap();
        let split = basis.qutrit_boson_split();
        let v = random_state(basis.len(), 1);
        let w = random_state(basis.len(), 2);
        let mut rho = projector(&v);
        rho.add_scaled(&projector(&w), c(1.0, 0.0));
        rho.scale_mut(c(0.5, 0.0));

        let pt = partial_transpose_boson(&rho, &basis);
        // Transposing the boson factor of the padded matrix again must give
        // the padded original.
        let bc = split.b_count;
        let dim = split.a_count * bc;
        let mut pt2 = CMat::zeros(dim, dim);
        for ar in 0..split.a_count {
            for br in 0..bc {
                for ac in 0..split.a_count {
                    for bcc in 0..bc {
                        pt2.set(ar * bc + br, ac * bc + bcc, pt.get(ar * bc + bcc, ac * bc + br));
                    }
                }
            }
        }
        let padded = pad(&rho, &split);
        let mut diff = pt2;
        diff.add_scaled(&padded, c(-1.0, 0.0));
        assert!(diff.max_abs() < 1e-15);

        // Hermitian with the original trace.
        let mut anti = pt.clone();
        anti.add_scaled(&pt.dagger(), c(-1.0, 0.0));
        assert!(anti.max_abs() < 1e-15);
        assert!((pt.trace() - rho.trace()).norm() < 1e-14);
    }

    #[test]
    fn product_states_have_zero_negativity() {
        let basis = SectorBasis::symmetric(2, 2).unwrap();
        let split = basis.qutrit_boson_split();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // psi = x ⊗ y scattered into the sector basis (entries outside the
        // sector are zero, which only truncates the product state).
        let x: Vec<C64> =
            (0..split.a_count).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let y: Vec<C64> =
            (0..split.b_count).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let mut psi: Vec<C64> = split.pairs.iter().map(|&(a, b)| x[a] * y[b]).collect();
        let n: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut psi {
            *v /= c(n, 0.0);
        }
        // Keep only states that make the truncation an exact product: use a
        // boson-vacuum product so the cut is exactly separable.
        let mut psi2 = vec![c(0.0, 0.0); basis.len()];
        for (i, &(a, b)) in split.pairs.iter().enumerate() {
            if b == 0 {
                psi2[i] = x[a];
            }
        }
        let n: f64 = psi2.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut psi2 {
            *v /= c(n, 0.0);
        }
        let rho = projector(&psi2);
        assert!(log_negativity(&rho, &basis).unwrap() < 1e-12);
        let sigma = schmidt_coefficients(&psi2, &basis).unwrap();
        assert!((sigma[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_state_negativity_is_one() {
        let basis = SectorBasis::symmetric(1, 1).unwrap();
        let mut psi = vec![c(0.0, 0.0); basis.len()];
        let i = basis.index_of_sym(&SymLabel { n1: 0, n2: 1, nc: 0 }).unwrap();
        let j = basis.index_of_sym(&SymLabel { n1: 0, n2: 0, nc: 1 }).unwrap();
        psi[i] = c(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        psi[j] = c(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = projector(&psi);
        assert!((log_negativity(&rho, &basis).unwrap() - 1.0).abs() < 1e-12);

        // The padded partial transpose of a maximally entangled pair has
        // eigenvalue -1/2.
        let pt = partial_transpose_boson(&rho, &basis);
        let vals = eigvalsh(&pt).unwrap();
        assert!((vals[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn frozen_dark_state_negativity() {
        // Two-component state with amplitudes (-0.15, 2)/√4.0225 across the
        // cut: E_N = 2 log₂(0.0747906 + 0.9972007) = 0.200581.
        let basis = SectorBasis::symmetric(4, 1).unwrap();
        let norm = (4.0f64 + 0.15 * 0.15).sqrt();
        let mut psi = vec![c(0.0, 0.0); basis.len()];
        let i = basis.index_of_sym(&SymLabel { n1: 0, n2: 0, nc: 1 }).unwrap();
        let j = basis.index_of_sym(&SymLabel { n1: 0, n2: 1, nc: 0 }).unwrap();
        psi[i] = c(-0.15 / norm, 0.0);
        psi[j] = c(2.0 / norm, 0.0);
        let rho = projector(&psi);
        let en = log_negativity(&rho, &basis).unwrap();
        assert!((en - 0.200581).abs() < 1e-5, "E_N = {en}");
        assert!((en - 0.2010).abs() < 1e-3);
    }

    #[test]
    fn pure_state_negativity_matches_schmidt_oracle() {
        let basis = SectorBasis::symmetric(3, 2).unwrap();
        for seed in 0..20u64 {
            let psi = random_state(basis.len(), seed);
            let rho = projector(&psi);
            let en = log_negativity(&rho, &basis).unwrap();
            let sigma = schmidt_coefficients(&psi, &basis).unwrap();
            let oracle = 2.0 * sigma.iter().sum::<f64>().log2();
            assert!(
                (en - oracle.max(0.0)).abs() < 1e-9,
                "seed {seed}: PT route {en} vs Schmidt route {oracle}"
            );
        }
    }

    #[test]
    fn negativity_invariant_under_representation_embedding() {
        let sym = Arc::new(SectorBasis::symmetric(4, 3).unwrap());
        let full = Arc::new(SectorBasis::full(4, 3).unwrap());
        let mut rho_s = CMat::zeros(sym.len(), sym.len());
        let mut rho_f = CMat::zeros(full.len(), full.len());
        let weights = [0.5, 0.3, 0.2];
        for (k, w) in weights.iter().enumerate() {
            let v = random_state(sym.len(), 40 + k as u64);
            rho_s.add_scaled(&projector(&v), c(*w, 0.0));
            let vf = embed_symmetric(&v, &sym, &full).unwrap();
            rho_f.add_scaled(&projector(&vf), c(*w, 0.0));
        }
        let en_s = log_negativity(&rho_s, &sym).unwrap();
        let en_f = log_negativity(&rho_f, &full).unwrap();
        assert!((en_s - en_f).abs() < 1e-8, "sym {en_s} vs full {en_f}");
    }

    #[test]
    fn purity_basics() {
        let basis = SectorBasis::symmetric(2, 1).unwrap();
        let d = basis.len();
        let v = random_state(d, 9);
        assert!((purity(&projector(&v)) - 1.0).abs() < 1e-12);

        let mut mixed = CMat::identity(d);
        mixed.scale_mut(c(1.0 / d as f64, 0.0));
        assert!((purity(&mixed) - 1.0 / d as f64).abs() < 1e-12);

        let w = random_state(d, 10);
        // Orthogonalize w against v.
        let overlap: C64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        let mut w2: Vec<C64> = w.iter().zip(&v).map(|(b, a)| b - overlap * a).collect();
        let n: f64 = w2.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut w2 {
            *x /= c(n, 0.0);
        }
        let mut rho = projector(&v);
        rho.add_scaled(&projector(&w2), c(1.0, 0.0));
        rho.scale_mut(c(0.5, 0.0));
        assert!((purity(&rho) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn population_basics() {
        let basis = SectorBasis::symmetric(2, 1).unwrap();
        let v = random_state(basis.len(), 21);
        let rho = projector(&v);
        assert!((population(&rho, &v).unwrap() - 1.0).abs() < 1e-12);

        // Orthogonal direction has zero population.
        let mut w = random_state(basis.len(), 22);
        let overlap: C64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        for (x, a) in w.iter_mut().zip(&v) {
            *x -= overlap * a;
        }
        let n: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut w {
            *x /= c(n, 0.0);
        }
        assert!(population(&rho, &w).unwrap() < 1e-12);

        // Unnormalized input is rejected.
        let long: Vec<C64> = v.iter().map(|x| x * c(2.0, 0.0)).collect();
        assert!(population(&rho, &long).is_err());
    }

    #[test]
    fn diagnostics_on_a_projector() {
        let basis = SectorBasis::symmetric(2, 2).unwrap();
        let v = random_state(basis.len(), 31);
        let rho = projector(&v);
        assert!(trace_deviation(&rho) < 1e-12);
        let min = min_eigenvalue(&rho).unwrap();
        assert!(min > -1e-12 && min < 1e-12);
    }
}
