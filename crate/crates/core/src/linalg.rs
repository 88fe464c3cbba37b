//! Minimal complex linear algebra: dense matrices, CSR sparse matrices,
//! Hermitian eigensolvers and a matrix exponential.
//!
//! The dimensions in this problem are small (tens to a few hundred), so the
//! emphasis is on determinism and no external math dependencies rather than
//! asymptotic speed. Two independent eigensolver paths are provided — a
//! cyclic complex Jacobi iteration (with eigenvectors) and a real-doubled
//! Householder/QL iteration (eigenvalues only) — which cross-validate each
//! other in the tests.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Outer product `v w†`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        let mut m = CMat::zeros(v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m.data[i * w.len() + j] = vi * wj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn fill_zero(&mut self) {
        self.data.fill(C64::new(0.0, 0.0));
    }

    pub fn scale_mut(&mut self, a: C64) {
        for v in &mut self.data {
            *v *= a;
        }
    }

    /// `self += a * other` (elementwise).
    pub fn add_scaled(&mut self, other: &CMat, a: C64) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn dagger(&self) -> CMat {
        let mut m = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        m
    }

    /// Replace by the Hermitian part `(A + A†)/2`.
    pub fn hermitize(&mut self) {
        debug_assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            for j in i..self.cols {
                let a = self.get(i, j);
                let b = self.get(j, i);
                let m = (a + b.conj()) * 0.5;
                self.set(i, j, m);
                self.set(j, i, m.conj());
            }
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).fold(C64::new(0.0, 0.0), |a, b| a + b)
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (j, b) in other.row(k).iter().enumerate() {
                    orow[j] += a * b;
                }
            }
        }
        out
    }

    /// `v† M w` for vectors of matching length.
    pub fn sandwich(&self, v: &[C64], w: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            let mut rowdot = C64::new(0.0, 0.0);
            for (j, wj) in w.iter().enumerate() {
                rowdot += self.get(i, j) * wj;
            }
            acc += v[i].conj() * rowdot;
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Compressed sparse row complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpMat {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl SpMat {
    /// Build from (row, col, value) triplets; duplicates are summed and exact
    /// zeros dropped, so the layout is deterministic for any input order.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        // Drop entries that summed to exactly zero.
        let mut k = 0;
        let mut row = 0;
        let mut fi = Vec::with_capacity(indices.len());
        let mut fv = Vec::with_capacity(values.len());
        let mut new_counts = vec![0usize; rows];
        for r in 0..rows {
            let cnt = indptr[r + 1];
            for _ in 0..cnt {
                if values[k] != C64::new(0.0, 0.0) {
                    fi.push(indices[k]);
                    fv.push(values[k]);
                    new_counts[row] += 1;
                }
                k += 1;
            }
            row += 1;
        }
        let mut ptr = vec![0usize; rows + 1];
        for r in 0..rows {
            ptr[r + 1] = ptr[r] + new_counts[r];
        }
        SpMat { rows, cols, indptr: ptr, indices: fi, values: fv }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SpMat { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        self.indices[lo..hi].iter().copied().zip(self.values[lo..hi].iter().copied())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.rows {
            for (c, v) in self.row_entries(r) {
                out.push((r, c, v));
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> SpMat {
        let t = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        SpMat::from_triplets(self.cols, self.rows, t)
    }

    /// Sparse-sparse product (used for precomputing `L†L`).
    pub fn mul_sparse(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.cols, other.rows);
        let mut t = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row_entries(r) {
                for (c, b) in other.row_entries(k) {
                    t.push((r, c, a * b));
                }
            }
        }
        SpMat::from_triplets(self.rows, other.cols, t)
    }

    pub fn add(&self, other: &SpMat, factor: C64) -> SpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut t = self.triplets();
        t.extend(other.triplets().into_iter().map(|(r, c, v)| (r, c, factor * v)));
        SpMat::from_triplets(self.rows, self.cols, t)
    }

    pub fn scale(&self, a: C64) -> SpMat {
        let mut m = self.clone();
        for v in &mut m.values {
            *v *= a;
        }
        m
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for (c, v) in self.row_entries(r) {
                acc += v * x[c];
            }
            y[r] = acc;
        }
        y
    }

    /// `out += alpha * (self · b)` with dense `b`.
    pub fn acc_sparse_dense(&self, b: &CMat, alpha: C64, out: &mut CMat) {
        assert_eq!(self.cols, b.rows());
        assert_eq!(self.rows, out.rows());
        assert_eq!(b.cols(), out.cols());
        let ncols = b.cols();
        for r in 0..self.rows {
            let lo = self.indptr[r];
            let hi = self.indptr[r + 1];
            for t in lo..hi {
                let k = self.indices[t];
                let coef = alpha * self.values[t];
                let brow = b.row(k);
                let orow = out.row_mut(r);
                for j in 0..ncols {
                    orow[j] += coef * brow[j];
                }
            }
        }
    }

    /// `out += alpha * (b · self)` with dense `b`.
    pub fn acc_dense_sparse(&self, b: &CMat, alpha: C64, out: &mut CMat) {
        assert_eq!(b.cols(), self.rows);
        assert_eq!(b.rows(), out.rows());
        assert_eq!(self.cols, out.cols());
        for i in 0..b.rows() {
            let brow = b.row(i);
            for k in 0..self.rows {
                let coef = alpha * brow[k];
                if coef == C64::new(0.0, 0.0) {
                    continue;
                }
                let lo = self.indptr[k];
                let hi = self.indptr[k + 1];
                let orow = out.row_mut(i);
                for t in lo..hi {
                    orow[self.indices[t]] += coef * self.values[t];
                }
            }
        }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row_entries(r) {
                m.set(r, c, m.get(r, c) + v);
            }
        }
        m
    }
}

fn check_hermitian(a: &CMat) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidParameter(format!(
            "eigensolver needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order and the unitary matrix
/// whose columns are the matching eigenvectors.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    check_hermitian(a)?;
    let n = a.rows();
    let mut m = a.clone();
    m.hermitize();
    let mut v = CMat::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        // Off-diagonal Frobenius norm.
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m.get(i, j).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= 1e-14 * scale {
            let mut pairs: Vec<(f64, usize)> =
                (0..n).map(|i| (m.get(i, i).re, i)).collect();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let vecs = CMat::from_fn(n, n, |i, j| v.get(i, pairs[j].1));
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let h = apq.norm();
                if h <= tol {
                    continue;
                }
                let phi = apq.im.atan2(apq.re);
                let tau = (m.get(q, q).re - m.get(p, p).re) / (2.0 * h);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let eip = C64::new(phi.cos(), phi.sin());
                // Columns p and q of both m and v transform with
                //   J[p,p]=c, J[p,q]=s e^{i phi}, J[q,p]=-s e^{-i phi}, J[q,q]=c,
                // and rows of m with J†.
                for i in 0..n {
                    let aip = m.get(i, p);
                    let aiq = m.get(i, q);
                    m.set(i, p, aip * c - aiq * s * eip.conj());
                    m.set(i, q, aip * s * eip + aiq * c);
                }
                for j in 0..n {
                    let apj = m.get(p, j);
                    let aqj = m.get(q, j);
                    m.set(p, j, apj * c - aqj * s * eip);
                    m.set(q, j, apj * s * eip.conj() + aqj * c);
                }
                // Clean up rounding: the pivot is zero by construction and the
                // diagonal stays real.
                m.set(p, q, C64::new(0.0, 0.0));
                m.set(q, p, C64::new(0.0, 0.0));
                m.set(p, p, C64::new(m.get(p, p).re, 0.0));
                m.set(q, q, C64::new(m.get(q, q).re, 0.0));
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c - viq * s * eip.conj());
                    v.set(i, q, vip * s * eip + viq * c);
                }
            }
        }
    }
    Err(Error::Numerical(format!("Jacobi eigensolver did not converge for n = {n}")))
}

/// Eigenvalues of a Hermitian matrix, ascending, without eigenvectors.
///
/// Works on the real-doubled symmetric matrix `[[X, -Y], [Y, X]]` of
/// `A = X + iY`, whose spectrum is that of `A` with every eigenvalue doubled;
/// the doubled list is sorted and every second entry returned.
pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = 2 * n;
    // Row-major, real, symmetric.
    let mut w = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = a.get(i, j);
            // Hermitize on the fly to guard against rounding asymmetry.
            let zt = a.get(j, i);
            let x = 0.5 * (z.re + zt.re);
            let y = 0.5 * (z.im - zt.im);
            w[i * m + j] = x;
            w[(i + n) * m + (j + n)] = x;
            w[(i + n) * m + j] = y;
            w[i * m + (j + n)] = -y;
        }
    }
    let mut d = vec![0.0f64; m];
    let mut e = vec![0.0f64; m];
    tred_no_vectors(&mut w, m, &mut d, &mut e);
    tql_no_vectors(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((0..n).map(|i| d[2 * i]).collect())
}

/// Householder reduction of a real symmetric matrix to tridiagonal form,
/// without accumulating transformations (classic `tred1`).
fn tred_no_vectors(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

/// QL iteration with implicit shifts on a symmetric tridiagonal matrix
/// (diagonal `d`, subdiagonal `e`), eigenvalues only.
fn tql_no_vectors(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // Absolute deflation floor: a purely relative test stalls on blocks whose
    // diagonal is itself negligible against the matrix norm (the numerically
    // zero eigenvalues of a low-rank density matrix), so couplings below
    // roundoff at the overall scale are treated as exact zeros.
    let anorm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0f64, f64::max);
    let floor = f64::EPSILON * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd + floor {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numerical(format!(
                    "tridiagonal QL failed to converge at index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..mm).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    Ok(())
}

/// Matrix exponential by scaling and squaring with a Taylor series.
///
/// Intended for the small generators that appear here (rate matrices,
/// reference propagators); accuracy is limited by the series tolerance of
/// `1e-16` relative to the scaled norm.
pub fn expm(a: &CMat) -> CMat {
    assert_eq!(a.rows(), a.cols());
    let norm = a.inf_norm();
    let mut s = 0u32;
    let mut scaled = a.clone();
    if norm > 0.5 {
        s = (norm / 0.5).log2().ceil() as u32;
        scaled.scale_mut(C64::new(1.0 / 2f64.powi(s as i32), 0.0));
    }
    let n = a.rows();
    let mut result = CMat::identity(n);
    let mut term = CMat::identity(n);
    for k in 1..200 {
        term = term.mul(&scaled);
        term.scale_mut(C64::new(1.0 / k as f64, 0.0));
        result.add_scaled(&term, C64::new(1.0, 0.0));
        if term.inf_norm() <= 1e-16 * result.inf_norm() {
            break;
        }
    }
    for _ in 0..s {
        result = result.mul(&result);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> CMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMat::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        m.hermitize();
        m
    }

    #[test]
    fn csr_sums_duplicates_and_drops_zeros() {
        let m = SpMat::from_triplets(
            2,
            2,
            vec![
                (0, 1, c(1.0, 0.0)),
                (0, 1, c(2.0, 0.0)),
                (1, 0, c(3.0, 0.0)),
                (1, 0, c(-3.0, 0.0)),
            ],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.to_dense().get(0, 1), c(3.0, 0.0));
        assert_eq!(m.to_dense().get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn csr_dagger_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = Vec::new();
        for _ in 0..30 {
            t.push((
                rng.gen_range(0..5usize),
                rng.gen_range(0..4usize),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ));
        }
        let m = SpMat::from_triplets(5, 4, t);
        let back = m.dagger().dagger();
        assert_eq!(m, back);
    }

    #[test]
    fn sparse_dense_kernels_match_naive_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut t = Vec::new();
        for _ in 0..40 {
            t.push((
                rng.gen_range(0..6usize),
                rng.gen_range(0..6usize),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ));
        }
        let a = SpMat::from_triplets(6, 6, t);
        let b = random_hermitian(6, 13);
        let alpha = c(0.3, -0.7);

        let mut left = CMat::zeros(6, 6);
        a.acc_sparse_dense(&b, alpha, &mut left);
        let mut expect = a.to_dense().mul(&b);
        expect.scale_mut(alpha);
        for (x, y) in left.data().iter().zip(expect.data()) {
            assert!((x - y).norm() < 1e-13);
        }

        let mut right = CMat::zeros(6, 6);
        a.acc_dense_sparse(&b, alpha, &mut right);
        let mut expect = b.mul(&a.to_dense());
        expect.scale_mut(alpha);
        for (x, y) in right.data().iter().zip(expect.data()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn eigh_two_by_two_known_spectrum() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let mut m = CMat::zeros(2, 2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        m.set(1, 1, c(1.0, 0.0));
        let (vals, _) = eigh(&m).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_reconstructs_random_matrix() {
        let m = random_hermitian(12, 42);
        let (vals, vecs) = eigh(&m).unwrap();
        // A v_k = lambda_k v_k, and V is unitary.
        for k in 0..12 {
            for i in 0..12 {
                let mut av = c(0.0, 0.0);
                for j in 0..12 {
                    av += m.get(i, j) * vecs.get(j, k);
                }
                assert!((av - vecs.get(i, k) * vals[k]).norm() < 1e-11);
            }
        }
        let vtv = vecs.dagger().mul(&vecs);
        for i in 0..12 {
            for j in 0..12 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((vtv.get(i, j) - c(want, 0.0)).norm() < 1e-12);
            }
        }
        // Ascending order.
        for k in 1..12 {
            assert!(vals[k] >= vals[k - 1]);
        }
    }

    #[test]
    fn eigvalsh_matches_jacobi() {
        for seed in [1u64, 2, 3] {
            let m = random_hermitian(10, seed);
            let (want, _) = eigh(&m).unwrap();
            let got = eigvalsh(&m).unwrap();
            for (a, b) in want.iter().zip(&got) {
                assert!((a - b).abs() < 1e-11, "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn expm_known_cases() {
        // Diagonal: exp(diag(ln 2, 0)) = diag(2, 1).
        let mut d = CMat::zeros(2, 2);
        d.set(0, 0, c(2f64.ln(), 0.0));
        let e = expm(&d);
        assert!((e.get(0, 0) - c(2.0, 0.0)).norm() < 1e-14);
        assert!((e.get(1, 1) - c(1.0, 0.0)).norm() < 1e-14);

        // Nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]].
        let mut nmat = CMat::zeros(2, 2);
        nmat.set(0, 1, c(1.0, 0.0));
        let e = expm(&nmat);
        assert!((e.get(0, 1) - c(1.0, 0.0)).norm() < 1e-15);

        // exp(A) exp(-A) = I for a random Hermitian A.
        let a = random_hermitian(6, 5);
        let mut minus = a.clone();
        minus.scale_mut(c(-1.0, 0.0));
        let prod = expm(&a).mul(&expm(&minus));
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - c(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expm_agrees_with_eigendecomposition() {
        let a = random_hermitian(8, 17);
        // exp(iA) has eigenvalues e^{i lambda}; check unitarity.
        let mut ia = CMat::zeros(8, 8);
        ia.add_scaled(&a, c(0.0, 1.0));
        let u = expm(&ia);
        let prod = u.dagger().mul(&u);
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - c(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
