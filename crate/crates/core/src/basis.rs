//! Excitation-sector bases for an ensemble of three-level systems coupled to
//! one bosonic mode.
//!
//! Each qutrit has two ground levels (0 and 2) and one excited level (1); the
//! mode occupation is written `nc`. The conserved excitation number of a
//! basis state is
//!
//! ```text
//! p = (# qutrits in level 1) + (# qutrits in level 2) + nc,
//! ```
//!
//! and the Hamiltonian of the model connects states only within one `p`
//! block, so truncating at a maximal excitation `p_max` is exact for any
//! initial state supported on `p <= p_max`.
//!
//! Two representations are provided:
//!
//! * [`SectorBasis::symmetric`] — permutation-symmetric occupation labels
//!   `(n1, n2, nc)` with `n1 + n2 <= n`. Collective dynamics never leaves
//!   this subspace, and its size is independent of `n` once `n >= p_max`.
//! * [`SectorBasis::full`] — one level per qutrit, `(levels, nc)` with
//!   `levels[i] in {0, 1, 2}`. Required for individual-qutrit decay
//!   channels, and limited to `n <= 8` to keep dimensions manageable.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // tests link std, whose inherent f64 methods shadow the trait
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Occupation-number label in the permutation-symmetric representation:
/// `n1` qutrits excited, `n2` in the second ground level, `nc` bosons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymLabel {
    pub n1: u32,
    pub n2: u32,
    pub nc: u32,
}

impl SymLabel {
    pub fn excitation(&self) -> u32 {
        self.n1 + self.n2 + self.nc
    }
}

/// Per-qutrit label in the full representation: `levels[i]` is the level of
/// qutrit `i`, plus the boson occupation `nc`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullLabel {
    pub levels: Vec<u8>,
    pub nc: u32,
}

impl FullLabel {
    pub fn excitation(&self) -> u32 {
        self.levels.iter().filter(|&&l| l != 0).count() as u32 + self.nc
    }

    /// Collective occupation numbers of this configuration.
    pub fn to_sym(&self) -> SymLabel {
        let n1 = self.levels.iter().filter(|&&l| l == 1).count() as u32;
        let n2 = self.levels.iter().filter(|&&l| l == 2).count() as u32;
        SymLabel { n1, n2, nc: self.nc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Symmetric,
    Full,
}

#[derive(Debug, Clone)]
pub struct SymBasis {
    n: usize,
    p_max: usize,
    labels: Vec<SymLabel>,
    index: BTreeMap<SymLabel, usize>,
}

#[derive(Debug, Clone)]
pub struct FullBasis {
    n: usize,
    p_max: usize,
    labels: Vec<FullLabel>,
    index: BTreeMap<FullLabel, usize>,
}

/// Basis of the truncated sector `p <= p_max`, in either representation.
#[derive(Debug, Clone)]
pub enum SectorBasis {
    Symmetric(SymBasis),
    Full(FullBasis),
}

impl SectorBasis {
    /// Permutation-symmetric basis for `n` qutrits truncated at `p_max`.
    /// Labels are enumerated in ascending `(n1, n2, nc)` order.
    pub fn symmetric(n: usize, p_max: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("qutrit count must be positive".into()));
        }
        let mut labels = Vec::new();
        for n1 in 0..=(n.min(p_max) as u32) {
            for n2 in 0..=(n as u32 - n1).min(p_max as u32 - n1) {
                for nc in 0..=(p_max as u32 - n1 - n2) {
                    labels.push(SymLabel { n1, n2, nc });
                }
            }
        }
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok(SectorBasis::Symmetric(SymBasis { n, p_max, labels, index }))
    }

    /// Full per-qutrit basis truncated at `p_max`. Level configurations are
    /// enumerated lexicographically (last qutrit fastest) with the boson
    /// occupation innermost. Limited to `n <= 8`.
    pub fn full(n: usize, p_max: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("qutrit count must be positive".into()));
        }
        if n > 8 {
            return Err(Error::Unsupported(format!(
                "full representation supports at most 8 qutrits, got {n}"
            )));
        }
        let mut labels = Vec::new();
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut levels = vec![0u8; n];
            let mut rem = code;
            for i in (0..n).rev() {
                levels[i] = (rem % 3) as u8;
                rem /= 3;
            }
            let weight = levels.iter().filter(|&&l| l != 0).count();
            if weight > p_max {
                continue;
            }
            for nc in 0..=(p_max - weight) as u32 {
                labels.push(FullLabel { levels: levels.clone(), nc });
            }
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(SectorBasis::Full(FullBasis { n, p_max, labels, index }))
    }

    pub fn representation(&self) -> Representation {
        match self {
            SectorBasis::Symmetric(_) => Representation::Symmetric,
            SectorBasis::Full(_) => Representation::Full,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SectorBasis::Symmetric(b) => b.labels.len(),
            SectorBasis::Full(b) => b.labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n(&self) -> usize {
        match self {
            SectorBasis::Symmetric(b) => b.n,
            SectorBasis::Full(b) => b.n,
        }
    }

    pub fn p_max(&self) -> usize {
        match self {
            SectorBasis::Symmetric(b) => b.p_max,
            SectorBasis::Full(b) => b.p_max,
        }
    }

    /// Excitation number of basis state `i`.
    pub fn excitation(&self, i: usize) -> u32 {
        match self {
            SectorBasis::Symmetric(b) => b.labels[i].excitation(),
            SectorBasis::Full(b) => b.labels[i].excitation(),
        }
    }

    /// Number of basis states in each excitation block `p = 0..=p_max`.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.p_max() + 1];
        for i in 0..self.len() {
            sizes[self.excitation(i) as usize] += 1;
        }
        sizes
    }

    pub fn sym_labels(&self) -> Option<&[SymLabel]> {
        match self {
            SectorBasis::Symmetric(b) => Some(&b.labels),
            SectorBasis::Full(_) => None,
        }
    }

    pub fn full_labels(&self) -> Option<&[FullLabel]> {
        match self {
            SectorBasis::Symmetric(_) => None,
            SectorBasis::Full(b) => Some(&b.labels),
        }
    }

    pub fn index_of_sym(&self, label: &SymLabel) -> Option<usize> {
        match self {
            SectorBasis::Symmetric(b) => b.index.get(label).copied(),
            SectorBasis::Full(_) => None,
        }
    }

    pub fn index_of_full(&self, label: &FullLabel) -> Option<usize> {
        match self {
            SectorBasis::Symmetric(_) => None,
            SectorBasis::Full(b) => b.index.get(label).copied(),
        }
    }

    /// Map from basis indices to (qutrit-part, boson-part) factor indices for
    /// the qutrits-versus-mode bipartition.
    pub fn qutrit_boson_split(&self) -> SplitMap {
        let b_count = self.p_max() + 1;
        match self {
            SectorBasis::Symmetric(b) => {
                let mut occ: Vec<(u32, u32)> = b.labels.iter().map(|l| (l.n1, l.n2)).collect();
                occ.sort_unstable();
                occ.dedup();
                let a_index: BTreeMap<(u32, u32), usize> =
                    occ.iter().enumerate().map(|(i, &k)| (k, i)).collect();
                let pairs = b
                    .labels
                    .iter()
                    .map(|l| (a_index[&(l.n1, l.n2)], l.nc as usize))
                    .collect();
                SplitMap { a_count: occ.len(), b_count, pairs }
            }
            SectorBasis::Full(b) => {
                let mut occ: Vec<Vec<u8>> = b.labels.iter().map(|l| l.levels.clone()).collect();
                occ.sort_unstable();
                occ.dedup();
                let a_index: BTreeMap<Vec<u8>, usize> =
                    occ.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
                let pairs = b
                    .labels
                    .iter()
                    .map(|l| (a_index[&l.levels], l.nc as usize))
                    .collect();
                SplitMap { a_count: occ.len(), b_count, pairs }
            }
        }
    }
}

/// Factorization of a sector basis into qutrit-side and mode-side indices.
///
/// `pairs[i] = (a, b)` places basis state `i` at position `a * b_count + b`
/// of the padded product space; positions not hit by any basis state are
/// unoccupied padding.
#[derive(Debug, Clone)]
pub struct SplitMap {
    pub a_count: usize,
    pub b_count: usize,
    pub pairs: Vec<(usize, usize)>,
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Number of distinct qutrit level assignments with the given collective
/// occupations, `n! / (n0! n1! n2!)`.
fn multiplicity(n: u32, n1: u32, n2: u32) -> f64 {
    binomial(n, n1) * binomial(n - n1, n2)
}

/// Expand a permutation-symmetric state vector into the full representation.
///
/// A symmetric occupation state is the equal-amplitude superposition of all
/// level assignments with those occupations, so each full-basis amplitude is
/// the symmetric amplitude divided by the square root of the assignment
/// count. The expansion is norm-preserving and exact.
pub fn embed_symmetric(
    v: &[C64],
    sym: &SectorBasis,
    full: &SectorBasis,
) -> Result<Vec<C64>> {
    let (sb, fb) = match (sym, full) {
        (SectorBasis::Symmetric(s), SectorBasis::Full(f)) => (s, f),
        _ => {
            return Err(Error::BasisMismatch {
                expected: "symmetric source and full target".into(),
                found: "other representation pairing".into(),
            })
        }
    };
    if sb.n != fb.n || sb.p_max != fb.p_max {
        return Err(Error::BasisMismatch {
            expected: format!("n = {}, p_max = {}", sb.n, sb.p_max),
            found: format!("n = {}, p_max = {}", fb.n, fb.p_max),
        });
    }
    if v.len() != sb.labels.len() {
        return Err(Error::BasisMismatch {
            expected: format!("vector of length {}", sb.labels.len()),
            found: format!("length {}", v.len()),
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); fb.labels.len()];
    for (i, label) in fb.labels.iter().enumerate() {
        let s = label.to_sym();
        if let Some(&j) = sb.index.get(&s) {
            let mult = multiplicity(sb.n as u32, s.n1, s.n2);
            out[i] = v[j] / C64::new(mult.sqrt(), 0.0);
        }
    }
    Ok(out)
}
