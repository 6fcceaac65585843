//! Labelings of `[0,k]^n` and the operations `meet`, `join`, `theta`.
//!
//! Label `0` is the neutral ("unassigned") element; `1..=k` are proper labels.
//! A [`Cube`] fixes `(n, k)` and provides the mixed-radix bijection between
//! labelings and `0..(k+1)^n` used as table keys throughout the crate.

use std::fmt;

use crate::error::{Error, Result};

/// Default bound on `(k+1)^n` for anything that materializes the whole cube.
pub const DEFAULT_MAX_CELLS: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling(Vec<u32>);

impl Labeling {
    pub fn new(labels: Vec<u32>) -> Self {
        Labeling(labels)
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&l| l != 0)
    }

    pub fn zero_count(&self) -> usize {
        zero_count(self)
    }
}

impl From<Vec<u32>> for Labeling {
    fn from(v: Vec<u32>) -> Self {
        Labeling(v)
    }
}

impl<const N: usize> From<[u32; N]> for Labeling {
    fn from(v: [u32; N]) -> Self {
        Labeling(v.to_vec())
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

fn same_len(x: &Labeling, y: &Labeling) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(())
}

#[inline]
pub(crate) fn meet_label(a: u32, b: u32) -> u32 {
    if a == b {
        a
    } else {
        0
    }
}

#[inline]
pub(crate) fn join_label(a: u32, b: u32) -> u32 {
    match (a, b) {
        _ if a == b => a,
        (0, _) => b,
        (_, 0) => a,
        _ => 0,
    }
}

/// Componentwise: `x_i` where `x_i = y_i`, otherwise `0`.
pub fn meet(x: &Labeling, y: &Labeling) -> Result<Labeling> {
    same_len(x, y)?;
    Ok(Labeling(x.0.iter().zip(&y.0).map(|(&a, &b)| meet_label(a, b)).collect()))
}

/// Componentwise: the common value, the nonzero one if the other is `0`,
/// and `0` on a conflict between two nonzero labels.
pub fn join(x: &Labeling, y: &Labeling) -> Result<Labeling> {
    same_len(x, y)?;
    Ok(Labeling(x.0.iter().zip(&y.0).map(|(&a, &b)| join_label(a, b)).collect()))
}

/// The dual discriminator, componentwise: `x_i` if `x_i = y_i`, else `z_i`.
pub fn theta(x: &Labeling, y: &Labeling, z: &Labeling) -> Result<Labeling> {
    same_len(x, y)?;
    same_len(x, z)?;
    if !(x.is_positive() && y.is_positive() && z.is_positive()) {
        return Err(Error::ZeroLabel);
    }
    Ok(Labeling(x.0.iter().zip(&y.0).zip(&z.0).map(|((&a, &b), &c)| if a == b { a } else { c }).collect()))
}

pub fn zero_count(x: &Labeling) -> usize {
    x.0.iter().filter(|&&l| l == 0).count()
}

/// The ambient cube `[0,k]^n` together with its mixed-radix indexing.
///
/// Index of `x` is `sum_j x_j * (k+1)^j`, so the first coordinate is the
/// least significant digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    n: usize,
    k: u32,
    cells: usize,
}

impl Cube {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        Self::with_limit(n, k, DEFAULT_MAX_CELLS)
    }

    pub fn with_limit(n: usize, k: u32, limit: u64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidShape { n, k });
        }
        let radix = u128::from(k) + 1;
        let mut cells: u128 = 1;
        for _ in 0..n {
            cells = cells.saturating_mul(radix);
            if cells > u128::from(limit) {
                break;
            }
        }
        if cells > u128::from(limit) || cells > usize::MAX as u128 {
            return Err(Error::SizeGuard { n, k, cells, limit });
        }
        Ok(Cube { n, k, cells: cells as usize })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radix(&self) -> usize {
        self.k as usize + 1
    }

    /// `(k+1)^n`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// `k^n`, the number of positive labelings.
    pub fn positive_cells(&self) -> usize {
        (self.k as usize).pow(self.n as u32)
    }

    /// `(k+1)^j` for `j = 0..n`.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.n);
        let mut acc = 1usize;
        for _ in 0..self.n {
            s.push(acc);
            acc *= self.radix();
        }
        s
    }

    pub fn check(&self, x: &Labeling) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { left: x.len(), right: self.n });
        }
        if let Some(&label) = x.0.iter().find(|&&l| l > self.k) {
            return Err(Error::LabelOutOfRange { label, k: self.k });
        }
        Ok(())
    }

    pub fn encode(&self, x: &Labeling) -> Result<usize> {
        self.check(x)?;
        Ok(self.encode_unchecked(x.labels()))
    }

    pub(crate) fn encode_unchecked(&self, labels: &[u32]) -> usize {
        let radix = self.radix();
        labels.iter().rev().fold(0usize, |acc, &l| acc * radix + l as usize)
    }

    pub fn decode(&self, index: usize) -> Result<Labeling> {
        if index >= self.cells {
            return Err(Error::IndexOutOfRange { index, cells: self.cells });
        }
        Ok(Labeling(self.digits(index)))
    }

    /// Labels of `index`, first coordinate first. `index` must be in range.
    pub fn digits(&self, mut index: usize) -> Vec<u32> {
        let radix = self.radix();
        let mut out = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            out.push((index % radix) as u32);
            index /= radix;
        }
        out
    }

    pub fn is_positive_index(&self, index: usize) -> bool {
        let radix = self.radix();
        let mut i = index;
        for _ in 0..self.n {
            if i.is_multiple_of(radix) {
                return false;
            }
            i /= radix;
        }
        true
    }

    pub fn zero_count_index(&self, index: usize) -> usize {
        let radix = self.radix();
        let mut i = index;
        let mut zeros = 0;
        for _ in 0..self.n {
            if i.is_multiple_of(radix) {
                zeros += 1;
            }
            i /= radix;
        }
        zeros
    }

    /// All labelings of the cube, in index order.
    pub fn iter(&self) -> impl Iterator<Item = Labeling> + '_ {
        (0..self.cells).map(move |i| Labeling(self.digits(i)))
    }

    /// Indices of `[k]^n`, ascending.
    pub fn positive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells).filter(move |&i| self.is_positive_index(i))
    }
}

/// Mixed-radix index of `x` in `[0,k]^{len(x)}`.
pub fn encode(x: &Labeling, k: u32) -> Result<usize> {
    Cube::with_limit(x.len(), k, u64::MAX)?.encode(x)
}

pub fn decode(index: usize, n: usize, k: u32) -> Result<Labeling> {
    Cube::with_limit(n, k, u64::MAX)?.decode(index)
}
