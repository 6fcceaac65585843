use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::labeling::{Cube, Labeling};
use crate::value::CostValue;

/// Which part of `[0,k]^n` a table ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainKind {
    /// `[k]^n`: no zero labels.
    PositiveOnly,
    /// `[0,k]^n`.
    Full,
}

impl DomainKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DomainKind::PositiveOnly => "pos",
            DomainKind::Full => "full",
        }
    }
}

/// A function on the cube with values in `Q ∪ {+inf}`.
///
/// Only finite entries are stored, keyed by cube index; a missing key
/// means `+inf`. The key set is the domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostTable {
    cube: Cube,
    kind: DomainKind,
    entries: BTreeMap<usize, BigRational>,
}

impl CostTable {
    pub fn new(n: usize, k: u32, kind: DomainKind) -> Result<Self> {
        Ok(Self::empty(Cube::new(n, k)?, kind))
    }

    pub fn empty(cube: Cube, kind: DomainKind) -> Self {
        CostTable { cube, kind, entries: BTreeMap::new() }
    }

    /// Builds a table from `(labeling, value)` rows; `+inf` rows are dropped.
    pub fn from_rows<I>(cube: Cube, kind: DomainKind, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Labeling, CostValue)>,
    {
        let mut t = Self::empty(cube, kind);
        for (x, v) in rows {
            t.set(&x, v)?;
        }
        Ok(t)
    }

    /// The constant function `value` on every cell the kind admits.
    pub fn constant(cube: Cube, kind: DomainKind, value: BigRational) -> Self {
        let mut t = Self::empty(cube, kind);
        for i in 0..cube.cells() {
            if kind == DomainKind::Full || cube.is_positive_index(i) {
                t.entries.insert(i, value.clone());
            }
        }
        t
    }

    pub fn cube(&self) -> Cube {
        self.cube
    }

    pub fn n(&self) -> usize {
        self.cube.n()
    }

    pub fn k(&self) -> u32 {
        self.cube.k()
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn admits(&self, index: usize) -> bool {
        self.kind == DomainKind::Full || self.cube.is_positive_index(index)
    }

    /// Sets `g(x)`; `+inf` removes the entry.
    pub fn set(&mut self, x: &Labeling, value: CostValue) -> Result<()> {
        let i = self.cube.encode(x)?;
        self.set_index(i, value)
    }

    pub fn set_index(&mut self, index: usize, value: CostValue) -> Result<()> {
        if index >= self.cube.cells() {
            return Err(Error::IndexOutOfRange { index, cells: self.cube.cells() });
        }
        if !self.admits(index) {
            return Err(Error::KindViolation);
        }
        match value {
            CostValue::Finite(v) => {
                self.entries.insert(index, v);
            }
            CostValue::Infinity => {
                self.entries.remove(&index);
            }
        }
        Ok(())
    }

    pub fn get(&self, x: &Labeling) -> Result<CostValue> {
        Ok(self.value_at(self.cube.encode(x)?))
    }

    pub fn value_at(&self, index: usize) -> CostValue {
        match self.entries.get(&index) {
            Some(v) => CostValue::Finite(v.clone()),
            None => CostValue::Infinity,
        }
    }

    pub fn finite_at(&self, index: usize) -> Option<&BigRational> {
        self.entries.get(&index)
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.entries.contains_key(&index)
    }

    /// Finite entries in ascending index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &BigRational)> + '_ {
        self.entries.iter().map(|(&i, v)| (i, v))
    }

    pub fn domain_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Keeps only the entries on `[k]^n`, as a positive-only table.
    pub fn restrict_positive(&self) -> CostTable {
        CostTable {
            cube: self.cube,
            kind: DomainKind::PositiveOnly,
            entries: self
                .entries
                .iter()
                .filter(|(&i, _)| self.cube.is_positive_index(i))
                .map(|(&i, v)| (i, v.clone()))
                .collect(),
        }
    }

    /// Same entries, relabelled as a full-cube table.
    pub fn to_full(&self) -> CostTable {
        CostTable { cube: self.cube, kind: DomainKind::Full, entries: self.entries.clone() }
    }

    /// Least common multiple of the denominators of all finite values.
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    pub fn is_integer_valued(&self) -> bool {
        self.entries.values().all(|v| v.is_integer())
    }

    pub(crate) fn from_parts(cube: Cube, kind: DomainKind, entries: BTreeMap<usize, BigRational>) -> Self {
        CostTable { cube, kind, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_only_rejects_zero_labels() {
        let mut t = CostTable::new(2, 2, DomainKind::PositiveOnly).unwrap();
        assert_eq!(t.set(&Labeling::from([0, 1]), CostValue::zero()), Err(Error::KindViolation));
        t.set(&Labeling::from([1, 2]), CostValue::from_int(3)).unwrap();
        assert_eq!(t.get(&Labeling::from([1, 2])).unwrap(), CostValue::from_int(3));
        assert_eq!(t.get(&Labeling::from([2, 2])).unwrap(), CostValue::Infinity);
        t.set(&Labeling::from([1, 2]), CostValue::Infinity).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn denominators() {
        let cube = Cube::new(1, 3).unwrap();
        let t = CostTable::from_rows(
            cube,
            DomainKind::Full,
            [
                (Labeling::from([0]), CostValue::ratio(1, 3)),
                (Labeling::from([1]), CostValue::ratio(1, 2)),
                (Labeling::from([2]), CostValue::from_int(7)),
            ],
        )
        .unwrap();
        assert_eq!(t.denominator_lcm(), BigInt::from(6));
        assert!(!t.is_integer_valued());
        assert_eq!(t.restrict_positive().len(), 2);
    }
}
