//! Closure operators on sets of labelings: `C_theta`, `C_meet` and
//! `C_{meet,join}`, plus the theta-closure witness test for extendability.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::labeling::{join_label, meet_label, Cube, Labeling};

/// A set of labelings of one cube, stored by cube index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelingSet {
    cube: Cube,
    members: BTreeSet<usize>,
}

impl LabelingSet {
    pub fn new(cube: Cube) -> Self {
        LabelingSet { cube, members: BTreeSet::new() }
    }

    pub fn from_labelings<'a, I>(cube: Cube, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Labeling>,
    {
        let mut s = Self::new(cube);
        for x in items {
            s.insert(x)?;
        }
        Ok(s)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(cube: Cube, items: I) -> Result<Self> {
        let members: BTreeSet<usize> = items.into_iter().collect();
        if let Some(&index) = members.iter().find(|&&i| i >= cube.cells()) {
            return Err(Error::IndexOutOfRange { index, cells: cube.cells() });
        }
        Ok(LabelingSet { cube, members })
    }

    /// Every labeling of `[k]^n`.
    pub fn all_positive(cube: Cube) -> Self {
        LabelingSet { cube, members: cube.positive_indices().collect() }
    }

    /// Every labeling of `[0,k]^n`.
    pub fn all(cube: Cube) -> Self {
        LabelingSet { cube, members: (0..cube.cells()).collect() }
    }

    pub fn cube(&self) -> Cube {
        self.cube
    }

    pub fn insert(&mut self, x: &Labeling) -> Result<bool> {
        Ok(self.members.insert(self.cube.encode(x)?))
    }

    pub fn contains(&self, x: &Labeling) -> bool {
        self.cube.encode(x).map(|i| self.members.contains(&i)).unwrap_or(false)
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.members.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Labeling> + '_ {
        self.members.iter().map(|&i| Labeling::new(self.cube.digits(i)))
    }

    pub fn is_positive(&self) -> bool {
        self.members.iter().all(|&i| self.cube.is_positive_index(i))
    }

    pub fn is_subset(&self, other: &LabelingSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Members lying in `[k]^n`.
    pub fn positive_part(&self) -> LabelingSet {
        LabelingSet {
            cube: self.cube,
            members: self.members.iter().copied().filter(|&i| self.cube.is_positive_index(i)).collect(),
        }
    }

    fn require_positive(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::ZeroLabel)
        }
    }
}

/// Worklist state shared by the three closures: digits of every member in
/// insertion order, a dense membership map, and the index of the next
/// member still to be combined with the others.
struct Worklist {
    cube: Cube,
    strides: Vec<usize>,
    digits: Vec<Vec<u32>>,
    indices: Vec<usize>,
    seen: Vec<bool>,
}

impl Worklist {
    fn new(set: &LabelingSet) -> Self {
        let cube = set.cube;
        let mut w = Worklist {
            cube,
            strides: cube.strides(),
            digits: Vec::with_capacity(set.len()),
            indices: Vec::with_capacity(set.len()),
            seen: vec![false; cube.cells()],
        };
        for i in set.indices() {
            w.push(i);
        }
        w
    }

    fn push(&mut self, index: usize) {
        if !self.seen[index] {
            self.seen[index] = true;
            self.indices.push(index);
            self.digits.push(self.cube.digits(index));
        }
    }

    fn combine(&self, a: usize, b: usize, op: fn(u32, u32) -> u32) -> usize {
        let (x, y) = (&self.digits[a], &self.digits[b]);
        x.iter().zip(y).zip(&self.strides).map(|((&p, &q), &s)| op(p, q) as usize * s).sum()
    }

    fn theta(&self, a: usize, b: usize, c: usize) -> usize {
        let (x, y, z) = (&self.digits[a], &self.digits[b], &self.digits[c]);
        let mut idx = 0;
        for j in 0..x.len() {
            let v = if x[j] == y[j] { x[j] } else { z[j] };
            idx += v as usize * self.strides[j];
        }
        idx
    }

    fn into_set(self) -> LabelingSet {
        LabelingSet { cube: self.cube, members: self.indices.into_iter().collect() }
    }
}

/// Least superset of `a` inside `[k]^n` closed under `theta`.
pub fn closure_theta(a: &LabelingSet) -> Result<LabelingSet> {
    a.require_positive()?;
    let full = a.cube.positive_cells();
    let mut w = Worklist::new(a);
    let mut next = 0;
    // Every triple is visited when its last-processed member is processed.
    // theta is symmetric in its first two arguments, so only (e, p, q) and
    // (p, q, e) with p < q need to be formed for the current member e.
    while next < w.indices.len() {
        if w.indices.len() == full {
            break;
        }
        let e = next;
        next += 1;
        let mut found = Vec::new();
        for p in 0..next {
            for q in 0..next {
                if p != e {
                    found.push(w.theta(e, p, q));
                }
                if p < q {
                    found.push(w.theta(p, q, e));
                }
            }
        }
        for i in found {
            w.push(i);
        }
    }
    Ok(w.into_set())
}

fn binary_closure(b: &LabelingSet, with_join: bool) -> LabelingSet {
    let mut w = Worklist::new(b);
    let mut next = 0;
    while next < w.indices.len() {
        let e = next;
        next += 1;
        for p in 0..e {
            let m = w.combine(e, p, meet_label);
            w.push(m);
            if with_join {
                let j = w.combine(e, p, join_label);
                w.push(j);
            }
        }
    }
    w.into_set()
}

/// Least superset of `b` closed under `meet`.
pub fn closure_meet(b: &LabelingSet) -> LabelingSet {
    binary_closure(b, false)
}

/// Least superset of `b` closed under both `meet` and `join`.
pub fn closure_meet_join(b: &LabelingSet) -> LabelingSet {
    binary_closure(b, true)
}

/// A triple of members whose `theta` image leaves the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaEscape {
    pub x: Labeling,
    pub y: Labeling,
    pub z: Labeling,
    pub image: Labeling,
}

/// `None` iff `a` is closed under `theta`; otherwise the first escaping
/// triple in lexicographic order of cube indices.
pub fn theta_witness(a: &LabelingSet) -> Result<Option<ThetaEscape>> {
    a.require_positive()?;
    if a.len() == a.cube.positive_cells() {
        return Ok(None);
    }
    let w = Worklist::new(a);
    let m = w.indices.len();
    // Worklist keeps the BTreeSet order, so positions are index-sorted.
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            for r in 0..m {
                let t = w.theta(p, q, r);
                if !a.members.contains(&t) {
                    let lab = |i: usize| Labeling::new(w.digits[i].clone());
                    return Ok(Some(ThetaEscape {
                        x: lab(p),
                        y: lab(q),
                        z: lab(r),
                        image: Labeling::new(a.cube.digits(t)),
                    }));
                }
            }
        }
    }
    Ok(None)
}
