//! Level-by-level evaluation of the greedy elimination.
//!
//! Values live in a dense array over the cube. Level `i` enumerates every
//! unordered pair `(x, y)` of current domain members whose meet has exactly
//! `i` zeros, by a depth-first walk over coordinates (most significant
//! first) that carries the indices of `x`, `y`, `x meet y` and `x join y`
//! along. Subtrees whose high-coordinate prefix of `x` or `y` matches no
//! domain member are skipped.
//!
//! Arithmetic is exact. When the input allows, values are scaled by
//! `lcm(denominators) * 2^n` and kept in `i64`: every value written at level
//! `i` has denominator dividing `lcm * 2^i`, so all averages stay integral.
//! If the magnitudes get too large for `i64`, the state is converted to
//! `BigRational` and the remaining levels run there.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::labeling::Cube;
use crate::table::CostTable;

/// Exact value type of the engine, stored in a dense slot array.
pub(crate) trait Scalar: Clone + Ord {
    type Slot: Clone;
    fn read(slot: &Self::Slot) -> Option<&Self>;
    fn wrap(v: Self) -> Self::Slot;
    fn avg(a: &Self, b: &Self) -> Self;
    fn general(a: &Self, b: &Self, c: &Self) -> Self;
}

/// Marks an absent entry in the scaled `i64` state; live values stay
/// within `±LIMIT`.
const ABSENT: i64 = i64::MIN;

impl Scalar for i64 {
    type Slot = i64;

    #[inline(always)]
    fn read(slot: &i64) -> Option<&i64> {
        (*slot != ABSENT).then_some(slot)
    }

    #[inline(always)]
    fn wrap(v: i64) -> i64 {
        v
    }

    #[inline(always)]
    fn avg(a: &Self, b: &Self) -> Self {
        let s = a + b;
        debug_assert!(s % 2 == 0, "scaled average must be integral");
        s / 2
    }

    #[inline(always)]
    fn general(a: &Self, b: &Self, c: &Self) -> Self {
        a + b - c
    }
}

impl Scalar for BigRational {
    type Slot = Option<BigRational>;

    fn read(slot: &Self::Slot) -> Option<&Self> {
        slot.as_ref()
    }

    fn wrap(v: Self) -> Self::Slot {
        Some(v)
    }

    fn avg(a: &Self, b: &Self) -> Self {
        (a + b) / BigRational::from_integer(BigInt::from(2))
    }

    fn general(a: &Self, b: &Self, c: &Self) -> Self {
        a + b - c
    }
}

/// Result of running all levels.
pub(crate) enum EngineOutcome {
    Done(BTreeMap<usize, BigRational>),
    /// Level and lexicographically first `(x, y)` (by index, `x < y`)
    /// whose join is missing from the domain.
    MissingJoin {
        level: usize,
        x: usize,
        y: usize,
    },
}

#[derive(Clone, Copy)]
struct PairOpt {
    a: usize,
    b: usize,
    meet: usize,
    join: usize,
    /// exactly one of `a`, `b` is zero: meet and join differ here
    general: bool,
    x_above: bool,
    y_above: bool,
}

/// Per-coordinate label pairs `(a, b)`, split by whether the meet is zero
/// there and by the symmetry-breaking rule (while the prefixes of `x` and
/// `y` coincide, only `a <= b` is allowed).
struct PairOptions {
    agree: Vec<PairOpt>,
    split: Vec<PairOpt>,
    split_tied: Vec<PairOpt>,
}

impl PairOptions {
    fn new(k: u32) -> Self {
        let mut o = PairOptions { agree: Vec::new(), split: Vec::new(), split_tied: Vec::new() };
        for a in 0..=k {
            for b in 0..=k {
                let meet = if a == b { a } else { 0 };
                let join = match (a, b) {
                    _ if a == b => a,
                    (0, _) => b,
                    (_, 0) => a,
                    _ => 0,
                };
                let opt = PairOpt {
                    a: a as usize,
                    b: b as usize,
                    meet: meet as usize,
                    join: join as usize,
                    general: (a == 0) != (b == 0),
                    x_above: meet == 0 && a != 0,
                    y_above: meet == 0 && b != 0,
                };
                if meet != 0 {
                    o.agree.push(opt);
                } else {
                    o.split.push(opt);
                    if a <= b {
                        o.split_tied.push(opt);
                    }
                }
            }
        }
        o
    }
}

#[derive(Clone, Copy)]
struct Walk {
    x: usize,
    y: usize,
    z: usize,
    j: usize,
    zeros: usize,
    general: bool,
    tied: bool,
    x_above: bool,
    y_above: bool,
}

impl Walk {
    #[inline(always)]
    fn step(&self, o: &PairOpt, s: usize, zero: bool) -> Walk {
        Walk {
            x: self.x + o.a * s,
            y: self.y + o.b * s,
            z: self.z + o.meet * s,
            j: self.j + o.join * s,
            zeros: self.zeros + usize::from(zero),
            general: self.general | o.general,
            tied: self.tied && o.a == o.b,
            x_above: self.x_above | o.x_above,
            y_above: self.y_above | o.y_above,
        }
    }
}

struct LevelPass<'a, T: Scalar> {
    level: usize,
    strides: &'a [usize],
    opts: &'a PairOptions,
    present: &'a [Vec<bool>],
    vals: &'a mut [T::Slot],
    failure: Option<(usize, usize)>,
}

impl<T: Scalar> LevelPass<'_, T> {
    /// Assigns coordinate `c`; coordinates above `c` are already in `st`.
    fn walk(&mut self, c: usize, st: Walk) {
        let s = self.strides[c];
        let need = self.level - st.zeros;
        let opts = self.opts;
        let split = if st.tied { &opts.split_tied } else { &opts.split };
        if c == 0 {
            if need == 0 {
                for o in &opts.agree {
                    self.leaf(st.step(o, 1, false));
                }
            } else {
                self.split_leaves(st, split);
            }
            return;
        }
        if need < c + 1 {
            for o in &opts.agree {
                self.descend(c, st.step(o, s, false));
            }
        }
        if need > 0 {
            for o in split {
                self.descend(c, st.step(o, s, true));
            }
        }
    }

    #[inline(always)]
    fn descend(&mut self, c: usize, next: Walk) {
        let s = self.strides[c];
        let p = &self.present[c];
        if p[next.x / s] && p[next.y / s] {
            self.walk(c - 1, next);
        }
    }

    /// Last coordinate with a zero meet: every pair targets the same `z`,
    /// so the running minimum is kept locally.
    fn split_leaves(&mut self, st: Walk, list: &[PairOpt]) {
        let mut best: Option<T> = T::read(&self.vals[st.z]).cloned();
        let mut improved = false;
        for o in list {
            let w = st.step(o, 1, true);
            if !(w.x_above && w.y_above) {
                continue;
            }
            let (Some(vx), Some(vy)) = (T::read(&self.vals[w.x]), T::read(&self.vals[w.y])) else {
                continue;
            };
            let cand = if !w.general {
                T::avg(vx, vy)
            } else {
                match T::read(&self.vals[w.j]) {
                    Some(vj) => T::general(vx, vy, vj),
                    None => {
                        self.record_failure(w.x, w.y);
                        continue;
                    }
                }
            };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
                improved = true;
            }
        }
        if improved {
            self.vals[st.z] = T::wrap(best.expect("improved implies a value"));
        }
    }

    fn record_failure(&mut self, x: usize, y: usize) {
        let pair = (x.min(y), x.max(y));
        if self.failure.is_none_or(|f| pair < f) {
            self.failure = Some(pair);
        }
    }

    #[inline(always)]
    fn leaf(&mut self, w: Walk) {
        // x == z or y == z would be a point of the level being computed;
        // x == y is excluded by the same test.
        if !(w.x_above && w.y_above) {
            return;
        }
        let (Some(vx), Some(vy)) = (T::read(&self.vals[w.x]), T::read(&self.vals[w.y])) else {
            return;
        };
        let cand = if !w.general {
            T::avg(vx, vy)
        } else {
            match T::read(&self.vals[w.j]) {
                Some(vj) => T::general(vx, vy, vj),
                None => {
                    self.record_failure(w.x, w.y);
                    return;
                }
            }
        };
        let slot = &mut self.vals[w.z];
        if T::read(slot).is_none_or(|cur| cand < *cur) {
            *slot = T::wrap(cand);
        }
    }
}

/// Marks, for each coordinate `c >= 1`, which high parts `index / (k+1)^c`
/// occur among domain members.
fn prefix_presence<T: Scalar>(cube: Cube, strides: &[usize], vals: &[T::Slot]) -> Vec<Vec<bool>> {
    let n = cube.n();
    let mut present: Vec<Vec<bool>> =
        (0..n).map(|c| if c == 0 { Vec::new() } else { vec![false; cube.cells() / strides[c]] }).collect();
    for (i, v) in vals.iter().enumerate() {
        if T::read(v).is_some() {
            for c in 1..n {
                present[c][i / strides[c]] = true;
            }
        }
    }
    present
}

fn run_level<T: Scalar>(
    cube: Cube,
    strides: &[usize],
    opts: &PairOptions,
    vals: &mut [T::Slot],
    level: usize,
) -> Option<(usize, usize)> {
    let present = prefix_presence::<T>(cube, strides, vals);
    let mut pass = LevelPass::<T> { level, strides, opts, present: &present, vals, failure: None };
    let start = Walk { x: 0, y: 0, z: 0, j: 0, zeros: 0, general: false, tied: true, x_above: false, y_above: false };
    pass.walk(cube.n() - 1, start);
    pass.failure
}

/// `i64` state is safe for one more level while every `|v| <= LIMIT`:
/// candidates are bounded by `3 * LIMIT`.
const LIMIT: i64 = i64::MAX / 4;

fn scaled_state(f: &CostTable) -> Option<(BigInt, Vec<i64>)> {
    let scale = f.denominator_lcm() * num_traits::pow(BigInt::from(2), f.n());
    scale.to_i64()?;
    let mut vals = vec![ABSENT; f.cube().cells()];
    for (i, v) in f.entries() {
        let s = (v.numer() * (&scale / v.denom())).to_i64()?;
        if s.abs() > LIMIT {
            return None;
        }
        vals[i] = s;
    }
    Some((scale, vals))
}

fn exact_state(f: &CostTable) -> Vec<Option<BigRational>> {
    let mut vals = vec![None; f.cube().cells()];
    for (i, v) in f.entries() {
        vals[i] = Some(v.clone());
    }
    vals
}

fn unscale(scale: &BigInt, vals: &[i64]) -> Vec<Option<BigRational>> {
    vals.iter().map(|&v| (v != ABSENT).then(|| BigRational::new(BigInt::from(v), scale.clone()))).collect()
}

fn finish(vals: Vec<Option<BigRational>>) -> BTreeMap<usize, BigRational> {
    vals.into_iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect()
}

/// Runs levels `1..=n` on `f` (whose keys must be positive labelings).
pub(crate) fn run(f: &CostTable) -> EngineOutcome {
    let cube = f.cube();
    let strides = cube.strides();
    let opts = PairOptions::new(cube.k());

    let mut level = 1;
    let mut exact = match scaled_state(f) {
        Some((scale, mut vals)) => {
            while level <= cube.n() {
                if vals.iter().any(|&v| v != ABSENT && v.abs() > LIMIT) {
                    break;
                }
                if let Some((x, y)) = run_level::<i64>(cube, &strides, &opts, &mut vals, level) {
                    return EngineOutcome::MissingJoin { level, x, y };
                }
                level += 1;
            }
            unscale(&scale, &vals)
        }
        None => exact_state(f),
    };
    run_exact(cube, &strides, &opts, &mut exact, level).unwrap_or_else(|| EngineOutcome::Done(finish(exact)))
}

fn run_exact(
    cube: Cube,
    strides: &[usize],
    opts: &PairOptions,
    vals: &mut [Option<BigRational>],
    from: usize,
) -> Option<EngineOutcome> {
    for level in from..=cube.n() {
        if let Some((x, y)) = run_level::<BigRational>(cube, strides, opts, vals, level) {
            return Some(EngineOutcome::MissingJoin { level, x, y });
        }
    }
    None
}

/// Exact engine only; used by tests to cross-check the scaled path.
#[cfg(test)]
pub(crate) fn run_exact_only(f: &CostTable) -> EngineOutcome {
    let cube = f.cube();
    let opts = PairOptions::new(cube.k());
    let mut exact = exact_state(f);
    run_exact(cube, &cube.strides(), &opts, &mut exact, 1).unwrap_or_else(|| EngineOutcome::Done(finish(exact)))
}
