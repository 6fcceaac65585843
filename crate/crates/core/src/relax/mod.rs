//! Construction and analysis of k-submodular relaxations.
//!
//! [`relax`] extends `f : [k]^n -> Q ∪ {+inf}` to `[0,k]^n` by eliminating
//! the points with the most zeros last: each new point `z` receives the
//! minimum of
//!
//! * `(g(x) + g(y)) / 2` over pairs with `x meet y = x join y = z`, and
//! * `g(x) + g(y) - g(x join y)` over pairs with `x meet y = z != x join y`,
//!
//! taken over pairs with fewer zeros than `z`. If some such pair has its
//! join outside the domain, `f` has no k-submodular relaxation.

mod engine;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::closure::{theta_witness, LabelingSet, ThetaEscape};
use crate::error::{Error, Result};
use crate::labeling::{join_label, meet_label, Cube, Labeling};
use crate::table::{CostTable, DomainKind};
use crate::value::{is_half_integer, is_nonnegative, CostValue};

use engine::EngineOutcome;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelaxOptions {
    /// Test theta-closure of `dom f` first and report a `ThetaEscape`.
    pub preflight_theta: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relaxation {
    pub table: CostTable,
    pub half_integral: bool,
    pub nonnegative: bool,
    pub scaling_factor: BigInt,
}

/// Certificate that no k-submodular relaxation exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonExtendable {
    /// `x`, `y` are in the domain built so far, their meet and join differ,
    /// and the join is not in the domain.
    MissingJoin {
        x: Labeling,
        y: Labeling,
        join: Labeling,
        level: usize,
    },
    ThetaEscape(ThetaEscape),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelaxationOutcome {
    Relaxed(Relaxation),
    NotExtendable(NonExtendable),
}

impl RelaxationOutcome {
    pub fn relaxation(&self) -> Option<&Relaxation> {
        match self {
            RelaxationOutcome::Relaxed(r) => Some(r),
            RelaxationOutcome::NotExtendable(_) => None,
        }
    }

    pub fn into_table(self) -> Option<CostTable> {
        match self {
            RelaxationOutcome::Relaxed(r) => Some(r.table),
            RelaxationOutcome::NotExtendable(_) => None,
        }
    }

    pub fn is_relaxed(&self) -> bool {
        matches!(self, RelaxationOutcome::Relaxed(_))
    }
}

pub fn relax(f: &CostTable) -> Result<RelaxationOutcome> {
    relax_with(f, RelaxOptions::default())
}

pub fn relax_with(f: &CostTable, opts: RelaxOptions) -> Result<RelaxationOutcome> {
    if f.kind() != DomainKind::PositiveOnly {
        return Err(Error::WrongKind { expected: "positive-only" });
    }
    let cube = f.cube();
    if opts.preflight_theta {
        let dom = LabelingSet::from_indices(cube, f.domain_indices())?;
        if let Some(w) = theta_witness(&dom)? {
            return Ok(RelaxationOutcome::NotExtendable(NonExtendable::ThetaEscape(w)));
        }
    }
    match engine::run(f) {
        EngineOutcome::Done(entries) => {
            let table = CostTable::from_parts(cube, DomainKind::Full, entries);
            Ok(RelaxationOutcome::Relaxed(analyse(table)))
        }
        EngineOutcome::MissingJoin { level, x, y } => {
            Ok(RelaxationOutcome::NotExtendable(missing_join(cube, level, x, y)))
        }
    }
}

pub(crate) fn missing_join(cube: Cube, level: usize, x: usize, y: usize) -> NonExtendable {
    let (dx, dy) = (cube.digits(x), cube.digits(y));
    let join = dx.iter().zip(&dy).map(|(&a, &b)| join_label(a, b)).collect();
    NonExtendable::MissingJoin { x: Labeling::new(dx), y: Labeling::new(dy), join: Labeling::new(join), level }
}

pub(crate) fn analyse(table: CostTable) -> Relaxation {
    let half_integral = table.entries().all(|(_, v)| is_half_integer(v));
    let nonnegative = table.entries().all(|(_, v)| is_nonnegative(v));
    let scaling_factor = scaling_factor(&table);
    Relaxation { table, half_integral, nonnegative, scaling_factor }
}

/// Smallest positive integer `c` with `c * g` integer valued.
pub fn scaling_factor(g: &CostTable) -> BigInt {
    g.denominator_lcm()
}

/// A pair `(x, y)` for which `g(x) + g(y) < g(x meet y) + g(x join y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub x: Labeling,
    pub y: Labeling,
    pub lhs: CostValue,
    pub rhs: CostValue,
}

/// Domain members decoded once, with meet/join computed on digits.
struct DomainView<'a> {
    table: &'a CostTable,
    strides: Vec<usize>,
    indices: Vec<usize>,
    digits: Vec<Vec<u32>>,
}

impl<'a> DomainView<'a> {
    fn new(table: &'a CostTable) -> Self {
        let cube = table.cube();
        let indices: Vec<usize> = table.domain_indices().collect();
        let digits = indices.iter().map(|&i| cube.digits(i)).collect();
        DomainView { table, strides: cube.strides(), indices, digits }
    }

    fn meet_join(&self, p: usize, q: usize) -> (usize, usize) {
        let (x, y) = (&self.digits[p], &self.digits[q]);
        let mut m = 0;
        let mut j = 0;
        for c in 0..x.len() {
            m += meet_label(x[c], y[c]) as usize * self.strides[c];
            j += join_label(x[c], y[c]) as usize * self.strides[c];
        }
        (m, j)
    }

    fn labeling(&self, p: usize) -> Labeling {
        Labeling::new(self.digits[p].clone())
    }

    /// Values scaled to `i64` by the denominator lcm, when they fit with
    /// headroom for sums of two.
    fn scaled(&self) -> Option<Vec<i64>> {
        let scale = self.table.denominator_lcm();
        let mut out = vec![0i64; self.table.cube().cells()];
        for (i, v) in self.table.entries() {
            let s = (v.numer() * (&scale / v.denom())).to_i64()?;
            if s.abs() > i64::MAX / 4 {
                return None;
            }
            out[i] = s;
        }
        Some(out)
    }
}

/// First pair `x < y` (by cube index) of `dom g` violating k-submodularity,
/// including pairs whose meet or join lies outside the domain.
pub fn verify_ksubmodular(g: &CostTable) -> Option<Violation> {
    let view = DomainView::new(g);
    let m = view.indices.len();
    let found = if let Some(vals) = view.scaled() {
        let present = |i: usize| g.contains_index(i);
        (0..m).find_map(|p| {
            ((p + 1)..m).find_map(|q| {
                let (mi, ji) = view.meet_join(p, q);
                if !present(mi) || !present(ji) {
                    return Some((p, q));
                }
                let lhs = vals[view.indices[p]] + vals[view.indices[q]];
                (lhs < vals[mi] + vals[ji]).then_some((p, q))
            })
        })
    } else {
        (0..m).find_map(|p| {
            ((p + 1)..m).find_map(|q| {
                let (mi, ji) = view.meet_join(p, q);
                let lhs = &g.value_at(view.indices[p]) + &g.value_at(view.indices[q]);
                let rhs = &g.value_at(mi) + &g.value_at(ji);
                (lhs < rhs).then_some((p, q))
            })
        })
    };
    found.map(|(p, q)| {
        let (mi, ji) = view.meet_join(p, q);
        Violation {
            x: view.labeling(p),
            y: view.labeling(q),
            lhs: &g.value_at(view.indices[p]) + &g.value_at(view.indices[q]),
            rhs: &g.value_at(mi) + &g.value_at(ji),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightCase {
    /// `x, y in dom f` and `g(z) = (g(x) + g(y)) / 2`
    Average,
    /// `x meet y != x join y` and `g(z) = g(x) + g(y) - g(x join y)`
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tightness {
    pub x: Labeling,
    pub y: Labeling,
    pub case: TightCase,
}

pub(crate) fn check_relaxation_pair(g: &CostTable, f: &CostTable) -> Result<()> {
    if g.n() != f.n() || g.k() != f.k() {
        return Err(Error::ShapeMismatch { left_n: g.n(), left_k: g.k(), right_n: f.n(), right_k: f.k() });
    }
    let cube = g.cube();
    for i in cube.positive_indices() {
        if g.finite_at(i) != f.finite_at(i) {
            return Err(Error::NotARelaxation { at: Labeling::new(cube.digits(i)).to_string() });
        }
    }
    Ok(())
}

/// For every relaxed point `z` (in `dom g` but not in `dom f`), a pair that
/// attains `g(z)` with equality. Average-case pairs from `dom f` are
/// preferred; within a case the first pair by cube index wins.
pub fn tightness_witnesses(g: &CostTable, f: &CostTable) -> Result<BTreeMap<usize, Tightness>> {
    check_relaxation_pair(g, f)?;
    let cube = g.cube();
    let view = DomainView::new(g);
    let m = view.indices.len();
    let zeros: Vec<usize> = view.indices.iter().map(|&i| cube.zero_count_index(i)).collect();
    let mut average: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut general: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let two = BigRational::from_integer(BigInt::from(2));

    for p in 0..m {
        for q in (p + 1)..m {
            let (mi, ji) = view.meet_join(p, q);
            let Some(gz) = g.finite_at(mi) else { continue };
            if f.contains_index(mi) || cube.zero_count_index(mi) <= zeros[p].max(zeros[q]) {
                continue;
            }
            let gx = g.finite_at(view.indices[p]).expect("domain member");
            let gy = g.finite_at(view.indices[q]).expect("domain member");
            if mi == ji {
                let in_f = f.contains_index(view.indices[p]) && f.contains_index(view.indices[q]);
                if in_f && !average.contains_key(&mi) && gz * &two == gx + gy {
                    average.insert(mi, (p, q));
                }
            } else if let Some(gj) = g.finite_at(ji) {
                if !general.contains_key(&mi) && *gz == gx + gy - gj {
                    general.insert(mi, (p, q));
                }
            }
        }
    }

    let mut out = BTreeMap::new();
    for (z, _) in g.entries() {
        if f.contains_index(z) {
            continue;
        }
        let (pair, case) = match (average.get(&z), general.get(&z)) {
            (Some(&p), _) => (p, TightCase::Average),
            (None, Some(&p)) => (p, TightCase::General),
            (None, None) => return Err(Error::NoTightPair { at: Labeling::new(cube.digits(z)).to_string() }),
        };
        out.insert(z, Tightness { x: view.labeling(pair.0), y: view.labeling(pair.1), case });
    }
    Ok(out)
}

/// A quarter of the smallest positive gap between two values of `g`, or
/// `1/4` when all values coincide.
pub fn default_epsilon(g: &CostTable) -> BigRational {
    let mut values: Vec<&BigRational> = g.entries().map(|(_, v)| v).collect();
    values.sort();
    values.dedup();
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    values.windows(2).map(|w| w[1] - w[0]).min().map(|gap| gap * &quarter).unwrap_or(quarter)
}

/// For `n = 2`: raising any single relaxed value of `g` by `epsilon` breaks
/// k-submodularity.
pub fn assert_maximal_binary(g: &CostTable, f: &CostTable, epsilon: &BigRational) -> Result<bool> {
    if g.n() != 2 {
        return Err(Error::NotBinary { n: g.n() });
    }
    check_relaxation_pair(g, f)?;
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    for (z, v) in g.entries() {
        if f.contains_index(z) {
            continue;
        }
        let mut raised = g.clone();
        raised.set_index(z, CostValue::Finite(v + epsilon))?;
        if verify_ksubmodular(&raised).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
