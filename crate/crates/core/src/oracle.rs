//! Brute-force checks for small cubes.
//!
//! Everything here scans whole tables and is meant for testing and for
//! instances small enough to enumerate.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::labeling::{join, meet, Cube, Labeling};
use crate::relax::{analyse, check_relaxation_pair, NonExtendable, RelaxationOutcome};
use crate::table::{CostTable, DomainKind};
use crate::value::CostValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizationReport {
    pub cube: Cube,
    pub optimum: CostValue,
    /// Cube indices of all minimizers; empty iff `optimum` is `+inf`.
    pub minimizers: BTreeSet<usize>,
}

impl MinimizationReport {
    pub fn labelings(&self) -> impl Iterator<Item = Labeling> + '_ {
        self.minimizers.iter().map(|&i| Labeling::new(self.cube.digits(i)))
    }
}

fn guard(cube: Cube, limit: u64) -> Result<()> {
    if cube.cells() as u64 > limit {
        return Err(Error::SizeGuard { n: cube.n(), k: cube.k(), cells: cube.cells() as u128, limit });
    }
    Ok(())
}

pub fn brute_min(g: &CostTable) -> Result<MinimizationReport> {
    brute_min_with_limit(g, crate::labeling::DEFAULT_MAX_CELLS)
}

/// Exact minimum of `g` over its ambient cube and every point attaining it.
pub fn brute_min_with_limit(g: &CostTable, limit: u64) -> Result<MinimizationReport> {
    guard(g.cube(), limit)?;
    let mut optimum = CostValue::Infinity;
    let mut minimizers = BTreeSet::new();
    for (i, v) in g.entries() {
        let v = CostValue::Finite(v.clone());
        if v < optimum {
            optimum = v;
            minimizers.clear();
            minimizers.insert(i);
        } else if v == optimum {
            minimizers.insert(i);
        }
    }
    Ok(MinimizationReport { cube: g.cube(), optimum, minimizers })
}

/// Checks that `f` is positive-only and `g` agrees with it on `[k]^n`.
pub fn check_restriction(f: &CostTable, g: &CostTable) -> Result<()> {
    if f.kind() != DomainKind::PositiveOnly {
        return Err(Error::WrongKind { expected: "positive-only" });
    }
    check_relaxation_pair(g, f)
}

/// Every minimizer `y` of `g` agrees with some minimizer of `f` on the
/// coordinates where `y` is nonzero.
pub fn persistency_check(f: &CostTable, g: &CostTable) -> Result<bool> {
    check_restriction(f, g)?;
    let cube = f.cube();
    let fmin = brute_min(f)?;
    let gmin = brute_min(g)?;
    let fdigits: Vec<Vec<u32>> = fmin.minimizers.iter().map(|&i| cube.digits(i)).collect();
    Ok(gmin.minimizers.iter().all(|&y| {
        let y = cube.digits(y);
        fdigits.iter().any(|x| x.iter().zip(&y).all(|(&a, &b)| b == 0 || a == b))
    }))
}

/// For a finite-valued `g`, whether its maximum over the ambient cube is
/// already reached on `[k]^n`.
pub fn max_on_interior(g: &CostTable) -> Result<bool> {
    let cube = g.cube();
    guard(cube, crate::labeling::DEFAULT_MAX_CELLS)?;
    let admitted = match g.kind() {
        DomainKind::Full => cube.cells(),
        DomainKind::PositiveOnly => cube.positive_cells(),
    };
    if g.len() != admitted {
        return Err(Error::NotFinite);
    }
    let overall = g.entries().map(|(_, v)| v).max();
    let interior = g.entries().filter(|&(i, _)| cube.is_positive_index(i)).map(|(_, v)| v).max();
    Ok(overall == interior)
}

/// Straightforward dense implementation of the relaxation, level by level
/// on full copies of the table. Slow; used to cross-check [`crate::relax`].
pub fn reference_relax(f: &CostTable) -> Result<RelaxationOutcome> {
    if f.kind() != DomainKind::PositiveOnly {
        return Err(Error::WrongKind { expected: "positive-only" });
    }
    let cube = f.cube();
    let points: Vec<Labeling> = (0..cube.cells()).map(|i| Labeling::new(cube.digits(i))).collect();
    let mut g: Vec<CostValue> = (0..cube.cells()).map(|i| f.value_at(i)).collect();
    let two = CostValue::from_int(2);
    let two = two.finite().expect("finite").clone();

    for level in 1..=cube.n() {
        let prev = g.clone();
        for (xi, x) in points.iter().enumerate() {
            let Some(gx) = prev[xi].finite() else { continue };
            for (yi, y) in points.iter().enumerate() {
                if yi == xi {
                    continue;
                }
                let Some(gy) = prev[yi].finite() else { continue };
                let m = meet(x, y)?;
                if m.zero_count() != level {
                    continue;
                }
                let j = join(x, y)?;
                let zi = cube.encode(&m)?;
                let candidate = if m == j {
                    (gx + gy) / &two
                } else {
                    let ji = cube.encode(&j)?;
                    match prev[ji].finite() {
                        Some(gj) => gx + gy - gj,
                        None => {
                            return Ok(RelaxationOutcome::NotExtendable(NonExtendable::MissingJoin {
                                x: x.clone(),
                                y: y.clone(),
                                join: j,
                                level,
                            }));
                        }
                    }
                };
                let candidate = CostValue::Finite(candidate);
                if candidate < g[zi] {
                    g[zi] = candidate;
                }
            }
        }
    }

    let mut table = CostTable::empty(cube, DomainKind::Full);
    for (i, v) in g.into_iter().enumerate() {
        table.set_index(i, v)?;
    }
    Ok(RelaxationOutcome::Relaxed(analyse(table)))
}
