//! Valued CSP instances and their constraint-wise relaxation.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::labeling::{Cube, Labeling, DEFAULT_MAX_CELLS};
use crate::oracle::{brute_min_with_limit, persistency_check};
use crate::relax::{relax, scaling_factor, RelaxationOutcome};
use crate::table::{CostTable, DomainKind};
use crate::value::CostValue;

/// A cost table applied to a tuple of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub table: CostTable,
    /// 0-based variable indices, one per table coordinate. Repeats allowed.
    pub scope: Vec<usize>,
}

impl Constraint {
    pub fn new(table: CostTable, scope: Vec<usize>) -> Result<Self> {
        if scope.len() != table.n() {
            return Err(Error::LengthMismatch { left: scope.len(), right: table.n() });
        }
        Ok(Constraint { table, scope })
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }
}

/// `n_vars` variables over `[k]` (or `[0,k]` for relaxed instances) and a
/// list of constraints whose tables all have the instance's kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcspInstance {
    n_vars: usize,
    k: u32,
    kind: DomainKind,
    constraints: Vec<Constraint>,
    max_cells: u64,
}

impl VcspInstance {
    pub fn new(n_vars: usize, k: u32) -> Result<Self> {
        Self::with_kind(n_vars, k, DomainKind::PositiveOnly)
    }

    pub fn with_kind(n_vars: usize, k: u32, kind: DomainKind) -> Result<Self> {
        if n_vars == 0 || k == 0 {
            return Err(Error::InvalidShape { n: n_vars, k });
        }
        Ok(VcspInstance { n_vars, k, kind, constraints: Vec::new(), max_cells: DEFAULT_MAX_CELLS })
    }

    /// Size guard used when assembling or brute-forcing the instance.
    pub fn with_max_cells(mut self, max_cells: u64) -> Self {
        self.max_cells = max_cells;
        self
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn max_cells(&self) -> u64 {
        self.max_cells
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint) -> Result<()> {
        let position = self.constraints.len();
        let bad = |reason: String| Err(Error::BadConstraint { position, reason });
        if c.table.k() != self.k {
            return bad(format!("table has k={}, instance has k={}", c.table.k(), self.k));
        }
        if c.table.kind() != self.kind {
            return bad(format!("table kind is {}, instance kind is {}", c.table.kind().as_str(), self.kind.as_str()));
        }
        if let Some(&v) = c.scope.iter().find(|&&v| v >= self.n_vars) {
            return bad(format!("variable {} is out of range 1..={}", v + 1, self.n_vars));
        }
        self.constraints.push(c);
        Ok(())
    }
}

/// An instance whose tables are k-submodular relaxations on `[0,k]^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxedInstance {
    pub instance: VcspInstance,
    /// Every value of every table is `>= 0`.
    pub nonnegative: bool,
}

impl RelaxedInstance {
    /// Wraps a full-kind instance, e.g. an alternative relaxation read from
    /// a file.
    pub fn from_instance(instance: VcspInstance) -> Result<Self> {
        if instance.kind != DomainKind::Full {
            return Err(Error::WrongKind { expected: "full" });
        }
        let nonnegative = instance.constraints.iter().all(|c| c.table.entries().all(|(_, v)| !v.is_negative()));
        Ok(RelaxedInstance { instance, nonnegative })
    }
}

/// The table of `f_I(x) = sum over constraints of f(x restricted to scope)`
/// on `[k]^n_vars` or `[0,k]^n_vars`.
pub fn assemble(inst: &VcspInstance, ambient: DomainKind) -> Result<CostTable> {
    let cube = Cube::with_limit(inst.n_vars, inst.k, inst.max_cells)?;
    let strides = cube.strides();
    let proj: Vec<Vec<usize>> = inst.constraints.iter().map(|c| c.table.cube().strides()).collect();
    let radix = cube.radix();
    let mut out = CostTable::empty(cube, ambient);
    'cells: for i in 0..cube.cells() {
        if ambient == DomainKind::PositiveOnly && !cube.is_positive_index(i) {
            continue;
        }
        let mut total = BigRational::zero();
        for (c, s) in inst.constraints.iter().zip(&proj) {
            let mut idx = 0;
            for (&v, &stride) in c.scope.iter().zip(s) {
                idx += (i / strides[v]) % radix * stride;
            }
            match c.table.finite_at(idx) {
                Some(v) => total += v,
                None => continue 'cells,
            }
        }
        out.set_index(i, CostValue::Finite(total))?;
    }
    Ok(out)
}

/// Replaces every constraint table by its relaxation. Identical tables are
/// relaxed once.
pub fn relax_instance(inst: &VcspInstance) -> Result<RelaxedInstance> {
    if inst.kind != DomainKind::PositiveOnly {
        return Err(Error::WrongKind { expected: "positive-only" });
    }
    let mut cache: HashMap<&CostTable, CostTable> = HashMap::new();
    let mut out = VcspInstance::with_kind(inst.n_vars, inst.k, DomainKind::Full)?.with_max_cells(inst.max_cells);
    for (position, c) in inst.constraints.iter().enumerate() {
        let g = match cache.get(&c.table) {
            Some(g) => g.clone(),
            None => {
                let g = match relax(&c.table)? {
                    RelaxationOutcome::Relaxed(r) => r.table,
                    RelaxationOutcome::NotExtendable(w) => {
                        return Err(Error::ConstraintNotExtendable { position, witness: Box::new(w) })
                    }
                };
                cache.insert(&c.table, g.clone());
                g
            }
        };
        out.push(Constraint { table: g, scope: c.scope.clone() })?;
    }
    RelaxedInstance::from_instance(out)
}

/// Least `c` such that `c * g` is integer valued for every table of `relaxed`.
pub fn instance_scaling_factor(relaxed: &RelaxedInstance) -> BigInt {
    relaxed.instance.constraints.iter().fold(BigInt::one(), |acc, c| acc.lcm(&scaling_factor(&c.table)))
}

/// `OPT(I) - OPT(I')`, by brute force over both assembled tables.
pub fn gap_d(inst: &VcspInstance, relaxed: &RelaxedInstance) -> Result<BigRational> {
    let crisp = brute_min_with_limit(&assemble(inst, DomainKind::PositiveOnly)?, inst.max_cells)?;
    let Some(opt) = crisp.optimum.into_finite() else {
        return Err(Error::Infeasible);
    };
    let rel = brute_min_with_limit(&assemble(&relaxed.instance, DomainKind::Full)?, relaxed.instance.max_cells)?;
    let rel_opt = rel.optimum.into_finite().ok_or(Error::Infeasible)?;
    Ok(opt - rel_opt)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutarkyReport {
    /// 0-based variable -> label, for the nonzero coordinates of the minimizer.
    pub fixed: BTreeMap<usize, u32>,
    pub relaxed_optimum: CostValue,
    pub chosen_minimizer: Labeling,
    /// Set when verification was requested.
    pub persistency_verified: Option<bool>,
}

/// Partial assignment read off a minimizer of the relaxed instance. Among
/// all minimizers the one with the most nonzero labels is used, ties going
/// to the smallest cube index.
pub fn autarky(inst: &VcspInstance, verify: bool) -> Result<AutarkyReport> {
    let relaxed = relax_instance(inst)?;
    autarky_from(inst, &relaxed, verify)
}

pub fn autarky_from(inst: &VcspInstance, relaxed: &RelaxedInstance, verify: bool) -> Result<AutarkyReport> {
    let g = assemble(&relaxed.instance, DomainKind::Full)?;
    let report = brute_min_with_limit(&g, relaxed.instance.max_cells)?;
    let cube = g.cube();
    let best =
        report.minimizers.iter().copied().min_by_key(|&i| (cube.zero_count_index(i), i)).ok_or(Error::Infeasible)?;
    let chosen = Labeling::new(cube.digits(best));
    let fixed = chosen.labels().iter().enumerate().filter(|(_, &l)| l != 0).map(|(v, &l)| (v, l)).collect();
    let persistency_verified = if verify {
        let f = assemble(inst, DomainKind::PositiveOnly)?;
        Some(persistency_check(&f, &g)?)
    } else {
        None
    };
    Ok(AutarkyReport { fixed, relaxed_optimum: report.optimum, chosen_minimizer: chosen, persistency_verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::verify_ksubmodular;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn golden_table() -> CostTable {
        let cube = Cube::new(2, 2).unwrap();
        let mut f = CostTable::constant(cube, DomainKind::PositiveOnly, q(0));
        f.set(&Labeling::from([1, 2]), CostValue::from_int(1)).unwrap();
        f
    }

    fn golden_instance() -> VcspInstance {
        let mut inst = VcspInstance::new(2, 2).unwrap();
        inst.push(Constraint::new(golden_table(), vec![0, 1]).unwrap()).unwrap();
        inst
    }

    #[test]
    fn assemble_sums_unary_constraints() {
        let cube = Cube::new(1, 3).unwrap();
        let u = CostTable::from_rows(
            cube,
            DomainKind::PositiveOnly,
            (1..=3).map(|l| (Labeling::from([l]), CostValue::from_int(l as i64))),
        )
        .unwrap();
        let v = CostTable::from_rows(
            cube,
            DomainKind::PositiveOnly,
            (1..=3).map(|l| (Labeling::from([l]), CostValue::from_int(10 * l as i64))),
        )
        .unwrap();
        let mut inst = VcspInstance::new(2, 3).unwrap();
        inst.push(Constraint::new(u, vec![0]).unwrap()).unwrap();
        inst.push(Constraint::new(v, vec![1]).unwrap()).unwrap();
        let t = assemble(&inst, DomainKind::PositiveOnly).unwrap();
        for a in 1..=3u32 {
            for b in 1..=3u32 {
                let want = CostValue::from_int(a as i64 + 10 * b as i64);
                assert_eq!(t.get(&Labeling::from([a, b])).unwrap(), want);
            }
        }
        let full = assemble(&inst, DomainKind::Full).unwrap();
        assert_eq!(full.get(&Labeling::from([0, 1])).unwrap(), CostValue::Infinity);
    }

    #[test]
    fn assemble_repeated_and_swapped_scope() {
        let mut inst = VcspInstance::new(2, 2).unwrap();
        inst.push(Constraint::new(golden_table(), vec![1, 0]).unwrap()).unwrap();
        inst.push(Constraint::new(golden_table(), vec![1, 1]).unwrap()).unwrap();
        let t = assemble(&inst, DomainKind::PositiveOnly).unwrap();
        assert_eq!(t.get(&Labeling::from([2, 1])).unwrap(), CostValue::from_int(1));
        assert_eq!(t.get(&Labeling::from([1, 2])).unwrap(), CostValue::zero());
    }

    #[test]
    fn empty_instance() {
        let inst = VcspInstance::new(3, 2).unwrap();
        let t = assemble(&inst, DomainKind::Full).unwrap();
        assert_eq!(t, CostTable::constant(t.cube(), DomainKind::Full, q(0)));
        let r = relax_instance(&inst).unwrap();
        assert!(r.instance.constraints().is_empty());
        assert_eq!(instance_scaling_factor(&r), BigInt::one());
        assert_eq!(gap_d(&inst, &r).unwrap(), q(0));
    }

    #[test]
    fn golden_pipeline() {
        let inst = golden_instance();
        assert_eq!(assemble(&inst, DomainKind::PositiveOnly).unwrap(), golden_table());
        let r = relax_instance(&inst).unwrap();
        assert!(r.nonnegative);
        assert!(verify_ksubmodular(&assemble(&r.instance, DomainKind::Full).unwrap()).is_none());
        assert_eq!(instance_scaling_factor(&r), BigInt::from(2));
        assert_eq!(gap_d(&inst, &r).unwrap(), q(0));

        let a = autarky(&inst, true).unwrap();
        assert_eq!(a.chosen_minimizer, Labeling::from([1, 1]));
        assert_eq!(a.fixed, BTreeMap::from([(0, 1), (1, 1)]));
        assert_eq!(a.relaxed_optimum, CostValue::zero());
        assert_eq!(a.persistency_verified, Some(true));
    }

    #[test]
    fn failing_constraint_is_located() {
        let cube = Cube::new(2, 3).unwrap();
        let mut bad = CostTable::empty(cube, DomainKind::PositiveOnly);
        for x in [[1, 1], [2, 2], [3, 1]] {
            bad.set(&Labeling::from(x), CostValue::zero()).unwrap();
        }
        let ok = CostTable::constant(cube, DomainKind::PositiveOnly, q(1));
        let mut inst = VcspInstance::new(3, 3).unwrap();
        inst.push(Constraint::new(ok.clone(), vec![0, 1]).unwrap()).unwrap();
        inst.push(Constraint::new(bad, vec![1, 2]).unwrap()).unwrap();
        inst.push(Constraint::new(ok, vec![2, 0]).unwrap()).unwrap();
        match relax_instance(&inst) {
            Err(Error::ConstraintNotExtendable { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_zero_minimizer_fixes_nothing() {
        let cube = Cube::new(1, 2).unwrap();
        let f = CostTable::constant(cube, DomainKind::PositiveOnly, q(0));
        let mut inst = VcspInstance::new(1, 2).unwrap();
        inst.push(Constraint::new(f.clone(), vec![0]).unwrap()).unwrap();

        let mut g = f.to_full();
        g.set(&Labeling::from([0]), CostValue::from_int(-1)).unwrap();
        let mut alt = VcspInstance::with_kind(1, 2, DomainKind::Full).unwrap();
        alt.push(Constraint::new(g, vec![0]).unwrap()).unwrap();
        let alt = RelaxedInstance::from_instance(alt).unwrap();
        assert!(!alt.nonnegative);

        let a = autarky_from(&inst, &alt, true).unwrap();
        assert_eq!(a.chosen_minimizer, Labeling::from([0]));
        assert!(a.fixed.is_empty());
        assert_eq!(a.persistency_verified, Some(true));
        assert_eq!(gap_d(&inst, &alt).unwrap(), q(1));
    }

    #[test]
    fn push_validates() {
        let mut inst = VcspInstance::new(2, 3).unwrap();
        let t = golden_table();
        assert!(matches!(inst.push(Constraint::new(t.clone(), vec![0, 1]).unwrap()), Err(Error::BadConstraint { .. })));
        let mut inst = VcspInstance::new(1, 2).unwrap();
        assert!(matches!(inst.push(Constraint::new(t, vec![0, 1]).unwrap()), Err(Error::BadConstraint { .. })));
    }
}
