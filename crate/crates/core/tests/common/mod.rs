#![allow(dead_code)]

use ksub::{closure_theta, CostTable, CostValue, Cube, DomainKind, Labeling, LabelingSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn table(cube: Cube, kind: DomainKind, rows: &[(&[u32], BigRational)]) -> CostTable {
    let mut t = CostTable::empty(cube, kind);
    for (x, v) in rows {
        t.set(&Labeling::new(x.to_vec()), CostValue::Finite(v.clone())).unwrap();
    }
    t
}

/// f(1,2) = 1, f = 0 elsewhere on [2]^2.
pub fn golden_f() -> CostTable {
    let cube = Cube::new(2, 2).unwrap();
    let z = q(0, 1);
    table(
        cube,
        DomainKind::PositiveOnly,
        &[(&[1, 1], z.clone()), (&[2, 1], z.clone()), (&[1, 2], q(1, 1)), (&[2, 2], z)],
    )
}

/// Relaxation of [`golden_f`], worked out by hand.
pub fn golden_g() -> CostTable {
    let cube = Cube::new(2, 2).unwrap();
    let z = q(0, 1);
    table(
        cube,
        DomainKind::Full,
        &[
            (&[0, 0], z.clone()),
            (&[1, 0], q(1, 2)),
            (&[2, 0], z.clone()),
            (&[0, 1], z.clone()),
            (&[1, 1], z.clone()),
            (&[2, 1], z.clone()),
            (&[0, 2], q(1, 2)),
            (&[1, 2], q(1, 1)),
            (&[2, 2], z),
        ],
    )
}

/// f extended by a constant 0 off [2]^2; not k-submodular.
pub fn golden_constant_extension() -> CostTable {
    let mut g = CostTable::constant(Cube::new(2, 2).unwrap(), DomainKind::Full, q(0, 1));
    g.set(&Labeling::from([1, 2]), CostValue::from_int(1)).unwrap();
    g
}

/// Domain {(1,1),(2,2),(3,1)} in [3]^2, which is not theta-closed.
pub fn three_point_f() -> CostTable {
    let cube = Cube::new(2, 3).unwrap();
    let z = q(0, 1);
    table(cube, DomainKind::PositiveOnly, &[(&[1, 1], z.clone()), (&[2, 2], z.clone()), (&[3, 1], z)])
}

pub fn random_cube(rng: &mut StdRng, kmax: u32, nmax: usize) -> Cube {
    Cube::new(rng.gen_range(1..=nmax), rng.gen_range(1..=kmax)).unwrap()
}

#[derive(Debug, Clone, Copy)]
pub enum Values {
    /// Integers in `[-m, m]`.
    Int(i64),
    /// `p/q` with `|p| <= m`, `1 <= q <= 6`.
    Rational(i64),
}

pub fn random_value(rng: &mut StdRng, v: Values) -> BigRational {
    match v {
        Values::Int(m) => q(rng.gen_range(-m..=m), 1),
        Values::Rational(m) => q(rng.gen_range(-m..=m), rng.gen_range(1..=6)),
    }
}

pub fn random_subset(rng: &mut StdRng, cube: Cube, p: f64) -> LabelingSet {
    let members: Vec<usize> = cube.positive_indices().filter(|_| rng.gen_bool(p)).collect();
    LabelingSet::from_indices(cube, members).unwrap()
}

/// Theta-closure of a few random points, or all of `[k]^n`.
pub fn random_extendable_domain(rng: &mut StdRng, cube: Cube) -> LabelingSet {
    if rng.gen_bool(0.3) {
        return LabelingSet::all_positive(cube);
    }
    let all: Vec<usize> = cube.positive_indices().collect();
    let seeds = rng.gen_range(1..=4);
    let picked: Vec<usize> = (0..seeds).map(|_| all[rng.gen_range(0..all.len())]).collect();
    closure_theta(&LabelingSet::from_indices(cube, picked).unwrap()).unwrap()
}

/// Any of: full domain, theta-closed sparse domain, arbitrary subset.
pub fn random_domain(rng: &mut StdRng, cube: Cube) -> LabelingSet {
    if rng.gen_bool(0.5) {
        random_extendable_domain(rng, cube)
    } else {
        let p = rng.gen_range(0.05..0.95);
        random_subset(rng, cube, p)
    }
}

pub fn table_on(rng: &mut StdRng, dom: &LabelingSet, v: Values) -> CostTable {
    let mut t = CostTable::empty(dom.cube(), DomainKind::PositiveOnly);
    for i in dom.indices() {
        t.set_index(i, CostValue::Finite(random_value(rng, v))).unwrap();
    }
    t
}

pub fn random_extendable_f(rng: &mut StdRng, kmax: u32, nmax: usize, v: Values) -> CostTable {
    let cube = random_cube(rng, kmax, nmax);
    let dom = random_extendable_domain(rng, cube);
    table_on(rng, &dom, v)
}

pub fn random_full_f(rng: &mut StdRng, cube: Cube, v: Values) -> CostTable {
    table_on(rng, &LabelingSet::all_positive(cube), v)
}

/// Every positive-only table on `[k]^n` whose values come from `alphabet`
/// (`None` is `+inf`).
pub fn exhaustive_tables(k: u32, n: usize, alphabet: &[Option<i64>]) -> Vec<CostTable> {
    let cube = Cube::new(n, k).unwrap();
    let points: Vec<usize> = cube.positive_indices().collect();
    let a = alphabet.len();
    let total = a.pow(points.len() as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut t = CostTable::empty(cube, DomainKind::PositiveOnly);
        for &p in &points {
            if let Some(v) = alphabet[code % a] {
                t.set_index(p, CostValue::from_int(v)).unwrap();
            }
            code /= a;
        }
        out.push(t);
    }
    out
}

pub fn domain_of(t: &CostTable) -> LabelingSet {
    LabelingSet::from_indices(t.cube(), t.domain_indices()).unwrap()
}

pub fn random_labeling(rng: &mut StdRng, n: usize, lo: u32, k: u32) -> Labeling {
    Labeling::new((0..n).map(|_| rng.gen_range(lo..=k)).collect())
}

/// Another relaxation of the same function, pointwise below `g`: subtracts
/// `c_j >= 0` wherever coordinate `j` is zero and lowers the all-zero point.
pub fn perturb(rng: &mut StdRng, g: &CostTable) -> CostTable {
    let cube = g.cube();
    let c: Vec<BigRational> = (0..cube.n()).map(|_| q(rng.gen_range(0..=6), rng.gen_range(1..=4))).collect();
    let delta = q(rng.gen_range(0..=6), rng.gen_range(1..=4));
    let mut out = g.clone();
    for (i, v) in g.entries() {
        let digits = cube.digits(i);
        let mut w = v.clone();
        for (d, cj) in digits.iter().zip(&c) {
            if *d == 0 {
                w -= cj;
            }
        }
        if digits.iter().all(|&d| d == 0) {
            w -= &delta;
        }
        out.set_index(i, CostValue::Finite(w)).unwrap();
    }
    out
}
