//! Seeded generators of random test data: polynomials, multivectors, Poisson
//! vector fields and linear Poisson tensors.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::changevar::{LinearMap, StructureConstants, TableEntry};
use crate::chart::Chart;
use crate::error::Result;
use crate::multivec::MultiVector;
use crate::symexpr::{Expr, Rational};

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// A sum of up to `terms` monomials of total degree `<= max_deg` in `vars`,
/// with integer coefficients in `[-3, 3]`.
pub fn polynomial(rng: &mut impl Rng, vars: &[Expr], max_deg: u32, terms: usize) -> Expr {
    let n = rng.gen_range(0..=terms);
    Expr::sum((0..n).map(|_| {
        let c = rng.gen_range(-3i64..=3);
        let deg = rng.gen_range(0..=max_deg);
        let mut m = Expr::int(c);
        for _ in 0..deg {
            if let Some(v) = vars.choose(rng) {
                m = m * v.clone();
            }
        }
        m
    }))
}

/// A polynomial multivector with a random subset of components.
pub fn multivector(rng: &mut impl Rng, chart: &Chart, degree: usize, max_deg: u32) -> Result<MultiVector> {
    let vars = chart.vars();
    let n = chart.dim();
    let mut terms = Vec::new();
    let count = rng.gen_range(0..=3);
    for _ in 0..count {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        idx.truncate(degree);
        if idx.len() == degree {
            terms.push((idx, polynomial(rng, &vars, max_deg, 2)));
        }
    }
    MultiVector::from_terms(chart, degree, terms)
}

/// A Poisson vector field of `x1 d2 ^ d3` on the standard 3-chart, built from
/// a potential `a(x)` and a profile `f(x1)`:
/// `v1 = x1 f, v2 = d3 a, v3 = -d2 a + x3 f`.
pub fn poisson_field(rng: &mut impl Rng) -> MultiVector {
    let f = polynomial(rng, &[Expr::var("x1")], 2, 2);
    field_from(rng, f)
}

/// A Poisson field of `x1 d2 ^ d3` with zero profile, so that it annihilates
/// every function of `x1`.
pub fn poisson_field_preserving_x1(rng: &mut impl Rng) -> MultiVector {
    field_from(rng, Expr::zero())
}

fn field_from(rng: &mut impl Rng, f: Expr) -> MultiVector {
    let chart = Chart::standard(3);
    let xs = chart.vars();
    let a = polynomial(rng, &xs, 3, 3);
    let comps = vec![
        xs[0].clone() * f.clone(),
        a.diff("x3"),
        -a.diff("x2") + xs[2].clone() * f,
    ];
    MultiVector::vector(&chart, comps).expect("three components")
}

/// A pair of Poisson fields of `x1 d2 ^ d3` whose bracket is not identically
/// zero.
pub fn noncommuting_pair(rng: &mut impl Rng) -> (MultiVector, MultiVector) {
    loop {
        let x = poisson_field(rng);
        let y = poisson_field(rng);
        if !x.schouten(&y).expect("vector fields").is_empty() {
            return (x, y);
        }
    }
}

fn entries(t: &[(usize, usize, usize, i64)]) -> Vec<TableEntry> {
    t.iter().map(|&(i, j, k, c)| (i, j, k, int(c))).collect()
}

/// Small Lie algebras of dimension 3 and 4.
pub fn catalog(dim: usize) -> Vec<StructureConstants> {
    let tables: &[&[(usize, usize, usize, i64)]] = match dim {
        3 => &[
            &[(2, 3, 1, 1)],
            &[(1, 3, 1, 1), (2, 3, 2, 1)],
            &[(1, 3, 1, 1), (2, 3, 2, -1)],
            &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)],
            &[(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)],
        ],
        4 => &[
            &[(2, 4, 1, 1), (3, 4, 2, 1)],
            &[(1, 2, 2, 1), (3, 4, 4, 1)],
            &[(2, 3, 1, 1)],
            &[(1, 4, 1, 1), (2, 4, 2, 1), (3, 4, 3, 1)],
        ],
        _ => &[],
    };
    tables
        .iter()
        .map(|t| StructureConstants::new(dim, &entries(t)).expect("catalog algebras satisfy Jacobi"))
        .collect()
}

/// An invertible integer matrix with entries in `[-2, 2]`.
pub fn invertible_map(rng: &mut impl Rng, dim: usize) -> LinearMap {
    loop {
        let m = (0..dim)
            .map(|_| (0..dim).map(|_| int(rng.gen_range(-2..=2))).collect())
            .collect();
        if let Ok(a) = LinearMap::new(m) {
            return a;
        }
    }
}

/// A linear Poisson tensor on the standard chart: a catalog algebra in a
/// random basis.
pub fn linear_poisson(rng: &mut impl Rng, dim: usize) -> Result<MultiVector> {
    let algebras = catalog(dim);
    let c = algebras.choose(rng).expect("catalog has dimensions 3 and 4");
    let a = invertible_map(rng, dim);
    c.change_basis(&a)?.tensor(&Chart::standard(dim))
}
