//! Identities shared by the acceptance and property suites. Each returns the
//! multivector that must vanish.
#![allow(dead_code)]

use poisson_lift::chart::Chart;
use poisson_lift::lift::{complete_lift, fiber_linear, pullback, vertical_lift};
use poisson_lift::multivec::MultiVector;
use poisson_lift::poisson::PoissonTensor;
use poisson_lift::symexpr::{Expr, ZeroTest};

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

/// Signed sum that treats empty multivectors of any degree as zero.
pub fn combine(chart: &Chart, parts: &[(i64, MultiVector)]) -> MultiVector {
    let mut acc: Option<MultiVector> = None;
    for (s, m) in parts {
        if m.is_empty() {
            continue;
        }
        let m = m.scale(&Expr::int(*s));
        acc = Some(match acc {
            None => m,
            Some(a) => a.add(&m).expect("identity terms share a degree"),
        });
    }
    acc.unwrap_or_else(|| MultiVector::zero(chart, 0))
}

fn d(m: &MultiVector) -> i64 {
    m.degree() as i64
}

pub fn antisymmetry(p: &MultiVector, q: &MultiVector) -> MultiVector {
    let s = sign((d(p) - 1) * (d(q) - 1) % 2 != 0);
    combine(p.chart(), &[(1, p.schouten(q).unwrap()), (s, q.schouten(p).unwrap())])
}

pub fn leibniz(p: &MultiVector, q: &MultiVector, r: &MultiVector) -> MultiVector {
    let s = sign((d(p) - 1) * d(q) % 2 != 0);
    combine(
        p.chart(),
        &[
            (1, p.schouten(&q.wedge(r).unwrap()).unwrap()),
            (-1, p.schouten(q).unwrap().wedge(r).unwrap()),
            (-s, q.wedge(&p.schouten(r).unwrap()).unwrap()),
        ],
    )
}

pub fn jacobi(p: &MultiVector, q: &MultiVector, r: &MultiVector) -> MultiVector {
    let (a, b, c) = (d(p) - 1, d(q) - 1, d(r) - 1);
    combine(
        p.chart(),
        &[
            (sign(a * c % 2 != 0), p.schouten(&q.schouten(r).unwrap()).unwrap()),
            (sign(b * a % 2 != 0), q.schouten(&r.schouten(p).unwrap()).unwrap()),
            (sign(c * b % 2 != 0), r.schouten(&p.schouten(q).unwrap()).unwrap()),
        ],
    )
}

pub fn wedge_commutativity(p: &MultiVector, q: &MultiVector) -> MultiVector {
    let s = sign(d(p) * d(q) % 2 != 0);
    combine(p.chart(), &[(1, p.wedge(q).unwrap()), (-s, q.wedge(p).unwrap())])
}

/// `[X^Y, Z^W]` against its expansion in vector-field brackets.
pub fn wedge_expansion(x: &MultiVector, y: &MultiVector, z: &MultiVector, w: &MultiVector) -> MultiVector {
    let br = |a: &MultiVector, b: &MultiVector| a.schouten(b).unwrap();
    let w3 = |a: MultiVector, b: &MultiVector, c: &MultiVector| a.wedge(b).unwrap().wedge(c).unwrap();
    combine(
        x.chart(),
        &[
            (1, br(&x.wedge(y).unwrap(), &z.wedge(w).unwrap())),
            (-1, w3(br(x, z), y, w)),
            (1, w3(br(x, w), y, z)),
            (1, w3(br(y, z), x, w)),
            (-1, w3(br(y, w), x, z)),
        ],
    )
}

/// The three lifted commutator relations, as one list of defects.
pub fn lift_commutators(x: &MultiVector, y: &MultiVector) -> Vec<MultiVector> {
    let (xc, xv) = (complete_lift(x).unwrap(), vertical_lift(x).unwrap());
    let (yc, yv) = (complete_lift(y).unwrap(), vertical_lift(y).unwrap());
    let xy = x.schouten(y).unwrap();
    let t = xc.chart().clone();
    vec![
        combine(&t, &[(1, xc.schouten(&yc).unwrap()), (-1, complete_lift(&xy).unwrap())]),
        combine(&t, &[(1, xc.schouten(&yv).unwrap()), (-1, vertical_lift(&xy).unwrap())]),
        xv.schouten(&yv).unwrap(),
    ]
}

/// Bracket rules of the tangent tensor on pulled-back and fiber-linear
/// functions, as scalar defects.
pub fn bracket_rules(pi: &PoissonTensor, tangent: &PoissonTensor, f: &Expr, g: &Expr) -> Vec<Expr> {
    let base = pi.chart();
    let (fq, gq) = (pullback(base, f).unwrap().realized, pullback(base, g).unwrap().realized);
    let (lf, lg) = (fiber_linear(base, f).unwrap().realized, fiber_linear(base, g).unwrap().realized);
    let fg = pi.bracket(f, g).unwrap();
    vec![
        tangent.bracket(&fq, &gq).unwrap(),
        tangent.bracket(&fq, &lg).unwrap() - pullback(base, &fg).unwrap().realized,
        tangent.bracket(&lf, &lg).unwrap() - fiber_linear(base, &fg).unwrap().realized,
    ]
}

/// `[pi_TM, P_V] - ([pi, P])_V`.
pub fn vertical_intertwines(pi: &PoissonTensor, tangent: &PoissonTensor, p: &MultiVector) -> MultiVector {
    let lhs = tangent.lichnerowicz(&vertical_lift(p).unwrap()).unwrap();
    let rhs = vertical_lift(&pi.lichnerowicz(p).unwrap()).unwrap();
    combine(tangent.chart(), &[(1, lhs), (-1, rhs)])
}

pub fn zt() -> ZeroTest {
    ZeroTest::default()
}
