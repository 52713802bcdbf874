//! Lifts from a base chart to its tangent chart: complete and vertical lifts
//! of multivectors, the tangent Poisson tensor and fiber-linear functions.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::multivec::{tidy, MultiVector};
use crate::poisson::PoissonTensor;
use crate::symexpr::{Expr, Verdict, ZeroTest};

fn tangent_of(p: &MultiVector) -> Result<Chart> {
    if p.chart().is_tangent() {
        return Err(Error::ChartKind { expected: "base" });
    }
    p.chart().tangent()
}

/// `sum_s (d f / d x^s) y^s` over a base chart.
fn fiber_derivative(base: &Chart, f: &Expr) -> Expr {
    let n = base.dim();
    let tangent_names = fiber_names(base);
    Expr::sum((0..n).map(|s| &f.diff(base.name(s)) * &Expr::var(tangent_names[s].clone())))
}

fn fiber_names(base: &Chart) -> Vec<String> {
    base.names().iter().map(|n| crate::chart::fiber_name(n)).collect()
}

/// Complete lift. Each component `v d_{i1}^...^d_{ik}` contributes the k terms
/// with one horizontal slot and the rest vertical, plus `(sum_s d_s v y^s)`
/// on the all-vertical wedge.
pub fn complete_lift(p: &MultiVector) -> Result<MultiVector> {
    let t = tangent_of(p)?;
    let base = p.chart();
    let n = base.dim();
    let mut terms = Vec::new();
    for (idx, v) in p.components() {
        for l in 0..idx.len() {
            let slots: Vec<usize> = idx
                .iter()
                .enumerate()
                .map(|(m, &i)| if m == l { i } else { i + n })
                .collect();
            terms.push((v.clone(), slots));
        }
        let vertical: Vec<usize> = idx.iter().map(|i| i + n).collect();
        terms.push((fiber_derivative(base, v), vertical));
    }
    Ok(MultiVector::from_raw(&t, p.degree(), terms, p.is_rational()))
}

/// Vertical lift: every slot moves to its fiber partner.
pub fn vertical_lift(p: &MultiVector) -> Result<MultiVector> {
    let t = tangent_of(p)?;
    let n = p.chart().dim();
    let terms = p
        .components()
        .map(|(idx, v)| (v.clone(), idx.iter().map(|i| i + n).collect()))
        .collect();
    Ok(MultiVector::from_raw(&t, p.degree(), terms, p.is_rational()))
}

/// The tangent Poisson tensor in block form: the mixed block carries the
/// base matrix and the fiber block its fiber derivative.
pub fn tangent_block(pi: &MultiVector) -> Result<MultiVector> {
    pi.require_degree(2)?;
    let t = tangent_of(pi)?;
    let base = pi.chart();
    let n = base.dim();
    let m = pi.matrix()?;
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !m[i][j].is_zero() {
                terms.push((m[i][j].clone(), vec![i, n + j]));
            }
            if i < j && !m[i][j].is_zero() {
                terms.push((fiber_derivative(base, &m[i][j]), vec![n + i, n + j]));
            }
        }
    }
    Ok(MultiVector::from_raw(&t, 2, terms, pi.is_rational()))
}

/// The tangent lift of a Poisson tensor, checked against the complete lift
/// and re-verified for Jacobi.
pub fn tangent_lift_poisson(pi: &PoissonTensor, zt: &ZeroTest) -> Result<PoissonTensor> {
    pi.require_poisson()?;
    let block = tangent_block(pi.bivector())?;
    let complete = complete_lift(pi.bivector())?;
    let agree = block.equal_verdict(&complete, zt)?;
    if agree.is_nonzero() {
        return Err(Error::Precondition(format!(
            "block form disagrees with the complete lift: {agree}"
        )));
    }
    PoissonTensor::verified(block, zt)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftKind {
    /// `f o q`: the base function read on the tangent chart.
    Pullback,
    /// `l_df = sum_s (d f / d x^s) y^s`.
    FiberLinear,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftedFunction {
    pub kind: LiftKind,
    pub base: Expr,
    pub realized: Expr,
}

pub fn pullback(base: &Chart, f: &Expr) -> Result<LiftedFunction> {
    base.check_expr(f)?;
    Ok(LiftedFunction {
        kind: LiftKind::Pullback,
        base: f.clone(),
        realized: tidy(f),
    })
}

pub fn fiber_linear(base: &Chart, f: &Expr) -> Result<LiftedFunction> {
    base.check_expr(f)?;
    Ok(LiftedFunction {
        kind: LiftKind::FiberLinear,
        base: f.clone(),
        realized: tidy(&fiber_derivative(base, f)),
    })
}

/// For each Casimir `c` of `pi`, the lifts `c o q` and `l_dc` with their
/// Casimir verdicts against the tangent lift.
pub fn lifted_casimirs(
    pi: &PoissonTensor,
    cs: &[Expr],
    zt: &ZeroTest,
) -> Result<Vec<(LiftedFunction, Verdict)>> {
    let lifted = tangent_lift_poisson(pi, zt)?;
    let mut out = Vec::new();
    for c in cs {
        let v = pi.is_casimir(c, zt)?;
        if v.is_nonzero() {
            return Err(Error::Precondition(format!("{c} is not a Casimir: {v}")));
        }
        for f in [pullback(pi.chart(), c)?, fiber_linear(pi.chart(), c)?] {
            let verdict = lifted.is_casimir(&f.realized, zt)?;
            out.push((f, verdict));
        }
    }
    Ok(out)
}

/// Anchor of the cotangent algebroid on exact forms: `a(df)(g) = {f, g}`.
pub fn anchor_apply(f: &Expr, g: &Expr, pi: &PoissonTensor) -> Result<Expr> {
    pi.bracket(f, g)
}
