//! Deformations `pi_TM + t c(x) D` of the tangent Poisson tensor, where `D` is
//! a sum of wedges of lifted vector fields. Every constructor checks the
//! hypotheses that make the result Poisson, then re-checks Jacobi.

use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::lift::{complete_lift, tangent_lift_poisson, vertical_lift};
use crate::multivec::MultiVector;
use crate::poisson::PoissonTensor;
use crate::symexpr::{Expr, Rational, Verdict, ZeroTest};

/// Which lifts enter a wedge term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    /// `X_C ^ Y_C`
    CC,
    /// `X_C ^ Y_V`
    CV,
    /// `X_V ^ Y_V`
    VV,
}

impl PairKind {
    pub fn parse(s: &str) -> Option<PairKind> {
        match s.to_ascii_uppercase().as_str() {
            "CC" => Some(PairKind::CC),
            "CV" => Some(PairKind::CV),
            "VV" => Some(PairKind::VV),
            _ => None,
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairKind::CC => "CC",
            PairKind::CV => "CV",
            PairKind::VV => "VV",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DeformTerm {
    pub kind: PairKind,
    pub x: MultiVector,
    pub y: MultiVector,
    /// Display names for error messages.
    pub labels: (String, String),
}

impl DeformTerm {
    pub fn new(kind: PairKind, x: MultiVector, y: MultiVector) -> DeformTerm {
        DeformTerm {
            kind,
            x,
            y,
            labels: ("X".into(), "Y".into()),
        }
    }

    pub fn named(mut self, x: impl Into<String>, y: impl Into<String>) -> DeformTerm {
        self.labels = (x.into(), y.into());
        self
    }

    /// The lifted wedge on the tangent chart.
    pub fn tensor(&self) -> Result<MultiVector> {
        let (a, b) = match self.kind {
            PairKind::CC => (complete_lift(&self.x)?, complete_lift(&self.y)?),
            PairKind::CV => (complete_lift(&self.x)?, vertical_lift(&self.y)?),
            PairKind::VV => (vertical_lift(&self.x)?, vertical_lift(&self.y)?),
        };
        a.wedge(&b)
    }
}

#[derive(Clone, Debug)]
pub struct DeformationSpec {
    pub base: PoissonTensor,
    pub lambda: Rational,
    pub casimir: Expr,
    pub terms: Vec<DeformTerm>,
}

impl DeformationSpec {
    /// The undeformed sum `D` of the lifted wedges.
    pub fn pair_sum(&self) -> Result<MultiVector> {
        let t = self.base.chart().tangent()?;
        let mut d = MultiVector::zero(&t, 2);
        for term in &self.terms {
            d = d.add(&term.tensor()?)?;
        }
        Ok(d)
    }

    /// The deformation `t c(x) D` added to the tangent tensor.
    pub fn deformation(&self) -> Result<MultiVector> {
        let factor = Expr::rational(self.lambda.clone()) * self.casimir.clone();
        Ok(self.pair_sum()?.scale(&factor))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DeformOptions {
    /// Skip hypothesis checks and return the tensor whatever its verdict.
    pub debug_force: bool,
}

/// How the hypotheses were discharged.
#[derive(Clone, Debug, PartialEq)]
pub enum Route {
    /// Commutator conditions of the named statement hold.
    Conditions(String),
    /// The case conditions fail, but `[D, D] = 0` was verified directly.
    DirectJacobi { failed: Vec<String> },
    /// Hypotheses were not checked.
    Forced,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Conditions(s) => write!(f, "{s}"),
            Route::DirectJacobi { failed } => write!(
                f,
                "case conditions fail ({}); [D,D] = 0 verified directly",
                failed.join(", ")
            ),
            Route::Forced => f.write_str("forced: hypotheses not checked"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Deformation {
    pub tensor: PoissonTensor,
    pub route: Route,
}

fn check_base_field(chart: &Chart, v: &MultiVector, label: &str) -> Result<()> {
    if v.chart() != chart {
        return Err(Error::ChartMismatch);
    }
    if v.degree() != 1 {
        return Err(Error::Precondition(format!("{label} is not a vector field")));
    }
    Ok(())
}

/// `X_C ^ X_V`, Poisson for any vector field X.
pub fn pair_tensor_cv(x: &MultiVector, zt: &ZeroTest) -> Result<PoissonTensor> {
    let d = DeformTerm::new(PairKind::CV, x.clone(), x.clone()).tensor()?;
    let p = PoissonTensor::check(d, zt)?;
    if p.jacobi().is_nonzero() {
        return Err(Error::JacobiFailed(p.jacobi().clone()));
    }
    Ok(p)
}

/// Verdict that `[X,Y] ^ X ^ Y = 0`, the condition for `X ^ Y` to be Poisson.
pub fn decomposable_condition(x: &MultiVector, y: &MultiVector, zt: &ZeroTest) -> Result<Verdict> {
    let t = x.schouten(y)?.wedge(x)?.wedge(y)?;
    t.zero_verdict(zt)
}

/// Verdict that the tangent tensor of `base` is compatible with `d`.
pub fn compatibility_report(base: &PoissonTensor, d: &MultiVector, zt: &ZeroTest) -> Result<Verdict> {
    let t = tangent_lift_poisson(base, zt)?;
    if d.chart() != t.chart() {
        return Err(Error::ChartMismatch);
    }
    t.bivector().schouten(d)?.zero_verdict(zt)
}

struct Checker<'a> {
    spec: &'a DeformationSpec,
    zt: &'a ZeroTest,
}

impl Checker<'_> {
    fn commutes(&self, a: (&MultiVector, &str), b: (&MultiVector, &str)) -> Result<Option<String>> {
        let v = a.0.schouten(b.0)?.zero_verdict(self.zt)?;
        Ok(v.is_nonzero().then(|| format!("[{},{}] != 0 ({v})", a.1, b.1)))
    }

    fn common(&self) -> Result<()> {
        let chart = self.spec.base.chart();
        self.spec.base.require_poisson()?;
        chart.check_expr(&self.spec.casimir)?;
        let v = self.spec.base.is_casimir(&self.spec.casimir, self.zt)?;
        if v.is_nonzero() {
            return Err(Error::Precondition(format!(
                "{} is not a Casimir of the base tensor: {v}",
                self.spec.casimir
            )));
        }
        for t in &self.spec.terms {
            for (f, l) in [(&t.x, &t.labels.0), (&t.y, &t.labels.1)] {
                check_base_field(chart, f, l)?;
                let v = self.spec.base.is_poisson_vf(f, self.zt)?;
                if v.is_nonzero() {
                    return Err(Error::Precondition(format!(
                        "{l} is not a Poisson vector field: {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Failing commutators for a single term.
    fn single(&self, t: &DeformTerm) -> Result<Vec<String>> {
        Ok(match t.kind {
            PairKind::VV => Vec::new(),
            PairKind::CV | PairKind::CC => self
                .commutes((&t.x, &t.labels.0), (&t.y, &t.labels.1))?
                .into_iter()
                .collect(),
        })
    }

    /// Failing commutators for an ordered pair of terms, as in the four-case
    /// statement. `a.kind <= b.kind` in the order CC < CV < VV.
    fn pair(&self, a: &DeformTerm, b: &DeformTerm) -> Result<Vec<String>> {
        let xs = [
            (&a.x, a.labels.0.as_str()),
            (&a.y, a.labels.1.as_str()),
            (&b.x, b.labels.0.as_str()),
            (&b.y, b.labels.1.as_str()),
        ];
        // Index pairs (0-based into xs) that must commute.
        let needed: Vec<(usize, usize)> = match (a.kind, b.kind) {
            (PairKind::VV, PairKind::VV) => Vec::new(),
            (PairKind::CV, PairKind::CV) => vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)],
            (PairKind::CC, PairKind::CV) | (PairKind::CC, PairKind::CC) => {
                vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            }
            (PairKind::CC, PairKind::VV) => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
            (PairKind::CV, PairKind::VV) => vec![(0, 1), (0, 2), (0, 3)],
            _ => unreachable!("terms are sorted"),
        };
        let mut failed = Vec::new();
        for (i, j) in needed {
            if let Some(msg) = self.commutes(xs[i], xs[j])? {
                failed.push(msg);
            }
        }
        Ok(failed)
    }

    fn case_name(a: PairKind, b: PairKind) -> &'static str {
        match (a, b) {
            (PairKind::VV, PairKind::VV) => "vertical pairs",
            (PairKind::CV, PairKind::CV) => "case 1",
            (PairKind::CC, PairKind::CV) | (PairKind::CC, PairKind::CC) => "case 2",
            (PairKind::CC, PairKind::VV) => "case 3",
            (PairKind::CV, PairKind::VV) => "case 4",
            _ => "mixed",
        }
    }

    /// Checks commutator conditions; falls back to a direct `[D,D]` check for
    /// several terms.
    fn conditions(&self) -> Result<Route> {
        let mut terms: Vec<&DeformTerm> = self.spec.terms.iter().collect();
        terms.sort_by_key(|t| t.kind);
        if terms.len() == 1 {
            let t = terms[0];
            let failed = self.single(t)?;
            if !failed.is_empty() {
                return Err(Error::Precondition(failed.join("; ")));
            }
            return Ok(Route::Conditions(format!("single {} term", t.kind)));
        }
        let mut failed = Vec::new();
        let mut cases = Vec::new();
        for t in &terms {
            failed.extend(self.single(t)?);
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                failed.extend(self.pair(terms[i], terms[j])?);
                let name = Checker::case_name(terms[i].kind, terms[j].kind);
                if !cases.contains(&name) {
                    cases.push(name);
                }
            }
        }
        if failed.is_empty() {
            return Ok(Route::Conditions(cases.join(", ")));
        }
        let d = self.spec.pair_sum()?;
        let v = d.schouten(&d)?.zero_verdict(self.zt)?;
        if v.is_nonzero() {
            return Err(Error::Precondition(format!(
                "{}; and [D,D] != 0 ({v})",
                failed.join("; ")
            )));
        }
        Ok(Route::DirectJacobi { failed })
    }
}

fn build(spec: &DeformationSpec, opts: DeformOptions, zt: &ZeroTest, route: Route) -> Result<Deformation> {
    let base = if opts.debug_force {
        crate::lift::tangent_block(spec.base.bivector())?
    } else {
        tangent_lift_poisson(&spec.base, zt)?.bivector().clone()
    };
    let tensor = PoissonTensor::check(base.add(&spec.deformation()?)?, zt)?;
    if !opts.debug_force && tensor.jacobi().is_nonzero() {
        return Err(Error::JacobiFailed(tensor.jacobi().clone()));
    }
    Ok(Deformation { tensor, route })
}

fn require_terms(spec: &DeformationSpec, ok: impl Fn(&DeformTerm) -> bool, what: &str) -> Result<()> {
    if spec.terms.is_empty() {
        return Err(Error::Precondition("deformation has no terms".into()));
    }
    if let Some(t) = spec.terms.iter().find(|t| !ok(t)) {
        return Err(Error::Precondition(format!(
            "term {} ^ {} of kind {} is not allowed here ({what})",
            t.labels.0, t.labels.1, t.kind
        )));
    }
    Ok(())
}

/// `pi_TM + t c X_C ^ X_V` for one Poisson vector field X.
pub fn deform_cv(spec: &DeformationSpec, opts: DeformOptions, zt: &ZeroTest) -> Result<Deformation> {
    require_terms(spec, |t| t.kind == PairKind::CV && t.x == t.y, "expected a single X_C ^ X_V")?;
    if spec.terms.len() != 1 {
        return Err(Error::Precondition("expected a single X_C ^ X_V term".into()));
    }
    if opts.debug_force {
        return build(spec, opts, zt, Route::Forced);
    }
    let ck = Checker { spec, zt };
    ck.common()?;
    build(spec, opts, zt, Route::Conditions("single CV term with Y = X".into()))
}

/// `pi_TM + t c sum X_V ^ Y_V` for Poisson vector fields.
pub fn deform_vv(spec: &DeformationSpec, opts: DeformOptions, zt: &ZeroTest) -> Result<Deformation> {
    require_terms(spec, |t| t.kind == PairKind::VV, "expected vertical pairs only")?;
    if opts.debug_force {
        return build(spec, opts, zt, Route::Forced);
    }
    Checker { spec, zt }.common()?;
    build(spec, opts, zt, Route::Conditions("vertical pairs".into()))
}

/// Mixed terms: single CV/CC terms need `[X,Y] = 0`; several terms need the
/// pairwise case conditions, or else `[D,D] = 0` checked directly.
pub fn deform_mixed(spec: &DeformationSpec, opts: DeformOptions, zt: &ZeroTest) -> Result<Deformation> {
    require_terms(spec, |_| true, "")?;
    if opts.debug_force {
        return build(spec, opts, zt, Route::Forced);
    }
    let ck = Checker { spec, zt };
    ck.common()?;
    let route = ck.conditions()?;
    build(spec, opts, zt, route)
}

/// Dispatches on the term list.
pub fn deform(spec: &DeformationSpec, opts: DeformOptions, zt: &ZeroTest) -> Result<Deformation> {
    if !spec.terms.is_empty() && spec.terms.iter().all(|t| t.kind == PairKind::VV) {
        deform_vv(spec, opts, zt)
    } else if spec.terms.len() == 1 && spec.terms[0].kind == PairKind::CV && spec.terms[0].x == spec.terms[0].y {
        deform_cv(spec, opts, zt)
    } else {
        deform_mixed(spec, opts, zt)
    }
}
