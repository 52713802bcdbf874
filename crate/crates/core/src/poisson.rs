//! Poisson tensors and the verdicts built on them.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::multivec::MultiVector;
use crate::symexpr::{Expr, Rational, Verdict, ZeroTest};

/// A bivector together with the verdict of its Jacobi check.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonTensor {
    bivector: MultiVector,
    jacobi: Verdict,
}

impl PoissonTensor {
    /// Runs the Jacobi check `[P, P] = 0` and records the verdict.
    pub fn check(bivector: MultiVector, zt: &ZeroTest) -> Result<PoissonTensor> {
        bivector.require_degree(2)?;
        let jacobi = bivector.schouten(&bivector)?.zero_verdict(zt)?;
        Ok(PoissonTensor { bivector, jacobi })
    }

    /// Like [`PoissonTensor::check`] but fails on a NonZero verdict.
    pub fn verified(bivector: MultiVector, zt: &ZeroTest) -> Result<PoissonTensor> {
        let p = PoissonTensor::check(bivector, zt)?;
        p.require_poisson()?;
        Ok(p)
    }

    pub fn bivector(&self) -> &MultiVector {
        &self.bivector
    }

    pub fn jacobi(&self) -> &Verdict {
        &self.jacobi
    }

    pub fn chart(&self) -> &Chart {
        self.bivector.chart()
    }

    pub fn require_poisson(&self) -> Result<()> {
        if self.jacobi.is_nonzero() {
            Err(Error::NotPoisson(self.jacobi.clone()))
        } else {
            Ok(())
        }
    }

    /// `{f, g}`.
    pub fn bracket(&self, f: &Expr, g: &Expr) -> Result<Expr> {
        self.chart().check_expr(f)?;
        self.chart().check_expr(g)?;
        self.bivector.bivector_bracket(f, g)
    }

    /// Verdict that `L_X P = 0`.
    pub fn is_poisson_vf(&self, x: &MultiVector, zt: &ZeroTest) -> Result<Verdict> {
        MultiVector::lie_derivative(x, &self.bivector)?.zero_verdict(zt)
    }

    /// `X_h = {., h}`, so that `X_h^i = sum_j P^{ij} d_j h`.
    pub fn hamiltonian_vf(&self, h: &Expr) -> Result<MultiVector> {
        let comps = self
            .chart()
            .vars()
            .iter()
            .map(|x| self.bracket(x, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiVector::vector(self.chart(), comps)?
            .taint(!self.bivector.is_rational() || h.has_sqrt()))
    }

    pub fn is_casimir(&self, c: &Expr, zt: &ZeroTest) -> Result<Verdict> {
        self.hamiltonian_vf(c)?.zero_verdict(zt)
    }

    /// Verdict that the functions pairwise Poisson-commute.
    pub fn in_involution(&self, hs: &[Expr], zt: &ZeroTest) -> Result<Verdict> {
        let mut brackets = Vec::new();
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                brackets.push(self.bracket(&hs[i], &hs[j])?);
            }
        }
        let rational = self.bivector.is_rational() && !hs.iter().any(Expr::has_sqrt);
        zt.all_zero_in(&brackets, rational)
    }

    /// `d_P(Q) = [P, Q]`. Refused when the Jacobi verdict is NonZero.
    pub fn lichnerowicz(&self, q: &MultiVector) -> Result<MultiVector> {
        self.require_poisson()?;
        self.bivector.schouten(q)
    }

    /// Verdict that `[P1, P2] = 0`.
    pub fn compatible(&self, other: &PoissonTensor, zt: &ZeroTest) -> Result<Verdict> {
        self.bivector.schouten(&other.bivector)?.zero_verdict(zt)
    }

    /// `[P + t Q, P + t Q]`.
    pub fn deformation_defect(&self, q: &MultiVector, t: &Rational) -> Result<MultiVector> {
        q.require_degree(2)?;
        let s = self.bivector.add(&q.scale(&Expr::rational(t.clone())))?;
        s.schouten(&s)
    }
}

/// Convenience wrapper returning the checked tensor.
pub fn check_jacobi(bivector: &MultiVector, zt: &ZeroTest) -> Result<PoissonTensor> {
    PoissonTensor::check(bivector.clone(), zt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn zt() -> ZeroTest {
        ZeroTest::default()
    }

    fn chart() -> Chart {
        Chart::standard(3)
    }

    fn example() -> PoissonTensor {
        let b = MultiVector::from_terms(&chart(), 2, [(vec![1, 2], e("x1"))]).unwrap();
        PoissonTensor::check(b, &zt()).unwrap()
    }

    fn vf(cs: [&str; 3]) -> MultiVector {
        MultiVector::vector(&chart(), cs.iter().map(|s| e(s)).collect()).unwrap()
    }

    #[test]
    fn jacobi_verdicts() {
        assert_eq!(example().jacobi(), &Verdict::ProvedZero);
        let z = PoissonTensor::check(MultiVector::zero(&chart(), 2), &zt()).unwrap();
        assert_eq!(z.jacobi(), &Verdict::ProvedZero);
        let bad = MultiVector::from_terms(&chart(), 2, [(vec![0, 1], e("x2")), (vec![0, 2], e("x1"))])
            .unwrap();
        assert!(PoissonTensor::check(bad.clone(), &zt()).unwrap().jacobi().is_nonzero());
        assert!(matches!(PoissonTensor::verified(bad, &zt()), Err(Error::NotPoisson(_))));
        assert!(PoissonTensor::check(vf(["1", "0", "0"]), &zt()).is_err());
    }

    #[test]
    fn poisson_vector_fields() {
        let p = example();
        assert_eq!(
            p.is_poisson_vf(&vf(["0", "sqrt(x3)", "0"]), &zt()).unwrap(),
            Verdict::ProbablyZero { samples: 32 }
        );
        assert_eq!(p.is_poisson_vf(&vf(["x1", "x2", "0"]), &zt()).unwrap(), Verdict::ProvedZero);
        assert!(p.is_poisson_vf(&vf(["0", "x2", "0"]), &zt()).unwrap().is_nonzero());
        let xh = p.hamiltonian_vf(&e("x2^2*x3 + x1*x3")).unwrap();
        assert!(!p.is_poisson_vf(&xh, &zt()).unwrap().is_nonzero());
    }

    #[test]
    fn hamiltonian_fields_and_casimirs() {
        let p = example();
        assert_eq!(p.hamiltonian_vf(&e("x3")).unwrap(), vf(["0", "x1", "0"]));
        assert!(p.hamiltonian_vf(&e("x1")).unwrap().is_empty());
        assert!(p.hamiltonian_vf(&e("7/2")).unwrap().is_empty());
        assert_eq!(p.is_casimir(&e("x1"), &zt()).unwrap(), Verdict::ProvedZero);
        assert_eq!(p.is_casimir(&e("1"), &zt()).unwrap(), Verdict::ProvedZero);
        assert!(p.is_casimir(&e("x2"), &zt()).unwrap().is_nonzero());
    }

    #[test]
    fn involution() {
        let p = example();
        assert_eq!(p.in_involution(&[e("x2")], &zt()).unwrap(), Verdict::ProvedZero);
        assert_eq!(p.in_involution(&[e("x1"), e("x2")], &zt()).unwrap(), Verdict::ProvedZero);
        assert!(p.in_involution(&[e("x2"), e("x3")], &zt()).unwrap().is_nonzero());
    }

    #[test]
    fn lichnerowicz_sign_on_functions() {
        let p = example();
        let h = e("x2*x3 + x1^2*x2");
        let d = p.lichnerowicz(&MultiVector::scalar(&chart(), h.clone())).unwrap();
        assert_eq!(d, p.hamiltonian_vf(&h).unwrap());
        let c = p.lichnerowicz(&MultiVector::scalar(&chart(), e("x1"))).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn lichnerowicz_on_fields_is_minus_lie_derivative() {
        let p = example();
        let x = vf(["x2", "x3^2", "x1*x2"]);
        let lhs = p.lichnerowicz(&x).unwrap();
        let rhs = MultiVector::lie_derivative(&x, p.bivector()).unwrap().scale(&e("-1"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compatibility_and_defect() {
        let p = example();
        assert_eq!(p.compatible(&p, &zt()).unwrap(), Verdict::ProvedZero);
        let q = MultiVector::from_terms(&chart(), 2, [(vec![0, 1], e("1"))]).unwrap();
        let t = Rational::from_integer(3.into());
        assert!(p.deformation_defect(&q, &t).unwrap().is_empty());
        assert_eq!(
            p.deformation_defect(&q, &Rational::from_integer(0.into())).unwrap(),
            p.bivector().schouten(p.bivector()).unwrap()
        );
    }

    #[test]
    fn defect_is_quadratic_for_cocycles() {
        // [P, Q] = 0 but [Q, Q] != 0: the defect is t^2 [Q, Q].
        let z = MultiVector::zero(&chart(), 2);
        let p = PoissonTensor::check(z, &zt()).unwrap();
        let q = MultiVector::from_terms(&chart(), 2, [(vec![0, 1], e("x2")), (vec![0, 2], e("x1"))])
            .unwrap();
        let t = Rational::new(2.into(), 3.into());
        let defect = p.deformation_defect(&q, &t).unwrap();
        let expected = q.schouten(&q).unwrap().scale(&e("4/9"));
        assert!(!defect.is_empty());
        assert_eq!(defect, expected);
    }
}
