//! Sparse multivariate polynomials with rational coefficients, used as the
//! backbone of the canonical form.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::expr::Rational;

/// Exponent vector. Ordered by total degree, then lexicographically with
/// index 0 the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mono(pub(crate) Vec<u32>);

impl Mono {
    fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Mono) -> Option<Mono> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Mono)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub(crate) fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn constant(nvars: usize, c: Rational) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(nvars), c);
        }
        p
    }

    pub(crate) fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rational::one())
    }

    pub(crate) fn var(nvars: usize, i: usize) -> Poly {
        let mut m = Mono::one(nvars);
        m.0[i] = 1;
        Poly::monomial(nvars, m, Rational::one())
    }

    fn monomial(nvars: usize, m: Mono, c: Rational) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub(crate) fn nvars(&self) -> usize {
        self.nvars
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub(crate) fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    /// Leading term under the monomial order.
    pub(crate) fn lead(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub(crate) fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    fn mul_term(&self, m: &Mono, k: &Rational) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub(crate) fn pow(&self, mut n: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub(crate) fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.lead()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = r.lead() {
            let t = m.div(&dm)?;
            let k = c / &dc;
            r = r.sub(&d.mul_term(&t, &k));
            q.add_term(t, k);
        }
        Some(q)
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^d`, as a polynomial free of `x_v`.
    fn coeff_in(&self, v: usize, d: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == d {
                let mut m = m.clone();
                m.0[v] = 0;
                out.terms.insert(m, c.clone());
            }
        }
        out
    }

    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        (0..=self.degree_in(v))
            .map(|d| self.coeff_in(v, d))
            .filter(|c| !c.is_zero())
            .collect()
    }

    fn var_pow(&self, v: usize, e: u32) -> Mono {
        let mut m = Mono::one(self.nvars);
        m.0[v] = e;
        m
    }

    /// Pseudo-remainder of `self` by `d` viewed as polynomials in `x_v`.
    fn prem(&self, d: &Poly, v: usize) -> Poly {
        let dd = d.degree_in(v);
        let ld = d.coeff_in(v, dd);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let shift = d.mul_term(&r.var_pow(v, dr - dd), &Rational::one());
            r = r.mul(&ld).sub(&lr.mul(&shift));
        }
        r
    }

    fn content_in(&self, v: usize) -> Poly {
        self.coeffs_in(v)
            .iter()
            .fold(Poly::zero(self.nvars), |g, c| g.gcd(c))
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Scales so that the leading coefficient is 1.
    pub(crate) fn monic(&self) -> Poly {
        match self.lead() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Greatest common divisor, normalized to be monic.
    pub(crate) fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let n = self.nvars;
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return Poly::one(n);
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let mut e = self.terms.keys().next().unwrap().clone();
            for m in self.terms.keys().chain(other.terms.keys()) {
                for (a, b) in e.0.iter_mut().zip(&m.0) {
                    *a = (*a).min(*b);
                }
            }
            return Poly::monomial(n, e, Rational::one());
        }
        let v = (0..n)
            .find(|&v| self.degree_in(v) > 0 && other.degree_in(v) > 0)
            .or_else(|| (0..n).find(|&v| self.degree_in(v) > 0 || other.degree_in(v) > 0))
            .expect("nonconstant polynomial has a variable");
        if self.degree_in(v) == 0 {
            return self.gcd(&other.content_in(v));
        }
        if other.degree_in(v) == 0 {
            return self.content_in(v).gcd(other);
        }
        let (ca, cb) = (self.content_in(v), other.content_in(v));
        let g = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        let (mut p, mut q) = if pa.degree_in(v) >= pb.degree_in(v) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        while !q.is_zero() {
            if q.degree_in(v) == 0 {
                p = Poly::one(n);
                break;
            }
            let r = p.prem(&q, v);
            p = q;
            q = if r.is_zero() { r } else { r.primitive_in(v) };
        }
        p.primitive_in(v).mul(&g).monic()
    }

    /// Splits `self = k * p` where `p` has coprime integer coefficients and a
    /// positive leading coefficient.
    pub(crate) fn integer_primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            let num = c.numer() * (&lcm / c.denom());
            gcd = gcd.gcd(&num);
        }
        let mut k = Rational::new(gcd, lcm);
        if self.lead().unwrap().1.is_negative() {
            k = -k;
        }
        (k.clone(), self.scale(&k.recip()))
    }

    /// Exact value at a rational point.
    pub(crate) fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(&m.0) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::expr::rat;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(3, rat(n, 1))
    }

    #[test]
    fn order_is_graded_then_lex() {
        let a = Mono(vec![1, 0, 0]);
        let b = Mono(vec![0, 1, 0]);
        let ab = Mono(vec![0, 2, 0]);
        assert!(a > b);
        assert!(ab > a);
    }

    #[test]
    fn exact_division() {
        let a = x(0).pow(2).sub(&x(1).pow(2));
        let d = x(0).sub(&x(1));
        assert_eq!(a.div_exact(&d).unwrap(), x(0).add(&x(1)));
        assert!(a.div_exact(&x(2)).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let common = x(0).add(&x(1).mul(&x(2))).add(&c(1));
        let a = common.mul(&x(0).sub(&c(3))).mul(&x(2));
        let b = common.mul(&x(1).add(&x(2))).mul(&x(2).pow(2));
        let g = a.gcd(&b);
        assert_eq!(g, common.mul(&x(2)).monic());
        assert!(x(0).gcd(&x(1)).is_one());
        assert!(a.gcd(&c(5)).is_one());
    }

    #[test]
    fn integer_primitive_normalizes_sign_and_content() {
        let p = x(0).scale(&rat(-2, 3)).add(&c(4));
        let (k, q) = p.integer_primitive();
        assert_eq!(k, rat(-2, 3));
        assert_eq!(q, x(0).sub(&c(6)));
    }
}
