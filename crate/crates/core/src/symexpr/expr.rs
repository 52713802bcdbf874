use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Symbolic scalar expression over chart coordinates.
///
/// Values are immutable and cheap to clone. Every constructor normalizes:
/// sums and products are flattened, rational constants folded, like terms
/// and like bases merged, and powers never carry exponent 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Rational(Rational),
    Var(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Expr, i64),
    Sqrt(Expr),
}

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Orders coordinate names by alphabetic prefix, then by numeric suffix, so
/// that `x2 < x10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = s.split_at(cut);
        (head, digits.parse().ok())
    }
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    ha.cmp(hb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
}

impl Expr {
    fn wrap(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::wrap(Node::Rational(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(rat(n, d))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::wrap(Node::Var(name.into()))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// True only for the literal constant 0.
    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    /// Splits off the rational coefficient: `3*x*y` becomes `(3, x*y)`.
    pub(crate) fn split_coeff(&self) -> (Rational, Expr) {
        match self.node() {
            Node::Rational(r) => (r.clone(), Expr::one()),
            Node::Product(fs) => match fs[0].node() {
                Node::Rational(r) => {
                    let rest = if fs.len() == 2 {
                        fs[1].clone()
                    } else {
                        Expr::wrap(Node::Product(fs[1..].to_vec()))
                    };
                    (r.clone(), rest)
                }
                _ => (Rational::one(), self.clone()),
            },
            _ => (Rational::one(), self.clone()),
        }
    }

    fn scaled(c: Rational, rest: Expr) -> Expr {
        if c.is_one() {
            return rest;
        }
        if rest.is_one() {
            return Expr::rational(c);
        }
        let mut fs = vec![Expr::rational(c)];
        match rest.node() {
            Node::Product(inner) => fs.extend(inner.iter().cloned()),
            _ => fs.push(rest),
        }
        Expr::wrap(Node::Product(fs))
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let mut constant = Rational::zero();
        let mut keys: Vec<Expr> = Vec::new();
        let mut coeffs: Vec<Rational> = Vec::new();
        let mut index: HashMap<Expr, usize> = HashMap::new();
        let mut push = |t: &Expr| match t.node() {
            Node::Rational(r) => constant += r,
            _ => {
                let (c, rest) = t.split_coeff();
                match index.get(&rest) {
                    Some(&i) => coeffs[i] += c,
                    None => {
                        index.insert(rest.clone(), keys.len());
                        keys.push(rest);
                        coeffs.push(c);
                    }
                }
            }
        };
        for t in terms {
            match t.node() {
                Node::Sum(ts) => ts.iter().for_each(&mut push),
                _ => push(&t),
            }
        }
        let mut out: Vec<Expr> = keys
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Expr::scaled(c, k))
            .collect();
        if !constant.is_zero() {
            out.push(Expr::rational(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::wrap(Node::Sum(out)),
        }
    }

    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let mut coeff = Rational::one();
        let mut bases: Vec<(Expr, i64)> = Vec::new();
        let mut absorb = |g: &Expr, coeff: &mut Rational| {
            let (base, n) = match g.node() {
                Node::Rational(r) => {
                    *coeff *= r;
                    return;
                }
                Node::Power(b, n) => (b.clone(), *n),
                _ => (g.clone(), 1),
            };
            match bases.iter_mut().find(|(b, _)| *b == base) {
                Some(slot) => slot.1 += n,
                None => bases.push((base, n)),
            }
        };
        for f in factors {
            match f.node() {
                Node::Product(fs) => fs.iter().for_each(|g| absorb(g, &mut coeff)),
                _ => absorb(&f, &mut coeff),
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let mut keyed: Vec<(Expr, i64)> = bases.into_iter().filter(|(_, n)| *n != 0).collect();
        keyed.sort_by(|(a, m), (b, n)| {
            (*m < 0)
                .cmp(&(*n < 0))
                .then_with(|| a.structural_cmp(b))
                .then(m.cmp(n))
        });
        let mut fs: Vec<Expr> = Vec::with_capacity(keyed.len() + 1);
        for (b, n) in keyed {
            let p = b.pow(n);
            match p.node() {
                Node::Rational(r) => coeff *= r,
                _ => fs.push(p),
            }
        }
        if fs.is_empty() {
            return Expr::rational(coeff);
        }
        if coeff.is_one() && fs.len() == 1 {
            return fs.pop().unwrap();
        }
        if !coeff.is_one() {
            fs.insert(0, Expr::rational(coeff));
        }
        Expr::wrap(Node::Product(fs))
    }

    pub fn pow(&self, n: i64) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return self.clone();
        }
        match self.node() {
            Node::Rational(r) => {
                if r.is_zero() {
                    if n > 0 {
                        Expr::zero()
                    } else {
                        Expr::wrap(Node::Power(self.clone(), n))
                    }
                } else {
                    let e = i32::try_from(n).expect("exponent out of range");
                    Expr::rational(Pow::pow(r, e))
                }
            }
            Node::Power(b, m) => b.pow(m * n),
            Node::Product(fs) => Expr::product(fs.iter().map(|f| f.pow(n))),
            _ => Expr::wrap(Node::Power(self.clone(), n)),
        }
    }

    pub fn sqrt(&self) -> Expr {
        if let Node::Rational(r) = self.node() {
            if !r.is_negative() {
                let (p, q) = (r.numer(), r.denom());
                let (sp, sq) = (p.sqrt(), q.sqrt());
                if &(&sp * &sp) == p && &(&sq * &sq) == q {
                    return Expr::rational(Rational::new(sp, sq));
                }
            }
        }
        Expr::wrap(Node::Sqrt(self.clone()))
    }

    pub fn has_sqrt(&self) -> bool {
        match self.node() {
            Node::Rational(_) | Node::Var(_) => false,
            Node::Sqrt(_) => true,
            Node::Sum(xs) | Node::Product(xs) => xs.iter().any(Expr::has_sqrt),
            Node::Power(b, _) => b.has_sqrt(),
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self.node() {
            Node::Rational(_) => false,
            Node::Var(n) => n == v,
            Node::Sum(xs) | Node::Product(xs) => xs.iter().any(|x| x.contains_var(v)),
            Node::Power(b, _) | Node::Sqrt(b) => b.contains_var(v),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Rational(_) => {}
            Node::Var(n) => {
                out.insert(n.clone());
            }
            Node::Sum(xs) | Node::Product(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            Node::Power(b, _) | Node::Sqrt(b) => b.collect_vars(out),
        }
    }

    /// Partial derivative with respect to the coordinate `v`.
    pub fn diff(&self, v: &str) -> Expr {
        if !self.contains_var(v) {
            return Expr::zero();
        }
        match self.node() {
            Node::Rational(_) => Expr::zero(),
            Node::Var(n) => {
                if n == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Sum(ts) => Expr::sum(ts.iter().map(|t| t.diff(v))),
            Node::Product(fs) => Expr::sum(
                (0..fs.len())
                    .filter(|&i| fs[i].contains_var(v))
                    .map(|i| {
                        Expr::product(
                            fs.iter()
                                .enumerate()
                                .map(|(j, f)| if j == i { f.diff(v) } else { f.clone() }),
                        )
                    }),
            ),
            Node::Power(b, n) => Expr::product([Expr::int(*n), b.pow(n - 1), b.diff(v)]),
            Node::Sqrt(a) => Expr::product([Expr::frac(1, 2), a.diff(v), self.pow(-1)]),
        }
    }

    /// Floating-point evaluation at a point.
    pub fn eval(&self, point: &HashMap<String, f64>) -> Result<f64> {
        let mut scale = 0.0;
        self.eval_tracked(point, &mut scale)
    }

    /// Evaluates and records the largest magnitude seen at any subterm.
    pub(crate) fn eval_tracked(&self, point: &HashMap<String, f64>, max_abs: &mut f64) -> Result<f64> {
        let v = match self.node() {
            Node::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Node::Var(n) => *point
                .get(n)
                .ok_or_else(|| Error::MissingAssignment(n.clone()))?,
            Node::Sum(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.eval_tracked(point, max_abs)?;
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval_tracked(point, max_abs)?;
                }
                acc
            }
            Node::Power(b, n) => {
                let base = b.eval_tracked(point, max_abs)?;
                if base == 0.0 && *n < 0 {
                    return Err(Error::DivisionByZero);
                }
                base.powi(i32::try_from(*n).unwrap_or(i32::MAX))
            }
            Node::Sqrt(a) => {
                let arg = a.eval_tracked(point, max_abs)?;
                if arg < 0.0 {
                    return Err(Error::NegativeSqrt(arg));
                }
                arg.sqrt()
            }
        };
        *max_abs = max_abs.max(v.abs());
        Ok(v)
    }

    /// Replaces variables by expressions, renormalizing on the way up.
    pub fn subst(&self, map: &HashMap<String, Expr>) -> Expr {
        match self.node() {
            Node::Rational(_) => self.clone(),
            Node::Var(n) => map.get(n).cloned().unwrap_or_else(|| self.clone()),
            Node::Sum(ts) => Expr::sum(ts.iter().map(|t| t.subst(map))),
            Node::Product(fs) => Expr::product(fs.iter().map(|f| f.subst(map))),
            Node::Power(b, n) => b.subst(map).pow(*n),
            Node::Sqrt(a) => a.subst(map).sqrt(),
        }
    }

    /// Rewrites every sqrt argument with `f`.
    pub(crate) fn map_sqrt_args(&self, f: &dyn Fn(&Expr) -> Expr) -> Expr {
        match self.node() {
            Node::Rational(_) | Node::Var(_) => self.clone(),
            Node::Sum(ts) => Expr::sum(ts.iter().map(|t| t.map_sqrt_args(f))),
            Node::Product(fs) => Expr::product(fs.iter().map(|x| x.map_sqrt_args(f))),
            Node::Power(b, n) => b.map_sqrt_args(f).pow(*n),
            Node::Sqrt(a) => f(a).sqrt(),
        }
    }

    fn rank(&self) -> u8 {
        match self.node() {
            Node::Rational(_) => 0,
            Node::Var(_) => 1,
            Node::Sqrt(_) => 2,
            Node::Power(..) => 3,
            Node::Product(_) => 4,
            Node::Sum(_) => 5,
        }
    }

    /// A total order on trees, used to sort product factors deterministically.
    pub fn structural_cmp(&self, other: &Expr) -> Ordering {
        match (self.node(), other.node()) {
            (Node::Rational(a), Node::Rational(b)) => a.cmp(b),
            (Node::Var(a), Node::Var(b)) => natural_cmp(a, b),
            (Node::Sqrt(a), Node::Sqrt(b)) => a.structural_cmp(b),
            (Node::Power(a, m), Node::Power(b, n)) => a.structural_cmp(b).then(m.cmp(n)),
            (Node::Product(a), Node::Product(b)) | (Node::Sum(a), Node::Sum(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let o = x.structural_cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                a.len().cmp(&b.len())
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Expr {
        Expr::rational(r)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::int(-1), self])
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::int(-1), self.clone()])
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                let ($a, $b) = (self.clone(), rhs.clone());
                $body
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                let ($a, $b) = (self, rhs.clone());
                $body
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum([a, b]));
binop!(Sub, sub, |a, b| Expr::sum([a, -b]));
binop!(Mul, mul, |a, b| Expr::product([a, b]));
binop!(Div, div, |a, b| Expr::product([a, b.pow(-1)]));

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Expr {
        Expr::var(format!("x{i}"))
    }

    #[test]
    fn constructors_flatten_and_fold() {
        let e = Expr::sum([x(1), Expr::sum([x(2), Expr::int(3)]), Expr::int(-3)]);
        assert_eq!(e, Expr::sum([x(1), x(2)]));
        assert!(matches!(e.node(), Node::Sum(ts) if ts.len() == 2));
        assert!((&x(1) - &x(1)).is_zero());
        assert!((Expr::int(0) * x(1)).is_zero());
        assert_eq!(&x(1) * &x(1), x(1).pow(2));
        assert_eq!(x(1).pow(2) / x(1), x(1));
    }

    #[test]
    fn power_never_zero_or_one() {
        assert_eq!(x(1).pow(0), Expr::one());
        assert_eq!(x(1).pow(1), x(1));
        assert_eq!(x(1).pow(2).pow(-1), x(1).pow(-2));
        assert_eq!((x(1) * x(2)).pow(-1), Expr::product([x(1).pow(-1), x(2).pow(-1)]));
    }

    #[test]
    fn sqrt_of_squares_folds_only_for_constants() {
        assert_eq!(Expr::frac(9, 4).sqrt(), Expr::frac(3, 2));
        assert!(matches!(Expr::int(2).sqrt().node(), Node::Sqrt(_)));
        let s = x(3).sqrt();
        // sqrt(a)^2 is kept as a power; only the display simplifier reduces it.
        assert!(matches!((&s * &s).node(), Node::Power(_, 2)));
    }

    #[test]
    fn derivative_rules() {
        assert_eq!(x(1).diff("x1"), Expr::one());
        assert!(x(1).diff("x2").is_zero());
        let d = x(3).sqrt().diff("x3");
        assert_eq!(d, Expr::product([Expr::frac(1, 2), x(3).sqrt().pow(-1)]));
        let q = (x(2) / x(1)).diff("x1");
        assert_eq!(q, Expr::product([Expr::int(-1), x(2), x(1).pow(-2)]));
    }

    #[test]
    fn eval_and_domain_errors() {
        let pt: HashMap<String, f64> =
            [("x1".to_string(), 2.0), ("x2".to_string(), 3.0), ("x3".to_string(), 4.0)].into();
        assert_eq!(x(1).eval(&pt).unwrap(), 2.0);
        assert_eq!((x(2) / x(1)).eval(&pt).unwrap(), 1.5);
        assert_eq!(x(3).sqrt().eval(&pt).unwrap(), 2.0);
        assert!(matches!(x(4).eval(&pt), Err(Error::MissingAssignment(_))));
        assert!(matches!((-x(1)).sqrt().eval(&pt), Err(Error::NegativeSqrt(_))));
        assert!(matches!(
            (x(1) - x(3) / Expr::int(2)).pow(-1).eval(&pt),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("x2", "x10"), Ordering::Less);
        assert_eq!(natural_cmp("y1", "x3"), Ordering::Greater);
    }
}
