//! Canonical form for rational functions: an expanded numerator over an
//! expanded denominator, coprime, with the denominator integer-primitive and
//! positive-leading.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;

use super::expr::{natural_cmp, Expr, Node, Rational};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Atom {
    Var(String),
    /// A square root, opaque to the polynomial arithmetic.
    Root(Expr),
}

impl Atom {
    fn to_expr(&self) -> Expr {
        match self {
            Atom::Var(n) => Expr::var(n.clone()),
            Atom::Root(a) => a.sqrt(),
        }
    }
}

/// Variable significance: letter prefix descending, then numeric suffix
/// ascending, so that `y1 > y2 > x1 > x2`. Roots come last.
fn atom_order(a: &Atom, b: &Atom) -> Ordering {
    fn split(s: &str) -> (&str, &str) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        s.split_at(cut)
    }
    match (a, b) {
        (Atom::Var(x), Atom::Var(y)) => {
            let (hx, _) = split(x);
            let (hy, _) = split(y);
            hy.cmp(hx).then_with(|| natural_cmp(x, y))
        }
        (Atom::Var(_), Atom::Root(_)) => Ordering::Less,
        (Atom::Root(_), Atom::Var(_)) => Ordering::Greater,
        (Atom::Root(x), Atom::Root(y)) => x.structural_cmp(y),
    }
}

/// A rational function in normal form.
#[derive(Clone, Debug)]
pub(crate) struct RatFun {
    atoms: Vec<Atom>,
    num: Poly,
    den: Poly,
}

struct Builder {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    roots: bool,
}

impl Builder {
    fn collect(&mut self, e: &Expr) -> Result<()> {
        match e.node() {
            Node::Rational(_) => {}
            Node::Var(n) => self.atom(Atom::Var(n.clone())),
            Node::Sum(xs) | Node::Product(xs) => {
                for x in xs {
                    self.collect(x)?;
                }
            }
            Node::Power(b, _) => self.collect(b)?,
            Node::Sqrt(a) => {
                if !self.roots {
                    return Err(Error::Fragment);
                }
                self.atom(Atom::Root(a.clone()));
            }
        }
        Ok(())
    }

    fn atom(&mut self, a: Atom) {
        if !self.index.contains_key(&a) {
            self.index.insert(a.clone(), self.atoms.len());
            self.atoms.push(a);
        }
    }

    fn finish_order(&mut self) {
        self.atoms.sort_by(atom_order);
        self.index = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
    }

    fn convert(&self, e: &Expr) -> Result<(Poly, Poly)> {
        let n = self.atoms.len();
        Ok(match e.node() {
            Node::Rational(r) => (Poly::constant(n, r.clone()), Poly::one(n)),
            Node::Var(v) => (Poly::var(n, self.index[&Atom::Var(v.clone())]), Poly::one(n)),
            Node::Sqrt(a) => (Poly::var(n, self.index[&Atom::Root(a.clone())]), Poly::one(n)),
            Node::Sum(ts) => {
                let mut acc = (Poly::zero(n), Poly::one(n));
                for t in ts {
                    let (tn, td) = self.convert(t)?;
                    acc = if acc.1 == td {
                        (acc.0.add(&tn), td)
                    } else {
                        reduce(acc.0.mul(&td).add(&tn.mul(&acc.1)), acc.1.mul(&td))
                    };
                }
                reduce(acc.0, acc.1)
            }
            Node::Product(fs) => {
                let mut acc = (Poly::one(n), Poly::one(n));
                for f in fs {
                    let (fnum, fden) = self.convert(f)?;
                    acc = reduce(acc.0.mul(&fnum), acc.1.mul(&fden));
                }
                acc
            }
            Node::Power(b, k) => {
                let (bn, bd) = self.convert(b)?;
                let e = u32::try_from(k.unsigned_abs()).expect("exponent out of range");
                if *k > 0 {
                    (bn.pow(e), bd.pow(e))
                } else {
                    if bn.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    reduce(bd.pow(e), bn.pow(e))
                }
            }
        })
    }
}

fn reduce(num: Poly, den: Poly) -> (Poly, Poly) {
    if num.is_zero() {
        return (num, Poly::one(den.nvars()));
    }
    if let Some(c) = den.as_constant() {
        return (num.scale(&c.recip()), Poly::one(den.nvars()));
    }
    let g = num.gcd(&den);
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
    };
    let (k, den) = den.integer_primitive();
    (num.scale(&k.recip()), den)
}

fn build(e: &Expr, roots: bool) -> Result<RatFun> {
    let mut b = Builder {
        atoms: Vec::new(),
        index: HashMap::new(),
        roots,
    };
    b.collect(e)?;
    b.finish_order();
    let (num, den) = b.convert(e)?;
    Ok(RatFun {
        atoms: b.atoms,
        num,
        den,
    })
}

impl RatFun {
    pub(crate) fn of(e: &Expr) -> Result<RatFun> {
        build(e, false)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact value, or `None` where the denominator vanishes.
    pub(crate) fn eval_exact(&self, point: &HashMap<String, Rational>) -> Option<Rational> {
        let coords: Vec<Rational> = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Var(n) => point.get(n).cloned(),
                Atom::Root(_) => None,
            })
            .collect::<Option<_>>()?;
        let d = self.den.eval(&coords);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(&coords) / d)
    }

    fn poly_expr(&self, p: &Poly) -> Expr {
        Expr::sum(p.terms().rev().map(|(m, c)| {
            let mut fs = vec![Expr::rational(c.clone())];
            for (a, e) in self.atoms.iter().zip(&m.0) {
                if *e > 0 {
                    fs.push(a.to_expr().pow(i64::from(*e)));
                }
            }
            Expr::product(fs)
        }))
    }

    pub(crate) fn to_expr(&self) -> Expr {
        if self.num.is_zero() {
            return Expr::zero();
        }
        let num = self.poly_expr(&self.num);
        if self.den.is_one() {
            return num;
        }
        let den = self.poly_expr(&self.den);
        match den.node() {
            Node::Sum(_) => Expr::product([num, den.pow(-1)]),
            _ => num / den,
        }
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &RatFun) -> bool {
        self.to_expr() == other.to_expr()
    }
}

/// Canonical form of a sqrt-free expression.
pub fn canonical(e: &Expr) -> Result<Expr> {
    Ok(RatFun::of(e)?.to_expr())
}

/// Rewrites `sqrt(a)^n` as `a^(n/2) * sqrt(a)^(n%2)`.
fn reduce_root_powers(e: &Expr) -> Expr {
    match e.node() {
        Node::Rational(_) | Node::Var(_) => e.clone(),
        Node::Sum(ts) => Expr::sum(ts.iter().map(reduce_root_powers)),
        Node::Product(fs) => Expr::product(fs.iter().map(reduce_root_powers)),
        Node::Power(b, n) => match b.node() {
            Node::Sqrt(a) => {
                let a = reduce_root_powers(a);
                Expr::product([a.pow(n / 2), a.sqrt().pow(n % 2)])
            }
            _ => reduce_root_powers(b).pow(*n),
        },
        Node::Sqrt(a) => reduce_root_powers(a).sqrt(),
    }
}

/// Display simplifier. Sqrt-free input gets its canonical form; square roots
/// are treated as extra variables whose squares are folded back.
pub fn simplify(e: &Expr) -> Result<Expr> {
    if !e.has_sqrt() {
        return canonical(e);
    }
    let mut cur = e.clone();
    for _ in 0..16 {
        let inner = cur.map_sqrt_args(&|a| simplify(a).unwrap_or_else(|_| a.clone()));
        let next = build(&reduce_root_powers(&inner), true)?.to_expr();
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(cur)
}
