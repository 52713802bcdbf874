use std::fmt;

use num_traits::{One, Signed};

use super::expr::{Expr, Node, Rational};

/// Printer for the expression grammar. `spaced` puts blanks around binary
/// `+`/`-`; the compact form is used inside matrices.
struct Printer {
    spaced: bool,
}

impl Printer {
    fn expr(&self, e: &Expr, out: &mut String) {
        match e.node() {
            Node::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    let (c, factors) = decompose(t);
                    let neg = c.is_negative();
                    if i == 0 {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push_str(match (neg, self.spaced) {
                            (true, true) => " - ",
                            (false, true) => " + ",
                            (true, false) => "-",
                            (false, false) => "+",
                        });
                    }
                    self.product(&c.abs(), &factors, i == 0 && neg, out);
                }
            }
            _ => self.term(e, out),
        }
    }

    fn term(&self, e: &Expr, out: &mut String) {
        if e.is_zero() {
            out.push('0');
            return;
        }
        let (c, factors) = decompose(e);
        if c.is_negative() {
            out.push('-');
            self.product(&c.abs(), &factors, true, out);
        } else {
            self.product(&c, &factors, false, out);
        }
    }

    /// Prints `coeff * factors` (coeff > 0) as `N` or `N/D`. After a unary
    /// minus a leading power must be parenthesized, since `-a^2` reads as
    /// `(-a)^2`.
    fn product(&self, coeff: &Rational, factors: &[Expr], guard: bool, out: &mut String) {
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        if !coeff.numer().is_one() {
            num.push(coeff.numer().to_string());
        }
        if !coeff.denom().is_one() {
            den.push(coeff.denom().to_string());
        }
        for f in factors {
            match f.node() {
                Node::Power(b, n) if *n < 0 => den.push(self.factor(&b.pow(-n))),
                _ => {
                    let s = self.factor(f);
                    if guard && num.is_empty() && matches!(f.node(), Node::Power(..)) {
                        num.push(format!("({s})"));
                    } else {
                        num.push(s);
                    }
                }
            }
        }
        if num.is_empty() {
            out.push('1');
        } else {
            out.push_str(&num.join("*"));
        }
        match den.len() {
            0 => {}
            1 => {
                out.push('/');
                out.push_str(&den[0]);
            }
            _ => {
                out.push_str("/(");
                out.push_str(&den.join("*"));
                out.push(')');
            }
        }
    }

    fn factor(&self, e: &Expr) -> String {
        match e.node() {
            Node::Var(n) => n.clone(),
            Node::Sqrt(a) => {
                let mut s = String::from("sqrt(");
                self.expr(a, &mut s);
                s.push(')');
                s
            }
            Node::Power(b, n) => format!("{}^{}", self.base(b), n),
            Node::Rational(r) if !r.is_negative() && r.denom().is_one() => r.to_string(),
            _ => {
                let mut s = String::from("(");
                self.expr(e, &mut s);
                s.push(')');
                s
            }
        }
    }

    fn base(&self, b: &Expr) -> String {
        match b.node() {
            Node::Var(_) | Node::Sqrt(_) => self.factor(b),
            Node::Rational(r) if !r.is_negative() && r.denom().is_one() => r.to_string(),
            _ => {
                let mut s = String::from("(");
                self.expr(b, &mut s);
                s.push(')');
                s
            }
        }
    }
}

fn decompose(e: &Expr) -> (Rational, Vec<Expr>) {
    match e.node() {
        Node::Rational(r) => (r.clone(), Vec::new()),
        Node::Product(fs) => match fs[0].node() {
            Node::Rational(r) => (r.clone(), fs[1..].to_vec()),
            _ => (Rational::one(), fs.clone()),
        },
        _ => (Rational::one(), vec![e.clone()]),
    }
}

impl Expr {
    /// Grammar form without blanks, e.g. `y1+x2`.
    pub fn compact(&self) -> String {
        let mut s = String::new();
        Printer { spaced: false }.expr(self, &mut s);
        s
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        Printer { spaced: true }.expr(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}
