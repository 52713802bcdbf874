//! Coordinate charts and tangent-chart doubling.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symexpr::Expr;

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    names: Vec<String>,
    base: Option<Chart>,
}

/// An ordered list of coordinate names. A tangent chart holds the base names
/// followed by their fiber partners, and remembers its base.
#[derive(Clone, PartialEq, Eq)]
pub struct Chart(Arc<Inner>);

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Fiber partner name: `x3 -> y3`, any other `q -> yq`.
pub fn fiber_name(base: &str) -> String {
    match base.strip_prefix('x') {
        Some(rest) if !rest.is_empty() => format!("y{rest}"),
        _ => format!("y{base}"),
    }
}

impl Chart {
    pub fn new<I, S>(names: I) -> Result<Chart>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyChart);
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !valid_identifier(n) || n == "sqrt" {
                return Err(Error::InvalidName(n.clone()));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        Ok(Chart(Arc::new(Inner { names, base: None })))
    }

    /// Standard chart `x1, ..., xn`.
    pub fn standard(n: usize) -> Chart {
        Chart::new((1..=n).map(|i| format!("x{i}"))).expect("standard names are valid")
    }

    /// The doubled chart `(x, y)` on the tangent bundle.
    pub fn tangent(&self) -> Result<Chart> {
        if self.is_tangent() {
            return Err(Error::ChartKind { expected: "base" });
        }
        let mut names = self.0.names.clone();
        let mut seen: HashSet<String> = names.iter().cloned().collect();
        for b in &self.0.names {
            let y = fiber_name(b);
            if !seen.insert(y.clone()) {
                return Err(Error::NameCollision {
                    base: b.clone(),
                    fiber: y,
                });
            }
            names.push(y);
        }
        Ok(Chart(Arc::new(Inner {
            names,
            base: Some(self.clone()),
        })))
    }

    pub fn dim(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn var(&self, i: usize) -> Expr {
        Expr::var(self.name(i))
    }

    pub fn vars(&self) -> Vec<Expr> {
        (0..self.dim()).map(|i| self.var(i)).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    pub fn is_tangent(&self) -> bool {
        self.0.base.is_some()
    }

    /// The base chart of a tangent chart.
    pub fn base(&self) -> Option<&Chart> {
        self.0.base.as_ref()
    }

    /// Swaps an index between the base block and the fiber block.
    pub fn partner(&self, i: usize) -> Result<usize> {
        let n = self
            .base()
            .ok_or(Error::ChartKind { expected: "tangent" })?
            .dim();
        if i >= 2 * n {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: 2 * n,
            });
        }
        Ok(if i < n { i + n } else { i - n })
    }

    /// Checks that every variable of `e` is a coordinate of this chart.
    pub fn check_expr(&self, e: &Expr) -> Result<()> {
        for v in e.free_vars() {
            self.require(&v)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({})", self.0.names.join(", "))
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_charts() {
        let c = Chart::new(["x1", "x2", "x3"]).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(!c.is_tangent());
        assert_eq!(Chart::new(["q"]).unwrap().dim(), 1);
        assert!(matches!(Chart::new(["x1", "x1"]), Err(Error::DuplicateName(_))));
        assert!(matches!(Chart::new(Vec::<String>::new()), Err(Error::EmptyChart)));
        assert!(matches!(Chart::new(["1x"]), Err(Error::InvalidName(_))));
    }

    #[test]
    fn tangent_doubling() {
        let t = Chart::standard(3).tangent().unwrap();
        assert_eq!(t.names(), ["x1", "x2", "x3", "y1", "y2", "y3"]);
        assert_eq!(t.base().unwrap(), &Chart::standard(3));
        let q = Chart::new(["q"]).unwrap().tangent().unwrap();
        assert_eq!(q.names(), ["q", "yq"]);
        assert!(matches!(
            Chart::new(["x1", "y1"]).unwrap().tangent(),
            Err(Error::NameCollision { .. })
        ));
        assert!(matches!(t.tangent(), Err(Error::ChartKind { .. })));
    }

    #[test]
    fn partner_is_an_involution() {
        let t = Chart::standard(4).tangent().unwrap();
        for i in 0..8 {
            let j = t.partner(i).unwrap();
            assert_ne!((i < 4), (j < 4));
            assert_eq!(t.partner(j).unwrap(), i);
        }
        assert!(Chart::standard(2).partner(0).is_err());
    }
}
