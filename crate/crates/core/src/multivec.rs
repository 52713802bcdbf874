//! Antisymmetric multivector fields stored on strictly increasing index
//! tuples, with the wedge product and the Schouten bracket.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::symexpr::{canonical, simplify, Expr, Verdict, ZeroTest};

/// A degree-k multivector field on a chart. Degree 0 is a scalar stored under
/// the empty tuple.
#[derive(Clone, Debug)]
pub struct MultiVector {
    chart: Chart,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
    /// False once any data this field was derived from contained a square
    /// root; zero tests on such fields use the randomized tier.
    rational: bool,
}

impl PartialEq for MultiVector {
    fn eq(&self, other: &MultiVector) -> bool {
        self.chart == other.chart && self.degree == other.degree && self.comps == other.comps
    }
}

/// A decomposable term `coef * d_{i1} ^ ... ^ d_{ik}`.
type Term = (Expr, Vec<usize>);

/// Sorts an index tuple, returning the permutation sign, or `None` if an
/// index repeats.
pub(crate) fn sort_indices(mut idx: Vec<usize>) -> Option<(bool, Vec<usize>)> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((odd, idx))
    }
}

/// Coefficient normal form: canonical on the rational fragment, constructor
/// normalized otherwise.
pub(crate) fn tidy(e: &Expr) -> Expr {
    if e.has_sqrt() {
        e.clone()
    } else {
        canonical(e).unwrap_or_else(|_| e.clone())
    }
}

fn negate(ts: Vec<Term>) -> Vec<Term> {
    ts.into_iter().map(|(c, i)| (-c, i)).collect()
}

fn wedge_terms(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for (ca, ia) in a {
        for (cb, ib) in b {
            let joined: Vec<usize> = ia.iter().chain(ib).copied().collect();
            if let Some((odd, idx)) = sort_indices(joined) {
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                out.push((if odd { -c } else { c }, idx));
            }
        }
    }
    out
}

/// Splits `g d_{q0} ^ d_{q1} ^ ...` into `U = g d_{q0}` and `R = d_{q1} ^ ...`.
fn split(q: &Term) -> (Term, Term) {
    ((q.0.clone(), vec![q.1[0]]), (Expr::one(), q.1[1..].to_vec()))
}

struct Schouten<'a> {
    names: &'a [String],
}

impl Schouten<'_> {
    fn d(&self, e: &Expr, i: usize) -> Expr {
        e.diff(&self.names[i])
    }

    /// Bracket of two decomposable terms, derived from graded antisymmetry,
    /// the graded Leibniz rule, `[X,Y]` = commutator, `[X,f] = X(f)` and
    /// `[f,g] = 0`.
    fn terms(&self, p: &Term, q: &Term) -> Vec<Term> {
        let (k, l) = (p.1.len(), q.1.len());
        let mut out = match (k, l) {
            (0, 0) => Vec::new(),
            (1, 0) => vec![(&p.0 * &self.d(&q.0, p.1[0]), Vec::new())],
            (1, 1) => {
                let (a, b) = (p.1[0], q.1[0]);
                vec![
                    (&p.0 * &self.d(&q.0, a), vec![b]),
                    (-(&q.0 * &self.d(&p.0, b)), vec![a]),
                ]
            }
            (1, _) => {
                let (u, r) = split(q);
                let mut out = wedge_terms(&self.terms(p, &u), std::slice::from_ref(&r));
                out.extend(wedge_terms(&[u], &self.terms(p, &r)));
                out
            }
            (_, 1) => negate(self.terms(q, p)),
            (0, _) => {
                let (u, r) = split(q);
                let mut out = negate(wedge_terms(&self.terms(&u, p), std::slice::from_ref(&r)));
                out.extend(negate(wedge_terms(&[u], &self.terms(p, &r))));
                out
            }
            (_, 0) => {
                let t = self.terms(q, p);
                if k % 2 == 0 {
                    t
                } else {
                    negate(t)
                }
            }
            _ => {
                let (u, r) = split(q);
                let mut out = negate(wedge_terms(&self.terms(&u, p), std::slice::from_ref(&r)));
                let w = wedge_terms(&[u], &self.terms(p, &r));
                out.extend(if (k - 1) % 2 == 0 { w } else { negate(w) });
                out
            }
        };
        out.retain(|(c, _)| !c.is_zero());
        out
    }
}

impl MultiVector {
    pub fn zero(chart: &Chart, degree: usize) -> MultiVector {
        MultiVector {
            chart: chart.clone(),
            degree,
            comps: BTreeMap::new(),
            rational: true,
        }
    }

    pub fn scalar(chart: &Chart, f: Expr) -> MultiVector {
        MultiVector::collect(chart, 0, vec![(f, Vec::new())], true)
    }

    /// A vector field from its components in chart order.
    pub fn vector(chart: &Chart, comps: Vec<Expr>) -> Result<MultiVector> {
        if comps.len() != chart.dim() {
            return Err(Error::Dimension {
                expected: chart.dim(),
                found: comps.len(),
            });
        }
        Ok(MultiVector::collect(
            chart,
            1,
            comps.into_iter().enumerate().map(|(i, c)| (c, vec![i])).collect(),
            true,
        ))
    }

    /// The coordinate multivector `d_{i1} ^ ... ^ d_{ik}`, with any index order.
    pub fn basis(chart: &Chart, idx: &[usize]) -> Result<MultiVector> {
        MultiVector::from_terms(chart, idx.len(), [(idx.to_vec(), Expr::one())])
    }

    /// Builds from `(indices, coefficient)` pairs. Indices may come in any
    /// order; they are sorted with the permutation sign and repeated entries
    /// are rejected.
    pub fn from_terms<I>(chart: &Chart, degree: usize, terms: I) -> Result<MultiVector>
    where
        I: IntoIterator<Item = (Vec<usize>, Expr)>,
    {
        let mut out = Vec::new();
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::Degree {
                    expected: degree,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= chart.dim()) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    dim: chart.dim(),
                });
            }
            chart.check_expr(&c)?;
            let (odd, idx) = sort_indices(idx.clone()).ok_or_else(|| {
                Error::Precondition(format!("repeated index in component {idx:?}"))
            })?;
            out.push((if odd { -c } else { c }, idx));
        }
        Ok(MultiVector::collect(chart, degree, out, true))
    }

    fn collect(chart: &Chart, degree: usize, terms: Vec<Term>, rational: bool) -> MultiVector {
        let rational = rational && !terms.iter().any(|(c, _)| c.has_sqrt());
        let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
        for (c, idx) in terms {
            acc.entry(idx).or_default().push(c);
        }
        let comps = acc
            .into_iter()
            .filter_map(|(idx, cs)| {
                let c = tidy(&Expr::sum(cs));
                (!c.is_zero()).then_some((idx, c))
            })
            .collect();
        MultiVector {
            chart: chart.clone(),
            degree,
            comps,
            rational,
        }
    }

    fn terms(&self) -> Vec<Term> {
        self.comps.iter().map(|(i, c)| (c.clone(), i.clone())).collect()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component on an increasing tuple; zero when absent.
    pub fn get(&self, idx: &[usize]) -> Expr {
        self.comps.get(idx).cloned().unwrap_or_else(Expr::zero)
    }

    /// Component on an arbitrary tuple, with the antisymmetric sign.
    pub fn component(&self, idx: &[usize]) -> Expr {
        match sort_indices(idx.to_vec()) {
            Some((odd, sorted)) => {
                let c = self.get(&sorted);
                if odd {
                    -c
                } else {
                    c
                }
            }
            None => Expr::zero(),
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.comps.iter()
    }

    /// The scalar value of a degree-0 field.
    pub fn as_scalar(&self) -> Option<Expr> {
        (self.degree == 0).then(|| self.get(&[]))
    }

    /// True when no component is stored.
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    fn same_chart(&self, other: &MultiVector) -> Result<()> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector> {
        self.same_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::Degree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut ts = self.terms();
        ts.extend(other.terms());
        Ok(MultiVector::collect(
            &self.chart,
            self.degree,
            ts,
            self.rational && other.rational,
        ))
    }

    pub fn sub(&self, other: &MultiVector) -> Result<MultiVector> {
        self.add(&other.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, f: &Expr) -> MultiVector {
        MultiVector::collect(
            &self.chart,
            self.degree,
            self.comps.iter().map(|(i, c)| (f * c, i.clone())).collect(),
            self.rational && !f.has_sqrt(),
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> MultiVector {
        MultiVector::collect(
            &self.chart,
            self.degree,
            self.comps.iter().map(|(i, c)| (f(c), i.clone())).collect(),
            self.rational,
        )
    }

    pub fn wedge(&self, other: &MultiVector) -> Result<MultiVector> {
        self.same_chart(other)?;
        Ok(MultiVector::collect(
            &self.chart,
            self.degree + other.degree,
            wedge_terms(&self.terms(), &other.terms()),
            self.rational && other.rational,
        ))
    }

    /// Schouten bracket, of degree k + l - 1. Two scalars bracket to the zero
    /// scalar.
    pub fn schouten(&self, other: &MultiVector) -> Result<MultiVector> {
        self.same_chart(other)?;
        let engine = Schouten {
            names: self.chart.names(),
        };
        let mut ts = Vec::new();
        for p in self.terms() {
            for q in other.terms() {
                ts.extend(engine.terms(&p, &q));
            }
        }
        let degree = (self.degree + other.degree).saturating_sub(1);
        Ok(MultiVector::collect(
            &self.chart,
            degree,
            ts,
            self.rational && other.rational,
        ))
    }

    /// `L_X P = [X, P]`.
    pub fn lie_derivative(x: &MultiVector, p: &MultiVector) -> Result<MultiVector> {
        x.require_degree(1)?;
        x.schouten(p)
    }

    pub(crate) fn require_degree(&self, d: usize) -> Result<()> {
        if self.degree == d {
            Ok(())
        } else {
            Err(Error::Degree {
                expected: d,
                found: self.degree,
            })
        }
    }

    /// `X(f)` for a vector field.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        self.require_degree(1)?;
        let names = self.chart.names();
        Ok(tidy(&Expr::sum(
            self.comps.iter().map(|(i, c)| c * &f.diff(&names[i[0]])),
        )))
    }

    /// `{f, g} = sum_{i<j} P^{ij} (d_i f d_j g - d_j f d_i g)`.
    pub fn bivector_bracket(&self, f: &Expr, g: &Expr) -> Result<Expr> {
        self.require_degree(2)?;
        let names = self.chart.names();
        let mut ts = Vec::new();
        for (idx, c) in &self.comps {
            let (a, b) = (&names[idx[0]], &names[idx[1]]);
            let cross = &f.diff(a) * &g.diff(b) - &f.diff(b) * &g.diff(a);
            ts.push(c * &cross);
        }
        Ok(tidy(&Expr::sum(ts)))
    }

    /// True when this field and everything it was derived from is free of
    /// square roots.
    pub fn is_rational(&self) -> bool {
        self.rational
    }

    /// Marks the field as derived from data outside the rational fragment.
    pub fn taint(mut self, irrational: bool) -> MultiVector {
        self.rational &= !irrational;
        self
    }

    /// Zero-test verdict over all components.
    pub fn zero_verdict(&self, zt: &ZeroTest) -> Result<Verdict> {
        zt.all_zero_in(self.comps.values(), self.rational)
    }

    /// Verdict that two multivectors agree componentwise.
    pub fn equal_verdict(&self, other: &MultiVector, zt: &ZeroTest) -> Result<Verdict> {
        if self.degree != other.degree {
            return Err(Error::Degree {
                expected: self.degree,
                found: other.degree,
            });
        }
        self.sub(other)?.zero_verdict(zt)
    }

    /// Builds from trusted terms whose index tuples may be unsorted.
    pub(crate) fn from_raw(
        chart: &Chart,
        degree: usize,
        terms: Vec<(Expr, Vec<usize>)>,
        rational: bool,
    ) -> MultiVector {
        let sorted = terms
            .into_iter()
            .filter_map(|(c, idx)| {
                sort_indices(idx).map(|(odd, idx)| (if odd { -c } else { c }, idx))
            })
            .collect();
        MultiVector::collect(chart, degree, sorted, rational)
    }

    /// Full antisymmetric matrix of a bivector.
    pub fn matrix(&self) -> Result<Vec<Vec<Expr>>> {
        self.require_degree(2)?;
        let n = self.chart.dim();
        let mut m = vec![vec![Expr::zero(); n]; n];
        for (idx, c) in &self.comps {
            m[idx[0]][idx[1]] = c.clone();
            m[idx[1]][idx[0]] = -c;
        }
        Ok(m)
    }

    /// Display strings of the matrix entries.
    pub fn matrix_entries(&self) -> Result<Vec<Vec<String>>> {
        Ok(self
            .matrix()?
            .iter()
            .map(|row| row.iter().map(display_entry).collect())
            .collect())
    }

    /// Matrix with left-aligned columns separated by two blanks.
    pub fn matrix_string(&self) -> Result<String> {
        Ok(align_rows(&self.matrix_entries()?))
    }

    /// One `(i,j,...) : expr` line per component, 1-based indices.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for (idx, c) in &self.comps {
            let ids: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            out.push_str(&format!("({}) : {}\n", ids.join(","), display_expr(c)));
        }
        out
    }
}

/// Expression text for reports: simplified when possible.
pub fn display_expr(e: &Expr) -> String {
    simplify(e).unwrap_or_else(|_| e.clone()).to_string()
}

pub fn display_entry(e: &Expr) -> String {
    simplify(e).unwrap_or_else(|_| e.clone()).compact()
}

/// Aligns a table of cells into columns.
pub fn align_rows(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (j, cell) in row.iter().enumerate() {
            if j > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<w$}", w = widths[j]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return writeln!(f, "0");
        }
        f.write_str(&self.listing())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn chart() -> Chart {
        Chart::standard(3)
    }

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn vf(comps: [&str; 3]) -> MultiVector {
        MultiVector::vector(&chart(), comps.iter().map(|s| e(s)).collect()).unwrap()
    }

    fn pi() -> MultiVector {
        MultiVector::from_terms(&chart(), 2, [(vec![1, 2], e("x1"))]).unwrap()
    }

    #[test]
    fn wedge_basics() {
        let d2 = MultiVector::basis(&chart(), &[1]).unwrap();
        let d3 = MultiVector::basis(&chart(), &[2]).unwrap();
        assert_eq!(d2.wedge(&d3).unwrap().scale(&e("x1")), pi());
        let x = vf(["x1", "x2^2", "1"]);
        assert!(x.wedge(&x).unwrap().is_empty());
        let w = vf(["x1", "0", "0"]).wedge(&vf(["0", "1", "0"])).unwrap();
        assert_eq!(w.get(&[0, 1]), e("x1"));
        assert_eq!(w.component(&[1, 0]), e("-x1"));
    }

    #[test]
    fn bracket_base_cases() {
        let x = vf(["1", "0", "0"]);
        let f = MultiVector::scalar(&chart(), e("x1"));
        assert_eq!(x.schouten(&f).unwrap().as_scalar().unwrap(), Expr::one());
        assert!(f.schouten(&f).unwrap().is_empty());
        let a = vf(["0", "x1", "0"]);
        let b = vf(["x2", "0", "0"]);
        assert_eq!(a.schouten(&b).unwrap(), vf(["x1", "-x2", "0"]));
    }

    #[test]
    fn example_tensor_is_poisson() {
        let p = pi();
        let j = p.schouten(&p).unwrap();
        assert_eq!(j.degree(), 3);
        assert!(j.is_empty());
    }

    #[test]
    fn lie_derivative_differentiates_components() {
        let d1 = vf(["1", "0", "0"]);
        let l = MultiVector::lie_derivative(&d1, &pi()).unwrap();
        assert_eq!(l, MultiVector::basis(&chart(), &[1, 2]).unwrap());
        assert!(MultiVector::lie_derivative(&pi(), &d1).is_err());
    }

    #[test]
    fn bracket_of_functions() {
        let p = pi();
        assert_eq!(p.bivector_bracket(&e("x2"), &e("x3")).unwrap(), e("x1"));
        assert_eq!(p.bivector_bracket(&e("x2*x3"), &e("x3")).unwrap(), e("x1*x3"));
        assert!(p.bivector_bracket(&e("x2*x1"), &e("x2*x1")).unwrap().is_zero());
    }

    #[test]
    fn jacobiator_matches_component_formula() {
        // x2 d1^d2 + x1 d1^d3: compare [P,P] against the cyclic sum
        // sum_l (P^{li} d_l P^{jk} + cyclic), which equals -1/2 [P,P]^{ijk}
        // for this sign convention.
        let p = MultiVector::from_terms(&chart(), 2, [(vec![0, 1], e("x2")), (vec![0, 2], e("x1"))])
            .unwrap();
        let j = p.schouten(&p).unwrap();
        let names = chart().names().to_vec();
        let m = p.matrix().unwrap();
        let cyc = |i: usize, jj: usize, k: usize| {
            Expr::sum((0..3).map(|l| &m[l][i] * &m[jj][k].diff(&names[l])))
        };
        let brute = tidy(&(cyc(0, 1, 2) + cyc(1, 2, 0) + cyc(2, 0, 1)));
        assert_eq!(tidy(&(j.get(&[0, 1, 2]) + Expr::int(2) * brute)), Expr::zero());
        assert!(!j.is_empty());
    }

    #[test]
    fn matrix_printing() {
        let s = pi().matrix_string().unwrap();
        assert_eq!(s, "0  0    0\n0  0    x1\n0  -x1  0\n");
        assert_eq!(pi().listing(), "(2,3) : x1\n");
    }
}
