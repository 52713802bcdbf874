//! Linear coordinate changes and the structure constants of linear Poisson
//! tensors.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::multivec::MultiVector;
use crate::poisson::PoissonTensor;
use crate::symexpr::{canonical, simplify, Expr, Rational, ZeroTest};

/// New coordinates as linear combinations of old ones: `u_a = sum_i m[a][i] x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Vec<Vec<Rational>>,
}

/// Gauss-Jordan on `[m | I]`; `None` when singular.
fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients of a homogeneous linear expression, or `None`.
pub(crate) fn linear_coeffs(chart: &Chart, e: &Expr) -> Result<Option<Vec<Rational>>> {
    // Pushed-forward root data such as sqrt(u)^2 reduces to the rational fragment.
    let e = &simplify(e)?;
    if e.has_sqrt() {
        return Ok(None);
    }
    let mut coeffs = Vec::with_capacity(chart.dim());
    let mut rest = e.clone();
    for (i, x) in chart.vars().iter().enumerate() {
        let d = canonical(&e.diff(chart.name(i)))?;
        let Some(c) = d.as_rational() else {
            return Ok(None);
        };
        rest = rest - Expr::rational(c.clone()) * x.clone();
        coeffs.push(c.clone());
    }
    Ok(canonical(&rest)?.is_zero().then_some(coeffs))
}

impl LinearMap {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<LinearMap> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: row.len(),
            });
        }
        if n == 0 || invert(&matrix).is_none() {
            return Err(Error::SingularMap);
        }
        Ok(LinearMap { matrix })
    }

    pub fn identity(n: usize) -> LinearMap {
        LinearMap {
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    /// Reads each new coordinate from a linear expression in the chart.
    pub fn from_exprs(chart: &Chart, exprs: &[Expr]) -> Result<LinearMap> {
        if exprs.len() != chart.dim() {
            return Err(Error::Dimension {
                expected: chart.dim(),
                found: exprs.len(),
            });
        }
        let mut rows = Vec::new();
        for (a, e) in exprs.iter().enumerate() {
            chart.check_expr(e)?;
            match linear_coeffs(chart, e)? {
                Some(r) => rows.push(r),
                None => {
                    return Err(Error::NotLinear {
                        component: format!("row {}", a + 1),
                        expr: e.to_string(),
                    })
                }
            }
        }
        LinearMap::new(rows)
    }

    /// `u_k = sign * x_i` for each `(i, k, sign)`, indices 0-based.
    pub fn signed_permutation(images: &[(usize, i64)]) -> Result<LinearMap> {
        let n = images.len();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (i, &(k, s)) in images.iter().enumerate() {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, dim: n });
            }
            m[k][i] = Rational::from_integer(s.into());
        }
        LinearMap::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn inverse(&self) -> LinearMap {
        LinearMap {
            matrix: invert(&self.matrix).expect("checked at construction"),
        }
    }

    /// The new coordinates as expressions in the chart's names.
    pub fn images(&self, chart: &Chart) -> Vec<Expr> {
        self.matrix
            .iter()
            .map(|row| {
                Expr::sum(
                    row.iter()
                        .zip(chart.vars())
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, x)| Expr::rational(c.clone()) * x),
                )
            })
            .collect()
    }
}

/// Rewrites `p` in the new coordinates. The result lives on the same chart,
/// whose a-th name now denotes the a-th new coordinate.
pub fn pushforward(p: &MultiVector, a: &LinearMap) -> Result<MultiVector> {
    let chart = p.chart();
    let n = chart.dim();
    if a.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            found: a.dim(),
        });
    }
    let back: HashMap<String, Expr> = chart
        .names()
        .iter()
        .cloned()
        .zip(a.inverse().images(chart))
        .collect();
    // d/dx_i = sum_a m[a][i] d/du_a
    let basis: Vec<MultiVector> = (0..n)
        .map(|i| MultiVector::vector(chart, (0..n).map(|r| Expr::rational(a.matrix[r][i].clone())).collect()))
        .collect::<Result<_>>()?;
    let mut out = MultiVector::zero(chart, p.degree());
    for (idx, v) in p.components() {
        let mut term = MultiVector::scalar(chart, v.subst(&back));
        for &i in idx {
            term = term.wedge(&basis[i])?;
        }
        out = out.add(&term)?;
    }
    Ok(out.taint(!p.is_rational()))
}

/// Pushforward of a Poisson tensor, re-verified.
pub fn push_poisson(pi: &PoissonTensor, a: &LinearMap, zt: &ZeroTest) -> Result<PoissonTensor> {
    let pushed = pushforward(pi.bivector(), a)?;
    if pi.jacobi().is_nonzero() {
        PoissonTensor::check(pushed, zt)
    } else {
        PoissonTensor::verified(pushed, zt)
    }
}

/// One bracket `[e_i, e_j] = coef e_k`, 1-based as in printed tables.
pub type TableEntry = (usize, usize, usize, Rational);

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`, 0-based storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Vec<Vec<Rational>>>,
}

fn zeros(n: usize) -> Vec<Vec<Vec<Rational>>> {
    vec![vec![vec![Rational::zero(); n]; n]; n]
}

/// First `(i, j, k, l)` (0-based) where the Jacobi sum is nonzero.
fn jacobi_violation(n: usize, c: &[Vec<Vec<Rational>>]) -> Option<(usize, usize, usize, usize, Rational)> {
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in 0..n {
                    let mut s = Rational::zero();
                    for m in 0..n {
                        s += &c[i][j][m] * &c[m][k][l];
                        s += &c[j][k][m] * &c[m][i][l];
                        s += &c[k][i][m] * &c[m][j][l];
                    }
                    if !s.is_zero() {
                        return Some((i, j, k, l, s));
                    }
                }
            }
        }
    }
    None
}

/// Antisymmetric completion of a table; errors on out-of-range or
/// contradictory entries.
fn complete_table(dim: usize, table: &[TableEntry]) -> Result<Vec<Vec<Vec<Rational>>>> {
    let mut c = zeros(dim);
    for (i, j, k, v) in table {
        for &x in [i, j, k] {
            if x == 0 || x > dim {
                return Err(Error::IndexOutOfRange { index: x, dim });
            }
        }
        let (i, j, k) = (i - 1, j - 1, k - 1);
        if i == j {
            return Err(Error::NotLieAlgebra(format!("[e{0}, e{0}] must vanish", i + 1)));
        }
        c[i][j][k] += v;
        c[j][i][k] -= v;
    }
    Ok(c)
}

/// Describes the Jacobi failure of a table, if any.
pub fn table_jacobi(dim: usize, table: &[TableEntry]) -> Result<Option<String>> {
    let c = complete_table(dim, table)?;
    Ok(jacobi_violation(dim, &c).map(|(i, j, k, l, s)| {
        format!(
            "Jacobi fails for (e{}, e{}, e{}): coefficient {s} on e{}",
            i + 1,
            j + 1,
            k + 1,
            l + 1
        )
    }))
}

impl StructureConstants {
    /// From a printed table, validated for Jacobi.
    pub fn new(dim: usize, table: &[TableEntry]) -> Result<StructureConstants> {
        let c = complete_table(dim, table)?;
        StructureConstants::from_array(dim, c)
    }

    fn from_array(dim: usize, c: Vec<Vec<Vec<Rational>>>) -> Result<StructureConstants> {
        if let Some((i, j, k, l, s)) = jacobi_violation(dim, &c) {
            return Err(Error::NotLieAlgebra(format!(
                "Jacobi fails for (e{}, e{}, e{}): coefficient {s} on e{}",
                i + 1,
                j + 1,
                k + 1,
                l + 1
            )));
        }
        Ok(StructureConstants { dim, c })
    }

    pub fn abelian(dim: usize) -> StructureConstants {
        StructureConstants { dim, c: zeros(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}`, 0-based.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// Nonzero brackets with `i < j`, 1-based.
    pub fn entries(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out.push((i + 1, j + 1, k + 1, self.c[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }

    /// Constants of the tensor pushed forward by `a`.
    pub fn change_basis(&self, a: &LinearMap) -> Result<StructureConstants> {
        let n = self.dim;
        if a.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: a.dim(),
            });
        }
        let m = a.matrix();
        let inv = a.inverse();
        let inv = inv.matrix();
        let mut c = zeros(n);
        for (p, cp) in c.iter_mut().enumerate() {
            for (q, cpq) in cp.iter_mut().enumerate() {
                for i in 0..n {
                    for j in 0..n {
                        let w = &m[p][i] * &m[q][j];
                        if w.is_zero() {
                            continue;
                        }
                        for k in 0..n {
                            if self.c[i][j][k].is_zero() {
                                continue;
                            }
                            let wk = &w * &self.c[i][j][k];
                            for (r, out) in cpq.iter_mut().enumerate() {
                                *out += &wk * &inv[k][r];
                            }
                        }
                    }
                }
            }
        }
        StructureConstants::from_array(n, c)
    }

    /// The linear Poisson tensor `sum_{i<j} c^k_{ij} x_k d_i ^ d_j`.
    pub fn tensor(&self, chart: &Chart) -> Result<MultiVector> {
        if chart.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: chart.dim(),
            });
        }
        let terms = self.entries().into_iter().map(|(i, j, k, v)| {
            (vec![i - 1, j - 1], Expr::rational(v) * chart.var(k - 1))
        });
        MultiVector::from_terms(chart, 2, terms)
    }
}

fn term(c: &Rational, k: usize, first: bool) -> String {
    let (neg, mag) = if *c < Rational::zero() { (true, -c) } else { (false, c.clone()) };
    let body = if mag.is_one() { format!("e{k}") } else { format!("{mag}*e{k}") };
    match (first, neg) {
        (true, false) => body,
        (true, true) => format!("-{body}"),
        (false, false) => format!(" + {body}"),
        (false, true) => format!(" - {body}"),
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let mut rhs = String::new();
                for k in 0..self.dim {
                    let c = &self.c[i][j][k];
                    if !c.is_zero() {
                        rhs.push_str(&term(c, k + 1, rhs.is_empty()));
                    }
                }
                if !rhs.is_empty() {
                    writeln!(f, "[e{}, e{}] = {rhs}", i + 1, j + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Reads `c^k_{ij}` from a tensor whose components are linear in the chart.
pub fn structure_constants(pi: &PoissonTensor) -> Result<StructureConstants> {
    let chart = pi.chart();
    let n = chart.dim();
    let mut c = zeros(n);
    for (idx, v) in pi.bivector().components() {
        let coeffs = linear_coeffs(chart, v)?.ok_or_else(|| Error::NotLinear {
            component: format!("({},{})", idx[0] + 1, idx[1] + 1),
            expr: v.to_string(),
        })?;
        for (k, x) in coeffs.into_iter().enumerate() {
            c[idx[1]][idx[0]][k] = -x.clone();
            c[idx[0]][idx[1]][k] = x;
        }
    }
    StructureConstants::from_array(n, c)
}

/// Whether `c` equals the table's antisymmetric completion exactly.
pub fn match_table(c: &StructureConstants, table: &[TableEntry]) -> bool {
    table_mismatches(c, table).is_ok_and(|m| m.is_empty())
}

/// Human-readable differences between `c` and a table.
pub fn table_mismatches(c: &StructureConstants, table: &[TableEntry]) -> Result<Vec<String>> {
    let t = complete_table(c.dim, table)?;
    let mut out = Vec::new();
    for i in 0..c.dim {
        for j in i + 1..c.dim {
            for k in 0..c.dim {
                if c.c[i][j][k] != t[i][j][k] {
                    out.push(format!(
                        "[e{}, e{}] on e{}: computed {}, table {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        c.c[i][j][k],
                        t[i][j][k]
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn zt() -> ZeroTest {
        ZeroTest::default()
    }

    fn a31() -> PoissonTensor {
        let b = MultiVector::from_terms(&Chart::standard(3), 2, [(vec![1, 2], e("x1"))]).unwrap();
        PoissonTensor::check(b, &zt()).unwrap()
    }

    #[test]
    fn singular_and_nonlinear_maps() {
        assert!(matches!(LinearMap::new(vec![vec![r(1), r(2)], vec![r(2), r(4)]]), Err(Error::SingularMap)));
        let ch = Chart::standard(2);
        assert!(matches!(
            LinearMap::from_exprs(&ch, &[e("x1^2"), e("x2")]),
            Err(Error::NotLinear { .. })
        ));
        assert!(matches!(
            LinearMap::from_exprs(&ch, &[e("x1 + 1"), e("x2")]),
            Err(Error::NotLinear { .. })
        ));
        let m = LinearMap::from_exprs(&ch, &[e("2*x1 + x2"), e("x1 - x2/3")]).unwrap();
        assert_eq!(m.matrix()[1], vec![r(1), Rational::new((-1).into(), 3.into())]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = LinearMap::new(vec![vec![r(2), r(1), r(0)], vec![r(1), r(1), r(0)], vec![r(0), r(3), r(1)]]).unwrap();
        let b = a31().bivector().clone();
        let there = pushforward(&b, &m).unwrap();
        assert_ne!(there, b);
        assert_eq!(pushforward(&there, &m.inverse()).unwrap(), b);
        assert_eq!(pushforward(&b, &LinearMap::identity(3)).unwrap(), b);
    }

    #[test]
    fn permutation_pushforward() {
        // u1 = x2, u2 = x1, u3 = x3: x1 d2^d3 becomes u2 d1^d3.
        let m = LinearMap::signed_permutation(&[(1, 1), (0, 1), (2, 1)]).unwrap();
        let p = pushforward(a31().bivector(), &m).unwrap();
        assert_eq!(p.listing(), "(1,3) : x2\n");
        let m = LinearMap::signed_permutation(&[(0, 1), (2, 1), (1, -1)]).unwrap();
        let p = pushforward(a31().bivector(), &m).unwrap();
        assert_eq!(p.listing(), "(2,3) : x1\n");
    }

    #[test]
    fn a31_constants() {
        let c = structure_constants(&a31()).unwrap();
        assert_eq!(c.entries(), vec![(2, 3, 1, r(1))]);
        assert_eq!(c.to_string(), "[e2, e3] = e1\n");
        assert!(match_table(&c, &[(2, 3, 1, r(1))]));
        assert!(match_table(&c, &[(3, 2, 1, r(-1))]));
        assert!(!match_table(&StructureConstants::abelian(3), &[(2, 3, 1, r(1))]));
        let z = PoissonTensor::check(MultiVector::zero(&Chart::standard(3), 2), &zt()).unwrap();
        assert!(structure_constants(&z).unwrap().is_abelian());
    }

    #[test]
    fn nonlinear_component_is_named() {
        let b = MultiVector::from_terms(&Chart::standard(3), 2, [(vec![0, 1], e("x3^2"))]).unwrap();
        let p = PoissonTensor::check(b, &zt()).unwrap();
        match structure_constants(&p) {
            Err(Error::NotLinear { component, .. }) => assert_eq!(component, "(1,2)"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jacobi_on_tables() {
        let bad = [(1, 2, 5, r(1)), (1, 3, 4, r(1)), (2, 4, 6, r(1))];
        assert!(table_jacobi(6, &bad).unwrap().is_some());
        assert!(matches!(StructureConstants::new(6, &bad), Err(Error::NotLieAlgebra(_))));
        let good = [(1, 2, 6, r(1)), (1, 3, 4, r(1)), (2, 3, 5, r(1))];
        assert!(table_jacobi(6, &good).unwrap().is_none());
    }

    #[test]
    fn change_basis_agrees_with_pushforward() {
        let ch = Chart::standard(3);
        let sc = StructureConstants::new(3, &[(1, 2, 2, r(1)), (1, 3, 3, r(2))]).unwrap();
        let p = PoissonTensor::verified(sc.tensor(&ch).unwrap(), &zt()).unwrap();
        let m = LinearMap::new(vec![vec![r(1), r(1), r(0)], vec![r(0), r(1), r(2)], vec![r(1), r(0), r(1)]]).unwrap();
        let pushed = push_poisson(&p, &m, &zt()).unwrap();
        assert_eq!(structure_constants(&pushed).unwrap(), sc.change_basis(&m).unwrap());
        assert_eq!(structure_constants(&p).unwrap(), sc);
    }

    #[test]
    fn display_with_coefficients() {
        let sc = StructureConstants::new(3, &[(1, 2, 2, r(-1)), (1, 2, 3, Rational::new(3.into(), 2.into()))]).unwrap();
        assert_eq!(sc.to_string(), "[e1, e2] = -e2 + 3/2*e3\n");
    }
}
