//! Problem documents: a line-oriented, sectioned text format naming charts,
//! fields, tensors, lifts, deformations, linear maps and expected results.
//!
//! ```text
//! [chart]
//! x1 x2 x3
//!
//! [tensor pi]
//! (2,3) : x1
//!
//! [field X]
//! (2) : sqrt(x3)
//!
//! [deform ex1]
//! base = pi
//! term = CV X X
//!
//! [expect matrix ex1]
//! 0 0 0 0 0 0
//! ...
//! ```
//!
//! `#` starts a comment. Index tuples are 1-based or use coordinate names.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::changevar::{
    linear_coeffs, match_table, push_poisson, structure_constants, table_jacobi, table_mismatches,
    LinearMap, TableEntry,
};
use crate::chart::Chart;
use crate::deform::{
    deform, deform_cv, deform_mixed, deform_vv, DeformOptions, DeformTerm, Deformation,
    DeformationSpec, PairKind,
};
use crate::error::{Error, Result};
use crate::lift::{complete_lift, tangent_lift_poisson, vertical_lift};
use crate::multivec::{display_entry, MultiVector};
use crate::poisson::PoissonTensor;
use crate::symexpr::{canonical, parse, Expr, Rational, Verdict, ZeroTest};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftMode {
    /// Tangent Poisson tensor for bivectors, complete lift otherwise.
    Tangent,
    Complete,
    Vertical,
}

#[derive(Clone, Debug)]
pub struct LiftDecl {
    pub of: String,
    pub mode: LiftMode,
}

/// Which constructor a deformation section asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Auto,
    Cv,
    Vv,
    Mixed,
}

#[derive(Clone, Debug)]
pub struct DeformDecl {
    pub line: usize,
    pub base: String,
    pub lambda: Rational,
    pub casimir: Expr,
    pub terms: Vec<(PairKind, String, String)>,
    pub construction: Construction,
}

#[derive(Clone, Debug)]
pub enum ExpectKind {
    /// Rows of canonically printed entries.
    Matrix(Vec<Vec<String>>),
    /// Source text and parsed expression.
    Casimirs(Vec<(String, Expr)>),
    Constants {
        map: Option<String>,
        label: String,
        dim: usize,
        table: Vec<TableEntry>,
    },
    Jacobi(String),
}

#[derive(Clone, Debug)]
pub struct Expect {
    pub line: usize,
    pub target: String,
    pub kind: ExpectKind,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub chart: Chart,
    pub exprs: BTreeMap<String, Expr>,
    pub multivectors: BTreeMap<String, MultiVector>,
    pub lifts: BTreeMap<String, LiftDecl>,
    pub deforms: BTreeMap<String, DeformDecl>,
    pub maps: BTreeMap<String, LinearMap>,
    pub expects: Vec<Expect>,
}

struct Section {
    line: usize,
    header: Vec<String>,
    body: Vec<(usize, String)>,
}

fn doc_err(line: usize, message: impl Into<String>) -> Error {
    Error::Document {
        line,
        message: message.into(),
    }
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Document { .. } => e,
        other => doc_err(line, other.to_string()),
    }
}

fn parse_expr(line: usize, text: &str) -> Result<Expr> {
    parse(text.trim()).map_err(|e| doc_err(line, format!("{e} in `{}`", text.trim())))
}

fn parse_rational(line: usize, text: &str) -> Result<Rational> {
    let e = canonical(&parse_expr(line, text)?).map_err(|e| located(line, e))?;
    e.as_rational()
        .cloned()
        .ok_or_else(|| doc_err(line, format!("expected a rational number, found `{text}`")))
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        // Bracket table lines contain `=`; headers never do.
        if let Some(inner) = line.strip_prefix('[').filter(|_| !line.contains('=')) {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| doc_err(n, "unterminated section header"))?;
            let header: Vec<String> = inner.split_whitespace().map(str::to_string).collect();
            if header.is_empty() {
                return Err(doc_err(n, "empty section header"));
            }
            out.push(Section {
                line: n,
                header,
                body: Vec::new(),
            });
            continue;
        }
        match out.last_mut() {
            Some(s) => s.body.push((n, line.to_string())),
            None => return Err(doc_err(n, "content before the first section")),
        }
    }
    Ok(out)
}

fn option(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    let k = k.trim();
    (!k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
        .then(|| (k, v.trim()))
}

fn index_tokens(line: usize, chart: &Chart, text: &str) -> Result<Vec<usize>> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(|c: char| c == ',' || c == '^' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(0) => Err(doc_err(line, "indices are 1-based")),
            Ok(k) if k > chart.dim() => Err(doc_err(
                line,
                format!("index {k} out of range for dimension {}", chart.dim()),
            )),
            Ok(k) => Ok(k - 1),
            Err(_) => chart
                .index_of(t)
                .ok_or_else(|| doc_err(line, format!("unknown coordinate `{t}`"))),
        })
        .collect()
}

fn single_name(s: &Section, what: &str) -> Result<String> {
    match s.header.len() {
        2 => Ok(s.header[1].clone()),
        _ => Err(doc_err(s.line, format!("expected `[{what} NAME]`"))),
    }
}

fn chart_option(line: usize, base: &Chart, v: &str) -> Result<Chart> {
    match v {
        "base" => Ok(base.clone()),
        "tangent" => base.tangent().map_err(|e| located(line, e)),
        other => Err(doc_err(line, format!("chart must be `base` or `tangent`, found `{other}`"))),
    }
}

/// Parses a bracket line `[e1, e2] = e5 - 2*e6`.
fn table_line(line: usize, dim: usize, text: &str) -> Result<Vec<TableEntry>> {
    let bad = || doc_err(line, format!("expected `[e_i, e_j] = ...`, found `{text}`"));
    let rest = text.strip_prefix('[').ok_or_else(bad)?;
    let (pair, rhs) = rest.split_once(']').ok_or_else(bad)?;
    let rhs = rhs.trim().strip_prefix('=').ok_or_else(bad)?;
    let basis = |t: &str| -> Result<usize> {
        t.trim()
            .strip_prefix('e')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1 && k <= dim)
            .ok_or_else(|| doc_err(line, format!("`{}` is not a basis element e1..e{dim}", t.trim())))
    };
    let (a, b) = pair.split_once(',').ok_or_else(bad)?;
    let (i, j) = (basis(a)?, basis(b)?);
    let echart = Chart::new((1..=dim).map(|k| format!("e{k}"))).map_err(|e| located(line, e))?;
    let e = parse_expr(line, rhs)?;
    echart.check_expr(&e).map_err(|e| located(line, e))?;
    let coeffs = linear_coeffs(&echart, &e)
        .map_err(|e| located(line, e))?
        .ok_or_else(|| doc_err(line, "bracket must be a linear combination of basis elements"))?;
    Ok(coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != Rational::from_integer(0.into()))
        .map(|(k, c)| (i, j, k + 1, c))
        .collect())
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let sections = split_sections(text)?;
        let first = sections.first().ok_or_else(|| doc_err(1, "empty document"))?;
        if first.header != ["chart"] {
            return Err(doc_err(first.line, "the first section must be `[chart]`"));
        }
        let names: Vec<&str> = first
            .body
            .iter()
            .flat_map(|(_, l)| l.split(|c: char| c == ',' || c.is_whitespace()))
            .filter(|t| !t.is_empty())
            .collect();
        let chart = Chart::new(names).map_err(|e| located(first.line, e))?;
        let mut doc = Document {
            chart,
            exprs: BTreeMap::new(),
            multivectors: BTreeMap::new(),
            lifts: BTreeMap::new(),
            deforms: BTreeMap::new(),
            maps: BTreeMap::new(),
            expects: Vec::new(),
        };
        for s in &sections[1..] {
            doc.section(s)?;
        }
        doc.validate()?;
        Ok(doc)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Document> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| doc_err(0, format!("cannot read {}: {e}", path.display())))?;
        Document::parse(&text)
    }

    fn taken(&self, name: &str) -> bool {
        self.exprs.contains_key(name)
            || self.multivectors.contains_key(name)
            || self.lifts.contains_key(name)
            || self.deforms.contains_key(name)
            || self.maps.contains_key(name)
    }

    fn claim(&self, s: &Section, name: &str) -> Result<()> {
        if self.taken(name) {
            Err(doc_err(s.line, format!("name `{name}` is declared twice")))
        } else {
            Ok(())
        }
    }

    fn section(&mut self, s: &Section) -> Result<()> {
        match s.header[0].as_str() {
            "expr" => {
                let name = single_name(s, "expr")?;
                self.claim(s, &name)?;
                let [(n, text)] = s.body.as_slice() else {
                    return Err(doc_err(s.line, "an expr section holds exactly one expression"));
                };
                let e = parse_expr(*n, text)?;
                self.chart.check_expr(&e).map_err(|e| located(*n, e))?;
                self.exprs.insert(name, e);
            }
            "field" | "tensor" => {
                let name = single_name(s, &s.header[0])?;
                self.claim(s, &name)?;
                let mv = self.multivector(s)?;
                self.multivectors.insert(name, mv);
            }
            "lift" => {
                let name = single_name(s, "lift")?;
                self.claim(s, &name)?;
                let mut of = None;
                let mut mode = LiftMode::Tangent;
                for (n, l) in &s.body {
                    match option(l) {
                        Some(("of", v)) => of = Some(v.to_string()),
                        Some(("kind", "tangent")) => mode = LiftMode::Tangent,
                        Some(("kind", "complete")) => mode = LiftMode::Complete,
                        Some(("kind", "vertical")) => mode = LiftMode::Vertical,
                        _ => return Err(doc_err(*n, format!("unexpected line `{l}` in lift section"))),
                    }
                }
                let of = of.ok_or_else(|| doc_err(s.line, "lift needs `of = NAME`"))?;
                self.lifts.insert(name, LiftDecl { of, mode });
            }
            "deform" => {
                let name = single_name(s, "deform")?;
                self.claim(s, &name)?;
                let d = self.deform_decl(s)?;
                self.deforms.insert(name, d);
            }
            "map" => {
                let name = single_name(s, "map")?;
                self.claim(s, &name)?;
                let m = self.map(s)?;
                self.maps.insert(name, m);
            }
            "expect" => {
                let e = self.expect(s)?;
                self.expects.push(e);
            }
            other => return Err(doc_err(s.line, format!("unknown section `{other}`"))),
        }
        Ok(())
    }

    fn multivector(&self, s: &Section) -> Result<MultiVector> {
        let mut chart = self.chart.clone();
        let mut degree = if s.header[0] == "field" { 1 } else { 2 };
        let mut entries = Vec::new();
        for (n, l) in &s.body {
            if let Some((idx, rhs)) = l.split_once(':') {
                entries.push((*n, idx.to_string(), parse_expr(*n, rhs)?));
                continue;
            }
            match option(l) {
                Some(("chart", v)) => chart = chart_option(*n, &self.chart, v)?,
                Some(("degree", v)) => {
                    degree = v
                        .parse()
                        .map_err(|_| doc_err(*n, format!("bad degree `{v}`")))?
                }
                _ => return Err(doc_err(*n, format!("expected `(i,j) : expr`, found `{l}`"))),
            }
        }
        let mut terms = Vec::new();
        for (n, idx, e) in entries {
            let idx = index_tokens(n, &chart, &idx)?;
            if idx.len() != degree {
                return Err(doc_err(
                    n,
                    format!("expected {degree} indices, found {}", idx.len()),
                ));
            }
            chart.check_expr(&e).map_err(|err| located(n, err))?;
            terms.push((idx, e));
        }
        MultiVector::from_terms(&chart, degree, terms).map_err(|e| located(s.line, e))
    }

    fn deform_decl(&self, s: &Section) -> Result<DeformDecl> {
        let mut base = None;
        let mut lambda = Rational::from_integer(1.into());
        let mut casimir = Expr::one();
        let mut terms = Vec::new();
        let mut construction = Construction::Auto;
        for (n, l) in &s.body {
            let Some((k, v)) = option(l) else {
                return Err(doc_err(*n, format!("expected `key = value`, found `{l}`")));
            };
            match k {
                "base" => base = Some(v.to_string()),
                "lambda" => lambda = parse_rational(*n, v)?,
                "casimir" => {
                    casimir = parse_expr(*n, v)?;
                    self.chart.check_expr(&casimir).map_err(|e| located(*n, e))?;
                }
                "term" => {
                    let parts: Vec<&str> = v.split_whitespace().collect();
                    let [kind, x, y] = parts.as_slice() else {
                        return Err(doc_err(*n, "expected `term = KIND X Y`"));
                    };
                    let kind = PairKind::parse(kind)
                        .ok_or_else(|| doc_err(*n, format!("unknown pair kind `{kind}` (CC, CV or VV)")))?;
                    terms.push((kind, x.to_string(), y.to_string()));
                }
                "theorem" => {
                    construction = match v.to_ascii_lowercase().as_str() {
                        "auto" => Construction::Auto,
                        "cv" => Construction::Cv,
                        "vv" => Construction::Vv,
                        "mixed" => Construction::Mixed,
                        other => return Err(doc_err(*n, format!("unknown theorem `{other}`"))),
                    }
                }
                other => return Err(doc_err(*n, format!("unknown key `{other}` in deform section"))),
            }
        }
        Ok(DeformDecl {
            line: s.line,
            base: base.ok_or_else(|| doc_err(s.line, "deform needs `base = NAME`"))?,
            lambda,
            casimir,
            terms,
            construction,
        })
    }

    fn map(&self, s: &Section) -> Result<LinearMap> {
        let mut chart = self.chart.clone();
        let mut rows: BTreeMap<usize, (usize, Expr)> = BTreeMap::new();
        for (n, l) in &s.body {
            match option(l) {
                Some(("chart", v)) => chart = chart_option(*n, &self.chart, v)?,
                Some((k, v)) => {
                    let idx = k
                        .strip_prefix('e')
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&d| d >= 1)
                        .ok_or_else(|| doc_err(*n, format!("expected `e<k> = expr`, found `{l}`")))?;
                    if rows.insert(idx, (*n, parse_expr(*n, v)?)).is_some() {
                        return Err(doc_err(*n, format!("e{idx} is defined twice")));
                    }
                }
                None => return Err(doc_err(*n, format!("expected `e<k> = expr`, found `{l}`"))),
            }
        }
        let dim = chart.dim();
        if rows.keys().copied().ne(1..=dim) {
            return Err(doc_err(s.line, format!("map must define e1..e{dim} exactly once")));
        }
        let exprs: Vec<Expr> = rows.into_values().map(|(_, e)| e).collect();
        LinearMap::from_exprs(&chart, &exprs).map_err(|e| located(s.line, e))
    }

    fn expect(&self, s: &Section) -> Result<Expect> {
        let bad = || doc_err(s.line, "expected `[expect matrix|casimirs|constants|jacobi TARGET]`");
        if s.header.len() != 3 {
            return Err(bad());
        }
        let target = s.header[2].clone();
        let kind = match s.header[1].as_str() {
            "matrix" => {
                let mut rows = Vec::new();
                for (n, l) in &s.body {
                    let row = l
                        .split_whitespace()
                        .map(|t| parse_expr(*n, t).map(|e| display_entry(&e)))
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(row);
                }
                ExpectKind::Matrix(rows)
            }
            "casimirs" => ExpectKind::Casimirs(
                s.body
                    .iter()
                    .map(|(n, l)| Ok((l.clone(), parse_expr(*n, l)?)))
                    .collect::<Result<_>>()?,
            ),
            "jacobi" => {
                let [(_, l)] = s.body.as_slice() else {
                    return Err(doc_err(s.line, "expected one verdict kind"));
                };
                ExpectKind::Jacobi(l.clone())
            }
            "constants" => {
                let mut map = None;
                let mut label = String::from("table");
                let mut dim = None;
                let mut lines = Vec::new();
                for (n, l) in &s.body {
                    if l.starts_with('[') {
                        lines.push((*n, l.clone()));
                        continue;
                    }
                    match option(l) {
                        Some(("map", v)) => map = Some(v.to_string()),
                        Some(("label", v)) => label = v.to_string(),
                        Some(("dim", v)) => {
                            dim = Some(v.parse().map_err(|_| doc_err(*n, format!("bad dimension `{v}`")))?)
                        }
                        _ => return Err(doc_err(*n, format!("unexpected line `{l}`"))),
                    }
                }
                let dim = dim.ok_or_else(|| doc_err(s.line, "constants expectation needs `dim = N`"))?;
                let mut table = Vec::new();
                for (n, l) in lines {
                    table.extend(table_line(n, dim, &l)?);
                }
                ExpectKind::Constants {
                    map,
                    label,
                    dim,
                    table,
                }
            }
            _ => return Err(bad()),
        };
        Ok(Expect {
            line: s.line,
            target,
            kind,
        })
    }

    fn validate(&self) -> Result<()> {
        let known = |n: &str| {
            self.multivectors.contains_key(n) || self.lifts.contains_key(n) || self.deforms.contains_key(n)
        };
        for l in self.lifts.values() {
            if !self.multivectors.contains_key(&l.of) {
                return Err(Error::Unresolved(l.of.clone()));
            }
        }
        for d in self.deforms.values() {
            if !known(&d.base) {
                return Err(located(d.line, Error::Unresolved(d.base.clone())));
            }
            for (_, x, y) in &d.terms {
                for f in [x, y] {
                    if !self.multivectors.contains_key(f) {
                        return Err(located(d.line, Error::Unresolved(f.clone())));
                    }
                }
            }
        }
        for e in &self.expects {
            if !known(&e.target) {
                return Err(located(e.line, Error::Unresolved(e.target.clone())));
            }
            if let ExpectKind::Constants { map: Some(m), .. } = &e.kind {
                if !self.maps.contains_key(m) {
                    return Err(located(e.line, Error::Unresolved(m.clone())));
                }
            }
        }
        Ok(())
    }
}

/// Collected output lines and the worst verdict seen.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub verdict: Option<Verdict>,
    pub failures: usize,
}

impl Report {
    pub fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn record(&mut self, v: &Verdict) {
        self.verdict = Some(match self.verdict.take() {
            None => v.clone(),
            Some(w) => w.worst(v.clone()),
        });
    }

    pub fn fail(&mut self, line: impl Into<String>) {
        self.failures += 1;
        self.say(line);
    }

    pub fn all_verified(&self) -> bool {
        self.failures == 0 && !self.verdict.as_ref().is_some_and(Verdict::is_nonzero)
    }

    /// 0 when everything verified, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_verified() {
            0
        } else {
            1
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        s
    }
}

/// Evaluates named objects of a document.
pub struct Session<'a> {
    pub doc: &'a Document,
    pub zt: ZeroTest,
    pub opts: DeformOptions,
    deformed: RefCell<HashMap<String, Deformation>>,
}

impl<'a> Session<'a> {
    pub fn new(doc: &'a Document, zt: ZeroTest, opts: DeformOptions) -> Session<'a> {
        Session {
            doc,
            zt,
            opts,
            deformed: RefCell::new(HashMap::new()),
        }
    }

    /// A named expression, or else the text parsed as an expression.
    pub fn expr(&self, name_or_text: &str) -> Result<Expr> {
        match self.doc.exprs.get(name_or_text) {
            Some(e) => Ok(e.clone()),
            None => Ok(parse(name_or_text)?),
        }
    }

    pub fn multivector(&self, name: &str) -> Result<MultiVector> {
        if let Some(m) = self.doc.multivectors.get(name) {
            return Ok(m.clone());
        }
        if let Some(l) = self.doc.lifts.get(name) {
            let src = self.multivector(&l.of)?;
            return match l.mode {
                LiftMode::Tangent if src.degree() == 2 => {
                    let p = PoissonTensor::check(src, &self.zt)?;
                    Ok(tangent_lift_poisson(&p, &self.zt)?.bivector().clone())
                }
                LiftMode::Tangent | LiftMode::Complete => complete_lift(&src),
                LiftMode::Vertical => vertical_lift(&src),
            };
        }
        if self.doc.deforms.contains_key(name) {
            return Ok(self.deformation(name)?.tensor.bivector().clone());
        }
        Err(Error::Unresolved(name.to_string()))
    }

    pub fn poisson(&self, name: &str) -> Result<PoissonTensor> {
        if self.doc.deforms.contains_key(name) {
            return Ok(self.deformation(name)?.tensor);
        }
        PoissonTensor::check(self.multivector(name)?, &self.zt)
    }

    pub fn map(&self, name: &str) -> Result<&LinearMap> {
        self.doc
            .maps
            .get(name)
            .ok_or_else(|| Error::Unresolved(name.to_string()))
    }

    pub fn spec(&self, name: &str) -> Result<DeformationSpec> {
        let d = self
            .doc
            .deforms
            .get(name)
            .ok_or_else(|| Error::Unresolved(name.to_string()))?;
        let base = self.poisson(&d.base)?;
        let terms = d
            .terms
            .iter()
            .map(|(k, x, y)| {
                Ok(DeformTerm::new(*k, self.multivector(x)?, self.multivector(y)?).named(x.clone(), y.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(DeformationSpec {
            base,
            lambda: d.lambda.clone(),
            casimir: d.casimir.clone(),
            terms,
        })
    }

    pub fn deformation(&self, name: &str) -> Result<Deformation> {
        if let Some(d) = self.deformed.borrow().get(name) {
            return Ok(d.clone());
        }
        let spec = self.spec(name)?;
        let built = match self.doc.deforms[name].construction {
            Construction::Auto => deform(&spec, self.opts, &self.zt)?,
            Construction::Cv => deform_cv(&spec, self.opts, &self.zt)?,
            Construction::Vv => deform_vv(&spec, self.opts, &self.zt)?,
            Construction::Mixed => deform_mixed(&spec, self.opts, &self.zt)?,
        };
        self.deformed.borrow_mut().insert(name.to_string(), built.clone());
        Ok(built)
    }

    /// Runs every expectation in document order.
    pub fn verify(&self) -> Result<Report> {
        let mut r = Report::default();
        for e in &self.doc.expects {
            self.check(e, &mut r)?;
        }
        Ok(r)
    }

    pub fn check(&self, e: &Expect, r: &mut Report) -> Result<()> {
        match &e.kind {
            ExpectKind::Matrix(rows) => self.check_matrix(&e.target, rows, r),
            ExpectKind::Casimirs(cs) => self.check_casimirs(&e.target, cs, r),
            ExpectKind::Jacobi(kind) => {
                let p = self.poisson(&e.target)?;
                r.record(p.jacobi());
                if p.jacobi().kind() == kind {
                    r.say(format!("Jacobi {}: {}", e.target, p.jacobi()));
                } else {
                    r.fail(format!("Jacobi {}: {} (expected {kind})", e.target, p.jacobi()));
                }
                Ok(())
            }
            ExpectKind::Constants {
                map,
                label,
                dim,
                table,
            } => self.check_constants(&e.target, map.as_deref(), label, *dim, table, r),
        }
    }

    fn check_matrix(&self, target: &str, rows: &[Vec<String>], r: &mut Report) -> Result<()> {
        let p = self.poisson(target)?;
        if let Some(d) = self.deformed.borrow().get(target) {
            r.say(format!("{target}: {}", d.route));
        }
        let got = p.bivector().matrix_entries()?;
        r.say(p.bivector().matrix_string()?.trim_end().to_string());
        r.record(p.jacobi());
        r.say(format!("Jacobi: {}", p.jacobi()));
        let names = p.chart().names();
        let n = got.len();
        if rows.len() != n || rows.iter().any(|row| row.len() != n) {
            r.fail(format!("matrix {target}: expected a {n}x{n} matrix"));
            return Ok(());
        }
        let mut diffs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if got[i][j] != rows[i][j] {
                    diffs.push(format!(
                        "({},{}): computed {}, expected {}",
                        names[i], names[j], got[i][j], rows[i][j]
                    ));
                }
            }
        }
        if diffs.is_empty() {
            r.say(format!("matrix {target}: matches expected"));
        } else {
            r.fail(format!("matrix {target}: MISMATCH at {}", diffs.join("; ")));
        }
        Ok(())
    }

    fn check_casimirs(&self, target: &str, cs: &[(String, Expr)], r: &mut Report) -> Result<()> {
        let p = self.poisson(target)?;
        let mut bad = Vec::new();
        for (text, c) in cs {
            let v = p.is_casimir(c, &self.zt)?;
            r.record(&v);
            if v.is_nonzero() {
                bad.push(format!("{text}: {v}"));
            }
        }
        let list: Vec<&str> = cs.iter().map(|(t, _)| t.as_str()).collect();
        if bad.is_empty() {
            r.say(format!("Casimirs {}: verified", list.join(", ")));
        } else {
            r.fail(format!("Casimirs {}: FAILED ({})", list.join(", "), bad.join("; ")));
        }
        Ok(())
    }

    fn check_constants(
        &self,
        target: &str,
        map: Option<&str>,
        label: &str,
        dim: usize,
        table: &[TableEntry],
        r: &mut Report,
    ) -> Result<()> {
        let mut p = self.poisson(target)?;
        if let Some(m) = map {
            p = push_poisson(&p, self.map(m)?, &self.zt)?;
        }
        let via = map.map(|m| format!(" via {m}")).unwrap_or_default();
        if p.chart().dim() != dim {
            r.fail(format!("{label}{via}: dimension {} does not match table dimension {dim}", p.chart().dim()));
            return Ok(());
        }
        let c = structure_constants(&p)?;
        if match_table(&c, table) {
            r.say(format!("{label}{via}: matches"));
            return Ok(());
        }
        let mut msg = format!("{label}{via}: MISMATCH");
        for m in table_mismatches(&c, table)? {
            let _ = write!(msg, "\n  {m}");
        }
        let _ = write!(msg, "\n  computed:");
        for l in c.to_string().lines() {
            let _ = write!(msg, "\n    {l}");
        }
        if let Some(j) = table_jacobi(dim, table)? {
            let _ = write!(msg, "\n  note: the table itself is not a Lie algebra ({j})");
        }
        r.fail(msg);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "\
[chart]
x1 x2 x3

[tensor pi]   # the base tensor
(2,3) : x1

[field X]
x3 : 1
[field Y]
(2) : x3

[lift piTM]
of = pi

[deform bad]
base = pi
term = CV X Y

[map swap]
e1 = x2
e2 = x1
e3 = x3

[expect matrix pi]
0 0 0
0 0 x1
0 -x1 0

[expect casimirs pi]
x1

[expect constants pi]
map = swap
label = A3,1
dim = 3
[e1, e3] = e2
";

    fn session(doc: &Document) -> Session<'_> {
        Session::new(doc, ZeroTest::default(), DeformOptions::default())
    }

    #[test]
    fn parses_and_verifies() {
        let doc = Document::parse(DOC).unwrap();
        assert_eq!(doc.multivectors["X"].listing(), "(3) : 1\n");
        let s = session(&doc);
        let r = s.verify().unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.text());
        assert!(r.text().contains("Casimirs x1: verified"));
        assert!(r.text().contains("A3,1 via swap: matches"));
        assert_eq!(s.multivector("piTM").unwrap().matrix_entries().unwrap()[4][2], "x1");
    }

    #[test]
    fn precondition_from_document() {
        let doc = Document::parse(DOC).unwrap();
        match session(&doc).deformation("bad") {
            Err(Error::Precondition(m)) => assert!(m.contains("[X,Y] != 0"), "{m}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_carry_lines() {
        let e = Document::parse("[chart]\nx1 x2\n[tensor p]\n(1,2) : x1 + * x2\n").unwrap_err();
        assert!(matches!(e, Error::Document { line: 4, .. }), "{e}");
        assert!(e.to_string().contains("byte"), "{e}");
        let e = Document::parse("[chart]\nx1 x2\n[deform d]\nbase = nope\n").unwrap_err();
        assert!(e.to_string().contains("nope"));
        let e = Document::parse("[chart]\nx1 x2\n[tensor p]\n(1,3) : x1\n").unwrap_err();
        assert!(matches!(e, Error::Document { line: 4, .. }));
        assert!(Document::parse("[tensor p]\n").is_err());
        let e = Document::parse("[chart]\nx1\n[expr a]\n1\n[expr a]\n2\n").unwrap_err();
        assert!(e.to_string().contains("twice"));
    }

    #[test]
    fn mismatched_table_is_reported() {
        let doc = Document::parse(&DOC.replace("[e1, e3] = e2", "[e1, e2] = e3")).unwrap();
        let r = session(&doc).verify().unwrap();
        assert_eq!(r.exit_code(), 1);
        assert!(r.text().contains("MISMATCH"), "{}", r.text());
    }
}
