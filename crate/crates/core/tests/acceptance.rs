//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use poisson_lift::chart::Chart;
use poisson_lift::deform::{
    deform_mixed, pair_tensor_cv, DeformOptions, DeformTerm, DeformationSpec, PairKind,
};
use poisson_lift::document::{Document, ExpectKind, Report, Session};
use poisson_lift::fixtures;
use poisson_lift::lift::{complete_lift, fiber_linear, pullback, tangent_lift_poisson, vertical_lift};
use poisson_lift::multivec::MultiVector;
use poisson_lift::poisson::{check_jacobi, PoissonTensor};
use poisson_lift::random;
use poisson_lift::symexpr::{parse, Expr, Rational, Verdict};
use poisson_lift::Error;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, ok: String) -> Outcome {
    if problems.is_empty() {
        Outcome { pass: true, detail: ok }
    } else {
        Outcome {
            pass: false,
            detail: problems.join("; "),
        }
    }
}

fn docs() -> Vec<(String, Document)> {
    ["base", "1", "2", "3", "4", "5"]
        .iter()
        .map(|n| (n.to_string(), fixtures::document(n).unwrap()))
        .collect()
}

fn session(doc: &Document) -> Session<'_> {
    Session::new(doc, zt(), DeformOptions::default())
}

fn base_tensor() -> PoissonTensor {
    let b = MultiVector::from_terms(&Chart::standard(3), 2, [(vec![1, 2], parse("x1").unwrap())]).unwrap();
    PoissonTensor::verified(b, &zt()).unwrap()
}

fn example_matrices() -> Outcome {
    let mut problems = Vec::new();
    for n in 1..=5 {
        let doc = fixtures::document(&n.to_string()).unwrap();
        let s = session(&doc);
        for e in doc.expects.iter().filter(|e| matches!(e.kind, ExpectKind::Matrix(_))) {
            let mut r = Report::default();
            s.check(e, &mut r).unwrap();
            if r.failures > 0 {
                problems.extend(r.lines.iter().filter(|l| l.contains("MISMATCH")).cloned());
            }
        }
    }
    outcome(problems, "all five matrices match".into())
}

fn base_lift() -> Outcome {
    let doc = fixtures::document("base").unwrap();
    let s = session(&doc);
    let mut problems = Vec::new();
    for e in doc.expects.iter().filter(|e| e.target == "piTM" && matches!(e.kind, ExpectKind::Matrix(_))) {
        let mut r = Report::default();
        s.check(e, &mut r).unwrap();
        if r.failures > 0 {
            problems.push(r.text());
        }
    }
    let t = tangent_lift_poisson(&base_tensor(), &zt()).unwrap();
    for c in ["x1", "y1"] {
        let v = t.is_casimir(&parse(c).unwrap(), &zt()).unwrap();
        if v != Verdict::ProvedZero {
            problems.push(format!("Casimir {c}: {v}"));
        }
    }
    outcome(problems, "matrix matches; x1, y1 ProvedZero".into())
}

fn expected_jacobi(v: &Verdict, irrational: bool) -> bool {
    match v {
        Verdict::ProvedZero => !irrational,
        Verdict::ProbablyZero { samples } => irrational && *samples >= 32,
        Verdict::NonZero { .. } => false,
    }
}

fn jacobi_verification() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for (name, doc) in docs() {
        let s = session(&doc);
        for (dname, decl) in &doc.deforms {
            let spec = s.spec(dname).unwrap();
            let irrational = spec.terms.iter().any(|t| !t.x.is_rational() || !t.y.is_rational());
            match s.deformation(dname) {
                Ok(d) => {
                    let v = check_jacobi(d.tensor.bivector(), &zt()).unwrap();
                    checked += 1;
                    if !expected_jacobi(v.jacobi(), irrational) {
                        problems.push(format!("{name}/{dname}: {}", v.jacobi()));
                    }
                }
                Err(e) => problems.push(format!("{name}/{dname} (line {}): {e}", decl.line)),
            }
            // X_C ^ X_V for every field of the example.
            for t in &spec.terms {
                for f in [&t.x, &t.y] {
                    let p = pair_tensor_cv(f, &zt()).unwrap();
                    checked += 1;
                    if !expected_jacobi(p.jacobi(), !f.is_rational()) {
                        problems.push(format!("{name}: X_C^X_V: {}", p.jacobi()));
                    }
                }
            }
        }
    }
    outcome(problems, format!("{checked} constructed tensors verified"))
}

fn casimir_suites() -> Outcome {
    let suites: [(&str, &str, &[&str]); 3] = [
        ("5", "ex5", &["x1", "x3", "y1", "x2*y1 + x3*y3 - x1*y2"]),
        ("3", "ex3", &["x1", "x2^2 + 2*y1*x1"]),
        ("2", "ex2", &["x1", "y1 - x2"]),
    ];
    let mut problems = Vec::new();
    for (n, target, cs) in suites {
        let doc = fixtures::document(n).unwrap();
        let p = session(&doc).poisson(target).unwrap();
        for c in cs {
            let v = p.is_casimir(&parse(c).unwrap(), &zt()).unwrap();
            if v != Verdict::ProvedZero {
                problems.push(format!("{target}: {c}: {v}"));
            }
        }
    }
    outcome(problems, "all Casimirs ProvedZero".into())
}

fn lie_algebras() -> Outcome {
    let mut problems = Vec::new();
    let mut matched = Vec::new();
    for (_, doc) in docs() {
        let s = session(&doc);
        for e in &doc.expects {
            let ExpectKind::Constants { label, .. } = &e.kind else {
                continue;
            };
            let mut r = Report::default();
            s.check(e, &mut r).unwrap();
            if r.failures > 0 {
                problems.push(r.text().trim_end().replace('\n', " |"));
            } else {
                matched.push(label.clone());
            }
        }
    }
    if !problems.is_empty() {
        problems.insert(0, format!("matched {}", matched.join(", ")));
    }
    outcome(problems, format!("matched {}", matched.join(", ")))
}

const TRIALS: usize = 100;

fn count_nonzero(label: &str, problems: &mut Vec<String>, v: Verdict) {
    if v.is_nonzero() {
        problems.push(format!("{label}: {v}"));
    }
}

fn axiom_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut problems = Vec::new();
    let z = zt();
    for _ in 0..TRIALS {
        let chart = Chart::standard(rng.gen_range(2..=4));
        let mv = |rng: &mut ChaCha8Rng| {
            let deg = rng.gen_range(0..=2);
            random::multivector(rng, &chart, deg, 2).unwrap()
        };
        let (p, q, r) = (mv(&mut rng), mv(&mut rng), mv(&mut rng));
        count_nonzero("antisymmetry", &mut problems, antisymmetry(&p, &q).zero_verdict(&z).unwrap());
        count_nonzero("leibniz", &mut problems, leibniz(&p, &q, &r).zero_verdict(&z).unwrap());
        count_nonzero("jacobi", &mut problems, jacobi(&p, &q, &r).zero_verdict(&z).unwrap());
        count_nonzero("wedge", &mut problems, wedge_commutativity(&p, &q).zero_verdict(&z).unwrap());
        let fields: Vec<MultiVector> = (0..4)
            .map(|_| random::multivector(&mut rng, &chart, 1, 2).unwrap())
            .collect();
        let e = wedge_expansion(&fields[0], &fields[1], &fields[2], &fields[3]);
        count_nonzero("expansion", &mut problems, e.zero_verdict(&z).unwrap());
    }
    outcome(problems, format!("5 x {TRIALS} trials, no NonZero"))
}

fn lift_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut problems = Vec::new();
    let z = zt();
    let base = base_tensor();
    let base_tangent = tangent_lift_poisson(&base, &z).unwrap();
    let chart = Chart::standard(3);
    let xs = chart.vars();
    for _ in 0..TRIALS {
        // Commutator relations for multivectors of degree 1..2.
        let (dx, dy) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let x = random::multivector(&mut rng, &chart, dx, 2).unwrap();
        let y = random::multivector(&mut rng, &chart, dy, 2).unwrap();
        for m in lift_commutators(&x, &y) {
            count_nonzero("commutators", &mut problems, m.zero_verdict(&z).unwrap());
        }

        // Lifted Poisson fields are Poisson for the tangent tensor.
        let f = random::poisson_field(&mut rng);
        for l in [complete_lift(&f).unwrap(), vertical_lift(&f).unwrap()] {
            count_nonzero("lifted field", &mut problems, base_tangent.is_poisson_vf(&l, &z).unwrap());
        }

        // Bracket rules on a random linear tensor.
        let pi = PoissonTensor::verified(random::linear_poisson(&mut rng, 3).unwrap(), &z).unwrap();
        let t = tangent_lift_poisson(&pi, &z).unwrap();
        let g = random::polynomial(&mut rng, &xs, 2, 3);
        let h = random::polynomial(&mut rng, &xs, 2, 3);
        let rules = bracket_rules(&pi, &t, &g, &h);
        count_nonzero("bracket rules", &mut problems, z.all_zero(&rules).unwrap());

        // Casimirs of x1 d2^d3 survive a CV deformation by a field fixing them.
        let xf = random::poisson_field_preserving_x1(&mut rng);
        let c = random::polynomial(&mut rng, &xs[..1], 2, 2);
        let spec = DeformationSpec {
            base: base.clone(),
            lambda: Rational::from_integer(rng.gen_range(1i64..=3).into()),
            casimir: c.clone(),
            terms: vec![DeformTerm::new(PairKind::CV, xf.clone(), xf)],
        };
        match poisson_lift::deform::deform(&spec, DeformOptions::default(), &z) {
            Ok(d) => {
                let cas = random::polynomial(&mut rng, &xs[..1], 3, 2);
                for lifted in [pullback(&chart, &cas).unwrap(), fiber_linear(&chart, &cas).unwrap()] {
                    count_nonzero("casimir", &mut problems, d.tensor.is_casimir(&lifted.realized, &z).unwrap());
                }
            }
            Err(e) => problems.push(format!("casimir deformation: {e}")),
        }

        // The vertical lift intertwines the two differentials.
        let deg = rng.gen_range(0..=2);
        let p = random::multivector(&mut rng, &chart, deg, 2).unwrap();
        count_nonzero("vertical", &mut problems, vertical_intertwines(&pi, &t, &p).zero_verdict(&z).unwrap());
    }
    outcome(problems, format!("5 x {TRIALS} trials, no NonZero"))
}

fn negative_controls() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let z = zt();
    let mut problems = Vec::new();
    let spec_of = |x: MultiVector, y: MultiVector| DeformationSpec {
        base: base_tensor(),
        lambda: Rational::from_integer(1.into()),
        casimir: Expr::one(),
        terms: vec![DeformTerm::new(PairKind::CV, x, y)],
    };
    let mut refused = 0;
    let mut witness = None;
    for i in 0..20 {
        let (x, y) = random::noncommuting_pair(&mut rng);
        let spec = spec_of(x, y);
        match deform_mixed(&spec, DeformOptions::default(), &z) {
            Err(Error::Precondition(m)) if m.contains("[X,Y] != 0") => refused += 1,
            other => problems.push(format!("instance {i}: expected a precondition error, got {:?}", other.map(|d| d.route))),
        }
        if witness.is_none() {
            let forced = deform_mixed(&spec, DeformOptions { debug_force: true }, &z).unwrap();
            if forced.tensor.jacobi().is_nonzero() {
                let again = deform_mixed(&spec, DeformOptions { debug_force: true }, &z).unwrap();
                if again.tensor.jacobi() != forced.tensor.jacobi() {
                    problems.push("forced witness is not reproducible".into());
                }
                witness = Some((i, forced.tensor.jacobi().clone()));
            }
        }
    }
    if witness.is_none() {
        problems.push("no forced instance produced a NonZero Jacobi verdict".into());
    }
    let detail = match witness {
        Some((i, v)) => format!("{refused}/20 refused; forced instance {i}: {v}"),
        None => format!("{refused}/20 refused"),
    };
    outcome(problems, detail)
}

fn differential_squares() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let z = zt();
    let mut problems = Vec::new();
    for i in 0..20 {
        let dim = rng.gen_range(3..=4);
        let pi = PoissonTensor::verified(random::linear_poisson(&mut rng, dim).unwrap(), &z).unwrap();
        let deg = rng.gen_range(0..=2);
        let p = random::multivector(&mut rng, pi.chart(), deg, 3).unwrap();
        let dd = pi.lichnerowicz(&pi.lichnerowicz(&p).unwrap()).unwrap();
        count_nonzero(&format!("trial {i}"), &mut problems, dd.zero_verdict(&z).unwrap());
    }
    outcome(problems, "20 trials, no NonZero".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example matrices", example_matrices),
        ("base lift", base_lift),
        ("Jacobi verification", jacobi_verification),
        ("Casimir suites", casimir_suites),
        ("Lie algebra identification", lie_algebras),
        ("Schouten axioms", axiom_suite),
        ("lift properties", lift_suite),
        ("negative controls", negative_controls),
        ("differential squares to zero", differential_squares),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
            ),
        });
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {}: {} ({:.1?}) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
