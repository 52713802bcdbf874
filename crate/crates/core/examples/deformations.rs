//! Deformations of the tangent lift by wedge products of lifted fields,
//! including a refused construction and its forced counterpart.

use poisson_lift::chart::Chart;
use poisson_lift::deform::{deform, DeformOptions, DeformTerm, DeformationSpec, PairKind};
use poisson_lift::multivec::MultiVector;
use poisson_lift::poisson::PoissonTensor;
use poisson_lift::symexpr::{parse, Rational, ZeroTest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zt = ZeroTest::default();
    let chart = Chart::standard(3);
    let base = PoissonTensor::verified(MultiVector::from_terms(&chart, 2, [(vec![1, 2], parse("x1")?)])?, &zt)?;
    let field = |a: &str, b: &str, c: &str| -> Result<MultiVector, Box<dyn std::error::Error>> {
        Ok(MultiVector::vector(&chart, vec![parse(a)?, parse(b)?, parse(c)?])?)
    };

    let spec = |terms: Vec<DeformTerm>| DeformationSpec {
        base: base.clone(),
        lambda: Rational::new(1.into(), 2.into()),
        casimir: parse("x1").unwrap(),
        terms,
    };

    let d2 = field("0", "1", "0")?;
    let d3 = field("0", "0", "1")?;
    let cases = [
        ("X_C ^ X_V", vec![DeformTerm::new(PairKind::CV, d2.clone(), d2.clone()).named("d2", "d2")]),
        ("X_V ^ Y_V", vec![DeformTerm::new(PairKind::VV, d2.clone(), d3.clone()).named("d2", "d3")]),
        (
            "X_C ^ Y_C + X_V ^ Y_V",
            vec![
                DeformTerm::new(PairKind::CC, d2.clone(), d3.clone()).named("d2", "d3"),
                DeformTerm::new(PairKind::VV, d2.clone(), d3.clone()).named("d2", "d3"),
            ],
        ),
    ];
    for (label, terms) in cases {
        let d = deform(&spec(terms), DeformOptions::default(), &zt)?;
        println!("{label}: {}  Jacobi {}", d.route, d.tensor.jacobi());
        println!("{}", d.tensor.bivector().matrix_string()?);
    }

    // X = x3 d2 and Y = x2 d3 preserve the base but do not commute.
    let bad = spec(vec![DeformTerm::new(PairKind::CV, field("0", "x3", "0")?, field("0", "0", "x2")?).named("X", "Y")]);
    match deform(&bad, DeformOptions::default(), &zt) {
        Ok(d) => println!("unexpectedly accepted: {}", d.route),
        Err(e) => println!("refused: {e}"),
    }
    let forced = deform(&bad, DeformOptions { debug_force: true }, &zt)?;
    println!("{}  Jacobi {}", forced.route, forced.tensor.jacobi());
    Ok(())
}
