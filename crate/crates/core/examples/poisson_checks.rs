//! Jacobi checks, Poisson vector fields, Casimirs and the Lichnerowicz
//! differential.

use poisson_lift::chart::Chart;
use poisson_lift::multivec::MultiVector;
use poisson_lift::poisson::{check_jacobi, PoissonTensor};
use poisson_lift::symexpr::{parse, ZeroTest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zt = ZeroTest::default();
    let chart = Chart::standard(3);

    let pi = PoissonTensor::verified(MultiVector::from_terms(&chart, 2, [(vec![1, 2], parse("x1")?)])?, &zt)?;
    println!("pi = x1 d2^d3:\n{}", pi.bivector().matrix_string()?);

    let not_poisson = MultiVector::from_terms(&chart, 2, [(vec![0, 1], parse("x1")?), (vec![1, 2], parse("x2")?)])?;
    println!("x1 d1^d2 + x2 d2^d3: {}", check_jacobi(&not_poisson, &zt)?.jacobi());

    let x = MultiVector::vector(&chart, vec![parse("0")?, parse("x3")?, parse("-x2")?])?;
    println!("L_X pi for X = x3 d2 - x2 d3: {}", pi.is_poisson_vf(&x, &zt)?);

    for c in ["x1", "x1^2 + 3", "x2"] {
        println!("Casimir {c}: {}", pi.is_casimir(&parse(c)?, &zt)?);
    }

    let h = parse("x2*x3")?;
    println!("X_h for h = {h}: {}", pi.hamiltonian_vf(&h)?.listing().trim_end());
    let dd = pi.lichnerowicz(&pi.lichnerowicz(&x)?)?;
    println!("d_pi d_pi X: {}", dd.zero_verdict(&zt)?);
    Ok(())
}
