//! Complete and vertical lifts, the tangent Poisson tensor and its lifted
//! Casimirs.

use poisson_lift::chart::Chart;
use poisson_lift::lift::{complete_lift, lifted_casimirs, tangent_lift_poisson, vertical_lift};
use poisson_lift::multivec::MultiVector;
use poisson_lift::poisson::PoissonTensor;
use poisson_lift::symexpr::{parse, ZeroTest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zt = ZeroTest::default();
    let chart = Chart::standard(3);
    let pi = PoissonTensor::verified(MultiVector::from_terms(&chart, 2, [(vec![1, 2], parse("x1")?)])?, &zt)?;

    let lifted = tangent_lift_poisson(&pi, &zt)?;
    println!("tangent lift ({}):\n{}", lifted.jacobi(), lifted.bivector().matrix_string()?);

    let x = MultiVector::vector(&chart, vec![parse("x1")?, parse("x2^2")?, parse("x3 - 2*x2*x3")?])?;
    println!("X:\n{}", x.listing());
    println!("complete lift:\n{}", complete_lift(&x)?.listing());
    println!("vertical lift:\n{}", vertical_lift(&x)?.listing());
    println!("L_X pi: {}", pi.is_poisson_vf(&x, &zt)?);
    for l in [complete_lift(&x)?, vertical_lift(&x)?] {
        println!("lifted field preserves the tangent lift: {}", lifted.is_poisson_vf(&l, &zt)?);
    }

    for (f, v) in lifted_casimirs(&pi, &[parse("x1")?], &zt)? {
        println!("{:?} of {}: {} is a Casimir: {v}", f.kind, f.base, f.realized);
    }
    Ok(())
}
