//! Structure constants of linear Poisson tensors under linear changes of
//! coordinates.

use poisson_lift::changevar::{match_table, push_poisson, structure_constants, LinearMap, StructureConstants};
use poisson_lift::chart::Chart;
use poisson_lift::poisson::PoissonTensor;
use poisson_lift::symexpr::{parse, Rational, ZeroTest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zt = ZeroTest::default();
    let chart = Chart::standard(3);
    let one = Rational::from_integer(1.into());

    // Heisenberg algebra: [e1, e2] = e3.
    let heis = StructureConstants::new(3, &[(1, 2, 3, one.clone())])?;
    let pi = PoissonTensor::verified(heis.tensor(&chart)?, &zt)?;
    println!("tensor: {}", pi.bivector().listing().trim_end());

    let exprs = [parse("x1 + x2")?, parse("x2")?, parse("x3/2")?];
    let map = LinearMap::from_exprs(&chart, &exprs)?;
    let pushed = push_poisson(&pi, &map, &zt)?;
    println!("in new coordinates: {}", pushed.bivector().listing().trim_end());

    let c = structure_constants(&pushed)?;
    print!("constants:\n{c}");
    println!("agrees with change_basis: {}", c == heis.change_basis(&map)?);
    for k in [1, 2] {
        let scaled = [(1, 2, 3, Rational::from_integer(k.into()))];
        println!("matches [e1, e2] = {k} e3: {}", match_table(&c, &scaled));
    }
    Ok(())
}
