//! Parsing, canonical simplification and the two-tier zero test.

use poisson_lift::symexpr::{parse, simplify, ZeroTest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zt = ZeroTest::default();

    let e = parse("(x1 + y1)^2 - y1*(2*x1 + y1)")?;
    println!("{e}  =>  {}", simplify(&e)?);
    println!("exact: {}", zt.is_zero(&(e - parse("x1^2")?))?);

    // Radicals fall back to sampling at dyadic points.
    let r = parse("sqrt(x3)^2 - x3")?;
    println!("{r}: {}", zt.is_zero(&r)?);

    let bad = parse("x1*x2 - x2*x3")?;
    println!("{bad}: {}", zt.is_zero(&bad)?);

    let d = parse("x2^3 / x1")?.diff("x1");
    println!("d/dx1 (x2^3/x1) = {}", simplify(&d)?);
    Ok(())
}
