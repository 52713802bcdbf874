//! Parse a problem document and verify its expectations, as the `verify`
//! subcommand does.

use poisson_lift::deform::DeformOptions;
use poisson_lift::document::{Document, Session};
use poisson_lift::fixtures;
use poisson_lift::symexpr::ZeroTest;

const DOC: &str = "\
# The tangent lift of x1 d2^d3 deformed by one vertical pair.
[chart]
x1 x2 x3

[tensor pi]
(2,3) : x1

[field D2]
(2) : 1

[field D3]
(3) : 1

[deform d]
base = pi
lambda = 1
casimir = x1
term = VV D2 D3

[expect jacobi d]
ProvedZero

[expect casimirs d]
x1
y1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = Document::parse(DOC)?;
    let session = Session::new(&doc, ZeroTest::default(), DeformOptions::default());
    let report = session.verify()?;
    print!("{}", report.text());
    println!("exit status: {}", report.exit_code());

    println!("\nbundled example 4:");
    let doc = fixtures::document("4")?;
    let report = Session::new(&doc, ZeroTest::default(), DeformOptions::default()).verify()?;
    print!("{}", report.text());
    Ok(())
}
