//! Graded antisymmetry, Leibniz and Jacobi for the Schouten bracket on
//! random multivectors.

use poisson_lift::chart::Chart;
use poisson_lift::random;
use poisson_lift::symexpr::{Expr, ZeroTest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zt = ZeroTest::default();
    let chart = Chart::standard(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..5 {
        let pick = |rng: &mut ChaCha8Rng| {
            let deg = rng.gen_range(1..=2);
            random::multivector(rng, &chart, deg, 2)
        };
        let (p, q, r) = (pick(&mut rng)?, pick(&mut rng)?, pick(&mut rng)?);
        let (a, b, c) = (p.degree() as i64, q.degree() as i64, r.degree() as i64);

        // [P,Q] = -(-1)^{(a-1)(b-1)} [Q,P]
        let s = if (a - 1) * (b - 1) % 2 == 0 { 1 } else { -1 };
        let anti = p.schouten(&q)?.add(&q.schouten(&p)?.scale(&Expr::int(s)))?;

        // (-1)^{(a-1)(c-1)} [P,[Q,R]] + cyclic = 0
        let sign = |x: i64, y: i64| Expr::int(if (x - 1) * (y - 1) % 2 == 0 { 1 } else { -1 });
        let jac = p
            .schouten(&q.schouten(&r)?)?
            .scale(&sign(a, c))
            .add(&q.schouten(&r.schouten(&p)?)?.scale(&sign(b, a)))?
            .add(&r.schouten(&p.schouten(&q)?)?.scale(&sign(c, b)))?;

        println!(
            "trial {trial}: degrees ({a},{b},{c})  antisymmetry {}  Jacobi {}",
            anti.zero_verdict(&zt)?,
            jac.zero_verdict(&zt)?
        );
    }
    Ok(())
}
