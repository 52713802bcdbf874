use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::canonical::RatFun;
use super::expr::{natural_cmp, Expr, Rational};
use crate::error::{Error, Result};

/// Outcome of a zero test.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// The canonical form is literally 0.
    ProvedZero,
    /// Every sampled point evaluated to zero within tolerance.
    ProbablyZero { samples: usize },
    /// A point where the expression is visibly nonzero.
    NonZero {
        witness: BTreeMap<String, Rational>,
        value: f64,
    },
}

impl Verdict {
    fn rank(&self) -> u8 {
        match self {
            Verdict::ProvedZero => 0,
            Verdict::ProbablyZero { .. } => 1,
            Verdict::NonZero { .. } => 2,
        }
    }

    /// The more pessimistic of two verdicts.
    pub fn worst(self, other: Verdict) -> Verdict {
        match (&self, &other) {
            (Verdict::ProbablyZero { samples: a }, Verdict::ProbablyZero { samples: b }) => {
                Verdict::ProbablyZero {
                    samples: *a.min(b),
                }
            }
            _ if other.rank() > self.rank() => other,
            _ => self,
        }
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, Verdict::NonZero { .. })
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::ProvedZero)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::ProvedZero => "ProvedZero",
            Verdict::ProbablyZero { .. } => "ProbablyZero",
            Verdict::NonZero { .. } => "NonZero",
        }
    }

    /// The witness coordinates in natural name order.
    pub fn witness(&self) -> Option<Vec<(&str, &Rational)>> {
        match self {
            Verdict::NonZero { witness, .. } => {
                let mut w: Vec<_> = witness.iter().map(|(k, v)| (k.as_str(), v)).collect();
                w.sort_by(|a, b| natural_cmp(a.0, b.0));
                Some(w)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ProvedZero => f.write_str("ProvedZero"),
            Verdict::ProbablyZero { samples } => write!(f, "ProbablyZero({samples})"),
            Verdict::NonZero { witness, value } if witness.is_empty() => {
                write!(f, "NonZero (constant value {value:e})")
            }
            Verdict::NonZero { value, .. } => {
                let pts: Vec<String> = self
                    .witness()
                    .unwrap()
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                write!(f, "NonZero at {{{}}} (value {value:e})", pts.join(", "))
            }
        }
    }
}

/// Zero-test configuration: seed, number of sample points and relative
/// tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroTest {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            seed: 0x5eed,
            samples: 32,
            tol: 1e-9,
        }
    }
}

const GRID: i64 = 1 << 16;

/// A uniform coordinate in [1/2, 3/2] on a dyadic grid, so that witnesses are
/// exact rationals.
fn sample_coord(rng: &mut impl Rng) -> Rational {
    let k: i64 = rng.gen_range(0..=GRID);
    Rational::new(BigInt::from(GRID + 2 * k), BigInt::from(2 * GRID))
}

fn sample_point(
    vars: &[String],
    rng: &mut impl Rng,
) -> (BTreeMap<String, Rational>, HashMap<String, f64>) {
    let exact: BTreeMap<String, Rational> =
        vars.iter().map(|v| (v.clone(), sample_coord(rng))).collect();
    let float = exact
        .iter()
        .map(|(k, v)| (k.clone(), v.to_f64().unwrap()))
        .collect();
    (exact, float)
}

impl ZeroTest {
    pub fn with_seed(seed: u64) -> ZeroTest {
        ZeroTest {
            seed,
            ..ZeroTest::default()
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Decides whether `e` vanishes identically, with a fresh generator
    /// seeded from the configuration.
    pub fn is_zero(&self, e: &Expr) -> Result<Verdict> {
        self.is_zero_with(e, &mut self.rng())
    }

    pub fn is_zero_with(&self, e: &Expr, rng: &mut impl Rng) -> Result<Verdict> {
        if e.is_zero() {
            return Ok(Verdict::ProvedZero);
        }
        if e.has_sqrt() {
            return self.sampled(e, rng);
        }
        let vars: Vec<String> = e.free_vars().into_iter().collect();
        let rf = RatFun::of(e)?;
        if rf.is_zero() {
            return Ok(Verdict::ProvedZero);
        }
        self.exact_witness(e, &rf, &vars, rng)
    }

    /// Randomized tier only: evaluation at `samples` points in the box.
    pub fn sampled(&self, e: &Expr, rng: &mut impl Rng) -> Result<Verdict> {
        let vars: Vec<String> = e.free_vars().into_iter().collect();
        let budget = 10 * self.samples;
        let mut good = 0;
        for _ in 0..budget {
            if good == self.samples {
                break;
            }
            let (exact, float) = sample_point(&vars, rng);
            let mut scale = 0.0;
            match e.eval_tracked(&float, &mut scale) {
                Ok(v) => {
                    if !self.within(v, scale) {
                        return Ok(Verdict::NonZero {
                            witness: exact,
                            value: v,
                        });
                    }
                    good += 1;
                }
                Err(Error::DivisionByZero | Error::NegativeSqrt(_)) => {}
                Err(other) => return Err(other),
            }
        }
        if good == self.samples {
            Ok(Verdict::ProbablyZero { samples: good })
        } else {
            Err(Error::Indeterminate { attempts: budget })
        }
    }

    fn within(&self, v: f64, scale: f64) -> bool {
        v.is_finite() && v.abs() < self.tol * (1.0 + scale)
    }

    /// For a rational function known to be nonzero, finds a sample point where
    /// the float value also exceeds the tolerance.
    fn exact_witness(
        &self,
        e: &Expr,
        rf: &RatFun,
        vars: &[String],
        rng: &mut impl Rng,
    ) -> Result<Verdict> {
        let budget = 10 * self.samples.max(1);
        let mut fallback = None;
        for _ in 0..budget {
            let (exact, float) = sample_point(vars, rng);
            let lookup: HashMap<String, Rational> =
                exact.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            let Some(value) = rf.eval_exact(&lookup) else {
                continue;
            };
            if value.is_zero() {
                continue;
            }
            let mut scale = 0.0;
            let v = match e.eval_tracked(&float, &mut scale) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if !self.within(v, scale) {
                return Ok(Verdict::NonZero {
                    witness: exact,
                    value: v,
                });
            }
            fallback.get_or_insert((exact, value.to_f64().unwrap_or(f64::NAN)));
        }
        match fallback {
            Some((witness, value)) => Ok(Verdict::NonZero { witness, value }),
            None => Err(Error::Indeterminate { attempts: budget }),
        }
    }

    /// Aggregated verdict over several expressions, sharing one generator.
    pub fn all_zero<'a, I>(&self, exprs: I) -> Result<Verdict>
    where
        I: IntoIterator<Item = &'a Expr>,
    {
        self.all_zero_in(exprs, true)
    }

    /// Aggregated verdict for an identity. When the data it was derived from
    /// left the rational fragment (`rational == false`) only the randomized
    /// tier is used, and an identity with no surviving terms is still
    /// sampled as the constant 0.
    pub fn all_zero_in<'a, I>(&self, exprs: I, rational: bool) -> Result<Verdict>
    where
        I: IntoIterator<Item = &'a Expr>,
    {
        let mut rng = self.rng();
        let mut acc = Verdict::ProvedZero;
        let mut any = false;
        for e in exprs {
            any = true;
            let v = if rational {
                self.is_zero_with(e, &mut rng)?
            } else {
                self.sampled(e, &mut rng)?
            };
            if v.is_nonzero() {
                return Ok(v);
            }
            acc = acc.worst(v);
        }
        if !rational && !any {
            acc = self.sampled(&Expr::zero(), &mut rng)?;
        }
        Ok(acc)
    }

    pub fn equal(&self, a: &Expr, b: &Expr) -> Result<Verdict> {
        self.is_zero(&(a - b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn verdict(s: &str) -> Verdict {
        ZeroTest::default().is_zero(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn proved_zero_on_rational_fragment() {
        assert_eq!(verdict("(x1+x2)^2 - x1^2 - 2*x1*x2 - x2^2"), Verdict::ProvedZero);
        assert_eq!(verdict("x1 - x1"), Verdict::ProvedZero);
    }

    #[test]
    fn probably_zero_with_roots() {
        assert_eq!(
            verdict("sqrt(x3)*sqrt(x3) - x3"),
            Verdict::ProbablyZero { samples: 32 }
        );
    }

    #[test]
    fn nonzero_witness_reevaluates_above_tolerance() {
        let e = parse("x1*x2 - x2").unwrap();
        let v = ZeroTest::default().is_zero(&e).unwrap();
        let Verdict::NonZero { witness, .. } = &v else {
            panic!("expected NonZero, got {v}");
        };
        let pt: HashMap<String, f64> = witness
            .iter()
            .map(|(k, v)| (k.clone(), v.to_f64().unwrap()))
            .collect();
        assert!(e.eval(&pt).unwrap().abs() > 1e-9);
        for c in witness.values() {
            assert!(*c >= Rational::new(1.into(), 2.into()));
            assert!(*c <= Rational::new(3.into(), 2.into()));
        }
    }

    #[test]
    fn root_expressions_can_be_nonzero() {
        assert!(verdict("sqrt(x3) - x3").is_nonzero());
    }

    #[test]
    fn persistent_domain_errors_are_indeterminate() {
        let e = parse("sqrt(-x1)").unwrap();
        assert!(matches!(
            ZeroTest::default().is_zero(&e),
            Err(Error::Indeterminate { attempts: 320 })
        ));
    }

    #[test]
    fn aggregation_prefers_pessimism() {
        let p = Verdict::ProbablyZero { samples: 32 };
        assert_eq!(Verdict::ProvedZero.worst(p.clone()), p);
        let n = verdict("x1");
        assert!(p.worst(n).is_nonzero());
    }
}
