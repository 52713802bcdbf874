//! Scalar expressions: parsing, printing, differentiation, canonical forms
//! and zero testing.

mod canonical;
mod expr;
mod parse;
mod poly;
mod print;
mod zero;

pub use canonical::{canonical, simplify};
pub use expr::{natural_cmp, Expr, Node, Rational};
pub use parse::{parse, ParseError};
pub use zero::{Verdict, ZeroTest};
