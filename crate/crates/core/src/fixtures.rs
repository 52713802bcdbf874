//! Bundled problem documents for the worked examples.

use crate::document::Document;
use crate::error::{Error, Result};

/// The base tensor `x1 d2^d3`, its tangent lift and their Lie algebras.
pub const BASE: &str = include_str!("../fixtures/base.txt");

/// Worked deformation examples 1 to 5.
pub const EXAMPLES: [&str; 5] = [
    include_str!("../fixtures/example1.txt"),
    include_str!("../fixtures/example2.txt"),
    include_str!("../fixtures/example3.txt"),
    include_str!("../fixtures/example4.txt"),
    include_str!("../fixtures/example5.txt"),
];

/// Source text by name: `base` or `1`..`5`.
pub fn source(name: &str) -> Result<&'static str> {
    match name {
        "base" | "0" => Ok(BASE),
        _ => name
            .parse::<usize>()
            .ok()
            .and_then(|n| n.checked_sub(1))
            .and_then(|i| EXAMPLES.get(i).copied())
            .ok_or_else(|| Error::Unresolved(format!("example {name}"))),
    }
}

pub fn document(name: &str) -> Result<Document> {
    Document::parse(source(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        for n in ["base", "1", "2", "3", "4", "5"] {
            document(n).unwrap_or_else(|e| panic!("fixture {n}: {e}"));
        }
        assert!(document("6").is_err());
    }
}
