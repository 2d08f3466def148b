//! Terms, types, concrete syntax, substitution and depth analysis.

use std::collections::BTreeSet;
use std::sync::Arc;

mod alpha;
mod depth;
pub mod named;
mod parse;
mod print;
mod subst;
mod term;
mod types;

pub use alpha::{alpha_eq, type_alpha_eq};
pub use depth::{
    check_stratification, depth_map, erase_annotations, split_occurrences, OccurrencePath,
    StratificationViolation,
};
pub use parse::{parse_term, parse_type, ParseError};
pub use print::{print_term, print_type};
pub use subst::{subst_term, subst_type, subst_type_in_term};
pub use term::Term;
pub use types::{Type, TypeClass};

pub type Name = Arc<str>;

/// Type-variable name used for an annotation left for the checker to infer.
pub const HOLE: &str = "_";

/// A variant of `base` that does not occur in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand.as_str()))
        .map(Name::from)
        .expect("unbounded counter")
}
