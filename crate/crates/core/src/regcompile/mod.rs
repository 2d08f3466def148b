//! Regular languages as regexes, automata and finite monoids, compiled to
//! recognizers of type `Str -o !Bool`.

mod dfa;
mod monoid;
mod regex;

pub use dfa::{dfa_counterexample, dfa_equiv, dfa_run, minimize, words_up_to, Dfa, DfaError};
pub use monoid::{compile, compile_dfa, transition_monoid, MonoidError, MonoidPresentation};
pub use regex::{regex_to_dfa, RegexError};
