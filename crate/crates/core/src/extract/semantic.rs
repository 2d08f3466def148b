//! Automaton whose states are tuples of word-to-endomorphism tables, one per
//! use of the input string.

use std::collections::HashMap;
use std::sync::Arc;

use super::{decompose_iterator, decompose_with_fuel, truncated_iterator, verify_with, Decider, Decomposition, ExtractError, VerifyReport};
use crate::eval::DEFAULT_FUEL;
use crate::regcompile::Dfa;
use crate::semantics::{endo_of_term, interp_type, EndoPairTable, PairDomain, SemConfig, SemError};
use crate::truncate::truncate_type;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemanticOptions {
    pub sem: SemConfig,
    pub fuel: u64,
    /// Length bound of the exhaustive check run on the result; `None` skips it.
    pub verify: Option<usize>,
}

impl Default for SemanticOptions {
    fn default() -> Self {
        SemanticOptions { sem: SemConfig::default(), fuel: DEFAULT_FUEL, verify: Some(8) }
    }
}

#[derive(Clone, Debug)]
pub struct SemanticExtraction {
    pub dfa: Dfa,
    /// States reached before minimization.
    pub raw_states: usize,
    /// Shortest word reaching each raw state.
    pub witnesses: Vec<String>,
    /// Per coordinate: whether the pair domain was cut down to the step
    /// functions of the iterator.
    pub restricted: Vec<bool>,
    pub decomposition: Decomposition,
    pub report: Option<VerifyReport>,
}

pub fn extract_semantic(t: &crate::syntax::Term, opts: &SemanticOptions) -> Result<SemanticExtraction, ExtractError> {
    let decider = Decider::new(t, opts.fuel)?;
    let dec = decompose_with_fuel(&decider.term, opts.fuel)?;
    let cfg = &opts.sem;

    let explored = match explore(&dec, cfg, false) {
        Err(ExtractError::Sem(SemError::CapExceeded { .. })) if dec.n == 1 => explore(&dec, cfg, true)?,
        other => other?,
    };
    let Explored { delta, witnesses, restricted } = explored;
    let raw_states = witnesses.len();

    let accept = decider.decide_all(&witnesses)?;
    let raw = Dfa::new(0, accept, delta).expect("complete by construction");
    let dfa = raw.minimize();
    let report = match opts.verify {
        Some(len) => {
            let report = verify_with(&dfa, &decider, len)?;
            if !report.passed() {
                return Err(ExtractError::Verification(report));
            }
            Some(report)
        }
        None => None,
    };
    Ok(SemanticExtraction { dfa, raw_states, witnesses, restricted, decomposition: dec, report })
}

struct Explored {
    delta: Vec<[usize; 2]>,
    witnesses: Vec<String>,
    restricted: Vec<bool>,
}

/// Breadth-first search over state tuples. With `restrict`, the single
/// coordinate only tracks the pair of step functions of the iterator.
fn explore(dec: &Decomposition, cfg: &SemConfig, restrict: bool) -> Result<Explored, ExtractError> {
    let mut domains = Vec::with_capacity(dec.n);
    for sigma in &dec.sigmas {
        let tau = truncate_type(sigma).map_err(|e| SemError::Unsupported(e.to_string()))?;
        let set = interp_type(&tau, cfg)?;
        let domain = if restrict {
            let parts = truncated_iterator(&decompose_iterator(&dec.u)?);
            let g0 = endo_of_term(&parts.f0, &set, cfg)?;
            let g1 = endo_of_term(&parts.f1, &set, cfg)?;
            PairDomain::restricted(set, vec![[g0, g1]])
        } else {
            PairDomain::full(set, cfg.cap)?
        };
        domains.push(Arc::new(domain));
    }

    let cells: usize = domains.iter().map(|d| d.pairs.len() * d.set.size).sum::<usize>().max(1);
    let max_states = (cfg.cap / cells).max(1);

    let start: Vec<EndoPairTable> = domains.iter().map(|d| EndoPairTable::identity(d.clone())).collect();
    let mut index: HashMap<Vec<EndoPairTable>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut witnesses = vec![String::new()];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = [0; 2];
        for (c, slot) in row.iter_mut().enumerate() {
            let next: Vec<EndoPairTable> = states[i].iter().map(|tab| tab.step(c)).collect();
            *slot = match index.get(&next) {
                Some(&q) => q,
                None => {
                    if states.len() >= max_states {
                        return Err(SemError::CapExceeded {
                            what: "semantic state space".into(),
                            size: format!("more than {max_states} states"),
                            cap: cfg.cap,
                        }
                        .into());
                    }
                    let q = states.len();
                    index.insert(next.clone(), q);
                    states.push(next);
                    witnesses.push(format!("{}{}", witnesses[i], c));
                    q
                }
            };
        }
        delta.push(row);
        i += 1;
    }
    Ok(Explored { delta, witnesses, restricted: vec![restrict; dec.n] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::promote;
    use crate::regcompile::{compile_dfa, dfa_equiv, regex_to_dfa};
    use crate::semantics::ForallPolicy;
    use crate::syntax::parse_term;

    fn base_opts() -> SemanticOptions {
        SemanticOptions { sem: SemConfig::with_policy(ForallPolicy::InstantiateAtBase), ..SemanticOptions::default() }
    }

    #[test]
    fn constant_term() {
        let t = parse_term("\\!x:Str. !!(/\\a. \\y:a. \\z:a. y)").unwrap();
        let r = extract_semantic(&t, &SemanticOptions::default()).unwrap();
        assert_eq!(r.dfa.len(), 1);
        assert!(r.dfa.accept[0]);
    }

    #[test]
    fn quantifier_free_iteration_is_exact() {
        // iterates at a bare type variable and throws the result away
        let t = parse_term("\\!x:Str. !(let !d = x [a] !(\\y:a. y) !(\\y:a. y) in !(/\\b. \\p:b. \\q:b. q))").unwrap();
        let r = extract_semantic(&t, &SemanticOptions::default()).unwrap();
        assert_eq!(r.restricted, vec![false]);
        assert!(r.raw_states > 1);
        assert_eq!(r.dfa.len(), 1);
        assert!(!r.dfa.accept[0]);
    }

    #[test]
    fn endomorphism_typed_iteration_falls_back_to_step_functions() {
        let t = parse_term(
            "\\!x:Str. !(let !d = x [a -o a] !(\\f:a -o a. f) !(\\f:a -o a. \\y:a. y) in !(/\\b. \\p:b. \\q:b. p))",
        )
        .unwrap();
        let r = extract_semantic(&t, &SemanticOptions::default()).unwrap();
        assert_eq!(r.restricted, vec![true]);
        // identity until the first 1, constant afterwards
        assert_eq!(r.raw_states, 2);
        assert_eq!(r.dfa.len(), 1);
        assert!(r.dfa.accept[0]);
    }

    #[test]
    fn first_letter_one() {
        let ff = "(/\\a. \\p:a. \\q:a. q)";
        let tt = "(/\\a. \\p:a. \\q:a. p)";
        let t = parse_term(&format!("\\!x:Str. !(let !h = x [Bool] !(\\b:Bool. {ff}) !(\\b:Bool. {tt}) in !(h {ff}))"))
            .unwrap();
        // the first letter picks the outermost step function
        let r = extract_semantic(&t, &base_opts()).unwrap();
        assert_eq!(r.restricted, vec![true]);
        assert!(dfa_equiv(&r.dfa, &regex_to_dfa("1(0|1)*").unwrap()));
    }

    #[test]
    fn promoted_parity_under_base_policy() {
        let parity = Dfa::new(0, vec![true, false], vec![[0, 1], [1, 0]]).unwrap();
        let t = promote(&compile_dfa(&parity), 1, 1).unwrap();
        let r = extract_semantic(&t, &base_opts()).unwrap();
        assert!(r.report.as_ref().unwrap().passed());
        assert!(dfa_equiv(&r.dfa, &parity));
        assert!(matches!(
            extract_semantic(&t, &SemanticOptions::default()),
            Err(ExtractError::Sem(SemError::Unsupported(_)))
        ));
    }
}
