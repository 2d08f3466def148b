//! Observation-table learning against the term as membership oracle.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Decider, ExtractError};
use crate::eval::DEFAULT_FUEL;
use crate::regcompile::{words_up_to, Dfa};
use crate::syntax::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LstarOptions {
    /// Every word up to this length is checked against each hypothesis.
    pub max_len: usize,
    pub seed: u64,
    /// Random words of length up to `2 * max_len` checked after the
    /// exhaustive pass.
    pub samples: usize,
    pub fuel: u64,
}

impl Default for LstarOptions {
    fn default() -> Self {
        LstarOptions { max_len: 10, seed: 0, samples: 256, fuel: DEFAULT_FUEL }
    }
}

struct Oracle {
    decider: Decider,
    cache: HashMap<String, bool>,
}

impl Oracle {
    fn fill<I: IntoIterator<Item = String>>(&mut self, words: I) -> Result<(), ExtractError> {
        let mut missing: Vec<String> = words.into_iter().filter(|w| !self.cache.contains_key(w)).collect();
        missing.sort();
        missing.dedup();
        let answers = self.decider.decide_all(&missing)?;
        self.cache.extend(missing.into_iter().zip(answers));
        Ok(())
    }

    fn get(&self, w: &str) -> bool {
        self.cache[w]
    }
}

const LETTERS: [&str; 2] = ["0", "1"];

pub fn extract_lstar(t: &Term, opts: &LstarOptions) -> Result<Dfa, ExtractError> {
    let mut oracle = Oracle { decider: Decider::new(t, opts.fuel)?, cache: HashMap::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples: Vec<String> = (0..opts.samples)
        .map(|_| {
            let len = rng.gen_range(0..=2 * opts.max_len);
            (0..len).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect()
        })
        .collect();
    let mut tests: Vec<String> = words_up_to(opts.max_len).collect();
    tests.extend(samples);

    let mut prefixes = vec![String::new()];
    let mut suffixes = vec![String::new()];
    loop {
        close_table(&mut oracle, &mut prefixes, &mut suffixes)?;
        let hyp = hypothesis(&oracle, &prefixes, &suffixes);
        oracle.fill(tests.iter().cloned())?;
        match tests.iter().find(|w| hyp.run(w) != oracle.get(w)) {
            None => return Ok(hyp.minimize()),
            Some(cex) => {
                for i in 0..=cex.len() {
                    let s = cex[i..].to_string();
                    if !suffixes.contains(&s) {
                        suffixes.push(s);
                    }
                }
            }
        }
    }
}

fn row(oracle: &Oracle, s: &str, suffixes: &[String]) -> Vec<bool> {
    suffixes.iter().map(|e| oracle.get(&format!("{s}{e}"))).collect()
}

/// Extends the table until it is closed and consistent.
fn close_table(oracle: &mut Oracle, prefixes: &mut Vec<String>, suffixes: &mut Vec<String>) -> Result<(), ExtractError> {
    'outer: loop {
        let queries: Vec<String> = prefixes
            .iter()
            .flat_map(|s| std::iter::once(s.clone()).chain(LETTERS.iter().map(move |a| format!("{s}{a}"))))
            .flat_map(|p| suffixes.iter().map(move |e| format!("{p}{e}")))
            .collect();
        oracle.fill(queries)?;

        let rows: Vec<Vec<bool>> = prefixes.iter().map(|s| row(oracle, s, suffixes)).collect();
        for s in prefixes.iter() {
            for a in LETTERS {
                let sa = format!("{s}{a}");
                if !rows.contains(&row(oracle, &sa, suffixes)) {
                    prefixes.push(sa);
                    continue 'outer;
                }
            }
        }
        for i in 0..prefixes.len() {
            for j in i + 1..prefixes.len() {
                if rows[i] != rows[j] {
                    continue;
                }
                for a in LETTERS {
                    for e in suffixes.iter() {
                        let l = oracle.get(&format!("{}{a}{e}", prefixes[i]));
                        let r = oracle.get(&format!("{}{a}{e}", prefixes[j]));
                        if l != r {
                            let new = format!("{a}{e}");
                            suffixes.push(new);
                            continue 'outer;
                        }
                    }
                }
            }
        }
        return Ok(());
    }
}

fn hypothesis(oracle: &Oracle, prefixes: &[String], suffixes: &[String]) -> Dfa {
    let mut reps: Vec<(Vec<bool>, &str)> = Vec::new();
    for s in prefixes {
        let r = row(oracle, s, suffixes);
        if !reps.iter().any(|(x, _)| *x == r) {
            reps.push((r, s));
        }
    }
    let state_of = |r: &Vec<bool>| reps.iter().position(|(x, _)| x == r).expect("closed table");
    let delta = reps
        .iter()
        .map(|(_, s)| LETTERS.map(|a| state_of(&row(oracle, &format!("{s}{a}"), suffixes))))
        .collect::<Vec<_>>();
    // suffixes[0] is the empty word
    let accept = reps.iter().map(|(r, _)| r[0]).collect();
    Dfa::new(0, accept, delta).expect("complete by construction")
}
