use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

/// Complete deterministic automaton over `{0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub states: Vec<String>,
    pub start: usize,
    pub accept: Vec<bool>,
    /// `delta[q][c]` for letter `c` in `{0,1}`.
    pub delta: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DfaError {
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("malformed json: {0}")]
    Json(String),
}

fn letter(c: char) -> Option<usize> {
    match c {
        '0' => Some(0),
        '1' => Some(1),
        _ => None,
    }
}

impl Dfa {
    /// Automaton on states `0..n` named `q0, q1, ...`.
    pub fn new(start: usize, accept: Vec<bool>, delta: Vec<[usize; 2]>) -> Result<Dfa, DfaError> {
        let d = Dfa { states: (0..accept.len()).map(|i| format!("q{i}")).collect(), start, accept, delta };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), DfaError> {
        let n = self.states.len();
        if n == 0 {
            return Err(DfaError::Invalid("no states".into()));
        }
        if self.accept.len() != n || self.delta.len() != n {
            return Err(DfaError::Invalid("state tables have inconsistent sizes".into()));
        }
        if self.start >= n {
            return Err(DfaError::Invalid("start state out of range".into()));
        }
        if self.delta.iter().flatten().any(|&q| q >= n) {
            return Err(DfaError::Invalid("transition target out of range".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// State reached from `q` on `w`; `None` on a non-binary letter.
    pub fn walk(&self, q: usize, w: &str) -> Option<usize> {
        w.chars().try_fold(q, |q, c| letter(c).map(|l| self.delta[q][l]))
    }

    /// Whether `w` is accepted; non-binary words are rejected.
    pub fn run(&self, w: &str) -> bool {
        self.walk(self.start, w).is_some_and(|q| self.accept[q])
    }

    /// Minimal automaton, states numbered in breadth-first order from the start.
    pub fn minimize(&self) -> Dfa {
        // reachable part
        let order = self.bfs_order();
        let index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let n = order.len();
        let delta: Vec<[usize; 2]> = order.iter().map(|&q| self.delta[q].map(|t| index[&t])).collect();
        let accept: Vec<bool> = order.iter().map(|&q| self.accept[q]).collect();

        // Moore refinement
        let mut class: Vec<usize> = accept.iter().map(|&a| a as usize).collect();
        loop {
            let mut sig: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let key = (class[q], class[delta[q][0]], class[delta[q][1]]);
                let fresh = sig.len();
                next[q] = *sig.entry(key).or_insert(fresh);
            }
            let before = class.iter().collect::<std::collections::BTreeSet<_>>().len();
            let after = sig.len();
            class = next;
            if after == before {
                break;
            }
        }
        let k = class.iter().max().map_or(0, |m| m + 1);
        let mut qdelta = vec![[0; 2]; k];
        let mut qaccept = vec![false; k];
        for q in 0..n {
            qdelta[class[q]] = delta[q].map(|t| class[t]);
            qaccept[class[q]] = accept[q];
        }
        let quotient = Dfa {
            states: (0..k).map(|i| format!("q{i}")).collect(),
            start: class[0],
            accept: qaccept,
            delta: qdelta,
        };
        quotient.renumbered()
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = vec![self.start];
        seen[self.start] = true;
        let mut i = 0;
        while i < order.len() {
            for c in 0..2 {
                let t = self.delta[order[i]][c];
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Reachable part with states renamed `q0, q1, ...` in breadth-first order.
    pub fn renumbered(&self) -> Dfa {
        let order = self.bfs_order();
        let index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Dfa {
            states: (0..order.len()).map(|i| format!("q{i}")).collect(),
            start: 0,
            accept: order.iter().map(|&q| self.accept[q]).collect(),
            delta: order.iter().map(|&q| self.delta[q].map(|t| index[&t])).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = DfaFile {
            alphabet: vec!["0".into(), "1".into()],
            states: self.states.clone(),
            start: self.states[self.start].clone(),
            accept: (0..self.len()).filter(|&q| self.accept[q]).map(|q| self.states[q].clone()).collect(),
            delta: (0..self.len())
                .map(|q| {
                    let row = [("0", 0), ("1", 1)]
                        .into_iter()
                        .map(|(l, c)| (l.to_string(), self.states[self.delta[q][c]].clone()))
                        .collect();
                    (self.states[q].clone(), row)
                })
                .collect(),
        };
        serde_json::to_value(file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Dfa, DfaError> {
        let file: DfaFile = serde_json::from_str(text).map_err(|e| DfaError::Json(e.to_string()))?;
        let mut alphabet = file.alphabet.clone();
        alphabet.sort();
        if alphabet != ["0", "1"] {
            return Err(DfaError::Invalid("alphabet must be [\"0\", \"1\"]".into()));
        }
        let index: HashMap<&str, usize> = file.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != file.states.len() {
            return Err(DfaError::Invalid("duplicate state names".into()));
        }
        let look = |s: &str| index.get(s).copied().ok_or_else(|| DfaError::Invalid(format!("unknown state `{s}`")));
        let mut accept = vec![false; file.states.len()];
        for s in &file.accept {
            accept[look(s)?] = true;
        }
        let mut delta = Vec::with_capacity(file.states.len());
        for s in &file.states {
            let row = file.delta.get(s).ok_or_else(|| DfaError::Invalid(format!("no transitions for `{s}`")))?;
            let mut out = [0; 2];
            for (l, c) in [("0", 0), ("1", 1)] {
                let t = row.get(l).ok_or_else(|| DfaError::Invalid(format!("`{s}` has no `{l}` transition")))?;
                out[c] = look(t)?;
            }
            delta.push(out);
        }
        let d = Dfa { states: file.states.clone(), start: look(&file.start)?, accept, delta };
        d.validate()?;
        Ok(d)
    }
}

#[derive(Serialize, Deserialize)]
struct DfaFile {
    alphabet: Vec<String>,
    states: Vec<String>,
    start: String,
    accept: Vec<String>,
    delta: BTreeMap<String, BTreeMap<String, String>>,
}

/// Shortest (then lexicographically least) word on which the automata differ.
pub fn dfa_counterexample(a: &Dfa, b: &Dfa) -> Option<String> {
    let mut seen = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert((a.start, b.start), ());
    queue.push_back(((a.start, b.start), String::new()));
    while let Some(((p, q), w)) = queue.pop_front() {
        if a.accept[p] != b.accept[q] {
            return Some(w);
        }
        for (c, l) in [(0, '0'), (1, '1')] {
            let next = (a.delta[p][c], b.delta[q][c]);
            if seen.insert(next, ()).is_none() {
                let mut w2 = w.clone();
                w2.push(l);
                queue.push_back((next, w2));
            }
        }
    }
    None
}

pub fn dfa_equiv(a: &Dfa, b: &Dfa) -> bool {
    dfa_counterexample(a, b).is_none()
}

pub fn minimize(d: &Dfa) -> Dfa {
    d.minimize()
}

pub fn dfa_run(d: &Dfa, w: &str) -> bool {
    d.run(w)
}

/// All words over `{0,1}` of length at most `max_len`, shortest first.
pub fn words_up_to(max_len: usize) -> impl Iterator<Item = String> {
    (0..=max_len).flat_map(|len| {
        (0..1u64 << len).map(move |bits| {
            (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect()
        })
    })
}
