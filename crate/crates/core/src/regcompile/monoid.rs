//! Finite monoid presentations and their compilation to `Str -o !Bool`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::dfa::Dfa;
use crate::encode::{bool_term, bool_ty, monoid_elem, monoid_ty, str_ty};
use crate::syntax::{Term, Type};

/// Monoid with elements `0..size`, identity `0`, and a morphism from
/// `{0,1}*` given by the images of the two letters. The JSON form is
/// 1-indexed with identity `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidPresentation {
    pub size: usize,
    /// `table[a][b]` is the product `a.b`.
    pub table: Vec<Vec<usize>>,
    pub gen: [usize; 2],
    pub accept: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("invalid monoid: {0}")]
    Invalid(String),
    #[error("malformed json: {0}")]
    Json(String),
}

#[derive(Serialize, Deserialize)]
struct MonoidFile {
    size: usize,
    table: Vec<Vec<usize>>,
    gen0: usize,
    gen1: usize,
    accept: Vec<usize>,
}

impl MonoidPresentation {
    pub fn validate(&self) -> Result<(), MonoidError> {
        let k = self.size;
        let bad = |m: &str| Err(MonoidError::Invalid(m.to_string()));
        if k == 0 {
            return bad("size must be at least 1");
        }
        if self.table.len() != k || self.table.iter().any(|row| row.len() != k) {
            return bad("table must be size x size");
        }
        if self.table.iter().flatten().any(|&x| x >= k) {
            return bad("table entry out of range");
        }
        if self.gen.iter().any(|&g| g >= k) {
            return bad("generator image out of range");
        }
        if self.accept.len() != k {
            return bad("accept vector has the wrong length");
        }
        for a in 0..k {
            if self.table[0][a] != a || self.table[a][0] != a {
                return Err(MonoidError::Invalid(format!("1 is not an identity at element {}", a + 1)));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(MonoidError::Invalid(format!(
                            "not associative at ({}, {}, {})",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Image of a binary word; `None` on other letters.
    pub fn phi(&self, w: &str) -> Option<usize> {
        w.chars().try_fold(0, |m, c| match c {
            '0' => Some(self.mul(m, self.gen[0])),
            '1' => Some(self.mul(m, self.gen[1])),
            _ => None,
        })
    }

    pub fn recognizes(&self, w: &str) -> bool {
        self.phi(w).is_some_and(|m| self.accept[m])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = MonoidFile {
            size: self.size,
            table: self.table.iter().map(|row| row.iter().map(|x| x + 1).collect()).collect(),
            gen0: self.gen[0] + 1,
            gen1: self.gen[1] + 1,
            accept: (0..self.size).filter(|&m| self.accept[m]).map(|m| m + 1).collect(),
        };
        serde_json::to_value(file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MonoidPresentation, MonoidError> {
        let f: MonoidFile = serde_json::from_str(text).map_err(|e| MonoidError::Json(e.to_string()))?;
        let dec = |x: usize| {
            if x == 0 || x > f.size {
                Err(MonoidError::Invalid(format!("element {x} out of range 1..{}", f.size)))
            } else {
                Ok(x - 1)
            }
        };
        let table = f
            .table
            .iter()
            .map(|row| row.iter().map(|&x| dec(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut accept = vec![false; f.size];
        for &a in &f.accept {
            accept[dec(a)?] = true;
        }
        let m = MonoidPresentation { size: f.size, table, gen: [dec(f.gen0)?, dec(f.gen1)?], accept };
        m.validate()?;
        Ok(m)
    }
}

/// Submonoid of state maps generated by the two letter actions, identity
/// first, remaining elements in breadth-first order.
pub fn transition_monoid(d: &Dfa) -> MonoidPresentation {
    let n = d.len();
    let id: Vec<usize> = (0..n).collect();
    let gens: [Vec<usize>; 2] = [0, 1].map(|c| (0..n).map(|q| d.delta[q][c]).collect());
    // a.b acts as a then b
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().map(|&q| b[q]).collect() };

    let mut elems = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in &gens {
            let next = compose(&elems[i], g);
            if !index.contains_key(&next) {
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
        i += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
        .collect();
    MonoidPresentation {
        size: elems.len(),
        table,
        gen: [index[&gens[0]], index[&gens[1]]],
        accept: elems.iter().map(|m| d.accept[m[d.start]]).collect(),
    }
}

/// `\w:Str. let !d = w [M] !delta0 !delta1 in !(chi (d m1))`
pub fn compile(m: &MonoidPresentation) -> Result<Term, MonoidError> {
    m.validate()?;
    let k = m.size;
    let mk = monoid_ty(k);
    let elem = |i: usize| monoid_elem(i + 1, k).expect("index in range");
    let delta = |c: usize| {
        let g = m.gen[c];
        Term::lam("m", mk.clone(), Term::apps(Term::ty_app(Term::var("m"), mk.clone()), (0..k).map(|i| elem(m.mul(g, i)))))
    };
    let chi = Term::lam(
        "m",
        mk.clone(),
        Term::apps(Term::ty_app(Term::var("m"), bool_ty()), (0..k).map(|i| bool_term(m.accept[i]))),
    );
    let iterate = Term::apps(Term::ty_app(Term::var("w"), mk.clone()), [Term::bang(delta(0)), Term::bang(delta(1))]);
    let body = Term::let_bang(
        "d",
        Type::arrow(mk.clone(), mk),
        iterate,
        Term::bang(Term::app(chi, Term::app(Term::var("d"), elem(0)))),
    );
    Ok(Term::lam("w", str_ty(), body))
}

pub fn compile_dfa(d: &Dfa) -> Term {
    compile(&transition_monoid(d)).expect("transition monoids are valid")
}
