use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{fresh_name, Name, Term};

/// Child indices from the root, as enumerated by [`Term::children`].
pub type OccurrencePath = Vec<usize>;

/// Number of `Bang` nodes strictly above every subterm occurrence.
pub fn depth_map(t: &Term) -> BTreeMap<OccurrencePath, usize> {
    fn go(t: &Term, path: &mut OccurrencePath, depth: usize, out: &mut BTreeMap<OccurrencePath, usize>) {
        out.insert(path.clone(), depth);
        let d = if matches!(t, Term::Bang(_)) { depth + 1 } else { depth };
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, d, out);
            path.pop();
        }
    }
    let mut out = BTreeMap::new();
    go(t, &mut Vec::new(), 0, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratificationViolation {
    pub binder: Name,
    /// Path of the binder.
    pub binder_path: OccurrencePath,
    /// Path of the offending occurrence.
    pub path: OccurrencePath,
    pub reason: String,
}

impl fmt::Display for StratificationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: variable `{}`: {}", self.path, self.binder, self.reason)
    }
}

/// Free occurrences of `x` in `t` with their paths (relative to `t`) and depths.
fn occurrences(t: &Term, x: &str) -> Vec<(OccurrencePath, usize)> {
    fn go(t: &Term, x: &str, path: &mut OccurrencePath, depth: usize, out: &mut Vec<(OccurrencePath, usize)>) {
        match t {
            Term::Var(y) if &**y == x => out.push((path.clone(), depth)),
            Term::LinAbs(y, _, _) | Term::BangAbs(y, _, _) if &**y == x => {}
            _ => {
                let d = if matches!(t, Term::Bang(_)) { depth + 1 } else { depth };
                for (i, c) in t.children().into_iter().enumerate() {
                    path.push(i);
                    go(c, x, path, d, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(t, x, &mut Vec::new(), 0, &mut out);
    out
}

/// Every bang-bound variable occurs at depth exactly 1 below its binder,
/// every linear variable at most once and at depth 0.
pub fn check_stratification(t: &Term) -> Result<(), StratificationViolation> {
    fn go(t: &Term, path: &mut OccurrencePath) -> Result<(), StratificationViolation> {
        match t {
            Term::LinAbs(x, _, body) | Term::BangAbs(x, _, body) => {
                let banged = matches!(t, Term::BangAbs(..));
                let occ = occurrences(body, x);
                let violation = |p: &OccurrencePath, reason: String| {
                    let mut full = path.clone();
                    full.push(0);
                    full.extend_from_slice(p);
                    StratificationViolation { binder: x.clone(), binder_path: path.clone(), path: full, reason }
                };
                if banged {
                    if let Some((p, d)) = occ.iter().find(|(_, d)| *d != 1) {
                        return Err(violation(p, format!("bang-bound occurrence at depth {d}, expected 1")));
                    }
                } else {
                    if let Some((p, d)) = occ.iter().find(|(_, d)| *d != 0) {
                        return Err(violation(p, format!("linear occurrence at depth {d}, expected 0")));
                    }
                    if occ.len() > 1 {
                        return Err(violation(&occ[1].0, format!("linear variable used {} times", occ.len())));
                    }
                }
            }
            _ => {}
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path)?;
            path.pop();
        }
        Ok(())
    }
    go(t, &mut Vec::new())
}

/// Renames each free occurrence of `x` to a distinct fresh name, left to right.
pub fn split_occurrences(t: &Term, x: &str) -> (Term, Vec<Name>) {
    let mut avoid = BTreeSet::new();
    t.all_vars(&mut avoid);
    avoid.insert(x.into());
    let mut fresh = Vec::new();
    let out = split_rec(t, x, &mut avoid, &mut fresh);
    (out, fresh)
}

fn split_rec(t: &Term, x: &str, avoid: &mut BTreeSet<Name>, fresh: &mut Vec<Name>) -> Term {
    match t {
        Term::Var(y) if &**y == x => {
            let n = fresh_name(x, avoid);
            avoid.insert(n.clone());
            fresh.push(n.clone());
            Term::Var(n)
        }
        Term::LinAbs(y, _, _) | Term::BangAbs(y, _, _) if &**y == x => t.clone(),
        _ if !t.has_free(x) => t.clone(),
        _ => {
            let mut out = t.clone();
            let n = t.children().len();
            for i in 0..n {
                let c = t.children()[i];
                let replaced = split_rec(c, x, avoid, fresh);
                *out.child_mut(i).expect("child index in range") = replaced;
            }
            out
        }
    }
}

/// Drops type abstractions, type applications, fold/unfold and binder types.
pub fn erase_annotations(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::LinAbs(x, _, b) => Term::LinAbs(x.clone(), None, Box::new(erase_annotations(b))),
        Term::BangAbs(x, _, b) => Term::BangAbs(x.clone(), None, Box::new(erase_annotations(b))),
        Term::App(f, a) => Term::app(erase_annotations(f), erase_annotations(a)),
        Term::Bang(b) => Term::bang(erase_annotations(b)),
        Term::TyAbs(_, b) | Term::TyApp(b, _) | Term::Fold(_, b) | Term::Unfold(b) => erase_annotations(b),
    }
}
