//! Reduction, normalization and decoders for canonical data.
//!
//! Redexes are `(\x. t) u`, `(\!x. t) !u`, `(/\a. t) [A]` and
//! `unfold (fold[T] t)`. A bang-abstraction applied to anything other than a
//! literal `!u` is not a redex.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{
    erase_annotations, print_term, subst_term, subst_type_in_term, OccurrencePath, Term, Type,
};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: u64 },
    #[error("not a boolean: {0}")]
    NotABoolean(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub fn is_redex(t: &Term) -> bool {
    match t {
        Term::App(f, a) => match &**f {
            Term::LinAbs(..) => true,
            Term::BangAbs(..) => matches!(&**a, Term::Bang(_)),
            _ => false,
        },
        Term::TyApp(b, _) => matches!(&**b, Term::TyAbs(..)),
        Term::Unfold(b) => matches!(&**b, Term::Fold(..)),
        _ => false,
    }
}

/// Contracts `t` if it is itself a redex.
pub fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match (&**f, &**a) {
            (Term::LinAbs(x, _, b), _) => Some(subst_term(b, x, a)),
            (Term::BangAbs(x, _, b), Term::Bang(u)) => Some(subst_term(b, x, u)),
            _ => None,
        },
        Term::TyApp(b, ty) => match &**b {
            Term::TyAbs(a, body) => Some(match ty {
                Some(ty) => subst_type_in_term(body, a, ty),
                None => (**body).clone(),
            }),
            _ => None,
        },
        Term::Unfold(b) => match &**b {
            Term::Fold(_, u) => Some((**u).clone()),
            _ => None,
        },
        _ => None,
    }
}

/// All redex positions in leftmost-outermost (preorder) order.
pub fn redexes(t: &Term) -> Vec<OccurrencePath> {
    fn go(t: &Term, path: &mut OccurrencePath, out: &mut Vec<OccurrencePath>) {
        if is_redex(t) {
            out.push(path.clone());
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Contracts the redex at `path`; `None` if there is none there.
pub fn contract_at(t: &Term, path: &[usize]) -> Option<Term> {
    let mut out = t.clone();
    let mut cur = &mut out;
    for &i in path {
        cur = cur.child_mut(i)?;
    }
    *cur = contract(cur)?;
    Some(out)
}

fn leftmost_outermost(t: &Term, path: &mut OccurrencePath) -> bool {
    if is_redex(t) {
        return true;
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        if leftmost_outermost(c, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// One leftmost-outermost step, with the path of the contracted redex.
pub fn step_with_path(t: &Term) -> Option<(Term, OccurrencePath)> {
    let mut path = Vec::new();
    if !leftmost_outermost(t, &mut path) {
        return None;
    }
    contract_at(t, &path).map(|t2| (t2, path))
}

pub fn step(t: &Term) -> Option<Term> {
    step_with_path(t).map(|(t, _)| t)
}

struct Normalizer {
    steps: u64,
    fuel: u64,
}

impl Normalizer {
    fn tick(&mut self) -> Result<(), EvalError> {
        if self.steps >= self.fuel {
            return Err(EvalError::FuelExhausted { steps: self.steps });
        }
        self.steps += 1;
        Ok(())
    }

    /// Head reduction until the head is not a redex.
    fn whnf(&mut self, t: Term) -> Result<Term, EvalError> {
        let mut t = t;
        loop {
            t = match t {
                Term::App(f, a) => {
                    let f = self.whnf(*f)?;
                    match f {
                        Term::LinAbs(x, _, b) => {
                            self.tick()?;
                            subst_term(&b, &x, &a)
                        }
                        Term::BangAbs(x, ty, b) => {
                            let a = self.whnf(*a)?;
                            match a {
                                Term::Bang(u) => {
                                    self.tick()?;
                                    subst_term(&b, &x, &u)
                                }
                                a => return Ok(Term::app(Term::BangAbs(x, ty, b), a)),
                            }
                        }
                        f => return Ok(Term::App(Box::new(f), a)),
                    }
                }
                Term::TyApp(b, ty) => match self.whnf(*b)? {
                    Term::TyAbs(a, body) => {
                        self.tick()?;
                        match ty {
                            Some(ty) => subst_type_in_term(&body, &a, &ty),
                            None => *body,
                        }
                    }
                    b => return Ok(Term::TyApp(Box::new(b), ty)),
                },
                Term::Unfold(b) => match self.whnf(*b)? {
                    Term::Fold(_, u) => {
                        self.tick()?;
                        *u
                    }
                    b => return Ok(Term::unfold(b)),
                },
                other => return Ok(other),
            }
        }
    }

    fn nf(&mut self, t: Term) -> Result<Term, EvalError> {
        Ok(match self.whnf(t)? {
            Term::Var(x) => Term::Var(x),
            Term::LinAbs(x, ty, b) => Term::LinAbs(x, ty, Box::new(self.nf(*b)?)),
            Term::BangAbs(x, ty, b) => Term::BangAbs(x, ty, Box::new(self.nf(*b)?)),
            Term::TyAbs(a, b) => Term::TyAbs(a, Box::new(self.nf(*b)?)),
            Term::Bang(b) => Term::bang(self.nf(*b)?),
            Term::Fold(ty, b) => Term::fold(ty, self.nf(*b)?),
            Term::App(f, a) => {
                let f = self.nf(*f)?;
                let a = self.nf(*a)?;
                // a stuck bang-abstraction can only become a redex through its argument
                if let (Term::BangAbs(..), Term::Bang(_)) = (&f, &a) {
                    return self.nf(Term::app(f, a));
                }
                Term::app(f, a)
            }
            Term::TyApp(b, ty) => Term::TyApp(Box::new(self.nf(*b)?), ty),
            Term::Unfold(b) => Term::unfold(self.nf(*b)?),
        })
    }
}

/// Normal form of `t`, counting each contraction against `fuel`.
pub fn normalize(t: &Term, fuel: u64) -> Result<Term, EvalError> {
    normalize_counting(t, fuel).map(|(t, _)| t)
}

/// As [`normalize`], also returning the number of contractions performed.
pub fn normalize_counting(t: &Term, fuel: u64) -> Result<(Term, u64), EvalError> {
    let mut n = Normalizer { steps: 0, fuel };
    let out = n.nf(t.clone())?;
    Ok((out, n.steps))
}

/// Normalizes by iterating [`step`]; each step is reported to `on_step`.
pub fn normalize_stepwise(
    t: &Term,
    fuel: u64,
    mut on_step: impl FnMut(&OccurrencePath, &Term),
) -> Result<Term, EvalError> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some((next, path)) = step_with_path(&cur) {
        if steps >= fuel {
            return Err(EvalError::FuelExhausted { steps });
        }
        steps += 1;
        on_step(&path, &next);
        cur = next;
    }
    Ok(cur)
}

/// Normalizes by contracting a uniformly random redex at each step.
pub fn normalize_random(t: &Term, seed: u64, fuel: u64) -> Result<Term, EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        let rs = redexes(&cur);
        let Some(path) = rs.choose(&mut rng) else {
            return Ok(cur);
        };
        if steps >= fuel {
            return Err(EvalError::FuelExhausted { steps });
        }
        steps += 1;
        cur = contract_at(&cur, path).expect("listed redex");
    }
}

fn strip_bangs(mut t: &Term) -> &Term {
    while let Term::Bang(b) = t {
        t = b;
    }
    t
}

/// Reads a normal form `!...!b` with `b` the erased `\x.\y.x` or `\x.\y.y`.
pub fn read_bool(t: &Term, fuel: u64) -> Result<bool, EvalError> {
    let n = normalize(t, fuel)?;
    let erased = erase_annotations(strip_bangs(&n));
    if let Term::LinAbs(x, _, b) = &erased {
        if let Term::LinAbs(y, _, body) = &**b {
            if let Term::Var(z) = &**body {
                if z == y {
                    return Ok(false);
                }
                if z == x {
                    return Ok(true);
                }
            }
        }
    }
    Err(EvalError::NotABoolean(print_term(&n)))
}

/// Peels `\!f0. \!f1. !(\x. body)` (after erasure) with any number of
/// bang-binders matching `names`.
fn iterator_body<'a>(t: &'a Term, binders: usize) -> Option<(Vec<&'a str>, &'a str, &'a Term)> {
    let mut names = Vec::new();
    let mut cur = t;
    for _ in 0..binders {
        match cur {
            Term::BangAbs(f, _, b) => {
                names.push(&**f);
                cur = b;
            }
            _ => return None,
        }
    }
    match cur {
        Term::Bang(inner) => match &**inner {
            Term::LinAbs(x, _, body) => Some((names, x, body)),
            _ => None,
        },
        _ => None,
    }
}

/// Reads the word of a Church string `\!f0. \!f1. !(\x. f_{w1} (... (f_{wn} x)))`.
pub fn decode_church_string(t: &Term, fuel: u64) -> Result<String, EvalError> {
    let n = erase_annotations(&normalize(t, fuel)?);
    let bad = || EvalError::ShapeMismatch(format!("not a Church string: {}", print_term(&n)));
    let (names, x, mut body) = iterator_body(&n, 2).ok_or_else(bad)?;
    if names[0] == names[1] || names.contains(&x) {
        return Err(bad());
    }
    let mut word = String::new();
    loop {
        match body {
            Term::Var(v) if &**v == x => return Ok(word),
            Term::App(f, a) => {
                match &**f {
                    Term::Var(g) if &**g == names[0] => word.push('0'),
                    Term::Var(g) if &**g == names[1] => word.push('1'),
                    _ => return Err(bad()),
                }
                body = a;
            }
            _ => return Err(bad()),
        }
    }
}

/// Reads `\!f. !(\x. f (... (f x)))`.
pub fn decode_church_nat(t: &Term, fuel: u64) -> Result<usize, EvalError> {
    let n = erase_annotations(&normalize(t, fuel)?);
    let bad = || EvalError::ShapeMismatch(format!("not a Church numeral: {}", print_term(&n)));
    let (names, x, mut body) = iterator_body(&n, 1).ok_or_else(bad)?;
    if names[0] == x {
        return Err(bad());
    }
    let mut count = 0;
    loop {
        match body {
            Term::Var(v) if &**v == x => return Ok(count),
            Term::App(f, a) if matches!(&**f, Term::Var(g) if &**g == names[0]) => {
                count += 1;
                body = a;
            }
            _ => return Err(bad()),
        }
    }
}

/// Reads a closed Scott string by repeated case analysis with free
/// continuations.
pub fn decode_scott_string(t: &Term, fuel: u64) -> Result<String, EvalError> {
    let (k0, k1, ke) = (Term::var("k0"), Term::var("k1"), Term::var("ke"));
    let mut cur = normalize(t, fuel)?;
    let mut word = String::new();
    let mut budget = fuel;
    loop {
        let probe = Term::apps(
            Term::ty_app(Term::unfold(cur.clone()), Type::var("a")),
            [k0.clone(), k1.clone(), ke.clone()],
        );
        let (n, used) = normalize_counting(&probe, budget)?;
        budget = budget.saturating_sub(used.max(1));
        if budget == 0 {
            return Err(EvalError::FuelExhausted { steps: fuel });
        }
        let bad = || EvalError::ShapeMismatch(format!("not a Scott string: {}", print_term(&cur)));
        let rest = match n {
            Term::Var(v) if &*v == "ke" => return Ok(word),
            Term::App(f, rest) => {
                match &*f {
                    Term::Var(v) if &**v == "k0" => word.push('0'),
                    Term::Var(v) if &**v == "k1" => word.push('1'),
                    _ => return Err(bad()),
                }
                rest
            }
            _ => return Err(bad()),
        };
        if !rest.is_closed() {
            return Err(EvalError::ShapeMismatch("tail of a Scott string is open".into()));
        }
        cur = *rest;
    }
}
