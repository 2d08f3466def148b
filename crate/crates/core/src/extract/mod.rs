//! From a term deciding a language back to an automaton.

mod lstar;
mod semantic;

use rayon::prelude::*;

use crate::encode::{bool_ty, church_string, str_ty};
use crate::eval::{normalize, read_bool, EvalError, DEFAULT_FUEL};
use crate::semantics::SemError;
use crate::syntax::{fresh_name, split_occurrences, subst_term, Name, OccurrencePath, Term, Type};
use crate::truncate::{truncate_term, truncate_type_total, unit_identity};
use crate::typing::{check, elaborate, format_path, has_holes, Context, Mode, TypeError};

pub use crate::regcompile::{dfa_counterexample, dfa_equiv, dfa_run, minimize, words_up_to, Dfa};
pub use lstar::{extract_lstar, LstarOptions};
pub use semantic::{extract_semantic, SemanticExtraction, SemanticOptions};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExtractError {
    #[error("unsupported-shape at {}: {message}", format_path(.path))]
    UnsupportedShape { path: OccurrencePath, message: String },
    #[error("wrong input type: {0}")]
    WrongType(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sem(#[from] SemError),
    #[error("verification failed: {} mismatches, first on {:?}", .0.mismatches.len(), .0.mismatches[0].word)]
    Verification(VerifyReport),
}

fn shape_err(path: &[usize], message: impl Into<String>) -> ExtractError {
    ExtractError::UnsupportedShape { path: path.to_vec(), message: message.into() }
}

/// Accepted decision types: `!Str -o !Bool`, `!Str -o !!Bool` and
/// `Str -o !Bool`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecisionType {
    pub banged_input: bool,
    pub output_bangs: usize,
}

impl DecisionType {
    pub fn all() -> [DecisionType; 3] {
        [
            DecisionType { banged_input: true, output_bangs: 1 },
            DecisionType { banged_input: true, output_bangs: 2 },
            DecisionType { banged_input: false, output_bangs: 1 },
        ]
    }

    pub fn ty(self) -> Type {
        let input = if self.banged_input { Type::bang(str_ty()) } else { str_ty() };
        Type::arrow(input, Type::bangs(self.output_bangs, bool_ty()))
    }
}

/// Annotated form of `t` and its decision type.
pub fn decision_type(t: &Term) -> Result<(Term, DecisionType), ExtractError> {
    let ctx = Context::new();
    let (t, ty) = if has_holes(t) {
        let (e, _) = elaborate(Mode::Eal, &ctx, t)?;
        let ty = check(Mode::Eal, &ctx, &e)?;
        (e, ty)
    } else {
        let ty = check(Mode::Eal, &ctx, t)?;
        (t.clone(), ty)
    };
    DecisionType::all()
        .into_iter()
        .find(|d| ty.alpha_eq(&d.ty()))
        .map(|d| (t, d))
        .ok_or_else(|| ExtractError::WrongType(format!("`{ty}` is not a decision type")))
}

/// Membership oracle for a decision term.
#[derive(Clone, Debug)]
pub struct Decider {
    pub term: Term,
    pub kind: DecisionType,
    pub fuel: u64,
}

impl Decider {
    pub fn new(t: &Term, fuel: u64) -> Result<Decider, ExtractError> {
        let (term, kind) = decision_type(t)?;
        Ok(Decider { term, kind, fuel })
    }

    pub fn decide(&self, w: &str) -> Result<bool, ExtractError> {
        let s = church_string(w).map_err(|e| ExtractError::WrongType(e.to_string()))?;
        let arg = if self.kind.banged_input { Term::bang(s) } else { s };
        let nf = normalize(&Term::app(self.term.clone(), arg), self.fuel)?;
        Ok(read_bool(&nf, self.fuel)?)
    }

    pub fn decide_all(&self, words: &[String]) -> Result<Vec<bool>, ExtractError> {
        words.par_iter().map(|w| self.decide(w)).collect()
    }
}

/// `t !s` and `!^bang_peel (u s ... s)` share a normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub u: Term,
    pub n: usize,
    pub sigmas: Vec<Type>,
    pub bang_peel: usize,
    pub kind: DecisionType,
}

impl Decomposition {
    /// `!^bang_peel (u s ... s)` for the Church string of `w`.
    pub fn instance(&self, w: &str) -> Term {
        let s = church_string(w).expect("binary word");
        Term::bangs(self.bang_peel, Term::apps(self.u.clone(), std::iter::repeat_n(s, self.n)))
    }
}

pub fn decompose_bang_input(t: &Term) -> Result<Decomposition, ExtractError> {
    decompose_with_fuel(t, DEFAULT_FUEL)
}

pub fn decompose_with_fuel(t: &Term, fuel: u64) -> Result<Decomposition, ExtractError> {
    let (t, kind) = decision_type(t)?;
    let nf = normalize(&t, fuel)?;
    let (x, mut body) = match (&nf, kind.banged_input) {
        (Term::BangAbs(x, _, body), true) | (Term::LinAbs(x, _, body), false) => (x.clone(), &**body),
        _ => return Err(shape_err(&[], "normal form is not an abstraction over the string")),
    };
    let mut path = vec![0];
    let mut bang_peel = 0;
    while let Term::Bang(inner) = body {
        body = inner;
        bang_peel += 1;
        path.push(0);
    }
    let (split, names) = split_occurrences(body, &x);
    let mut sigmas = Vec::with_capacity(names.len());
    for name in &names {
        sigmas.push(instantiation_type(&split, name, &mut path.clone())?);
    }
    let u = names.iter().rev().fold(split, |acc, xi| Term::LinAbs(xi.clone(), Some(str_ty()), Box::new(acc)));
    Ok(Decomposition { u, n: names.len(), sigmas, bang_peel, kind })
}

/// The `sigma` of the unique occurrence `x [sigma]`.
fn instantiation_type(t: &Term, x: &str, path: &mut OccurrencePath) -> Result<Type, ExtractError> {
    fn find(t: &Term, x: &str, path: &mut OccurrencePath, parent_ty: Option<&Option<Type>>) -> Option<Result<Type, ExtractError>> {
        if let Term::Var(y) = t {
            if &**y == x {
                return Some(match parent_ty {
                    Some(Some(ty)) => Ok(ty.clone()),
                    Some(None) => Err(shape_err(path, format!("`{x}` is instantiated without an annotation"))),
                    None => Err(shape_err(path, format!("`{x}` is not used as an iterator"))),
                });
            }
            return None;
        }
        let ann = match t {
            Term::TyApp(_, ty) => Some(ty),
            _ => None,
        };
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            let r = find(c, x, path, ann);
            path.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
    find(t, x, path, None).unwrap_or_else(|| Err(shape_err(path, format!("no occurrence of `{x}`"))))
}

/// Pieces of a single-string iterator: `x !f0 !f1` feeding `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct IteratorParts {
    pub f0: Term,
    pub f1: Term,
    pub g: Term,
    pub m: usize,
    pub sigma: Type,
}

pub fn decompose_iterator(u: &Term) -> Result<IteratorParts, ExtractError> {
    let nf = normalize(u, DEFAULT_FUEL)?;
    let (x, body) = match &nf {
        Term::LinAbs(x, _, body) if !matches!(&**body, Term::LinAbs(..)) => (x.clone(), &**body),
        Term::LinAbs(..) => return Err(shape_err(&[0], "more than one string argument")),
        _ => return Err(shape_err(&[], "not an abstraction over a string")),
    };
    if let Term::Bang(p) = body {
        if !p.has_free(&x) {
            return Ok(IteratorParts { f0: unit_identity(), f1: unit_identity(), g: (**p).clone(), m: 0, sigma: Type::Unit });
        }
    }
    let mut lets: Vec<(Name, Type, &Term)> = Vec::new();
    let mut cur = body;
    let mut path = vec![0];
    loop {
        match cur {
            Term::App(f, subject) => match &**f {
                Term::BangAbs(y, Some(core), inner) => match &**inner {
                    Term::Bang(p) => {
                        lets.push((y.clone(), core.clone(), p));
                        cur = subject;
                        path.push(1);
                    }
                    _ => return Err(shape_err(&path, "let body is not a box")),
                },
                _ if lets.is_empty() => return Err(shape_err(&path, "expected a let-chain")),
                _ => break,
            },
            _ => return Err(shape_err(&path, "let subject is not the string application")),
        }
    }
    // innermost subject: x [sigma] !f0 !f1
    let (f0, f1, sigma) = match cur {
        Term::App(h, b1) => match (&**h, &**b1) {
            (Term::App(h2, b0), Term::Bang(f1)) => match (&**h2, &**b0) {
                (Term::TyApp(xv, Some(sigma)), Term::Bang(f0)) if **xv == Term::Var(x.clone()) => {
                    ((**f0).clone(), (**f1).clone(), sigma.clone())
                }
                _ => return Err(shape_err(&path, "let subject is not the string application")),
            },
            _ => return Err(shape_err(&path, "let subject is not the string application")),
        },
        _ => unreachable!(),
    };
    if !f0.is_closed() || !f1.is_closed() {
        return Err(shape_err(&path, "step functions are open"));
    }
    let mut avoid = std::collections::BTreeSet::new();
    nf.all_vars(&mut avoid);
    let z = fresh_name("z", &avoid);
    let z_ty = lets.last().expect("nonempty chain").1.clone();
    let r = lets.iter().rev().fold(Term::var(&z), |acc, (y, _, p)| subst_term(p, y, &acc));
    let (split, zs) = split_occurrences(&r, &z);
    let g = zs.iter().rev().fold(split, |acc, zi| Term::LinAbs(zi.clone(), Some(z_ty.clone()), Box::new(acc)));
    Ok(IteratorParts { f0, f1, g, m: zs.len(), sigma })
}

/// Depth-0 truncation of each component.
pub fn truncated_iterator(parts: &IteratorParts) -> IteratorParts {
    IteratorParts {
        f0: truncate_term(&parts.f0),
        f1: truncate_term(&parts.f1),
        g: truncate_term(&parts.g),
        m: parts.m,
        sigma: truncate_type_total(&parts.sigma),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub word: String,
    pub dfa: bool,
    pub term: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the automaton with the term on every word of length at most `max_len`.
pub fn verify_dfa(d: &Dfa, t: &Term, max_len: usize) -> Result<VerifyReport, ExtractError> {
    verify_with(d, &Decider::new(t, DEFAULT_FUEL)?, max_len)
}

pub fn verify_with(d: &Dfa, decider: &Decider, max_len: usize) -> Result<VerifyReport, ExtractError> {
    let words: Vec<String> = words_up_to(max_len).collect();
    let answers = decider.decide_all(&words)?;
    let mismatches = words
        .iter()
        .zip(answers)
        .filter(|(w, a)| d.run(w) != *a)
        .map(|(w, a)| Mismatch { word: w.clone(), dfa: !a, term: a })
        .collect();
    Ok(VerifyReport { checked: words.len(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{bool_term, monoid_ty, promote};
    use crate::regcompile::{compile_dfa, regex_to_dfa};
    use crate::syntax::{alpha_eq, parse_term};

    fn parity() -> Dfa {
        Dfa::new(0, vec![true, false], vec![[0, 1], [1, 0]]).unwrap()
    }

    #[test]
    fn constant_decomposes_trivially() {
        let t = parse_term("\\!x:Str. !!(/\\a. \\y:a. \\z:a. y)").unwrap();
        let d = decompose_bang_input(&t).unwrap();
        assert_eq!(d.n, 0);
        assert_eq!(d.bang_peel, 2);
        assert!(alpha_eq(&d.u, &bool_term(true)));
    }

    #[test]
    fn promoted_parity() {
        let t = promote(&compile_dfa(&parity()), 1, 1).unwrap();
        let d = decompose_bang_input(&t).unwrap();
        assert_eq!(d.n, 1);
        assert_eq!(d.bang_peel, 1);
        assert!(d.sigmas[0].alpha_eq(&monoid_ty(2)));
        for w in ["", "1", "0110", "111"] {
            let lhs = normalize(&Term::app(t.clone(), Term::bang(church_string(w).unwrap())), DEFAULT_FUEL).unwrap();
            let rhs = normalize(&d.instance(w), DEFAULT_FUEL).unwrap();
            assert!(alpha_eq(&lhs, &rhs), "{w}");
        }
    }

    #[test]
    fn two_uses_at_different_types() {
        // first letter is 1 (via Bool) and parity (via M2), combined with and
        let parity_c = compile_dfa(&parity());
        let ff = "(/\\a. \\p:a. \\q:a. q)";
        let tt = "(/\\a. \\p:a. \\q:a. p)";
        let src = format!(
            "\\!s:Str. !(let !b:(Bool -o Bool) = s [Bool] !(\\x:Bool. {ff}) !(\\x:Bool. {tt}) in let !c:Bool = ({parity_c}) s in !(c [Bool] (b {ff}) {ff}))"
        );
        let t = parse_term(&src).unwrap();
        let d = decompose_bang_input(&t).unwrap();
        assert_eq!(d.n, 2);
        let mut got: Vec<String> = d.sigmas.iter().map(|s| s.to_string()).collect();
        got.sort();
        let mut want = vec![monoid_ty(2).to_string(), bool_ty().to_string()];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn iterator_of_compiled_parity() {
        let u = compile_dfa(&parity());
        let parts = decompose_iterator(&u).unwrap();
        assert_eq!(parts.m, 1);
        assert!(parts.sigma.alpha_eq(&monoid_ty(2)));
        for w in ["", "1", "10", "0111"] {
            let it = Term::apps(
                Term::ty_app(church_string(w).unwrap(), parts.sigma.clone()),
                [Term::bang(parts.f0.clone()), Term::bang(parts.f1.clone())],
            );
            let Term::Bang(h) = normalize(&it, DEFAULT_FUEL).unwrap() else { panic!() };
            let lhs = normalize(&Term::app(u.clone(), church_string(w).unwrap()), DEFAULT_FUEL).unwrap();
            let rhs = normalize(&Term::bang(Term::app(parts.g.clone(), *h)), DEFAULT_FUEL).unwrap();
            assert!(alpha_eq(&lhs, &rhs), "{w}");
        }
    }

    #[test]
    fn iterator_constant_case() {
        let u = parse_term("\\x:Str. !(/\\a. \\y:a. \\z:a. y)").unwrap();
        let parts = decompose_iterator(&u).unwrap();
        assert_eq!(parts.m, 0);
        assert!(alpha_eq(&parts.g, &bool_term(true)));
    }

    #[test]
    fn iterator_two_lets() {
        // let !y1 = (let !y2 = x [Bool] !not !id in !(not y2)) in !(not y1)
        let not = "(\\b:Bool. /\\a. \\p:a. \\q:a. b [a] q p)";
        let src = format!(
            "\\x:Str. let !y1:Bool = (let !y2:(Bool -o Bool) = x [Bool] !{not} !(\\b:Bool. b) in !({not} (y2 (/\\a. \\p:a. \\q:a. p)))) in !({not} y1)"
        );
        let u = parse_term(&src).unwrap();
        let parts = decompose_iterator(&u).unwrap();
        assert_eq!(parts.m, 1);
        for w in ["", "0", "00", "010"] {
            let it = Term::apps(
                Term::ty_app(church_string(w).unwrap(), bool_ty()),
                [Term::bang(parts.f0.clone()), Term::bang(parts.f1.clone())],
            );
            let Term::Bang(h) = normalize(&it, DEFAULT_FUEL).unwrap() else { panic!() };
            let lhs = normalize(&Term::app(u.clone(), church_string(w).unwrap()), DEFAULT_FUEL).unwrap();
            let rhs = normalize(&Term::bang(Term::app(parts.g.clone(), *h)), DEFAULT_FUEL).unwrap();
            assert!(alpha_eq(&lhs, &rhs), "{w}");
            let zeros = w.matches('0').count();
            let expect = read_bool(&lhs, DEFAULT_FUEL).unwrap();
            // two extra negations around not^zeros
            assert_eq!(expect, zeros % 2 == 0, "{w}");
        }
    }

    #[test]
    fn truncating_parts() {
        let parts = truncated_iterator(&decompose_iterator(&compile_dfa(&parity())).unwrap());
        assert!(crate::truncate::is_exponential_free(&parts.f0));
        assert!(crate::truncate::is_exponential_free(&parts.g));
        for b in [true, false] {
            assert_eq!(truncate_term(&bool_term(b)), bool_term(b));
        }
    }

    #[test]
    fn verify_reports() {
        let d = parity();
        let r = verify_dfa(&d, &compile_dfa(&d), 8).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 511);
        let c11 = regex_to_dfa("(0|1)*11(0|1)*").unwrap();
        let r = verify_dfa(&d, &compile_dfa(&c11), 8).unwrap();
        assert!(!r.passed());
        // both languages contain "11"; they first differ on the empty word
        assert_eq!(r.mismatches[0].word, "");
        assert!(!r.mismatches.iter().any(|m| m.word == "11"));
        assert!(r.mismatches.iter().any(|m| m.word == "111"));
        let r = verify_dfa(&c11, &compile_dfa(&c11), 0).unwrap();
        assert_eq!(r.checked, 1);
        assert!(r.passed());
    }

    #[test]
    fn wrong_input_type() {
        assert!(matches!(decompose_bang_input(&bool_term(true)), Err(ExtractError::WrongType(_))));
    }
}
