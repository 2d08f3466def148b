//! Builders for data encodings and term constructions.

use std::collections::BTreeSet;

use crate::syntax::{fresh_name, Name, Term, Type};
use crate::typing::{typecheck, Context, Mode, TypeError};

pub use crate::syntax::named::{bool_ty, monoid_ty, nat_ty, str_of, str_ty, strs_ty, tensor};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("letter `{0}` is not 0 or 1")]
    NonBinary(char),
    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("expected {expected} arguments, term type `{ty}` has fewer")]
    Arity { expected: usize, ty: Type },
    #[error("{what} does not have the required type: {err}")]
    Type { what: String, err: TypeError },
    #[error("{what}: expected `{expected}`, found `{found}`")]
    Mismatch { what: String, expected: Type, found: Type },
    #[error("term must be closed")]
    Open,
}

fn endo(a: Type) -> Type {
    Type::arrow(a.clone(), a)
}

fn letters(w: &str) -> Result<Vec<bool>, EncodeError> {
    w.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(EncodeError::NonBinary(other)),
        })
        .collect()
}

/// `/\a. \!f0:(a -o a). \!f1:(a -o a). !(\x:a. f_{w1} (... (f_{wn} x)))`
pub fn church_string(w: &str) -> Result<Term, EncodeError> {
    let ls = letters(w)?;
    let a = Type::var("a");
    let body = ls.iter().rev().fold(Term::var("x"), |acc, &one| {
        Term::app(Term::var(if one { "f1" } else { "f0" }), acc)
    });
    Ok(Term::ty_abs(
        "a",
        Term::bang_lam(
            "f0",
            endo(a.clone()),
            Term::bang_lam("f1", endo(a.clone()), Term::bang(Term::lam("x", a, body))),
        ),
    ))
}

/// `/\a. \!f:(a -o a). !(\x:a. f (... (f x)))`
pub fn church_nat(n: usize) -> Term {
    let a = Type::var("a");
    let body = (0..n).fold(Term::var("x"), |acc, _| Term::app(Term::var("f"), acc));
    Term::ty_abs("a", Term::bang_lam("f", endo(a.clone()), Term::bang(Term::lam("x", a, body))))
}

pub fn bool_term(b: bool) -> Term {
    let a = Type::var("a");
    Term::ty_abs(
        "a",
        Term::lam("x", a.clone(), Term::lam("y", a, Term::var(if b { "x" } else { "y" }))),
    )
}

/// `/\a. \x1:a. ... \xk:a. xi`, for `1 <= i <= k`.
pub fn monoid_elem(i: usize, k: usize) -> Result<Term, EncodeError> {
    if i == 0 || i > k {
        return Err(EncodeError::IndexOutOfRange { index: i, size: k });
    }
    let a = Type::var("a");
    let body = (1..=k)
        .rev()
        .fold(Term::var(&format!("x{i}")), |acc, j| Term::lam(&format!("x{j}"), a.clone(), acc));
    Ok(Term::ty_abs("a", body))
}

fn avoid_of(terms: &[&Term], types: &[&Type]) -> BTreeSet<Name> {
    let mut avoid = BTreeSet::new();
    for t in terms {
        t.all_vars(&mut avoid);
        t.all_type_vars(&mut avoid);
    }
    for ty in types {
        ty.all_vars(&mut avoid);
    }
    avoid
}

/// `/\c. \k:(s -o t -o c). k u v`, an inhabitant of `s (x) t`.
pub fn pair(u: Term, s: Type, v: Term, t: Type) -> Term {
    let avoid = avoid_of(&[&u, &v], &[&s, &t]);
    let c = fresh_name("c", &avoid);
    let k = fresh_name("k", &avoid);
    let kty = Type::arrows([s, t], Type::Var(c.clone()));
    Term::TyAbs(c, Box::new(Term::LinAbs(k.clone(), Some(kty), Box::new(Term::apps(Term::Var(k), [u, v])))))
}

/// Projection out of `s (x) t`: `\z:s (x) t. z [s_i] (\x1:s. \x2:t. x_i)`.
pub fn proj_at(i: usize, s: Type, t: Type) -> Result<Term, EncodeError> {
    let picked = match i {
        1 => s.clone(),
        2 => t.clone(),
        _ => return Err(EncodeError::IndexOutOfRange { index: i, size: 2 }),
    };
    let sel = Term::lam("x1", s.clone(), Term::lam("x2", t.clone(), Term::var(&format!("x{i}"))));
    Ok(Term::lam("z", tensor(s, t), Term::app(Term::ty_app(Term::var("z"), picked), sel)))
}

/// Polymorphic projection `/\a. /\b. \z:a (x) b. ...`.
pub fn proj(i: usize) -> Result<Term, EncodeError> {
    let body = proj_at(i, Type::var("a"), Type::var("b"))?;
    Ok(Term::ty_abs("a", Term::ty_abs("b", body)))
}

fn scott_node(tag: Option<bool>, tail: Option<Term>) -> Term {
    let a = Type::var("a");
    let k = Type::arrow(strs_ty(), a.clone());
    let body = match (tag, tail) {
        (Some(one), Some(rest)) => Term::app(Term::var(if one { "f1" } else { "f0" }), rest),
        _ => Term::var("x"),
    };
    Term::fold(
        strs_ty(),
        Term::ty_abs("a", Term::lam("f0", k.clone(), Term::lam("f1", k, Term::lam("x", a, body)))),
    )
}

/// Scott string, one `fold[StrS]` per constructor.
pub fn scott_string(w: &str) -> Result<Term, EncodeError> {
    let ls = letters(w)?;
    Ok(ls.iter().rev().fold(scott_node(None, None), |acc, &one| scott_node(Some(one), Some(acc))))
}

/// `k`-fold functorial promotion of a closed `t : s1 -o ... -o sn -o t`:
/// `t(1) = \!x1:s1. ... \!xn:sn. !(t x1 ... xn)`, iterated.
pub fn promote(t: &Term, n: usize, k: usize) -> Result<Term, EncodeError> {
    if !t.is_closed() {
        return Err(EncodeError::Open);
    }
    let ty = typecheck(Mode::Mueal, &Context::new(), t)
        .map_err(|err| EncodeError::Type { what: "promoted term".into(), err })?;
    let mut doms = Vec::with_capacity(n);
    let mut cur = &ty;
    for _ in 0..n {
        match cur {
            Type::Arrow(d, c) => {
                doms.push((**d).clone());
                cur = c;
            }
            _ => return Err(EncodeError::Arity { expected: n, ty: ty.clone() }),
        }
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut out = t.clone();
    for level in 0..k {
        let call = Term::apps(out, names.iter().map(|x| Term::var(x)));
        out = names
            .iter()
            .zip(&doms)
            .rev()
            .fold(Term::bang(call), |acc, (x, d)| Term::bang_lam(x, Type::bangs(level, d.clone()), acc));
    }
    Ok(out)
}

/// Loop state of `cast`: the composed prefix and the remaining Scott string.
fn cast_state() -> Type {
    tensor(endo(Type::var("a")), strs_ty())
}

/// `cast : Nat -o !StrS -o Str`, reading at most `n` letters of a Scott
/// string into a Church string.
pub fn cast_term() -> Term {
    let a = Type::var("a");
    let aa = endo(a.clone());
    let st = cast_state();
    let strs = strs_ty();
    let mk = |u: Term, v: Term| pair(u, aa.clone(), v, strs.clone());
    let id = |x: &str| Term::lam(x, a.clone(), Term::var(x));

    // (unfold u) [P] (\v. <f0, v>) (\v. <f1, v>) <id, S(e)>
    let head = Term::apps(
        Term::ty_app(Term::unfold(Term::var("u")), st.clone()),
        [
            Term::lam("v", strs.clone(), mk(Term::var("f0"), Term::var("v"))),
            Term::lam("v", strs.clone(), mk(Term::var("f1"), Term::var("v"))),
            mk(id("z"), scott_string("").expect("empty word")),
        ],
    );
    // let <f, v> = head in <\x. h (f x), v>
    let composed = Term::lam("x", a.clone(), Term::app(Term::var("h"), Term::app(Term::var("f"), Term::var("x"))));
    let next = Term::app(
        Term::ty_app(head, st.clone()),
        Term::lam("f", aa.clone(), Term::lam("v", strs.clone(), mk(composed, Term::var("v")))),
    );
    // \z:P. let <h, u> = z in next
    let step = Term::lam(
        "z",
        st.clone(),
        Term::app(
            Term::ty_app(Term::var("z"), st.clone()),
            Term::lam("h", aa.clone(), Term::lam("u", strs.clone(), next)),
        ),
    );
    let start = mk(id("x"), Term::var("w"));
    let result = Term::app(
        proj_at(1, aa.clone(), strs.clone()).expect("first projection"),
        Term::app(Term::var("g"), start),
    );
    let iterate = Term::app(Term::ty_app(Term::var("n"), st.clone()), Term::bang(step));
    let body = Term::let_bang("g", endo(st), iterate, Term::bang(result));
    Term::lam(
        "n",
        nat_ty(),
        Term::bang_lam(
            "w",
            strs.clone(),
            Term::ty_abs("a", Term::bang_lam("f0", aa.clone(), Term::bang_lam("f1", aa, body))),
        ),
    )
}

fn expect_type(what: &str, t: &Term, expected: &Type) -> Result<(), EncodeError> {
    let found = typecheck(Mode::Mueal, &Context::new(), t)
        .map_err(|err| EncodeError::Type { what: what.into(), err })?;
    if found.alpha_eq(expected) {
        Ok(())
    } else {
        Err(EncodeError::Mismatch { what: what.into(), expected: expected.clone(), found })
    }
}

/// `\!w:Str. cast(k+1) (tm !w) (f !w)` for `f : !Str -o !^(k+2) StrS` and a
/// clock `tm : !Str -o !^(k+1) Nat`.
pub fn assemble_fexptime(f: &Term, tm: &Term, k: usize) -> Result<Term, EncodeError> {
    let bstr = Type::bang(str_ty());
    expect_type("f", f, &Type::arrow(bstr.clone(), Type::bangs(k + 2, strs_ty())))?;
    expect_type("clock term", tm, &Type::arrow(bstr, Type::bangs(k + 1, nat_ty())))?;
    let cast = promote(&cast_term(), 2, k + 1)?;
    let w = || Term::bang(Term::var("w"));
    Ok(Term::bang_lam(
        "w",
        str_ty(),
        Term::apps(cast, [Term::app(tm.clone(), w()), Term::app(f.clone(), w())]),
    ))
}

/// `\s:Str. /\a. \!f:(a -o a). s [a] !f !f`, the length of a string as a numeral.
pub fn length_term() -> Term {
    let a = Type::var("a");
    let f = || Term::bang(Term::var("f"));
    Term::lam(
        "s",
        str_ty(),
        Term::ty_abs(
            "a",
            Term::bang_lam("f", endo(a.clone()), Term::apps(Term::ty_app(Term::var("s"), a), [f(), f()])),
        ),
    )
}

/// `\n:Nat. /\a. \!f:(a -o a). let !g = n [a] !f in !(\x:a. f (g x))`
pub fn succ_term() -> Term {
    let a = Type::var("a");
    let iterate = Term::app(Term::ty_app(Term::var("n"), a.clone()), Term::bang(Term::var("f")));
    let body = Term::bang(Term::lam(
        "x",
        a.clone(),
        Term::app(Term::var("f"), Term::app(Term::var("g"), Term::var("x"))),
    ));
    Term::lam(
        "n",
        nat_ty(),
        Term::ty_abs("a", Term::bang_lam("f", endo(a.clone()), Term::let_bang("g", endo(a), iterate, body))),
    )
}

/// Clock returning `|w| + 1`: `\!w:Str. !(succ (length w))`.
pub fn length_clock_term() -> Term {
    Term::bang_lam(
        "w",
        str_ty(),
        Term::bang(Term::app(succ_term(), Term::app(length_term(), Term::var("w")))),
    )
}

/// `\s:Str. let !k = s [StrS] !cons0 !cons1 in !(k S(e)) : Str -o !StrS`
pub fn scott_copy_term() -> Term {
    let strs = strs_ty();
    let cons = |one: bool| Term::lam("v", strs.clone(), scott_node(Some(one), Some(Term::var("v"))));
    let iterate = Term::apps(
        Term::ty_app(Term::var("s"), strs.clone()),
        [Term::bang(cons(false)), Term::bang(cons(true))],
    );
    let body = Term::bang(Term::app(Term::var("k"), scott_string("").expect("empty word")));
    Term::lam("s", str_ty(), Term::let_bang("k", endo(strs), iterate, body))
}
