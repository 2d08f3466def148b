//! Named type abbreviations.

use std::collections::BTreeSet;

use super::{fresh_name, Name, Type};

fn endo(a: Type) -> Type {
    Type::arrow(a.clone(), a)
}

/// `forall a. a -o a -o a`
pub fn bool_ty() -> Type {
    Type::forall("a", Type::arrows([Type::var("a"), Type::var("a")], Type::var("a")))
}

/// `Str[s] = !(s -o s) -o !(s -o s) -o !(s -o s)`
pub fn str_of(sigma: Type) -> Type {
    let e = Type::bang(endo(sigma));
    Type::arrows([e.clone(), e.clone()], e)
}

/// `forall a. Str[a]`
pub fn str_ty() -> Type {
    Type::forall("a", str_of(Type::var("a")))
}

/// `forall a. !(a -o a) -o !(a -o a)`
pub fn nat_ty() -> Type {
    let e = Type::bang(endo(Type::var("a")));
    Type::forall("a", Type::arrow(e.clone(), e))
}

/// Scott strings, `mu b. forall a. (b -o a) -o (b -o a) -o a -o a`.
pub fn strs_ty() -> Type {
    let k = Type::arrow(Type::var("b"), Type::var("a"));
    Type::mu(
        "b",
        Type::forall("a", Type::arrows([k.clone(), k, Type::var("a")], Type::var("a"))),
    )
}

/// `forall c. (s -o t -o c) -o c`, with `c` chosen fresh for `s` and `t`.
pub fn tensor(s: Type, t: Type) -> Type {
    let mut avoid = BTreeSet::<Name>::new();
    s.all_vars(&mut avoid);
    t.all_vars(&mut avoid);
    let c: Name = if avoid.contains("c") { fresh_name("c", &avoid) } else { "c".into() };
    let cv = Type::Var(c.clone());
    Type::Forall(c, Box::new(Type::arrow(Type::arrows([s, t], cv.clone()), cv)))
}

/// `forall a. a -o ... -o a -o a` with `k` arguments; `k >= 1`.
pub fn monoid_ty(k: usize) -> Type {
    assert!(k >= 1, "monoid type needs at least one element");
    Type::forall("a", Type::arrows(vec![Type::var("a"); k], Type::var("a")))
}
