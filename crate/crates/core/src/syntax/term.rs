use std::collections::BTreeSet;

use super::{Name, Type};

/// Church-style annotated terms.
///
/// `BangAbs(x, S, t)` binds `x` to an argument of type `!S`. Binder
/// annotations and type arguments are optional so that erased and
/// partially annotated terms share the representation; the type checker
/// reports or infers the missing pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    LinAbs(Name, Option<Type>, Box<Term>),
    BangAbs(Name, Option<Type>, Box<Term>),
    App(Box<Term>, Box<Term>),
    Bang(Box<Term>),
    TyAbs(Name, Box<Term>),
    TyApp(Box<Term>, Option<Type>),
    Fold(Type, Box<Term>),
    Unfold(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(x: &str, ty: Type, body: Term) -> Term {
        Term::LinAbs(x.into(), Some(ty), Box::new(body))
    }

    pub fn bang_lam(x: &str, core: Type, body: Term) -> Term {
        Term::BangAbs(x.into(), Some(core), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Box::new(t))
    }

    pub fn bangs(n: usize, t: Term) -> Term {
        (0..n).fold(t, |acc, _| Term::bang(acc))
    }

    pub fn ty_abs(a: &str, body: Term) -> Term {
        Term::TyAbs(a.into(), Box::new(body))
    }

    pub fn ty_app(t: Term, ty: Type) -> Term {
        Term::TyApp(Box::new(t), Some(ty))
    }

    pub fn fold(mu: Type, t: Term) -> Term {
        Term::Fold(mu, Box::new(t))
    }

    pub fn unfold(t: Term) -> Term {
        Term::Unfold(Box::new(t))
    }

    /// `let !x : core = u in body`, i.e. `(\!x:core. body) u`.
    pub fn let_bang(x: &str, core: Type, u: Term, body: Term) -> Term {
        Term::app(Term::bang_lam(x, core, body), u)
    }

    /// Immediate subterms in occurrence-path order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) => vec![],
            Term::LinAbs(_, _, b)
            | Term::BangAbs(_, _, b)
            | Term::Bang(b)
            | Term::TyAbs(_, b)
            | Term::TyApp(b, _)
            | Term::Fold(_, b)
            | Term::Unfold(b) => vec![b],
            Term::App(f, a) => vec![f, a],
        }
    }

    pub fn child_mut(&mut self, idx: usize) -> Option<&mut Term> {
        match (self, idx) {
            (
                Term::LinAbs(_, _, b)
                | Term::BangAbs(_, _, b)
                | Term::Bang(b)
                | Term::TyAbs(_, b)
                | Term::TyApp(b, _)
                | Term::Fold(_, b)
                | Term::Unfold(b),
                0,
            ) => Some(b),
            (Term::App(f, _), 0) => Some(f),
            (Term::App(_, a), 1) => Some(a),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::LinAbs(x, _, b) | Term::BangAbs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            other => {
                for c in other.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::LinAbs(y, _, b) | Term::BangAbs(y, _, b) => &**y != x && b.has_free(x),
            other => other.children().iter().any(|c| c.has_free(x)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every term-variable name mentioned, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::LinAbs(x, _, b) | Term::BangAbs(x, _, b) => {
                out.insert(x.clone());
                b.all_vars(out);
            }
            other => {
                for c in other.children() {
                    c.all_vars(out);
                }
            }
        }
    }

    /// Free type variables, counting annotations and excluding `TyAbs` binders.
    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_tyvars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_tyvars(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut add = |ty: &Type, bound: &Vec<Name>| {
            for v in ty.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Term::Var(_) => {}
            Term::LinAbs(_, ty, b) | Term::BangAbs(_, ty, b) => {
                if let Some(ty) = ty {
                    add(ty, bound);
                }
                b.collect_free_tyvars(bound, out);
            }
            Term::TyApp(b, ty) => {
                if let Some(ty) = ty {
                    add(ty, bound);
                }
                b.collect_free_tyvars(bound, out);
            }
            Term::Fold(ty, b) => {
                add(ty, bound);
                b.collect_free_tyvars(bound, out);
            }
            Term::TyAbs(a, b) => {
                bound.push(a.clone());
                b.collect_free_tyvars(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free_tyvars(bound, out);
                a.collect_free_tyvars(bound, out);
            }
            Term::Bang(b) | Term::Unfold(b) => b.collect_free_tyvars(bound, out),
        }
    }

    /// Every type-variable name mentioned in annotations or binders.
    pub fn all_type_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::LinAbs(_, Some(ty), _) | Term::BangAbs(_, Some(ty), _) | Term::TyApp(_, Some(ty)) | Term::Fold(ty, _) => {
                ty.all_vars(out)
            }
            Term::TyAbs(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.all_type_vars(out);
        }
    }

    pub fn contains_bang(&self) -> bool {
        match self {
            Term::Bang(_) | Term::BangAbs(..) => true,
            other => other.children().iter().any(|c| c.contains_bang()),
        }
    }

    /// Splits `f a1 ... an` into the head and its argument list.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }
}
