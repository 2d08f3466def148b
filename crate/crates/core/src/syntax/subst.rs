use std::collections::BTreeSet;

use super::{fresh_name, Name, Term, Type};

/// Capture-avoiding substitution `t{x := u}`.
pub fn subst_term(t: &Term, x: &str, u: &Term) -> Term {
    let fv = u.free_vars();
    let ftv = u.free_type_vars();
    subst_rec(t, x, u, &fv, &ftv)
}

fn subst_rec(t: &Term, x: &str, u: &Term, fv: &BTreeSet<Name>, ftv: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(y) => {
            if &**y == x {
                u.clone()
            } else {
                t.clone()
            }
        }
        Term::LinAbs(y, ty, b) | Term::BangAbs(y, ty, b) => {
            if &**y == x {
                return t.clone();
            }
            let (y2, b2) = if fv.contains(y) {
                if !b.has_free(x) {
                    return t.clone();
                }
                let mut avoid = fv.clone();
                b.all_vars(&mut avoid);
                avoid.insert(x.into());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst_term(b, y, &Term::Var(y2.clone()));
                (y2, renamed)
            } else {
                (y.clone(), (**b).clone())
            };
            let body = Box::new(subst_rec(&b2, x, u, fv, ftv));
            match t {
                Term::LinAbs(..) => Term::LinAbs(y2, ty.clone(), body),
                _ => Term::BangAbs(y2, ty.clone(), body),
            }
        }
        Term::TyAbs(a, b) => {
            // the substituted term must not have its free type variables captured
            if ftv.contains(a) {
                if !b.has_free(x) {
                    return t.clone();
                }
                let mut avoid = ftv.clone();
                b.all_type_vars(&mut avoid);
                let a2 = fresh_name(a, &avoid);
                let renamed = subst_type_in_term(b, a, &Type::Var(a2.clone()));
                Term::TyAbs(a2, Box::new(subst_rec(&renamed, x, u, fv, ftv)))
            } else {
                Term::TyAbs(a.clone(), Box::new(subst_rec(b, x, u, fv, ftv)))
            }
        }
        Term::App(f, a) => Term::app(subst_rec(f, x, u, fv, ftv), subst_rec(a, x, u, fv, ftv)),
        Term::Bang(b) => Term::bang(subst_rec(b, x, u, fv, ftv)),
        Term::TyApp(b, ty) => Term::TyApp(Box::new(subst_rec(b, x, u, fv, ftv)), ty.clone()),
        Term::Fold(ty, b) => Term::fold(ty.clone(), subst_rec(b, x, u, fv, ftv)),
        Term::Unfold(b) => Term::unfold(subst_rec(b, x, u, fv, ftv)),
    }
}

/// Capture-avoiding substitution of a type for a type variable throughout a
/// term's annotations.
pub fn subst_type_in_term(t: &Term, a: &str, ty: &Type) -> Term {
    let fv = ty.free_vars();
    subst_ty_rec(t, a, ty, &fv)
}

fn subst_ty_rec(t: &Term, a: &str, ty: &Type, fv: &BTreeSet<Name>) -> Term {
    let on = |o: &Option<Type>| o.as_ref().map(|s| s.subst(a, ty));
    match t {
        Term::Var(_) => t.clone(),
        Term::LinAbs(x, d, b) => Term::LinAbs(x.clone(), on(d), Box::new(subst_ty_rec(b, a, ty, fv))),
        Term::BangAbs(x, d, b) => {
            Term::BangAbs(x.clone(), on(d), Box::new(subst_ty_rec(b, a, ty, fv)))
        }
        Term::App(f, u) => Term::app(subst_ty_rec(f, a, ty, fv), subst_ty_rec(u, a, ty, fv)),
        Term::Bang(b) => Term::bang(subst_ty_rec(b, a, ty, fv)),
        Term::TyAbs(b_var, b) => {
            if &**b_var == a {
                return t.clone();
            }
            if fv.contains(b_var) {
                if !b.free_type_vars().contains(a) {
                    return t.clone();
                }
                let mut avoid = fv.clone();
                b.all_type_vars(&mut avoid);
                avoid.insert(a.into());
                let v2 = fresh_name(b_var, &avoid);
                let renamed = subst_type_in_term(b, b_var, &Type::Var(v2.clone()));
                Term::TyAbs(v2, Box::new(subst_ty_rec(&renamed, a, ty, fv)))
            } else {
                Term::TyAbs(b_var.clone(), Box::new(subst_ty_rec(b, a, ty, fv)))
            }
        }
        Term::TyApp(b, arg) => Term::TyApp(Box::new(subst_ty_rec(b, a, ty, fv)), on(arg)),
        Term::Fold(mu, b) => Term::fold(mu.subst(a, ty), subst_ty_rec(b, a, ty, fv)),
        Term::Unfold(b) => Term::unfold(subst_ty_rec(b, a, ty, fv)),
    }
}

/// Type substitution on types; re-exported for symmetry with the term versions.
pub fn subst_type(sigma: &Type, a: &str, ty: &Type) -> Type {
    sigma.subst(a, ty)
}
