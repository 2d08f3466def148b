use super::types::{alpha_eq_in, BinderPairs};
use super::{Name, Term, Type};

/// Alpha-equivalence of annotated terms. Annotations are compared up to
/// alpha-equivalence of types; a missing annotation only matches a missing one.
pub fn alpha_eq(x: &Term, y: &Term) -> bool {
    let mut vars = Vec::new();
    let mut tyvars = Vec::new();
    go(x, y, &mut vars, &mut tyvars)
}

pub fn type_alpha_eq(x: &Type, y: &Type) -> bool {
    x.alpha_eq(y)
}

fn var_eq(env: &[(Name, Name)], a: &Name, b: &Name) -> bool {
    for (l, r) in env.iter().rev() {
        let hl = l == a;
        let hr = r == b;
        if hl || hr {
            return hl && hr;
        }
    }
    a == b
}

fn opt_ty_eq(a: &Option<Type>, b: &Option<Type>, tyvars: &mut BinderPairs) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => alpha_eq_in(a, b, tyvars),
        _ => false,
    }
}

fn go(x: &Term, y: &Term, vars: &mut Vec<(Name, Name)>, tyvars: &mut BinderPairs) -> bool {
    match (x, y) {
        (Term::Var(a), Term::Var(b)) => var_eq(vars, a, b),
        (Term::LinAbs(a, ta, ba), Term::LinAbs(b, tb, bb))
        | (Term::BangAbs(a, ta, ba), Term::BangAbs(b, tb, bb)) => {
            if !opt_ty_eq(ta, tb, tyvars) {
                return false;
            }
            vars.push((a.clone(), b.clone()));
            let r = go(ba, bb, vars, tyvars);
            vars.pop();
            r
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            go(f1, f2, vars, tyvars) && go(a1, a2, vars, tyvars)
        }
        (Term::Bang(a), Term::Bang(b)) | (Term::Unfold(a), Term::Unfold(b)) => {
            go(a, b, vars, tyvars)
        }
        (Term::TyAbs(a, ba), Term::TyAbs(b, bb)) => {
            tyvars.push((a.clone(), b.clone()));
            let r = go(ba, bb, vars, tyvars);
            tyvars.pop();
            r
        }
        (Term::TyApp(a, ta), Term::TyApp(b, tb)) => {
            opt_ty_eq(ta, tb, tyvars) && go(a, b, vars, tyvars)
        }
        (Term::Fold(ta, a), Term::Fold(tb, b)) => {
            alpha_eq_in(ta, tb, tyvars) && go(a, b, vars, tyvars)
        }
        _ => false,
    }
}
