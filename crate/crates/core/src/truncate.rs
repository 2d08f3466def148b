//! Depth-0 truncation: every box collapses to the identity and every
//! exponential type to `1`.

use crate::syntax::{Term, Type};
use crate::typing::Context;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TruncateError {
    #[error("mu-unsupported: truncation is not defined on recursive types")]
    MuUnsupported,
    #[error("unsupported: truncation needs an empty theta zone")]
    ThetaNotEmpty,
}

/// `/\a. \x:a. x`, the identity at `1`.
pub fn unit_identity() -> Term {
    Term::ty_abs("a", Term::lam("x", Type::var("a"), Term::var("x")))
}

pub fn truncate_type(ty: &Type) -> Result<Type, TruncateError> {
    if ty.contains_mu() {
        return Err(TruncateError::MuUnsupported);
    }
    Ok(truncate_type_total(ty))
}

/// Same equations, extended through `mu` binders; used for annotations
/// inside terms so that term truncation stays total.
pub(crate) fn truncate_type_total(ty: &Type) -> Type {
    match ty {
        Type::Var(_) | Type::Unit => ty.clone(),
        Type::Bang(_) => Type::Unit,
        Type::Arrow(a, b) => Type::arrow(truncate_type_total(a), truncate_type_total(b)),
        Type::Forall(a, body) => Type::Forall(a.clone(), Box::new(truncate_type_total(body))),
        Type::Mu(a, body) => Type::Mu(a.clone(), Box::new(truncate_type_total(body))),
    }
}

pub fn truncate_term(t: &Term) -> Term {
    let ann = |ty: &Option<Type>| ty.as_ref().map(truncate_type_total);
    match t {
        Term::Var(_) => t.clone(),
        Term::Bang(_) => unit_identity(),
        Term::LinAbs(x, ty, body) => Term::LinAbs(x.clone(), ann(ty), Box::new(truncate_term(body))),
        // the argument type !S truncates to 1
        Term::BangAbs(x, ty, body) => {
            Term::LinAbs(x.clone(), ty.as_ref().map(|_| Type::Unit), Box::new(truncate_term(body)))
        }
        Term::App(f, a) => Term::app(truncate_term(f), truncate_term(a)),
        Term::TyAbs(a, body) => Term::TyAbs(a.clone(), Box::new(truncate_term(body))),
        Term::TyApp(f, ty) => Term::TyApp(Box::new(truncate_term(f)), ann(ty)),
        Term::Fold(mu, body) => Term::Fold(truncate_type_total(mu), Box::new(truncate_term(body))),
        Term::Unfold(body) => Term::Unfold(Box::new(truncate_term(body))),
    }
}

/// Truncated context `||Gamma|| | {} | {}`. Delta variables only occur
/// under boxes, which truncation removes.
pub fn truncate_context(ctx: &Context) -> Result<Context, TruncateError> {
    if !ctx.theta.is_empty() {
        return Err(TruncateError::ThetaNotEmpty);
    }
    let mut out = Context::new();
    for (x, ty) in &ctx.gamma {
        out.gamma.insert(x.clone(), truncate_type(ty)?);
    }
    Ok(out)
}

pub fn is_exponential_free(t: &Term) -> bool {
    fn ty_free(ty: &Type) -> bool {
        !ty.contains_bang()
    }
    match t {
        Term::Var(_) => true,
        Term::Bang(_) | Term::BangAbs(..) => false,
        Term::LinAbs(_, ty, body) => ty.as_ref().is_none_or(ty_free) && is_exponential_free(body),
        Term::TyApp(body, ty) => ty.as_ref().is_none_or(ty_free) && is_exponential_free(body),
        Term::Fold(mu, body) => ty_free(mu) && is_exponential_free(body),
        Term::App(f, a) => is_exponential_free(f) && is_exponential_free(a),
        Term::TyAbs(_, body) | Term::Unfold(body) => is_exponential_free(body),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{bool_term, bool_ty, church_string, str_ty};
    use crate::syntax::{alpha_eq, erase_annotations, parse_term, parse_type, print_term};
    use crate::typing::{typecheck, Mode};

    #[test]
    fn bang_collapses_to_identity() {
        let t = truncate_term(&Term::bang(bool_term(true)));
        assert_eq!(print_term(&t), "/\\a. \\x:a. x");
    }

    #[test]
    fn bang_abstraction() {
        let t = parse_term("\\!f:Bool. !(f y)").unwrap();
        let tr = truncate_term(&t);
        assert!(alpha_eq(&tr, &Term::lam("f", Type::Unit, unit_identity())));
        let erased = erase_annotations(&tr);
        assert!(alpha_eq(&erased, &parse_term("\\f. \\x. x").unwrap()));
    }

    #[test]
    fn church_string_truncates_to_projection() {
        let tr = truncate_term(&church_string("01").unwrap());
        let erased = erase_annotations(&tr);
        // type abstraction survives erasure as a bare /\a.
        let expected = erase_annotations(&parse_term("/\\a. \\f0. \\f1. /\\b. \\x:b. x").unwrap());
        assert!(alpha_eq(&erased, &expected), "{}", print_term(&erased));
    }

    #[test]
    fn type_equations() {
        assert_eq!(truncate_type(&Type::bang(str_ty())).unwrap(), Type::Unit);
        assert_eq!(truncate_type(&str_ty()).unwrap(), parse_type("forall a. 1 -o 1 -o 1").unwrap());
        assert_eq!(truncate_type(&bool_ty()).unwrap(), bool_ty());
        assert_eq!(truncate_type(&parse_type("mu b. b -o b").unwrap()), Err(TruncateError::MuUnsupported));
    }

    #[test]
    fn type_truncation_is_idempotent() {
        for src in ["!Str -o !!Bool", "forall a. !(a -o a) -o a", "Str[Bool]", "M3"] {
            let once = truncate_type(&parse_type(src).unwrap()).unwrap();
            assert_eq!(truncate_type(&once).unwrap(), once);
            assert!(!once.contains_bang());
        }
    }

    #[test]
    fn preserves_typing_of_a_string() {
        let t = church_string("0110").unwrap();
        let ty = typecheck(Mode::Eal, &Context::new(), &t).unwrap();
        let tr = truncate_term(&t);
        assert!(is_exponential_free(&tr));
        let tr_ty = typecheck(Mode::Eal, &Context::new(), &tr).unwrap();
        assert!(tr_ty.alpha_eq(&truncate_type(&ty).unwrap()));
    }

    #[test]
    fn theta_must_be_empty() {
        let mut ctx = Context::new();
        ctx.theta.insert("x".into(), bool_ty());
        assert_eq!(truncate_context(&ctx), Err(TruncateError::ThetaNotEmpty));
    }
}
