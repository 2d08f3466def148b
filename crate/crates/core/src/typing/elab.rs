//! Completion of omitted annotations by first-order unification.
//!
//! Unknown types are represented by type variables named `?n`, which the
//! concrete syntax cannot produce. Elaboration only computes annotations;
//! all typing rules are enforced afterwards by the strict checker.

use std::collections::BTreeSet;

use super::{Context, Mode, TypeError, TypeErrorKind};
use crate::syntax::{Name, OccurrencePath, Term, Type, HOLE};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Zone {
    Linear,
    Banged,
    Temporary,
}

struct Elab {
    metas: Vec<Option<Type>>,
    env: Vec<(Name, Zone, Type)>,
    path: OccurrencePath,
}

fn meta_index(name: &str) -> Option<usize> {
    name.strip_prefix('?').and_then(|n| n.parse().ok())
}

/// Fills every omitted annotation of `t`, returning the completed term and
/// its type. The result is then suitable for [`super::check`].
pub fn elaborate(mode: Mode, ctx: &Context, t: &Term) -> Result<(Term, Type), TypeError> {
    let _ = mode;
    let mut el = Elab { metas: Vec::new(), env: Vec::new(), path: Vec::new() };
    for (zone, map) in [(Zone::Linear, &ctx.gamma), (Zone::Banged, &ctx.delta), (Zone::Temporary, &ctx.theta)] {
        for (x, ty) in map {
            el.env.push((x.clone(), zone, ty.clone()));
        }
    }
    let (out, ty) = el.synth(t)?;
    let mut path = Vec::new();
    let out = el.zonk_term(&out, &mut path)?;
    Ok((out, el.zonk(&ty)))
}

impl Elab {
    fn fail<T>(&self, kind: TypeErrorKind, message: String) -> Result<T, TypeError> {
        Err(TypeError { kind, path: self.path.clone(), message })
    }

    fn child<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Result<T, TypeError>) -> Result<T, TypeError> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn fresh_meta(&mut self) -> Type {
        self.metas.push(None);
        Type::Var(format!("?{}", self.metas.len() - 1).into())
    }

    /// Replaces each free `_` by its own unknown.
    fn instantiate_holes(&mut self, ty: &Type) -> Type {
        match ty {
            Type::Var(v) if &**v == HOLE => self.fresh_meta(),
            Type::Var(_) | Type::Unit => ty.clone(),
            Type::Arrow(a, b) => Type::arrow(self.instantiate_holes(a), self.instantiate_holes(b)),
            Type::Bang(a) => Type::bang(self.instantiate_holes(a)),
            Type::Forall(v, b) if &**v != HOLE => Type::Forall(v.clone(), Box::new(self.instantiate_holes(b))),
            Type::Mu(v, b) if &**v != HOLE => Type::Mu(v.clone(), Box::new(self.instantiate_holes(b))),
            Type::Forall(..) | Type::Mu(..) => ty.clone(),
        }
    }

    fn annotation(&mut self, ann: &Option<Type>) -> Type {
        match ann {
            Some(ty) => self.instantiate_holes(ty),
            None => self.fresh_meta(),
        }
    }

    fn resolve(&self, ty: &Type) -> Type {
        let mut cur = ty.clone();
        while let Type::Var(v) = &cur {
            match meta_index(v).and_then(|i| self.metas[i].clone()) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur
    }

    fn zonk(&self, ty: &Type) -> Type {
        match self.resolve(ty) {
            Type::Arrow(a, b) => Type::arrow(self.zonk(&a), self.zonk(&b)),
            Type::Bang(a) => Type::bang(self.zonk(&a)),
            Type::Forall(v, b) => Type::Forall(v, Box::new(self.zonk(&b))),
            Type::Mu(v, b) => Type::Mu(v, Box::new(self.zonk(&b))),
            other => other,
        }
    }

    fn unify(&mut self, a: &Type, b: &Type, env: &mut Vec<(Name, Name)>) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (Type::Var(x), Type::Var(y)) if meta_index(x).is_some() && x == y => true,
            (Type::Var(x), _) if meta_index(x).is_some() => self.bind(x, &b, env),
            (_, Type::Var(y)) if meta_index(y).is_some() => self.bind(y, &a, env),
            (Type::Var(x), Type::Var(y)) => {
                for (l, r) in env.iter().rev() {
                    if l == x || r == y {
                        return l == x && r == y;
                    }
                }
                x == y
            }
            (Type::Unit, Type::Unit) => true,
            (Type::Unit, Type::Forall(..)) => self.unify(&Type::unit_expansion(), &b, env),
            (Type::Forall(..), Type::Unit) => self.unify(&a, &Type::unit_expansion(), env),
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => self.unify(a1, a2, env) && self.unify(b1, b2, env),
            (Type::Bang(x), Type::Bang(y)) => self.unify(x, y, env),
            (Type::Forall(v1, b1), Type::Forall(v2, b2)) | (Type::Mu(v1, b1), Type::Mu(v2, b2)) => {
                env.push((v1.clone(), v2.clone()));
                let r = self.unify(b1, b2, env);
                env.pop();
                r
            }
            _ => false,
        }
    }

    fn bind(&mut self, meta: &str, ty: &Type, env: &[(Name, Name)]) -> bool {
        let ty = self.zonk(ty);
        let fv = ty.free_vars();
        if fv.contains(meta) {
            return false;
        }
        // a solution may not mention variables bound inside the unified types
        let bound: BTreeSet<&Name> = env.iter().flat_map(|(l, r)| [l, r]).collect();
        if fv.iter().any(|v| bound.contains(v)) {
            return false;
        }
        let i = meta_index(meta).expect("meta name");
        self.metas[i] = Some(ty);
        true
    }

    fn mismatch<T>(&self, what: &str, expected: &Type, found: &Type) -> Result<T, TypeError> {
        self.fail(
            TypeErrorKind::Mismatch,
            format!("{what}: expected `{}`, found `{}`", self.zonk(expected), self.zonk(found)),
        )
    }

    fn synth(&mut self, t: &Term) -> Result<(Term, Type), TypeError> {
        match t {
            Term::Var(x) => match self.env.iter().rev().find(|(n, _, _)| n == x) {
                Some((_, _, ty)) => Ok((t.clone(), ty.clone())),
                None => self.fail(TypeErrorKind::UnboundVariable, format!("`{x}` is not bound")),
            },
            Term::LinAbs(x, ann, body) => {
                let ty = self.annotation(ann);
                self.env.push((x.clone(), Zone::Linear, ty.clone()));
                let r = self.child(0, |c| c.synth(body));
                self.env.pop();
                let (body, bty) = r?;
                Ok((Term::LinAbs(x.clone(), Some(ty.clone()), Box::new(body)), Type::arrow(ty, bty)))
            }
            Term::BangAbs(x, ann, body) => {
                let core = self.annotation(ann);
                let bty = Type::bang(core.clone());
                self.env.push((x.clone(), Zone::Banged, bty.clone()));
                let r = self.child(0, |c| c.synth(body));
                self.env.pop();
                let (body, rty) = r?;
                Ok((Term::BangAbs(x.clone(), Some(core), Box::new(body)), Type::arrow(bty, rty)))
            }
            Term::App(f, a) => {
                let arg_first = match &**f {
                    Term::LinAbs(_, ann, _) | Term::BangAbs(_, ann, _) => {
                        ann.as_ref().map_or(true, |ty| ty.has_free(HOLE))
                    }
                    _ => false,
                };
                let ((f2, fty), (a2, aty)) = if arg_first {
                    let ar = self.child(1, |c| c.synth(a))?;
                    let fr = self.child(0, |c| c.synth(f))?;
                    (fr, ar)
                } else {
                    let fr = self.child(0, |c| c.synth(f))?;
                    let ar = self.child(1, |c| c.synth(a))?;
                    (fr, ar)
                };
                let cod = match self.resolve(&fty) {
                    Type::Arrow(dom, cod) => {
                        if !self.unify(&dom, &aty, &mut Vec::new()) {
                            return self.child(1, |c| c.mismatch("argument type", &dom, &aty));
                        }
                        *cod
                    }
                    Type::Var(v) if meta_index(&v).is_some() => {
                        let cod = self.fresh_meta();
                        let want = Type::arrow(aty, cod.clone());
                        self.unify(&fty, &want, &mut Vec::new());
                        cod
                    }
                    other => {
                        let other = self.zonk(&other);
                        return self.child(0, |c| {
                            c.fail(TypeErrorKind::Mismatch, format!("applied term has non-function type `{other}`"))
                        });
                    }
                };
                Ok((Term::app(f2, a2), cod))
            }
            Term::Bang(body) => {
                let boxed: Vec<_> = self
                    .env
                    .iter()
                    .map(|(x, zone, ty)| match (zone, self.resolve(ty)) {
                        (Zone::Banged, Type::Bang(inner)) => (x.clone(), Zone::Temporary, *inner),
                        _ => (x.clone(), *zone, ty.clone()),
                    })
                    .collect();
                let saved = std::mem::replace(&mut self.env, boxed);
                let r = self.child(0, |c| c.synth(body));
                self.env = saved;
                let (body, ty) = r?;
                Ok((Term::bang(body), Type::bang(ty)))
            }
            Term::TyAbs(a, body) => {
                let (body, ty) = self.child(0, |c| c.synth(body))?;
                Ok((Term::TyAbs(a.clone(), Box::new(body)), Type::Forall(a.clone(), Box::new(ty))))
            }
            Term::TyApp(body, ann) => {
                let (body, bty) = self.child(0, |c| c.synth(body))?;
                match self.resolve(&bty).expand_unit() {
                    Type::Forall(v, s) => {
                        let arg = self.annotation(ann);
                        let s = self.zonk(&s);
                        Ok((Term::TyApp(Box::new(body), Some(arg.clone())), s.subst(&v, &arg)))
                    }
                    other => {
                        let other = self.zonk(&other);
                        if matches!(&other, Type::Var(v) if meta_index(v).is_some()) {
                            self.fail(
                                TypeErrorKind::MissingAnnotation,
                                "cannot infer the polymorphic type of an instantiated term".into(),
                            )
                        } else {
                            self.fail(
                                TypeErrorKind::Mismatch,
                                format!("type application to a term of non-polymorphic type `{other}`"),
                            )
                        }
                    }
                }
            }
            Term::Fold(mu, body) => {
                let mu = self.instantiate_holes(mu);
                let Some(unfolded) = mu.unfold_mu() else {
                    return self.fail(TypeErrorKind::Mismatch, format!("fold annotation `{mu}` is not a mu type"));
                };
                let (body, bty) = self.child(0, |c| c.synth(body))?;
                if !self.unify(&unfolded, &bty, &mut Vec::new()) {
                    return self.mismatch("fold body", &unfolded, &bty);
                }
                Ok((Term::fold(mu.clone(), body), mu))
            }
            Term::Unfold(body) => {
                let (body, bty) = self.child(0, |c| c.synth(body))?;
                let bty = self.zonk(&bty);
                match bty.unfold_mu() {
                    Some(u) => Ok((Term::unfold(body), u)),
                    None => self.fail(TypeErrorKind::Mismatch, format!("unfold of non-mu type `{bty}`")),
                }
            }
        }
    }

    fn zonk_annotation(&self, ty: &Type, path: &OccurrencePath) -> Result<Type, TypeError> {
        let z = self.zonk(ty);
        if z.free_vars().iter().any(|v| meta_index(v).is_some()) {
            return Err(TypeError {
                kind: TypeErrorKind::MissingAnnotation,
                path: path.clone(),
                message: "could not infer an omitted type".into(),
            });
        }
        Ok(z)
    }

    fn zonk_term(&self, t: &Term, path: &mut OccurrencePath) -> Result<Term, TypeError> {
        let ann = |ty: &Option<Type>, path: &OccurrencePath| -> Result<Option<Type>, TypeError> {
            ty.as_ref().map(|ty| self.zonk_annotation(ty, path)).transpose()
        };
        let sub = |c: &Term, i: usize, path: &mut OccurrencePath| {
            path.push(i);
            let r = self.zonk_term(c, path);
            path.pop();
            r.map(Box::new)
        };
        Ok(match t {
            Term::Var(_) => t.clone(),
            Term::LinAbs(x, ty, b) => Term::LinAbs(x.clone(), ann(ty, path)?, sub(b, 0, path)?),
            Term::BangAbs(x, ty, b) => Term::BangAbs(x.clone(), ann(ty, path)?, sub(b, 0, path)?),
            Term::App(f, a) => Term::App(sub(f, 0, path)?, sub(a, 1, path)?),
            Term::Bang(b) => Term::Bang(sub(b, 0, path)?),
            Term::TyAbs(a, b) => Term::TyAbs(a.clone(), sub(b, 0, path)?),
            Term::TyApp(b, ty) => Term::TyApp(sub(b, 0, path)?, ann(ty, path)?),
            Term::Fold(ty, b) => Term::Fold(self.zonk_annotation(ty, path)?, sub(b, 0, path)?),
            Term::Unfold(b) => Term::Unfold(sub(b, 0, path)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::named::{bool_ty, str_ty};
    use crate::syntax::{parse_term, parse_type};
    use crate::typing::{has_holes, typecheck};

    fn elab(src: &str) -> Result<(Term, Type), TypeError> {
        elaborate(Mode::Mueal, &Context::new(), &parse_term(src).unwrap())
    }

    #[test]
    fn let_bang_gets_its_binder_type() {
        let src = "\\s:Str. let !g = s [a] !(\\x:a. x) !(\\x:a. x) in !(g y)";
        let mut ctx = Context::new();
        ctx.delta.insert("y".into(), Type::bang(Type::var("a")));
        let (t, _) = elaborate(Mode::Eal, &ctx, &parse_term(src).unwrap()).unwrap();
        assert!(!has_holes(&t));
        let ty = typecheck(Mode::Eal, &ctx, &t).unwrap();
        assert!(ty.alpha_eq(&parse_type("Str -o !a").unwrap()));
    }

    #[test]
    fn pair_and_projection() {
        let (t, ty) = elab("\\x:a. \\y:b. let <u, v> = <x, y> in u").unwrap();
        assert!(ty.alpha_eq(&parse_type("a -o b -o a").unwrap()), "{ty}");
        assert!(!has_holes(&t));
    }

    #[test]
    fn case_on_scott_string() {
        let src = "\\s:StrS. case s of {0 x -> tt | 1 y -> tt | e -> ff}";
        let mut ctx = Context::new();
        ctx.theta.insert("tt".into(), bool_ty());
        ctx.theta.insert("ff".into(), bool_ty());
        let (_, ty) = elaborate(Mode::Mueal, &ctx, &parse_term(src).unwrap()).unwrap();
        assert!(ty.alpha_eq(&parse_type("StrS -o Bool").unwrap()), "{ty}");
    }

    #[test]
    fn uninferable_type_argument() {
        let e = elab("/\\a. \\x:a. (/\\b. \\y:b. y) [_]").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::MissingAnnotation);
    }

    #[test]
    fn fully_annotated_terms_are_unchanged() {
        let src = "/\\a. \\!f0:(a -o a). \\!f1:(a -o a). !(\\x:a. f0 (f1 x))";
        let t = parse_term(src).unwrap();
        let (out, ty) = elaborate(Mode::Eal, &Context::new(), &t).unwrap();
        assert_eq!(out, t);
        assert!(ty.alpha_eq(&str_ty()));
    }
}
