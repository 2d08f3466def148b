//! Type checking with three-zone contexts `Gamma | Delta | Theta`.
//!
//! `typecheck` works on fully annotated terms. Terms with omitted binder
//! types or `[_]` type arguments (as produced by the sugar) are first
//! completed by [`elaborate`], then checked by the same rules.

mod elab;

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{Name, OccurrencePath, Term, Type, TypeClass, HOLE};

pub use elab::elaborate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Eal,
    /// Enables `mu` types and `fold`/`unfold`.
    Mueal,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eal" => Ok(Mode::Eal),
            "mueal" => Ok(Mode::Mueal),
            other => Err(format!("unknown mode `{other}` (expected eal or mueal)")),
        }
    }
}

/// Typing context. Zones are expected to have disjoint domains.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub gamma: BTreeMap<Name, Type>,
    pub delta: BTreeMap<Name, Type>,
    pub theta: BTreeMap<Name, Type>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundVariable,
    ZoneMisuse,
    NonlinearUse,
    ClassViolation,
    ForallInstantiationNotLinear,
    BangBodyEscape,
    Mismatch,
    MuInEalMode,
    /// A bound type variable would escape through a context type.
    TypeVariableEscape,
    /// A binder type or type argument is missing and could not be inferred.
    MissingAnnotation,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeErrorKind::UnboundVariable => "unbound-variable",
            TypeErrorKind::ZoneMisuse => "zone-misuse",
            TypeErrorKind::NonlinearUse => "nonlinear-use",
            TypeErrorKind::ClassViolation => "class-violation",
            TypeErrorKind::ForallInstantiationNotLinear => "forall-instantiation-not-linear",
            TypeErrorKind::BangBodyEscape => "bang-body-escape",
            TypeErrorKind::Mismatch => "mismatch",
            TypeErrorKind::MuInEalMode => "mu-in-eal-mode",
            TypeErrorKind::TypeVariableEscape => "type-variable-escape",
            TypeErrorKind::MissingAnnotation => "missing-annotation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: OccurrencePath,
    pub message: String,
}

pub fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", format_path(&self.path), self.kind, self.message)
    }
}

pub fn classify_type(ty: &Type) -> TypeClass {
    ty.classify()
}

pub(crate) fn has_holes(t: &Term) -> bool {
    let hole_ty = |ty: &Type| ty.has_free(HOLE);
    match t {
        Term::LinAbs(_, None, _) | Term::BangAbs(_, None, _) | Term::TyApp(_, None) => true,
        Term::LinAbs(_, Some(ty), _) | Term::BangAbs(_, Some(ty), _) | Term::TyApp(_, Some(ty)) | Term::Fold(ty, _)
            if hole_ty(ty) =>
        {
            true
        }
        other => other.children().iter().any(|c| has_holes(c)),
    }
}

/// Synthesizes the type of `t` in `ctx`.
pub fn typecheck(mode: Mode, ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    if has_holes(t) {
        let (elaborated, _) = elaborate(mode, ctx, t)?;
        check(mode, ctx, &elaborated)
    } else {
        check(mode, ctx, t)
    }
}

/// Checks a closed term against an expected type, up to alpha-equivalence.
pub fn typecheck_closed(mode: Mode, t: &Term, expected: &Type) -> Result<(), TypeError> {
    let ty = typecheck(mode, &Context::new(), t)?;
    if ty.alpha_eq(expected) {
        Ok(())
    } else {
        Err(TypeError {
            kind: TypeErrorKind::Mismatch,
            path: vec![],
            message: format!("expected `{expected}`, found `{ty}`"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Zone {
    Gamma,
    Delta,
    Theta,
}

struct Entry {
    name: Name,
    zone: Zone,
    ty: Type,
    used: bool,
}

struct Checker {
    mode: Mode,
    env: Vec<Entry>,
    path: OccurrencePath,
}

/// Checks a fully annotated term; missing annotations are errors.
pub fn check(mode: Mode, ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    let mut ck = Checker { mode, env: Vec::new(), path: Vec::new() };
    for (zone, map) in [(Zone::Gamma, &ctx.gamma), (Zone::Delta, &ctx.delta), (Zone::Theta, &ctx.theta)] {
        for (name, ty) in map {
            ck.check_annotation(ty)?;
            let class = ty.classify();
            let ok = match zone {
                Zone::Gamma => class.is_linear(),
                Zone::Delta => class == TypeClass::Banged,
                Zone::Theta => true,
            };
            if !ok {
                return ck.fail(
                    TypeErrorKind::ClassViolation,
                    format!("context entry `{name} : {ty}` has class {class}, not allowed in its zone"),
                );
            }
            ck.env.push(Entry { name: name.clone(), zone, ty: ty.clone(), used: false });
        }
    }
    ck.synth(t)
}

impl Checker {
    fn fail<T>(&self, kind: TypeErrorKind, message: String) -> Result<T, TypeError> {
        Err(TypeError { kind, path: self.path.clone(), message })
    }

    fn lookup(&mut self, x: &str) -> Option<&mut Entry> {
        self.env.iter_mut().rev().find(|e| &*e.name == x)
    }

    fn check_annotation(&self, ty: &Type) -> Result<(), TypeError> {
        if ty.has_free(HOLE) {
            return self.fail(TypeErrorKind::MissingAnnotation, format!("type `{ty}` contains a hole"));
        }
        if self.mode == Mode::Eal && ty.contains_mu() {
            return self.fail(TypeErrorKind::MuInEalMode, format!("recursive type `{ty}` needs mueal mode"));
        }
        if let Err(bad) = ty.check_well_formed() {
            return self.fail(
                TypeErrorKind::ClassViolation,
                format!("quantifier body in `{bad}` is not strictly linear"),
            );
        }
        Ok(())
    }

    fn child<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Result<T, TypeError>) -> Result<T, TypeError> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn synth(&mut self, t: &Term) -> Result<Type, TypeError> {
        match t {
            Term::Var(x) => {
                let Some(e) = self.lookup(x) else {
                    return self.fail(TypeErrorKind::UnboundVariable, format!("`{x}` is not bound"));
                };
                match e.zone {
                    Zone::Gamma => {
                        if e.used {
                            return self.fail(
                                TypeErrorKind::NonlinearUse,
                                format!("linear variable `{x}` used more than once"),
                            );
                        }
                        e.used = true;
                        Ok(e.ty.clone())
                    }
                    Zone::Theta => Ok(e.ty.clone()),
                    Zone::Delta => self.fail(
                        TypeErrorKind::ZoneMisuse,
                        format!("banged variable `{x}` used outside a `!` box"),
                    ),
                }
            }
            Term::LinAbs(x, ty, body) => {
                let Some(ty) = ty else {
                    return self.fail(TypeErrorKind::MissingAnnotation, format!("binder `{x}` has no type"));
                };
                self.check_annotation(ty)?;
                if !ty.classify().is_linear() {
                    return self.fail(
                        TypeErrorKind::ClassViolation,
                        format!("linear binder `{x}` has banged type `{ty}`"),
                    );
                }
                self.env.push(Entry { name: x.clone(), zone: Zone::Gamma, ty: ty.clone(), used: false });
                let r = self.child(0, |c| c.synth(body));
                self.env.pop();
                Ok(Type::arrow(ty.clone(), r?))
            }
            Term::BangAbs(x, core, body) => {
                let Some(core) = core else {
                    return self.fail(TypeErrorKind::MissingAnnotation, format!("binder `{x}` has no type"));
                };
                self.check_annotation(core)?;
                let bty = Type::bang(core.clone());
                self.env.push(Entry { name: x.clone(), zone: Zone::Delta, ty: bty.clone(), used: false });
                let r = self.child(0, |c| c.synth(body));
                self.env.pop();
                Ok(Type::arrow(bty, r?))
            }
            Term::App(f, a) => {
                let fty = self.child(0, |c| c.synth(f))?;
                let Type::Arrow(dom, cod) = fty else {
                    return self.child(0, |c| {
                        c.fail(TypeErrorKind::Mismatch, format!("applied term has non-function type `{fty}`"))
                    });
                };
                let aty = self.child(1, |c| c.synth(a))?;
                if !aty.alpha_eq(&dom) {
                    return self.child(1, |c| {
                        c.fail(TypeErrorKind::Mismatch, format!("argument has type `{aty}`, expected `{dom}`"))
                    });
                }
                Ok(*cod)
            }
            Term::Bang(body) => {
                let mut boxed = Vec::new();
                for x in body.free_vars() {
                    let Some(e) = self.lookup(&x) else {
                        return self.fail(TypeErrorKind::UnboundVariable, format!("`{x}` is not bound"));
                    };
                    if e.zone != Zone::Delta {
                        let zone = if e.zone == Zone::Gamma { "linear" } else { "temporary" };
                        return self.fail(
                            TypeErrorKind::BangBodyEscape,
                            format!("{zone} variable `{x}` occurs inside a `!` box"),
                        );
                    }
                    let Type::Bang(inner) = &e.ty else {
                        unreachable!("delta entries are banged")
                    };
                    boxed.push(Entry { name: x, zone: Zone::Theta, ty: (**inner).clone(), used: false });
                }
                let saved = std::mem::replace(&mut self.env, boxed);
                let r = self.child(0, |c| c.synth(body));
                self.env = saved;
                Ok(Type::bang(r?))
            }
            Term::TyAbs(a, body) => {
                for x in body.free_vars() {
                    if let Some(e) = self.lookup(&x) {
                        if e.ty.has_free(a) {
                            let ty = e.ty.clone();
                            return self.fail(
                                TypeErrorKind::TypeVariableEscape,
                                format!("type variable `{a}` is free in the type `{ty}` of `{x}`"),
                            );
                        }
                    }
                }
                let bty = self.child(0, |c| c.synth(body))?;
                if !bty.classify().is_strictly_linear() {
                    return self.fail(
                        TypeErrorKind::ClassViolation,
                        format!("type abstraction body has type `{bty}`, which is not strictly linear"),
                    );
                }
                Ok(Type::Forall(a.clone(), Box::new(bty)))
            }
            Term::TyApp(body, arg) => {
                let Some(arg) = arg else {
                    return self.fail(TypeErrorKind::MissingAnnotation, "type argument `_` not inferred".into());
                };
                self.check_annotation(arg)?;
                let bty = self.child(0, |c| c.synth(body))?.expand_unit();
                let Type::Forall(a, s) = bty else {
                    return self.fail(
                        TypeErrorKind::Mismatch,
                        format!("type application to a term of non-polymorphic type `{bty}`"),
                    );
                };
                if !arg.classify().is_linear() {
                    return self.fail(
                        TypeErrorKind::ForallInstantiationNotLinear,
                        format!("cannot instantiate `{a}` with banged type `{arg}`"),
                    );
                }
                Ok(s.subst(&a, arg))
            }
            Term::Fold(mu, body) => {
                if self.mode == Mode::Eal {
                    return self.fail(TypeErrorKind::MuInEalMode, "`fold` needs mueal mode".into());
                }
                self.check_annotation(mu)?;
                let Some(unfolded) = mu.unfold_mu() else {
                    return self.fail(TypeErrorKind::Mismatch, format!("fold annotation `{mu}` is not a mu type"));
                };
                let bty = self.child(0, |c| c.synth(body))?;
                if !bty.alpha_eq(&unfolded) {
                    return self.fail(
                        TypeErrorKind::Mismatch,
                        format!("fold body has type `{bty}`, expected `{unfolded}`"),
                    );
                }
                Ok(mu.clone())
            }
            Term::Unfold(body) => {
                if self.mode == Mode::Eal {
                    return self.fail(TypeErrorKind::MuInEalMode, "`unfold` needs mueal mode".into());
                }
                let bty = self.child(0, |c| c.synth(body))?;
                match bty.unfold_mu() {
                    Some(u) => Ok(u),
                    None => self.fail(TypeErrorKind::Mismatch, format!("unfold of non-mu type `{bty}`")),
                }
            }
        }
    }
}
