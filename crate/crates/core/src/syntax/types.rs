use std::collections::BTreeSet;
use std::fmt;

use super::{fresh_name, Name};

/// Types of the elementary affine calculus, with the optional fixpoint former.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Var(Name),
    Arrow(Box<Type>, Box<Type>),
    Bang(Box<Type>),
    Forall(Name, Box<Type>),
    Mu(Name, Box<Type>),
    /// The unit `1`, kept distinct from its expansion `forall a. a -o a`.
    Unit,
}

/// Grammar classes of types.
///
/// Every strictly linear type is also linear; `classify` returns the most
/// specific class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeClass {
    Linear,
    StrictlyLinear,
    Banged,
}

impl TypeClass {
    pub fn is_linear(self) -> bool {
        !matches!(self, TypeClass::Banged)
    }

    pub fn is_strictly_linear(self) -> bool {
        matches!(self, TypeClass::StrictlyLinear)
    }
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeClass::Linear => "linear",
            TypeClass::StrictlyLinear => "strictly-linear",
            TypeClass::Banged => "banged",
        })
    }
}

impl Type {
    pub fn var(name: &str) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(src: Type, dst: Type) -> Type {
        Type::Arrow(Box::new(src), Box::new(dst))
    }

    /// `a1 -o a2 -o ... -o result`
    pub fn arrows<I: IntoIterator<Item = Type>>(args: I, result: Type) -> Type
    where
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::arrow(arg, acc))
    }

    pub fn bang(inner: Type) -> Type {
        Type::Bang(Box::new(inner))
    }

    pub fn bangs(n: usize, inner: Type) -> Type {
        (0..n).fold(inner, |acc, _| Type::bang(acc))
    }

    pub fn forall(var: &str, body: Type) -> Type {
        Type::Forall(var.into(), Box::new(body))
    }

    pub fn mu(var: &str, body: Type) -> Type {
        Type::Mu(var.into(), Box::new(body))
    }

    /// `forall a. a -o a`, the structural meaning of `1`.
    pub fn unit_expansion() -> Type {
        Type::forall("a", Type::arrow(Type::var("a"), Type::var("a")))
    }

    pub fn classify(&self) -> TypeClass {
        match self {
            Type::Var(_) => TypeClass::Linear,
            Type::Bang(_) => TypeClass::Banged,
            Type::Arrow(..) | Type::Forall(..) | Type::Mu(..) | Type::Unit => {
                TypeClass::StrictlyLinear
            }
        }
    }

    /// Checks that every quantifier and fixpoint body is strictly linear.
    /// Returns the offending binder body on failure.
    pub fn check_well_formed(&self) -> Result<(), &Type> {
        match self {
            Type::Var(_) | Type::Unit => Ok(()),
            Type::Arrow(a, b) => {
                a.check_well_formed()?;
                b.check_well_formed()
            }
            Type::Bang(a) => a.check_well_formed(),
            Type::Forall(_, body) | Type::Mu(_, body) => {
                if !body.classify().is_strictly_linear() {
                    return Err(self);
                }
                body.check_well_formed()
            }
        }
    }

    pub fn contains_mu(&self) -> bool {
        match self {
            Type::Var(_) | Type::Unit => false,
            Type::Mu(..) => true,
            Type::Arrow(a, b) => a.contains_mu() || b.contains_mu(),
            Type::Bang(a) | Type::Forall(_, a) => a.contains_mu(),
        }
    }

    pub fn contains_bang(&self) -> bool {
        match self {
            Type::Var(_) | Type::Unit => false,
            Type::Bang(_) => true,
            Type::Arrow(a, b) => a.contains_bang() || b.contains_bang(),
            Type::Forall(_, a) | Type::Mu(_, a) => a.contains_bang(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Type::Unit => {}
            Type::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Type::Bang(a) => a.collect_free(bound, out),
            Type::Forall(v, body) | Type::Mu(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, var: &str) -> bool {
        match self {
            Type::Var(a) => &**a == var,
            Type::Unit => false,
            Type::Arrow(a, b) => a.has_free(var) || b.has_free(var),
            Type::Bang(a) => a.has_free(var),
            Type::Forall(v, body) | Type::Mu(v, body) => &**v != var && body.has_free(var),
        }
    }

    /// All variable names mentioned anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(a) => {
                out.insert(a.clone());
            }
            Type::Unit => {}
            Type::Arrow(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Type::Bang(a) => a.all_vars(out),
            Type::Forall(v, body) | Type::Mu(v, body) => {
                out.insert(v.clone());
                body.all_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution `self{var := with}`.
    pub fn subst(&self, var: &str, with: &Type) -> Type {
        let fv = with.free_vars();
        self.subst_with(var, with, &fv)
    }

    fn subst_with(&self, var: &str, with: &Type, fv: &BTreeSet<Name>) -> Type {
        match self {
            Type::Var(a) => {
                if &**a == var {
                    with.clone()
                } else {
                    self.clone()
                }
            }
            Type::Unit => Type::Unit,
            Type::Arrow(a, b) => Type::arrow(a.subst_with(var, with, fv), b.subst_with(var, with, fv)),
            Type::Bang(a) => Type::bang(a.subst_with(var, with, fv)),
            Type::Forall(v, body) | Type::Mu(v, body) => {
                if &**v == var || !body.has_free(var) {
                    return self.clone();
                }
                let (v2, body2) = if fv.contains(v) {
                    let mut avoid = fv.clone();
                    body.all_vars(&mut avoid);
                    avoid.insert(var.into());
                    let v2 = fresh_name(v, &avoid);
                    let renamed = body.subst(v, &Type::Var(v2.clone()));
                    (v2, renamed)
                } else {
                    (v.clone(), (**body).clone())
                };
                let new_body = Box::new(body2.subst_with(var, with, fv));
                match self {
                    Type::Forall(..) => Type::Forall(v2, new_body),
                    _ => Type::Mu(v2, new_body),
                }
            }
        }
    }

    /// One unfolding `S{a := mu a. S}` of a fixpoint type.
    pub fn unfold_mu(&self) -> Option<Type> {
        match self {
            Type::Mu(v, body) => Some(body.subst(v, self)),
            _ => None,
        }
    }

    /// Replaces a top-level `1` by its quantified expansion.
    pub fn expand_unit(&self) -> Type {
        match self {
            Type::Unit => Type::unit_expansion(),
            other => other.clone(),
        }
    }

    /// Decidable alpha-equivalence; `1` is identified with `forall a. a -o a`.
    pub fn alpha_eq(&self, other: &Type) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }
}

pub(crate) type BinderPairs = Vec<(Name, Name)>;

fn lookup(env: &BinderPairs, a: &Name, b: &Name) -> bool {
    for (l, r) in env.iter().rev() {
        let hit_l = l == a;
        let hit_r = r == b;
        if hit_l || hit_r {
            return hit_l && hit_r;
        }
    }
    a == b
}

pub(crate) fn alpha_eq_in(x: &Type, y: &Type, env: &mut BinderPairs) -> bool {
    match (x, y) {
        (Type::Var(a), Type::Var(b)) => lookup(env, a, b),
        (Type::Unit, Type::Unit) => true,
        (Type::Unit, Type::Forall(..)) => alpha_eq_in(&Type::unit_expansion(), y, env),
        (Type::Forall(..), Type::Unit) => alpha_eq_in(x, &Type::unit_expansion(), env),
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            alpha_eq_in(a1, a2, env) && alpha_eq_in(b1, b2, env)
        }
        (Type::Bang(a), Type::Bang(b)) => alpha_eq_in(a, b, env),
        (Type::Forall(v1, b1), Type::Forall(v2, b2)) | (Type::Mu(v1, b1), Type::Mu(v2, b2)) => {
            env.push((v1.clone(), v2.clone()));
            let r = alpha_eq_in(b1, b2, env);
            env.pop();
            r
        }
        _ => false,
    }
}
