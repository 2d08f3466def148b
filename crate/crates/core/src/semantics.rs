//! Finite set-theoretic semantics of exponential-free terms, endomorphism
//! monoids and the word-to-endomorphism tables used by extraction.
//!
//! Type variables denote a base set `{0..base}`. Under
//! [`ForallPolicy::InstantiateAtBase`] a quantifier is interpreted as its
//! body with the bound variable read as the base set. That is a heuristic,
//! not a model of second-order quantification, so anything built on it has
//! to be checked independently.

use std::sync::Arc;

use crate::syntax::{Name, Term, Type};

pub const DEFAULT_BASE: usize = 2;
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ForallPolicy {
    #[default]
    Error,
    InstantiateAtBase,
}

impl std::str::FromStr for ForallPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "error" => Ok(ForallPolicy::Error),
            "base" | "instantiate-at-base" => Ok(ForallPolicy::InstantiateAtBase),
            other => Err(format!("unknown forall policy `{other}` (expected error or base)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemConfig {
    pub base: usize,
    pub policy: ForallPolicy,
    /// Largest table or enumerated set ever built.
    pub cap: usize,
}

impl Default for SemConfig {
    fn default() -> Self {
        SemConfig { base: DEFAULT_BASE, policy: ForallPolicy::Error, cap: DEFAULT_CAP }
    }
}

impl SemConfig {
    pub fn with_policy(policy: ForallPolicy) -> Self {
        SemConfig { policy, ..SemConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cap exceeded: {what} needs {size} cells, cap is {cap}")]
    CapExceeded { what: String, size: String, cap: usize },
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("missing annotation on `{0}`")]
    MissingAnnotation(String),
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("value outside the supported fragment: {0}")]
    Undefined(String),
}

/// Structure of an interpreted type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Base,
    Unit,
    Fun(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// Exact cardinality, `None` past `u64`.
    pub fn size(&self, base: usize) -> Option<u64> {
        match self {
            Shape::Base => Some(base as u64),
            Shape::Unit => Some(1),
            Shape::Fun(d, c) => {
                let d = u32::try_from(d.size(base)?).ok()?;
                c.size(base)?.checked_pow(d)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSet {
    pub shape: Shape,
    pub size: usize,
    pub base: usize,
    pub ty: Type,
}

/// Elements of the frame. `Undefined` marks a point the heuristic policy
/// could not produce; it propagates through application and is an error
/// wherever it is observed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FrameValue {
    Base(usize),
    Unit,
    Fun(Vec<FrameValue>),
    Undefined,
}

impl FrameValue {
    pub fn apply(&self, shape_dom: &Shape, base: usize, arg: &FrameValue) -> FrameValue {
        match self {
            FrameValue::Fun(table) => match index_of(shape_dom, base, arg) {
                Some(i) => table[i].clone(),
                None => FrameValue::Undefined,
            },
            _ => FrameValue::Undefined,
        }
    }

    pub fn is_defined(&self) -> bool {
        match self {
            FrameValue::Undefined => false,
            FrameValue::Fun(t) => t.iter().all(FrameValue::is_defined),
            _ => true,
        }
    }
}

fn is_unit(ty: &Type) -> bool {
    ty.alpha_eq(&Type::Unit)
}

pub fn shape_of(ty: &Type, policy: ForallPolicy) -> Result<Shape, SemError> {
    if is_unit(ty) {
        return Ok(Shape::Unit);
    }
    match ty {
        Type::Var(_) => Ok(Shape::Base),
        Type::Unit => Ok(Shape::Unit),
        Type::Arrow(a, b) => Ok(Shape::Fun(Box::new(shape_of(a, policy)?), Box::new(shape_of(b, policy)?))),
        Type::Bang(_) => Err(SemError::Unsupported(format!("exponential type `{ty}` (truncate first)"))),
        Type::Mu(..) => Err(SemError::Unsupported(format!("recursive type `{ty}`"))),
        Type::Forall(_, body) => match policy {
            ForallPolicy::Error => Err(SemError::Unsupported(format!("quantified type `{ty}` under the error policy"))),
            ForallPolicy::InstantiateAtBase => shape_of(body, policy),
        },
    }
}

fn cap_check(what: impl FnOnce() -> String, size: Option<u64>, cap: usize) -> Result<usize, SemError> {
    match size {
        Some(n) if n <= cap as u64 => Ok(n as usize),
        Some(n) => Err(SemError::CapExceeded { what: what(), size: n.to_string(), cap }),
        None => Err(SemError::CapExceeded { what: what(), size: "more than 2^64".into(), cap }),
    }
}

pub fn interp_type(ty: &Type, cfg: &SemConfig) -> Result<FiniteSet, SemError> {
    if cfg.base < 2 {
        return Err(SemError::Unsupported("base set needs at least two elements".into()));
    }
    let shape = shape_of(ty, cfg.policy)?;
    let size = cap_check(|| format!("interpretation of `{ty}`"), shape.size(cfg.base), cfg.cap)?;
    Ok(FiniteSet { shape, size, base: cfg.base, ty: ty.clone() })
}

/// Position of `v` in the index order of `shape`, tables read as
/// little-endian numerals.
pub fn index_of(shape: &Shape, base: usize, v: &FrameValue) -> Option<usize> {
    match (shape, v) {
        (Shape::Base, FrameValue::Base(i)) => Some(*i),
        (Shape::Unit, FrameValue::Unit) => Some(0),
        (Shape::Fun(_, c), FrameValue::Fun(table)) => {
            let radix = c.size(base)? as usize;
            let mut acc = 0usize;
            for e in table.iter().rev() {
                acc = acc.checked_mul(radix)?.checked_add(index_of(c, base, e)?)?;
            }
            Some(acc)
        }
        _ => None,
    }
}

pub fn element(shape: &Shape, base: usize, mut idx: usize) -> FrameValue {
    match shape {
        Shape::Base => FrameValue::Base(idx),
        Shape::Unit => FrameValue::Unit,
        Shape::Fun(d, c) => {
            let dn = d.size(base).expect("enumerable domain") as usize;
            let cn = c.size(base).expect("enumerable codomain") as usize;
            let mut table = Vec::with_capacity(dn);
            for _ in 0..dn {
                table.push(element(c, base, idx % cn));
                idx /= cn;
            }
            FrameValue::Fun(table)
        }
    }
}

pub fn enumerate(shape: &Shape, base: usize, cap: usize) -> Result<Vec<FrameValue>, SemError> {
    let n = cap_check(|| "enumerated set".into(), shape.size(base), cap)?;
    Ok((0..n).map(|i| element(shape, base, i)).collect())
}

type Scope = Vec<(Name, FrameValue, Type)>;

pub fn eval_term(t: &Term, env: &[(Name, FrameValue, Type)], cfg: &SemConfig) -> Result<FrameValue, SemError> {
    eval_typed(t, env, cfg).map(|(v, _)| v)
}

/// Value together with the synthesized type of `t`.
pub fn eval_typed(t: &Term, env: &[(Name, FrameValue, Type)], cfg: &SemConfig) -> Result<(FrameValue, Type), SemError> {
    let mut scope: Scope = env.to_vec();
    Evaluator { cfg }.eval(t, &mut scope)
}

struct Evaluator<'a> {
    cfg: &'a SemConfig,
}

impl Evaluator<'_> {
    fn shape(&self, ty: &Type) -> Result<Shape, SemError> {
        shape_of(ty, self.cfg.policy)
    }

    fn elements(&self, ty: &Type) -> Result<Vec<FrameValue>, SemError> {
        let shape = self.shape(ty)?;
        let n = cap_check(|| format!("domain `{ty}`"), shape.size(self.cfg.base), self.cfg.cap)?;
        Ok((0..n).map(|i| element(&shape, self.cfg.base, i)).collect())
    }

    fn eval(&self, t: &Term, scope: &mut Scope) -> Result<(FrameValue, Type), SemError> {
        match t {
            Term::Var(x) => scope
                .iter()
                .rev()
                .find(|(y, _, _)| y == x)
                .map(|(_, v, ty)| (v.clone(), ty.clone()))
                .ok_or_else(|| SemError::Unbound(x.clone())),
            Term::LinAbs(x, ann, body) => {
                let ty = ann.clone().ok_or_else(|| SemError::MissingAnnotation(format!("binder {x}")))?;
                let dom = self.elements(&ty)?;
                if !body.has_free(x) {
                    scope.push((x.clone(), dom[0].clone(), ty.clone()));
                    let r = self.eval(body, scope);
                    scope.pop();
                    let (v, bty) = r?;
                    return Ok((FrameValue::Fun(vec![v; dom.len()]), Type::arrow(ty, bty)));
                }
                let mut table = Vec::with_capacity(dom.len());
                let mut bty = None;
                for e in dom {
                    scope.push((x.clone(), e, ty.clone()));
                    let r = self.eval(body, scope);
                    scope.pop();
                    let (v, b) = r?;
                    table.push(v);
                    bty.get_or_insert(b);
                }
                Ok((FrameValue::Fun(table), Type::arrow(ty, bty.expect("nonempty domain"))))
            }
            Term::App(f, a) => {
                let (fv, fty) = self.eval(f, scope)?;
                let (av, _) = self.eval(a, scope)?;
                match fty {
                    Type::Arrow(d, c) => Ok((fv.apply(&self.shape(&d)?, self.cfg.base, &av), *c)),
                    other => Err(SemError::IllTyped(format!("applying a value of type `{other}`"))),
                }
            }
            Term::TyAbs(a, body) => {
                let (bv, bty) = self.eval(body, scope)?;
                let ty = Type::Forall(a.clone(), Box::new(bty));
                if is_unit(&ty) {
                    Ok((FrameValue::Unit, ty))
                } else if self.cfg.policy == ForallPolicy::Error {
                    Err(SemError::Unsupported(format!("type abstraction at `{ty}` under the error policy")))
                } else {
                    Ok((bv, ty))
                }
            }
            Term::TyApp(f, ann) => {
                let sigma = ann.clone().ok_or_else(|| SemError::MissingAnnotation("type application".into()))?;
                let (fv, fty) = self.eval(f, scope)?;
                if is_unit(&fty) {
                    let id = FrameValue::Fun(self.elements(&sigma)?);
                    return Ok((id, Type::arrow(sigma.clone(), sigma)));
                }
                let (a, body) = match &fty {
                    Type::Forall(a, body) => (a, body),
                    other => return Err(SemError::IllTyped(format!("instantiating a value of type `{other}`"))),
                };
                let result_ty = body.subst(a, &sigma);
                let v = self.transport(fv, a, body, &result_ty)?;
                Ok((v, result_ty))
            }
            Term::Bang(_) | Term::BangAbs(..) => {
                Err(SemError::Unsupported("exponential term (truncate first)".into()))
            }
            Term::Fold(..) | Term::Unfold(_) => Err(SemError::Unsupported("fold/unfold".into())),
        }
    }

    /// Moves a value of `forall a. body` read at the base set to
    /// `body{a := sigma}`.
    fn transport(&self, v: FrameValue, a: &str, body: &Type, result_ty: &Type) -> Result<FrameValue, SemError> {
        let from = self.shape(body)?;
        let to = self.shape(result_ty)?;
        if from == to {
            return Ok(v);
        }
        if to == Shape::Unit {
            return Ok(FrameValue::Unit);
        }
        let Some(k) = selector_arity(body, a) else {
            return Ok(FrameValue::Undefined);
        };
        let Some(i) = projection_index(&v, k, self.cfg.base) else {
            return Ok(FrameValue::Undefined);
        };
        let target = match result_ty {
            Type::Arrow(d, _) => (**d).clone(),
            _ => unreachable!("selector types are arrows"),
        };
        let xs = self.elements(&target)?;
        let cells = (xs.len() as u64).checked_pow(k as u32);
        cap_check(|| format!("projection table at `{result_ty}`"), cells, self.cfg.cap)?;
        Ok(build_projection(&xs, k, i, &mut Vec::new()))
    }
}

/// `k` when `ty` is `a -o ... -o a` with `k` arguments.
fn selector_arity(ty: &Type, a: &str) -> Option<usize> {
    let mut k = 0;
    let mut cur = ty;
    while let Type::Arrow(d, c) = cur {
        if !matches!(&**d, Type::Var(x) if &**x == a) {
            return None;
        }
        k += 1;
        cur = c;
    }
    (k > 0 && matches!(cur, Type::Var(x) if &**x == a)).then_some(k)
}

/// `i` when `v`, read at the base set, returns its `i`-th of `k` arguments.
fn projection_index(v: &FrameValue, k: usize, base: usize) -> Option<usize> {
    let tuples = (base as u64).checked_pow(k as u32)?;
    (0..k).find(|&i| {
        (0..tuples).all(|mut code| {
            let mut args = Vec::with_capacity(k);
            for _ in 0..k {
                args.push((code % base as u64) as usize);
                code /= base as u64;
            }
            let mut cur = v;
            for &x in &args {
                match cur {
                    FrameValue::Fun(t) => cur = &t[x],
                    _ => return false,
                }
            }
            *cur == FrameValue::Base(args[i])
        })
    })
}

fn build_projection(xs: &[FrameValue], k: usize, i: usize, args: &mut Vec<usize>) -> FrameValue {
    if args.len() == k {
        return xs[args[i]].clone();
    }
    FrameValue::Fun(
        (0..xs.len())
            .map(|x| {
                args.push(x);
                let r = build_projection(xs, k, i, args);
                args.pop();
                r
            })
            .collect(),
    )
}

/// An endomorphism of a finite set, by element index; `None` entries are
/// points the heuristic policy left undefined.
pub type EndoMap = Vec<Option<usize>>;

pub fn endo_of_value(set: &FiniteSet, v: &FrameValue) -> Result<EndoMap, SemError> {
    match v {
        FrameValue::Fun(table) if table.len() == set.size => {
            Ok(table.iter().map(|e| index_of(&set.shape, set.base, e)).collect())
        }
        _ => Err(SemError::IllTyped(format!("not an endomorphism of `{}`", set.ty))),
    }
}

pub fn value_of_endo(set: &FiniteSet, f: &EndoMap) -> FrameValue {
    FrameValue::Fun(
        f.iter()
            .map(|e| e.map_or(FrameValue::Undefined, |i| element(&set.shape, set.base, i)))
            .collect(),
    )
}

/// `f` after `g`.
pub fn compose_maps(f: &EndoMap, g: &EndoMap) -> EndoMap {
    g.iter().map(|x| x.and_then(|x| f[x])).collect()
}

pub fn identity_map(n: usize) -> EndoMap {
    (0..n).map(Some).collect()
}

pub fn endo_identity(set: &FiniteSet) -> FrameValue {
    value_of_endo(set, &identity_map(set.size))
}

/// `f` after `g`, on frame values.
pub fn endo_compose(set: &FiniteSet, f: &FrameValue, g: &FrameValue) -> Result<FrameValue, SemError> {
    Ok(value_of_endo(set, &compose_maps(&endo_of_value(set, f)?, &endo_of_value(set, g)?)))
}

fn all_maps(n: usize, cap: usize) -> Result<Vec<EndoMap>, SemError> {
    let count = cap_check(|| "endomorphism monoid".into(), (n as u64).checked_pow(n as u32), cap)?;
    Ok((0..count)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let x = code % n;
                    code /= n;
                    Some(x)
                })
                .collect()
        })
        .collect())
}

/// Every map `S -> S`, in index order.
pub fn enumerate_endos(set: &FiniteSet, cap: usize) -> Result<Vec<FrameValue>, SemError> {
    Ok(all_maps(set.size, cap)?.iter().map(|f| value_of_endo(set, f)).collect())
}

/// The pairs `(g0, g1)` a table is defined on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDomain {
    pub set: FiniteSet,
    pub pairs: Vec<[EndoMap; 2]>,
}

impl PairDomain {
    /// All of `End(S) x End(S)`.
    pub fn full(set: FiniteSet, cap: usize) -> Result<PairDomain, SemError> {
        let n = set.size as u64;
        let pairs = n.checked_pow(n as u32).and_then(|e| e.checked_mul(e));
        cap_check(|| format!("pairs of endomorphisms of `{}`", set.ty), pairs, cap)?;
        let endos = all_maps(set.size, cap)?;
        let pairs = endos.iter().flat_map(|g0| endos.iter().map(move |g1| [g0.clone(), g1.clone()])).collect();
        Ok(PairDomain { set, pairs })
    }

    pub fn restricted(set: FiniteSet, pairs: Vec<[EndoMap; 2]>) -> PairDomain {
        PairDomain { set, pairs }
    }
}

/// `(g0, g1) |-> g_{w1} o ... o g_{wn}` over a pair domain.
#[derive(Clone, Debug)]
pub struct EndoPairTable {
    pub domain: Arc<PairDomain>,
    pub images: Vec<EndoMap>,
}

impl PartialEq for EndoPairTable {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for EndoPairTable {}

impl std::hash::Hash for EndoPairTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl EndoPairTable {
    pub fn identity(domain: Arc<PairDomain>) -> EndoPairTable {
        let id = identity_map(domain.set.size);
        let images = vec![id; domain.pairs.len()];
        EndoPairTable { domain, images }
    }

    /// Table of the word extended by letter `c`.
    pub fn step(&self, c: usize) -> EndoPairTable {
        let images = self.images.iter().zip(&self.domain.pairs).map(|(t, g)| compose_maps(t, &g[c])).collect();
        EndoPairTable { domain: self.domain.clone(), images }
    }

    pub fn of_word(domain: Arc<PairDomain>, w: &str) -> Result<EndoPairTable, SemError> {
        w.chars().try_fold(EndoPairTable::identity(domain), |acc, ch| match ch {
            '0' => Ok(acc.step(0)),
            '1' => Ok(acc.step(1)),
            other => Err(SemError::Unsupported(format!("letter `{other}`"))),
        })
    }

    /// Pointwise `self o other`.
    pub fn compose(&self, other: &EndoPairTable) -> EndoPairTable {
        let images = self.images.iter().zip(&other.images).map(|(f, g)| compose_maps(f, g)).collect();
        EndoPairTable { domain: self.domain.clone(), images }
    }

    pub fn get(&self, pair: &[EndoMap; 2]) -> Option<&EndoMap> {
        self.domain.pairs.iter().position(|p| p == pair).map(|i| &self.images[i])
    }
}

pub fn phi_of_word(sigma: &Type, w: &str, cfg: &SemConfig) -> Result<EndoPairTable, SemError> {
    let set = interp_type(sigma, cfg)?;
    let domain = Arc::new(PairDomain::full(set, cfg.cap)?);
    EndoPairTable::of_word(domain, w)
}

/// Evaluates a closed endomorphism term of type `sigma -o sigma`.
pub fn endo_of_term(t: &Term, set: &FiniteSet, cfg: &SemConfig) -> Result<EndoMap, SemError> {
    let v = eval_term(t, &[], cfg)?;
    endo_of_value(set, &v)
}
