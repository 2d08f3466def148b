//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! Sugar is desugared on the fly:
//! `let !x = u in t` to `(\!x. t) u`, `<u:S, v:T>` to a polymorphic pair,
//! `let <x:S, y:T> = u in t` to `u [_] (\x:S. \y:T. t)` and
//! `case u of {0 x -> a | 1 y -> b | e -> c}` to
//! `(unfold u) [_] (\x:StrS. a) (\y:StrS. b) c`.
//! Omitted annotations and `_` stand for types the checker infers.

use std::collections::BTreeSet;
use std::fmt;

use super::named;
use super::{fresh_name, Name, Term, Type, HOLE};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Backslash,
    BigLambda,
    Dot,
    Colon,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bang,
    Lt,
    Gt,
    Comma,
    Lolli,
    Arrow,
    LBrace,
    RBrace,
    Pipe,
    Eq,
    Underscore,
    Eof,
}

const KEYWORDS: &[&str] = &["let", "in", "case", "of", "forall", "mu", "fold", "unfold"];

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) | Tok::Num(s) => format!("`{s}`"),
        Tok::Eof => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let rest = &src[pos..];
        if rest.starts_with("--") {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let two = |t: Tok, chars: &mut std::iter::Peekable<std::str::CharIndices>| {
            chars.next();
            chars.next();
            t
        };
        let tok = if rest.starts_with("-o") {
            two(Tok::Lolli, &mut chars)
        } else if rest.starts_with("->") {
            two(Tok::Arrow, &mut chars)
        } else if rest.starts_with("/\\") {
            two(Tok::BigLambda, &mut chars)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &src[pos..end];
            if word == "_" {
                Tok::Underscore
            } else {
                Tok::Ident(word.to_string())
            }
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            Tok::Num(src[pos..end].to_string())
        } else {
            chars.next();
            match c {
                '\\' | 'λ' => Tok::Backslash,
                'Λ' => Tok::BigLambda,
                '⊸' => Tok::Lolli,
                '∀' => Tok::Ident("forall".into()),
                'μ' => Tok::Ident("mu".into()),
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '!' => Tok::Bang,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                ',' => Tok::Comma,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '|' => Tok::Pipe,
                '=' => Tok::Eq,
                other => return Err((pos, format!("unexpected character `{other}`"))),
            }
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    idx: usize,
    used: BTreeSet<Name>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> PResult<Self> {
        let toks = lex(src).map_err(|(pos, message)| locate(src, pos, message))?;
        let used = toks
            .iter()
            .filter_map(|(t, _)| match t {
                Tok::Ident(s) => Some(Name::from(s.as_str())),
                _ => None,
            })
            .collect();
        Ok(Parser { src, toks, idx: 0, used })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.idx + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(locate(self.src, self.toks[self.idx].1, message.into()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&t), describe(self.peek())))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s.as_str().into())
            }
            other => self.error(format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn fresh(&mut self, base: &str) -> Name {
        let n = fresh_name(base, &self.used);
        self.used.insert(n.clone());
        n
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<Type> {
        if self.is_kw("forall") || self.is_kw("mu") {
            let is_mu = self.is_kw("mu");
            self.bump();
            let v = self.ident()?;
            self.expect(Tok::Dot)?;
            let body = self.ty()?;
            if !body.classify().is_strictly_linear() {
                return self.error(format!(
                    "class violation: quantified body `{body}` is not strictly linear"
                ));
            }
            return Ok(if is_mu {
                Type::Mu(v, Box::new(body))
            } else {
                Type::Forall(v, Box::new(body))
            });
        }
        let lhs = self.ty_prefix()?;
        if self.eat(&Tok::Lolli) {
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn ty_prefix(&mut self) -> PResult<Type> {
        if self.eat(&Tok::Bang) {
            return Ok(Type::bang(self.ty_prefix()?));
        }
        self.ty_atom()
    }

    fn ty_atom(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Num(n) if n == "1" => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::Underscore => {
                self.bump();
                Ok(Type::var(HOLE))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(match s.as_str() {
                    "Bool" => named::bool_ty(),
                    "Nat" => named::nat_ty(),
                    "StrS" => named::strs_ty(),
                    "Str" => {
                        if self.eat(&Tok::LBrack) {
                            let inner = self.ty()?;
                            self.expect(Tok::RBrack)?;
                            named::str_of(inner)
                        } else {
                            named::str_ty()
                        }
                    }
                    m if m.len() > 1
                        && m.starts_with('M')
                        && m[1..].bytes().all(|b| b.is_ascii_digit()) =>
                    {
                        let k: usize = m[1..].parse().map_err(|_| {
                            locate(self.src, self.toks[self.idx - 1].1, "monoid size too large".into())
                        })?;
                        if k == 0 {
                            return self.error("M0 is not a type: a monoid needs one element");
                        }
                        named::monoid_ty(k)
                    }
                    _ => Type::var(&s),
                })
            }
            other => self.error(format!("expected a type, found {}", describe(&other))),
        }
    }

    fn opt_annot(&mut self) -> PResult<Option<Type>> {
        if self.eat(&Tok::Colon) {
            Ok(Some(self.ty()?))
        } else {
            Ok(None)
        }
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let banged = self.eat(&Tok::Bang);
                let x = self.ident()?;
                let ty = self.opt_annot()?;
                self.expect(Tok::Dot)?;
                let body = Box::new(self.term()?);
                Ok(if banged {
                    Term::BangAbs(x, ty, body)
                } else {
                    Term::LinAbs(x, ty, body)
                })
            }
            Tok::BigLambda => {
                self.bump();
                let a = self.ident()?;
                self.expect(Tok::Dot)?;
                Ok(Term::TyAbs(a, Box::new(self.term()?)))
            }
            _ if self.is_kw("let") => self.let_form(),
            _ if self.is_kw("case") => self.case_form(),
            _ => self.app(),
        }
    }

    fn let_form(&mut self) -> PResult<Term> {
        self.bump();
        if self.eat(&Tok::Bang) {
            let x = self.ident()?;
            let ty = self.opt_annot()?;
            self.expect(Tok::Eq)?;
            let u = self.term()?;
            self.expect_kw("in")?;
            let t = self.term()?;
            return Ok(Term::app(Term::BangAbs(x, ty, Box::new(t)), u));
        }
        if self.eat(&Tok::Lt) {
            let x = self.ident()?;
            let sx = self.opt_annot()?;
            self.expect(Tok::Comma)?;
            let y = self.ident()?;
            let sy = self.opt_annot()?;
            self.expect(Tok::Gt)?;
            self.expect(Tok::Eq)?;
            let u = self.term()?;
            self.expect_kw("in")?;
            let t = self.term()?;
            let k = Term::LinAbs(x, sx, Box::new(Term::LinAbs(y, sy, Box::new(t))));
            return Ok(Term::app(Term::TyApp(Box::new(u), None), k));
        }
        self.error("expected `!` or `<` after `let`")
    }

    fn case_form(&mut self) -> PResult<Term> {
        self.bump();
        let u = self.term()?;
        self.expect_kw("of")?;
        self.expect(Tok::LBrace)?;
        let branch = |p: &mut Self, tag: &str| -> PResult<(Name, Term)> {
            match p.peek().clone() {
                Tok::Num(n) if n == tag => {
                    p.bump();
                }
                other => return p.error(format!("expected case tag `{tag}`, found {}", describe(&other))),
            }
            let x = p.ident()?;
            p.expect(Tok::Arrow)?;
            Ok((x, p.term()?))
        };
        let (x, a) = branch(self, "0")?;
        self.expect(Tok::Pipe)?;
        let (y, b) = branch(self, "1")?;
        self.expect(Tok::Pipe)?;
        self.expect_kw("e")?;
        self.expect(Tok::Arrow)?;
        let c = self.term()?;
        self.expect(Tok::RBrace)?;
        let strs = named::strs_ty();
        Ok(Term::apps(
            Term::TyApp(Box::new(Term::unfold(u)), None),
            [
                Term::LinAbs(x, Some(strs.clone()), Box::new(a)),
                Term::LinAbs(y, Some(strs), Box::new(b)),
                c,
            ],
        ))
    }

    fn starts_prefix(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || s == "fold" || s == "unfold",
            Tok::Bang | Tok::LParen | Tok::Lt => true,
            _ => false,
        }
    }

    fn starts_binder(&self) -> bool {
        matches!(self.peek(), Tok::Backslash | Tok::BigLambda) || self.is_kw("let") || self.is_kw("case")
    }

    fn app(&mut self) -> PResult<Term> {
        let mut head = self.prefix()?;
        loop {
            if self.eat(&Tok::LBrack) {
                let ty = if *self.peek() == Tok::Underscore && *self.peek_at(1) == Tok::RBrack {
                    self.bump();
                    None
                } else {
                    Some(self.ty()?)
                };
                self.expect(Tok::RBrack)?;
                head = Term::TyApp(Box::new(head), ty);
            } else if self.starts_prefix() {
                let arg = self.prefix()?;
                head = Term::app(head, arg);
            } else if self.starts_binder() {
                let arg = self.term()?;
                return Ok(Term::app(head, arg));
            } else {
                return Ok(head);
            }
        }
    }

    fn prefix(&mut self) -> PResult<Term> {
        if self.eat(&Tok::Bang) {
            return Ok(Term::bang(self.prefix()?));
        }
        if self.is_kw("fold") {
            self.bump();
            self.expect(Tok::LBrack)?;
            let ty = self.ty()?;
            self.expect(Tok::RBrack)?;
            return Ok(Term::fold(ty, self.prefix()?));
        }
        if self.is_kw("unfold") {
            self.bump();
            return Ok(Term::unfold(self.prefix()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lt => {
                self.bump();
                let u = self.term()?;
                let s = self.opt_annot()?;
                self.expect(Tok::Comma)?;
                let v = self.term()?;
                let t = self.opt_annot()?;
                self.expect(Tok::Gt)?;
                Ok(self.pair(u, s, v, t))
            }
            _ => Ok(Term::Var(self.ident()?)),
        }
    }

    fn pair(&mut self, u: Term, s: Option<Type>, v: Term, t: Option<Type>) -> Term {
        let c = self.fresh("c");
        let f = self.fresh("k");
        let hole = || Type::var(HOLE);
        let cv = Type::Var(c.clone());
        let fty = Type::arrows([s.unwrap_or_else(hole), t.unwrap_or_else(hole)], cv);
        Term::TyAbs(
            c,
            Box::new(Term::LinAbs(
                f.clone(),
                Some(fty),
                Box::new(Term::apps(Term::Var(f), [u, v])),
            )),
        )
    }
}

fn locate(src: &str, pos: usize, message: String) -> ParseError {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { line, col, message }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after term", describe(p.peek())));
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after type", describe(p.peek())));
    }
    Ok(t)
}
