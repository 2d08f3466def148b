use std::fmt::{self, Write};

use super::{Term, Type};

pub fn print_type(ty: &Type) -> String {
    let mut s = String::new();
    write_type(&mut s, ty, TyLevel::Top).expect("writing to a String cannot fail");
    s
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, Level::Top).expect("writing to a String cannot fail");
    s
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum TyLevel {
    Top,
    Operand,
}

fn write_type<W: Write>(out: &mut W, ty: &Type, level: TyLevel) -> fmt::Result {
    let needs_parens = level == TyLevel::Operand
        && matches!(ty, Type::Arrow(..) | Type::Forall(..) | Type::Mu(..));
    if needs_parens {
        out.write_char('(')?;
    }
    match ty {
        Type::Var(a) => out.write_str(a)?,
        Type::Unit => out.write_char('1')?,
        Type::Arrow(a, b) => {
            write_type(out, a, TyLevel::Operand)?;
            out.write_str(" -o ")?;
            write_type(out, b, TyLevel::Top)?;
        }
        Type::Bang(a) => {
            out.write_char('!')?;
            write_type(out, a, TyLevel::Operand)?;
        }
        Type::Forall(a, b) => {
            write!(out, "forall {a}. ")?;
            write_type(out, b, TyLevel::Top)?;
        }
        Type::Mu(a, b) => {
            write!(out, "mu {a}. ")?;
            write_type(out, b, TyLevel::Top)?;
        }
    }
    if needs_parens {
        out.write_char(')')?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Top,
    App,
    Prefix,
}

fn write_annot<W: Write>(out: &mut W, ty: &Option<Type>) -> fmt::Result {
    match ty {
        None => Ok(()),
        Some(ty @ (Type::Forall(..) | Type::Mu(..))) => {
            out.write_str(":(")?;
            write_type(out, ty, TyLevel::Top)?;
            out.write_char(')')
        }
        Some(ty) => {
            out.write_char(':')?;
            write_type(out, ty, TyLevel::Top)
        }
    }
}

fn write_term<W: Write>(out: &mut W, t: &Term, level: Level) -> fmt::Result {
    let own = match t {
        Term::LinAbs(..) | Term::BangAbs(..) | Term::TyAbs(..) => Level::Top,
        Term::App(..) | Term::TyApp(..) => Level::App,
        Term::Var(_) | Term::Bang(_) | Term::Fold(..) | Term::Unfold(_) => Level::Prefix,
    };
    let parens = own < level;
    if parens {
        out.write_char('(')?;
    }
    match t {
        Term::Var(x) => out.write_str(x)?,
        Term::LinAbs(x, ty, b) => {
            write!(out, "\\{x}")?;
            write_annot(out, ty)?;
            out.write_str(". ")?;
            write_term(out, b, Level::Top)?;
        }
        Term::BangAbs(x, ty, b) => {
            write!(out, "\\!{x}")?;
            write_annot(out, ty)?;
            out.write_str(". ")?;
            write_term(out, b, Level::Top)?;
        }
        Term::TyAbs(a, b) => {
            write!(out, "/\\{a}. ")?;
            write_term(out, b, Level::Top)?;
        }
        Term::App(f, a) => {
            write_term(out, f, Level::App)?;
            out.write_char(' ')?;
            write_term(out, a, Level::Prefix)?;
        }
        Term::TyApp(b, ty) => {
            write_term(out, b, Level::App)?;
            out.write_str(" [")?;
            match ty {
                Some(ty) => write_type(out, ty, TyLevel::Top)?,
                None => out.write_char('_')?,
            }
            out.write_char(']')?;
        }
        Term::Bang(b) => {
            out.write_char('!')?;
            write_term(out, b, Level::Prefix)?;
        }
        Term::Fold(ty, b) => {
            out.write_str("fold[")?;
            write_type(out, ty, TyLevel::Top)?;
            out.write_str("] ")?;
            write_term(out, b, Level::Prefix)?;
        }
        Term::Unfold(b) => {
            out.write_str("unfold ")?;
            write_term(out, b, Level::Prefix)?;
        }
    }
    if parens {
        out.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, TyLevel::Top)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Level::Top)
    }
}
