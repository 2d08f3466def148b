//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use ealc::encode::{bool_ty, cast_term, church_nat, church_string, length_term, monoid_elem, promote, scott_string, succ_term};
use ealc::regcompile::{compile_dfa, regex_to_dfa, Dfa};
use ealc::syntax::{parse_term, Term};
use ealc::typing::{elaborate, Context, Mode};

pub const FUEL: u64 = 1_000_000;

pub const TT: &str = "(/\\a. \\x:a. \\y:a. x)";
pub const FF: &str = "(/\\a. \\x:a. \\y:a. y)";
pub const NOT: &str = "(\\b:Bool. /\\a. \\x:a. \\y:a. b [a] y x)";
pub const AND: &str = "(\\b:Bool. \\c:Bool. b [Bool] c (/\\a. \\x:a. \\y:a. y))";
pub const ID: &str = "(/\\a. \\x:a. x)";
pub const BID: &str = "(\\b:Bool. b)";

pub struct Entry {
    pub name: String,
    pub term: Term,
    pub mode: Mode,
}

/// Parses `src` and fills in any omitted annotations.
pub fn closed(src: &str, mode: Mode) -> Term {
    let t = parse_term(src).unwrap_or_else(|e| panic!("{src}: {e}"));
    let (t, _) = elaborate(mode, &Context::new(), &t).unwrap_or_else(|e| panic!("{src}: {e}"));
    t
}

pub fn sub(src: &str) -> String {
    src.replace("TT", TT)
        .replace("FF", FF)
        .replace("NOT", NOT)
        .replace("AND", AND)
        .replace("BID", BID)
        .replace("ID", ID)
}

pub fn parity() -> Dfa {
    Dfa::new(0, vec![true, false], vec![[0, 1], [1, 0]]).unwrap()
}

pub fn contains_11() -> Dfa {
    regex_to_dfa("(0|1)*11(0|1)*").unwrap()
}

pub fn div_by_3() -> Dfa {
    // reading most significant bit first
    Dfa::new(0, vec![true, false, false], vec![[0, 1], [2, 0], [1, 2]]).unwrap()
}

pub fn ends_with_0() -> Dfa {
    regex_to_dfa("(0|1)*0").unwrap()
}

pub fn all_strings() -> Dfa {
    Dfa::new(0, vec![true], vec![[0, 0]]).unwrap()
}

pub fn reference_dfas() -> Vec<(&'static str, Dfa)> {
    vec![
        ("parity", parity()),
        ("contains 11", contains_11()),
        ("divisible by 3", div_by_3()),
        ("ends with 0", ends_with_0()),
        ("all strings", all_strings()),
    ]
}

const SOURCES: &[(&str, &str)] = &[
    ("identity", "ID"),
    ("true", "TT"),
    ("false", "FF"),
    ("not", "NOT"),
    ("not true", "NOT TT"),
    ("not not false", "NOT (NOT FF)"),
    ("and", "AND"),
    ("and true false", "AND TT FF"),
    ("or true false", "(\\b:Bool. \\c:Bool. b [Bool] TT c) FF TT"),
    ("identity at Bool", "ID [Bool] TT"),
    ("identity at endo", "ID [Bool -o Bool] NOT"),
    ("compose", "/\\a. \\f:a -o a. \\g:a -o a. \\x:a. f (g x)"),
    ("compose not not", "(/\\a. \\f:a -o a. \\g:a -o a. \\x:a. f (g x)) [Bool] NOT NOT TT"),
    ("weakening", "/\\a. /\\b. \\x:a. \\y:b. x"),
    ("weakening applied", "(/\\a. /\\b. \\x:a. \\y:b. x) [Bool] [Bool -o Bool] TT NOT"),
    ("boxed true", "!TT"),
    ("bang identity", "\\!x:Bool. !x"),
    ("bang identity applied", "(\\!x:Bool. !x) !FF"),
    ("twice", "\\!f:Bool -o Bool. !(\\b:Bool. f (f b))"),
    ("twice not", "(\\!f:Bool -o Bool. !(\\b:Bool. f (f b))) !NOT"),
    ("let not", "let !x = !TT in !(NOT x)"),
    ("nested lets", "let !f = !NOT in let !b = !FF in !(f b)"),
    ("double box", "!!TT"),
    ("depth two identity", "\\!x:!Bool. !x"),
    ("depth two applied", "(\\!x:!Bool. !x) !!FF"),
    ("pair", "<TT:Bool, FF:Bool>"),
    ("let pair", "let <x:Bool, y:Bool> = <TT:Bool, FF:Bool> in AND x y"),
    ("two", "/\\a. \\!f:a -o a. !(\\x:a. f (f x))"),
    ("two at not", "(/\\a. \\!f:a -o a. !(\\x:a. f (f x))) [Bool] !NOT"),
    ("two nots on true", "let !h = (/\\a. \\!f:a -o a. !(\\x:a. f (f x))) [Bool] !NOT in !(h TT)"),
    ("both bangs", "\\!x:Bool. \\!y:Bool. !(AND x y)"),
    ("both bangs applied", "(\\!x:Bool. \\!y:Bool. !(AND x y)) !TT !TT"),
    ("higher order", "(\\f:Bool -o Bool. \\b:Bool. f b) NOT FF"),
    ("nat eta", "\\n:Nat. /\\a. \\!f:a -o a. n [a] !f"),
    ("unit identity", "\\u:1. u"),
    ("unit applied", "(\\u:1. u) ID"),
    ("string eta", "\\s:Str. /\\a. \\!f0:a -o a. \\!f1:a -o a. s [a] !f0 !f1"),
    (
        "concat",
        "\\s:Str. \\t:Str. /\\a. \\!f0:a -o a. \\!f1:a -o a. \
         let !g = s [a] !f0 !f1 in let !h = t [a] !f0 !f1 in !(\\x:a. g (h x))",
    ),
    ("constant decider", "\\!x:Str. !!TT"),
    (
        "first letter",
        "\\!x:Str. !(let !h = x [Bool] !(\\b:Bool. FF) !(\\b:Bool. TT) in !(h FF))",
    ),
    (
        "parity by hand",
        "\\!x:Str. !(let !h = x [Bool] !BID !NOT in !(h TT))",
    ),
    ("selector at bool", "(/\\a. \\x:a. \\y:a. \\z:a. y) [Bool] TT FF (NOT TT)"),
];

/// Closed, typable terms. Most contain redexes.
pub fn corpus() -> Vec<Entry> {
    let mut out: Vec<Entry> = SOURCES
        .iter()
        .map(|(name, src)| Entry { name: name.to_string(), term: closed(&sub(src), Mode::Eal), mode: Mode::Eal })
        .collect();
    let eal = |name: &str, term: Term| Entry { name: name.to_string(), term, mode: Mode::Eal };
    let s = |w: &str| church_string(w).unwrap();
    let par = compile_dfa(&parity());
    out.push(eal("string 0110", s("0110")));
    out.push(eal("empty string", s("")));
    out.push(eal("nat 3", church_nat(3)));
    out.push(eal("succ 1", Term::app(succ_term(), church_nat(1))));
    out.push(eal("length 101", Term::app(length_term(), s("101"))));
    let concat = SOURCES.iter().find(|(n, _)| *n == "concat").unwrap().1;
    out.push(eal("concat 0 1", Term::apps(closed(&sub(concat), Mode::Eal), [s("0"), s("1")])));
    out.push(eal(
        "string iterate",
        Term::apps(Term::ty_app(s("011"), bool_ty()), [Term::bang(closed(NOT, Mode::Eal)), Term::bang(closed(BID, Mode::Eal))]),
    ));
    out.push(eal("compiled parity", par.clone()));
    out.push(eal("compiled parity on 0110", Term::app(par.clone(), s("0110"))));
    out.push(eal("compiled contains 11 on 110", Term::app(compile_dfa(&contains_11()), s("110"))));
    out.push(eal("promoted parity on 01", Term::app(promote(&par, 1, 1).unwrap(), Term::bang(s("01")))));
    out.push(eal("promoted not", Term::app(promote(&closed(NOT, Mode::Eal), 1, 1).unwrap(), closed(&sub("!TT"), Mode::Eal))));
    out.push(eal("twice promoted not", Term::app(promote(&closed(NOT, Mode::Eal), 1, 2).unwrap(), closed(&sub("!!FF"), Mode::Eal))));
    out.push(eal("monoid element", monoid_elem(2, 3).unwrap()));
    out.push(Entry {
        name: "cast 2 on 011".into(),
        term: Term::apps(cast_term(), [church_nat(2), Term::bang(scott_string("011").unwrap())]),
        mode: Mode::Mueal,
    });
    out.push(Entry { name: "scott 01".into(), term: scott_string("01").unwrap(), mode: Mode::Mueal });
    out.push(Entry {
        name: "case on scott 1".into(),
        term: closed(&sub(&format!("case {} of {{0 x -> TT | 1 y -> FF | e -> TT}}", ealc::syntax::print_term(&scott_string("1").unwrap()))), Mode::Mueal),
        mode: Mode::Mueal,
    });
    out
}
