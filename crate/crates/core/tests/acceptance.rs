//! Acceptance suite. Runs every criterion, prints one line each and exits
//! nonzero if any of them fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use common::{closed, corpus, reference_dfas, Entry, FUEL};
use ealc::encode::{
    assemble_fexptime, cast_term, church_nat, church_string, length_clock_term, length_term, promote,
    scott_copy_term, scott_string, succ_term,
};
use ealc::eval::{contract_at, decode_church_string, normalize, read_bool, redexes, step};
use ealc::extract::{extract_lstar, extract_semantic, verify_dfa, LstarOptions, SemanticOptions};
use ealc::regcompile::{compile_dfa, dfa_equiv, words_up_to};
use ealc::semantics::{
    endo_of_term, identity_map, interp_type, phi_of_word, EndoPairTable, ForallPolicy, PairDomain, SemConfig,
};
use ealc::syntax::{alpha_eq, check_stratification, parse_term, parse_type, print_type, Term, Type};
use ealc::truncate::{truncate_term, truncate_type};
use ealc::typing::{typecheck, typecheck_closed, Context, Mode, TypeErrorKind};

const MAX_PATH: usize = 100_000;
const NORMALIZE_LIMIT: Duration = Duration::from_secs(1);
const COMPILER_SUITE_LIMIT: Duration = Duration::from_secs(300);
const LSTAR_SUITE_LIMIT: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compiler_soundness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut slowest = Duration::ZERO;
    for (name, d) in reference_dfas() {
        let t = compile_dfa(&d);
        let words: Vec<String> = words_up_to(10).collect();
        let results: Vec<(String, bool, Duration)> = words
            .par_iter()
            .map(|w| {
                let t0 = Instant::now();
                let b = read_bool(&Term::app(t.clone(), church_string(w).unwrap()), FUEL).unwrap();
                (w.clone(), b, t0.elapsed())
            })
            .collect();
        for (w, b, dt) in results {
            ensure(b == d.run(&w), || format!("{name}: disagrees on `{w}`"))?;
            slowest = slowest.max(dt);
            checked += 1;
        }
    }
    let total = start.elapsed();
    ensure(slowest < NORMALIZE_LIMIT, || format!("slowest normalization took {slowest:?}"))?;
    ensure(total < COMPILER_SUITE_LIMIT, || format!("suite took {total:?}"))?;
    Ok(format!("{checked} words over 5 languages, slowest {slowest:.2?}, total {total:.2?}"))
}

fn lstar_round_trip() -> Outcome {
    let start = Instant::now();
    let opts = LstarOptions { max_len: 12, ..LstarOptions::default() };
    let mut sizes = Vec::new();
    for (name, d) in reference_dfas() {
        let t = promote(&compile_dfa(&d), 1, 1).map_err(|e| e.to_string())?;
        let got = extract_lstar(&t, &opts).map_err(|e| format!("{name}: {e}"))?;
        ensure(dfa_equiv(&got, &d.minimize()), || format!("{name}: learned a different language"))?;
        sizes.push(got.len().to_string());
    }
    let total = start.elapsed();
    ensure(total < LSTAR_SUITE_LIMIT, || format!("took {total:?}"))?;
    Ok(format!("state counts [{}], total {total:.2?}", sizes.join(", ")))
}

fn cast_prefixes() -> Outcome {
    let cast = cast_term();
    let cases: Vec<(String, usize)> =
        words_up_to(6).flat_map(|w| (0..=w.len() + 2).map(move |n| (w.clone(), n))).collect();
    cases.par_iter().try_for_each(|(w, n)| {
        let t = Term::apps(cast.clone(), [church_nat(*n), Term::bang(scott_string(w).unwrap())]);
        let got = decode_church_string(&normalize(&t, FUEL).map_err(|e| e.to_string())?, FUEL)
            .map_err(|e| e.to_string())?;
        let want = &w[..(*n).min(w.len())];
        ensure(got == want, || format!("cast {n} `{w}` gave `{got}`"))
    })?;
    Ok(format!("{} cases exact", cases.len()))
}

fn assembly_identity() -> Outcome {
    let f = promote(&scott_copy_term(), 1, 1).map_err(|e| e.to_string())?;
    let t = assemble_fexptime(&f, &length_clock_term(), 0).map_err(|e| e.to_string())?;
    typecheck_closed(Mode::Mueal, &t, &parse_type("!Str -o !Str").unwrap()).map_err(|e| e.to_string())?;
    let words: Vec<String> = words_up_to(6).collect();
    words.par_iter().try_for_each(|w| {
        let out = normalize(&Term::app(t.clone(), Term::bang(church_string(w).unwrap())), FUEL)
            .map_err(|e| e.to_string())?;
        let Term::Bang(inner) = out else { return Err(format!("`{w}`: result is not a box")) };
        let got = decode_church_string(&inner, FUEL).map_err(|e| e.to_string())?;
        ensure(got == *w, || format!("`{w}` came back as `{got}`"))
    })?;
    Ok(format!("typechecks at !Str -o !Str, identity on {} words", words.len()))
}

fn semantic_matches_lstar() -> Outcome {
    let base = SemConfig::with_policy(ForallPolicy::InstantiateAtBase);
    let endo_typed = [
        "\\!x:Str. !(let !d = x [a -o a] !(\\f:a -o a. f) !(\\f:a -o a. \\y:a. y) in !TT)",
        "\\!x:Str. !(let !d = x [a -o a] !(\\f:a -o a. \\y:a. f y) !(\\f:a -o a. f) in !FF)",
    ];
    let extra = [
        "\\!x:Str. !(let !h = x [Bool] !(\\b:Bool. FF) !(\\b:Bool. TT) in !(h FF))",
        "\\!x:Str. !(let !h = x [Bool] !BID !NOT in !(h TT))",
    ];
    let mut cases: Vec<(String, Term, SemConfig)> = Vec::new();
    for (i, src) in endo_typed.iter().enumerate() {
        cases.push((format!("endo decider {}", i + 1), closed(&common::sub(src), Mode::Eal), SemConfig::default()));
    }
    for (i, src) in extra.iter().enumerate() {
        cases.push((format!("bool decider {}", i + 1), closed(&common::sub(src), Mode::Eal), base));
    }
    let par = promote(&compile_dfa(&common::parity()), 1, 1).map_err(|e| e.to_string())?;
    cases.push(("promoted parity".into(), par, base));

    let mut langs = Vec::new();
    for (name, t, sem) in &cases {
        let opts = SemanticOptions { sem: *sem, verify: Some(10), ..SemanticOptions::default() };
        let r = extract_semantic(t, &opts).map_err(|e| format!("{name}: {e}"))?;
        let l = extract_lstar(t, &LstarOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure(dfa_equiv(&r.dfa, &l), || format!("{name}: semantic and L* disagree"))?;
        let report = verify_dfa(&r.dfa, t, 10).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.passed(), || format!("{name}: verification mismatch"))?;
        langs.push(format!("{name} ({} states)", r.dfa.len()));
    }
    Ok(format!("{}; verified to length 10", langs.join(", ")))
}

fn phi_laws() -> Outcome {
    let cfg = SemConfig::default();
    let a = Type::var("a");
    let table = |w: &str| phi_of_word(&a, w, &cfg).unwrap();
    ensure(table("").images.iter().all(|f| *f == identity_map(2)), || "Phi(e) is not the identity".into())?;
    let words: Vec<String> = words_up_to(4).collect();
    let mut laws = 0;
    for u in &words {
        for v in &words {
            ensure(table(&format!("{u}{v}")) == table(u).compose(&table(v)), || format!("Phi({u}{v})"))?;
            laws += 1;
        }
    }

    // iterating a string at sigma computes Phi on the step functions
    let base = SemConfig::with_policy(ForallPolicy::InstantiateAtBase);
    let pairs: [(&str, &str, &str, SemConfig); 5] = [
        ("a", "\\x:a. x", "\\x:a. x", cfg),
        ("Bool", "NOT", "BID", base),
        ("Bool", "BID", "NOT", base),
        ("Bool", "\\b:Bool. FF", "\\b:Bool. TT", base),
        ("Bool", "NOT", "\\b:Bool. b [Bool] FF TT", base),
    ];
    for (sigma, f0, f1, sem) in pairs {
        let sigma = parse_type(sigma).unwrap();
        let f0 = closed(&common::sub(f0), Mode::Eal);
        let f1 = closed(&common::sub(f1), Mode::Eal);
        let set = interp_type(&sigma, &sem).map_err(|e| e.to_string())?;
        let g = [endo_of_term(&f0, &set, &sem).unwrap(), endo_of_term(&f1, &set, &sem).unwrap()];
        let domain = Arc::new(PairDomain::restricted(set.clone(), vec![g]));
        for w in words_up_to(5) {
            let it = Term::apps(
                Term::ty_app(church_string(&w).unwrap(), sigma.clone()),
                [Term::bang(f0.clone()), Term::bang(f1.clone())],
            );
            let Term::Bang(h) = normalize(&it, FUEL).map_err(|e| e.to_string())? else {
                return Err(format!("`{w}`: iterate is not a box"));
            };
            let hv = endo_of_term(&h, &set, &sem).map_err(|e| e.to_string())?;
            let phi = EndoPairTable::of_word(domain.clone(), &w).unwrap();
            ensure(phi.images[0] == hv, || format!("`{w}` at {}: iterate differs from Phi", print_type(&sigma)))?;
        }
    }
    Ok(format!("identity law, {laws} composition laws, 5 iterate pairs on |w| <= 5"))
}

/// Every term on the normal-order path of `t`, ending in its normal form.
fn reduction_path(t: &Term) -> Vec<Term> {
    let mut path = vec![t.clone()];
    while let Some(next) = step(path.last().unwrap()) {
        path.push(next);
        assert!(path.len() < MAX_PATH, "reduction path longer than {MAX_PATH}");
    }
    path
}

/// `(t, t')` for every single reduction step out of a term on the path.
fn all_steps(e: &Entry) -> Vec<(Term, Term)> {
    reduction_path(&e.term)
        .into_iter()
        .flat_map(|t| {
            redexes(&t)
                .into_iter()
                .map(|p| (t.clone(), contract_at(&t, &p).expect("redex")))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn truncation_props() -> Outcome {
    let entries: Vec<Entry> = corpus().into_iter().filter(|e| e.mode == Mode::Eal).collect();
    let counts: Vec<usize> = entries
        .par_iter()
        .map(|e| -> Result<usize, String> {
            let check_typing = |t: &Term| -> Result<(), String> {
                let ty = typecheck(Mode::Eal, &Context::new(), t).map_err(|err| format!("{}: {err}", e.name))?;
                let tr = truncate_term(t);
                let tr_ty = typecheck(Mode::Eal, &Context::new(), &tr)
                    .map_err(|err| format!("{}: truncation ill-typed: {err}", e.name))?;
                let want = truncate_type(&ty).map_err(|err| err.to_string())?;
                ensure(tr_ty.alpha_eq(&want), || format!("{}: truncation has type {}", e.name, print_type(&tr_ty)))
            };
            check_typing(&e.term)?;
            let steps = all_steps(e);
            for (t, t2) in &steps {
                check_typing(t2)?;
                let l = normalize(&truncate_term(t), FUEL).map_err(|err| err.to_string())?;
                let r = normalize(&truncate_term(t2), FUEL).map_err(|err| err.to_string())?;
                ensure(alpha_eq(&l, &r), || format!("{}: truncations of a step have different normal forms", e.name))?;
            }
            Ok(steps.len())
        })
        .collect::<Result<_, _>>()?;
    Ok(format!("{} terms, {} steps, 100% typed truncations", entries.len(), counts.iter().sum::<usize>()))
}

fn subject_reduction() -> Outcome {
    let entries = corpus();
    let counts: Vec<usize> = entries
        .par_iter()
        .map(|e| -> Result<usize, String> {
            let ty = typecheck(e.mode, &Context::new(), &e.term).map_err(|err| format!("{}: {err}", e.name))?;
            check_stratification(&e.term).map_err(|v| format!("{}: {v:?}", e.name))?;
            let steps = all_steps(e);
            for (_, t2) in &steps {
                let ty2 = typecheck(e.mode, &Context::new(), t2)
                    .map_err(|err| format!("{}: reduct ill-typed: {err}", e.name))?;
                ensure(ty2.alpha_eq(&ty), || format!("{}: type changed to {}", e.name, print_type(&ty2)))?;
                check_stratification(t2).map_err(|v| format!("{}: reduct unstratified: {v:?}", e.name))?;
            }
            Ok(steps.len())
        })
        .collect::<Result<_, _>>()?;

    let violations = [
        ("\\!x:Bool. x", TypeErrorKind::ZoneMisuse),
        ("\\f:Bool -o Bool -o Bool. \\x:Bool. f x x", TypeErrorKind::NonlinearUse),
        ("(/\\a. \\x:a. x) [!Bool]", TypeErrorKind::ForallInstantiationNotLinear),
    ];
    for (src, kind) in violations {
        let t = parse_term(src).unwrap();
        match typecheck(Mode::Eal, &Context::new(), &t) {
            Err(err) if err.kind == kind => {}
            other => return Err(format!("`{src}`: expected {kind}, got {other:?}")),
        }
    }
    Ok(format!(
        "{} terms, {} steps preserve type and stratification; 3 violations rejected",
        entries.len(),
        counts.iter().sum::<usize>()
    ))
}

fn reading_property() -> Outcome {
    let bang_bool = parse_type("!Bool").unwrap();
    let tt = Term::bang(closed(common::TT, Mode::Eal));
    let ff = Term::bang(closed(common::FF, Mode::Eal));
    let mut terms: Vec<(String, Term)> = corpus()
        .into_iter()
        .filter(|e| typecheck(e.mode, &Context::new(), &e.term).is_ok_and(|ty| ty.alpha_eq(&bang_bool)))
        .map(|e| (e.name, e.term))
        .collect();
    let from_corpus = terms.len();
    for (name, d) in reference_dfas() {
        let t = compile_dfa(&d);
        for w in words_up_to(5) {
            terms.push((format!("{name} on `{w}`"), Term::app(t.clone(), church_string(&w).unwrap())));
        }
    }
    terms.par_iter().try_for_each(|(name, t)| {
        typecheck_closed(Mode::Eal, t, &bang_bool).map_err(|err| format!("{name}: {err}"))?;
        let nf = normalize(t, FUEL).map_err(|err| format!("{name}: {err}"))?;
        ensure(alpha_eq(&nf, &tt) || alpha_eq(&nf, &ff), || format!("{name}: normal form is not a boxed boolean"))
    })?;
    Ok(format!("{} closed !Bool terms ({from_corpus} from the corpus), zero exceptions", terms.len()))
}

fn promotion() -> Outcome {
    let s = |w: &str| church_string(w).unwrap();
    let c = |src: &str| closed(&common::sub(src), Mode::Eal);
    let samples: Vec<(&str, Term, Vec<Term>)> = vec![
        ("not", c("NOT"), vec![c("TT")]),
        ("and", c("AND"), vec![c("TT"), c("FF")]),
        ("identity at Bool", c("ID [Bool]"), vec![c("FF")]),
        ("selector", c("(/\\a. \\x:a. \\y:a. \\z:a. y) [Bool]"), vec![c("TT"), c("FF"), c("TT")]),
        ("weakening", c("(/\\a. /\\b. \\x:a. \\y:b. x) [Bool] [Bool]"), vec![c("FF"), c("TT")]),
        ("higher order", c("\\f:Bool -o Bool. \\b:Bool. f b"), vec![c("NOT"), c("FF")]),
        ("compiled parity", compile_dfa(&common::parity()), vec![s("011")]),
        ("length", length_term(), vec![s("10")]),
        ("succ", succ_term(), vec![church_nat(2)]),
        (
            "concat",
            c("\\s:Str. \\t:Str. /\\a. \\!f0:a -o a. \\!f1:a -o a. \
               let !g = s [a] !f0 !f1 in let !h = t [a] !f0 !f1 in !(\\x:a. g (h x))"),
            vec![s("0"), s("11")],
        ),
    ];
    for (name, t, args) in &samples {
        for k in 1..=3 {
            let lifted = promote(t, args.len(), k).map_err(|e| format!("{name}: {e}"))?;
            let l = normalize(&Term::apps(lifted, args.iter().map(|u| Term::bangs(k, u.clone()))), FUEL)
                .map_err(|e| format!("{name}: {e}"))?;
            let r = normalize(&Term::bangs(k, Term::apps(t.clone(), args.iter().cloned())), FUEL)
                .map_err(|e| format!("{name}: {e}"))?;
            ensure(alpha_eq(&l, &r), || format!("{name} at k = {k}: normal forms differ"))?;
        }
    }
    Ok(format!("{} terms, k in 1..=3", samples.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 compiler soundness", compiler_soundness),
        ("2 extraction round-trip", lstar_round_trip),
        ("3 semantic extraction", semantic_matches_lstar),
        ("4 truncation", truncation_props),
        ("5 subject reduction and stratification", subject_reduction),
        ("6 reading property", reading_property),
        ("7 cast", cast_prefixes),
        ("8 functorial promotion", promotion),
        ("9 Phi laws", phi_laws),
        ("10 assembly", assembly_identity),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
