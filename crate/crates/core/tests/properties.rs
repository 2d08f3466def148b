mod common;

use proptest::prelude::*;

use common::FUEL;
use ealc::encode::{church_string, scott_string};
use ealc::eval::{decode_church_string, decode_scott_string, normalize, read_bool};
use ealc::regcompile::{compile_dfa, dfa_counterexample, dfa_equiv, transition_monoid, Dfa};
use ealc::semantics::{phi_of_word, SemConfig};
use ealc::syntax::{alpha_eq, parse_term, print_term, Term, Type};
use ealc::truncate::truncate_term;

fn word(max: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('0'), Just('1')], 0..=max).prop_map(|v| v.into_iter().collect())
}

fn dfa() -> impl Strategy<Value = Dfa> {
    dfa_up_to(5)
}

fn dfa_up_to(max: usize) -> impl Strategy<Value = Dfa> {
    (1usize..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec([0..n, 0..n], n),
        )
            .prop_map(|(accept, delta)| Dfa::new(0, accept, delta).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimize_preserves_language(d in dfa(), w in word(12)) {
        let m = d.minimize();
        prop_assert!(m.len() <= d.len());
        prop_assert_eq!(m.run(&w), d.run(&w));
        prop_assert!(dfa_equiv(&m, &d));
        prop_assert_eq!(m.minimize().len(), m.len());
    }

    #[test]
    fn counterexample_separates(a in dfa(), b in dfa()) {
        match dfa_counterexample(&a, &b) {
            Some(w) => prop_assert_ne!(a.run(&w), b.run(&w)),
            None => prop_assert!(dfa_equiv(&a, &b)),
        }
    }

    #[test]
    fn dfa_json_round_trip(d in dfa()) {
        let back = Dfa::from_json(&d.to_json().to_string()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn transition_monoid_is_a_morphism(d in dfa(), u in word(6), v in word(6)) {
        let m = transition_monoid(&d);
        let uv = format!("{u}{v}");
        prop_assert_eq!(m.phi(&uv), Some(m.mul(m.phi(&u).unwrap(), m.phi(&v).unwrap())));
        prop_assert_eq!(m.recognizes(&uv), d.run(&uv));
    }

    #[test]
    fn church_strings_round_trip(w in word(16)) {
        let s = church_string(&w).unwrap();
        prop_assert_eq!(decode_church_string(&s, FUEL).unwrap(), w.clone());
        let back = parse_term(&print_term(&s)).unwrap();
        prop_assert!(alpha_eq(&back, &s));
        prop_assert_eq!(decode_scott_string(&scott_string(&w).unwrap(), FUEL).unwrap(), w);
    }

    #[test]
    fn phi_respects_concatenation(u in word(6), v in word(6)) {
        let a = Type::var("a");
        let cfg = SemConfig::default();
        let uv = phi_of_word(&a, &format!("{u}{v}"), &cfg).unwrap();
        let split = phi_of_word(&a, &u, &cfg).unwrap().compose(&phi_of_word(&a, &v, &cfg).unwrap());
        prop_assert_eq!(uv, split);
    }

    #[test]
    fn truncating_twice_changes_nothing(w in word(8)) {
        let once = truncate_term(&church_string(&w).unwrap());
        prop_assert!(alpha_eq(&truncate_term(&once), &once));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn compiled_dfa_decides_its_language(d in dfa_up_to(3), w in word(8)) {
        let t = Term::app(compile_dfa(&d), church_string(&w).unwrap());
        prop_assert_eq!(read_bool(&normalize(&t, FUEL).unwrap(), FUEL).unwrap(), d.run(&w));
    }
}
