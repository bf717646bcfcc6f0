mod common;

use std::cmp::Ordering;

use double_kruskal::order::{compare, leq};
use double_kruskal::ot::enumerate_terms;
use double_kruskal::term::{parse, OrderIndex, Term};
use proptest::prelude::*;

fn arb_term() -> impl Strategy<Value = Term> {
    let index = prop_oneof![9 => (0u32..4).prop_map(OrderIndex::from), 1 => Just(OrderIndex::Omega)];
    Just(Term::Zero).prop_recursive(5, 40, 4, move |inner| {
        let principal = (index.clone(), inner).prop_map(|(u, a)| Term::principal(u, a));
        prop_oneof![
            2 => principal.clone(),
            1 => prop::collection::vec(principal, 2..4).prop_map(|ps| Term::from_parts(ps).unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(a in arb_term()) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn whitespace_is_ignored(a in arb_term()) {
        let spaced: String = a.to_string().chars().flat_map(|c| [c, ' ']).collect();
        prop_assert_eq!(parse(&spaced).unwrap(), a);
    }

    #[test]
    fn norm_is_additive(a in arb_term(), u in 0u32..3) {
        let parts_norm: usize = a.parts().iter().map(Term::norm).sum();
        if !a.is_zero() {
            prop_assert_eq!(a.norm(), parts_norm);
        }
        prop_assert_eq!(Term::principal(u, a.clone()).norm(), a.norm() + 1);
    }

    #[test]
    fn norm_matches_token_count(a in arb_term()) {
        prop_assert_eq!(a.norm(), common::token_norm(&a.to_string()));
    }

    #[test]
    fn order_is_at_most_max_subscript(a in arb_term()) {
        if let Some(m) = a.max_subscript() {
            prop_assert!(a.order() <= m);
        }
    }

    #[test]
    fn compare_agrees_with_sequence_reading(a in arb_term(), b in arb_term()) {
        prop_assert_eq!(compare(&a, &b), common::seq_compare(&a, &b));
    }
}

#[test]
fn raw_enumeration_matches_brute_force() {
    for max_sub in 0..=2 {
        let mut lib: Vec<String> = enumerate_terms(max_sub, 6, 1 << 24).unwrap().iter().map(Term::to_string).collect();
        let mut brute: Vec<String> = common::raw_terms(max_sub, 6).iter().map(Term::to_string).collect();
        lib.sort();
        brute.sort();
        assert_eq!(lib, brute, "max_sub {max_sub}");
    }
}

#[test]
fn distinct_terms_print_differently() {
    let all = common::raw_terms(2, 5);
    let mut printed: Vec<String> = all.iter().map(Term::to_string).collect();
    printed.sort();
    printed.dedup();
    assert_eq!(printed.len(), all.len());
}

#[test]
fn compare_matches_sequence_oracle_exhaustively() {
    let all = common::raw_terms(1, 5);
    for a in &all {
        for b in &all {
            let c = compare(a, b);
            assert_eq!(c, common::seq_compare(a, b), "{a} vs {b}");
            assert_eq!(c == Ordering::Equal, a == b);
            assert_eq!(leq(a, b), c != Ordering::Greater);
        }
    }
}

#[test]
fn worked_examples() {
    let t = |s: &str| parse(s).unwrap();
    assert_eq!(t("D0(D2(0))").norm(), 3);
    assert_eq!(t("0").norm(), 1);
    assert_eq!(t("(D0(0),D0(D1(0)))").norm(), 5);
    assert_eq!(common::token_norm("(D0(0),D0(D1(0)))"), 5);
    assert_eq!(compare(&t("D0(0)"), &t("(D0(0),D0(0))")), Ordering::Less);
    assert_eq!(compare(&t("0"), &t("D0(0)")), Ordering::Less);
    assert_eq!(compare(&t("D0(0)"), &t("D1(0)")), Ordering::Less);
    assert!(!leq(&t("D1(0)"), &t("D0(0)")));
    assert!(leq(&t("D0(0)"), &t("D0(D0(0))")));
    assert_eq!(Term::principal(OrderIndex::Omega, Term::Zero).to_string(), "Dw(0)");
}
