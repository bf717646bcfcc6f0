mod common;

use double_kruskal::order::sort_terms;
use double_kruskal::ot::{enumerate_ot, g_set, in_ot_restricted, is_ot, u_subterms, EnumerateOptions};
use double_kruskal::term::{parse, OrderIndex, Term};

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn indices(max: u32) -> Vec<OrderIndex> {
    (0..=max).map(OrderIndex::from).chain([OrderIndex::Omega]).collect()
}

#[test]
fn is_ot_matches_formation_rules() {
    for a in common::raw_terms(2, 6) {
        assert_eq!(is_ot(&a), common::ot_oracle(&a), "{a}");
    }
}

#[test]
fn g_set_matches_position_scan() {
    for a in common::raw_terms(2, 5) {
        for u in indices(3) {
            assert_eq!(g_set(u, &a).into_vec(), common::g_scan(u, &a), "G_{u} {a}");
        }
    }
}

#[test]
fn enumeration_is_the_filtered_raw_space() {
    for (max_sub, max_norm) in [(0, 6), (1, 6), (2, 6), (3, 5)] {
        let mut expected: Vec<Term> =
            common::raw_terms(max_sub, max_norm).into_iter().filter(common::ot_oracle).collect();
        sort_terms(&mut expected);
        let got = enumerate_ot(&EnumerateOptions::new(max_sub, max_norm)).unwrap();
        assert_eq!(got, expected, "subscripts ≤ {max_sub}, norm ≤ {max_norm}");

        let zero: Vec<Term> = expected.iter().filter(|a| a.order() == OrderIndex::ZERO).cloned().collect();
        let got = enumerate_ot(&EnumerateOptions::new(max_sub, max_norm).order_zero_only(true)).unwrap();
        assert_eq!(got, zero);
    }
}

#[test]
fn small_enumerations() {
    let list = |s: u32, n: usize, z: bool| -> Vec<String> {
        enumerate_ot(&EnumerateOptions::new(s, n).order_zero_only(z)).unwrap().iter().map(Term::to_string).collect()
    };
    assert_eq!(list(0, 3, false), ["0", "D0(0)", "D0(D0(0))"]);
    assert_eq!(list(0, 1, false), ["0"]);
    assert_eq!(list(1, 2, true), ["0", "D0(0)"]);
}

#[test]
fn u_subterms_follow_the_clauses() {
    // Independent recursion: every D_v b reachable through D's with
    // subscript ≥ u, every sum and every 0 reachable that way, and a itself.
    fn brute(u: OrderIndex, a: &Term, out: &mut Vec<Term>) {
        out.push(a.clone());
        match a {
            Term::Zero => {}
            Term::Sum(_) => a.parts().iter().for_each(|p| brute(u, p, out)),
            Term::Principal(v, b) if *v >= u => brute(u, b, out),
            Term::Principal(..) => {}
        }
    }
    for a in common::raw_terms(2, 5) {
        for u in indices(3) {
            let mut expected = Vec::new();
            brute(u, &a, &mut expected);
            sort_terms(&mut expected);
            expected.dedup();
            assert_eq!(u_subterms(u, &a).into_vec(), expected, "{u}-subterms of {a}");
        }
    }
}

#[test]
fn worked_examples() {
    assert!(g_set(OrderIndex::ZERO, &Term::Zero).is_empty());
    assert!(g_set(1.into(), &t("D0(0)")).is_empty());
    assert_eq!(g_set(OrderIndex::ZERO, &t("D1(D0(0))")).into_vec(), [t("0"), t("D0(0)")]);
    assert!(is_ot(&t("0")));
    assert!(is_ot(&t("D0(D0(0))")));
    assert!(!is_ot(&t("(D0(0),D1(0))")));
    assert!(in_ot_restricted(&t("0"), 1.into()));
    assert!(!in_ot_restricted(&t("D0(D1(0))"), 1.into()));
    assert!(in_ot_restricted(&t("D0(D1(0))"), OrderIndex::Omega));
    assert_eq!(u_subterms(OrderIndex::ZERO, &Term::Zero).into_vec(), [t("0")]);
    assert_eq!(u_subterms(1.into(), &t("D0(0)")).into_vec(), [t("D0(0)")]);
    assert_eq!(u_subterms(OrderIndex::ZERO, &t("D1(D0(0))")).into_vec(), [t("0"), t("D0(0)"), t("D1(D0(0))")]);
}
