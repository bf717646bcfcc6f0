//! Ordinal terms: the sets `G_u a`, membership in `OT` and `OT(u)`,
//! `u`-subterms and bounded enumeration.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::order::{compare, less};
use crate::term::{OrderIndex, Term};

/// A finite, duplicate-free set of terms kept sorted by `≺`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermSet(Vec<Term>);

impl TermSet {
    pub fn from_vec(mut terms: Vec<Term>) -> Self {
        terms.sort_by(compare);
        terms.dedup();
        TermSet(terms)
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.0.binary_search_by(|x| compare(x, t)).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Term> {
        self.0
    }
}

impl<'a> IntoIterator for &'a TermSet {
    type Item = &'a Term;
    type IntoIter = std::slice::Iter<'a, Term>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `G_u a`: arguments of the `D_v` with `v ≥ u` reachable from the root
/// without passing through a `D_w` with `w < u`.
pub fn g_set(u: OrderIndex, a: &Term) -> TermSet {
    let mut out = Vec::new();
    collect_g(u, a, &mut out);
    TermSet::from_vec(out)
}

fn collect_g(u: OrderIndex, a: &Term, out: &mut Vec<Term>) {
    match a {
        Term::Zero => {}
        Term::Principal(v, b) => {
            if u <= *v {
                out.push((**b).clone());
                collect_g(u, b, out);
            }
        }
        Term::Sum(s) => s.parts().iter().for_each(|p| collect_g(u, p, out)),
    }
}

/// Which formation rule an ill-formed term breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OtClause {
    /// Sum components must be weakly descending.
    Ot2,
    /// `D_u a` needs every element of `G_u a` below `a`.
    Ot3,
}

impl fmt::Display for OtClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OtClause::Ot2 => "OT2",
            OtClause::Ot3 => "OT3",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{clause} violated at {at}: {detail}")]
pub struct OtViolation {
    pub clause: OtClause,
    /// The innermost offending subterm.
    pub at: Term,
    pub detail: String,
}

/// Checks membership in `OT`, reporting the innermost violation.
pub fn check_ot(a: &Term) -> Result<(), OtViolation> {
    match a {
        Term::Zero => Ok(()),
        Term::Sum(s) => {
            for p in s.parts() {
                check_ot(p)?;
            }
            for w in s.parts().windows(2) {
                if less(&w[0], &w[1]) {
                    return Err(OtViolation {
                        clause: OtClause::Ot2,
                        at: a.clone(),
                        detail: format!("component {} precedes its successor {}", w[0], w[1]),
                    });
                }
            }
            Ok(())
        }
        Term::Principal(u, b) => {
            check_ot(b)?;
            check_collapse(*u, b).map_err(|g| OtViolation {
                clause: OtClause::Ot3,
                at: a.clone(),
                detail: format!("{g} is in G_{u}({b}) but does not precede it"),
            })
        }
    }
}

/// The side condition of `D_u b`, assuming `b ∈ OT`: returns the first
/// element of `G_u b` that is not below `b`.
fn check_collapse(u: OrderIndex, b: &Term) -> Result<(), Term> {
    match g_set(u, b).iter().find(|g| !less(g, b)) {
        Some(g) => Err(g.clone()),
        None => Ok(()),
    }
}

pub fn is_ot(a: &Term) -> bool {
    check_ot(a).is_ok()
}

/// `a ∈ OT(u)`: an ordinal term all of whose subscripts are below `u`.
pub fn in_ot_restricted(a: &Term, u: OrderIndex) -> bool {
    a.all_subscripts(&mut |v| v < u) && is_ot(a)
}

/// The subterms of `a` not in the scope of any `D_v` with `v < u`.
pub fn u_subterms(u: OrderIndex, a: &Term) -> TermSet {
    let mut out = Vec::new();
    collect_u_subterms(u, a, &mut out);
    TermSet::from_vec(out)
}

fn collect_u_subterms(u: OrderIndex, a: &Term, out: &mut Vec<Term>) {
    out.push(a.clone());
    match a {
        Term::Zero => {}
        Term::Principal(v, b) => {
            if u <= *v {
                collect_u_subterms(u, b, out);
            }
        }
        Term::Sum(s) => s.parts().iter().for_each(|p| collect_u_subterms(u, p, out)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("max_norm must be at least 1")]
    ZeroNorm,
    #[error("enumeration exceeded the cap of {cap} terms")]
    LimitExceeded { cap: usize },
}

/// Default cap on the number of terms produced by one enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub max_subscript: u32,
    pub max_norm: usize,
    pub order_zero_only: bool,
    pub cap: usize,
}

impl EnumerateOptions {
    pub fn new(max_subscript: u32, max_norm: usize) -> Self {
        EnumerateOptions { max_subscript, max_norm, order_zero_only: false, cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn order_zero_only(mut self, yes: bool) -> Self {
        self.order_zero_only = yes;
        self
    }

    pub fn cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Terms grouped by norm; `by_norm[n]` holds the terms of norm exactly `n`.
struct Layers {
    by_norm: Vec<Vec<Term>>,
    principals: Vec<Vec<Term>>,
    produced: usize,
    cap: usize,
}

impl Layers {
    fn bump(&mut self, n: usize) -> Result<(), EnumerateError> {
        self.produced += n;
        if self.produced > self.cap {
            Err(EnumerateError::LimitExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }
}

/// Builds all terms of norm up to `max_norm` with subscripts `≤ max_sub`.
/// With `ordinal_only`, sums must be weakly descending and principal terms
/// must satisfy the collapse condition, which yields exactly the ordinal
/// terms: membership in `OT` only depends on the components.
fn build_layers(max_sub: u32, max_norm: usize, ordinal_only: bool, cap: usize) -> Result<Layers, EnumerateError> {
    let mut layers = Layers {
        by_norm: vec![Vec::new(); max_norm + 1],
        principals: vec![Vec::new(); max_norm + 1],
        produced: 0,
        cap,
    };
    if max_norm >= 1 {
        layers.by_norm[1].push(Term::Zero);
        layers.bump(1)?;
    }
    for n in 2..=max_norm {
        let mut principals = Vec::new();
        for u in 0..=max_sub {
            let u = OrderIndex::Finite(u);
            for a in &layers.by_norm[n - 1] {
                if ordinal_only && check_collapse(u, a).is_err() {
                    continue;
                }
                principals.push(Term::Principal(u, Box::new(a.clone())));
            }
        }
        layers.bump(principals.len())?;
        layers.principals[n] = principals.clone();

        let mut sums = Vec::new();
        let mut prefix = Vec::new();
        extend_sums(&layers.principals, n, ordinal_only, &mut prefix, &mut sums);
        layers.bump(sums.len())?;
        layers.by_norm[n] = principals;
        layers.by_norm[n].extend(sums);
    }
    Ok(layers)
}

/// Appends every sequence of at least two principal terms extending
/// `prefix` whose remaining norm is exactly `remaining`.
fn extend_sums(
    principals: &[Vec<Term>],
    remaining: usize,
    descending: bool,
    prefix: &mut Vec<Term>,
    out: &mut Vec<Term>,
) {
    if remaining == 0 {
        if prefix.len() >= 2 {
            out.push(Term::from_parts(prefix.clone()).expect("principal parts"));
        }
        return;
    }
    for k in 2..=remaining {
        // A lone component of the full norm is a principal term, not a sum.
        if prefix.is_empty() && k == remaining {
            continue;
        }
        for p in &principals[k] {
            if descending {
                if let Some(last) = prefix.last() {
                    if compare(p, last) == Ordering::Greater {
                        continue;
                    }
                }
            }
            prefix.push(p.clone());
            extend_sums(principals, remaining - k, descending, prefix, out);
            prefix.pop();
        }
    }
}

/// All ordinal terms with subscripts `≤ max_subscript` and norm
/// `≤ max_norm`, sorted by `≺`.
pub fn enumerate_ot(opts: &EnumerateOptions) -> Result<Vec<Term>, EnumerateError> {
    if opts.max_norm == 0 {
        return Err(EnumerateError::ZeroNorm);
    }
    let layers = build_layers(opts.max_subscript, opts.max_norm, true, opts.cap)?;
    let mut all: Vec<Term> = layers
        .by_norm
        .into_iter()
        .flatten()
        .filter(|t| !opts.order_zero_only || t.order() == OrderIndex::ZERO)
        .collect();
    all.sort_by(compare);
    Ok(all)
}

/// All grammatical terms (not only ordinal terms) with subscripts
/// `≤ max_subscript` and norm `≤ max_norm`, sorted by `≺`.
pub fn enumerate_terms(max_subscript: u32, max_norm: usize, cap: usize) -> Result<Vec<Term>, EnumerateError> {
    if max_norm == 0 {
        return Err(EnumerateError::ZeroNorm);
    }
    let layers = build_layers(max_subscript, max_norm, false, cap)?;
    let mut all: Vec<Term> = layers.by_norm.into_iter().flatten().collect();
    all.sort_by(compare);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn g_set_examples() {
        assert!(g_set(OrderIndex::ZERO, &Term::Zero).is_empty());
        assert!(g_set(1.into(), &t("D0(0)")).is_empty());
        let g = g_set(OrderIndex::ZERO, &t("D1(D0(0))"));
        assert_eq!(g, TermSet::from_vec(vec![t("D0(0)"), t("0")]));
    }

    #[test]
    fn ot_examples() {
        assert!(is_ot(&t("0")));
        assert!(is_ot(&t("D0(D0(0))")));
        let err = check_ot(&t("(D0(0),D1(0))")).unwrap_err();
        assert_eq!(err.clause, OtClause::Ot2);
        // G_0(D0(D1(0))) = {D1(0), 0} and D1(0) is above D0(D1(0)).
        let err = check_ot(&t("D0(D0(D1(0)))")).unwrap_err();
        assert_eq!(err.clause, OtClause::Ot3);
    }

    #[test]
    fn restricted_examples() {
        assert!(in_ot_restricted(&Term::Zero, 1.into()));
        assert!(!in_ot_restricted(&t("D0(D1(0))"), 1.into()));
        assert!(in_ot_restricted(&t("D0(D1(0))"), OrderIndex::Omega));
        assert!(!in_ot_restricted(&t("D0(Dw(0))"), OrderIndex::Omega));
    }

    #[test]
    fn u_subterm_examples() {
        assert_eq!(u_subterms(OrderIndex::ZERO, &Term::Zero), TermSet::from_vec(vec![Term::Zero]));
        assert_eq!(u_subterms(1.into(), &t("D0(0)")), TermSet::from_vec(vec![t("D0(0)")]));
        assert_eq!(
            u_subterms(OrderIndex::ZERO, &t("D1(D0(0))")),
            TermSet::from_vec(vec![t("D1(D0(0))"), t("D0(0)"), t("0")])
        );
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_ot(&EnumerateOptions::new(0, 3)).unwrap();
        assert_eq!(e, vec![t("0"), t("D0(0)"), t("D0(D0(0))")]);
        assert_eq!(enumerate_ot(&EnumerateOptions::new(0, 1)).unwrap(), vec![t("0")]);
        let e = enumerate_ot(&EnumerateOptions::new(1, 2).order_zero_only(true)).unwrap();
        assert_eq!(e, vec![t("0"), t("D0(0)")]);
    }

    #[test]
    fn enumeration_cap_is_an_error() {
        let err = enumerate_ot(&EnumerateOptions::new(2, 6).cap(10)).unwrap_err();
        assert_eq!(err, EnumerateError::LimitExceeded { cap: 10 });
        assert_eq!(enumerate_ot(&EnumerateOptions::new(2, 0)), Err(EnumerateError::ZeroNorm));
    }
}
