//! The linear ordering `≺` on terms.
//!
//! Terms are compared as sequences of principal terms, lexicographically,
//! with a proper prefix below its extensions. Principal terms `D_u a` and
//! `D_v b` compare by subscript first and then by argument. `0` is the
//! empty sequence and therefore the least term.
//!
//! Restricted to ordinal terms this is the ordering of the notation system;
//! on arbitrary terms it is still a strict linear order but not a
//! well-ordering.

use std::cmp::Ordering;

use crate::term::Term;

/// Three-way comparison under `≺`. `Equal` exactly when the terms are
/// structurally equal.
pub fn compare(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Principal(u, x), Term::Principal(v, y)) => u.cmp(v).then_with(|| compare(x, y)),
        _ => compare_sequences(a.parts(), b.parts()),
    }
}

fn compare_sequences(a: &[Term], b: &[Term]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match compare(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// `a ≼ b`.
pub fn leq(a: &Term, b: &Term) -> bool {
    compare(a, b) != Ordering::Greater
}

/// `a ≺ b`.
pub fn less(a: &Term, b: &Term) -> bool {
    compare(a, b) == Ordering::Less
}

/// Newtype giving [`Term`] an [`Ord`] impl through [`compare`], for sorting
/// and ordered collections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordered(pub Term);

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(&self.0, &other.0)
    }
}

pub fn sort_terms(terms: &mut [Term]) {
    terms.sort_by(compare);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn cmp(a: &str, b: &str) -> Ordering {
        compare(&parse(a).unwrap(), &parse(b).unwrap())
    }

    #[test]
    fn clause_examples() {
        assert_eq!(cmp("0", "D0(0)"), Ordering::Less);
        assert_eq!(cmp("D0(0)", "D1(0)"), Ordering::Less);
        assert_eq!(cmp("D0(0)", "(D0(0),D0(0))"), Ordering::Less);
        assert_eq!(cmp("Dw(0)", "D7(D7(0))"), Ordering::Greater);
    }

    #[test]
    fn leq_examples() {
        let p = |s| parse(s).unwrap();
        assert!(leq(&p("0"), &p("0")));
        assert!(!leq(&p("D1(0)"), &p("D0(0)")));
        assert!(leq(&p("D0(0)"), &p("D0(D0(0))")));
    }

    #[test]
    fn sum_against_principal() {
        // (D1(0),D0(0)) starts with D1(0), which beats D0(D5(0)).
        assert_eq!(cmp("(D1(0),D0(0))", "D0(D5(0))"), Ordering::Greater);
        assert_eq!(cmp("(D1(0),D0(0))", "D1(0)"), Ordering::Greater);
        assert_eq!(cmp("(D1(0),D0(0))", "(D1(0),D1(0))"), Ordering::Less);
    }
}
