//! Brute-force reference implementations. Deliberately naive and written
//! from the definitions, sharing no code with the library beyond the data
//! types.
#![allow(dead_code)]

use std::cmp::Ordering;

use double_kruskal::forest::DoubleForest;
use double_kruskal::term::{OrderIndex, Term};

// ---- terms ----

/// Every raw term (OT or not) with subscripts `≤ max_sub` and exactly `n`
/// symbols.
pub fn raw_terms_of_norm(max_sub: u32, n: usize) -> Vec<Term> {
    let mut out = Vec::new();
    if n == 1 {
        out.push(Term::Zero);
    }
    out.extend(raw_principals(max_sub, n));
    for k in 2..=n / 2 {
        for seq in principal_sequences(max_sub, n, k) {
            out.push(Term::from_parts(seq).unwrap());
        }
    }
    out
}

fn raw_principals(max_sub: u32, n: usize) -> Vec<Term> {
    if n < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for u in 0..=max_sub {
        for arg in raw_terms_of_norm(max_sub, n - 1) {
            out.push(Term::principal(u, arg));
        }
    }
    out
}

/// Sequences of exactly `k` principal terms with `n` symbols in total.
fn principal_sequences(max_sub: u32, n: usize, k: usize) -> Vec<Vec<Term>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 2..=n {
        for head in raw_principals(max_sub, first) {
            for mut rest in principal_sequences(max_sub, n - first, k - 1) {
                rest.insert(0, head.clone());
                out.push(rest);
            }
        }
    }
    out
}

pub fn raw_terms(max_sub: u32, max_norm: usize) -> Vec<Term> {
    (1..=max_norm).flat_map(|n| raw_terms_of_norm(max_sub, n)).collect()
}

/// Counts `0` and `D` tokens in the printed form.
pub fn token_norm(text: &str) -> usize {
    text.chars().filter(|&c| c == 'D').count()
        + text
            .char_indices()
            .filter(|&(i, c)| c == '0' && !text[..i].ends_with(|p: char| p == 'D' || p.is_ascii_digit()))
            .count()
}

/// `≺` on terms read as sequences of principal terms: the lexicographic
/// order where a proper prefix is smaller and principal terms compare by
/// subscript, then argument.
pub fn seq_compare(a: &Term, b: &Term) -> Ordering {
    let (xs, ys) = (a.parts(), b.parts());
    for (x, y) in xs.iter().zip(ys) {
        let c = match (x, y) {
            (Term::Principal(u, p), Term::Principal(v, q)) => u.cmp(v).then_with(|| seq_compare(p, q)),
            _ => unreachable!("parts are principal"),
        };
        if c != Ordering::Equal {
            return c;
        }
    }
    xs.len().cmp(&ys.len())
}

/// `G_u a` by scanning every position: the argument of each `D_v` with
/// `v ≥ u` that has no enclosing `D_w` with `w < u`.
pub fn g_scan(u: OrderIndex, a: &Term) -> Vec<Term> {
    fn walk(u: OrderIndex, a: &Term, blocked: bool, out: &mut Vec<Term>) {
        match a {
            Term::Zero => {}
            Term::Sum(_) => a.parts().iter().for_each(|p| walk(u, p, blocked, out)),
            Term::Principal(v, b) => {
                if !blocked && *v >= u {
                    out.push((**b).clone());
                }
                walk(u, b, blocked || *v < u, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(u, a, false, &mut out);
    out.sort_by(seq_compare);
    out.dedup();
    out
}

/// Membership in OT straight from the three formation rules.
pub fn ot_oracle(a: &Term) -> bool {
    match a {
        Term::Zero => true,
        Term::Sum(_) => {
            let ps = a.parts();
            ps.iter().all(ot_oracle) && ps.windows(2).all(|w| seq_compare(&w[1], &w[0]) != Ordering::Greater)
        }
        Term::Principal(u, b) => ot_oracle(b) && g_scan(*u, b).iter().all(|c| seq_compare(c, b) == Ordering::Less),
    }
}

// ---- forests ----

/// Reflexive closures `le1[a][b]`, `le2[a][b]` by walking links upward.
pub fn relations(t: &DoubleForest) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let n = t.len();
    let mut le1 = vec![vec![false; n]; n];
    let mut le2 = vec![vec![false; n]; n];
    for b in 0..n {
        let mut cur = Some(b);
        while let Some(a) = cur {
            le1[a][b] = true;
            cur = t.le1_parent(a);
        }
        let mut cur = Some(b);
        while let Some(a) = cur {
            le2[a][b] = true;
            cur = t.le2_pred(a);
        }
    }
    (le1, le2)
}

/// All injections from `0..k` into `0..n`, in lexicographic order.
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for y in 0..n {
            if !cur.contains(&y) {
                cur.push(y);
                go(k, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), &mut out);
    out
}

/// Is there an injection preserving both orders forward and not lowering
/// labels? Tries every injection.
pub fn covering_oracle(s: &DoubleForest, t: &DoubleForest) -> bool {
    if s.len() > t.len() {
        return false;
    }
    let (s1, s2) = relations(s);
    let (t1, t2) = relations(t);
    let n = s.len();
    injections(n, t.len()).iter().any(|h| {
        (0..n).all(|a| {
            s.delta(a) <= t.delta(h[a])
                && (0..n).all(|b| (!s1[a][b] || t1[h[a]][h[b]]) && (!s2[a][b] || t2[h[a]][h[b]]))
        })
    })
}

/// Same with labels and `≤₂` ignored.
pub fn tree_covering_oracle(s: &DoubleForest, t: &DoubleForest) -> bool {
    if s.len() > t.len() {
        return false;
    }
    let (s1, _) = relations(s);
    let (t1, _) = relations(t);
    let n = s.len();
    injections(n, t.len()).iter().any(|h| (0..n).all(|a| (0..n).all(|b| !s1[a][b] || t1[h[a]][h[b]])))
}

/// Is there a bijection preserving and reflecting both orders and labels?
pub fn isomorphic_oracle(s: &DoubleForest, t: &DoubleForest) -> bool {
    if s.len() != t.len() {
        return false;
    }
    let (s1, s2) = relations(s);
    let (t1, t2) = relations(t);
    let n = s.len();
    injections(n, n).iter().any(|h| {
        (0..n).all(|a| {
            s.delta(a) == t.delta(h[a]) && (0..n).all(|b| s1[a][b] == t1[h[a]][h[b]] && s2[a][b] == t2[h[a]][h[b]])
        })
    })
}
