use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Ctx, Suite, Tally, VerifyError};
use crate::collapse::{coll, exp, psi_raw, DescendingSequence, Translator};
use crate::forest::generate::{all_up_to, Shape};
use crate::forest::{
    canonical_form, covering_exists, disjoint_union, is_covering, to_json, tree_covering_exists, validate_m2f,
    CanonicalCode, Covering, DoubleForest, Node,
};
use crate::order::{compare, leq, less};
use crate::ot::{
    enumerate_ot, enumerate_terms, g_set, in_ot_restricted, is_ot, u_subterms, EnumerateOptions,
    DEFAULT_ENUMERATION_CAP,
};
use crate::term::{OrderIndex, Term};

type Used = Vec<(&'static str, u64)>;

pub(super) fn run(suite: Suite, ctx: &Ctx) -> Result<(Tally, Used), VerifyError> {
    let p = ctx.params;
    let terms = || vec![("max_subscript", p.max_subscript as u64), ("max_norm", p.max_norm as u64)];
    let nodes = || vec![("max_nodes", p.max_nodes as u64)];
    let tally = match suite {
        Suite::MainTheorem => main_theorem(ctx)?,
        Suite::Corollary => corollary(ctx)?,
        Suite::LinearOrder => {
            let mut used = terms();
            used.extend([("sample", p.sample as u64), ("seed", p.seed), ("triple_norm", p.triple_norm as u64)]);
            return Ok((linear_order(ctx)?, used));
        }
        Suite::OrderMonotonicity => order_monotonicity(ctx)?,
        Suite::Lexicographic => lexicographic(ctx)?,
        Suite::SubscriptRaising => subscript_raising(ctx)?,
        Suite::Prefix => prefix(ctx)?,
        Suite::GSubset => g_subset(ctx)?,
        Suite::DescendingSum => descending_sum(ctx)?,
        Suite::USubterm => u_subterm_bound(ctx)?,
        Suite::D0Bound => d0_bound(ctx)?,
        Suite::OrderLaws => order_laws(ctx)?,
        Suite::NormIdentity => norm_identity(ctx)?,
        Suite::NormBound => norm_bound(ctx)?,
        Suite::HeightLaw => height_law(ctx)?,
        Suite::PsiPicture => psi_picture_suite(ctx)?,
        Suite::Coll => coll_suite(ctx)?,
        Suite::Exp => exp_suite(ctx)?,
        Suite::MinSubterm => min_subterm(ctx)?,
        Suite::Cases => {
            let mut used = terms();
            used.extend(nodes());
            return Ok((cases(ctx)?, used));
        }
        Suite::Dtc1 => return Ok((dtc1(ctx)?, nodes())),
        Suite::HeightVsNorm => return Ok((height_vs_norm(ctx)?, nodes())),
        Suite::QuasiOrder => return Ok((quasi_order(ctx)?, nodes())),
        Suite::Determinism => determinism(ctx)?,
    };
    Ok((tally, terms()))
}

fn ot(ctx: &Ctx) -> Result<Vec<Term>, VerifyError> {
    Ok(enumerate_ot(&EnumerateOptions::new(ctx.params.max_subscript, ctx.params.max_norm))?)
}

fn principals(ctx: &Ctx) -> Result<Vec<Term>, VerifyError> {
    Ok(ot(ctx)?.into_iter().filter(Term::is_principal).collect())
}

fn raw_terms(ctx: &Ctx) -> Result<Vec<Term>, VerifyError> {
    Ok(enumerate_terms(ctx.params.max_subscript, ctx.params.max_norm, DEFAULT_ENUMERATION_CAP)?)
}

fn finite(u: OrderIndex) -> u32 {
    u.finite().expect("enumerated subscripts are finite")
}

fn tree(tr: &Translator, a: &Term) -> Arc<DoubleForest> {
    tr.translate(a).expect("enumerated principal terms lie in OT(ω)")
}

fn indices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Shared check for both pair suites: a covering must imply `a ≼ b`.
fn reduction_pair(a: &Term, b: &Term, ta: &DoubleForest, tb: &DoubleForest, t: &mut Tally) {
    let covered = covering_exists(ta, tb).is_some();
    let below = leq(a, b);
    if covered {
        t.stat("coverings");
    } else if below {
        t.stat("converse-gaps");
    }
    t.check(!covered || below, || {
        format!("{a} ⋠ {b} but the first tree covers into the second: {} into {}", to_json(ta), to_json(tb))
    });
}

fn main_theorem(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    let tr = Translator::new();
    let trees: Vec<Arc<DoubleForest>> = terms.par_iter().map(|a| tree(&tr, a)).collect();
    ctx.each(&indices(terms.len()), |&i, t| {
        for j in 0..terms.len() {
            reduction_pair(&terms[i], &terms[j], &trees[i], &trees[j], t);
        }
    })
}

fn corollary(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let opts = EnumerateOptions::new(ctx.params.max_subscript, ctx.params.max_norm).order_zero_only(true);
    let terms: Vec<Term> = enumerate_ot(&opts)?.into_iter().filter(|a| !a.is_zero()).collect();
    let tr = Translator::new();
    let trees: Vec<DoubleForest> =
        terms.par_iter().map(|a| tr.translate_sum(a).expect("enumerated order-0 terms lie in OT(ω)")).collect();
    ctx.each(&indices(terms.len()), |&i, t| {
        for j in 0..terms.len() {
            reduction_pair(&terms[i], &terms[j], &trees[i], &trees[j], t);
        }
    })
}

fn linear_order(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = raw_terms(ctx)?;
    let mut tally = ctx.each(&indices(terms.len()), |&i, t| {
        let a = &terms[i];
        t.check(!less(a, a), || format!("{a} ≺ {a}"));
        for b in &terms {
            let (ab, ba) = (compare(a, b), compare(b, a));
            t.check(ab == ba.reverse(), || format!("{a} vs {b} gives {ab:?} but {b} vs {a} gives {ba:?}"));
            t.check(ab.is_eq() == (a == b), || format!("{a} vs {b} gives {ab:?}"));
        }
    })?;

    let small: Vec<Term> = terms.iter().filter(|a| a.norm() <= ctx.params.triple_norm).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.params.seed);
    let sample: Vec<Term> = terms.choose_multiple(&mut rng, ctx.params.sample).cloned().collect();
    for set in [small, sample] {
        tally.absorb(transitivity(ctx, &set)?);
    }
    Ok(tally)
}

fn transitivity(ctx: &Ctx, set: &[Term]) -> Result<Tally, VerifyError> {
    let n = set.len();
    let lt: Vec<bool> = (0..n * n).into_par_iter().map(|k| less(&set[k / n], &set[k % n])).collect();
    ctx.each(&indices(n), |&i, t| {
        for j in (0..n).filter(|&j| lt[i * n + j]) {
            for k in (0..n).filter(|&k| lt[j * n + k]) {
                t.check(lt[i * n + k], || {
                    format!("{} ≺ {} ≺ {} but not {} ≺ {}", set[i], set[j], set[k], set[i], set[k])
                });
            }
        }
    })
}

fn order_monotonicity(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = raw_terms(ctx)?;
    ctx.each(&terms, |a, t| {
        for b in terms.iter().filter(|b| a.order() < b.order()) {
            t.check(less(a, b), || format!("ord({a}) < ord({b}) but not {a} ≺ {b}"));
        }
    })
}

/// Every `p` from positions of `a` to positions of `b`, as digit vectors.
fn all_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p = vec![0; m];
    loop {
        out.push(p.clone());
        let Some(i) = (0..m).rev().find(|&i| p[i] + 1 < n) else {
            return out;
        };
        p[i] += 1;
        p[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
}

fn lexicographic(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms: Vec<Term> = ot(ctx)?.into_iter().filter(|a| !a.is_zero()).collect();
    ctx.each(&terms, |a, t| {
        let xs = a.parts();
        for b in &terms {
            let ys = b.parts();
            for p in all_maps(xs.len(), ys.len()) {
                let shared = |i: usize| (0..xs.len()).any(|j| j != i && p[j] == p[i]);
                let dominated = (0..xs.len()).all(|i| leq(&xs[i], &ys[p[i]]) && !(shared(i) && xs[i] == ys[p[i]]));
                if !dominated {
                    continue;
                }
                t.check(leq(a, b), || format!("{a} ⋠ {b} although parts map by {p:?}"));
                let injective = (0..xs.len()).all(|i| !shared(i));
                if !injective {
                    t.check(less(a, b), || format!("not {a} ≺ {b} although parts map non-injectively by {p:?}"));
                }
            }
        }
    })
}

fn subscript_raising(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    ctx.each(&terms, |a, t| {
        let Term::Principal(u, arg) = a else { return };
        for v in finite(*u)..=ctx.params.max_subscript {
            let raised = Term::principal(v, (**arg).clone());
            t.check(is_ot(&raised), || format!("{a} ∈ OT but {raised} ∉ OT"));
        }
    })
}

fn prefix(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    ctx.each(&terms, |a, t| {
        let Term::Principal(u, arg) = a else { return };
        let parts = arg.parts();
        for m in 1..parts.len() {
            let shorter = Term::from_parts(parts[..m].to_vec()).expect("parts are principal");
            let c = Term::principal(*u, shorter);
            t.check(is_ot(&c), || format!("{a} ∈ OT but its prefix {c} ∉ OT"));
        }
    })
}

fn g_subset(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = ot(ctx)?;
    let indices: Vec<OrderIndex> =
        (0..=ctx.params.max_subscript + 1).map(OrderIndex::Finite).chain([OrderIndex::Omega]).collect();
    ctx.each(&terms, |a, t| {
        for &u in &indices {
            for g in &g_set(u, a) {
                t.check(is_ot(g), || format!("{g} ∈ G_{u}({a}) but {g} ∉ OT"));
            }
        }
    })
}

fn descending_sum(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = ot(ctx)?;
    ctx.each(&terms, |a, t| {
        if let Term::Sum(s) = a {
            for w in s.parts().windows(2) {
                t.check(w[0].order() >= w[1].order(), || format!("{a} ∈ OT but ord({}) < ord({})", w[0], w[1]));
            }
        }
    })
}

fn u_subterm_bound(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    ctx.each(&terms, |a, t| {
        let u = a.order();
        for b in u_subterms(u, a).iter().filter(|b| b.order() == u) {
            t.check(leq(b, a), || format!("{b} is a {u}-subterm of {a} of order {u} but {b} ⋠ {a}"));
        }
    })
}

fn d0_bound(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = ot(ctx)?;
    let bounds: Vec<(Term, OrderIndex)> = (0..=ctx.params.max_subscript)
        .map(|n| OrderIndex::Finite(n + 1))
        .chain([OrderIndex::Omega])
        .map(|top| (Term::principal(0, Term::principal(top, Term::Zero)), top))
        .collect();
    ctx.each(&terms, |a, t| {
        for (bound, top) in &bounds {
            if less(a, bound) {
                t.check(a.order() == OrderIndex::ZERO && in_ot_restricted(a, *top), || {
                    format!("{a} ≺ {bound} but it has order {} or lies outside OT({top})", a.order())
                });
            }
        }
        if let Term::Principal(OrderIndex::Finite(0), arg) = a {
            for n in finite(arg.order())..=ctx.params.max_subscript {
                t.check(in_ot_restricted(a, OrderIndex::Finite(n + 1)), || {
                    format!("{a} ∈ OT with ord({arg}) ≤ {n} but {a} ∉ OT({})", n + 1)
                });
            }
        }
    })
}

/// An ordinal term together with the trees of its parts, which form an
/// order-descending sequence.
struct Sequence {
    term: Term,
    trees: Vec<Arc<DoubleForest>>,
    orders: Vec<u32>,
}

impl Sequence {
    fn refs(&self) -> Vec<&DoubleForest> {
        self.trees.iter().map(|t| t.as_ref()).collect()
    }

    fn owned(&self) -> Vec<DoubleForest> {
        self.trees.iter().map(|t| (**t).clone()).collect()
    }

    fn describe(&self) -> String {
        let trees: Vec<String> = self.trees.iter().map(|t| to_json(t)).collect();
        format!("parts of {} = [{}]", self.term, trees.join(", "))
    }

    fn first(&self) -> u32 {
        self.orders[0]
    }

    fn last(&self) -> u32 {
        self.orders[self.orders.len() - 1]
    }
}

fn sequences(ctx: &Ctx, tr: &Translator) -> Result<Vec<Sequence>, VerifyError> {
    let terms: Vec<Term> = ot(ctx)?.into_iter().filter(|a| !a.is_zero()).collect();
    Ok(terms
        .into_par_iter()
        .map(|term| {
            let trees: Vec<Arc<DoubleForest>> = term.parts().iter().map(|b| tree(tr, b)).collect();
            let orders = trees.iter().map(|t| t.order().expect("translations are trees")).collect();
            Sequence { term, trees, orders }
        })
        .collect())
}

fn is_m2t_of_order(t: &DoubleForest, u: u32) -> bool {
    validate_m2f(t.nodes()).is_ok() && t.order() == Some(u)
}

fn order_laws(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let tr = Translator::new();
    let seqs = sequences(ctx, &tr)?;
    let top = ctx.params.max_subscript + 1;
    ctx.each(&seqs, |s, t| {
        if s.term.is_principal() {
            let want = finite(s.term.order());
            t.check(s.trees[0].order() == Some(want), || format!("ord(T({})) ≠ {want}", s.term));
        }
        for u in 0..=top {
            let p = psi_raw(u, &s.refs());
            t.check(is_m2t_of_order(&p, u), || format!("Ψ_{u} of {} is not a tree of order {u}", s.describe()));
        }
        if s.first() == s.last() && s.first() > 0 {
            let c = coll(&DescendingSequence::new(s.owned()).expect("descending")).expect("equal positive orders");
            let want = s.first() - 1;
            t.check(is_m2t_of_order(&c, want), || format!("coll of {} is not a tree of order {want}", s.describe()));
        }
        for u in s.first()..=top {
            let e = exp(u, &s.owned()).expect("orders at most u");
            t.check(is_m2t_of_order(&e, u), || format!("exp_{u} of {} is not a tree of order {u}", s.describe()));
        }
    })
}

fn norm_identity(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let tr = Translator::new();
    let seqs = sequences(ctx, &tr)?;
    ctx.each(&seqs, |s, t| {
        let total: usize = s.trees.iter().map(|x| x.len()).sum();
        for u in 0..s.last() {
            let got = psi_raw(u, &s.refs()).len();
            let want = total + (s.first() - u) as usize;
            t.check(got == want, || format!("Ψ_{u} of {} has {got} nodes, expected {want}", s.describe()));
        }
    })
}

fn norm_bound(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    let tr = Translator::new();
    ctx.each(&terms, |a, t| {
        let n = finite(a.max_subscript().expect("principal terms have a subscript")) as usize;
        let size = tree(&tr, a).len();
        let bound = (n + 1) * a.norm();
        t.check(size <= bound, || format!("T({a}) has {size} nodes, above (n+1)·||a|| = {bound}"));
    })
}

fn height_law(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let tr = Translator::new();
    let seqs = sequences(ctx, &tr)?;
    let top = ctx.params.max_subscript + 1;
    ctx.each(&seqs, |s, t| {
        let a = &s.term;
        let max_sub = finite(a.max_subscript().expect("nonzero terms have a subscript")) as usize;
        if a.is_principal() {
            let ta = &s.trees[0];
            let h = ta.m2f_height().expect("nonempty");
            t.check(h == max_sub, || format!("T({a}) has height {h}, expected {max_sub}"));
            if ta.order() == Some(0) {
                t.check(ta.height() == ta.m2f_height(), || format!("T({a}) has order 0 but its two heights differ"));
            }
        }
        if a.order() == OrderIndex::ZERO {
            let h = tr.translate_sum(a).expect("order-0 term in OT(ω)").height().expect("nonempty");
            t.check(h == max_sub + 1, || format!("ρ-tree of {a} has height {h}, expected {}", max_sub + 1));
        }
        let inner = s.trees.iter().map(|x| x.m2f_height().expect("nonempty")).max().unwrap_or(0);
        for u in 0..=top {
            let h = psi_raw(u, &s.refs()).m2f_height().expect("nonempty");
            let want = inner.max(u as usize);
            t.check(h == want, || format!("Ψ_{u} of {} has height {h}, expected {want}", s.describe()));
        }
    })
}

/// The tree described by the structure lemma for `Ψ_u` when every input
/// has order above `u`: a `≤₂`-chain `r_{u+1} < ... < r_v` of label `u`,
/// with each input hung above `r_w` for `w` its order, every node of label
/// `d > u` placed `≤₂`-above `r_d`, and labels cut down to `u`.
pub fn psi_picture(u: u32, ts: &[DoubleForest]) -> DoubleForest {
    let orders: Vec<u32> = ts.iter().map(|t| t.order().expect("inputs are trees")).collect();
    let v = orders.iter().copied().max().expect("nonempty input");
    assert!(orders.iter().all(|&o| o > u), "every input must have order above u");
    let spine = |w: u32| (w - u - 1) as usize;
    let mut nodes: Vec<Node> = (u + 1..=v)
        .map(|w| {
            let below = (w > u + 1).then(|| spine(w - 1));
            Node { delta: u, le1_parent: below, le2_pred: below }
        })
        .collect();
    for (t, &o) in ts.iter().zip(&orders) {
        let offset = nodes.len();
        for n in t.nodes() {
            nodes.push(Node {
                delta: n.delta.min(u),
                le1_parent: Some(n.le1_parent.map_or(spine(o), |p| p + offset)),
                le2_pred: n.le2_pred.map(|q| q + offset).or_else(|| (n.delta > u).then(|| spine(n.delta))),
            });
        }
    }
    DoubleForest::new(nodes).expect("the described structure is a monotone double tree")
}

fn psi_picture_suite(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let tr = Translator::new();
    let seqs = sequences(ctx, &tr)?;
    ctx.each(&seqs, |s, t| {
        let owned = s.owned();
        for u in 0..s.last() {
            let got = canonical_form(&psi_raw(u, &s.refs()));
            let want = canonical_form(&psi_picture(u, &owned));
            t.check(got == want, || format!("Ψ_{u} of {} differs from its spine description", s.describe()));
        }
    })
}

/// Node ranges of the inputs inside a coll or exp result: the root is node
/// 0 and the inputs follow in order.
fn component_offsets(ts: &[Arc<DoubleForest>]) -> Vec<usize> {
    ts.iter()
        .scan(1, |next, x| {
            let here = *next;
            *next += x.len();
            Some(here)
        })
        .collect()
}

/// Checks that the input's relations (and labels, with `labels`) are the
/// restriction of the output's.
fn is_substructure_at(whole: &DoubleForest, part: &DoubleForest, offset: usize, labels: bool) -> bool {
    let (w, p) = (whole.closure(), part.closure());
    (0..part.len()).all(|x| {
        (!labels || whole.delta(x + offset) == part.delta(x))
            && (0..part.len())
                .all(|y| w.le1(x + offset, y + offset) == p.le1(x, y) && w.le2(x + offset, y + offset) == p.le2(x, y))
    })
}

fn coll_suite(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let tr = Translator::new();
    let seqs = sequences(ctx, &tr)?;
    ctx.each(&seqs, |s, t| {
        if s.first() != s.last() || s.first() == 0 {
            return;
        }
        let u = s.first() - 1;
        let c = coll(&DescendingSequence::new(s.owned()).expect("descending")).expect("equal positive orders");
        t.check(is_m2t_of_order(&c, u), || format!("coll of {} is not a tree of order {u}", s.describe()));
        for (part, offset) in s.trees.iter().zip(component_offsets(&s.trees)) {
            t.check(is_substructure_at(&c, part, offset, false), || {
                format!("an input of coll of {} is not a substructure", s.describe())
            });
            for x in (0..part.len()).filter(|&x| part.delta(x) <= u) {
                let above = canonical_form(&c.substructure_above(x + offset).expect("node exists"));
                let own = canonical_form(&part.substructure_above(x).expect("node exists"));
                t.check(above == own, || format!("coll of {} changes the part above input node {x}", s.describe()));
            }
        }
    })
}

fn exp_suite(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let tr = Translator::new();
    let seqs = sequences(ctx, &tr)?;
    ctx.each(&seqs, |s, t| {
        for u in [s.first(), s.first() + 1] {
            let e = exp(u, &s.owned()).expect("orders at most u");
            t.check(is_m2t_of_order(&e, u), || format!("exp_{u} of {} is not a tree of order {u}", s.describe()));
            for (part, offset) in s.trees.iter().zip(component_offsets(&s.trees)) {
                t.check(is_substructure_at(&e, part, offset, true), || {
                    format!("an input of exp_{u} of {} is not a substructure", s.describe())
                });
                for x in 0..part.len() {
                    let above = e.substructure_above(x + offset).expect("node exists");
                    let own = part.substructure_above(x).expect("node exists");
                    t.check(canonical_form(&above) == canonical_form(&own), || {
                        format!("exp_{u} of {} changes the part above input node {x}", s.describe())
                    });
                }
            }
        }
    })
}

fn min_subterm(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    let tr = Translator::new();
    ctx.each(&terms, |a, t| {
        let ta = tree(&tr, a);
        for v in 0..=finite(a.order()) {
            let level: Vec<usize> = (0..ta.len()).filter(|&x| ta.delta(x) == v).collect();
            let minimal = level.iter().filter(|&&x| !level.iter().any(|&y| y != x && ta.le1(y, x)));
            let candidates: BTreeSet<CanonicalCode> = u_subterms(OrderIndex::Finite(v), a)
                .iter()
                .filter(|b| b.is_principal() && b.order() == OrderIndex::Finite(v))
                .map(|b| canonical_form(&tree(&tr, b)))
                .collect();
            for &x in minimal {
                let above = canonical_form(&ta.substructure_above(x).expect("node exists"));
                t.check(candidates.contains(&above), || {
                    format!("node {x} of T({a}) is minimal of order {v} but T({a})^x matches no T(b): {}", to_json(&ta))
                });
            }
        }
    })
}

/// Non-decreasing index lists into `sizes` whose sizes sum to at most
/// `budget`.
fn multisets(sizes: &[usize], budget: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], from: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in from..sizes.len() {
            if sizes[i] <= left {
                cur.push(i);
                out.push(cur.clone());
                go(sizes, i, left - sizes[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(sizes, 0, budget, &mut Vec::new(), &mut out);
    out
}

fn cases(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    let tr = Translator::new();
    let mut by_order: BTreeMap<u32, BTreeMap<(usize, CanonicalCode), Arc<DoubleForest>>> = BTreeMap::new();
    for a in &terms {
        let ta = tree(&tr, a);
        let o = finite(a.order());
        // The smallest coll has two nodes, so a member of a pair has at
        // most `max_nodes - 2`.
        if o > 0 && ta.len() + 3 <= ctx.params.max_nodes {
            by_order.entry(o).or_default().insert((ta.len(), canonical_form(&ta)), ta);
        }
    }

    struct Instance {
        u: u32,
        parts: Vec<Arc<DoubleForest>>,
        coll: DoubleForest,
        union: DoubleForest,
    }
    let mut instances = Vec::new();
    for (&o, pool) in &by_order {
        let pool: Vec<Arc<DoubleForest>> = pool.values().cloned().collect();
        let sizes: Vec<usize> = pool.iter().map(|x| x.len()).collect();
        for pick in multisets(&sizes, ctx.params.max_nodes.saturating_sub(3)) {
            let parts: Vec<Arc<DoubleForest>> = pick.iter().map(|&i| Arc::clone(&pool[i])).collect();
            let owned: Vec<DoubleForest> = parts.iter().map(|x| (**x).clone()).collect();
            let union = disjoint_union(&owned);
            let coll = coll(&DescendingSequence::new(owned).expect("descending")).expect("equal positive orders");
            instances.push(Instance { u: o - 1, coll, union, parts });
        }
    }

    ctx.each(&indices(instances.len()), |&i, t| {
        let left = &instances[i];
        let fits = |r: &&Instance| r.u == left.u && left.coll.len() + r.coll.len() <= ctx.params.max_nodes;
        for right in instances.iter().filter(fits) {
            if covering_exists(&left.coll, &right.coll).is_none() {
                continue;
            }
            let unions = covering_exists(&left.union, &right.union).is_some();
            let inside = || {
                right.parts.iter().any(|s| {
                    (0..s.len()).filter(|&x| s.delta(x) == left.u).any(|x| {
                        let above = s.substructure_above(x).expect("node exists");
                        covering_exists(&left.coll, &above).is_some()
                    })
                })
            };
            if unions {
                t.stat("disjoint-unions-cover");
            }
            t.check(unions || inside(), || {
                format!(
                    "coll {} covers into coll {} but neither case applies",
                    to_json(&left.coll),
                    to_json(&right.coll)
                )
            });
        }
    })
}

fn double_trees(max_nodes: usize) -> Vec<DoubleForest> {
    all_up_to(max_nodes, Shape::DoubleTree)
}

fn dtc1(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let low: Vec<DoubleForest> =
        double_trees(ctx.params.max_nodes).into_iter().filter(|t| t.height() == Ok(1) || t.len() == 1).collect();
    let mut tally = ctx.each(&low, |p, t| {
        for q in &low {
            let double = covering_exists(p, q).is_some();
            let plain = tree_covering_exists(p, q);
            t.check(double == plain, || {
                format!("double covering {double} but tree covering {plain}: {} into {}", to_json(p), to_json(q))
            });
        }
    })?;
    // The map to ≤₁-trees is a bijection onto rooted trees.
    let images: BTreeSet<CanonicalCode> = low.iter().map(|t| canonical_form(&t.le1_tree())).collect();
    let trees: BTreeSet<CanonicalCode> =
        all_up_to(ctx.params.max_nodes, Shape::RootedTree).iter().map(canonical_form).collect();
    tally.check(images.len() == low.len() && images == trees, || {
        format!("{} double trees of height ≤ 1 map onto {} of {} rooted trees", low.len(), images.len(), trees.len())
    });
    Ok(tally)
}

fn height_vs_norm(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let sources = double_trees(ctx.params.max_nodes);
    let targets = double_trees(ctx.params.max_nodes + 1);
    ctx.each(&sources, |p, t| {
        for q in targets.iter().filter(|q| q.height().expect("nonempty") + 1 >= p.len()) {
            t.check(covering_exists(p, q).is_some(), || {
                format!(
                    "height of {} is at least {} but {} does not cover into it",
                    to_json(q),
                    p.len() - 1,
                    to_json(p)
                )
            });
        }
    })
}

fn quasi_order(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let all = double_trees(ctx.params.max_nodes);
    let n = all.len();
    let cov: Vec<Option<Covering>> =
        (0..n * n).into_par_iter().map(|k| covering_exists(&all[k / n], &all[k % n])).collect();
    ctx.each(&indices(n), |&i, t| {
        let a = &all[i];
        let identity: Vec<usize> = (0..a.len()).collect();
        t.check(is_covering(a, a, &identity) && cov[i * n + i].is_some(), || {
            format!("{} does not cover into itself", to_json(a))
        });
        for j in 0..n {
            let Some(ab) = &cov[i * n + j] else { continue };
            for k in 0..n {
                let Some(bc) = &cov[j * n + k] else { continue };
                let composed: Vec<usize> = ab.map.iter().map(|&y| bc.map[y]).collect();
                t.check(is_covering(a, &all[k], &composed), || {
                    format!("composed witness fails: {} into {}", to_json(a), to_json(&all[k]))
                });
            }
        }
    })
}

fn determinism(ctx: &Ctx) -> Result<Tally, VerifyError> {
    let terms = principals(ctx)?;
    let shared = Translator::new();
    let mut reversed = terms.clone();
    reversed.reverse();
    reversed.par_iter().for_each(|a| {
        tree(&shared, a);
    });
    ctx.each(&terms, |a, t| {
        let fresh = Translator::new().translate(a).expect("in OT(ω)");
        let cached = tree(&shared, a);
        t.check(*fresh == *cached && canonical_form(&fresh) == canonical_form(&cached), || {
            format!("T({a}) differs between evaluations")
        });
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_count() {
        assert_eq!(all_maps(2, 3).len(), 9);
        assert_eq!(all_maps(1, 1), vec![vec![0]]);
    }

    #[test]
    fn multiset_sizes() {
        // Sizes 1 and 2 within budget 3: [0], [0,0], [0,0,0], [0,1], [1].
        assert_eq!(multisets(&[1, 2], 3).len(), 5);
    }

    #[test]
    fn picture_of_single_input() {
        let p = psi_picture(0, &[DoubleForest::singleton(2)]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.height(), Ok(2));
    }
}
