//! Longest bad sequences under a linear norm bound.
//!
//! A sequence `q_0, q_1, ...` is controlled by `c` when `||q_i|| ≤ c·(i+1)`
//! and bad when no `i < j` has `q_i ≤ q_j`. For forests `≤` is covering and
//! the norm is the node count; for ordinal terms the sequence must descend
//! strictly under `≺` and the norm is the symbol count.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use super::{Limits, VerifyError};
use crate::forest::generate::{all_of_size, Shape};
use crate::forest::{covering_exists, to_json, tree_covering_exists, DoubleForest};
use crate::order::{compare, less};
use crate::ot::{enumerate_ot, EnumerateOptions};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    DoubleTrees,
    Trees,
    OtTerms { max_subscript: u32 },
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::DoubleTrees => f.write_str("double-trees"),
            Domain::Trees => f.write_str("trees"),
            Domain::OtTerms { max_subscript } => write!(f, "ot-terms(max-sub={max_subscript})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadSequenceResult {
    pub c: usize,
    pub domain: String,
    pub height_cap: Option<usize>,
    pub length_cap: usize,
    /// Terms in text form, forests as JSON.
    pub sequence: Vec<String>,
    pub length: usize,
    /// Every controlled bad sequence was examined, none cut short.
    pub exhausted: bool,
    /// The resource limit that stopped the search, if any.
    pub stopped_by: Option<String>,
    pub visited: u64,
}

enum Item {
    Forest(DoubleForest),
    Term(Term),
}

impl Item {
    fn render(&self) -> String {
        match self {
            Item::Forest(t) => to_json(t),
            Item::Term(a) => a.to_string(),
        }
    }
}

/// Candidates sorted by norm. Growing the pool only appends, so indices
/// stay valid.
struct Pool {
    domain: Domain,
    height_cap: Option<usize>,
    items: Vec<Item>,
    norms: Vec<usize>,
    ready: usize,
}

impl Pool {
    fn ensure(&mut self, n: usize) -> Result<(), VerifyError> {
        if n <= self.ready {
            return Ok(());
        }
        match self.domain {
            Domain::DoubleTrees | Domain::Trees => {
                let shape = if self.domain == Domain::Trees { Shape::RootedTree } else { Shape::DoubleTree };
                for size in self.ready + 1..=n {
                    for t in all_of_size(size, shape) {
                        if self.height_cap.is_none_or(|h| t.height().is_ok_and(|x| x <= h)) {
                            self.items.push(Item::Forest(t));
                            self.norms.push(size);
                        }
                    }
                }
            }
            Domain::OtTerms { max_subscript } => {
                let mut all = enumerate_ot(&EnumerateOptions::new(max_subscript, n))?;
                all.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| compare(a, b)));
                let keep = self.items.len();
                for a in all.into_iter().skip(keep) {
                    self.norms.push(a.norm());
                    self.items.push(Item::Term(a));
                }
            }
        }
        self.ready = n;
        Ok(())
    }

    fn count_up_to(&self, n: usize) -> usize {
        self.norms.partition_point(|&m| m <= n)
    }

    /// May `q` follow the sequence `seq` of pool indices?
    fn extends(&self, seq: &[usize], q: usize) -> bool {
        match &self.items[q] {
            Item::Term(b) => seq.last().is_none_or(|&p| match &self.items[p] {
                Item::Term(a) => less(b, a),
                Item::Forest(_) => unreachable!(),
            }),
            Item::Forest(t) => seq.iter().all(|&p| match &self.items[p] {
                Item::Forest(s) if self.domain == Domain::Trees => !tree_covering_exists(s, t),
                Item::Forest(s) => covering_exists(s, t).is_none(),
                Item::Term(_) => unreachable!(),
            }),
        }
    }
}

struct Search<'a> {
    pool: Pool,
    c: usize,
    length_cap: usize,
    limits: &'a Limits,
    start: Instant,
    visited: u64,
    best: Vec<usize>,
    cut: bool,
}

impl Search<'_> {
    fn dfs(&mut self, seq: &mut Vec<usize>) -> Result<(), VerifyError> {
        self.visited += 1;
        if self.visited > self.limits.max_instances {
            return Err(VerifyError::InstanceCap { cap: self.limits.max_instances });
        }
        if let Some(budget) = self.limits.time_budget {
            if self.start.elapsed() > budget {
                return Err(VerifyError::TimeBudget { budget });
            }
        }
        if seq.len() > self.best.len() {
            self.best = seq.clone();
        }
        if seq.len() == self.length_cap {
            self.cut = true;
            return Ok(());
        }
        let bound = self.c * (seq.len() + 1);
        self.pool.ensure(bound)?;
        for q in 0..self.pool.count_up_to(bound) {
            if self.pool.extends(seq, q) {
                seq.push(q);
                self.dfs(seq)?;
                seq.pop();
            }
        }
        Ok(())
    }
}

/// Depth-first search for the longest bad sequence controlled by `c`, up
/// to `length_cap` items. Hitting `limits` ends the search early with the
/// best sequence found so far.
pub fn longest_controlled_bad_sequence(
    c: usize,
    domain: Domain,
    height_cap: Option<usize>,
    length_cap: usize,
    limits: &Limits,
) -> Result<BadSequenceResult, VerifyError> {
    if c == 0 {
        return Err(VerifyError::Parameter("the control constant must be at least 1".into()));
    }
    let pool = Pool { domain, height_cap, items: Vec::new(), norms: Vec::new(), ready: 0 };
    let mut search =
        Search { pool, c, length_cap, limits, start: Instant::now(), visited: 0, best: Vec::new(), cut: false };
    let stopped_by = match search.dfs(&mut Vec::new()) {
        Ok(()) => None,
        Err(e) if e.is_cap() || matches!(e, VerifyError::Enumerate(_)) => Some(e.to_string()),
        Err(e) => return Err(e),
    };
    let sequence: Vec<String> = search.best.iter().map(|&i| search.pool.items[i].render()).collect();
    Ok(BadSequenceResult {
        c,
        domain: domain.to_string(),
        height_cap,
        length_cap,
        length: sequence.len(),
        sequence,
        exhausted: stopped_by.is_none() && !search.cut,
        stopped_by,
        visited: search.visited,
    })
}
