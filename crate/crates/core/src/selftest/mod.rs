//! Exhaustive oracles over small terms.
//!
//! Terms are enumerated up to a depth bound over the leaves `Var 1..3`,
//! `BIG`, one element name and one predicate variable. Every binder law and
//! every decider is checked on the whole enumeration against independent
//! reference implementations.

use std::collections::BTreeSet;
use std::fmt;

use crate::binder::lift;
use crate::term::{Expr, Index, Pred, Term};

mod laws;
mod props;
pub mod reference;

pub use laws::{binder_laws, decider_checks};
pub use props::{prop_sweep, propositional_skeletons, truth_vector, PropReport};

/// Largest dangling index among the enumerated leaves.
pub const MAX_LEAF_INDEX: u32 = 3;
/// Indexes quantified over by the laws: every leaf index and one fresh one.
pub const LAW_INDEXES: [u32; 4] = [1, 2, 3, 4];
pub const ELEMENT: &str = "j";
pub const PRED_VAR: &str = "k";

/// How enumeration work is scheduled. Results are identical either way.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Execution {
    Sequential,
    /// Data-parallel over the enumeration. Falls back to sequential when
    /// the crate is built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Maps `f` over `items` in order.
    pub fn map<T: Sync, R: Send>(self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// The lifting function under test; a parameter so a mutant can be
/// substituted.
pub type LiftFn = fn(&Term, u32) -> Term;

pub fn correct_lift(t: &Term, cutoff: u32) -> Term {
    lift(t, cutoff)
}

/// Off-by-one cutoff mutant of [`lift`], the negative control.
pub fn broken_lift(t: &Term, cutoff: u32) -> Term {
    lift(t, cutoff + 1)
}

/// Every term of depth at most `depth`, per sort, shallowest first.
#[derive(Clone, Debug)]
pub struct Universe {
    pub depth: usize,
    pub exprs: Vec<Expr>,
    pub preds: Vec<Pred>,
}

impl Universe {
    #[allow(clippy::needless_range_loop)]
    pub fn new(depth: usize) -> Universe {
        let mut exprs: Vec<Expr> = (1..=MAX_LEAF_INDEX).map(Expr::var).collect();
        exprs.push(Expr::Big);
        exprs.push(Expr::elem(ELEMENT));
        let mut preds = vec![Pred::var(PRED_VAR)];
        // `exprs[..e_prev]` and `preds[..p_prev]` are the terms below the
        // current depth; each new term uses at least one of depth `d`.
        let (mut e_prev, mut p_prev) = (0, 0);
        for _ in 1..depth {
            let (e_len, p_len) = (exprs.len(), preds.len());
            let new_pair = |i: usize, j: usize, prev: usize| i >= prev || j >= prev;
            let mut next_e = Vec::new();
            for i in 0..e_len {
                if i >= e_prev {
                    next_e.push(Expr::choice(exprs[i].clone()));
                    next_e.push(Expr::pow(exprs[i].clone()));
                }
                for j in 0..e_len {
                    if new_pair(i, j, e_prev) {
                        next_e.push(Expr::maps_to(exprs[i].clone(), exprs[j].clone()));
                        next_e.push(Expr::prod(exprs[i].clone(), exprs[j].clone()));
                    }
                }
                for j in 0..p_len {
                    if i >= e_prev || j >= p_prev {
                        next_e.push(Expr::cmp(exprs[i].clone(), preds[j].clone()));
                    }
                }
            }
            let mut next_p = Vec::new();
            for i in 0..p_len {
                if i >= p_prev {
                    next_p.push(Pred::not(preds[i].clone()));
                    next_p.push(Pred::forall(preds[i].clone()));
                }
                for j in 0..p_len {
                    if new_pair(i, j, p_prev) {
                        next_p.push(Pred::and(preds[i].clone(), preds[j].clone()));
                        next_p.push(Pred::implies(preds[i].clone(), preds[j].clone()));
                    }
                }
            }
            for i in 0..e_len {
                for j in 0..e_len {
                    if new_pair(i, j, e_prev) {
                        next_p.push(Pred::eq(exprs[i].clone(), exprs[j].clone()));
                        next_p.push(Pred::member(exprs[i].clone(), exprs[j].clone()));
                    }
                }
            }
            e_prev = e_len;
            p_prev = p_len;
            exprs.extend(next_e);
            preds.extend(next_p);
        }
        Universe { depth, exprs, preds }
    }

    pub fn terms(&self) -> Vec<Term> {
        let preds = self.preds.iter().cloned().map(Term::Pred);
        self.exprs.iter().cloned().map(Term::Expr).chain(preds).collect()
    }

    pub fn len(&self) -> usize {
        self.exprs.len() + self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Outcome of one law or decider check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub name: &'static str,
    pub cases: u64,
    /// First counterexample in enumeration order.
    pub failure: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "ok    {:<24} {} cases", self.name, self.cases),
            Some(c) => write!(f, "FAIL  {:<24} counterexample: {c}", self.name),
        }
    }
}

/// Checks `f` on every item. `f` returns the number of cases it covered, or
/// a counterexample.
pub(crate) fn check_all<T: Sync>(
    name: &'static str,
    exec: Execution,
    items: &[T],
    f: impl Fn(&T) -> Result<u64, String> + Sync + Send,
) -> LawReport {
    let mut cases = 0;
    for r in exec.map(items, f) {
        match r {
            Ok(n) => cases += n,
            Err(c) => return LawReport { name, cases, failure: Some(c) },
        }
    }
    LawReport { name, cases, failure: None }
}

pub(crate) fn indexes() -> impl Iterator<Item = Index> {
    LAW_INDEXES.into_iter().map(Index::of)
}

pub(crate) fn index_set(xs: impl IntoIterator<Item = u32>) -> BTreeSet<Index> {
    xs.into_iter().map(Index::of).collect()
}

/// Full self-test configuration.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub depth: usize,
    pub prop_depth: usize,
    pub execution: Execution,
    pub lift: LiftFn,
}

impl Config {
    pub fn new(depth: usize) -> Config {
        Config { depth, prop_depth: depth, execution: Execution::default(), lift: correct_lift }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub terms: usize,
    pub laws: Vec<LawReport>,
    pub prop: PropReport,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawReport::passed) && self.prop.passed()
    }

    pub fn first_failure(&self) -> Option<String> {
        self.laws
            .iter()
            .find_map(|l| l.failure.as_ref().map(|c| format!("{}: {c}", l.name)))
            .or_else(|| self.prop.failure.as_ref().map(|c| format!("prop_decide: {c}")))
    }
}

pub fn run(config: &Config) -> Report {
    let universe = Universe::new(config.depth);
    let mut laws = binder_laws(&universe, config.execution, config.lift);
    laws.extend(decider_checks(&universe, config.execution));
    let prop = prop_sweep(config.prop_depth, config.execution);
    Report { terms: universe.len(), laws, prop }
}
