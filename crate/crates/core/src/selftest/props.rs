use std::fmt;

use crate::kernel::{check, Sequent};
use crate::tactics::prop_decide;
use crate::term::{pred_depth, Pred};

use super::Execution;

const ATOMS: [&str; 3] = ["a", "b", "c"];
/// Truth vectors of the three atoms over the eight rows.
const ATOM_ROWS: [u8; 3] = [0b1010_1010, 0b1100_1100, 0b1111_0000];

/// Every formula of depth at most `depth` built from three predicate
/// variables with `&`, `=>` and `not`, shallowest first.
pub fn propositional_skeletons(depth: usize) -> Vec<Pred> {
    let mut all: Vec<Pred> = ATOMS.iter().map(|a| Pred::var(*a)).collect();
    let mut prev = 0;
    for _ in 1..depth {
        let len = all.len();
        let mut next = Vec::new();
        grow(&all, prev, len, |p| next.push(p));
        prev = len;
        all.extend(next);
    }
    all
}

/// Calls `emit` on every formula one level above `base`, where
/// `base[fresh..]` are the formulas of maximal depth.
fn grow(base: &[Pred], fresh: usize, len: usize, mut emit: impl FnMut(Pred)) {
    for i in 0..len {
        grow_from(base, fresh, i, &mut emit);
    }
}

fn grow_from(base: &[Pred], fresh: usize, i: usize, emit: &mut impl FnMut(Pred)) {
    if i >= fresh {
        emit(Pred::not(base[i].clone()));
    }
    for j in 0..base.len() {
        if i >= fresh || j >= fresh {
            emit(Pred::and(base[i].clone(), base[j].clone()));
            emit(Pred::implies(base[i].clone(), base[j].clone()));
        }
    }
}

/// Truth table of a skeleton as an 8-bit row vector: an oracle independent
/// of the decision procedure.
pub fn truth_vector(p: &Pred) -> u8 {
    match p {
        Pred::Var(k) => {
            let i = ATOMS.iter().position(|a| *a == k.as_str()).expect("skeleton atom");
            ATOM_ROWS[i]
        }
        Pred::Not(a) => !truth_vector(a),
        Pred::And(a, b) => truth_vector(a) & truth_vector(b),
        Pred::Implies(a, b) => !truth_vector(a) | truth_vector(b),
        other => panic!("not a propositional skeleton: {other}"),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropReport {
    pub depth: usize,
    /// Sequents decided.
    pub sequents: u64,
    /// Sequents found valid, each with a checked kernel proof.
    pub valid: u64,
    pub failure: Option<String>,
}

impl PropReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for PropReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "ok    {:<24} {} sequents, {} valid and kernel-checked",
                "prop_decide", self.sequents, self.valid
            ),
            Some(c) => write!(f, "FAIL  {:<24} counterexample: {c}", "prop_decide"),
        }
    }
}

/// Decides one sequent and compares with the oracle. Returns whether it is
/// valid.
fn decide(s: &Sequent, oracle: bool) -> Result<bool, String> {
    let outcome = prop_decide(s).map_err(|e| format!("{s}: {e}"))?;
    let proved = outcome.subgoals().is_empty();
    if proved != oracle {
        return Err(format!("{s}: decided {proved}, truth table says {oracle}"));
    }
    if proved {
        let thm = outcome.justify(Vec::new()).map_err(|e| format!("{s}: {e}"))?;
        let checked = check(thm.proof()).map_err(|e| format!("{s}: {e}"))?;
        if checked.sequent() != s {
            return Err(format!("{s}: checked proof concludes {}", checked.sequent()));
        }
    }
    Ok(proved)
}

#[derive(Default)]
struct Tally {
    sequents: u64,
    valid: u64,
    failure: Option<String>,
}

impl Tally {
    fn add(&mut self, s: &Sequent, oracle: bool) {
        if self.failure.is_some() {
            return;
        }
        self.sequents += 1;
        match decide(s, oracle) {
            Ok(v) => self.valid += v as u64,
            Err(e) => self.failure = Some(e),
        }
    }

    fn goal(&mut self, p: Pred) {
        let oracle = truth_vector(&p) == u8::MAX;
        self.add(&Sequent::new(vec![], p), oracle);
    }
}

/// Decides every skeleton of depth at most `depth` as a goal, and every
/// entailment `h1, h2 |- g` over skeletons of depth at most two.
pub fn prop_sweep(depth: usize, exec: Execution) -> PropReport {
    let depth = depth.max(1);
    let below = propositional_skeletons(depth.saturating_sub(1).max(1));
    let top_level = depth >= 2;
    let fresh = below.iter().position(|p| pred_depth(p) + 1 == depth).unwrap_or(below.len());
    // Unit 0 covers the formulas below the top level (all of them at depth
    // one); unit i + 1 the top-level formulas whose first operand is
    // `below[i]`.
    let units: Vec<usize> = (0..=if top_level { below.len() } else { 0 }).collect();
    let tallies = exec.map(&units, |&unit| {
        let mut t = Tally::default();
        if unit == 0 {
            for p in &below {
                t.goal(p.clone());
            }
        } else {
            grow_from(&below, fresh, unit - 1, &mut |p| t.goal(p));
        }
        t
    });

    let small = propositional_skeletons(depth.min(2));
    let entail = exec.map(&small, |h1| {
        let mut t = Tally::default();
        for h2 in &small {
            for g in &small {
                let oracle = truth_vector(h1) & truth_vector(h2) & !truth_vector(g) == 0;
                t.add(&Sequent::new(vec![h1.clone(), h2.clone()], g.clone()), oracle);
            }
        }
        t
    });

    let mut report = PropReport { depth, ..PropReport::default() };
    for t in tallies.into_iter().chain(entail) {
        report.sequents += t.sequents;
        report.valid += t.valid;
        if report.failure.is_none() {
            report.failure = t.failure;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `D(d+1) = 3 + D(d) + 2·D(d)²`
    fn count(depth: usize) -> usize {
        (1..depth).fold(3, |d, _| 3 + d + 2 * d * d)
    }

    #[test]
    fn skeleton_counts() {
        for d in 1..=3 {
            assert_eq!(propositional_skeletons(d).len(), count(d));
        }
        assert_eq!(count(4), 2_781_264);
    }

    #[test]
    fn truth_vectors() {
        let (a, b) = (Pred::var("a"), Pred::var("b"));
        assert_eq!(truth_vector(&Pred::implies(a.clone(), a.clone())), u8::MAX);
        assert_eq!(truth_vector(&Pred::or(a.clone(), Pred::not(a.clone()))), u8::MAX);
        assert_ne!(truth_vector(&Pred::implies(a, b)), u8::MAX);
    }

    #[test]
    fn sweep_at_depth_three() {
        let r = prop_sweep(3, Execution::default());
        assert!(r.passed(), "{r}");
        // 1179 goals plus 24³ entailments.
        assert_eq!(r.sequents, 1179 + 24 * 24 * 24);
    }

    #[test]
    fn sweep_counts_every_depth_four_formula() {
        let below = propositional_skeletons(3);
        let fresh = below.iter().position(|p| pred_depth(p) == 3).unwrap();
        let mut n = below.len();
        for i in 0..below.len() {
            grow_from(&below, fresh, i, &mut |_| n += 1);
        }
        assert_eq!(n, count(4));
    }
}
