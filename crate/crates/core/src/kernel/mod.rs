//! The trusted core.
//!
//! A [`Theorem`] can only be obtained from [`apply_rule`], from a derived
//! rule in [`derived`] (which itself only calls `apply_rule`), or from the
//! congruence rules in [`congruence`]. Every theorem carries the
//! [`ProofTree`] that produced it, and [`check`] replays such a tree from
//! scratch.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::binder::HypList;
use crate::term::{Pred, Sort};

pub mod congruence;
pub mod derived;
pub mod rules;

pub use congruence::{congruence, Congruence, CongruenceKind};
pub use derived::{derive, Derived};
pub use rules::{apply_rule, Rule, RuleTag};

/// `hyps ⊩ goal`: a claim, not yet proved.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sequent {
    pub hyps: HypList,
    pub goal: Pred,
}

impl Sequent {
    pub fn new(hyps: HypList, goal: Pred) -> Self {
        Sequent { hyps, goal }
    }

    pub fn with_hyp(&self, p: Pred) -> HypList {
        let mut hyps = self.hyps.clone();
        hyps.push(p);
        hyps
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, h) in self.hyps.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, " |- {}", self.goal)
    }
}

/// A kernel-certified sequent.
#[derive(Clone, Debug)]
pub struct Theorem {
    sequent: Sequent,
    proof: Arc<ProofTree>,
}

impl Theorem {
    pub fn sequent(&self) -> &Sequent {
        &self.sequent
    }

    pub fn hyps(&self) -> &[Pred] {
        &self.sequent.hyps
    }

    pub fn goal(&self) -> &Pred {
        &self.sequent.goal
    }

    pub fn proof(&self) -> &ProofTree {
        &self.proof
    }

    pub fn proof_arc(&self) -> Arc<ProofTree> {
        self.proof.clone()
    }

    pub fn into_sequent(self) -> Sequent {
        self.sequent
    }

    fn new(sequent: Sequent, node: Node, premises: &[Theorem]) -> Theorem {
        Theorem {
            sequent,
            proof: Arc::new(ProofTree {
                node,
                premises: premises.iter().map(|t| t.proof.clone()).collect(),
            }),
        }
    }
}

/// One inference step of a derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Node {
    Rule(Rule),
    Derived(Derived),
    Congruence(Congruence),
}

impl Node {
    pub fn name(&self) -> &'static str {
        match self {
            Node::Rule(r) => r.tag().name(),
            Node::Derived(d) => d.name(),
            Node::Congruence(c) => c.kind.name(),
        }
    }
}

/// Serializable derivation: a step and the derivations of its premises.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofTree {
    pub node: Node,
    pub premises: Vec<Arc<ProofTree>>,
}

impl ProofTree {
    pub fn leaf(node: Node) -> Self {
        ProofTree { node, premises: Vec::new() }
    }

    pub fn new(node: Node, premises: Vec<ProofTree>) -> Self {
        ProofTree {
            node,
            premises: premises.into_iter().map(Arc::new).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{rule}: premises do not match: {reason}")]
    PremiseMismatch { rule: &'static str, reason: String },
    #[error("{rule}: side condition violated: {condition}")]
    SideConditionViolated { rule: &'static str, condition: String },
    #[error("{rule}: expected a {expected}, found a {found}")]
    SortError { rule: &'static str, expected: Sort, found: Sort },
}

pub(crate) fn mismatch(rule: &'static str, reason: impl Into<String>) -> KernelError {
    KernelError::PremiseMismatch { rule, reason: reason.into() }
}

pub(crate) fn violated(rule: &'static str, condition: impl Into<String>) -> KernelError {
    KernelError::SideConditionViolated { rule, condition: condition.into() }
}

pub(crate) fn expect_premises(
    rule: &'static str,
    premises: &[Theorem],
    count: usize,
) -> Result<(), KernelError> {
    if premises.len() == count {
        Ok(())
    } else {
        Err(mismatch(
            rule,
            format!("expected {count} premise(s), got {}", premises.len()),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid step {} at node {path:?}: {source}", .node)]
pub struct CheckError {
    /// Premise positions from the root down to the failing node.
    pub path: Vec<usize>,
    pub node: &'static str,
    pub source: KernelError,
}

/// Applies any kind of step to already certified premises.
pub fn apply_node(node: &Node, premises: &[Theorem]) -> Result<Theorem, KernelError> {
    match node {
        Node::Rule(r) => apply_rule(r, premises),
        Node::Derived(d) => derive(d, premises),
        Node::Congruence(c) => congruence(c, premises),
    }
}

/// Replays a derivation bottom-up through the kernel.
pub fn check(tree: &ProofTree) -> Result<Theorem, CheckError> {
    let mut path = Vec::new();
    check_at(tree, &mut path)
}

fn check_at(tree: &ProofTree, path: &mut Vec<usize>) -> Result<Theorem, CheckError> {
    let mut premises = Vec::with_capacity(tree.premises.len());
    for (n, sub) in tree.premises.iter().enumerate() {
        path.push(n);
        premises.push(check_at(sub, path)?);
        path.pop();
    }
    apply_node(&tree.node, &premises).map_err(|source| CheckError {
        path: path.clone(),
        node: tree.node.name(),
        source,
    })
}

/// Height of a derivation; a single step has depth 1.
pub fn proof_depth(tree: &ProofTree) -> usize {
    1 + tree.premises.iter().map(|p| proof_depth(p)).max().unwrap_or(0)
}

/// Number of steps in a derivation.
pub fn proof_size(tree: &ProofTree) -> usize {
    1 + tree.premises.iter().map(|p| proof_size(p)).sum::<usize>()
}
