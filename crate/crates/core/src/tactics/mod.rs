//! Untrusted proof search.
//!
//! A tactic maps a goal sequent to subgoals plus a justification that
//! rebuilds a kernel [`Theorem`] of the goal from theorems of the subgoals.
//! Tactics never construct theorems themselves; every justification goes
//! through [`apply_rule`], [`derive`] or [`congruence`].

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::binder::{
    fresh_index_preds, inst_cmp, inst_forall, member, not_free, not_free_hyps, open,
    subst, HypList,
};
use crate::kernel::{
    apply_rule, derive, Derived, KernelError, Rule, RuleTag, Sequent, Theorem,
};
use crate::term::{Expr, Index, Pred};

mod prop;
mod rewrite;
pub mod script;

pub use prop::{atoms, prop_decide, prop_prove, tautology};
pub use rewrite::{abstract_expr, congr, rewrite_equiv, rewrite_outcome, Mode, Occurrence};
pub use script::{run_script, ProofState, Tactical};

#[derive(Debug, Clone, Error)]
pub enum TacticError {
    #[error("{tactic}: {reason}")]
    GoalShapeMismatch { tactic: &'static str, reason: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("justification expected {expected}, received {found}")]
    JustificationMismatch { expected: String, found: String },
    #[error("no occurrence of {0} in the goal")]
    OccurrenceNotFound(String),
    #[error("occurrence of {0} is under a binder that captures it; use grafting")]
    CaptureModeMismatch(String),
    #[error("{tactic}: {reason}")]
    BadArgument { tactic: String, reason: String },
    #[error("unknown tactic `{0}`")]
    UnknownTactic(String),
    #[error("explicit failure")]
    Fail,
    #[error("script failed at line {step} with {} open goal(s){}", remaining.len(),
        reason.as_ref().map(|r| format!(": {r}")).unwrap_or_default())]
    ScriptFailed {
        step: usize,
        remaining: Vec<Sequent>,
        reason: Option<Box<TacticError>>,
    },
}

pub(crate) fn shape(tactic: &'static str, reason: impl Into<String>) -> TacticError {
    TacticError::GoalShapeMismatch { tactic, reason: reason.into() }
}

type JustifyFn = dyn Fn(Vec<Theorem>) -> Result<Theorem, TacticError> + Send + Sync;

/// Subgoals of one tactic application and the way back to the goal.
#[derive(Clone)]
pub struct Outcome {
    goal: Sequent,
    subgoals: Vec<Sequent>,
    justify: Arc<JustifyFn>,
}

impl fmt::Debug for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Outcome")
            .field("goal", &self.goal)
            .field("subgoals", &self.subgoals)
            .finish_non_exhaustive()
    }
}

impl Outcome {
    pub fn new(
        goal: &Sequent,
        subgoals: Vec<Sequent>,
        justify: impl Fn(Vec<Theorem>) -> Result<Theorem, TacticError> + Send + Sync + 'static,
    ) -> Outcome {
        Outcome { goal: goal.clone(), subgoals, justify: Arc::new(justify) }
    }

    /// The goal is already proved.
    pub fn proved(goal: &Sequent, theorem: Theorem) -> Outcome {
        Outcome::new(goal, Vec::new(), move |_| Ok(theorem.clone()))
    }

    /// The goal is returned unchanged.
    pub fn identity(goal: &Sequent) -> Outcome {
        Outcome::new(goal, vec![goal.clone()], |mut ts| Ok(ts.remove(0)))
    }

    pub fn goal(&self) -> &Sequent {
        &self.goal
    }

    pub fn subgoals(&self) -> &[Sequent] {
        &self.subgoals
    }

    pub fn is_identity(&self) -> bool {
        self.subgoals.len() == 1 && self.subgoals[0] == self.goal
    }

    /// Rebuilds a theorem of the goal. Fails unless `theorems` prove the
    /// subgoals one for one.
    pub fn justify(&self, theorems: Vec<Theorem>) -> Result<Theorem, TacticError> {
        if theorems.len() != self.subgoals.len() {
            return Err(TacticError::JustificationMismatch {
                expected: format!("{} theorem(s)", self.subgoals.len()),
                found: format!("{} theorem(s)", theorems.len()),
            });
        }
        for (t, s) in theorems.iter().zip(&self.subgoals) {
            if t.sequent() != s {
                return Err(TacticError::JustificationMismatch {
                    expected: s.to_string(),
                    found: t.sequent().to_string(),
                });
            }
        }
        let t = (self.justify)(theorems)?;
        if t.sequent() != &self.goal {
            return Err(TacticError::JustificationMismatch {
                expected: self.goal.to_string(),
                found: t.sequent().to_string(),
            });
        }
        Ok(t)
    }

    /// Replaces each subgoal by the outcome proving it.
    pub fn then(self, inner: Vec<Outcome>) -> Outcome {
        debug_assert_eq!(inner.len(), self.subgoals.len());
        let subgoals = inner.iter().flat_map(|o| o.subgoals.iter().cloned()).collect();
        let goal = self.goal.clone();
        Outcome::new(&goal, subgoals, move |theorems| {
            let mut rest = theorems.into_iter();
            let mut mids = Vec::with_capacity(inner.len());
            for o in &inner {
                let chunk: Vec<Theorem> = rest.by_ref().take(o.subgoals.len()).collect();
                mids.push(o.justify(chunk)?);
            }
            self.justify(mids)
        })
    }
}

pub trait Tactic {
    fn name(&self) -> &'static str;
    fn apply(&self, s: &Sequent) -> Result<Outcome, TacticError>;
}

/// Tactics with their arguments already in internal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Id,
    Fail,
    /// Closes a goal found among the hypotheses; identity otherwise.
    Hyp,
    /// Splits a conjunction; identity otherwise.
    AndIntro,
    ImpIntro,
    /// `g, p ⊢ q` from `g ⊢ p ⇒ q`.
    Revert,
    /// Drops the hypothesis at a 1-based position.
    Clear(usize),
    /// `g ⊢ p` from `g ⊢ p ∧ q`, given `q`.
    AndElimL(Pred),
    /// `g ⊢ q` from `g ⊢ p ∧ q`, given `p`.
    AndElimR(Pred),
    /// `g ⊢ ¬p2` from `g, p2 ⊢ p1` and `g, p2 ⊢ ¬p1`, given `p1`.
    NotPos(Pred),
    /// `g ⊢ p2` from `g, ¬p2 ⊢ p1` and `g, ¬p2 ⊢ ¬p1`, given `p1`.
    NotNeg(Pred),
    EqRefl,
    /// Opens a universal goal at a fresh (or given) index.
    ForallIntro(Option<Index>),
    ForallIntroAlpha,
    ForallIntroInternal,
    /// `g ⊢ <i := e> p` from `g ⊢ ∀(i·p)`; `quantified` is the universal.
    ForallElim { quantified: Pred, witness: Expr },
    /// Adds an instance of the universal hypothesis at a 1-based position.
    Specialize { hyp: usize, witness: Expr },
    ExistsIntro(Expr),
    /// Replaces an existential hypothesis by its body at a fresh (or given) index.
    ExistsElim { hyp: usize, index: Option<Index> },
    /// Rewrites occurrences of `to` in the goal into `from`, leaving `from = to`.
    Leibniz { from: Expr, to: Expr },
    ExtIntro,
    PowIntro,
    CmpIntro,
    ProdIntro,
    Choice,
    /// Adds the unfolding of a power set, product or comprehension membership hypothesis.
    Unfold(usize),
    BigElem,
    BigDistinct,
    /// Without arguments, closes `e1 = e3` from a hypothesis `e1 ↦ x = e3 ↦ y`.
    PairInjL(Option<(Expr, Expr)>),
    PairInjR(Option<(Expr, Expr)>),
    Cut(Pred),
    Prop,
    Congr,
    CongrGraft,
    /// Rewrites with the equivalence hypothesis at a 1-based position.
    Rewrite { hyp: usize, occurrence: Occurrence },
    /// Rewrites `from` into `to`, leaving the equivalence as a subgoal.
    RewriteWith { from: Pred, to: Pred, occurrence: Occurrence, mode: Mode },
    /// Removes a double negation, proving the equivalence propositionally.
    Dneg(Occurrence),
}

fn kernel_hyp(hyps: HypList, goal: Pred) -> Result<Theorem, KernelError> {
    apply_rule(&Rule::Hyp { hyps, goal }, &[])
}

fn weaken(t: Theorem, hyps: HypList) -> Result<Theorem, KernelError> {
    apply_rule(&Rule::Weaken { hyps }, &[t])
}

fn cut(lemma: Theorem, body: Theorem) -> Result<Theorem, KernelError> {
    derive(&Derived::Cut, &[lemma, body])
}

fn single(mut ts: Vec<Theorem>) -> Theorem {
    ts.remove(0)
}

fn pair(ts: Vec<Theorem>) -> (Theorem, Theorem) {
    let mut it = ts.into_iter();
    (it.next().unwrap(), it.next().unwrap())
}

fn hyp_at(tactic: &'static str, s: &Sequent, n: usize) -> Result<Pred, TacticError> {
    if n == 0 || n > s.hyps.len() {
        return Err(shape(tactic, format!("no hypothesis {n} (there are {})", s.hyps.len())));
    }
    Ok(s.hyps[n - 1].clone())
}

/// A fresh index for the whole sequent and any extra predicates.
fn fresh_for(s: &Sequent, extra: &[&Pred]) -> Index {
    fresh_index_preds(s.hyps.iter().chain(std::iter::once(&s.goal)).chain(extra.iter().copied()))
}

fn check_fresh(tactic: &'static str, s: &Sequent, i: Index) -> Result<(), TacticError> {
    if !not_free_hyps(i, &s.hyps) || !not_free(i, &s.goal) {
        return Err(shape(tactic, format!("index {i} is not fresh")));
    }
    Ok(())
}

/// `g ⊢ u` from a hypothesis `h ∈ g` and a theorem `⊢ h ⇔ u` (possibly
/// under fewer hypotheses).
fn forward_iff(g: &HypList, h: &Pred, iff: Theorem) -> Result<Theorem, KernelError> {
    let iff = if iff.hyps() == g.as_slice() { iff } else { weaken(iff, g.clone())? };
    derive(&Derived::IffMp, &[iff, kernel_hyp(g.clone(), h.clone())?])
}

impl Builtin {
    /// Arguments-free backward tactic for a rule, where one exists.
    pub fn backward(tag: RuleTag) -> Option<Builtin> {
        Some(match tag {
            RuleTag::Hyp => Builtin::Hyp,
            RuleTag::ImpIntro => Builtin::ImpIntro,
            RuleTag::ImpElim => Builtin::Revert,
            RuleTag::AndIntro => Builtin::AndIntro,
            RuleTag::EqRefl => Builtin::EqRefl,
            RuleTag::ForallIntro => Builtin::ForallIntro(None),
            RuleTag::ExtIntro => Builtin::ExtIntro,
            RuleTag::PowAxiom => Builtin::PowIntro,
            RuleTag::CmpAxiom => Builtin::CmpIntro,
            RuleTag::ChoiceAxiom => Builtin::Choice,
            RuleTag::ProdChar => Builtin::ProdIntro,
            RuleTag::BigElem => Builtin::BigElem,
            RuleTag::BigDistinct => Builtin::BigDistinct,
            RuleTag::PairInjL => Builtin::PairInjL(None),
            RuleTag::PairInjR => Builtin::PairInjR(None),
            _ => return None,
        })
    }
}

impl Tactic for Builtin {
    fn name(&self) -> &'static str {
        match self {
            Builtin::Id => "id",
            Builtin::Fail => "fail",
            Builtin::Hyp => "hyp",
            Builtin::AndIntro => "and_intro",
            Builtin::ImpIntro => "imp_intro",
            Builtin::Revert => "revert",
            Builtin::Clear(_) => "clear",
            Builtin::AndElimL(_) => "and_elim_l",
            Builtin::AndElimR(_) => "and_elim_r",
            Builtin::NotPos(_) => "not_intro",
            Builtin::NotNeg(_) => "by_contra",
            Builtin::EqRefl => "eq_refl",
            Builtin::ForallIntro(_) => "forall_intro",
            Builtin::ForallIntroAlpha => "forall_intro_alpha",
            Builtin::ForallIntroInternal => "forall_intro_internal",
            Builtin::ForallElim { .. } => "forall_elim",
            Builtin::Specialize { .. } => "specialize",
            Builtin::ExistsIntro(_) => "exists_intro",
            Builtin::ExistsElim { .. } => "exists_elim",
            Builtin::Leibniz { .. } => "leibniz",
            Builtin::ExtIntro => "ext_intro",
            Builtin::PowIntro => "pow_intro",
            Builtin::CmpIntro => "cmp_intro",
            Builtin::ProdIntro => "prod_intro",
            Builtin::Choice => "choice",
            Builtin::Unfold(_) => "unfold",
            Builtin::BigElem => "big_elem",
            Builtin::BigDistinct => "big_distinct",
            Builtin::PairInjL(_) => "pair_inj_l",
            Builtin::PairInjR(_) => "pair_inj_r",
            Builtin::Cut(_) => "cut",
            Builtin::Prop => "prop",
            Builtin::Congr => "congr",
            Builtin::CongrGraft => "congr_graft",
            Builtin::Rewrite { .. } => "rewrite",
            Builtin::RewriteWith { mode: Mode::Subst, .. } => "rewrite_with",
            Builtin::RewriteWith { mode: Mode::Graft, .. } => "graft_with",
            Builtin::Dneg(_) => "dneg",
        }
    }

    fn apply(&self, s: &Sequent) -> Result<Outcome, TacticError> {
        let name = self.name();
        let g = s.hyps.clone();
        match self {
            Builtin::Id => Ok(Outcome::identity(s)),
            Builtin::Fail => Err(TacticError::Fail),
            Builtin::Hyp if member(&s.goal, &s.hyps) => Ok(t_hyp(s)),
            Builtin::Hyp => Err(shape(name, "goal is not a hypothesis")),
            Builtin::AndIntro => match &s.goal {
                Pred::And(..) => Ok(t_and_intro(s)),
                _ => Err(shape(name, "goal is not a conjunction")),
            },
            Builtin::ImpIntro => {
                let Pred::Implies(p, q) = &s.goal else {
                    return Err(shape(name, "goal is not an implication"));
                };
                let sub = Sequent::new(s.with_hyp((**p).clone()), (**q).clone());
                Ok(Outcome::new(s, vec![sub], |ts| {
                    Ok(apply_rule(&Rule::ImpIntro, &ts)?)
                }))
            }
            Builtin::Revert => {
                let Some((last, rest)) = s.hyps.split_last() else {
                    return Err(shape(name, "no hypothesis to revert"));
                };
                let sub = Sequent::new(rest.to_vec(), Pred::implies(last.clone(), s.goal.clone()));
                Ok(Outcome::new(s, vec![sub], |ts| Ok(apply_rule(&Rule::ImpElim, &ts)?)))
            }
            Builtin::Clear(n) => {
                hyp_at(name, s, *n)?;
                let mut hyps = g.clone();
                hyps.remove(n - 1);
                let sub = Sequent::new(hyps, s.goal.clone());
                Ok(Outcome::new(s, vec![sub], move |ts| Ok(weaken(single(ts), g.clone())?)))
            }
            Builtin::AndElimL(q) => {
                let sub = Sequent::new(g, Pred::and(s.goal.clone(), q.clone()));
                Ok(Outcome::new(s, vec![sub], |ts| Ok(apply_rule(&Rule::AndElimL, &ts)?)))
            }
            Builtin::AndElimR(p) => {
                let sub = Sequent::new(g, Pred::and(p.clone(), s.goal.clone()));
                Ok(Outcome::new(s, vec![sub], |ts| Ok(apply_rule(&Rule::AndElimR, &ts)?)))
            }
            Builtin::NotPos(p1) => {
                let Pred::Not(p2) = &s.goal else {
                    return Err(shape(name, "goal is not a negation"));
                };
                let hyps = s.with_hyp((**p2).clone());
                let subs = vec![
                    Sequent::new(hyps.clone(), p1.clone()),
                    Sequent::new(hyps, Pred::not(p1.clone())),
                ];
                Ok(Outcome::new(s, subs, |ts| Ok(apply_rule(&Rule::NotPos, &ts)?)))
            }
            Builtin::NotNeg(p1) => {
                let hyps = s.with_hyp(Pred::not(s.goal.clone()));
                let subs = vec![
                    Sequent::new(hyps.clone(), p1.clone()),
                    Sequent::new(hyps, Pred::not(p1.clone())),
                ];
                Ok(Outcome::new(s, subs, |ts| Ok(apply_rule(&Rule::NotNeg, &ts)?)))
            }
            Builtin::EqRefl => match &s.goal {
                Pred::Eq(a, b) if a == b => {
                    let t = apply_rule(&Rule::EqRefl { hyps: g, expr: (**a).clone() }, &[])?;
                    Ok(Outcome::proved(s, t))
                }
                _ => Err(shape(name, "goal is not a reflexive equality")),
            },
            Builtin::ForallIntro(index) => {
                let Pred::Forall(body) = &s.goal else {
                    return Err(shape(name, "goal is not a universal quantification"));
                };
                let i = index.unwrap_or_else(|| fresh_for(s, &[]));
                check_fresh(name, s, i)?;
                let sub = Sequent::new(g, open(&Expr::Var(i), &**body));
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    Ok(apply_rule(&Rule::ForallIntro { index: i }, &ts)?)
                }))
            }
            Builtin::ForallIntroAlpha => {
                let Pred::Forall(body) = &s.goal else {
                    return Err(shape(name, "goal is not a universal quantification"));
                };
                let index = fresh_for(s, &[]);
                let fresh = index.succ();
                let p = open(&Expr::Var(index), &**body);
                let sub = Sequent::new(g, subst(index, &Expr::Var(fresh), &p));
                let d = Derived::AlphaForallIntro { fresh, index, body: p };
                Ok(Outcome::new(s, vec![sub], move |ts| Ok(derive(&d, &ts)?)))
            }
            Builtin::ForallIntroInternal => {
                let Pred::Forall(body) = &s.goal else {
                    return Err(shape(name, "goal is not a universal quantification"));
                };
                let index = fresh_for(s, &[]);
                let sub = Sequent::new(g, open(&Expr::Var(index), &**body));
                let d = Derived::InternalForallIntro { index, body: (**body).clone() };
                Ok(Outcome::new(s, vec![sub], move |ts| Ok(derive(&d, &ts)?)))
            }
            Builtin::ForallElim { quantified, witness } => {
                let inst = inst_forall(witness, quantified)
                    .map_err(|e| shape(name, e.to_string()))?;
                if inst != s.goal {
                    return Err(shape(name, "instance does not match the goal"));
                }
                let sub = Sequent::new(g, quantified.clone());
                let rule = Rule::ForallElim { witness: witness.clone() };
                Ok(Outcome::new(s, vec![sub], move |ts| Ok(apply_rule(&rule, &ts)?)))
            }
            Builtin::Specialize { hyp, witness } => {
                let h = hyp_at(name, s, *hyp)?;
                let inst = inst_forall(witness, &h).map_err(|e| shape(name, e.to_string()))?;
                let sub = Sequent::new(s.with_hyp(inst), s.goal.clone());
                let witness = witness.clone();
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    let all = kernel_hyp(g.clone(), h.clone())?;
                    let lemma = apply_rule(&Rule::ForallElim { witness: witness.clone() }, &[all])?;
                    Ok(cut(lemma, single(ts))?)
                }))
            }
            Builtin::ExistsIntro(witness) => {
                let Some(body) = s.goal.as_exists() else {
                    return Err(shape(name, "goal is not an existential"));
                };
                let sub = Sequent::new(g.clone(), open(witness, body));
                let Pred::Not(all) = &s.goal else { unreachable!() };
                let all = (**all).clone();
                let witness = witness.clone();
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    let delta = {
                        let mut d = g.clone();
                        d.push(all.clone());
                        d
                    };
                    let yes = weaken(single(ts), delta.clone())?;
                    let all_thm = kernel_hyp(delta, all.clone())?;
                    let no = apply_rule(&Rule::ForallElim { witness: witness.clone() }, &[all_thm])?;
                    Ok(apply_rule(&Rule::NotPos, &[yes, no])?)
                }))
            }
            Builtin::ExistsElim { hyp, index } => {
                let h = hyp_at(name, s, *hyp)?;
                let Some(body) = h.as_exists() else {
                    return Err(shape(name, format!("hypothesis {hyp} is not an existential")));
                };
                let i = index.unwrap_or_else(|| fresh_for(s, &[]));
                check_fresh(name, s, i)?;
                let opened = open(&Expr::Var(i), body);
                let sub = Sequent::new(s.with_hyp(opened.clone()), s.goal.clone());
                let goal = s.goal.clone();
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    let not_goal = Pred::not(goal.clone());
                    let mut delta = g.clone();
                    delta.push(not_goal.clone());
                    let mut inner = delta.clone();
                    inner.push(opened.clone());
                    let yes = weaken(single(ts), inner.clone())?;
                    let no = kernel_hyp(inner, not_goal)?;
                    let refuted = apply_rule(&Rule::NotPos, &[yes, no])?;
                    let all = apply_rule(&Rule::ForallIntro { index: i }, &[refuted])?;
                    let witness = kernel_hyp(delta, h.clone())?;
                    Ok(apply_rule(&Rule::NotNeg, &[all, witness])?)
                }))
            }
            Builtin::Leibniz { from, to } => {
                let i = fresh_index_preds(
                    s.hyps.iter().chain([&s.goal, &Pred::eq(from.clone(), to.clone())]),
                );
                let body = abstract_expr(&s.goal, to, i);
                if body == s.goal {
                    return Err(TacticError::OccurrenceNotFound(to.to_string()));
                }
                if subst(i, to, &body) != s.goal {
                    return Err(shape(name, "abstraction does not restore the goal"));
                }
                let subs = vec![
                    Sequent::new(g.clone(), Pred::eq(from.clone(), to.clone())),
                    Sequent::new(g, subst(i, from, &body)),
                ];
                let rule = Rule::Leibniz { index: i, body };
                Ok(Outcome::new(s, subs, move |ts| Ok(apply_rule(&rule, &ts)?)))
            }
            Builtin::ExtIntro => {
                let Pred::Eq(a, b) = &s.goal else {
                    return Err(shape(name, "goal is not an equality"));
                };
                let (a, b) = ((**a).clone(), (**b).clone());
                let subs = vec![
                    Sequent::new(g.clone(), Pred::member(a.clone(), Expr::pow(b.clone()))),
                    Sequent::new(g, Pred::member(b, Expr::pow(a))),
                ];
                Ok(Outcome::new(s, subs, |ts| Ok(apply_rule(&Rule::ExtIntro, &ts)?)))
            }
            Builtin::PowIntro => {
                let Pred::In(left, set) = &s.goal else {
                    return Err(shape(name, "goal is not a membership"));
                };
                let Expr::Pow(right) = &**set else {
                    return Err(shape(name, "goal is not a power set membership"));
                };
                let index = fresh_for(s, &[]);
                let rule = Rule::PowAxiom {
                    hyps: g.clone(),
                    index,
                    left: (**left).clone(),
                    right: (**right).clone(),
                };
                let ax = apply_rule(&rule, &[])?;
                let (_, unfolded) = ax.goal().as_iff().expect("axiom is an equivalence");
                let sub = Sequent::new(g, unfolded.clone());
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    Ok(derive(&Derived::IffMpRev, &[ax.clone(), single(ts)])?)
                }))
            }
            Builtin::CmpIntro => {
                let Pred::In(elem, set) = &s.goal else {
                    return Err(shape(name, "goal is not a membership"));
                };
                if !matches!(**set, Expr::Cmp(..)) {
                    return Err(shape(name, "goal is not a comprehension membership"));
                }
                let rule = Rule::CmpAxiom { member: (**elem).clone(), set: (**set).clone() };
                let ax = weaken(apply_rule(&rule, &[])?, g.clone())?;
                let unfolded = inst_cmp(elem, set).expect("comprehension");
                let sub = Sequent::new(g, unfolded);
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    Ok(derive(&Derived::IffMpRev, &[ax.clone(), single(ts)])?)
                }))
            }
            Builtin::ProdIntro => {
                let Pred::In(elem, set) = &s.goal else {
                    return Err(shape(name, "goal is not a membership"));
                };
                let Expr::Prod(left, right) = &**set else {
                    return Err(shape(name, "goal is not a product membership"));
                };
                let first = fresh_for(s, &[]);
                let rule = Rule::ProdChar {
                    hyps: g.clone(),
                    first,
                    second: first.succ(),
                    elem: (**elem).clone(),
                    left: (**left).clone(),
                    right: (**right).clone(),
                };
                let ax = apply_rule(&rule, &[])?;
                let (unfolded, _) = ax.goal().as_iff().expect("axiom is an equivalence");
                let sub = Sequent::new(g, unfolded.clone());
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    Ok(derive(&Derived::IffMp, &[ax.clone(), single(ts)])?)
                }))
            }
            Builtin::Choice => {
                let Pred::In(chosen, set) = &s.goal else {
                    return Err(shape(name, "goal is not a membership"));
                };
                match &**chosen {
                    Expr::Choice(inner) if inner == set => {}
                    _ => return Err(shape(name, "goal is not `choice(e) : e`")),
                }
                let index = fresh_for(s, &[]);
                let rule = Rule::ChoiceAxiom { hyps: g.clone(), index, set: (**set).clone() };
                let ax = apply_rule(&rule, &[])?;
                let Pred::Implies(nonempty, _) = ax.goal() else { unreachable!() };
                let sub = Sequent::new(g, (**nonempty).clone());
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    Ok(derive(&Derived::ModusPonens, &[ax.clone(), single(ts)])?)
                }))
            }
            Builtin::Unfold(n) => {
                let h = hyp_at(name, s, *n)?;
                let iff = unfold_axiom(s, &h).ok_or_else(|| {
                    shape(name, format!("hypothesis {n} is not a power set, product or comprehension membership"))
                })?;
                let (_, unfolded) = iff.goal().as_iff().expect("axiom is an equivalence");
                let sub = Sequent::new(s.with_hyp(unfolded.clone()), s.goal.clone());
                Ok(Outcome::new(s, vec![sub], move |ts| {
                    let lemma = forward_iff(&g, &h, iff.clone())?;
                    Ok(cut(lemma, single(ts))?)
                }))
            }
            Builtin::BigElem => match &s.goal {
                Pred::In(e, big) if matches!(**big, Expr::Big) => match &**e {
                    Expr::Elem(j) => {
                        let t = apply_rule(&Rule::BigElem { hyps: g, name: j.clone() }, &[])?;
                        Ok(Outcome::proved(s, t))
                    }
                    _ => Err(shape(name, "member is not a named element")),
                },
                _ => Err(shape(name, "goal is not a BIG membership")),
            },
            Builtin::BigDistinct => {
                let distinct = match &s.goal {
                    Pred::Not(eq) => match &**eq {
                        Pred::Eq(a, b) => match (&**a, &**b) {
                            (Expr::Elem(a), Expr::Elem(b)) => Some((a.clone(), b.clone())),
                            _ => None,
                        },
                        _ => None,
                    },
                    _ => None,
                };
                let Some((left, right)) = distinct else {
                    return Err(shape(name, "goal is not a disequality of named elements"));
                };
                let t = apply_rule(&Rule::BigDistinct { hyps: g, left, right }, &[])?;
                Ok(Outcome::proved(s, t))
            }
            Builtin::PairInjL(args) | Builtin::PairInjR(args) => {
                let left_side = matches!(self, Builtin::PairInjL(_));
                let rule = if left_side { Rule::PairInjL } else { Rule::PairInjR };
                let Pred::Eq(a, b) = &s.goal else {
                    return Err(shape(name, "goal is not an equality"));
                };
                let (a, b) = ((**a).clone(), (**b).clone());
                let pair_eq = |x: Expr, y: Expr| {
                    if left_side {
                        Pred::eq(Expr::maps_to(a.clone(), x), Expr::maps_to(b.clone(), y))
                    } else {
                        Pred::eq(Expr::maps_to(x, a.clone()), Expr::maps_to(y, b.clone()))
                    }
                };
                if let Some((x, y)) = args {
                    let sub = Sequent::new(g, pair_eq(x.clone(), y.clone()));
                    return Ok(Outcome::new(s, vec![sub], move |ts| Ok(apply_rule(&rule, &ts)?)));
                }
                let found = s.hyps.iter().find(|h| {
                    let Pred::Eq(l, r) = h else { return false };
                    let (Expr::MapsTo(l1, l2), Expr::MapsTo(r1, r2)) = (&**l, &**r) else {
                        return false;
                    };
                    if left_side {
                        **l1 == a && **r1 == b
                    } else {
                        **l2 == a && **r2 == b
                    }
                });
                let Some(h) = found else {
                    return Err(shape(name, "no pair equality among the hypotheses"));
                };
                let premise = kernel_hyp(g, h.clone())?;
                Ok(Outcome::proved(s, apply_rule(&rule, &[premise])?))
            }
            Builtin::Cut(p) => {
                let subs = vec![
                    Sequent::new(g, p.clone()),
                    Sequent::new(s.with_hyp(p.clone()), s.goal.clone()),
                ];
                Ok(Outcome::new(s, subs, |ts| {
                    let (lemma, body) = pair(ts);
                    Ok(cut(lemma, body)?)
                }))
            }
            Builtin::Prop => prop_decide(s),
            Builtin::Congr => congr(s, Mode::Subst),
            Builtin::CongrGraft => congr(s, Mode::Graft),
            Builtin::Rewrite { hyp, occurrence } => {
                let h = hyp_at(name, s, *hyp)?;
                if h.as_iff().is_none() {
                    return Err(shape(name, format!("hypothesis {hyp} is not an equivalence")));
                }
                let premise = kernel_hyp(g, h)?;
                rewrite_equiv(s, &premise, *occurrence, Mode::Subst)
            }
            Builtin::RewriteWith { from, to, occurrence, mode } => {
                rewrite_outcome(s, from, to, *occurrence, *mode)
            }
            Builtin::Dneg(occurrence) => {
                let (target, at) = rewrite::nth_double_negation(&s.goal, *occurrence)
                    .ok_or_else(|| TacticError::OccurrenceNotFound("a double negation".into()))?;
                let Pred::Not(inner) = &target else { unreachable!() };
                let Pred::Not(body) = &**inner else { unreachable!() };
                let o = rewrite_outcome(s, &target, body, at, Mode::Graft)?;
                let lemma = prop_prove(&o.subgoals()[0])
                    .ok_or_else(|| shape(name, "double negation equivalence not provable"))?;
                let (eq_goal, rest) = (o.subgoals()[0].clone(), o.subgoals()[1].clone());
                Ok(o.then(vec![Outcome::proved(&eq_goal, lemma), Outcome::identity(&rest)]))
            }
        }
    }
}

/// Membership unfolding axiom instance `⊢ h ⇔ unfolded`, if `h` has one.
fn unfold_axiom(s: &Sequent, h: &Pred) -> Option<Theorem> {
    let Pred::In(elem, set) = h else { return None };
    let rule = match &**set {
        Expr::Pow(right) => {
            let index = fresh_for(s, &[]);
            Rule::PowAxiom { hyps: vec![], index, left: (**elem).clone(), right: (**right).clone() }
        }
        Expr::Cmp(..) => Rule::CmpAxiom { member: (**elem).clone(), set: (**set).clone() },
        Expr::Prod(left, right) => {
            let first = fresh_for(s, &[]);
            let t = apply_rule(
                &Rule::ProdChar {
                    hyps: vec![],
                    first,
                    second: first.succ(),
                    elem: (**elem).clone(),
                    left: (**left).clone(),
                    right: (**right).clone(),
                },
                &[],
            )
            .ok()?;
            // the product axiom is stated the other way round
            return derive(&Derived::IffSym, &[t]).ok();
        }
        _ => return None,
    };
    apply_rule(&rule, &[]).ok()
}

/// The hypothesis tactic: `[]` when the goal is a hypothesis, `[s]` otherwise.
pub fn t_hyp(s: &Sequent) -> Outcome {
    if s.hyps.len() == 1 && s.hyps[0] == s.goal {
        let t = derive(&Derived::Identity { goal: s.goal.clone() }, &[]).expect("p ⊢ p");
        Outcome::proved(s, t)
    } else if member(&s.goal, &s.hyps) {
        let t = kernel_hyp(s.hyps.clone(), s.goal.clone()).expect("goal is a hypothesis");
        Outcome::proved(s, t)
    } else {
        Outcome::identity(s)
    }
}

/// Conjunction splitting: `[g ⊢ p1, g ⊢ p2]` for `p1 ∧ p2`, `[s]` otherwise.
pub fn t_and_intro(s: &Sequent) -> Outcome {
    match &s.goal {
        Pred::And(p1, p2) => {
            let subs = vec![
                Sequent::new(s.hyps.clone(), (**p1).clone()),
                Sequent::new(s.hyps.clone(), (**p2).clone()),
            ];
            Outcome::new(s, subs, |ts| Ok(apply_rule(&Rule::AndIntro, &ts)?))
        }
        _ => Outcome::identity(s),
    }
}

/// Closes `s` and every subgoal by the same closing tactic, for tests and
/// simple automation.
pub fn close_with(s: &Sequent, t: &dyn Tactic) -> Result<Theorem, TacticError> {
    let o = t.apply(s)?;
    if o.subgoals().is_empty() {
        o.justify(Vec::new())
    } else {
        Err(TacticError::ScriptFailed { step: 1, remaining: o.subgoals().to_vec(), reason: None })
    }
}

#[cfg(test)]
mod tests;
