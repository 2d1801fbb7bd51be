//! Propositional decision procedure with kernel proof reconstruction.
//!
//! Subterms rooted at `=`, `:`, `forall` or a predicate variable are
//! opaque atoms. Validity is decided by truth table; a valid sequent is then
//! proved by splitting on atoms, with three-valued evaluation cutting off
//! every branch whose outcome is already determined.

use crate::binder::HypList;
use crate::kernel::{apply_rule, derive, Derived, KernelError, Rule, Sequent, Theorem};
use crate::term::Pred;

use super::{shape, Outcome, TacticError};

/// Above this many atoms the truth table is not attempted.
pub const MAX_ATOMS: usize = 24;

fn is_atom(p: &Pred) -> bool {
    matches!(p, Pred::Eq(..) | Pred::In(..) | Pred::Forall(..) | Pred::Var(..))
}

fn collect(p: &Pred, out: &mut Vec<Pred>) {
    match p {
        Pred::And(a, b) | Pred::Implies(a, b) => {
            collect(a, out);
            collect(b, out);
        }
        Pred::Not(a) => collect(a, out),
        _ => {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
    }
}

/// Distinct atoms of the sequent in order of first occurrence.
pub fn atoms(s: &Sequent) -> Vec<Pred> {
    let mut out = Vec::new();
    for h in &s.hyps {
        collect(h, &mut out);
    }
    collect(&s.goal, &mut out);
    out
}

enum Shape {
    Atom(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
}

/// A formula together with its atom-indexed skeleton.
struct Prop {
    pred: Pred,
    shape: Shape,
}

impl Prop {
    fn new(p: &Pred, atoms: &[Pred]) -> Prop {
        let shape = match p {
            Pred::And(a, b) => Shape::And(Box::new(Prop::new(a, atoms)), Box::new(Prop::new(b, atoms))),
            Pred::Implies(a, b) => {
                Shape::Imp(Box::new(Prop::new(a, atoms)), Box::new(Prop::new(b, atoms)))
            }
            Pred::Not(a) => Shape::Not(Box::new(Prop::new(a, atoms))),
            _ => {
                debug_assert!(is_atom(p));
                Shape::Atom(atoms.iter().position(|a| a == p).expect("collected atom"))
            }
        };
        Prop { pred: p.clone(), shape }
    }

    fn truth(&self, row: u64) -> bool {
        match &self.shape {
            Shape::Atom(i) => row >> i & 1 == 1,
            Shape::Not(a) => !a.truth(row),
            Shape::And(a, b) => a.truth(row) && b.truth(row),
            Shape::Imp(a, b) => !a.truth(row) || b.truth(row),
        }
    }

    /// Kleene evaluation under a partial assignment.
    fn value(&self, assign: &[Option<bool>]) -> Option<bool> {
        match &self.shape {
            Shape::Atom(i) => assign[*i],
            Shape::Not(a) => a.value(assign).map(|v| !v),
            Shape::And(a, b) => match (a.value(assign), b.value(assign)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Shape::Imp(a, b) => match (a.value(assign), b.value(assign)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
        }
    }
}

/// Truth-table verdict: every row satisfying the hypotheses satisfies the goal.
pub fn tautology(s: &Sequent) -> Option<bool> {
    let atoms = atoms(s);
    if atoms.len() > MAX_ATOMS {
        return None;
    }
    let hyps: Vec<Prop> = s.hyps.iter().map(|h| Prop::new(h, &atoms)).collect();
    let goal = Prop::new(&s.goal, &atoms);
    Some(valid(&hyps, &goal, atoms.len()))
}

fn valid(hyps: &[Prop], goal: &Prop, n: usize) -> bool {
    (0..1u64 << n).all(|row| !hyps.iter().all(|h| h.truth(row)) || goal.truth(row))
}

fn with(delta: &[Pred], p: Pred) -> HypList {
    let mut d = delta.to_vec();
    d.push(p);
    d
}

fn hyp(delta: &[Pred], p: &Pred) -> Result<Theorem, KernelError> {
    apply_rule(&Rule::Hyp { hyps: delta.to_vec(), goal: p.clone() }, &[])
}

fn weaken(t: Theorem, delta: &[Pred]) -> Result<Theorem, KernelError> {
    if t.hyps() == delta {
        return Ok(t);
    }
    apply_rule(&Rule::Weaken { hyps: delta.to_vec() }, &[t])
}

/// `Δ ⊢ ψ` gives `Δ ⊢ ¬¬ψ`.
fn not_not(delta: &[Pred], t: Theorem) -> Result<Theorem, KernelError> {
    let inner = with(delta, Pred::not(t.goal().clone()));
    let no = hyp(&inner, inner.last().unwrap())?;
    let yes = weaken(t, &inner)?;
    apply_rule(&Rule::NotPos, &[yes, no])
}

/// `Δ ⊢ h` and `Δ ⊢ ¬h` give `Δ ⊢ φ`.
fn explode(delta: &[Pred], yes: Theorem, no: Theorem, phi: &Pred) -> Result<Theorem, KernelError> {
    let inner = with(delta, Pred::not(phi.clone()));
    apply_rule(&Rule::NotNeg, &[weaken(yes, &inner)?, weaken(no, &inner)?])
}

/// `Δ, a ⊢ φ` and `Δ, ¬a ⊢ φ` give `Δ ⊢ φ`.
fn split(delta: &[Pred], a: &Pred, pos: Theorem, neg: Theorem) -> Result<Theorem, KernelError> {
    let phi = pos.goal().clone();
    let not_phi = Pred::not(phi);
    let base = with(delta, not_phi.clone());
    // Δ, ¬φ ⊢ ¬a
    let under_a = with(&base, a.clone());
    let not_a = apply_rule(
        &Rule::NotPos,
        &[weaken(pos, &under_a)?, hyp(&under_a, &not_phi)?],
    )?;
    // Δ, ¬φ ⊢ a
    let under_not_a = with(&base, Pred::not(a.clone()));
    let yes_a = apply_rule(
        &Rule::NotNeg,
        &[weaken(neg, &under_not_a)?, hyp(&under_not_a, &not_phi)?],
    )?;
    apply_rule(&Rule::NotNeg, &[yes_a, not_a])
}

struct Builder<'a> {
    atoms: &'a [Pred],
}

impl Builder<'_> {
    /// `Δ ⊢ f` if `f` evaluates to true, `Δ ⊢ ¬f` if false. Literals for
    /// every assigned atom are in `Δ`.
    fn eval(&self, delta: &[Pred], f: &Prop, assign: &[Option<bool>]) -> Result<(bool, Theorem), KernelError> {
        match &f.shape {
            Shape::Atom(i) => {
                let v = assign[*i].expect("determined atom");
                let lit = if v { self.atoms[*i].clone() } else { Pred::not(self.atoms[*i].clone()) };
                Ok((v, hyp(delta, &lit)?))
            }
            Shape::Not(a) => {
                let (v, t) = self.eval(delta, a, assign)?;
                if v {
                    Ok((false, not_not(delta, t)?))
                } else {
                    Ok((true, t))
                }
            }
            Shape::And(a, b) => {
                for (side, rule) in [(a, Rule::AndElimL), (b, Rule::AndElimR)] {
                    if side.value(assign) == Some(false) {
                        let (_, no) = self.eval(delta, side, assign)?;
                        let inner = with(delta, f.pred.clone());
                        let yes = apply_rule(&rule, &[hyp(&inner, &f.pred)?])?;
                        let t = apply_rule(&Rule::NotPos, &[yes, weaken(no, &inner)?])?;
                        return Ok((false, t));
                    }
                }
                let (_, ta) = self.eval(delta, a, assign)?;
                let (_, tb) = self.eval(delta, b, assign)?;
                Ok((true, apply_rule(&Rule::AndIntro, &[ta, tb])?))
            }
            Shape::Imp(a, b) => {
                let under_a = with(delta, a.pred.clone());
                if b.value(assign) == Some(true) {
                    let (_, tb) = self.eval(delta, b, assign)?;
                    let t = apply_rule(&Rule::ImpIntro, &[weaken(tb, &under_a)?])?;
                    return Ok((true, t));
                }
                let (va, ta) = self.eval(delta, a, assign)?;
                if !va {
                    let t = explode(&under_a, hyp(&under_a, &a.pred)?, weaken(ta, &under_a)?, &b.pred)?;
                    return Ok((true, apply_rule(&Rule::ImpIntro, &[t])?));
                }
                let (_, no_b) = self.eval(delta, b, assign)?;
                let inner = with(delta, f.pred.clone());
                let opened = apply_rule(&Rule::ImpElim, &[hyp(&inner, &f.pred)?])?;
                let yes_b = derive(&Derived::Cut, &[weaken(ta, &inner)?, opened])?;
                let t = apply_rule(&Rule::NotPos, &[yes_b, weaken(no_b, &inner)?])?;
                Ok((false, t))
            }
        }
    }

    /// `Δ ⊢ goal`, assuming the sequent is valid under every completion of `assign`.
    fn prove(
        &self,
        delta: &[Pred],
        hyps: &[Prop],
        goal: &Prop,
        assign: &mut Vec<Option<bool>>,
    ) -> Result<Theorem, KernelError> {
        if goal.value(assign) == Some(true) {
            return Ok(self.eval(delta, goal, assign)?.1);
        }
        if let Some(h) = hyps.iter().find(|h| h.value(assign) == Some(false)) {
            let (_, no) = self.eval(delta, h, assign)?;
            return explode(delta, hyp(delta, &h.pred)?, no, &goal.pred);
        }
        let i = next_atom(hyps, goal, assign).expect("valid sequent is decided once all atoms are set");
        let atom = &self.atoms[i];
        assign[i] = Some(true);
        let pos = self.prove(&with(delta, atom.clone()), hyps, goal, assign)?;
        assign[i] = Some(false);
        let neg = self.prove(&with(delta, Pred::not(atom.clone())), hyps, goal, assign)?;
        assign[i] = None;
        split(delta, atom, pos, neg)
    }
}

/// First unassigned atom of the goal, then of the hypotheses.
fn next_atom(hyps: &[Prop], goal: &Prop, assign: &[Option<bool>]) -> Option<usize> {
    fn first(f: &Prop, assign: &[Option<bool>]) -> Option<usize> {
        match &f.shape {
            Shape::Atom(i) => assign[*i].is_none().then_some(*i),
            Shape::Not(a) => first(a, assign),
            Shape::And(a, b) | Shape::Imp(a, b) => first(a, assign).or_else(|| first(b, assign)),
        }
    }
    first(goal, assign).or_else(|| hyps.iter().find_map(|h| first(h, assign)))
}

/// A kernel theorem of `s` if it is propositionally valid.
pub fn prop_prove(s: &Sequent) -> Option<Theorem> {
    let atoms = atoms(s);
    if atoms.len() > MAX_ATOMS {
        return None;
    }
    let hyps: Vec<Prop> = s.hyps.iter().map(|h| Prop::new(h, &atoms)).collect();
    let goal = Prop::new(&s.goal, &atoms);
    if !valid(&hyps, &goal, atoms.len()) {
        return None;
    }
    // literal hypotheses fix their atom without a split
    let mut assign = vec![None; atoms.len()];
    for h in &hyps {
        match &h.shape {
            Shape::Atom(i) => assign[*i] = Some(true),
            Shape::Not(a) => {
                if let Shape::Atom(i) = a.shape {
                    if assign[i].is_none() {
                        assign[i] = Some(false);
                    }
                }
            }
            _ => {}
        }
    }
    let b = Builder { atoms: &atoms };
    let t = b
        .prove(&s.hyps, &hyps, &goal, &mut assign)
        .expect("reconstruction of a valid sequent follows the kernel rules");
    Some(t)
}

/// `[]` with a kernel proof when `s` is a propositional tautology, `[s]` otherwise.
pub fn prop_decide(s: &Sequent) -> Result<Outcome, TacticError> {
    let n = atoms(s).len();
    if n > MAX_ATOMS {
        return Err(shape("prop", format!("{n} atoms exceed the limit of {MAX_ATOMS}")));
    }
    Ok(match prop_prove(s) {
        Some(t) => Outcome::proved(s, t),
        None => Outcome::identity(s),
    })
}
