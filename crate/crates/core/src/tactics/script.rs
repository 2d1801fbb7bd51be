//! Tacticals, named tactic calls and the interactive proof state.

use std::fmt;

use crate::kernel::{Sequent, Theorem};
use crate::syntax::{parse_expr, parse_pred, Script, ScopeTable, SyntaxError};
use crate::term::{Expr, Index, Pred};

use super::{fresh_for, Builtin, Mode, Occurrence, Outcome, Tactic, TacticError};

/// Upper bound on tactic evaluations per script line.
pub const STEP_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Text(String),
    Int(usize),
    Ident(String),
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Text(s) => f.write_str(&crate::term::quote(s)),
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Ident(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tactical {
    Call { name: String, args: Vec<Arg> },
    /// Runs the second tactical on every subgoal of the first, or on one
    /// subgoal when it is a [`Tactical::Focus`].
    Then(Box<Tactical>, Box<Tactical>),
    OrElse(Box<Tactical>, Box<Tactical>),
    /// Applies until failure or no progress, then recurses into subgoals.
    Repeat(Box<Tactical>),
    Try(Box<Tactical>),
    /// 1-based subgoal selector.
    Focus(usize, Box<Tactical>),
}

impl Tactical {
    pub fn call(name: &str, args: Vec<Arg>) -> Tactical {
        Tactical::Call { name: name.to_string(), args }
    }

    pub fn then(self, next: Tactical) -> Tactical {
        Tactical::Then(Box::new(self), Box::new(next))
    }

    pub fn or_else(self, other: Tactical) -> Tactical {
        Tactical::OrElse(Box::new(self), Box::new(other))
    }
}

impl fmt::Display for Tactical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn inner(t: &Tactical, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Tactical::Then(..) | Tactical::OrElse(..) => write!(f, "({t})"),
                _ => write!(f, "{t}"),
            }
        }
        match self {
            Tactical::Call { name, args } => {
                f.write_str(name)?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            Tactical::Then(a, b) => {
                inner(a, f)?;
                f.write_str(" then ")?;
                inner(b, f)
            }
            Tactical::OrElse(a, b) => {
                inner(a, f)?;
                f.write_str(" orelse ")?;
                inner(b, f)
            }
            Tactical::Repeat(a) => {
                f.write_str("repeat ")?;
                inner(a, f)
            }
            Tactical::Try(a) => {
                f.write_str("try ")?;
                inner(a, f)
            }
            Tactical::Focus(n, a) => {
                write!(f, "focus {n} ")?;
                inner(a, f)
            }
        }
    }
}

fn bad(tactic: &str, reason: impl Into<String>) -> TacticError {
    TacticError::BadArgument { tactic: tactic.to_string(), reason: reason.into() }
}

struct Args<'a> {
    name: &'a str,
    args: &'a [Arg],
}

impl Args<'_> {
    fn arity(&self, min: usize, max: usize) -> Result<(), TacticError> {
        let n = self.args.len();
        if n < min || n > max {
            let want = if min == max { format!("{min}") } else { format!("{min} to {max}") };
            return Err(bad(self.name, format!("expected {want} argument(s), found {n}")));
        }
        Ok(())
    }

    fn text(&self, k: usize) -> Result<&str, TacticError> {
        match self.args.get(k) {
            Some(Arg::Text(s)) => Ok(s),
            other => Err(bad(self.name, format!("argument {} must be a quoted term, found {other:?}", k + 1))),
        }
    }

    fn opt_text(&self, k: usize) -> Result<Option<&str>, TacticError> {
        if k < self.args.len() {
            self.text(k).map(Some)
        } else {
            Ok(None)
        }
    }

    fn int(&self, k: usize) -> Result<usize, TacticError> {
        match self.args.get(k) {
            Some(Arg::Int(n)) => Ok(*n),
            other => Err(bad(self.name, format!("argument {} must be a number, found {other:?}", k + 1))),
        }
    }

    fn occurrence(&self, k: usize) -> Result<Occurrence, TacticError> {
        match self.args.get(k) {
            None => Ok(Occurrence::All),
            Some(Arg::Ident(s)) if s == "all" => Ok(Occurrence::All),
            Some(Arg::Int(n)) if *n > 0 => Ok(Occurrence::Nth(*n)),
            Some(other) => Err(bad(self.name, format!("bad occurrence {other}"))),
        }
    }

    fn syntax(&self, e: SyntaxError) -> TacticError {
        bad(self.name, e.to_string())
    }

    fn pred(&self, k: usize, scope: &mut ScopeTable) -> Result<Pred, TacticError> {
        parse_pred(self.text(k)?, scope).map_err(|e| self.syntax(e))
    }

    fn expr(&self, k: usize, scope: &mut ScopeTable) -> Result<Expr, TacticError> {
        parse_expr(self.text(k)?, scope).map_err(|e| self.syntax(e))
    }
}

/// Index for a newly named variable: fresh for the goal and the scope.
fn introduce(s: &Sequent, scope: &mut ScopeTable, name: &str) -> Index {
    let i = fresh_for(s, &[]).max(scope.next_index());
    scope.bind(name, i);
    i
}

/// Resolves a named call against the goal, parsing term arguments in
/// `scope` and registering names the call introduces.
pub fn resolve(
    name: &str,
    args: &[Arg],
    s: &Sequent,
    scope: &mut ScopeTable,
) -> Result<Builtin, TacticError> {
    let a = Args { name, args };
    scope.reserve(fresh_for(s, &[]));
    let nullary = |b: Builtin| a.arity(0, 0).map(|_| b);
    match name {
        "id" => nullary(Builtin::Id),
        "fail" => nullary(Builtin::Fail),
        "hyp" => nullary(Builtin::Hyp),
        "and_intro" => nullary(Builtin::AndIntro),
        "imp_intro" => nullary(Builtin::ImpIntro),
        "revert" => nullary(Builtin::Revert),
        "eq_refl" => nullary(Builtin::EqRefl),
        "forall_intro_alpha" => nullary(Builtin::ForallIntroAlpha),
        "forall_intro_internal" => nullary(Builtin::ForallIntroInternal),
        "ext_intro" => nullary(Builtin::ExtIntro),
        "pow_intro" => nullary(Builtin::PowIntro),
        "cmp_intro" => nullary(Builtin::CmpIntro),
        "prod_intro" => nullary(Builtin::ProdIntro),
        "choice" => nullary(Builtin::Choice),
        "big_elem" => nullary(Builtin::BigElem),
        "big_distinct" => nullary(Builtin::BigDistinct),
        "prop" => nullary(Builtin::Prop),
        "congr" => nullary(Builtin::Congr),
        "congr_graft" => nullary(Builtin::CongrGraft),
        "clear" => {
            a.arity(1, 1)?;
            Ok(Builtin::Clear(a.int(0)?))
        }
        "unfold" => {
            a.arity(1, 1)?;
            Ok(Builtin::Unfold(a.int(0)?))
        }
        "and_elim_l" | "and_elim_r" | "not_intro" | "by_contra" | "cut" => {
            a.arity(1, 1)?;
            let p = a.pred(0, scope)?;
            Ok(match name {
                "and_elim_l" => Builtin::AndElimL(p),
                "and_elim_r" => Builtin::AndElimR(p),
                "not_intro" => Builtin::NotPos(p),
                "by_contra" => Builtin::NotNeg(p),
                _ => Builtin::Cut(p),
            })
        }
        "forall_intro" => {
            a.arity(0, 1)?;
            let index = a.opt_text(0)?.map(|x| introduce(s, scope, x));
            Ok(Builtin::ForallIntro(index))
        }
        "forall_elim" => {
            a.arity(2, 2)?;
            let quantified = a.pred(0, scope)?;
            let witness = a.expr(1, scope)?;
            Ok(Builtin::ForallElim { quantified, witness })
        }
        "specialize" => {
            a.arity(2, 2)?;
            Ok(Builtin::Specialize { hyp: a.int(0)?, witness: a.expr(1, scope)? })
        }
        "exists_intro" => {
            a.arity(1, 1)?;
            Ok(Builtin::ExistsIntro(a.expr(0, scope)?))
        }
        "exists_elim" => {
            a.arity(1, 2)?;
            let hyp = a.int(0)?;
            let index = a.opt_text(1)?.map(|x| introduce(s, scope, x));
            Ok(Builtin::ExistsElim { hyp, index })
        }
        "leibniz" => {
            a.arity(2, 2)?;
            Ok(Builtin::Leibniz { from: a.expr(0, scope)?, to: a.expr(1, scope)? })
        }
        "pair_inj_l" | "pair_inj_r" => {
            if !(args.is_empty() || args.len() == 2) {
                return Err(bad(name, "expected no arguments or two expressions"));
            }
            let pair = if args.is_empty() {
                None
            } else {
                Some((a.expr(0, scope)?, a.expr(1, scope)?))
            };
            Ok(if name == "pair_inj_l" { Builtin::PairInjL(pair) } else { Builtin::PairInjR(pair) })
        }
        "rewrite" => {
            a.arity(1, 2)?;
            Ok(Builtin::Rewrite { hyp: a.int(0)?, occurrence: a.occurrence(1)? })
        }
        "rewrite_with" | "graft_with" => {
            a.arity(2, 3)?;
            let mode = if name == "graft_with" { Mode::Graft } else { Mode::Subst };
            Ok(Builtin::RewriteWith {
                from: a.pred(0, scope)?,
                to: a.pred(1, scope)?,
                occurrence: a.occurrence(2)?,
                mode,
            })
        }
        "dneg" => {
            a.arity(0, 1)?;
            Ok(Builtin::Dneg(a.occurrence(0)?))
        }
        _ => Err(TacticError::UnknownTactic(name.to_string())),
    }
}

struct Eval<'a> {
    scope: &'a mut ScopeTable,
    budget: usize,
}

impl Eval<'_> {
    fn tick(&mut self) -> Result<(), TacticError> {
        if self.budget == 0 {
            return Err(bad("repeat", "step budget exhausted"));
        }
        self.budget -= 1;
        Ok(())
    }

    /// Runs `f`, restoring the scope when it fails.
    fn attempt(
        &mut self,
        f: impl FnOnce(&mut Self) -> Result<Outcome, TacticError>,
    ) -> Result<Outcome, TacticError> {
        let saved = self.scope.clone();
        let r = f(self);
        if r.is_err() {
            *self.scope = saved;
        }
        r
    }

    fn eval(&mut self, t: &Tactical, s: &Sequent) -> Result<Outcome, TacticError> {
        self.tick()?;
        match t {
            Tactical::Call { name, args } => resolve(name, args, s, self.scope)?.apply(s),
            Tactical::Then(a, b) => {
                let first = self.eval(a, s)?;
                let subgoals = first.subgoals().to_vec();
                let inner = match &**b {
                    Tactical::Focus(n, c) => {
                        if *n == 0 || *n > subgoals.len() {
                            return Err(bad("focus", format!("no subgoal {n} (there are {})", subgoals.len())));
                        }
                        let mut out = Vec::with_capacity(subgoals.len());
                        for (k, g) in subgoals.iter().enumerate() {
                            out.push(if k + 1 == *n { self.eval(c, g)? } else { Outcome::identity(g) });
                        }
                        out
                    }
                    _ => subgoals.iter().map(|g| self.eval(b, g)).collect::<Result<_, _>>()?,
                };
                Ok(first.then(inner))
            }
            Tactical::OrElse(a, b) => match self.attempt(|e| e.eval(a, s)) {
                Ok(o) => Ok(o),
                Err(_) => self.eval(b, s),
            },
            Tactical::Try(a) => Ok(self.attempt(|e| e.eval(a, s)).unwrap_or_else(|_| Outcome::identity(s))),
            Tactical::Repeat(a) => match self.attempt(|e| e.eval(a, s)) {
                Ok(o) if !o.is_identity() => {
                    let subgoals = o.subgoals().to_vec();
                    let inner = subgoals.iter().map(|g| self.eval(t, g)).collect::<Result<_, _>>()?;
                    Ok(o.then(inner))
                }
                _ => Ok(Outcome::identity(s)),
            },
            Tactical::Focus(1, a) => self.eval(a, s),
            Tactical::Focus(n, _) => Err(bad("focus", format!("no subgoal {n} (there is 1)"))),
        }
    }
}

/// Evaluates a tactical on one goal.
pub fn eval(t: &Tactical, s: &Sequent, scope: &mut ScopeTable) -> Result<Outcome, TacticError> {
    Eval { scope, budget: STEP_BUDGET }.eval(t, s)
}

#[derive(Clone, Debug)]
struct Step {
    position: usize,
    outcome: Outcome,
    goals: Vec<Sequent>,
    scope: ScopeTable,
}

/// Open goals of a proof in progress. Each step works on one goal
/// (the first, or the one picked by a top-level `focus`).
#[derive(Clone, Debug)]
pub struct ProofState {
    root: Sequent,
    goals: Vec<Sequent>,
    scope: ScopeTable,
    steps: Vec<Step>,
}

impl ProofState {
    pub fn new(root: Sequent, scope: ScopeTable) -> ProofState {
        ProofState { goals: vec![root.clone()], root, scope, steps: Vec::new() }
    }

    pub fn root(&self) -> &Sequent {
        &self.root
    }

    pub fn goals(&self) -> &[Sequent] {
        &self.goals
    }

    pub fn scope(&self) -> &ScopeTable {
        &self.scope
    }

    pub fn is_complete(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.steps.len()
    }

    pub fn apply(&mut self, t: &Tactical) -> Result<(), TacticError> {
        let (position, t) = match t {
            Tactical::Focus(n, inner) => (n.wrapping_sub(1), &**inner),
            t => (0, t),
        };
        let Some(goal) = self.goals.get(position).cloned() else {
            return Err(bad("focus", format!("no goal {} (there are {})", position.wrapping_add(1), self.goals.len())));
        };
        let mut scope = self.scope.clone();
        let outcome = eval(t, &goal, &mut scope)?;
        let before = self.goals.clone();
        self.goals.splice(position..=position, outcome.subgoals().iter().cloned());
        self.steps.push(Step { position, outcome, goals: before, scope: std::mem::replace(&mut self.scope, scope) });
        Ok(())
    }

    /// Reverts the last step; returns false when there is none.
    pub fn undo(&mut self) -> bool {
        match self.steps.pop() {
            Some(step) => {
                self.goals = step.goals;
                self.scope = step.scope;
                true
            }
            None => false,
        }
    }

    /// The theorem of the root goal once every goal is closed.
    pub fn theorem(&self) -> Result<Theorem, TacticError> {
        if !self.goals.is_empty() {
            return Err(TacticError::ScriptFailed {
                step: self.steps.len(),
                remaining: self.goals.clone(),
                reason: None,
            });
        }
        let mut thms: Vec<Theorem> = Vec::new();
        for step in self.steps.iter().rev() {
            let n = step.outcome.subgoals().len();
            let used: Vec<Theorem> = thms.drain(step.position..step.position + n).collect();
            let t = step.outcome.justify(used)?;
            thms.insert(step.position, t);
        }
        debug_assert_eq!(thms.len(), 1);
        Ok(thms.pop().expect("the root theorem"))
    }
}

/// Runs every line of `script` on `goal`. Returns the theorem and the
/// scope extended with the names the script introduced.
pub fn run_script(
    script: &Script,
    goal: &Sequent,
    scope: ScopeTable,
) -> Result<(Theorem, ScopeTable), TacticError> {
    let mut state = ProofState::new(goal.clone(), scope);
    let mut last = 0;
    for (line, t) in &script.steps {
        last = *line;
        if let Err(e) = state.apply(t) {
            return Err(TacticError::ScriptFailed {
                step: *line,
                remaining: state.goals.clone(),
                reason: Some(Box::new(e)),
            });
        }
    }
    if !state.is_complete() {
        return Err(TacticError::ScriptFailed { step: last, remaining: state.goals, reason: None });
    }
    let thm = state.theorem()?;
    Ok((thm, state.scope))
}
