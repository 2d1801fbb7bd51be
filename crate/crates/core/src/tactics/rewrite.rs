//! Rewriting under binders through predicate-variable abstraction.
//!
//! An occurrence of `p1` in the goal is abstracted to a fresh predicate
//! variable `k`, giving a template `T` with `put(k, p1, T) = goal`. The
//! congruence step then relates the goal to `put(k, p2, T)`. In substitution
//! mode the occurrence at binder depth `d` must be `p1` lifted `d` times; in
//! grafting mode it is `p1` verbatim, possibly captured by the binders.

use crate::binder::{fresh_predname, graft_pred, not_free, open, shift, subst_pred};
use crate::kernel::{
    apply_rule, congruence, derive, Congruence, CongruenceKind, Derived, Rule, Sequent, Theorem,
};
use crate::term::{Expr, Index, Pred, PredName, Term};

use super::{shape, Outcome, TacticError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Occurrence {
    All,
    /// 1-based, in pre-order.
    Nth(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Capture-avoiding: the occurrence is lifted under binders.
    Subst,
    /// Capturing: the occurrence is taken verbatim.
    Graft,
}

impl Mode {
    fn kind(self, sort_is_pred: bool) -> CongruenceKind {
        match (self, sort_is_pred) {
            (Mode::Subst, true) => CongruenceKind::SubstEquiv,
            (Mode::Subst, false) => CongruenceKind::SubstEq,
            (Mode::Graft, true) => CongruenceKind::GraftEquiv,
            (Mode::Graft, false) => CongruenceKind::GraftEq,
        }
    }

    fn put<T: crate::binder::Syntax>(self, k: &PredName, p: &Pred, t: &T) -> T {
        match self {
            Mode::Subst => subst_pred(k, p, t),
            Mode::Graft => graft_pred(k, p, t),
        }
    }
}

/// Replaces every occurrence of `target` (lifted under binders) by the
/// variable `i` (likewise lifted).
pub fn abstract_expr(p: &Pred, target: &Expr, i: Index) -> Pred {
    fn on_pred(p: &Pred, d: u32, target: &Expr, i: Index) -> Pred {
        match p {
            Pred::And(a, b) => Pred::and(on_pred(a, d, target, i), on_pred(b, d, target, i)),
            Pred::Implies(a, b) => Pred::implies(on_pred(a, d, target, i), on_pred(b, d, target, i)),
            Pred::Not(a) => Pred::not(on_pred(a, d, target, i)),
            Pred::Forall(a) => Pred::forall(on_pred(a, d + 1, target, i)),
            Pred::Eq(a, b) => Pred::eq(on_expr(a, d, target, i), on_expr(b, d, target, i)),
            Pred::In(a, b) => Pred::member(on_expr(a, d, target, i), on_expr(b, d, target, i)),
            Pred::Var(_) => p.clone(),
        }
    }
    fn on_expr(e: &Expr, d: u32, target: &Expr, i: Index) -> Expr {
        if *e == shift(target, d, 0) {
            return Expr::Var(i.shifted(d));
        }
        match e {
            Expr::MapsTo(a, b) => Expr::maps_to(on_expr(a, d, target, i), on_expr(b, d, target, i)),
            Expr::Choice(a) => Expr::choice(on_expr(a, d, target, i)),
            Expr::Pow(a) => Expr::pow(on_expr(a, d, target, i)),
            Expr::Prod(a, b) => Expr::prod(on_expr(a, d, target, i), on_expr(b, d, target, i)),
            Expr::Cmp(a, p) => Expr::cmp(on_expr(a, d, target, i), on_pred(p, d + 1, target, i)),
            Expr::Var(_) | Expr::Big | Expr::Elem(_) => e.clone(),
        }
    }
    on_pred(p, 0, target, i)
}

struct Abstraction<'a> {
    from: &'a Pred,
    mode: Mode,
    k: &'a PredName,
    occurrence: Occurrence,
    seen: usize,
    replaced: usize,
    captured: bool,
}

impl Abstraction<'_> {
    fn pred(&mut self, p: &Pred, d: u32) -> Pred {
        let candidate = match self.mode {
            Mode::Subst => shift(self.from, d, 0),
            Mode::Graft => self.from.clone(),
        };
        if *p == candidate {
            self.seen += 1;
            if matches!(self.occurrence, Occurrence::All)
                || self.occurrence == Occurrence::Nth(self.seen)
            {
                self.replaced += 1;
                return Pred::Var(self.k.clone());
            }
        } else if p == self.from {
            self.captured = true;
        }
        match p {
            Pred::And(a, b) => Pred::and(self.pred(a, d), self.pred(b, d)),
            Pred::Implies(a, b) => Pred::implies(self.pred(a, d), self.pred(b, d)),
            Pred::Not(a) => Pred::not(self.pred(a, d)),
            Pred::Forall(a) => Pred::forall(self.pred(a, d + 1)),
            Pred::Eq(a, b) => Pred::eq(self.expr(a, d), self.expr(b, d)),
            Pred::In(a, b) => Pred::member(self.expr(a, d), self.expr(b, d)),
            Pred::Var(_) => p.clone(),
        }
    }

    fn expr(&mut self, e: &Expr, d: u32) -> Expr {
        match e {
            Expr::MapsTo(a, b) => Expr::maps_to(self.expr(a, d), self.expr(b, d)),
            Expr::Choice(a) => Expr::choice(self.expr(a, d)),
            Expr::Pow(a) => Expr::pow(self.expr(a, d)),
            Expr::Prod(a, b) => Expr::prod(self.expr(a, d), self.expr(b, d)),
            Expr::Cmp(a, p) => Expr::cmp(self.expr(a, d), self.pred(p, d + 1)),
            Expr::Var(_) | Expr::Big | Expr::Elem(_) => e.clone(),
        }
    }
}

/// Rewrites the designated occurrence(s) of `from` in the goal into `to`.
/// Subgoals: the equivalence `from ⇔ to` (under the goal's hypotheses in
/// substitution mode, under none in grafting mode), then the rewritten goal.
pub fn rewrite_outcome(
    s: &Sequent,
    from: &Pred,
    to: &Pred,
    occurrence: Occurrence,
    mode: Mode,
) -> Result<Outcome, TacticError> {
    let k = fresh_predname([&Term::Pred(s.goal.clone()), &from.clone().into(), &to.clone().into()]);
    let mut abs = Abstraction {
        from,
        mode,
        k: &k,
        occurrence,
        seen: 0,
        replaced: 0,
        captured: false,
    };
    let template = abs.pred(&s.goal, 0);
    if abs.replaced == 0 {
        return Err(if abs.captured && mode == Mode::Subst {
            TacticError::CaptureModeMismatch(from.to_string())
        } else {
            TacticError::OccurrenceNotFound(from.to_string())
        });
    }
    debug_assert_eq!(mode.put(&k, from, &template), s.goal);
    let rewritten = mode.put(&k, to, &template);
    let eq_hyps = match mode {
        Mode::Subst => s.hyps.clone(),
        Mode::Graft => Vec::new(),
    };
    let subs = vec![
        Sequent::new(eq_hyps, Pred::iff(from.clone(), to.clone())),
        Sequent::new(s.hyps.clone(), rewritten),
    ];
    let c = Congruence {
        kind: mode.kind(true),
        name: k,
        target: template.into(),
        hyps: s.hyps.clone(),
    };
    Ok(Outcome::new(s, subs, move |ts| {
        let mut it = ts.into_iter();
        let (eq, body) = (it.next().unwrap(), it.next().unwrap());
        let both = congruence(&c, &[eq])?;
        Ok(derive(&Derived::IffMpRev, &[both, body])?)
    }))
}

/// Rewrites with a proved equivalence. In substitution mode the premise may
/// use any subset of the goal's hypotheses; in grafting mode it must use none.
pub fn rewrite_equiv(
    s: &Sequent,
    premise: &Theorem,
    occurrence: Occurrence,
    mode: Mode,
) -> Result<Outcome, TacticError> {
    let Some((from, to)) = premise.goal().as_iff() else {
        return Err(shape("rewrite", "premise is not an equivalence"));
    };
    let o = rewrite_outcome(s, from, to, occurrence, mode)?;
    let eq_goal = o.subgoals()[0].clone();
    let body = o.subgoals()[1].clone();
    let lemma = if premise.sequent() == &eq_goal {
        premise.clone()
    } else if mode == Mode::Subst {
        apply_rule(&Rule::Weaken { hyps: eq_goal.hyps.clone() }, std::slice::from_ref(premise))?
    } else {
        return Err(shape("rewrite", "grafting needs an equivalence proved without hypotheses"));
    };
    Ok(o.then(vec![Outcome::proved(&eq_goal, lemma), Outcome::identity(&body)]))
}

/// Removes `d` binders' worth of lifting, if none of the first `d` indexes occur.
fn unshift(p: &Pred, d: u32) -> Option<Pred> {
    if (1..=d).any(|j| !not_free(Index::of(j), p)) {
        return None;
    }
    let mut out = p.clone();
    for _ in 0..d {
        out = open(&Expr::Big, &out);
    }
    Some(out)
}

struct Holes<'a> {
    k: &'a PredName,
    found: Vec<(u32, Pred, Pred)>,
}

impl Holes<'_> {
    fn hole(&mut self, a: &Pred, b: &Pred, d: u32) -> Pred {
        self.found.push((d, a.clone(), b.clone()));
        Pred::Var(self.k.clone())
    }

    fn pred(&mut self, a: &Pred, b: &Pred, d: u32) -> Pred {
        if a == b {
            return a.clone();
        }
        match (a, b) {
            (Pred::And(a1, a2), Pred::And(b1, b2)) => Pred::and(self.pred(a1, b1, d), self.pred(a2, b2, d)),
            (Pred::Implies(a1, a2), Pred::Implies(b1, b2)) => {
                Pred::implies(self.pred(a1, b1, d), self.pred(a2, b2, d))
            }
            (Pred::Not(a1), Pred::Not(b1)) => Pred::not(self.pred(a1, b1, d)),
            (Pred::Forall(a1), Pred::Forall(b1)) => Pred::forall(self.pred(a1, b1, d + 1)),
            (Pred::Eq(a1, a2), Pred::Eq(b1, b2)) | (Pred::In(a1, a2), Pred::In(b1, b2)) => {
                let mark = self.found.len();
                match (self.expr(a1, b1, d), self.expr(a2, b2, d)) {
                    (Some(l), Some(r)) if matches!(a, Pred::Eq(..)) => Pred::eq(l, r),
                    (Some(l), Some(r)) => Pred::member(l, r),
                    _ => {
                        self.found.truncate(mark);
                        self.hole(a, b, d)
                    }
                }
            }
            _ => self.hole(a, b, d),
        }
    }

    fn expr(&mut self, a: &Expr, b: &Expr, d: u32) -> Option<Expr> {
        if a == b {
            return Some(a.clone());
        }
        Some(match (a, b) {
            (Expr::MapsTo(a1, a2), Expr::MapsTo(b1, b2)) => {
                Expr::maps_to(self.expr(a1, b1, d)?, self.expr(a2, b2, d)?)
            }
            (Expr::Prod(a1, a2), Expr::Prod(b1, b2)) => {
                Expr::prod(self.expr(a1, b1, d)?, self.expr(a2, b2, d)?)
            }
            (Expr::Choice(a1), Expr::Choice(b1)) => Expr::choice(self.expr(a1, b1, d)?),
            (Expr::Pow(a1), Expr::Pow(b1)) => Expr::pow(self.expr(a1, b1, d)?),
            (Expr::Cmp(a1, p), Expr::Cmp(b1, q)) => {
                Expr::cmp(self.expr(a1, b1, d)?, self.pred(p, q, d + 1))
            }
            _ => return None,
        })
    }
}

/// Backward congruence: reduces `A ⇔ B` (or `e = f`) whose two sides differ
/// only at instances of one equivalence `p1 ⇔ p2` to that equivalence.
pub fn congr(s: &Sequent, mode: Mode) -> Result<Outcome, TacticError> {
    let tactic = match mode {
        Mode::Subst => "congr",
        Mode::Graft => "congr_graft",
    };
    let k = fresh_predname([&Term::Pred(s.goal.clone())]);
    let mut holes = Holes { k: &k, found: Vec::new() };
    let (template, sides): (Term, (Term, Term)) = if let Some((a, b)) = s.goal.as_iff() {
        (holes.pred(a, b, 0).into(), (a.clone().into(), b.clone().into()))
    } else if let Pred::Eq(a, b) = &s.goal {
        let t = holes
            .expr(a, b, 0)
            .ok_or_else(|| shape(tactic, "the two sides differ outside any predicate"))?;
        (t.into(), ((**a).clone().into(), (**b).clone().into()))
    } else {
        return Err(shape(tactic, "goal is neither an equivalence nor an equality"));
    };
    if holes.found.is_empty() {
        if let Some((a, _)) = s.goal.as_iff() {
            let t = derive(&Derived::IffRefl { hyps: s.hyps.clone(), pred: a.clone() }, &[])?;
            return Ok(Outcome::proved(s, t));
        }
        let Pred::Eq(a, _) = &s.goal else { unreachable!() };
        let t = apply_rule(&Rule::EqRefl { hyps: s.hyps.clone(), expr: (**a).clone() }, &[])?;
        return Ok(Outcome::proved(s, t));
    }
    let mut pair: Option<(Pred, Pred)> = None;
    for (d, a, b) in &holes.found {
        let this = match mode {
            Mode::Subst => match (unshift(a, *d), unshift(b, *d)) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(TacticError::CaptureModeMismatch(a.to_string())),
            },
            Mode::Graft => (a.clone(), b.clone()),
        };
        match &pair {
            None => pair = Some(this),
            Some(prev) if *prev == this => {}
            Some(_) => {
                return Err(shape(tactic, "the differences are not instances of one equivalence"))
            }
        }
    }
    let (p1, p2) = pair.expect("at least one hole");
    if mode.put(&k, &p1, &template) != sides.0 || mode.put(&k, &p2, &template) != sides.1 {
        return Err(shape(tactic, "abstraction does not restore the goal"));
    }
    let eq_hyps = match mode {
        Mode::Subst => s.hyps.clone(),
        Mode::Graft => Vec::new(),
    };
    let c = Congruence {
        kind: mode.kind(matches!(template, Term::Pred(_))),
        name: k,
        target: template,
        hyps: s.hyps.clone(),
    };
    let sub = Sequent::new(eq_hyps, Pred::iff(p1, p2));
    Ok(Outcome::new(s, vec![sub], move |ts| Ok(congruence(&c, &ts)?)))
}

fn preorder<'a>(p: &'a Pred, out: &mut Vec<&'a Pred>) {
    out.push(p);
    match p {
        Pred::And(a, b) | Pred::Implies(a, b) => {
            preorder(a, out);
            preorder(b, out);
        }
        Pred::Not(a) | Pred::Forall(a) => preorder(a, out),
        Pred::Eq(a, b) | Pred::In(a, b) => {
            preorder_expr(a, out);
            preorder_expr(b, out);
        }
        Pred::Var(_) => {}
    }
}

fn preorder_expr<'a>(e: &'a Expr, out: &mut Vec<&'a Pred>) {
    match e {
        Expr::MapsTo(a, b) | Expr::Prod(a, b) => {
            preorder_expr(a, out);
            preorder_expr(b, out);
        }
        Expr::Choice(a) | Expr::Pow(a) => preorder_expr(a, out),
        Expr::Cmp(a, p) => {
            preorder_expr(a, out);
            preorder(p, out);
        }
        Expr::Var(_) | Expr::Big | Expr::Elem(_) => {}
    }
}

/// The designated double negation `¬¬p` of the goal and its position among
/// the verbatim copies of that subterm.
pub(crate) fn nth_double_negation(goal: &Pred, occurrence: Occurrence) -> Option<(Pred, Occurrence)> {
    let mut nodes = Vec::new();
    preorder(goal, &mut nodes);
    let is_dneg = |p: &&Pred| matches!(p, Pred::Not(inner) if matches!(**inner, Pred::Not(_)));
    let n = match occurrence {
        Occurrence::All => 1,
        Occurrence::Nth(n) => n,
    };
    let pos = nodes
        .iter()
        .enumerate()
        .filter(|(_, p)| is_dneg(p))
        .nth(n.checked_sub(1)?)?
        .0;
    let target = nodes[pos].clone();
    let copies = nodes[..=pos].iter().filter(|p| ***p == target).count();
    let occ = match occurrence {
        Occurrence::All => Occurrence::All,
        Occurrence::Nth(_) => Occurrence::Nth(copies),
    };
    Some((target, occ))
}
