//! Specification-level reference implementations, written directly from
//! the inference rules and definitions rather than from the deciders they
//! are compared with.

use crate::term::{Expr, Pred, PredName, Term};

use super::LiftFn;

/// Rules of the non-freeness judgement `i ∖ t`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NotFreeRule {
    /// `i ∖ BIG`, `i ∖ @j`, `i ∖ #k`
    Constant,
    /// `i ≠ j → i ∖ j`
    Distinct,
    /// `i ∖ a` for every immediate subterm `a` of a non-binding constructor
    Congruent,
    /// `i+1 ∖ p → i ∖ forall p`
    Forall,
    /// `i ∖ e → i+1 ∖ p → i ∖ { e | p }`
    Comprehension,
}

/// A derivation of `index ∖ term`.
#[derive(Clone, Debug)]
pub struct NotFree {
    pub index: u32,
    pub term: Term,
    pub rule: NotFreeRule,
    pub premises: Vec<NotFree>,
}

/// Searches for a derivation of `i ∖ t`.
pub fn derive_not_free(i: u32, t: &Term) -> Option<NotFree> {
    let node = |rule, premises| Some(NotFree { index: i, term: t.clone(), rule, premises });
    match t {
        Term::Expr(Expr::Big) | Term::Expr(Expr::Elem(_)) | Term::Pred(Pred::Var(_)) => {
            node(NotFreeRule::Constant, vec![])
        }
        Term::Expr(Expr::Var(j)) => {
            if j.get() != i {
                node(NotFreeRule::Distinct, vec![])
            } else {
                None
            }
        }
        Term::Pred(Pred::Forall(p)) => {
            let inner = derive_not_free(i + 1, &Term::Pred((**p).clone()))?;
            node(NotFreeRule::Forall, vec![inner])
        }
        Term::Expr(Expr::Cmp(e, p)) => {
            let left = derive_not_free(i, &Term::Expr((**e).clone()))?;
            let right = derive_not_free(i + 1, &Term::Pred((**p).clone()))?;
            node(NotFreeRule::Comprehension, vec![left, right])
        }
        _ => {
            let premises = t
                .children()
                .iter()
                .map(|c| derive_not_free(i, c))
                .collect::<Option<Vec<_>>>()?;
            node(NotFreeRule::Congruent, premises)
        }
    }
}

/// Checks that every step of `d` is an instance of its rule.
pub fn verify_not_free(d: &NotFree) -> bool {
    let premise_ok = |k: usize, index: u32, term: &Term| {
        d.premises.get(k).is_some_and(|p| p.index == index && &p.term == term && verify_not_free(p))
    };
    match (d.rule, &d.term) {
        (NotFreeRule::Constant, Term::Expr(Expr::Big | Expr::Elem(_)) | Term::Pred(Pred::Var(_))) => {
            d.premises.is_empty()
        }
        (NotFreeRule::Distinct, Term::Expr(Expr::Var(j))) => d.premises.is_empty() && j.get() != d.index,
        (NotFreeRule::Forall, Term::Pred(Pred::Forall(p))) => {
            d.premises.len() == 1 && premise_ok(0, d.index + 1, &Term::Pred((**p).clone()))
        }
        (NotFreeRule::Comprehension, Term::Expr(Expr::Cmp(e, p))) => {
            d.premises.len() == 2
                && premise_ok(0, d.index, &Term::Expr((**e).clone()))
                && premise_ok(1, d.index + 1, &Term::Pred((**p).clone()))
        }
        (NotFreeRule::Congruent, t) => {
            let binds = matches!(t, Term::Pred(Pred::Forall(_)) | Term::Expr(Expr::Cmp(..)));
            let children = t.children();
            !binds
                && !children.is_empty()
                && d.premises.len() == children.len()
                && children.iter().enumerate().all(|(k, c)| premise_ok(k, d.index, c))
        }
        _ => false,
    }
}

/// `i ∖ t` holds iff a derivation exists and checks.
pub fn not_free_spec(i: u32, t: &Term) -> bool {
    derive_not_free(i, t).is_some_and(|d| verify_not_free(&d))
}

/// Injective textual encoding used as an independent equality witness.
pub fn encoding(t: &Term) -> String {
    t.to_string()
}

pub fn member_spec(p: &Pred, hyps: &[Pred]) -> bool {
    let key = encoding(&p.clone().into());
    hyps.iter().any(|h| encoding(&h.clone().into()) == key)
}

pub fn included_spec(small: &[Pred], large: &[Pred]) -> bool {
    small.iter().all(|p| member_spec(p, large))
}

/// Replaces `#k` by `p`, applying `lift` once per enclosing binder unless
/// `capture` is set.
pub fn replace_pred_var(k: &PredName, p: &Pred, t: &Term, lift: LiftFn, capture: bool) -> Term {
    let put = |depth: u32| {
        let mut out = Term::Pred(p.clone());
        if !capture {
            for _ in 0..depth {
                out = lift(&out, 0);
            }
        }
        out
    };
    fn walk(t: &Term, depth: u32, k: &PredName, put: &dyn Fn(u32) -> Term) -> Term {
        let pred = |p: &Pred, d| match walk(&Term::Pred(p.clone()), d, k, put) {
            Term::Pred(p) => p,
            Term::Expr(_) => unreachable!("sort preserving"),
        };
        let expr = |e: &Expr, d| match walk(&Term::Expr(e.clone()), d, k, put) {
            Term::Expr(e) => e,
            Term::Pred(_) => unreachable!("sort preserving"),
        };
        match t {
            Term::Pred(p) => Term::Pred(match p {
                Pred::Var(n) if n == k => return put(depth),
                Pred::Var(_) => p.clone(),
                Pred::And(a, b) => Pred::and(pred(a, depth), pred(b, depth)),
                Pred::Implies(a, b) => Pred::implies(pred(a, depth), pred(b, depth)),
                Pred::Not(a) => Pred::not(pred(a, depth)),
                Pred::Forall(a) => Pred::forall(pred(a, depth + 1)),
                Pred::Eq(a, b) => Pred::eq(expr(a, depth), expr(b, depth)),
                Pred::In(a, b) => Pred::member(expr(a, depth), expr(b, depth)),
            }),
            Term::Expr(e) => Term::Expr(match e {
                Expr::Var(_) | Expr::Big | Expr::Elem(_) => e.clone(),
                Expr::MapsTo(a, b) => Expr::maps_to(expr(a, depth), expr(b, depth)),
                Expr::Prod(a, b) => Expr::prod(expr(a, depth), expr(b, depth)),
                Expr::Choice(a) => Expr::choice(expr(a, depth)),
                Expr::Pow(a) => Expr::pow(expr(a, depth)),
                Expr::Cmp(a, q) => Expr::cmp(expr(a, depth), pred(q, depth + 1)),
            }),
        }
    }
    walk(t, 0, k, &put)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivations_follow_the_rules() {
        let t: Term = Pred::forall(Pred::member(Expr::var(1), Expr::var(3))).into();
        let d = derive_not_free(1, &t).unwrap();
        assert!(verify_not_free(&d));
        assert_eq!(d.rule, NotFreeRule::Forall);
        assert!(derive_not_free(2, &t).is_none());
        let mut forged = d.clone();
        forged.index = 2;
        assert!(!verify_not_free(&forged));
    }

    #[test]
    fn replacement_lifts_or_captures() {
        let k = PredName::new("k");
        let p = Pred::member(Expr::var(1), Expr::Big);
        let t: Term = Pred::forall(Pred::var("k")).into();
        let lifted = replace_pred_var(&k, &p, &t, super::super::correct_lift, false);
        assert_eq!(lifted, Pred::forall(Pred::member(Expr::var(2), Expr::Big)).into());
        let grafted = replace_pred_var(&k, &p, &t, super::super::correct_lift, true);
        assert_eq!(grafted, Pred::forall(p).into());
    }
}
