//! Congruence of equivalence under predicate-variable substitution and
//! grafting.
//!
//! These are proved by induction on the target term, which has no finite
//! first-order replay, so they are trusted steps of their own.

use crate::binder::{graft_pred, subst_pred, HypList};
use crate::term::{Pred, PredName, Sort, Term};

use super::{expect_premises, mismatch, KernelError, Node, Sequent, Theorem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CongruenceKind {
    /// `g ⊢ p1 ⇔ p2 → g ⊢ <k:≡p1>q ⇔ <k:≡p2>q`
    SubstEquiv,
    /// `g ⊢ p1 ⇔ p2 → g ⊢ <k:≡p1>e = <k:≡p2>e`
    SubstEq,
    /// `⊢ p1 ⇔ p2 → g ⊢ <k◁p1>q ⇔ <k◁p2>q`
    GraftEquiv,
    /// `⊢ p1 ⇔ p2 → g ⊢ <k◁p1>e = <k◁p2>e`
    GraftEq,
}

impl CongruenceKind {
    pub const ALL: [CongruenceKind; 4] = [
        CongruenceKind::SubstEquiv,
        CongruenceKind::SubstEq,
        CongruenceKind::GraftEquiv,
        CongruenceKind::GraftEq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CongruenceKind::SubstEquiv => "SubstEquiv",
            CongruenceKind::SubstEq => "SubstEq",
            CongruenceKind::GraftEquiv => "GraftEquiv",
            CongruenceKind::GraftEq => "GraftEq",
        }
    }

    pub fn from_name(name: &str) -> Option<CongruenceKind> {
        CongruenceKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn grafts(self) -> bool {
        matches!(self, CongruenceKind::GraftEquiv | CongruenceKind::GraftEq)
    }

    pub fn target_sort(self) -> Sort {
        match self {
            CongruenceKind::SubstEquiv | CongruenceKind::GraftEquiv => Sort::Predicate,
            CongruenceKind::SubstEq | CongruenceKind::GraftEq => Sort::Expression,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Congruence {
    pub kind: CongruenceKind,
    pub name: PredName,
    pub target: Term,
    /// Hypotheses of the conclusion. For the substitution kinds they must
    /// equal the premise's.
    pub hyps: HypList,
}

pub fn congruence(c: &Congruence, premises: &[Theorem]) -> Result<Theorem, KernelError> {
    let rule = c.kind.name();
    expect_premises(rule, premises, 1)?;
    let premise = &premises[0];
    let Some((p1, p2)) = premise.goal().as_iff() else {
        return Err(mismatch(rule, "premise is not an equivalence"));
    };
    if c.kind.grafts() {
        if !premise.hyps().is_empty() {
            return Err(mismatch(rule, "grafting needs a premise without hypotheses"));
        }
    } else if premise.hyps() != c.hyps.as_slice() {
        return Err(mismatch(rule, "premise hypotheses differ from the conclusion's"));
    }
    let found = c.target.sort();
    if found != c.kind.target_sort() {
        return Err(KernelError::SortError { rule, expected: c.kind.target_sort(), found });
    }
    let put = |p: &Pred| {
        if c.kind.grafts() {
            graft_pred(&c.name, p, &c.target)
        } else {
            subst_pred(&c.name, p, &c.target)
        }
    };
    let goal = match (put(p1), put(p2)) {
        (Term::Pred(a), Term::Pred(b)) => Pred::iff(a, b),
        (Term::Expr(a), Term::Expr(b)) => Pred::eq(a, b),
        _ => unreachable!("substitution preserves sorts"),
    };
    Ok(Theorem::new(
        Sequent::new(c.hyps.clone(), goal),
        Node::Congruence(c.clone()),
        premises,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{apply_rule, derive, Derived, Rule};
    use crate::term::Expr;

    fn k() -> PredName {
        PredName::new("k")
    }

    /// `p1 ⇔ p2 ⊢ p1 ⇔ p2`
    fn iff_thm(a: Pred, b: Pred) -> Theorem {
        let goal = Pred::iff(a, b);
        apply_rule(&Rule::Hyp { hyps: vec![goal.clone()], goal }, &[]).unwrap()
    }

    #[test]
    fn graft_reflexivity_under_binder() {
        let atom = Pred::member(Expr::var(1), Expr::Big);
        let nn = Pred::not(Pred::not(atom));
        let prem = derive(&Derived::IffRefl { hyps: vec![], pred: nn.clone() }, &[]).unwrap();
        let c = Congruence {
            kind: CongruenceKind::GraftEquiv,
            name: k(),
            target: Pred::forall(Pred::var("k")).into(),
            hyps: vec![Pred::var("h")],
        };
        let t = congruence(&c, &[prem]).unwrap();
        assert_eq!(t.goal(), &Pred::iff(Pred::forall(nn.clone()), Pred::forall(nn)));
        assert_eq!(t.hyps(), &[Pred::var("h")][..]);
    }

    #[test]
    fn subst_lifts_and_graft_captures() {
        let atom = Pred::member(Expr::var(1), Expr::Big);
        let other = Pred::var("q");
        let prem = iff_thm(atom.clone(), other.clone());
        let hyps = prem.hyps().to_vec();
        let c = Congruence {
            kind: CongruenceKind::SubstEquiv,
            name: k(),
            target: Pred::forall(Pred::var("k")).into(),
            hyps,
        };
        let t = congruence(&c, std::slice::from_ref(&prem)).unwrap();
        let lifted = Pred::member(Expr::var(2), Expr::Big);
        assert_eq!(t.goal(), &Pred::iff(Pred::forall(lifted), Pred::forall(other)));

        let graft = Congruence { kind: CongruenceKind::GraftEquiv, hyps: vec![], ..c };
        assert!(matches!(congruence(&graft, &[prem]), Err(KernelError::PremiseMismatch { .. })));
    }

    #[test]
    fn sort_is_checked() {
        let prem = derive(&Derived::IffRefl { hyps: vec![], pred: Pred::var("a") }, &[]).unwrap();
        let c = Congruence {
            kind: CongruenceKind::SubstEq,
            name: k(),
            target: Pred::var("k").into(),
            hyps: vec![],
        };
        assert!(matches!(congruence(&c, std::slice::from_ref(&prem)), Err(KernelError::SortError { .. })));
        let e = Congruence {
            target: Expr::cmp(Expr::Big, Pred::var("k")).into(),
            ..c
        };
        let t = congruence(&e, &[prem]).unwrap();
        let set = Expr::cmp(Expr::Big, Pred::var("a"));
        assert_eq!(t.goal(), &Pred::eq(set.clone(), set));
    }

    #[test]
    fn premise_must_be_an_equivalence() {
        let refl = apply_rule(&Rule::EqRefl { hyps: vec![], expr: Expr::Big }, &[]).unwrap();
        let c = Congruence {
            kind: CongruenceKind::GraftEquiv,
            name: k(),
            target: Pred::var("k").into(),
            hyps: vec![],
        };
        assert!(matches!(congruence(&c, &[refl]), Err(KernelError::PremiseMismatch { .. })));
    }
}
