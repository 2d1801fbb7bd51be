//! The primitive inference rules.
//!
//! Hypotheses added by a rule (implication elimination, the negation rules)
//! are appended at the end of the list, so the premise `g, p ⊢ q` is a
//! sequent whose hypothesis list is `g` followed by `p`.

use crate::binder::{
    bind_exists, bind_forall, included, inst_cmp, inst_forall, member, not_free, not_free_hyps,
    subst, HypList,
};
use crate::term::{BigName, Expr, Index, Pred};

use super::{expect_premises, mismatch, violated, KernelError, Node, Sequent, Theorem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum RuleTag {
    Hyp,
    Weaken,
    ImpElim,
    ImpIntro,
    AndIntro,
    AndElimL,
    AndElimR,
    NotPos,
    NotNeg,
    EqRefl,
    ForallIntro,
    ForallElim,
    CmpAxiom,
    Leibniz,
    ChoiceAxiom,
    PowAxiom,
    ExtIntro,
    BigElem,
    BigDistinct,
    PairInjL,
    PairInjR,
    ProdChar,
}

impl RuleTag {
    pub const ALL: [RuleTag; 22] = [
        RuleTag::Hyp,
        RuleTag::Weaken,
        RuleTag::ImpElim,
        RuleTag::ImpIntro,
        RuleTag::AndIntro,
        RuleTag::AndElimL,
        RuleTag::AndElimR,
        RuleTag::NotPos,
        RuleTag::NotNeg,
        RuleTag::EqRefl,
        RuleTag::ForallIntro,
        RuleTag::ForallElim,
        RuleTag::CmpAxiom,
        RuleTag::Leibniz,
        RuleTag::ChoiceAxiom,
        RuleTag::PowAxiom,
        RuleTag::ExtIntro,
        RuleTag::BigElem,
        RuleTag::BigDistinct,
        RuleTag::PairInjL,
        RuleTag::PairInjR,
        RuleTag::ProdChar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Hyp => "Hyp",
            RuleTag::Weaken => "Weaken",
            RuleTag::ImpElim => "ImpElim",
            RuleTag::ImpIntro => "ImpIntro",
            RuleTag::AndIntro => "AndIntro",
            RuleTag::AndElimL => "AndElimL",
            RuleTag::AndElimR => "AndElimR",
            RuleTag::NotPos => "NotPos",
            RuleTag::NotNeg => "NotNeg",
            RuleTag::EqRefl => "EqRefl",
            RuleTag::ForallIntro => "ForallIntro",
            RuleTag::ForallElim => "ForallElim",
            RuleTag::CmpAxiom => "CmpAxiom",
            RuleTag::Leibniz => "Leibniz",
            RuleTag::ChoiceAxiom => "ChoiceAxiom",
            RuleTag::PowAxiom => "PowAxiom",
            RuleTag::ExtIntro => "ExtIntro",
            RuleTag::BigElem => "BigElem",
            RuleTag::BigDistinct => "BigDistinct",
            RuleTag::PairInjL => "PairInjL",
            RuleTag::PairInjR => "PairInjR",
            RuleTag::ProdChar => "ProdChar",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleTag> {
        RuleTag::ALL.into_iter().find(|t| t.name() == name)
    }
}

/// A primitive rule instance together with the arguments the conclusion
/// needs beyond what the premises determine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rule {
    /// `goal ∈ hyps → hyps ⊢ goal`
    Hyp { hyps: HypList, goal: Pred },
    /// `g1 ⊢ p → g1 ⊆ hyps → hyps ⊢ p`
    Weaken { hyps: HypList },
    /// `g ⊢ p1 ⇒ p2 → g, p1 ⊢ p2`
    ImpElim,
    /// `g, p1 ⊢ p2 → g ⊢ p1 ⇒ p2`
    ImpIntro,
    /// `g ⊢ p1 → g ⊢ p2 → g ⊢ p1 ∧ p2`
    AndIntro,
    AndElimL,
    AndElimR,
    /// `g, p2 ⊢ p1 → g, p2 ⊢ ¬p1 → g ⊢ ¬p2`
    NotPos,
    /// `g, ¬p2 ⊢ p1 → g, ¬p2 ⊢ ¬p1 → g ⊢ p2`
    NotNeg,
    /// `g ⊢ e = e`
    EqRefl { hyps: HypList, expr: Expr },
    /// `i ∖ g → g ⊢ p → g ⊢ ∀(i·p)`
    ForallIntro { index: Index },
    /// `g ⊢ ∀(i·p) → g ⊢ <i := witness> p`
    ForallElim { witness: Expr },
    /// `⊢ member ∈ {i : e2 | p} ⇔ member ∈ e2 ∧ <i := member> p`
    CmpAxiom { member: Expr, set: Expr },
    /// `g ⊢ e1 = e2 → g ⊢ <i := e1> body → g ⊢ <i := e2> body`
    Leibniz { index: Index, body: Pred },
    /// `i ∖ set → g ⊢ ∃(i·i ∈ set) ⇒ choice(set) ∈ set`
    ChoiceAxiom { hyps: HypList, index: Index, set: Expr },
    /// `i ∖ left → i ∖ right → g ⊢ left ∈ pow(right) ⇔ ∀(i·i ∈ left ⇒ i ∈ right)`
    PowAxiom { hyps: HypList, index: Index, left: Expr, right: Expr },
    /// `g ⊢ e1 ∈ pow(e2) → g ⊢ e2 ∈ pow(e1) → g ⊢ e1 = e2`
    ExtIntro,
    /// `g ⊢ ω_name ∈ BIG`
    BigElem { hyps: HypList, name: BigName },
    /// `left ≠ right → g ⊢ ¬(ω_left = ω_right)`
    BigDistinct { hyps: HypList, left: BigName, right: BigName },
    /// `g ⊢ e1 ↦ e2 = e3 ↦ e4 → g ⊢ e1 = e3`
    PairInjL,
    /// `g ⊢ e1 ↦ e2 = e3 ↦ e4 → g ⊢ e2 = e4`
    PairInjR,
    /// `i1 ∖ e ∈ l × r → i2 ∖ e ∈ l × r → i1 ≠ i2 →
    ///  g ⊢ ∃(i1·i1 ∈ l ∧ ∃(i2·i2 ∈ r ∧ e = i1 ↦ i2)) ⇔ e ∈ l × r`
    ProdChar {
        hyps: HypList,
        first: Index,
        second: Index,
        elem: Expr,
        left: Expr,
        right: Expr,
    },
}

impl Rule {
    pub fn tag(&self) -> RuleTag {
        match self {
            Rule::Hyp { .. } => RuleTag::Hyp,
            Rule::Weaken { .. } => RuleTag::Weaken,
            Rule::ImpElim => RuleTag::ImpElim,
            Rule::ImpIntro => RuleTag::ImpIntro,
            Rule::AndIntro => RuleTag::AndIntro,
            Rule::AndElimL => RuleTag::AndElimL,
            Rule::AndElimR => RuleTag::AndElimR,
            Rule::NotPos => RuleTag::NotPos,
            Rule::NotNeg => RuleTag::NotNeg,
            Rule::EqRefl { .. } => RuleTag::EqRefl,
            Rule::ForallIntro { .. } => RuleTag::ForallIntro,
            Rule::ForallElim { .. } => RuleTag::ForallElim,
            Rule::CmpAxiom { .. } => RuleTag::CmpAxiom,
            Rule::Leibniz { .. } => RuleTag::Leibniz,
            Rule::ChoiceAxiom { .. } => RuleTag::ChoiceAxiom,
            Rule::PowAxiom { .. } => RuleTag::PowAxiom,
            Rule::ExtIntro => RuleTag::ExtIntro,
            Rule::BigElem { .. } => RuleTag::BigElem,
            Rule::BigDistinct { .. } => RuleTag::BigDistinct,
            Rule::PairInjL => RuleTag::PairInjL,
            Rule::PairInjR => RuleTag::PairInjR,
            Rule::ProdChar { .. } => RuleTag::ProdChar,
        }
    }
}

/// Splits `g, p` into `(g, p)`.
fn split_last(rule: &'static str, hyps: &[Pred]) -> Result<(HypList, Pred), KernelError> {
    match hyps.split_last() {
        Some((last, rest)) => Ok((rest.to_vec(), last.clone())),
        None => Err(mismatch(rule, "premise has no hypothesis to discharge")),
    }
}

fn same_hyps(rule: &'static str, a: &Theorem, b: &Theorem) -> Result<(), KernelError> {
    if a.hyps() == b.hyps() {
        Ok(())
    } else {
        Err(mismatch(rule, "premises have different hypotheses"))
    }
}

pub fn apply_rule(rule: &Rule, premises: &[Theorem]) -> Result<Theorem, KernelError> {
    let name = rule.tag().name();
    let conclude = |hyps: HypList, goal: Pred| {
        Ok(Theorem::new(Sequent::new(hyps, goal), Node::Rule(rule.clone()), premises))
    };
    match rule {
        Rule::Hyp { hyps, goal } => {
            expect_premises(name, premises, 0)?;
            if !member(goal, hyps) {
                return Err(violated(name, "goal is not among the hypotheses"));
            }
            conclude(hyps.clone(), goal.clone())
        }
        Rule::Weaken { hyps } => {
            expect_premises(name, premises, 1)?;
            if !included(premises[0].hyps(), hyps) {
                return Err(violated(name, "premise hypotheses are not included in the new list"));
            }
            conclude(hyps.clone(), premises[0].goal().clone())
        }
        Rule::ImpElim => {
            expect_premises(name, premises, 1)?;
            let Pred::Implies(p1, p2) = premises[0].goal() else {
                return Err(mismatch(name, "premise is not an implication"));
            };
            let mut hyps = premises[0].hyps().to_vec();
            hyps.push((**p1).clone());
            conclude(hyps, (**p2).clone())
        }
        Rule::ImpIntro => {
            expect_premises(name, premises, 1)?;
            let (hyps, p1) = split_last(name, premises[0].hyps())?;
            conclude(hyps, Pred::implies(p1, premises[0].goal().clone()))
        }
        Rule::AndIntro => {
            expect_premises(name, premises, 2)?;
            same_hyps(name, &premises[0], &premises[1])?;
            let goal = Pred::and(premises[0].goal().clone(), premises[1].goal().clone());
            conclude(premises[0].hyps().to_vec(), goal)
        }
        Rule::AndElimL | Rule::AndElimR => {
            expect_premises(name, premises, 1)?;
            let Pred::And(p1, p2) = premises[0].goal() else {
                return Err(mismatch(name, "premise is not a conjunction"));
            };
            let kept = if matches!(rule, Rule::AndElimL) { p1 } else { p2 };
            conclude(premises[0].hyps().to_vec(), (**kept).clone())
        }
        Rule::NotPos => {
            expect_premises(name, premises, 2)?;
            same_hyps(name, &premises[0], &premises[1])?;
            let (hyps, p2) = split_last(name, premises[0].hyps())?;
            expect_contradiction(name, premises[0].goal(), premises[1].goal())?;
            conclude(hyps, Pred::not(p2))
        }
        Rule::NotNeg => {
            expect_premises(name, premises, 2)?;
            same_hyps(name, &premises[0], &premises[1])?;
            let (hyps, last) = split_last(name, premises[0].hyps())?;
            let Pred::Not(p2) = last else {
                return Err(mismatch(name, "last hypothesis is not a negation"));
            };
            expect_contradiction(name, premises[0].goal(), premises[1].goal())?;
            conclude(hyps, (*p2).clone())
        }
        Rule::EqRefl { hyps, expr } => {
            expect_premises(name, premises, 0)?;
            conclude(hyps.clone(), Pred::eq(expr.clone(), expr.clone()))
        }
        Rule::ForallIntro { index } => {
            expect_premises(name, premises, 1)?;
            if !not_free_hyps(*index, premises[0].hyps()) {
                return Err(violated(name, format!("index {index} is free in the hypotheses")));
            }
            conclude(premises[0].hyps().to_vec(), bind_forall(*index, premises[0].goal()))
        }
        Rule::ForallElim { witness } => {
            expect_premises(name, premises, 1)?;
            // <i := e> p is the instantiation of ∀(i·p) for every admissible i and p
            let goal = inst_forall(witness, premises[0].goal())
                .map_err(|_| mismatch(name, "premise is not a universal quantification"))?;
            conclude(premises[0].hyps().to_vec(), goal)
        }
        Rule::CmpAxiom { member: m, set } => {
            expect_premises(name, premises, 0)?;
            let unfolded = inst_cmp(m, set)
                .map_err(|_| mismatch(name, "set argument is not a comprehension"))?;
            let goal = Pred::iff(Pred::member(m.clone(), set.clone()), unfolded);
            conclude(Vec::new(), goal)
        }
        Rule::Leibniz { index, body } => {
            expect_premises(name, premises, 2)?;
            same_hyps(name, &premises[0], &premises[1])?;
            let Pred::Eq(e1, e2) = premises[0].goal() else {
                return Err(mismatch(name, "first premise is not an equality"));
            };
            if premises[1].goal() != &subst(*index, e1, body) {
                return Err(mismatch(
                    name,
                    "second premise is not the body instantiated with the left side",
                ));
            }
            conclude(premises[0].hyps().to_vec(), subst(*index, e2, body))
        }
        Rule::ChoiceAxiom { hyps, index, set } => {
            expect_premises(name, premises, 0)?;
            if !not_free(*index, set) {
                return Err(violated(name, format!("index {index} is free in the set")));
            }
            let nonempty = bind_exists(*index, &Pred::member(Expr::Var(*index), set.clone()));
            let chosen = Pred::member(Expr::choice(set.clone()), set.clone());
            conclude(hyps.clone(), Pred::implies(nonempty, chosen))
        }
        Rule::PowAxiom { hyps, index, left, right } => {
            expect_premises(name, premises, 0)?;
            if !not_free(*index, left) || !not_free(*index, right) {
                return Err(violated(name, format!("index {index} is free in the sets")));
            }
            let x = Expr::Var(*index);
            let subset = bind_forall(
                *index,
                &Pred::implies(
                    Pred::member(x.clone(), left.clone()),
                    Pred::member(x, right.clone()),
                ),
            );
            let goal = Pred::iff(Pred::member(left.clone(), Expr::pow(right.clone())), subset);
            conclude(hyps.clone(), goal)
        }
        Rule::ExtIntro => {
            expect_premises(name, premises, 2)?;
            same_hyps(name, &premises[0], &premises[1])?;
            let (Pred::In(a, pa), Pred::In(b, pb)) = (premises[0].goal(), premises[1].goal())
            else {
                return Err(mismatch(name, "premises are not memberships"));
            };
            let (Expr::Pow(pa), Expr::Pow(pb)) = (&**pa, &**pb) else {
                return Err(mismatch(name, "premises are not memberships in power sets"));
            };
            if pa != b || pb != a {
                return Err(mismatch(name, "premises are not mutual inclusions"));
            }
            conclude(premises[0].hyps().to_vec(), Pred::eq((**a).clone(), (**b).clone()))
        }
        Rule::BigElem { hyps, name: j } => {
            expect_premises(name, premises, 0)?;
            conclude(hyps.clone(), Pred::member(Expr::Elem(j.clone()), Expr::Big))
        }
        Rule::BigDistinct { hyps, left, right } => {
            expect_premises(name, premises, 0)?;
            if left == right {
                return Err(violated(name, format!("element names are both {left}")));
            }
            let goal =
                Pred::not(Pred::eq(Expr::Elem(left.clone()), Expr::Elem(right.clone())));
            conclude(hyps.clone(), goal)
        }
        Rule::PairInjL | Rule::PairInjR => {
            expect_premises(name, premises, 1)?;
            let Pred::Eq(l, r) = premises[0].goal() else {
                return Err(mismatch(name, "premise is not an equality"));
            };
            let (Expr::MapsTo(e1, e2), Expr::MapsTo(e3, e4)) = (&**l, &**r) else {
                return Err(mismatch(name, "premise is not an equality of pairs"));
            };
            let goal = if matches!(rule, Rule::PairInjL) {
                Pred::eq((**e1).clone(), (**e3).clone())
            } else {
                Pred::eq((**e2).clone(), (**e4).clone())
            };
            conclude(premises[0].hyps().to_vec(), goal)
        }
        Rule::ProdChar { hyps, first, second, elem, left, right } => {
            expect_premises(name, premises, 0)?;
            let membership = Pred::member(elem.clone(), Expr::prod(left.clone(), right.clone()));
            if !not_free(*first, &membership) {
                return Err(violated(name, format!("index {first} is free in the membership")));
            }
            if !not_free(*second, &membership) {
                return Err(violated(name, format!("index {second} is free in the membership")));
            }
            if first == second {
                return Err(violated(name, "the two bound indexes coincide"));
            }
            let (x, y) = (Expr::Var(*first), Expr::Var(*second));
            let inner = bind_exists(
                *second,
                &Pred::and(
                    Pred::member(y.clone(), right.clone()),
                    Pred::eq(elem.clone(), Expr::maps_to(x.clone(), y)),
                ),
            );
            let outer = bind_exists(*first, &Pred::and(Pred::member(x, left.clone()), inner));
            conclude(hyps.clone(), Pred::iff(outer, membership))
        }
    }
}

fn expect_contradiction(rule: &'static str, p: &Pred, not_p: &Pred) -> Result<(), KernelError> {
    match not_p {
        Pred::Not(inner) if **inner == *p => Ok(()),
        _ => Err(mismatch(rule, "second premise is not the negation of the first")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Expr {
        Expr::var(i)
    }

    fn hyp(hyps: &[Pred], goal: &Pred) -> Theorem {
        apply_rule(&Rule::Hyp { hyps: hyps.to_vec(), goal: goal.clone() }, &[]).unwrap()
    }

    #[test]
    fn eq_refl_and_and_intro() {
        let g = vec![Pred::var("h")];
        let t = apply_rule(&Rule::EqRefl { hyps: g.clone(), expr: v(1) }, &[]).unwrap();
        assert_eq!(t.sequent(), &Sequent::new(g.clone(), Pred::eq(v(1), v(1))));
        let (p1, p2) = (Pred::var("a"), Pred::var("b"));
        let g2 = vec![p1.clone(), p2.clone()];
        let t = apply_rule(&Rule::AndIntro, &[hyp(&g2, &p1), hyp(&g2, &p2)]).unwrap();
        assert_eq!(t.goal(), &Pred::and(p1, p2));
    }

    #[test]
    fn hyp_requires_membership() {
        let p = Pred::var("p");
        assert_eq!(hyp(std::slice::from_ref(&p), &p).goal(), &p);
        let err = apply_rule(&Rule::Hyp { hyps: vec![], goal: p }, &[]).unwrap_err();
        assert!(matches!(err, KernelError::SideConditionViolated { .. }));
    }

    #[test]
    fn forall_intro_needs_fresh_index() {
        let h = Pred::eq(v(1), v(1));
        let t = hyp(std::slice::from_ref(&h), &h);
        let err = apply_rule(&Rule::ForallIntro { index: Index::of(1) }, std::slice::from_ref(&t)).unwrap_err();
        assert!(matches!(err, KernelError::SideConditionViolated { .. }));
        let ok = apply_rule(&Rule::ForallIntro { index: Index::of(2) }, &[t]).unwrap();
        assert_eq!(ok.goal(), &Pred::forall(Pred::eq(v(2), v(2))));
    }

    #[test]
    fn big_distinct_needs_distinct_names() {
        let j = BigName::new("j");
        let err = apply_rule(
            &Rule::BigDistinct { hyps: vec![], left: j.clone(), right: j.clone() },
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, KernelError::SideConditionViolated { .. }));
    }

    #[test]
    fn imp_elim_appends_antecedent() {
        let (a, b) = (Pred::var("a"), Pred::var("b"));
        let g = vec![Pred::implies(a.clone(), b.clone())];
        let t = apply_rule(&Rule::ImpElim, &[hyp(&g, &g[0])]).unwrap();
        assert_eq!(t.hyps(), &[g[0].clone(), a][..]);
        assert_eq!(t.goal(), &b);
    }

    #[test]
    fn tag_names_round_trip() {
        for tag in RuleTag::ALL {
            assert_eq!(RuleTag::from_name(tag.name()), Some(tag));
        }
        assert_eq!(RuleTag::from_name("Nope"), None);
    }
}
