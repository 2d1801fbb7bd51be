//! Derived rules.
//!
//! Each entry is a fixed recipe of [`apply_rule`] calls. The recipe is run
//! in full every time the rule is used, so a derived rule adds no trusted
//! code; only the resulting proof tree is compacted into a single node.

use crate::binder::{bind_forall, member, not_free, not_free_hyps, open, subst, HypList};
use crate::term::{Expr, Index, Pred};

use super::rules::{apply_rule, Rule};
use super::{expect_premises, mismatch, violated, KernelError, Node, Theorem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Derived {
    /// `p ⊢ p`
    Identity { goal: Pred },
    /// `g ⊢ p → h ⊢ q → h ⊆ g, p → g ⊢ q`
    Cut,
    /// `g ⊢ p ⇒ q → g ⊢ p → g ⊢ q`
    ModusPonens,
    /// `i1 ∖ g → i1 ∖ p → g ⊢ <i2 := i1> p → g ⊢ ∀(i2·p)`
    AlphaForallIntro { fresh: Index, index: Index, body: Pred },
    /// `i ∖ g → i ∖ ∀p → g ⊢ open(i, p) → g ⊢ ∀p`, with `p` in internal form
    InternalForallIntro { index: Index, body: Pred },
    /// `g ⊢ p → g ⊢ p or right`
    OrIntroL { right: Pred },
    /// `g ⊢ q → g ⊢ left or q`
    OrIntroR { left: Pred },
    /// `g ⊢ p ⇔ q → g ⊢ p → g ⊢ q`
    IffMp,
    /// `g ⊢ p ⇔ q → g ⊢ q → g ⊢ p`
    IffMpRev,
    /// `g ⊢ p ⇔ p`
    IffRefl { hyps: HypList, pred: Pred },
    /// `g ⊢ p ⇔ q → g ⊢ q ⇔ p`
    IffSym,
    /// `g ⊢ p ⇔ q → g ⊢ q ⇔ r → g ⊢ p ⇔ r`
    IffTrans,
}

impl Derived {
    pub fn name(&self) -> &'static str {
        match self {
            Derived::Identity { .. } => "Identity",
            Derived::Cut => "Cut",
            Derived::ModusPonens => "ModusPonens",
            Derived::AlphaForallIntro { .. } => "AlphaForallIntro",
            Derived::InternalForallIntro { .. } => "InternalForallIntro",
            Derived::OrIntroL { .. } => "OrIntroL",
            Derived::OrIntroR { .. } => "OrIntroR",
            Derived::IffMp => "IffMp",
            Derived::IffMpRev => "IffMpRev",
            Derived::IffRefl { .. } => "IffRefl",
            Derived::IffSym => "IffSym",
            Derived::IffTrans => "IffTrans",
        }
    }
}

fn hyp(hyps: HypList, goal: Pred) -> Result<Theorem, KernelError> {
    apply_rule(&Rule::Hyp { hyps, goal }, &[])
}

fn weaken(t: Theorem, hyps: HypList) -> Result<Theorem, KernelError> {
    apply_rule(&Rule::Weaken { hyps }, &[t])
}

fn with(hyps: &[Pred], extra: &[Pred]) -> HypList {
    hyps.iter().chain(extra).cloned().collect()
}

fn cut(left: &Theorem, right: &Theorem) -> Result<Theorem, KernelError> {
    let g = left.hyps();
    let p = left.goal().clone();
    let q = right.goal().clone();
    if !right.hyps().iter().all(|h| h == &p || member(h, g)) {
        return Err(violated("Cut", "second premise uses hypotheses outside the first premise and its goal"));
    }
    let not_q = Pred::not(q.clone());
    // g, ¬q, p ⊢ q  and  g, ¬q, p ⊢ ¬q  give  g, ¬q ⊢ ¬p
    let inner = with(g, &[not_q.clone(), p]);
    let q_thm = weaken(right.clone(), inner.clone())?;
    let not_q_thm = hyp(inner, not_q.clone())?;
    let not_p = apply_rule(&Rule::NotPos, &[q_thm, not_q_thm])?;
    // g, ¬q ⊢ p  and  g, ¬q ⊢ ¬p  give  g ⊢ q
    let p_thm = weaken(left.clone(), with(g, &[not_q]))?;
    apply_rule(&Rule::NotNeg, &[p_thm, not_p])
}

fn modus_ponens(imp: &Theorem, ante: &Theorem) -> Result<Theorem, KernelError> {
    if !matches!(imp.goal(), Pred::Implies(..)) {
        return Err(mismatch("ModusPonens", "first premise is not an implication"));
    }
    let opened = apply_rule(&Rule::ImpElim, std::slice::from_ref(imp))?;
    cut(ante, &opened)
}

fn imp_trans(pq: Theorem, qr: Theorem) -> Result<Theorem, KernelError> {
    let (Pred::Implies(p, _), Pred::Implies(..)) = (pq.goal().clone(), qr.goal()) else {
        return Err(mismatch("IffTrans", "expected implications"));
    };
    let g = pq.hyps().to_vec();
    let gp = with(&g, &[(*p).clone()]);
    let q_under_p = apply_rule(&Rule::ImpElim, &[pq])?;
    let r_under_pq = apply_rule(&Rule::ImpElim, &[weaken(qr, gp)?])?;
    let r = cut(&q_under_p, &r_under_pq)?;
    apply_rule(&Rule::ImpIntro, &[r])
}

fn iff_parts(rule: &'static str, t: &Theorem) -> Result<(Theorem, Theorem), KernelError> {
    if t.goal().as_iff().is_none() {
        return Err(mismatch(rule, "premise is not an equivalence"));
    }
    Ok((
        apply_rule(&Rule::AndElimL, std::slice::from_ref(t))?,
        apply_rule(&Rule::AndElimR, std::slice::from_ref(t))?,
    ))
}

/// Runs the recipe of a derived rule.
fn replay(d: &Derived, premises: &[Theorem]) -> Result<Theorem, KernelError> {
    let name = d.name();
    match d {
        Derived::Identity { goal } => {
            expect_premises(name, premises, 0)?;
            hyp(vec![goal.clone()], goal.clone())
        }
        Derived::Cut => {
            expect_premises(name, premises, 2)?;
            cut(&premises[0], &premises[1])
        }
        Derived::ModusPonens => {
            expect_premises(name, premises, 2)?;
            modus_ponens(&premises[0], &premises[1])
        }
        Derived::AlphaForallIntro { fresh, index, body } => {
            expect_premises(name, premises, 1)?;
            if !not_free_hyps(*fresh, premises[0].hyps()) {
                return Err(violated(name, format!("index {fresh} is free in the hypotheses")));
            }
            if !not_free(*fresh, body) {
                return Err(violated(name, format!("index {fresh} is free in the body")));
            }
            if premises[0].goal() != &subst(*index, &Expr::Var(*fresh), body) {
                return Err(mismatch(name, "premise is not the renamed body"));
            }
            let t = apply_rule(&Rule::ForallIntro { index: *fresh }, premises)?;
            if t.goal() != &bind_forall(*index, body) {
                return Err(mismatch(name, "renamed quantification differs from the original"));
            }
            Ok(t)
        }
        Derived::InternalForallIntro { index, body } => {
            expect_premises(name, premises, 1)?;
            let closed = Pred::forall(body.clone());
            if !not_free(*index, &closed) {
                return Err(violated(name, format!("index {index} is free in the quantification")));
            }
            if premises[0].goal() != &open(&Expr::Var(*index), body) {
                return Err(mismatch(name, "premise is not the body opened at the index"));
            }
            let t = apply_rule(&Rule::ForallIntro { index: *index }, premises)?;
            if t.goal() != &closed {
                return Err(mismatch(name, "rebinding does not restore the body"));
            }
            Ok(t)
        }
        Derived::OrIntroL { right } => {
            expect_premises(name, premises, 1)?;
            let g = premises[0].hyps();
            let not_p = Pred::not(premises[0].goal().clone());
            let not_q = Pred::not(right.clone());
            let inner = with(g, &[not_p.clone(), not_q]);
            let p_thm = weaken(premises[0].clone(), inner.clone())?;
            let not_p_thm = hyp(inner, not_p)?;
            let q = apply_rule(&Rule::NotNeg, &[p_thm, not_p_thm])?;
            apply_rule(&Rule::ImpIntro, &[q])
        }
        Derived::OrIntroR { left } => {
            expect_premises(name, premises, 1)?;
            let g = with(premises[0].hyps(), &[Pred::not(left.clone())]);
            let q = weaken(premises[0].clone(), g)?;
            apply_rule(&Rule::ImpIntro, &[q])
        }
        Derived::IffMp | Derived::IffMpRev => {
            expect_premises(name, premises, 2)?;
            let (fwd, bwd) = iff_parts(name, &premises[0])?;
            let imp = if matches!(d, Derived::IffMp) { fwd } else { bwd };
            modus_ponens(&imp, &premises[1])
        }
        Derived::IffRefl { hyps, pred } => {
            expect_premises(name, premises, 0)?;
            let p = hyp(with(hyps, std::slice::from_ref(pred)), pred.clone())?;
            let imp = apply_rule(&Rule::ImpIntro, &[p])?;
            apply_rule(&Rule::AndIntro, &[imp.clone(), imp])
        }
        Derived::IffSym => {
            expect_premises(name, premises, 1)?;
            let (fwd, bwd) = iff_parts(name, &premises[0])?;
            apply_rule(&Rule::AndIntro, &[bwd, fwd])
        }
        Derived::IffTrans => {
            expect_premises(name, premises, 2)?;
            if premises[0].hyps() != premises[1].hyps() {
                return Err(mismatch(name, "premises have different hypotheses"));
            }
            let (pq, qp) = iff_parts(name, &premises[0])?;
            let (qr, rq) = iff_parts(name, &premises[1])?;
            let (Pred::Implies(_, q1), Pred::Implies(q2, _)) = (pq.goal(), qr.goal()) else {
                unreachable!("equivalences split into implications");
            };
            if q1 != q2 {
                return Err(mismatch(name, "middle formulas differ"));
            }
            let pr = imp_trans(pq, qr)?;
            let rp = imp_trans(rq, qp)?;
            apply_rule(&Rule::AndIntro, &[pr, rp])
        }
    }
}

/// Applies a derived rule, recording it as one node over `premises`.
pub fn derive(d: &Derived, premises: &[Theorem]) -> Result<Theorem, KernelError> {
    let t = replay(d, premises)?;
    Ok(Theorem::new(t.into_sequent(), Node::Derived(d.clone()), premises))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, proof_size};

    fn p(name: &str) -> Pred {
        Pred::var(name)
    }

    fn hyp_thm(hyps: &[Pred], goal: &Pred) -> Theorem {
        hyp(hyps.to_vec(), goal.clone()).unwrap()
    }

    #[test]
    fn identity() {
        let t = derive(&Derived::Identity { goal: p("a") }, &[]).unwrap();
        assert_eq!(t.hyps(), &[p("a")][..]);
        assert_eq!(t.goal(), &p("a"));
    }

    #[test]
    fn cut_discharges_the_lemma() {
        let (a, b) = (p("a"), p("b"));
        let g = vec![a.clone(), Pred::implies(a.clone(), b.clone())];
        let lemma = hyp_thm(&g, &a);
        let mut gp = g.clone();
        gp.push(a.clone());
        let use_it = apply_rule(&Rule::ImpElim, &[hyp_thm(&g, &g[1])]).unwrap();
        assert_eq!(use_it.hyps(), &gp[..]);
        let t = derive(&Derived::Cut, &[lemma, use_it]).unwrap();
        assert_eq!(t.hyps(), &g[..]);
        assert_eq!(t.goal(), &b);
        // compact node: Cut over its two premises
        assert_eq!(proof_size(t.proof()), 4);
        check(t.proof()).unwrap();
    }

    #[test]
    fn cut_rejects_foreign_hypotheses() {
        let (a, b) = (p("a"), p("b"));
        let lemma = hyp_thm(std::slice::from_ref(&a), &a);
        let other = hyp_thm(std::slice::from_ref(&b), &b);
        assert!(derive(&Derived::Cut, &[lemma, other]).is_err());
    }

    #[test]
    fn or_intro_both_sides() {
        let (a, b) = (p("a"), p("b"));
        let ta = hyp_thm(std::slice::from_ref(&a), &a);
        let l = derive(&Derived::OrIntroL { right: b.clone() }, std::slice::from_ref(&ta)).unwrap();
        assert_eq!(l.goal(), &Pred::or(a.clone(), b.clone()));
        let r = derive(&Derived::OrIntroR { left: b.clone() }, &[ta]).unwrap();
        assert_eq!(r.goal(), &Pred::or(b, a));
    }

    #[test]
    fn alpha_forall_intro() {
        // x = x proved for fresh 3, generalised as forall over index 1
        let body = Pred::eq(Expr::var(1), Expr::var(1));
        let refl = apply_rule(&Rule::EqRefl { hyps: vec![], expr: Expr::var(3) }, &[]).unwrap();
        let d = Derived::AlphaForallIntro { fresh: Index::of(3), index: Index::ONE, body: body.clone() };
        let t = derive(&d, std::slice::from_ref(&refl)).unwrap();
        assert_eq!(t.goal(), &bind_forall(Index::ONE, &body));

        // fresh index occurring in the hypotheses is refused
        let h = vec![Pred::member(Expr::var(3), Expr::Big)];
        let weak = weaken(refl, h).unwrap();
        let err = derive(&d, &[weak]).unwrap_err();
        assert!(matches!(err, KernelError::SideConditionViolated { .. }));
    }

    #[test]
    fn internal_forall_intro() {
        let body = Pred::eq(Expr::var(1), Expr::var(1));
        let refl = apply_rule(&Rule::EqRefl { hyps: vec![], expr: Expr::var(1) }, &[]).unwrap();
        let d = Derived::InternalForallIntro { index: Index::ONE, body: body.clone() };
        let t = derive(&d, &[refl]).unwrap();
        assert_eq!(t.goal(), &Pred::forall(body));
    }

    #[test]
    fn iff_toolkit() {
        let (a, b, c) = (p("a"), p("b"), p("c"));
        let g = vec![Pred::iff(a.clone(), b.clone()), Pred::iff(b.clone(), c.clone()), a.clone()];
        let ab = hyp_thm(&g, &g[0]);
        let bc = hyp_thm(&g, &g[1]);
        let ac = derive(&Derived::IffTrans, &[ab.clone(), bc]).unwrap();
        assert_eq!(ac.goal(), &Pred::iff(a.clone(), c.clone()));
        let ca = derive(&Derived::IffSym, std::slice::from_ref(&ac)).unwrap();
        assert_eq!(ca.goal(), &Pred::iff(c.clone(), a.clone()));
        let got_c = derive(&Derived::IffMp, &[ac, hyp_thm(&g, &a)]).unwrap();
        assert_eq!(got_c.goal(), &c);
        let back = derive(&Derived::IffMpRev, &[ab, derive(&Derived::IffMp, &[hyp_thm(&g, &g[0]), hyp_thm(&g, &a)]).unwrap()]).unwrap();
        assert_eq!(back.goal(), &a);
        let refl = derive(&Derived::IffRefl { hyps: g.clone(), pred: c.clone() }, &[]).unwrap();
        assert_eq!(refl.goal(), &Pred::iff(c.clone(), c));
        check(refl.proof()).unwrap();
    }
}
