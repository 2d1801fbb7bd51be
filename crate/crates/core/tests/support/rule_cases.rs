//! One accepted and one rejected instance of every primitive rule. The
//! expected conclusions are written in surface syntax and parsed, so they
//! do not go through the kernel's own term construction.

use bproof_core::kernel::{apply_rule, KernelError, Rule, RuleTag, Sequent, Theorem};
use bproof_core::syntax::{parse_expr, parse_pred, parse_sequent, ScopeTable};
use bproof_core::term::{BigName, Expr, Index, Pred};

pub struct RuleCase {
    pub tag: RuleTag,
    pub accepted: Result<Theorem, KernelError>,
    pub expected: Sequent,
    pub rejected: Result<Theorem, KernelError>,
    /// Whether the rejection must be a side-condition violation rather
    /// than a premise mismatch.
    pub side_condition: bool,
}

impl RuleCase {
    /// `Ok` when the accepted instance concludes the expected sequent and
    /// the rejected one fails the right way.
    pub fn verdict(&self) -> Result<(), String> {
        match &self.accepted {
            Ok(t) if t.sequent() == &self.expected => {}
            Ok(t) => return Err(format!("concluded {} instead of {}", t.sequent(), self.expected)),
            Err(e) => return Err(format!("valid instance rejected: {e}")),
        }
        match &self.rejected {
            Ok(t) => Err(format!("invalid instance accepted: {}", t.sequent())),
            Err(KernelError::SideConditionViolated { .. }) => Ok(()),
            Err(e) if self.side_condition => Err(format!("expected a side-condition violation, got: {e}")),
            Err(_) => Ok(()),
        }
    }
}

struct Names {
    scope: ScopeTable,
}

impl Names {
    fn new() -> Names {
        let mut scope = ScopeTable::new();
        // fixed indexes: x 1, y 2, S 3, T 4, w 5, u 6
        for n in ["x", "y", "S", "T", "w", "u"] {
            scope.intern(n);
        }
        Names { scope }
    }

    fn p(&mut self, text: &str) -> Pred {
        parse_pred(text, &mut self.scope).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    fn e(&mut self, text: &str) -> Expr {
        parse_expr(text, &mut self.scope).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    fn hyps(&mut self, texts: &[&str]) -> Vec<Pred> {
        texts.iter().map(|t| self.p(t)).collect()
    }

    fn seq(&mut self, text: &str) -> Sequent {
        parse_sequent(text, &mut self.scope).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    fn i(&self, name: &str) -> Index {
        self.scope.get(name).expect("interned")
    }

    fn hyp(&mut self, hyps: &[&str], goal: &str) -> Theorem {
        let rule = Rule::Hyp { hyps: self.hyps(hyps), goal: self.p(goal) };
        apply_rule(&rule, &[]).expect("hypothesis")
    }
}

pub fn rule_cases() -> Vec<RuleCase> {
    let mut n = Names::new();
    let mut out = Vec::new();
    let mut case = |tag, accepted, expected, rejected, side_condition| {
        out.push(RuleCase { tag, accepted, expected, rejected, side_condition })
    };

    let rule = Rule::Hyp { hyps: n.hyps(&["x : S", "#p"]), goal: n.p("#p") };
    let bad = Rule::Hyp { hyps: n.hyps(&["x : S", "#p"]), goal: n.p("#q") };
    case(RuleTag::Hyp, apply_rule(&rule, &[]), n.seq("x : S, #p |- #p"), apply_rule(&bad, &[]), true);

    let p = n.hyp(&["#p"], "#p");
    let rule = Rule::Weaken { hyps: n.hyps(&["#q", "#p"]) };
    let bad = Rule::Weaken { hyps: n.hyps(&["#q"]) };
    case(RuleTag::Weaken, apply_rule(&rule, std::slice::from_ref(&p)), n.seq("#q, #p |- #p"), apply_rule(&bad, std::slice::from_ref(&p)), true);

    let imp = n.hyp(&["#p => #q"], "#p => #q");
    case(
        RuleTag::ImpElim,
        apply_rule(&Rule::ImpElim, &[imp]),
        n.seq("#p => #q, #p |- #q"),
        apply_rule(&Rule::ImpElim, std::slice::from_ref(&p)),
        false,
    );

    let closed = apply_rule(&Rule::EqRefl { hyps: vec![], expr: n.e("x") }, &[]).unwrap();
    case(
        RuleTag::ImpIntro,
        apply_rule(&Rule::ImpIntro, std::slice::from_ref(&p)),
        n.seq("|- #p => #p"),
        apply_rule(&Rule::ImpIntro, std::slice::from_ref(&closed)),
        false,
    );

    let (a, b) = (n.hyp(&["#p", "#q"], "#p"), n.hyp(&["#p", "#q"], "#q"));
    case(
        RuleTag::AndIntro,
        apply_rule(&Rule::AndIntro, &[a.clone(), b.clone()]),
        n.seq("#p, #q |- #p & #q"),
        apply_rule(&Rule::AndIntro, &[p.clone(), b]),
        false,
    );

    let conj = n.hyp(&["#p & #q"], "#p & #q");
    case(
        RuleTag::AndElimL,
        apply_rule(&Rule::AndElimL, std::slice::from_ref(&conj)),
        n.seq("#p & #q |- #p"),
        apply_rule(&Rule::AndElimL, std::slice::from_ref(&p)),
        false,
    );
    case(
        RuleTag::AndElimR,
        apply_rule(&Rule::AndElimR, &[conj]),
        n.seq("#p & #q |- #q"),
        apply_rule(&Rule::AndElimR, &[a]),
        false,
    );

    let pos = [n.hyp(&["not #p", "#p"], "#p"), n.hyp(&["not #p", "#p"], "not #p")];
    case(
        RuleTag::NotPos,
        apply_rule(&Rule::NotPos, &pos),
        n.seq("not #p |- not #p"),
        apply_rule(&Rule::NotPos, &[pos[0].clone(), pos[0].clone()]),
        false,
    );

    let neg = [n.hyp(&["#q", "not #q"], "#q"), n.hyp(&["#q", "not #q"], "not #q")];
    let swapped = [n.hyp(&["not #q", "#q"], "#q"), n.hyp(&["not #q", "#q"], "not #q")];
    case(
        RuleTag::NotNeg,
        apply_rule(&Rule::NotNeg, &neg),
        n.seq("#q |- #q"),
        apply_rule(&Rule::NotNeg, &swapped),
        false,
    );

    let rule = Rule::EqRefl { hyps: n.hyps(&["#p"]), expr: n.e("x |-> y") };
    case(RuleTag::EqRefl, apply_rule(&rule, &[]), n.seq("#p |- x |-> y = x |-> y"), apply_rule(&rule, std::slice::from_ref(&p)), false);

    let refl = apply_rule(&Rule::EqRefl { hyps: n.hyps(&["y : S"]), expr: n.e("x") }, &[]).unwrap();
    let captured = apply_rule(&Rule::EqRefl { hyps: n.hyps(&["x : S"]), expr: n.e("x") }, &[]).unwrap();
    let rule = Rule::ForallIntro { index: n.i("x") };
    case(
        RuleTag::ForallIntro,
        apply_rule(&rule, &[refl]),
        n.seq("y : S |- forall v . v = v"),
        apply_rule(&rule, &[captured]),
        true,
    );

    let all = n.hyp(&["forall v . v : S"], "forall v . v : S");
    let rule = Rule::ForallElim { witness: n.e("y |-> x") };
    case(
        RuleTag::ForallElim,
        apply_rule(&rule, &[all]),
        n.seq("forall v . v : S |- y |-> x : S"),
        apply_rule(&rule, std::slice::from_ref(&p)),
        false,
    );

    let rule = Rule::CmpAxiom { member: n.e("y"), set: n.e("{ v : S | v = x }") };
    let bad = Rule::CmpAxiom { member: n.e("y"), set: n.e("S") };
    case(
        RuleTag::CmpAxiom,
        apply_rule(&rule, &[]),
        n.seq("|- y : { v : S | v = x } <=> y : S & y = x"),
        apply_rule(&bad, &[]),
        false,
    );

    let g = ["x = y", "x : S"];
    let (eq, body) = (n.hyp(&g, "x = y"), n.hyp(&g, "x : S"));
    let rule = Rule::Leibniz { index: n.i("w"), body: n.p("w : S") };
    case(
        RuleTag::Leibniz,
        apply_rule(&rule, &[eq, body.clone()]),
        n.seq("x = y, x : S |- y : S"),
        apply_rule(&rule, &[body.clone(), body]),
        false,
    );

    let rule = Rule::ChoiceAxiom { hyps: vec![], index: n.i("w"), set: n.e("S") };
    let bad = Rule::ChoiceAxiom { hyps: vec![], index: n.i("S"), set: n.e("S") };
    case(
        RuleTag::ChoiceAxiom,
        apply_rule(&rule, &[]),
        n.seq("|- (exists v . v : S) => choice S : S"),
        apply_rule(&bad, &[]),
        true,
    );

    let rule = Rule::PowAxiom { hyps: vec![], index: n.i("w"), left: n.e("S"), right: n.e("T") };
    let bad = Rule::PowAxiom { hyps: vec![], index: n.i("T"), left: n.e("S"), right: n.e("T") };
    case(
        RuleTag::PowAxiom,
        apply_rule(&rule, &[]),
        n.seq("|- S : pow T <=> (forall v . v : S => v : T)"),
        apply_rule(&bad, &[]),
        true,
    );

    let g = ["S : pow T", "T : pow S"];
    let (st, ts) = (n.hyp(&g, "S : pow T"), n.hyp(&g, "T : pow S"));
    case(
        RuleTag::ExtIntro,
        apply_rule(&Rule::ExtIntro, &[st.clone(), ts]),
        n.seq("S : pow T, T : pow S |- S = T"),
        apply_rule(&Rule::ExtIntro, &[st.clone(), st]),
        false,
    );

    let rule = Rule::BigElem { hyps: vec![], name: BigName::new("j") };
    case(RuleTag::BigElem, apply_rule(&rule, &[]), n.seq("|- @j : BIG"), apply_rule(&rule, &[closed]), false);

    let rule = Rule::BigDistinct { hyps: vec![], left: BigName::new("i"), right: BigName::new("j") };
    let bad = Rule::BigDistinct { hyps: vec![], left: BigName::new("j"), right: BigName::new("j") };
    case(RuleTag::BigDistinct, apply_rule(&rule, &[]), n.seq("|- not @i = @j"), apply_rule(&bad, &[]), true);

    let pairs = n.hyp(&["x |-> y = S |-> T"], "x |-> y = S |-> T");
    let flat = n.hyp(&["x = y"], "x = y");
    case(
        RuleTag::PairInjL,
        apply_rule(&Rule::PairInjL, std::slice::from_ref(&pairs)),
        n.seq("x |-> y = S |-> T |- x = S"),
        apply_rule(&Rule::PairInjL, std::slice::from_ref(&flat)),
        false,
    );
    case(
        RuleTag::PairInjR,
        apply_rule(&Rule::PairInjR, &[pairs]),
        n.seq("x |-> y = S |-> T |- y = T"),
        apply_rule(&Rule::PairInjR, &[flat]),
        false,
    );

    let (w, u) = (n.i("w"), n.i("u"));
    let prod = |n: &mut Names, first, second| Rule::ProdChar {
        hyps: vec![],
        first,
        second,
        elem: n.e("x"),
        left: n.e("S"),
        right: n.e("T"),
    };
    let (rule, bad) = (prod(&mut n, w, u), prod(&mut n, w, w));
    case(
        RuleTag::ProdChar,
        apply_rule(&rule, &[]),
        n.seq("|- (exists a . a : S & (exists b . b : T & x = a |-> b)) <=> x : S * T"),
        apply_rule(&bad, &[]),
        true,
    );

    out
}
