use super::*;
use crate::kernel::check;
use crate::syntax::{parse_script, parse_sequent, parse_tactical, ScopeTable};

fn goal(text: &str) -> (Sequent, ScopeTable) {
    let mut scope = ScopeTable::new();
    let s = parse_sequent(text, &mut scope).unwrap();
    (s, scope)
}

fn prove(goal_text: &str, script: &str) -> Theorem {
    let (s, scope) = goal(goal_text);
    let script = parse_script(script).unwrap();
    let (thm, _) = run_script(&script, &s, scope).unwrap_or_else(|e| panic!("{goal_text}: {e}"));
    assert_eq!(thm.sequent(), &s);
    let checked = check(thm.proof()).unwrap();
    assert_eq!(checked.sequent(), &s);
    thm
}

fn fails(goal_text: &str, script: &str) -> TacticError {
    let (s, scope) = goal(goal_text);
    run_script(&parse_script(script).unwrap(), &s, scope).unwrap_err()
}

#[test]
fn identity_and_hypothesis() {
    prove("#p |- #p", "hyp");
    prove("|- #p => #p", "imp_intro\nhyp");
}

#[test]
fn conjunction_with_tacticals() {
    prove("#p, #q |- #p & (#q & #p)", "repeat (and_intro orelse hyp)");
    prove("#p, #q |- #p & #q", "and_intro then focus 2 hyp\nhyp");
    prove("#p, #q |- #q & #p", "and_intro\nfocus 2 hyp\nhyp");
}

#[test]
fn propositional_decision() {
    prove("|- (#a => #b) => (not #b => not #a)", "prop");
    prove("#a or #b, not #a |- #b", "prop");
    let e = fails("|- #a => #b", "prop");
    assert!(matches!(e, TacticError::ScriptFailed { reason: None, .. }), "{e}");
}

#[test]
fn quantifiers() {
    prove("|- forall x . x = x", "forall_intro \"y\"\neq_refl");
    prove("|- forall x . x = x", "forall_intro_alpha\neq_refl");
    prove("|- forall x . x = x", "forall_intro_internal\neq_refl");
    prove("forall x . x : S |- a : S", "specialize 1 \"a\"\nhyp");
    prove("a : S |- exists x . x : S", "exists_intro \"a\"\nhyp");
    prove("exists x . x : S |- exists y . y : S", "exists_elim 1 \"w\"\nexists_intro \"w\"\nhyp");
}

#[test]
fn freshness_is_enforced() {
    let (s, _) = goal("a = a |- forall x . x = a");
    let bad = Builtin::ForallIntro(Some(Index::ONE));
    assert!(bad.apply(&s).is_err());
}

#[test]
fn sets() {
    prove("|- a |-> b = a |-> b => a = a", "imp_intro\npair_inj_l");
    prove("a |-> b = c |-> d |- b = d", "pair_inj_r");
    prove("|- @j : BIG", "big_elem");
    prove("|- not @i = @j", "big_distinct");
    prove("|- S : pow S", "pow_intro\nforall_intro \"z\"\nimp_intro\nhyp");
    prove("a : S & a = a |- a : { x : S | x = x }", "cmp_intro\nhyp");
    prove("|- S = S", "ext_intro then (pow_intro then forall_intro then imp_intro then hyp)");
}

#[test]
fn cut_and_clear() {
    prove("#p, #p => #q |- #q", "cut \"#p\"\nhyp\nclear 1\nprop");
}

#[test]
fn leibniz_replaces() {
    prove("a = b, a : S |- b : S", "leibniz \"a\" \"b\"\nhyp\nhyp");
}

#[test]
fn rewriting_and_congruence() {
    prove("#p <=> #q, #q |- #p", "rewrite 1\nhyp");
    prove("|- (forall x . not not x : S) <=> (forall x . x : S)", "congr_graft then prop");
    prove("|- forall x . not not x : S => x : S", "dneg 1\nforall_intro\nprop");
}

#[test]
fn unknown_tactic_and_bad_arguments() {
    let e = fails("#p |- #p", "frobnicate");
    match e {
        TacticError::ScriptFailed { step: 1, reason: Some(r), .. } => {
            assert!(matches!(*r, TacticError::UnknownTactic(_)))
        }
        other => panic!("{other}"),
    }
    let e = fails("#p |- #p", "cut 3");
    assert!(matches!(e, TacticError::ScriptFailed { .. }));
    let e = fails("#p |- #p", "\n\nfail");
    assert!(matches!(e, TacticError::ScriptFailed { step: 3, .. }));
}

#[test]
fn proof_state_undo_and_replay() {
    let (s, scope) = goal("#p, #q |- #p & #q");
    let mut st = ProofState::new(s.clone(), scope);
    st.apply(&parse_tactical("and_intro").unwrap()).unwrap();
    assert_eq!(st.goals().len(), 2);
    st.apply(&parse_tactical("hyp").unwrap()).unwrap();
    assert!(st.undo());
    assert_eq!(st.goals().len(), 2);
    st.apply(&parse_tactical("focus 2 hyp").unwrap()).unwrap();
    st.apply(&parse_tactical("hyp").unwrap()).unwrap();
    assert!(st.is_complete());
    assert_eq!(st.theorem().unwrap().sequent(), &s);
}

#[test]
fn justification_rejects_wrong_theorems() {
    let (s, _) = goal("#p, #q |- #p & #q");
    let o = Builtin::AndIntro.apply(&s).unwrap();
    let (p, _) = goal("#p |- #p");
    let t = close_with(&p, &Builtin::Hyp).unwrap();
    assert!(matches!(o.justify(vec![t.clone(), t]), Err(TacticError::JustificationMismatch { .. })));
    assert!(matches!(o.justify(vec![]), Err(TacticError::JustificationMismatch { .. })));
}

#[test]
fn backward_tactics_exist_for_introduction_rules() {
    for tag in RuleTag::ALL {
        if let Some(b) = Builtin::backward(tag) {
            assert!(!b.name().is_empty());
        }
    }
}
