//! Line-oriented interactive prover.
//!
//! ```text
//! goal <sequent>     start a proof
//! apply <tactical>   run a tactical on the first goal (or `focus N ...`)
//! undo               revert the last apply
//! subgoals           list the open goals
//! emit <path>        write the finished proof
//! qed                check the finished proof and print its theorem
//! help, quit
//! ```

use std::fs;
use std::io::{BufRead, Write};

use bproof_core::kernel::{check, Theorem};
use bproof_core::syntax::{encode_proof, parse_sequent, parse_tactical, print_sequent, ScopeTable};
use bproof_core::tactics::ProofState;

use crate::commands::{OK, PROOF_FAILURE};
use crate::style::Style;

const HELP: &str = "commands: goal <sequent> | apply <tactical> | undo | subgoals | emit <path> | qed | help | quit";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reply {
    Text(String),
    Error(String),
    Quit,
}

#[derive(Default)]
pub struct Session {
    state: Option<ProofState>,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    #[cfg(test)]
    pub fn state(&self) -> Option<&ProofState> {
        self.state.as_ref()
    }

    fn active(&self) -> Result<&ProofState, Reply> {
        self.state.as_ref().ok_or_else(|| Reply::Error("no goal; start one with `goal <sequent>`".into()))
    }

    fn goals(&self) -> Result<String, Reply> {
        let s = self.active()?;
        if s.is_complete() {
            return Ok("no goals left; use `qed`".into());
        }
        let mut out = format!("{} goal(s)", s.goals().len());
        for (n, g) in s.goals().iter().enumerate() {
            out.push_str(&format!("\n  {}. {}", n + 1, print_sequent(g, s.scope())));
        }
        Ok(out)
    }

    /// The closed proof, re-checked by the kernel.
    fn finished(&self) -> Result<(Theorem, &ScopeTable), Reply> {
        let s = self.active()?;
        if !s.is_complete() {
            return Err(Reply::Error(format!("{} goal(s) still open", s.goals().len())));
        }
        let thm = s.theorem().map_err(|e| Reply::Error(e.to_string()))?;
        match check(thm.proof()) {
            Ok(t) if t.sequent() == s.root() => Ok((t, s.scope())),
            Ok(_) => Err(Reply::Error("the proof concludes a different sequent".into())),
            Err(e) => Err(Reply::Error(e.to_string())),
        }
    }

    pub fn command(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let result = match cmd {
            "" => Ok(String::new()),
            c if c.starts_with("//") => Ok(String::new()),
            "help" => Ok(HELP.into()),
            "quit" | "exit" => return Reply::Quit,
            "goal" => {
                let mut scope = ScopeTable::new();
                match parse_sequent(rest, &mut scope) {
                    Ok(g) => {
                        self.state = Some(ProofState::new(g, scope));
                        self.goals()
                    }
                    Err(e) => Err(Reply::Error(format!("at column {}: {e}", e.offset() + 1))),
                }
            }
            "apply" => match parse_tactical(rest) {
                Err(e) => Err(Reply::Error(format!("at column {}: {e}", e.offset() + 1))),
                Ok(t) => match self.state.as_mut() {
                    None => self.active().map(|_| String::new()),
                    Some(s) => match s.apply(&t) {
                        Ok(()) => self.goals(),
                        Err(e) => Err(Reply::Error(e.to_string())),
                    },
                },
            },
            "undo" => match self.state.as_mut().map(ProofState::undo) {
                Some(true) => self.goals(),
                Some(false) => Err(Reply::Error("nothing to undo".into())),
                None => self.active().map(|_| String::new()),
            },
            "subgoals" => self.goals(),
            "qed" => self
                .finished()
                .map(|(thm, scope)| format!("theorem {}", print_sequent(thm.sequent(), scope))),
            "emit" if rest.is_empty() => Err(Reply::Error("usage: emit <path>".into())),
            "emit" => self.finished().and_then(|(thm, scope)| {
                fs::write(rest, encode_proof(thm.proof(), scope))
                    .map(|()| format!("wrote {rest}"))
                    .map_err(|e| Reply::Error(format!("cannot write {rest}: {e}")))
            }),
            other => Err(Reply::Error(format!("unknown command `{other}`; {HELP}"))),
        };
        match result {
            Ok(text) => Reply::Text(text),
            Err(reply) => reply,
        }
    }
}

/// Runs a session over `input`. The exit status is 1 when any command
/// failed.
pub fn run(input: impl BufRead, mut out: impl Write, style: Style, prompt: bool) -> i32 {
    let mut session = Session::new();
    let mut status = OK;
    let show_prompt = |out: &mut dyn Write| {
        if prompt {
            let _ = write!(out, "{}", style.dim("bproof> "));
            let _ = out.flush();
        }
    };
    show_prompt(&mut out);
    for line in input.lines() {
        let Ok(line) = line else { break };
        match session.command(&line) {
            Reply::Quit => break,
            Reply::Text(t) if t.is_empty() => {}
            Reply::Text(t) => {
                let _ = writeln!(out, "{t}");
            }
            Reply::Error(e) => {
                status = PROOF_FAILURE;
                let _ = writeln!(out, "{} {e}", style.bad("error:"));
            }
        }
        show_prompt(&mut out);
    }
    status
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(r: Reply) -> String {
        match r {
            Reply::Text(t) => t,
            other => panic!("expected text, got {other:?}"),
        }
    }

    #[test]
    fn conjunction_session() {
        let mut s = Session::new();
        text(s.command("goal #p, #q |- #p & #q"));
        assert!(text(s.command("apply and_intro")).starts_with("2 goal(s)"));
        text(s.command("apply hyp"));
        text(s.command("apply hyp"));
        assert_eq!(text(s.command("qed")), "theorem #p, #q |- #p & #q");
    }

    #[test]
    fn undo_restores_the_goal_stack() {
        let mut s = Session::new();
        text(s.command("goal #p, #q |- #p & #q"));
        let before = s.state().unwrap().goals().to_vec();
        text(s.command("apply and_intro"));
        assert_eq!(s.state().unwrap().goals().len(), 2);
        assert_eq!(text(s.command("undo")), text(s.command("subgoals")));
        assert_eq!(s.state().unwrap().goals(), &before[..]);
        assert!(matches!(s.command("undo"), Reply::Error(_)));
    }

    #[test]
    fn qed_refuses_open_goals() {
        let mut s = Session::new();
        assert!(matches!(s.command("qed"), Reply::Error(_)));
        text(s.command("goal #p |- #p & #p"));
        text(s.command("apply and_intro"));
        assert!(matches!(s.command("qed"), Reply::Error(m) if m.contains("2 goal(s) still open")));
    }

    #[test]
    fn failed_apply_leaves_the_state_alone() {
        let mut s = Session::new();
        text(s.command("goal |- #p => #p"));
        let before = text(s.command("subgoals"));
        assert!(matches!(s.command("apply hyp"), Reply::Error(_)));
        assert!(matches!(s.command("apply nonsense"), Reply::Error(_)));
        assert!(matches!(s.command("apply (hyp"), Reply::Error(_)));
        assert_eq!(text(s.command("subgoals")), before);
        assert_eq!(s.state().unwrap().steps(), 0);
    }

    #[test]
    fn names_survive_printing() {
        let mut s = Session::new();
        text(s.command("goal |- forall x . x : S => x : S"));
        let goals = text(s.command("apply forall_intro \"y\""));
        assert!(goals.contains("y : S => y : S"), "{goals}");
    }

    #[test]
    fn run_reports_failures_in_the_status() {
        let input = b"goal |- #p => #p\napply prop\nqed\n" as &[u8];
        let mut out = Vec::new();
        assert_eq!(run(input, &mut out, Style::new(false), false), OK);
        assert!(String::from_utf8(out).unwrap().contains("theorem |- #p => #p"));
        let mut out = Vec::new();
        assert_eq!(run(b"frobnicate\n" as &[u8], &mut out, Style::new(false), false), PROOF_FAILURE);
    }
}
