use std::fs;
use std::path::Path;
use std::time::Instant;

use bproof_core::kernel::{check as kernel_check, Sequent, Theorem};
use bproof_core::selftest::{self, broken_lift, correct_lift, Config, Execution};
use bproof_core::syntax::{
    decode_proof, encode_proof, parse_script, parse_sequent, print_sequent, ScopeTable, SyntaxError,
};
use bproof_core::tactics::{run_script, TacticError};

use crate::style::Style;

pub const OK: i32 = 0;
pub const PROOF_FAILURE: i32 = 1;
pub const ENVIRONMENT_FAILURE: i32 = 2;

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn read(path: &Path, style: Style) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("{} cannot read {}: {e}", style.bad("error:"), path.display());
        ENVIRONMENT_FAILURE
    })
}

fn syntax_failure(path: &Path, text: &str, e: &SyntaxError, style: Style) -> i32 {
    let (line, col) = line_col(text, e.offset());
    eprintln!("{} {}:{line}:{col}: {e}", style.bad("error:"), path.display());
    ENVIRONMENT_FAILURE
}

/// Goal files hold one sequent; lines starting with `//` are comments.
pub fn goal_text(text: &str) -> String {
    text.lines()
        .map(|l| if l.trim_start().starts_with("//") { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn check(path: &Path, style: Style) -> i32 {
    let text = match read(path, style) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let file = match decode_proof(&text) {
        Ok(f) => f,
        Err(e) => {
            let (line, col) = line_col(&text, e.offset);
            eprintln!("{} {}:{line}:{col}: {}", style.bad("error:"), path.display(), e.reason);
            return ENVIRONMENT_FAILURE;
        }
    };
    match kernel_check(&file.tree) {
        Ok(thm) => {
            println!("{} {}", style.good("certified"), print_sequent(thm.sequent(), &file.scope));
            OK
        }
        Err(e) => {
            let path: Vec<String> = e.path.iter().map(|i| i.to_string()).collect();
            let at = if path.is_empty() { "root".to_string() } else { format!("root.{}", path.join(".")) };
            println!("{} invalid step {} at node {at}", style.bad("rejected"), e.node);
            println!("  {}", e.source);
            PROOF_FAILURE
        }
    }
}

/// Re-checks a theorem from its proof tree before anything is printed
/// about it.
fn certified(thm: &Theorem) -> Option<Sequent> {
    kernel_check(thm.proof()).ok().map(|t| t.into_sequent()).filter(|s| s == thm.sequent())
}

pub fn prove(goal_path: &Path, script_path: &Path, emit: Option<&Path>, style: Style) -> i32 {
    let (goal_src, script_src) = match (read(goal_path, style), read(script_path, style)) {
        (Ok(g), Ok(s)) => (goal_text(&g), s),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    let mut scope = ScopeTable::new();
    let goal = match parse_sequent(&goal_src, &mut scope) {
        Ok(g) => g,
        Err(e) => return syntax_failure(goal_path, &goal_src, &e, style),
    };
    let script = match parse_script(&script_src) {
        Ok(s) => s,
        Err(e) => return syntax_failure(script_path, &script_src, &e, style),
    };
    let (thm, scope) = match run_script(&script, &goal, scope.clone()) {
        Ok(r) => r,
        Err(TacticError::ScriptFailed { step, remaining, reason }) => {
            let why = reason.map(|r| format!(": {r}")).unwrap_or_default();
            println!("{} at line {step}{why}", style.bad("script failed"));
            println!("{} open goal(s):", remaining.len());
            for (n, g) in remaining.iter().enumerate() {
                println!("  {}. {}", n + 1, print_sequent(g, &scope));
            }
            return PROOF_FAILURE;
        }
        Err(e) => {
            println!("{} {e}", style.bad("script failed:"));
            return PROOF_FAILURE;
        }
    };
    let Some(sequent) = certified(&thm) else {
        println!("{} the kernel rejected the script's proof", style.bad("error:"));
        return PROOF_FAILURE;
    };
    if let Some(out) = emit {
        if let Err(e) = fs::write(out, encode_proof(thm.proof(), &scope)) {
            eprintln!("{} cannot write {}: {e}", style.bad("error:"), out.display());
            return ENVIRONMENT_FAILURE;
        }
    }
    println!("{} {}", style.good("proved"), print_sequent(&sequent, &scope));
    OK
}

pub struct SelftestOptions {
    pub depth: usize,
    pub prop_depth: usize,
    pub sequential: bool,
    pub mutant_lift: bool,
}

pub fn selftest(opts: &SelftestOptions, style: Style) -> i32 {
    let config = Config {
        depth: opts.depth,
        prop_depth: opts.prop_depth,
        execution: if opts.sequential { Execution::Sequential } else { Execution::default() },
        lift: if opts.mutant_lift { broken_lift } else { correct_lift },
    };
    let start = Instant::now();
    let report = selftest::run(&config);
    println!(
        "enumerated {} terms of depth <= {}, propositional skeletons of depth <= {}",
        report.terms, config.depth, report.prop.depth
    );
    let paint = |line: String, ok: bool| {
        let (tag, rest) = line.split_at(6);
        format!("{}{rest}", if ok { style.good(tag) } else { style.bad(tag) })
    };
    for law in &report.laws {
        println!("{}", paint(law.to_string(), law.passed()));
    }
    println!("{}", paint(report.prop.to_string(), report.prop.passed()));
    let elapsed = style.dim(&format!("in {:.1?}", start.elapsed()));
    match report.first_failure() {
        None => {
            println!("{} {elapsed}", style.good("all checks passed"));
            OK
        }
        Some(c) => {
            println!("{} first counterexample: {c}", style.bad("FAILED"));
            PROOF_FAILURE
        }
    }
}
