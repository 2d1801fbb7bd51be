//! `bproof`: check proof files, run tactic scripts, prove interactively and
//! run the enumerative self-test.
//!
//! Exit status is 0 on success, 1 when a proof or check fails and 2 when a
//! file cannot be read or parsed.

use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod repl;
mod style;

use style::Style;

#[derive(Parser, Debug)]
#[command(name = "bproof", version, about = "Proof kernel and prover for first-order B logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replay a `.bprf` proof through the kernel and print its sequent.
    Check { file: PathBuf },
    /// Run a tactic script on the sequent in a goal file.
    Prove {
        goal: PathBuf,
        script: PathBuf,
        /// Write the proof tree here on success.
        #[arg(long, value_name = "OUT")]
        emit: Option<PathBuf>,
    },
    /// Line-oriented interactive prover reading commands from stdin.
    Repl,
    /// Exhaustively check the binder laws, the deciders and the
    /// propositional decision procedure on small terms.
    Selftest {
        /// Term depth bound of the enumeration.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        depth: u8,
        /// Depth bound of the propositional sweep; defaults to `--depth`.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        prop_depth: Option<u8>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
        /// Substitute an off-by-one lifting function.
        #[arg(long, hide = true)]
        mutant_lift: bool,
    },
}

fn color_enabled() -> bool {
    match std::env::var("BPROOF_COLOR").as_deref() {
        Ok("1") => true,
        Ok("0") => false,
        _ => io::stdout().is_terminal(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::new(color_enabled());
    let status = match cli.command {
        Command::Check { file } => commands::check(&file, style),
        Command::Prove { goal, script, emit } => commands::prove(&goal, &script, emit.as_deref(), style),
        Command::Repl => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            repl::run(stdin.lock(), io::stdout().lock(), style, prompt)
        }
        Command::Selftest { depth, prop_depth, sequential, mutant_lift } => {
            let depth = usize::from(depth);
            let opts = commands::SelftestOptions {
                depth,
                prop_depth: prop_depth.map_or(depth, usize::from),
                sequential,
                mutant_lift,
            };
            commands::selftest(&opts, style)
        }
    };
    ExitCode::from(status as u8)
}
