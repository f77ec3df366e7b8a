use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prag::cli::{eval_formula, load_lexicon, repl_step, run_batch, Outcome, SessionState};
use prag::{Accommodation, Policy, Strategy};

#[derive(Parser)]
#[command(name = "prag", version, about = "Effectful semantics for a controlled English fragment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SessionArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, default_value = "trapped")]
    accommodation: Accommodation,
    #[arg(long, default_value = "recency")]
    strategy: Strategy,
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Process a discourse file and print its formula and context.
    Run {
        #[command(flatten)]
        session: SessionArgs,
        discourse: PathBuf,
    },
    /// Enter sentences one line at a time.
    Repl {
        #[command(flatten)]
        session: SessionArgs,
    },
    /// Evaluate a closed formula in a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
}

fn emit(outcome: Outcome) -> ExitCode {
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}

fn repl(session: SessionArgs) -> ExitCode {
    let lexicon = match load_lexicon(&session.lexicon) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let policy = Policy::new(session.accommodation);
    let mut state = SessionState::new(lexicon, policy, session.strategy, session.trace);
    let interactive = io::stdin().is_terminal();
    let mut stdout = io::stdout();
    let mut lines = io::stdin().lock().lines();
    loop {
        if interactive {
            print!("> ");
            let _ = stdout.flush();
        }
        let Some(Ok(line)) = lines.next() else { break };
        let (next, out) = repl_step(state, &line);
        state = next;
        print!("{out}");
        if state.finished {
            break;
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { session, discourse } => emit(run_batch(
            &discourse,
            &session.lexicon,
            Policy::new(session.accommodation),
            session.strategy,
            session.trace,
        )),
        Command::Repl { session } => repl(session),
        Command::Eval { model, formula } => emit(eval_formula(&model, &formula)),
    }
}
