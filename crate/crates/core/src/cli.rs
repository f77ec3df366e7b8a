//! Session logic behind the `prag` binary: batch runs, the interactive
//! REPL, and model evaluation. Everything here returns rendered text and
//! exit codes so the binary stays a thin shell.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::dynamics::{close_discourse, run_open, Context, DiscourseError, Strategy};
use crate::effects::Trace;
use crate::grammar::{denote, parse_discourse, GrammarError, Lexicon, LexiconError};
use crate::logic::{parse_formula, pretty, Formula, SyntaxError};
use crate::models::{eval, parse_model, Assignment, EvalError, ModelFileError};
use crate::presup::{Accommodation, Policy};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Discourse(#[from] DiscourseError),
    #[error("model: {0}")]
    Model(#[from] ModelFileError),
    #[error("formula: {0}")]
    Formula(#[from] SyntaxError),
    #[error("formula has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Discourse(DiscourseError::UnresolvedAnaphora { .. }) => 3,
            CliError::Discourse(DiscourseError::PresuppositionFailure { .. }) => 4,
            CliError::Discourse(DiscourseError::Unhandled(_)) => 1,
            _ => 2,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, CliError> {
    Ok(Lexicon::load(&read_file(path)?)?)
}

/// Exit code and rendered streams of one command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(err: &CliError, stderr_extra: &str) -> Self {
        Outcome { code: err.exit_code(), stdout: String::new(), stderr: format!("error: {err}\n{stderr_extra}") }
    }
}

#[derive(Debug, Clone)]
pub struct SessionState {
    pub lexicon: Lexicon,
    pub policy: Policy,
    pub strategy: Strategy,
    pub context: Context,
    /// Conjunction of every sentence processed so far, top-level referents
    /// still free.
    pub body: Formula,
    pub sentences: usize,
    pub trace: bool,
    pub finished: bool,
}

impl SessionState {
    pub fn new(lexicon: Lexicon, policy: Policy, strategy: Strategy, trace: bool) -> Self {
        SessionState {
            lexicon,
            policy,
            strategy,
            context: Context::new(),
            body: Formula::Truth,
            sentences: 0,
            trace,
            finished: false,
        }
    }

    /// The discourse so far as a closed formula.
    pub fn formula(&self) -> Formula {
        close_discourse(self.body.clone(), &self.context)
    }

    fn reset(&mut self) {
        self.context = Context::new();
        self.body = Formula::Truth;
        self.sentences = 0;
    }

    /// Processes every sentence in `text` against the current context.
    /// Commits only if all of them succeed; on failure the error comes with
    /// the trace up to the failing request.
    pub fn process(&mut self, text: &str) -> Result<Trace, (CliError, Trace)> {
        let parse = parse_discourse(text, &self.lexicon).map_err(|e| (e.into(), Trace::new()))?;
        let mut ctx = self.context.clone();
        let mut body = self.body.clone();
        let mut trace = Trace::new();
        let mut count = self.sentences;
        for sentence in &parse.sentences {
            count += 1;
            ctx.sentence = count;
            match run_open(denote(sentence), ctx, self.policy, self.strategy) {
                Ok((phi, next, t)) => {
                    body = Formula::and(body, phi);
                    ctx = next;
                    trace.extend(t);
                }
                Err(failure) => {
                    trace.extend(failure.trace);
                    return Err((failure.error.into(), trace));
                }
            }
        }
        self.context = ctx;
        self.body = body;
        self.sentences = count;
        Ok(trace)
    }
}

fn trace_block(trace: &Trace) -> String {
    if trace.is_empty() {
        return String::new();
    }
    format!("trace:\n{trace}")
}

/// Runs a whole discourse: formula line, context, then the trace if asked.
pub fn run_batch(discourse: &Path, lexicon: &Path, policy: Policy, strategy: Strategy, trace: bool) -> Outcome {
    let setup = load_lexicon(lexicon).and_then(|lex| Ok((lex, read_file(discourse)?)));
    let (lexicon, text) = match setup {
        Ok(v) => v,
        Err(e) => return Outcome::failure(&e, ""),
    };
    run_text(lexicon, &text, policy, strategy, trace)
}

/// [`run_batch`] on an already loaded lexicon and discourse text.
pub fn run_text(lexicon: Lexicon, text: &str, policy: Policy, strategy: Strategy, trace: bool) -> Outcome {
    let mut state = SessionState::new(lexicon, policy, strategy, trace);
    match state.process(text) {
        Ok(t) => {
            let mut stdout = format!("{}\n{}", pretty(&state.formula()), state.context);
            if trace {
                stdout.push_str(&trace_block(&t));
            }
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err((e, t)) => Outcome::failure(&e, &if trace { trace_block(&t) } else { String::new() }),
    }
}

/// One REPL line. Commands start with `:`; anything else is discourse.
/// Errors are rendered inline and leave the state as it was.
pub fn repl_step(mut state: SessionState, line: &str) -> (SessionState, String) {
    let line = line.trim();
    if line.is_empty() {
        return (state, String::new());
    }
    if let Some(command) = line.strip_prefix(':') {
        let words: Vec<&str> = command.split_whitespace().collect();
        let out = match words[..] {
            ["context"] => state.context.to_string(),
            ["reset"] => {
                state.reset();
                "context cleared\n".to_string()
            }
            ["trace", "on"] => {
                state.trace = true;
                "trace on\n".to_string()
            }
            ["trace", "off"] => {
                state.trace = false;
                "trace off\n".to_string()
            }
            ["policy", p] => match p.parse::<Accommodation>() {
                Ok(a) => {
                    state.policy.accommodation = a;
                    format!("accommodation {a}\n")
                }
                Err(e) => format!("error: {e}\n"),
            },
            ["quit"] => {
                state.finished = true;
                String::new()
            }
            _ => format!("error: unknown command `{line}`\n"),
        };
        return (state, out);
    }
    let out = match state.process(line) {
        Ok(t) => {
            let mut out = format!("{}\n", pretty(&state.formula()));
            if state.trace {
                out.push_str(&trace_block(&t));
            }
            out
        }
        Err((e, t)) => {
            let mut out = format!("error: {e}\n");
            if state.trace {
                out.push_str(&trace_block(&t));
            }
            out
        }
    };
    (state, out)
}

/// Evaluates a closed formula in the model stored at `model`.
pub fn eval_formula(model: &Path, formula: &str) -> Outcome {
    match read_file(model).and_then(|text| eval_text(&text, formula)) {
        Ok(value) => Outcome { code: 0, stdout: format!("{value}\n"), stderr: String::new() },
        Err(e) => Outcome::failure(&e, ""),
    }
}

/// [`eval_formula`] on model text.
pub fn eval_text(model: &str, formula: &str) -> Result<bool, CliError> {
    let m = parse_model(model)?;
    let f = parse_formula(formula)?;
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(CliError::FreeVariables(free.into_iter().collect()));
    }
    Ok(eval(&m, &Assignment::new(), &f)?)
}
