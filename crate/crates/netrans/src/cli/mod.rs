//! The `netrans` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data or
//! contract error, 3 numerical divergence (or a failed gradient check).

mod align;
mod eval;
mod neural;
mod tools;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueHint};
use thiserror::Error;

use netrans_core::align::AlignError;
use netrans_core::ner::NerError;
use netrans_core::neural::NeuralError;
use netrans_core::pipeline::PipelineError;

use crate::config::{self, ConfigError};
use crate::corpus::RecordError;
use crate::eval::EvalError;
use crate::formats::{self, FormatError};

#[derive(Debug, Parser)]
#[command(name = "netrans", version, about = "Named-entity translation and alignment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// `key = value` file supplying defaults for this subcommand's flags
    #[arg(long, value_name = "FILE", value_hint = ValueHint::FilePath)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for corpus-parallel work
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Log progress to stderr
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Train a character-level entity translator from an entity-pair list
    TrainNe(neural::TrainArgs),
    /// Translate entities with a trained model
    TranslateNe(neural::TranslateArgs),
    /// Log-probability of entity pairs under a trained model
    ScoreNe(neural::ScoreArgs),
    /// Compare analytic and finite-difference gradients on a small model
    Gradcheck(neural::GradcheckArgs),
    /// Edit distance, LCS and similarity of two strings
    Sim(tools::SimArgs),
    /// Digit-string normalization of a numeric expression
    Numnorm(tools::NumnormArgs),
    /// Align entities across a sentence-aligned corpus
    Align(align::AlignArgs),
    /// Replace entities with placeholder symbols
    Replace(align::ReplaceArgs),
    /// Build a lexical table from extracted entity pairs
    ExtractLex(align::ExtractLexArgs),
    /// Put entity translations back in place of placeholders
    Restore(align::RestoreArgs),
    /// Exact-match accuracy of entity translations
    EvalNe(eval::EvalNeArgs),
    /// Precision, recall and F1 of alignments or extracted pairs
    EvalAlign(eval::EvalAlignArgs),
    /// Write a synthetic corpus with gold alignments
    Synth(align::SynthArgs),
}

impl Cmd {
    fn common(&self) -> &Common {
        match self {
            Cmd::TrainNe(a) => &a.common,
            Cmd::TranslateNe(a) => &a.common,
            Cmd::ScoreNe(a) => &a.common,
            Cmd::Gradcheck(a) => &a.common,
            Cmd::Sim(a) => &a.common,
            Cmd::Numnorm(a) => &a.common,
            Cmd::Align(a) => &a.common,
            Cmd::Replace(a) => &a.common,
            Cmd::ExtractLex(a) => &a.common,
            Cmd::Restore(a) => &a.common,
            Cmd::EvalNe(a) => &a.common,
            Cmd::EvalAlign(a) => &a.common,
            Cmd::Synth(a) => &a.common,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Divergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Divergence(_) => 3,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<NeuralError> for CliError {
    fn from(e: NeuralError) -> Self {
        match e {
            NeuralError::Divergence { .. } | NeuralError::NonFinite => CliError::Divergence(e.to_string()),
            NeuralError::Config(_) | NeuralError::InvalidBeam => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<AlignError> for CliError {
    fn from(e: AlignError) -> Self {
        match e {
            AlignError::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

macro_rules! data_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Data(e.to_string())
            }
        }
    )*};
}

data_errors!(NerError, PipelineError, RecordError, EvalError);

pub type CliResult<T = ()> = Result<T, CliError>;

/// Writes `text` to `path`, or to stdout without a path.
fn emit(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => Ok(formats::write_text(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let argv = match config::expand(&Cli::command(), argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = if cli.command.common().verbose {
        log::LevelFilter::Info
    } else {
        log::LevelFilter::Warn
    };
    // environment variables are deliberately not consulted
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();

    let result = match cli.command {
        Cmd::TrainNe(a) => neural::train(a),
        Cmd::TranslateNe(a) => neural::translate(a),
        Cmd::ScoreNe(a) => neural::score(a),
        Cmd::Gradcheck(a) => neural::gradcheck(a),
        Cmd::Sim(a) => tools::sim(a),
        Cmd::Numnorm(a) => tools::numnorm(a),
        Cmd::Align(a) => align::align(a),
        Cmd::Replace(a) => align::replace(a),
        Cmd::ExtractLex(a) => align::extract_lex(a),
        Cmd::Restore(a) => align::restore(a),
        Cmd::EvalNe(a) => eval::eval_ne(a),
        Cmd::EvalAlign(a) => eval::eval_align(a),
        Cmd::Synth(a) => align::synth(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
