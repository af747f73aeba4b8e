use std::path::PathBuf;

use clap::{Args, ValueHint};

use super::{emit, CliError, CliResult, Common};
use crate::eval;
use crate::formats;

#[derive(Debug, Args)]
pub struct EvalNeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Hypothesis entity pairs, line-aligned with the references; repeat to
    /// compare systems (one table row each)
    #[arg(long, required = true, value_hint = ValueHint::FilePath)]
    pub hyp: Vec<PathBuf>,
    /// Reference entity pairs
    #[arg(long = "ref", value_hint = ValueHint::FilePath)]
    pub reference: PathBuf,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: Option<PathBuf>,
}

pub fn eval_ne(a: EvalNeArgs) -> CliResult {
    let reference = formats::read_ne_pairs(&a.reference)?;
    let mut rows = Vec::new();
    for path in &a.hyp {
        let hyp = formats::read_ne_pairs(path)?;
        let report = eval::exact_match_accuracy(&hyp, &reference)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        rows.push((label, report));
    }
    emit(a.out.as_deref(), &eval::format_accuracy_table(&rows))
}

#[derive(Debug, Args)]
pub struct EvalAlignArgs {
    #[command(flatten)]
    pub common: Common,
    /// Predicted alignments (or entity pairs with --pairs)
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pred: PathBuf,
    /// Gold alignments (or entity pairs with --pairs)
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub gold: PathBuf,
    /// Compare distinct extracted entity pairs instead of aligned spans
    #[arg(long)]
    pub pairs: bool,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: Option<PathBuf>,
}

pub fn eval_align(a: EvalAlignArgs) -> CliResult {
    let report = if a.pairs {
        eval::pair_prf(&formats::read_ne_pairs(&a.pred)?, &formats::read_ne_pairs(&a.gold)?)
    } else {
        eval::alignment_prf(&formats::read_alignments(&a.pred)?, &formats::read_alignments(&a.gold)?)
    };
    emit(a.out.as_deref(), &report.format())
}
