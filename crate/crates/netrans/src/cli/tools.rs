use std::path::PathBuf;

use clap::{Args, ValueHint};

use netrans_core::numnorm::RuleTable;
use netrans_core::simdist;

use super::{CliError, CliResult, Common};
use crate::formats;

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub common: Common,
    /// Candidate string
    pub candidate: String,
    /// Target string
    pub target: String,
}

/// Prints `ed<TAB>lcs<TAB>sim` after normalization.
pub fn sim(a: SimArgs) -> CliResult {
    let c = simdist::normalize(&a.candidate);
    let t = simdist::normalize(&a.target);
    let err = |e: simdist::SimError| CliError::Data(e.to_string());
    let ed = simdist::edit_distance_indel(&c, &t).map_err(err)?;
    let lcs = simdist::lcs_length(&c, &t).map_err(err)?;
    let sim = simdist::similarity_chars(&c, &t).map_err(err)?;
    println!("ed\tlcs\tsim");
    println!("{ed}\t{lcs}\t{sim}");
    Ok(())
}

#[derive(Debug, Args)]
pub struct NumnormArgs {
    #[command(flatten)]
    pub common: Common,
    /// Expression to normalize
    pub text: String,
    /// Language of the expression
    #[arg(long, default_value = "zh")]
    pub lang: String,
    /// Rule table replacing the built-in one
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub rules: Option<PathBuf>,
}

pub fn numnorm(a: NumnormArgs) -> CliResult {
    let table = match &a.rules {
        Some(p) => formats::read_rule_table(p)?,
        None => RuleTable::default(),
    };
    println!("{}", table.normalize(&a.text, &a.lang));
    Ok(())
}
