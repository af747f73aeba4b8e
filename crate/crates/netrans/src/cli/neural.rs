use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum, ValueHint};

use netrans_core::neural::{self, Direction, ModelConfig, TrainConfig};
use netrans_core::{NePair, NeType};

use super::{emit, CliError, CliResult, Common};
use crate::formats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    /// Source column in, target column out
    S2t,
    /// Target column in, source column out
    T2s,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::S2t => Direction::SrcToTgt,
            DirectionArg::T2s => Direction::TgtToSrc,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 64)]
    pub hidden: usize,
    #[arg(long, default_value_t = 32)]
    pub embed: usize,
    /// Longest translation the model will emit
    #[arg(long, default_value_t = 64)]
    pub max_len: usize,
    /// Multiplier on the Adadelta step
    #[arg(long, default_value_t = 1.0)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
}

impl ModelArgs {
    fn config(&self, seed: u64) -> ModelConfig {
        ModelConfig {
            hidden_size: self.hidden,
            embed_size: self.embed,
            max_decode_len: self.max_len,
            learning_rate: self.learning_rate,
            adadelta_rho: self.rho,
            adadelta_eps: self.eps,
            seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Training entity pairs (TSV)
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pairs: PathBuf,
    /// Development pairs for early stopping; the training loss is used
    /// without them
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub dev: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "s2t")]
    pub direction: DirectionArg,
    /// Model file to write
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: PathBuf,
    /// Training log (TSV); defaults to the model path with `.log` appended
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub log: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub max_epochs: usize,
    /// Epochs without dev-loss improvement before stopping
    #[arg(long, default_value_t = 5)]
    pub patience: usize,
    #[command(flatten)]
    pub model: ModelArgs,
}

pub fn train(a: TrainArgs) -> CliResult {
    let pairs = formats::read_ne_pairs(&a.pairs)?;
    let dev = match &a.dev {
        Some(p) => formats::read_ne_pairs(p)?,
        None => Vec::new(),
    };
    let config = a.model.config(a.common.seed);
    let train_config = TrainConfig {
        max_epochs: a.max_epochs,
        patience: a.patience,
    };
    let mut log = String::from("epoch\ttrain_loss\tdev_loss\n");
    let result = neural::train(&pairs, a.direction.into(), &config, &train_config, &dev, |s| {
        log::info!("epoch {} train {:.6} dev {:.6}", s.epoch, s.train_loss, s.dev_loss);
        writeln!(log, "{}\t{:.6}\t{:.6}", s.epoch, s.train_loss, s.dev_loss).expect("writing to a String");
    });
    let log_path = a.log.clone().unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".log");
        p.into()
    });
    formats::write_text(&log_path, &log)?;
    let trained = result?;
    formats::save_model(&a.out, &trained.model)?;
    eprintln!(
        "trained {} epochs, kept epoch {}; model written to {}",
        trained.log.len(),
        trained.best_epoch,
        a.out.display()
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub model: PathBuf,
    /// Entities to translate, one per line
    #[arg(long, value_hint = ValueHint::FilePath, conflicts_with = "pairs", required_unless_present = "pairs")]
    pub input: Option<PathBuf>,
    /// Entity pairs whose input column is translated; the output is an
    /// entity-pair file with the hypotheses in the output column
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pairs: Option<PathBuf>,
    /// Input column of --pairs
    #[arg(long, value_enum, default_value = "s2t")]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = 5)]
    pub beam: usize,
    /// Hypotheses printed per entity (for --input)
    #[arg(long, default_value_t = 1)]
    pub nbest: usize,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: Option<PathBuf>,
}

pub fn translate(a: TranslateArgs) -> CliResult {
    let model = formats::load_model(&a.model)?;
    if a.nbest == 0 || a.nbest > a.beam {
        return Err(CliError::Usage("--nbest must be between 1 and --beam".into()));
    }
    let best = |src: &str| -> CliResult<String> {
        let k = neural::translate_default(&model, src, a.beam)?;
        Ok(k.best().map(|h| h.text.clone()).unwrap_or_default())
    };
    let mut out = String::new();
    if let Some(path) = &a.pairs {
        let direction: Direction = a.direction.into();
        let mut hyps = Vec::new();
        for p in formats::read_ne_pairs(path)? {
            let (src, _) = direction.orient(&p);
            let hyp = best(src)?;
            // an empty translation cannot be stored as a pair; keep a marker
            let hyp = if hyp.trim().is_empty() { "-".to_string() } else { hyp };
            let pair = match direction {
                Direction::SrcToTgt => NePair::new(&p.src_surface, &hyp, p.ne_type, p.count),
                Direction::TgtToSrc => NePair::new(&hyp, &p.tgt_surface, p.ne_type, p.count),
            }
            .map_err(|e| CliError::Data(e.to_string()))?;
            hyps.push(match direction {
                Direction::SrcToTgt => pair,
                Direction::TgtToSrc => pair.swapped(),
            });
        }
        out = formats::format_ne_pairs(&hyps)?;
    } else if let Some(path) = &a.input {
        let text = formats::read_text(path)?;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let k = neural::translate_default(&model, line, a.beam)?;
            if a.nbest == 1 {
                let t = k.best().map(|h| h.text.as_str()).unwrap_or("");
                writeln!(out, "{line}\t{t}").expect("writing to a String");
            } else {
                for (rank, h) in k.entries.iter().take(a.nbest).enumerate() {
                    writeln!(out, "{line}\t{}\t{}\t{:.6}", rank + 1, h.text, h.logprob)
                        .expect("writing to a String");
                }
            }
        }
    }
    emit(a.out.as_deref(), &out)
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub model: PathBuf,
    /// Entity pairs to score
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pairs: PathBuf,
    /// Which column the model reads
    #[arg(long, value_enum, default_value = "s2t")]
    pub direction: DirectionArg,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: Option<PathBuf>,
}

/// Prints `input<TAB>output<TAB>log p(output | input)` per pair.
pub fn score(a: ScoreArgs) -> CliResult {
    let model = formats::load_model(&a.model)?;
    let direction: Direction = a.direction.into();
    let mut out = String::new();
    for p in formats::read_ne_pairs(&a.pairs)? {
        let (src, tgt) = direction.orient(&p);
        let lp = model.sequence_logprob(src, tgt)?;
        writeln!(out, "{src}\t{tgt}\t{lp:.6}").expect("writing to a String");
    }
    emit(a.out.as_deref(), &out)
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Entity pairs to check on; a built-in pair list is used without it
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pairs: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub hidden: usize,
    #[arg(long, default_value_t = 8)]
    pub embed: usize,
    /// Finite-difference step
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    /// Largest accepted relative error
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
}

pub fn gradcheck(a: GradcheckArgs) -> CliResult {
    let pairs = match &a.pairs {
        Some(p) => formats::read_ne_pairs(p)?,
        None => vec![
            NePair::new("柏林", "berlin", NeType::Loc, 1).expect("valid pair"),
            NePair::new("巴黎", "bali", NeType::Loc, 1).expect("valid pair"),
        ],
    };
    let config = ModelConfig {
        hidden_size: a.hidden,
        embed_size: a.embed,
        seed: a.common.seed,
        ..ModelConfig::default()
    };
    config.validate()?;
    let mut model = neural::init_model(&pairs, Direction::SrcToTgt, &config)?;
    // biases start at zero; move them off it so their gradients are exercised
    for t in model.params.tensors_mut() {
        if t.rows == 1 {
            for (i, v) in t.data.iter_mut().enumerate() {
                *v = 0.05 * ((i % 5) as f64 - 2.0);
            }
        }
    }
    let data = neural::encode_pairs(&model, &pairs, Direction::SrcToTgt);
    let report = neural::check_gradients(&model, &data, a.epsilon)?;
    println!("tensor\tvalues\tmax_rel_error");
    for t in &report.tensors {
        println!("{}\t{}\t{:.3e}", t.name, t.values, t.max_rel_error);
    }
    println!("all\t{}\t{:.3e}", report.checked, report.max_rel_error);
    if report.passes(a.tolerance) {
        Ok(())
    } else {
        let worst = report
            .worst
            .as_ref()
            .map(|(n, i)| format!(" (worst: {n}[{i}])"))
            .unwrap_or_default();
        Err(CliError::Divergence(format!(
            "gradient check failed: max relative error {:.3e} > {}{worst}",
            report.max_rel_error, a.tolerance
        )))
    }
}
