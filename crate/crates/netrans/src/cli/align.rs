use std::path::{Path, PathBuf};

use clap::{Args, ValueHint};

use netrans_core::align::{AlignConfig, Aligner, Directions, NoTranslator, Translator};
use netrans_core::ner::{AnnotationRecognizer, Gazetteer, Recognizer};
use netrans_core::neural::Seq2SeqModel;
use netrans_core::pipeline::{self, LexicalTable, RestoreConfig, DEFAULT_VOCAB_SIZE};
use netrans_core::{NePair, Side};

use super::{emit, CliError, CliResult, Common};
use crate::corpus;
use crate::formats::{self, AlignmentRecord};
use crate::synth::{self, SynthConfig};

/// A translator loaded from a model file or an entity-pair list.
enum Loaded {
    Model(Box<Seq2SeqModel>),
    Table(LexicalTable),
    Nothing(NoTranslator),
}

impl Loaded {
    fn get(&self) -> &dyn Translator {
        match self {
            Loaded::Model(m) => m.as_ref(),
            Loaded::Table(t) => t,
            Loaded::Nothing(n) => n,
        }
    }
}

/// `reverse` keys the lexicon by its target column.
fn load_translator(model: Option<&Path>, lexicon: Option<&Path>, reverse: bool) -> CliResult<Loaded> {
    match (model, lexicon) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give a model or a lexicon for each direction, not both".into(),
        )),
        (Some(m), None) => Ok(Loaded::Model(Box::new(formats::load_model(m)?))),
        (None, Some(l)) => {
            let mut pairs = formats::read_ne_pairs(l)?;
            if reverse {
                pairs = pairs.iter().map(NePair::swapped).collect();
            }
            Ok(Loaded::Table(pipeline::extract_lexical_table(&pairs)))
        }
        (None, None) => Ok(Loaded::Nothing(NoTranslator)),
    }
}

fn load_gazetteer(path: &Path, numeric: bool) -> CliResult<Gazetteer> {
    let (entries, skipped) = formats::read_gazetteer(path)?;
    if skipped > 0 {
        log::warn!("{}: skipped {skipped} ORG entries", path.display());
    }
    let mut g = Gazetteer::new();
    if !numeric {
        g = g.without_numeric();
    }
    for (surface, t) in entries {
        g.insert(&surface, t)?;
    }
    Ok(g)
}

fn load_annotations(path: &Path) -> CliResult<AnnotationRecognizer> {
    let ann = formats::read_annotations(path)?;
    if ann.skipped_org > 0 {
        log::warn!("{}: skipped {} ORG spans", path.display(), ann.skipped_org);
    }
    Ok(AnnotationRecognizer::new(ann.spans))
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub common: Common,
    /// Source side of the corpus, one tokenized sentence per line
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub src: PathBuf,
    /// Target side, line-aligned with --src
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub tgt: PathBuf,
    #[arg(long, default_value = "zh")]
    pub src_lang: String,
    #[arg(long, default_value = "en")]
    pub tgt_lang: String,
    /// Stand-off entity annotations for both sides
    #[arg(long, value_hint = ValueHint::FilePath, conflicts_with_all = ["src_gazetteer", "tgt_gazetteer"])]
    pub annotations: Option<PathBuf>,
    /// Gazetteer recognizing source-side entities
    #[arg(long, value_hint = ValueHint::FilePath, requires = "tgt_gazetteer")]
    pub src_gazetteer: Option<PathBuf>,
    /// Gazetteer recognizing target-side entities
    #[arg(long, value_hint = ValueHint::FilePath, requires = "src_gazetteer")]
    pub tgt_gazetteer: Option<PathBuf>,
    /// Do not detect numeric expressions with the gazetteers
    #[arg(long)]
    pub no_numeric: bool,
    /// Source-to-target translation model
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub s2t_model: Option<PathBuf>,
    /// Source-to-target entity pairs used as a translator
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub s2t_lexicon: Option<PathBuf>,
    /// Target-to-source translation model
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub t2s_model: Option<PathBuf>,
    /// Entity pairs (source column first) used as a target-to-source translator
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub t2s_lexicon: Option<PathBuf>,
    /// Minimum similarity for a match
    #[arg(long, default_value_t = 0.6)]
    pub threshold: f64,
    /// Longest n-gram compared on the other side
    #[arg(long, default_value_t = 3)]
    pub max_ngram: usize,
    /// Translation candidates per entity
    #[arg(long, default_value_t = 5)]
    pub beam: usize,
    /// both, s2t or t2s
    #[arg(long, default_value = "both")]
    pub directions: String,
    /// Alignment file to write
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: PathBuf,
    /// Extracted entity-pair file to write
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pairs_out: Option<PathBuf>,
}

pub fn align(a: AlignArgs) -> CliResult {
    let config = AlignConfig {
        sim_threshold: a.threshold,
        max_ngram: a.max_ngram,
        beam_width: a.beam,
        directions: a.directions.parse::<Directions>()?,
    };
    config.validate()?;
    let recognizers: (Box<dyn Recognizer>, Box<dyn Recognizer>) =
        match (&a.annotations, &a.src_gazetteer, &a.tgt_gazetteer) {
            (Some(p), _, _) => {
                let r = load_annotations(p)?;
                (Box::new(r.clone()), Box::new(r))
            }
            (None, Some(s), Some(t)) => (
                Box::new(load_gazetteer(s, !a.no_numeric)?),
                Box::new(load_gazetteer(t, !a.no_numeric)?),
            ),
            _ => {
                return Err(CliError::Usage(
                    "entities come from --annotations or from --src-gazetteer and --tgt-gazetteer".into(),
                ))
            }
        };
    let s2t = load_translator(a.s2t_model.as_deref(), a.s2t_lexicon.as_deref(), false)?;
    let t2s = load_translator(a.t2s_model.as_deref(), a.t2s_lexicon.as_deref(), true)?;
    let corpus = formats::read_parallel_corpus(&a.src, &a.tgt, &a.src_lang, &a.tgt_lang)?;

    let aligner = Aligner::new(config, s2t.get(), t2s.get())?;
    let result = corpus::align_corpus(
        &aligner,
        &corpus,
        recognizers.0.as_ref(),
        recognizers.1.as_ref(),
        a.common.jobs,
    )?;
    let records: Vec<AlignmentRecord> = result.pairs.iter().map(AlignmentRecord::from).collect();
    formats::write_alignments(&a.out, &records)?;
    if let Some(p) = &a.pairs_out {
        formats::write_ne_pairs(p, &result.ne_pairs)?;
    }
    print!("{}", corpus::summary(&result.pairs));
    println!("  type disagreements: {}", result.type_disagreements);
    Ok(())
}

#[derive(Debug, Args)]
pub struct ReplaceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Training mode: source side of the corpus
    #[arg(long, value_hint = ValueHint::FilePath, requires_all = ["tgt", "alignments", "out_src", "out_tgt"], conflicts_with = "input")]
    pub src: Option<PathBuf>,
    /// Training mode: target side of the corpus
    #[arg(long, value_hint = ValueHint::FilePath, requires = "src")]
    pub tgt: Option<PathBuf>,
    #[arg(long, default_value = "zh")]
    pub src_lang: String,
    #[arg(long, default_value = "en")]
    pub tgt_lang: String,
    /// Training mode: alignments of the corpus
    #[arg(long, value_hint = ValueHint::FilePath, requires = "src")]
    pub alignments: Option<PathBuf>,
    /// Training mode: rewritten source side
    #[arg(long, value_hint = ValueHint::FilePath, requires = "src")]
    pub out_src: Option<PathBuf>,
    /// Training mode: rewritten target side
    #[arg(long, value_hint = ValueHint::FilePath, requires = "src")]
    pub out_tgt: Option<PathBuf>,
    /// Test mode: sentences to be translated
    #[arg(long, value_hint = ValueHint::FilePath, requires = "out", required_unless_present = "src")]
    pub input: Option<PathBuf>,
    /// Test mode: language of --input
    #[arg(long, default_value = "zh")]
    pub lang: String,
    /// Test mode: stand-off annotations (source side) of --input
    #[arg(long, value_hint = ValueHint::FilePath, conflicts_with = "gazetteer")]
    pub annotations: Option<PathBuf>,
    /// Test mode: gazetteer for --input
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub gazetteer: Option<PathBuf>,
    /// Test mode: do not detect numeric expressions with the gazetteer
    #[arg(long)]
    pub no_numeric: bool,
    /// Test mode: frequency-ranked word list of the translation system
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub vocab: Option<PathBuf>,
    /// Words of --vocab that are in the vocabulary
    #[arg(long, default_value_t = DEFAULT_VOCAB_SIZE)]
    pub vocab_size: usize,
    /// Test mode: replace only entities with a word outside the vocabulary
    #[arg(long, requires = "vocab")]
    pub oov_only: bool,
    /// Test mode: rewritten sentences
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: Option<PathBuf>,
    /// Symbol sidecar to write
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub symbols: PathBuf,
}

pub fn replace(a: ReplaceArgs) -> CliResult {
    if let (Some(src), Some(tgt), Some(al), Some(out_src), Some(out_tgt)) =
        (&a.src, &a.tgt, &a.alignments, &a.out_src, &a.out_tgt)
    {
        let corpus = formats::read_parallel_corpus(src, tgt, &a.src_lang, &a.tgt_lang)?;
        let records = formats::read_alignments(al)?;
        let aligned = corpus::records_to_pairs(&corpus, &records)?;
        let rewritten = corpus::replace_corpus(&corpus, &aligned, a.common.jobs)?;
        formats::write_sentences(out_src, rewritten.iter().map(|(p, _)| &p.src))?;
        formats::write_sentences(out_tgt, rewritten.iter().map(|(p, _)| &p.tgt))?;
        let maps = rewritten.iter().enumerate().map(|(i, (_, m))| (i, m));
        formats::write_text(&a.symbols, &formats::format_symbols(maps)?)?;
        let n: usize = rewritten.iter().map(|(_, m)| m.len()).sum();
        println!("replaced {n} entities in {} sentence pairs", rewritten.len());
        return Ok(());
    }
    let (Some(input), Some(out)) = (&a.input, &a.out) else {
        return Err(CliError::Usage(
            "give --src/--tgt/--alignments/--out-src/--out-tgt or --input/--out".into(),
        ));
    };
    let sentences = formats::read_sentences(input, &a.lang)?;
    let recognizer: Box<dyn Recognizer> = match (&a.annotations, &a.gazetteer) {
        (Some(p), None) => {
            let ann = formats::read_annotations(p)?;
            if let Some(s) = ann.spans.iter().find(|s| s.side != Side::Source) {
                return Err(CliError::Data(format!(
                    "{}: sentence {} has a {} span; test input is annotated as source",
                    p.display(),
                    s.sentence_id,
                    s.side
                )));
            }
            Box::new(AnnotationRecognizer::new(ann.spans))
        }
        (None, Some(g)) => Box::new(load_gazetteer(g, !a.no_numeric)?),
        _ => return Err(CliError::Usage("test mode needs --annotations or --gazetteer".into())),
    };
    let vocab = match &a.vocab {
        Some(p) => Some(formats::read_vocabulary(p, a.vocab_size)?),
        None => None,
    };
    let rewritten =
        corpus::replace_sentences(&sentences, recognizer.as_ref(), vocab.as_ref(), a.oov_only, a.common.jobs)?;
    formats::write_sentences(out, rewritten.iter().map(|(s, _)| s))?;
    let maps = rewritten.iter().enumerate().map(|(i, (_, m))| (i, m));
    formats::write_text(&a.symbols, &formats::format_symbols(maps)?)?;
    let n: usize = rewritten.iter().map(|(_, m)| m.len()).sum();
    println!("replaced {n} entities in {} sentences", rewritten.len());
    Ok(())
}

#[derive(Debug, Args)]
pub struct ExtractLexArgs {
    #[command(flatten)]
    pub common: Common,
    /// Extracted entity pairs
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub pairs: PathBuf,
    /// Key the table by the target column
    #[arg(long)]
    pub reverse: bool,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: Option<PathBuf>,
}

pub fn extract_lex(a: ExtractLexArgs) -> CliResult {
    let mut pairs = formats::read_ne_pairs(&a.pairs)?;
    if a.reverse {
        pairs = pairs.iter().map(NePair::swapped).collect();
    }
    let table = pipeline::extract_lexical_table(&pairs);
    emit(a.out.as_deref(), &formats::format_lexical_table(&table)?)
}

#[derive(Debug, Args)]
pub struct RestoreArgs {
    #[command(flatten)]
    pub common: Common,
    /// Translated sentences containing placeholders
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub input: PathBuf,
    /// Language of --input
    #[arg(long, default_value = "en")]
    pub lang: String,
    /// Symbol sidecar written by replace
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub symbols: PathBuf,
    /// Language of the original source text
    #[arg(long, default_value = "zh")]
    pub src_lang: String,
    /// Lexical table consulted first
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub table: Option<PathBuf>,
    /// Entity translation model consulted for names missing from the table
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub model: Option<PathBuf>,
    #[arg(long, value_hint = ValueHint::FilePath)]
    pub out: PathBuf,
}

pub fn restore(a: RestoreArgs) -> CliResult {
    let output = formats::read_sentences(&a.input, &a.lang)?;
    let maps = formats::read_symbols(&a.symbols)?;
    if let Some((&id, _)) = maps.range(output.len()..).next() {
        return Err(CliError::Data(format!(
            "{}: symbols for sentence {id} but {} has {} sentences",
            a.symbols.display(),
            a.input.display(),
            output.len()
        )));
    }
    let table = match &a.table {
        Some(p) => formats::read_lexical_table(p)?,
        None => LexicalTable::new(),
    };
    let translator = load_translator(a.model.as_deref(), None, false)?;
    let cfg = RestoreConfig { src_lang: a.src_lang.clone() };
    let (restored, report) =
        corpus::restore_corpus(&output, &maps, &table, translator.get(), &cfg, a.common.jobs);
    formats::write_sentences(&a.out, &restored)?;
    println!("from table: {}", report.from_table);
    println!("from translator: {}", report.from_translator);
    println!("from rules: {}", report.from_rules);
    println!("copied untranslated: {}", report.copied.len());
    println!("dropped unknown placeholders: {}", report.dropped.len());
    println!("unrealized symbols: {}", report.unrealized.len());
    println!("warnings: {}", report.warnings());
    for s in &report.dropped {
        log::warn!("dropped placeholder {s} with no symbol entry");
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub common: Common,
    /// Directory receiving the generated files
    #[arg(long, value_hint = ValueHint::DirPath)]
    pub out_dir: PathBuf,
    /// Distinct planted entity pairs
    #[arg(long, default_value_t = 50)]
    pub plants: usize,
    /// Sentence pairs
    #[arg(long, default_value_t = 200)]
    pub sentences: usize,
    /// Per-character corruption probability of the translation lists
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    /// Fraction of entity occurrences annotated on one side only
    #[arg(long, default_value_t = 0.0)]
    pub one_sided: f64,
    /// Size of the stand-alone transliteration list
    #[arg(long, default_value_t = 100)]
    pub translit: usize,
}

pub fn synth(a: SynthArgs) -> CliResult {
    for (name, v) in [("--noise", a.noise), ("--one-sided", a.one_sided)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!("{name} must lie in [0, 1]")));
        }
    }
    if a.plants == 0 || a.sentences == 0 {
        return Err(CliError::Usage("--plants and --sentences must be at least 1".into()));
    }
    let data = synth::generate(&SynthConfig {
        plants: a.plants,
        sentences: a.sentences,
        noise: a.noise,
        one_sided: a.one_sided,
        translit: a.translit,
        seed: a.common.seed,
    });
    std::fs::create_dir_all(&a.out_dir).map_err(|e| CliError::Data(format!("{}: {e}", a.out_dir.display())))?;
    let d = &a.out_dir;
    formats::write_sentences(&d.join("corpus.zh"), data.corpus.iter().map(|p| &p.src))?;
    formats::write_sentences(&d.join("corpus.en"), data.corpus.iter().map(|p| &p.tgt))?;
    formats::write_annotations(&d.join("annotations.tsv"), &data.annotations)?;
    formats::write_alignments(&d.join("gold.tsv"), &data.gold)?;
    formats::write_ne_pairs(&d.join("plants.tsv"), &data.plants)?;
    formats::write_ne_pairs(&d.join("lexicon_s2t.tsv"), &data.lexicon_s2t)?;
    formats::write_ne_pairs(&d.join("lexicon_t2s.tsv"), &data.lexicon_t2s)?;
    formats::write_ne_pairs(&d.join("translit.tsv"), &data.translit)?;
    println!(
        "{} sentence pairs, {} annotations, {} planted pairs written to {}",
        data.corpus.len(),
        data.annotations.len(),
        data.plants.len(),
        d.display()
    );
    Ok(())
}
