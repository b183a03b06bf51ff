//! The `cssc` command line: train, eval, correct and inspect.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. `CSSC_TAGS` names the
//! default tag dictionary; without it the bundled dictionary is used.
//! Training copies the dictionary it used into the model directory as
//! `tags.dict`, and `eval`/`correct` tag their input with that copy.
//!
//! Commands never coordinate with each other: two `train` runs writing to
//! the same directory at once will interleave files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::classifiers::{correct_text, train, FeatureKinds, Method, TrainConfig, TrainedModel};
use crate::corpus::{load_confusion_sets, read_corpus, Sentence, TagDictionary, BUNDLED_TAGS};
use crate::error::{Error, Result};
use crate::evalharness::{evaluate, render_table, render_tsv};
use crate::features::FeatureKind;
use crate::modelfile;
use crate::stats::{Metric, PruneConfig};

pub const TAGS_ENV: &str = "CSSC_TAGS";
pub const MODEL_TAGS_FILE: &str = "tags.dict";

#[derive(Debug, Parser)]
#[command(
    name = "cssc",
    version,
    about = "Context-sensitive spelling correction over confusion sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one model per confusion set.
    Train(TrainArgs),
    /// Score models on a test corpus.
    Eval(EvalArgs),
    /// Report suggested corrections for a text.
    Correct(CorrectArgs),
    /// List a model's features in strength order.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Training text: a file, or a directory of files.
    #[arg(long)]
    corpus: PathBuf,
    /// One confusion set per line, words separated by commas.
    #[arg(long)]
    confusion_sets: PathBuf,
    /// Tag dictionary (defaults to $CSSC_TAGS, then the bundled one).
    #[arg(long, env = TAGS_ENV)]
    tags: Option<PathBuf>,
    /// Directory for the model files.
    #[arg(long)]
    out: PathBuf,
    /// Half-width of the context-word window.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Maximum number of collocation elements.
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Minimum count of both presence and absence for a feature.
    #[arg(long, default_value_t = 10)]
    tmin: u64,
    /// Significance level of the chi-square test.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// reliability or uxy.
    #[arg(long, default_value = "reliability")]
    metric: String,
    /// cwords, collocs, or cwords,collocs.
    #[arg(long, default_value = "cwords,collocs")]
    features: String,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Directory written by `train`.
    #[arg(long)]
    models: PathBuf,
    /// Test text, assumed free of errors.
    #[arg(long)]
    test: PathBuf,
    /// Comma-separated: baseline, cwords, collocs, dlist, bayes.
    #[arg(long, default_value = "baseline,cwords,collocs,dlist,bayes")]
    methods: String,
    /// Tab-separated output.
    #[arg(long)]
    tsv: bool,
}

#[derive(Debug, Args)]
struct CorrectArgs {
    /// Directory written by `train`.
    #[arg(long)]
    models: PathBuf,
    /// Text to check.
    #[arg(long = "in")]
    input: PathBuf,
    /// baseline, cwords, collocs, dlist or bayes.
    #[arg(long, default_value = "bayes")]
    method: String,
    /// Minimum posterior gain of the suggestion over the written word.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// A .model file.
    #[arg(long)]
    model: PathBuf,
    /// Show only the strongest n features.
    #[arg(long)]
    top: Option<usize>,
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(out, "{rendered}");
                return 0;
            }
            let _ = write!(err, "{rendered}");
            return 1;
        }
    };
    let result = match cli.command {
        Command::Train(a) => cmd_train(&a, out, err),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Correct(a) => cmd_correct(&a, out),
        Command::Inspect(a) => cmd_inspect(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn parse_methods(list: &str) -> Result<Vec<Method>> {
    list.split(',').map(|m| m.trim().parse()).collect()
}

/// The dictionary text for training: --tags / $CSSC_TAGS, else bundled.
fn training_tags(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::io(p, e)),
        None => Ok(BUNDLED_TAGS.to_string()),
    }
}

/// The dictionary saved next to the models, falling back like training.
fn model_tags(models: &Path) -> Result<TagDictionary> {
    let saved = models.join(MODEL_TAGS_FILE);
    if saved.is_file() {
        return TagDictionary::load(&saved);
    }
    match std::env::var_os(TAGS_ENV) {
        Some(p) => TagDictionary::load(Path::new(&p)),
        None => Ok(TagDictionary::bundled()),
    }
}

fn tagged_corpus(path: &Path, dict: &TagDictionary) -> Result<Vec<Sentence>> {
    let mut sentences = read_corpus(path)?;
    dict.annotate(&mut sentences);
    Ok(sentences)
}

fn load_models(dir: &Path) -> Result<Vec<TrainedModel>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path
            .extension()
            .is_some_and(|e| e == modelfile::MODEL_EXTENSION)
        {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Usage(format!(
            "no .model files in {}",
            dir.display()
        )));
    }
    paths.iter().map(|p| modelfile::load(p)).collect()
}

fn cmd_train(args: &TrainArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = TrainConfig {
        k: args.k,
        ell: args.ell,
        prune: PruneConfig {
            t_min: args.tmin,
            alpha: args.alpha,
        },
        metric: args.metric.parse::<Metric>()?,
        kinds: args.features.parse::<FeatureKinds>()?,
    };
    config.validate()?;

    let sets = load_confusion_sets(&args.confusion_sets)?;
    let tags_text = training_tags(args.tags.as_deref())?;
    let dict = TagDictionary::parse(&tags_text)?;
    let sentences = tagged_corpus(&args.corpus, &dict)?;

    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let tags_copy = args.out.join(MODEL_TAGS_FILE);
    fs::write(&tags_copy, &tags_text).map_err(|e| Error::io(&tags_copy, e))?;

    let results: Vec<Result<TrainedModel>> = sets
        .par_iter()
        .map(|cset| train(&sentences, cset, &config))
        .collect();
    for (cset, result) in sets.iter().zip(results) {
        let model = match result {
            Ok(m) => m,
            Err(Error::Training { .. }) => {
                let _ = writeln!(err, "warning: {cset}: no training occurrences, skipped");
                continue;
            }
            Err(e) => return Err(e),
        };
        let path = args
            .out
            .join(format!("{}.{}", cset.slug(), modelfile::MODEL_EXTENSION));
        modelfile::save(&model, &path)?;
        write_out(
            out,
            &format!(
                "{cset}: {} training occurrences, {} context words, {} collocations -> {}\n",
                model.n_train(),
                model.count(FeatureKind::ContextWord),
                model.count(FeatureKind::Collocation),
                path.display()
            ),
        )?;
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let methods = parse_methods(&args.methods)?;
    let models = load_models(&args.models)?;
    let dict = model_tags(&args.models)?;
    let test = tagged_corpus(&args.test, &dict)?;
    let records: Vec<_> = models
        .par_iter()
        .map(|m| evaluate(m, &test, &methods))
        .collect();
    let text = if args.tsv {
        render_tsv(&records, &methods)
    } else {
        render_table(&records, &methods)
    };
    write_out(out, &text)
}

fn cmd_correct(args: &CorrectArgs, out: &mut dyn Write) -> Result<()> {
    let method: Method = args.method.parse()?;
    if args.threshold.is_nan() || args.threshold < 0.0 {
        return Err(Error::Usage("threshold must be non-negative".into()));
    }
    let models = load_models(&args.models)?;
    let dict = model_tags(&args.models)?;
    let sentences = tagged_corpus(&args.input, &dict)?;
    let mut text = String::new();
    for s in correct_text(&models, &sentences, args.threshold, method) {
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}\n",
            s.line,
            s.column,
            s.original,
            s.suggested,
            s.p_original,
            s.p_suggested,
            s.set,
            if s.shared { "shared" } else { "-" }
        ));
    }
    write_out(out, &text)
}

/// Feature listing in stored order with per-word counts, strength, and a
/// total-occurrences footer.
pub fn inspect_listing(model: &TrainedModel, top: Option<usize>) -> String {
    let shown = &model.features[..top.unwrap_or(usize::MAX).min(model.features.len())];
    let names: Vec<String> = shown.iter().map(|f| f.id.to_string()).collect();
    let name_width = names
        .iter()
        .map(|n| n.chars().count())
        .chain(["Feature".len(), "Total occurrences".len()])
        .max()
        .unwrap_or(0);
    let count_width = |i: usize| {
        let word = model.cset.word(i).chars().count();
        word.max(model.totals[i].to_string().len())
    };

    let mut text = format!(
        "# {}  metric={}  features={}\n{:<name_width$}",
        model.cset,
        model.config.metric,
        model.features.len(),
        "Feature"
    );
    for (i, w) in model.cset.words().iter().enumerate() {
        text.push_str(&format!("  {w:>width$}", width = count_width(i)));
    }
    text.push_str("  Strength\n");
    for (name, f) in names.iter().zip(shown) {
        text.push_str(&format!("{name:<name_width$}"));
        for (i, m) in f.stats.matched().iter().enumerate() {
            text.push_str(&format!("  {m:>width$}", width = count_width(i)));
        }
        text.push_str(&format!("  {:>8.3}\n", f.strength));
    }
    text.push_str(&format!("{:<name_width$}", "Total occurrences"));
    for (i, t) in model.totals.iter().enumerate() {
        text.push_str(&format!("  {t:>width$}", width = count_width(i)));
    }
    text.push('\n');
    text
}

fn cmd_inspect(args: &InspectArgs, out: &mut dyn Write) -> Result<()> {
    let model = modelfile::load(&args.model)?;
    write_out(out, &inspect_listing(&model, args.top))
}
