//! `compsent` command-line front end.
//!
//! Exit codes: 0 on success, 1 when evaluation or writing output fails, 2 for
//! usage and input errors.

use std::fmt::Display;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use compsent::corpus::{attach_parses, statistics, LoadedCorpus};
use compsent::eval::render_table;
use compsent::focus::{exhaustive_inference, interpret, parse_exprs, parse_model, Denotation};
use compsent::{
    classify, emit_report, filter_subjective, load_corpus, parse_conllu, run_comparison, score_sentence,
    subset_coordination, subset_negation, Aggregation, BaselineLexica, Config, DetailFormat, EvalInputs,
    Lexicon, NegatorSet, Resources, Review, ScorerOptions, Sentence,
};

#[derive(Parser)]
#[command(name = "compsent", version, about = "Compositional sentiment scoring over dependency parses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every sentence of a CoNLL-U file.
    Score(ScoreArgs),
    /// Compare the compositional scorer with the heuristic baseline on a corpus.
    Evaluate(EvaluateArgs),
    /// List the negation and coordination subsets of a corpus.
    Subsets(SubsetArgs),
    /// Print ordinary and focus semantic values of expressions in a model.
    Focus(FocusArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Sum,
    Mean,
}

impl From<AggregationArg> for Aggregation {
    fn from(a: AggregationArg) -> Self {
        match a {
            AggregationArg::Sum => Aggregation::Sum,
            AggregationArg::Mean => Aggregation::Mean,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    /// Tab-separated lines (score) or CSV details (evaluate).
    #[default]
    Table,
    /// One JSON object per line.
    Records,
}

#[derive(Args)]
struct LexiconArgs {
    #[arg(long, value_name = "TSV")]
    sentiment_lex: PathBuf,
    #[arg(long, value_name = "TSV")]
    intensifier_lex: PathBuf,
    #[arg(long, value_name = "FILE")]
    negator_lex: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long, value_name = "FILE")]
    conllu: PathBuf,
    #[command(flatten)]
    lexica: LexiconArgs,
    #[arg(long, value_enum, default_value = "on")]
    coordination_fix: Switch,
    #[arg(long, value_enum, default_value = "sum")]
    aggregation: AggregationArg,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    #[arg(long, value_name = "FILE")]
    conllu: PathBuf,
    #[command(flatten)]
    lexica: LexiconArgs,
    /// Baseline sentiment lexicon; the intensifier and negator lists are shared.
    #[arg(long, value_name = "TSV")]
    baseline_lex: PathBuf,
    /// Baseline constants; defaults are used when omitted.
    #[arg(long, value_name = "FILE")]
    baseline_config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sum")]
    aggregation: AggregationArg,
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct SubsetArgs {
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    #[arg(long, value_name = "FILE")]
    conllu: PathBuf,
    #[arg(long, value_name = "FILE")]
    negator_lex: PathBuf,
}

#[derive(Args)]
struct FocusArgs {
    /// One expression per line.
    #[arg(long, value_name = "FILE")]
    expr: PathBuf,
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
}

/// Error carrying the exit code it maps to.
enum Failure {
    Input(String),
    Evaluation(String),
    Output(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

impl Failure {
    fn input(context: impl Display, err: impl Display) -> Self {
        Failure::Input(format!("{context}: {err}"))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(path.display(), e))
}

fn load_lexica(args: &LexiconArgs) -> Result<Resources, Failure> {
    Resources::load(&args.sentiment_lex, &args.intensifier_lex, &args.negator_lex)
        .map_err(|e| Failure::input("cannot load lexica", e))
}

fn load_parses(path: &Path) -> Result<Vec<Sentence>, Failure> {
    parse_conllu(&read(path)?).map_err(|e| Failure::input(path.display(), e))
}

fn load_reviews(corpus: &Path, conllu: &Path) -> Result<Vec<Review>, Failure> {
    let LoadedCorpus {
        mut reviews,
        diagnostics,
    } = load_corpus(corpus).map_err(|e| Failure::input(corpus.display(), e))?;
    for d in &diagnostics {
        log::warn!(
            "{}: record {}{}: {}",
            corpus.display(),
            d.record,
            d.review_id.as_deref().map(|id| format!(" ({id})")).unwrap_or_default(),
            d.message
        );
    }
    attach_parses(&mut reviews, load_parses(conllu)?).map_err(|e| Failure::input(conllu.display(), e))?;
    Ok(reviews)
}

fn score(args: &ScoreArgs, out: &mut impl Write) -> Result<(), Failure> {
    let lexica = load_lexica(&args.lexica)?;
    let sentences = load_parses(&args.conllu)?;
    let options = ScorerOptions {
        coordination_fix: matches!(args.coordination_fix, Switch::On),
        aggregation: args.aggregation.into(),
    };
    for sentence in &sentences {
        let result = score_sentence(sentence, &lexica, options);
        let label = classify(&result);
        match args.format {
            Format::Table => {
                let trace = result
                    .contributing_branches
                    .iter()
                    .map(|(head, v)| format!("{head}:{v:.4}"))
                    .collect::<Vec<_>>()
                    .join(",");
                writeln!(out, "{}\t{:.4}\t{label}\t{trace}", sentence.source_id, result.value)?;
            }
            Format::Records => {
                let record = serde_json::json!({
                    "sent_id": sentence.source_id,
                    "score": result.value,
                    "label": label,
                    "branches": result.contributing_branches,
                    "conjuncts": result.conjuncts,
                });
                writeln!(out, "{record}")?;
            }
        }
    }
    Ok(())
}

fn evaluate(args: &EvaluateArgs, out: &mut impl Write) -> Result<(), Failure> {
    let lexica = load_lexica(&args.lexica)?;
    let config = match &args.baseline_config {
        Some(path) => Config::load(path).map_err(|e| Failure::input(path.display(), e))?,
        None => Config::default(),
    };
    let baseline = BaselineLexica {
        lexicon: Lexicon::load(&args.baseline_lex).map_err(|e| Failure::input(args.baseline_lex.display(), e))?,
        boosters: lexica.intensifiers.clone(),
        negators: lexica.negators.clone(),
    };
    let reviews = load_reviews(&args.corpus, &args.conllu)?;
    let inputs = EvalInputs {
        lexica,
        baseline,
        config,
        aggregation: args.aggregation.into(),
    };
    let reports = run_comparison(&reviews, &inputs).map_err(|e| Failure::Evaluation(e.to_string()))?;
    let format = match args.format {
        Format::Table => DetailFormat::Csv,
        Format::Records => DetailFormat::Jsonl,
    };
    let files = emit_report(&reports, &args.out_dir, format).map_err(|e| Failure::Evaluation(e.to_string()))?;
    write!(out, "{}", render_table(&reports))?;
    log::info!("wrote {} and {}", files.summary.display(), files.details.display());
    Ok(())
}

fn subsets(args: &SubsetArgs, out: &mut impl Write) -> Result<(), Failure> {
    let negators = NegatorSet::load(&args.negator_lex, true).map_err(|e| Failure::input(args.negator_lex.display(), e))?;
    let reviews = load_reviews(&args.corpus, &args.conllu)?;
    let all = filter_subjective(&reviews);
    let negation = subset_negation(all.iter().copied(), &negators).map_err(|e| Failure::input("negation subset", e))?;
    let coordination = subset_coordination(all.iter().copied()).map_err(|e| Failure::input("coordination subset", e))?;
    let (sentences, tokens) = statistics(all.iter().copied());
    writeln!(out, "reviews\t{}", reviews.len())?;
    writeln!(out, "subjective\t{}", all.len())?;
    writeln!(out, "sentences_per_review\t{sentences:.2}")?;
    writeln!(out, "tokens_per_sentence\t{tokens:.2}")?;
    for (name, members) in [("negation", &negation), ("coordination", &coordination)] {
        let ids: Vec<&str> = members.iter().map(|r| r.review_id.as_str()).collect();
        writeln!(out, "{name}\t{}\t{}", ids.len(), ids.join(","))?;
    }
    Ok(())
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn focus(args: &FocusArgs, out: &mut impl Write) -> Result<(), Failure> {
    let model = parse_model(&read(&args.model)?).map_err(|e| Failure::input(args.model.display(), e))?;
    let exprs = parse_exprs(&read(&args.expr)?).map_err(|e| Failure::input(args.expr.display(), e))?;
    for (i, (line, expr)) in exprs.iter().enumerate() {
        let value = interpret(expr, &model).map_err(|e| Failure::input(format!("{}:{line}", args.expr.display()), e))?;
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "expression: {expr}")?;
        writeln!(out, "ordinary: {}", value.ordinary)?;
        writeln!(out, "focus ({}): {{{}}}", value.focus_set.len(), join(&value.focus_set))?;
        if let Denotation::Prop(_) = value.ordinary {
            match exhaustive_inference(&value, &model) {
                Ok(inferences) => writeln!(out, "inferences: {{{}}}", join(&inferences))?,
                Err(e) => writeln!(out, "inferences: none ({e})")?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let result = match &cli.command {
        Command::Score(args) => score(args, &mut out),
        Command::Evaluate(args) => evaluate(args, &mut out),
        Command::Subsets(args) => subsets(args, &mut out),
        Command::Focus(args) => focus(args, &mut out),
    }
    .and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // a reader that stops early, such as `head`, is not an error
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Output(e)) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Evaluation(message)) => {
            eprintln!("evaluation failed: {message}");
            ExitCode::from(1)
        }
    }
}
