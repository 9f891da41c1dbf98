//! Accuracy comparison between the compositional scorer (with and without the
//! coordination fix) and the heuristic baseline, over the three evaluation
//! subsets, with disagreement buckets and report files.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::baseline::{score_heuristic_many, BaselineResources, HeuristicConfig, HeuristicHit};
use crate::corpus::{filter_subjective, subset_coordination, subset_negation, CorpusError, GoldLabel, Review};
use crate::lexicon::Lexica;
use crate::scalar::HeuristicScalar;
use crate::scorer::{label_of, score_review, Aggregation, PolarityLabel, ScorerOptions};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("accuracy of an empty record set is undefined")]
    Empty,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write CSV {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dataset {
    All,
    Negation,
    Coordination,
}

impl Dataset {
    pub const ALL: [Dataset; 3] = [Dataset::All, Dataset::Negation, Dataset::Coordination];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::All => "data_all",
            Dataset::Negation => "data_negation",
            Dataset::Coordination => "data_coordination",
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Dataset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    CompositionalOriginal,
    CompositionalModified,
    Baseline,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::CompositionalOriginal => "compositional_original",
            Method::CompositionalModified => "compositional_modified",
            Method::Baseline => "baseline",
        }
    }

    fn options(self, aggregation: Aggregation) -> ScorerOptions {
        ScorerOptions {
            coordination_fix: self == Method::CompositionalModified,
            aggregation,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Disagreement bucket between the compositional and baseline predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    /// Compositional wrong, baseline right.
    C1,
    /// Both wrong.
    C2,
    /// Baseline wrong, compositional right.
    C3,
    /// Both right.
    C4,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::C1, Condition::C2, Condition::C3, Condition::C4];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord<T> {
    pub review_id: String,
    pub gold: GoldLabel,
    pub comp_label: PolarityLabel,
    pub comp_score: T,
    pub base_label: PolarityLabel,
    pub base_score: T,
    /// `(sentence index, head id, branch score)` trace of the compositional
    /// scorer.
    pub comp_branches: Vec<(usize, usize, T)>,
    pub base_hits: Vec<HeuristicHit<T>>,
}

pub fn condition_bucket<T>(record: &PredictionRecord<T>) -> Condition {
    match (record.comp_label == record.gold, record.base_label == record.gold) {
        (false, true) => Condition::C1,
        (false, false) => Condition::C2,
        (true, false) => Condition::C3,
        (true, true) => Condition::C4,
    }
}

/// Fraction of `(predicted, gold)` pairs that agree.
pub fn accuracy(pairs: impl IntoIterator<Item = (PolarityLabel, PolarityLabel)>) -> Result<f64, EvalError> {
    let (mut n, mut correct) = (0usize, 0usize);
    for (predicted, gold) in pairs {
        n += 1;
        correct += usize::from(predicted == gold);
    }
    if n == 0 {
        return Err(EvalError::Empty);
    }
    Ok(correct as f64 / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport<T> {
    pub dataset: Dataset,
    /// The compositional variant compared against the baseline.
    pub method: Method,
    pub n: usize,
    /// `None` when the dataset is empty.
    pub accuracy_comp: Option<f64>,
    pub accuracy_base: Option<f64>,
    pub condition_counts: BTreeMap<Condition, usize>,
    pub per_review: Vec<PredictionRecord<T>>,
}

impl<T> EvalReport<T> {
    fn build(dataset: Dataset, method: Method, mut per_review: Vec<PredictionRecord<T>>) -> Result<Self, EvalError> {
        per_review.sort_by(|a, b| a.review_id.cmp(&b.review_id));
        let mut condition_counts: BTreeMap<Condition, usize> = Condition::ALL.iter().map(|c| (*c, 0)).collect();
        for record in &per_review {
            *condition_counts.entry(condition_bucket(record)).or_default() += 1;
        }
        let n = per_review.len();
        let (accuracy_comp, accuracy_base) = if n == 0 {
            (None, None)
        } else {
            (
                Some(accuracy(per_review.iter().map(|r| (r.comp_label, r.gold)))?),
                Some(accuracy(per_review.iter().map(|r| (r.base_label, r.gold)))?),
            )
        };
        let report = EvalReport {
            dataset,
            method,
            n,
            accuracy_comp,
            accuracy_base,
            condition_counts,
            per_review,
        };
        report.check_consistency();
        Ok(report)
    }

    pub fn count(&self, condition: Condition) -> usize {
        self.condition_counts.get(&condition).copied().unwrap_or(0)
    }

    /// Buckets partition the records, and both accuracies can be read off
    /// the buckets.
    pub fn check_consistency(&self) {
        let c = |k| self.count(k);
        let total: usize = Condition::ALL.iter().map(|k| c(*k)).sum();
        assert_eq!(total, self.n, "condition buckets must cover every record");
        if self.n > 0 {
            let n = self.n as f64;
            assert_eq!(self.accuracy_comp, Some((c(Condition::C3) + c(Condition::C4)) as f64 / n));
            assert_eq!(self.accuracy_base, Some((c(Condition::C1) + c(Condition::C4)) as f64 / n));
        }
    }
}

/// Everything both methods need to score a corpus.
#[derive(Debug, Clone)]
pub struct EvalResources<T> {
    pub lexica: Lexica<T>,
    pub baseline: BaselineResources<T>,
    pub config: HeuristicConfig<T>,
    pub aggregation: Aggregation,
}

struct Scored<T> {
    label: PolarityLabel,
    score: T,
    branches: Vec<(usize, usize, T)>,
}

fn score_comp<T: HeuristicScalar>(review: &Review, lexica: &Lexica<T>, options: ScorerOptions) -> Scored<T> {
    let (total, sentences) = score_review(&review.sentences, lexica, options);
    let branches = sentences
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.contributing_branches.iter().map(move |(h, v)| (i + 1, *h, *v)))
        .collect();
    Scored {
        label: label_of(total),
        score: total,
        branches,
    }
}

/// Scores every subjective review with all three methods and assembles one
/// report per (compositional variant, dataset).
pub fn run_comparison<T: HeuristicScalar>(
    reviews: &[Review],
    resources: &EvalResources<T>,
) -> Result<Vec<EvalReport<T>>, EvalError> {
    let all = filter_subjective(reviews);
    let negation = subset_negation(all.iter().copied(), &resources.lexica.negators)?;
    let coordination = subset_coordination(all.iter().copied())?;

    let mut cache: HashMap<&str, BTreeMap<Method, PredictionRecord<T>>> = HashMap::new();
    for review in &all {
        let gold = review.gold().expect("subjective reviews have opinions");
        let base = score_heuristic_many(&review.sentences, &resources.baseline, &resources.config);
        let base_label = base.label(&resources.config);
        let mut by_method = BTreeMap::new();
        for method in [Method::CompositionalOriginal, Method::CompositionalModified] {
            let comp = score_comp(review, &resources.lexica, method.options(resources.aggregation));
            by_method.insert(
                method,
                PredictionRecord {
                    review_id: review.review_id.clone(),
                    gold,
                    comp_label: comp.label,
                    comp_score: comp.score,
                    base_label,
                    base_score: base.value,
                    comp_branches: comp.branches,
                    base_hits: base.hits.clone(),
                },
            );
        }
        cache.insert(&review.review_id, by_method);
    }

    let mut reports = Vec::new();
    for (dataset, members) in Dataset::ALL.iter().zip([&all, &negation, &coordination]) {
        for method in [Method::CompositionalOriginal, Method::CompositionalModified] {
            let records = members
                .iter()
                .map(|r| cache[r.review_id.as_str()][&method].clone())
                .collect();
            reports.push(EvalReport::build(*dataset, method, records)?);
        }
    }
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetailFormat {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub summary: PathBuf,
    pub details: PathBuf,
}

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub dataset: Dataset,
    pub method: Method,
    pub n: usize,
    pub accuracy: Option<f64>,
    /// Buckets are only defined for the compositional rows.
    pub conditions: Option<[usize; 4]>,
}

impl SummaryRow {
    pub fn status(&self) -> &'static str {
        if self.n == 0 {
            "empty"
        } else {
            "ok"
        }
    }
}

/// Table rows in (dataset, method) order: original, modified, then baseline
/// for each dataset.
pub fn summary_rows<T>(reports: &[EvalReport<T>]) -> Vec<SummaryRow> {
    let mut sorted: Vec<&EvalReport<T>> = reports.iter().collect();
    sorted.sort_by_key(|r| (r.dataset, r.method));
    let mut rows = Vec::new();
    for dataset in Dataset::ALL {
        let cells: Vec<_> = sorted.iter().filter(|r| r.dataset == dataset).collect();
        for report in &cells {
            rows.push(SummaryRow {
                dataset,
                method: report.method,
                n: report.n,
                accuracy: report.accuracy_comp,
                conditions: Some(Condition::ALL.map(|c| report.count(c))),
            });
        }
        if let Some(first) = cells.first() {
            rows.push(SummaryRow {
                dataset,
                method: Method::Baseline,
                n: first.n,
                accuracy: first.accuracy_base,
                conditions: None,
            });
        }
    }
    rows
}

fn fmt_accuracy(a: Option<f64>) -> String {
    a.map(|v| format!("{v:.4}")).unwrap_or_default()
}

/// Plain-text rendering of the summary table.
pub fn render_table<T>(reports: &[EvalReport<T>]) -> String {
    let mut out = format!(
        "{:<18} {:<24} {:>6} {:>9} {:>5} {:>5} {:>5} {:>5}  {}\n",
        "dataset", "method", "n", "accuracy", "C1", "C2", "C3", "C4", "status"
    );
    for row in summary_rows(reports) {
        let c = row
            .conditions
            .map(|c| c.map(|v| v.to_string()))
            .unwrap_or_else(|| std::array::from_fn(|_| "-".to_string()));
        out.push_str(&format!(
            "{:<18} {:<24} {:>6} {:>9} {:>5} {:>5} {:>5} {:>5}  {}\n",
            row.dataset.name(),
            row.method.name(),
            row.n,
            fmt_accuracy(row.accuracy),
            c[0],
            c[1],
            c[2],
            c[3],
            row.status()
        ));
    }
    out
}

#[derive(Serialize)]
struct DetailRow<'a, T> {
    dataset: Dataset,
    method: Method,
    #[serde(flatten)]
    record: &'a PredictionRecord<T>,
    condition: Condition,
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> EvalError + '_ {
    move |source| EvalError::Write {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> EvalError + '_ {
    move |source| EvalError::Csv {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `summary.csv` and the per-review detail file into `dir`.
pub fn emit_report<T: HeuristicScalar + Serialize>(
    reports: &[EvalReport<T>],
    dir: impl AsRef<Path>,
    format: DetailFormat,
) -> Result<ReportFiles, EvalError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(write_err(dir))?;

    let summary = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&summary).map_err(csv_err(&summary))?;
    w.write_record(["dataset", "method", "n", "accuracy", "c1", "c2", "c3", "c4", "status"])
        .map_err(csv_err(&summary))?;
    for row in summary_rows(reports) {
        let c = row
            .conditions
            .map(|c| c.map(|v| v.to_string()))
            .unwrap_or_default();
        w.write_record([
            row.dataset.name().to_string(),
            row.method.name().to_string(),
            row.n.to_string(),
            fmt_accuracy(row.accuracy),
            c[0].clone(),
            c[1].clone(),
            c[2].clone(),
            c[3].clone(),
            row.status().to_string(),
        ])
        .map_err(csv_err(&summary))?;
    }
    w.flush().map_err(write_err(&summary))?;

    let mut sorted: Vec<&EvalReport<T>> = reports.iter().collect();
    sorted.sort_by_key(|r| (r.dataset, r.method));
    let details = match format {
        DetailFormat::Jsonl => {
            let path = dir.join("details.jsonl");
            let file = File::create(&path).map_err(write_err(&path))?;
            let mut out = BufWriter::new(file);
            for report in &sorted {
                for record in &report.per_review {
                    let row = DetailRow {
                        dataset: report.dataset,
                        method: report.method,
                        record,
                        condition: condition_bucket(record),
                    };
                    let line = serde_json::to_string(&row).expect("report rows serialize");
                    writeln!(out, "{line}").map_err(write_err(&path))?;
                }
            }
            out.flush().map_err(write_err(&path))?;
            path
        }
        DetailFormat::Csv => {
            let path = dir.join("details.csv");
            let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
            w.write_record([
                "dataset",
                "method",
                "review_id",
                "gold",
                "comp_label",
                "comp_score",
                "base_label",
                "base_score",
                "condition",
            ])
            .map_err(csv_err(&path))?;
            for report in &sorted {
                for r in &report.per_review {
                    w.write_record([
                        report.dataset.name().to_string(),
                        report.method.name().to_string(),
                        r.review_id.clone(),
                        r.gold.to_string(),
                        r.comp_label.to_string(),
                        r.comp_score.to_string(),
                        r.base_label.to_string(),
                        r.base_score.to_string(),
                        format!("{:?}", condition_bucket(r)),
                    ])
                    .map_err(csv_err(&path))?;
                }
            }
            w.flush().map_err(write_err(&path))?;
            path
        }
    };
    Ok(ReportFiles { summary, details })
}
