//! Prediction accuracy on a test corpus and comparison tables.

use std::fmt::Write;

use crate::classifiers::{predict, predict_baseline, Method, TrainedModel};
use crate::corpus::{find_occurrences, Sentence};
use crate::features::FeatureKind;

#[derive(Debug, Clone, PartialEq)]
pub struct MethodScore {
    pub method: Method,
    pub correct: usize,
    pub incorrect: usize,
    /// Features the method can consult (none for the baseline).
    pub features: Option<usize>,
}

impl MethodScore {
    pub fn accuracy(&self) -> Option<f64> {
        let total = self.correct + self.incorrect;
        (total > 0).then(|| self.correct as f64 / total as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    /// Most frequent training word.
    pub label: String,
    pub n_train: u64,
    pub n_test: usize,
    /// Baseline accuracy, kept even when the baseline column is not shown
    /// because rows are ordered by it.
    pub baseline: Option<f64>,
    pub scores: Vec<MethodScore>,
}

impl EvalRecord {
    /// No test occurrences: nothing to score, excluded from averages.
    pub fn untestable(&self) -> bool {
        self.n_test == 0
    }

    pub fn accuracy(&self, method: Method) -> Option<f64> {
        self.scores
            .iter()
            .find(|s| s.method == method)
            .and_then(MethodScore::accuracy)
    }
}

fn feature_count(model: &TrainedModel, method: Method) -> Option<usize> {
    match method {
        Method::Baseline => None,
        Method::ContextWords => Some(model.count(FeatureKind::ContextWord)),
        Method::Collocations => Some(model.count(FeatureKind::Collocation)),
        Method::DecisionList | Method::Bayes => Some(model.features.len()),
    }
}

/// Predict every test occurrence with each method, treating the written
/// word as ground truth.
pub fn evaluate(model: &TrainedModel, test: &[Sentence], methods: &[Method]) -> EvalRecord {
    let occurrences = find_occurrences(test, &model.cset);
    let baseline_choice = predict_baseline(model).chosen;
    let baseline_correct = occurrences
        .iter()
        .filter(|o| o.observed == baseline_choice)
        .count();
    let scores = methods
        .iter()
        .map(|&method| {
            let correct = occurrences
                .iter()
                .filter(|occ| predict(model, method, occ).chosen == occ.observed)
                .count();
            MethodScore {
                method,
                correct,
                incorrect: occurrences.len() - correct,
                features: feature_count(model, method),
            }
        })
        .collect();
    EvalRecord {
        label: model.label().to_string(),
        n_train: model.n_train(),
        n_test: occurrences.len(),
        baseline: (!occurrences.is_empty())
            .then(|| baseline_correct as f64 / occurrences.len() as f64),
        scores,
    }
}

fn method_header(method: Method) -> &'static str {
    match method {
        Method::Baseline => "Baseline",
        Method::ContextWords => "Cwords",
        Method::Collocations => "Collocs",
        Method::DecisionList => "Dlist",
        Method::Bayes => "Bayes",
    }
}

fn ordered(records: &[EvalRecord]) -> Vec<&EvalRecord> {
    let mut rows: Vec<&EvalRecord> = records.iter().collect();
    rows.sort_by(|a, b| {
        a.untestable()
            .cmp(&b.untestable())
            .then(
                b.baseline
                    .unwrap_or(0.0)
                    .total_cmp(&a.baseline.unwrap_or(0.0)),
            )
            .then(a.label.cmp(&b.label))
    });
    rows
}

fn average_features(records: &[&EvalRecord], method: Method) -> Option<f64> {
    let counts: Vec<usize> = records
        .iter()
        .filter(|r| !r.untestable())
        .filter_map(|r| r.scores.iter().find(|s| s.method == method)?.features)
        .collect();
    (!counts.is_empty()).then(|| counts.iter().sum::<usize>() as f64 / counts.len() as f64)
}

fn cell(value: Option<f64>) -> String {
    value.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

/// Plain-text table, one row per confusion set ordered by descending
/// baseline accuracy, plus a row of average feature-list sizes.
pub fn render_table(records: &[EvalRecord], methods: &[Method]) -> String {
    let rows = ordered(records);
    let label_width = rows
        .iter()
        .map(|r| r.label.chars().count())
        .chain(["Confusion set".len(), "Avg no. of features".len()])
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    write!(
        out,
        "{:<label_width$}  {:>6}  {:>6}",
        "Confusion set", "Train", "Test"
    )
    .unwrap();
    for m in methods {
        write!(out, "  {:>8}", method_header(*m)).unwrap();
    }
    out.push('\n');
    for r in &rows {
        write!(
            out,
            "{:<label_width$}  {:>6}  {:>6}",
            r.label, r.n_train, r.n_test
        )
        .unwrap();
        for m in methods {
            write!(out, "  {:>8}", cell(r.accuracy(*m))).unwrap();
        }
        out.push('\n');
    }
    let averages: Vec<Option<f64>> = methods
        .iter()
        .map(|m| average_features(&rows, *m))
        .collect();
    if !rows.is_empty() && averages.iter().any(Option::is_some) {
        write!(
            out,
            "{:<label_width$}  {:>6}  {:>6}",
            "Avg no. of features", "", ""
        )
        .unwrap();
        for avg in averages {
            let text = avg.map_or_else(String::new, |a| format!("{a:.1}"));
            write!(out, "  {text:>8}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Tab-separated variant: label, n_train, n_test, then one accuracy column
/// per method in the order given.
pub fn render_tsv(records: &[EvalRecord], methods: &[Method]) -> String {
    let mut out = String::from("label\tn_train\tn_test");
    for m in methods {
        write!(out, "\t{}", m.name()).unwrap();
    }
    out.push('\n');
    for r in ordered(records) {
        write!(out, "{}\t{}\t{}", r.label, r.n_train, r.n_test).unwrap();
        for m in methods {
            write!(out, "\t{}", cell(r.accuracy(*m))).unwrap();
        }
        out.push('\n');
    }
    out
}
