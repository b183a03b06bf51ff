//! Training and the five prediction methods.
//!
//! Training proposes every context word and collocation seen around a
//! training occurrence, counts them per confusion-set word, prunes by the
//! minimum-occurrence and chi-square tests, scores the survivors with the
//! configured strength metric and sorts them strongest first.
//!
//! At run time:
//!
//! * `baseline` ignores the context and picks the most frequent word;
//! * `bayes` starts from the priors and multiplies in the smoothed
//!   likelihood of every matching feature that does not conflict with a
//!   stronger one already accepted;
//! * `cwords` and `collocs` are `bayes` restricted to one feature kind;
//! * `dlist` is `bayes` stopped after the first matching feature, so no
//!   conflicts arise.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::corpus::{find_occurrences, ConfusionSet, Occurrence, Sentence};
use crate::error::{Error, Result};
use crate::features::{
    extract_context_words, features_conflict, generate_collocations, Feature, FeatureId,
    FeatureKind,
};
use crate::stats::{
    chi_square_critical, chi_square_statistic, passes_min_occurrences, smoothed_likelihood,
    FeatureStats, Metric, PruneConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureKinds {
    pub context_words: bool,
    pub collocations: bool,
}

impl FeatureKinds {
    pub const BOTH: FeatureKinds = FeatureKinds {
        context_words: true,
        collocations: true,
    };
    pub const CONTEXT_WORDS: FeatureKinds = FeatureKinds {
        context_words: true,
        collocations: false,
    };
    pub const COLLOCATIONS: FeatureKinds = FeatureKinds {
        context_words: false,
        collocations: true,
    };

    pub fn allows(self, kind: FeatureKind) -> bool {
        match kind {
            FeatureKind::ContextWord => self.context_words,
            FeatureKind::Collocation => self.collocations,
        }
    }
}

impl Default for FeatureKinds {
    fn default() -> Self {
        FeatureKinds::BOTH
    }
}

impl fmt::Display for FeatureKinds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.context_words {
            parts.push("cwords");
        }
        if self.collocations {
            parts.push("collocs");
        }
        f.write_str(&parts.join(","))
    }
}

impl FromStr for FeatureKinds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut kinds = FeatureKinds {
            context_words: false,
            collocations: false,
        };
        for part in s.split(',').map(str::trim) {
            match part {
                "cwords" => kinds.context_words = true,
                "collocs" => kinds.collocations = true,
                other => {
                    return Err(Error::Usage(format!(
                        "unknown feature kind {other:?} (expected cwords and/or collocs)"
                    )))
                }
            }
        }
        Ok(kinds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Half-width of the context-word window.
    pub k: usize,
    /// Maximum number of elements in a collocation.
    pub ell: usize,
    pub prune: PruneConfig,
    pub metric: Metric,
    pub kinds: FeatureKinds,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            k: 3,
            ell: 2,
            prune: PruneConfig::default(),
            metric: Metric::Reliability,
            kinds: FeatureKinds::BOTH,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Usage("k must be at least 1".into()));
        }
        if !(1..=3).contains(&self.ell) {
            return Err(Error::Usage("ell must be 1, 2 or 3".into()));
        }
        if !self.kinds.context_words && !self.kinds.collocations {
            return Err(Error::Usage("no feature kind selected".into()));
        }
        self.prune.validate().map_err(Error::Usage)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub cset: ConfusionSet,
    /// Training occurrences of each word.
    pub totals: Vec<u64>,
    /// Strongest first.
    pub features: Vec<Feature>,
    pub config: TrainConfig,
}

fn argmax_with_tiebreak(scores: &[f64], totals: &[u64]) -> usize {
    (0..scores.len())
        .max_by(|&a, &b| {
            scores[a]
                .total_cmp(&scores[b])
                .then(totals[a].cmp(&totals[b]))
                .then(b.cmp(&a))
        })
        .expect("confusion sets are non-empty")
}

impl TrainedModel {
    pub fn priors(&self) -> Vec<f64> {
        let sum: u64 = self.totals.iter().sum();
        self.totals.iter().map(|&t| t as f64 / sum as f64).collect()
    }

    /// Index of the most frequent training word.
    pub fn majority(&self) -> usize {
        let counts: Vec<f64> = self.totals.iter().map(|&t| t as f64).collect();
        argmax_with_tiebreak(&counts, &self.totals)
    }

    /// The most frequent training word, used to name the set in tables.
    pub fn label(&self) -> &str {
        self.cset.word(self.majority())
    }

    pub fn n_train(&self) -> u64 {
        self.totals.iter().sum()
    }

    pub fn count(&self, kind: FeatureKind) -> usize {
        self.features.iter().filter(|f| f.id.kind() == kind).count()
    }

    /// The model that training with only `kinds` would have produced.
    pub fn restrict(&self, kinds: FeatureKinds) -> TrainedModel {
        TrainedModel {
            cset: self.cset.clone(),
            totals: self.totals.clone(),
            features: self
                .features
                .iter()
                .filter(|f| kinds.allows(f.id.kind()))
                .cloned()
                .collect(),
            config: TrainConfig {
                kinds,
                ..self.config
            },
        }
    }
}

/// Strength descending, then collocations before context words, then the
/// serialized feature text.
pub fn sort_features(features: &mut Vec<Feature>) {
    let mut keyed: Vec<(String, Feature)> =
        features.drain(..).map(|f| (f.id.to_string(), f)).collect();
    keyed.sort_by(|(ta, a), (tb, b)| {
        b.strength
            .total_cmp(&a.strength)
            .then(b.id.kind().cmp(&a.id.kind()))
            .then(ta.cmp(tb))
    });
    features.extend(keyed.into_iter().map(|(_, f)| f));
}

pub fn train(
    sentences: &[Sentence],
    cset: &ConfusionSet,
    config: &TrainConfig,
) -> Result<TrainedModel> {
    config.validate()?;
    let occurrences = find_occurrences(sentences, cset);
    let n = cset.len();
    let mut totals = vec![0u64; n];
    for occ in &occurrences {
        totals[occ.observed] += 1;
    }
    if occurrences.is_empty() {
        return Err(Error::Training {
            set: cset.to_string(),
            message: "no word of the confusion set occurs in the training corpus".into(),
        });
    }

    // A feature matches an occurrence exactly when it is proposed from it,
    // so counting proposals gives m_i directly.
    let mut counts: HashMap<FeatureId, Vec<u64>> = HashMap::new();
    for occ in &occurrences {
        let mut bump =
            |id: FeatureId| counts.entry(id).or_insert_with(|| vec![0; n])[occ.observed] += 1;
        if config.kinds.context_words {
            for word in extract_context_words(occ, config.k) {
                bump(FeatureId::ContextWord(word.to_string()));
            }
        }
        if config.kinds.collocations {
            for colloc in generate_collocations(occ, config.ell) {
                bump(FeatureId::Colloc(colloc));
            }
        }
    }

    let critical = chi_square_critical(config.prune.alpha, n - 1);
    let mut features: Vec<Feature> = counts
        .into_iter()
        .filter_map(|(id, matched)| {
            let stats =
                FeatureStats::new(matched, totals.clone()).expect("counts bounded by totals");
            if !passes_min_occurrences(&stats, config.prune.t_min) {
                return None;
            }
            if chi_square_statistic(&stats) <= critical {
                return None;
            }
            let strength = config.metric.strength(&stats);
            Some(Feature {
                id,
                stats,
                strength,
            })
        })
        .collect();
    sort_features(&mut features);

    Ok(TrainedModel {
        cset: cset.clone(),
        totals,
        features,
        config: *config,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Baseline,
    ContextWords,
    Collocations,
    DecisionList,
    Bayes,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Baseline,
        Method::ContextWords,
        Method::Collocations,
        Method::DecisionList,
        Method::Bayes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::ContextWords => "cwords",
            Method::Collocations => "collocs",
            Method::DecisionList => "dlist",
            Method::Bayes => "bayes",
        }
    }

    /// Feature kinds the method consults; `None` for the baseline.
    pub fn kinds(self) -> Option<FeatureKinds> {
        match self {
            Method::Baseline => None,
            Method::ContextWords => Some(FeatureKinds::CONTEXT_WORDS),
            Method::Collocations => Some(FeatureKinds::COLLOCATIONS),
            Method::DecisionList | Method::Bayes => Some(FeatureKinds::BOTH),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown method {s:?} (expected baseline, cwords, collocs, dlist or bayes)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<'m> {
    pub chosen: usize,
    pub posterior: Vec<f64>,
    pub evidence: Vec<&'m Feature>,
}

pub fn predict_baseline(model: &TrainedModel) -> Prediction<'_> {
    Prediction {
        chosen: model.majority(),
        posterior: model.priors(),
        evidence: Vec::new(),
    }
}

fn gather<'m>(
    model: &'m TrainedModel,
    occ: &Occurrence<'_>,
    kinds: FeatureKinds,
) -> Vec<&'m Feature> {
    let k = model.config.k;
    let mut accepted: Vec<&Feature> = Vec::new();
    for feature in &model.features {
        if !kinds.allows(feature.id.kind()) || !feature.id.matches(occ, k) {
            continue;
        }
        if accepted
            .iter()
            .all(|a| !features_conflict(&a.id, &feature.id))
        {
            accepted.push(feature);
        }
    }
    accepted
}

/// Matching features in strength order, skipping any that conflict with a
/// feature accepted before it.
pub fn gather_evidence<'m>(model: &'m TrainedModel, occ: &Occurrence<'_>) -> Vec<&'m Feature> {
    gather(model, occ, FeatureKinds::BOTH)
}

fn bayes_with<'m>(model: &'m TrainedModel, evidence: Vec<&'m Feature>) -> Prediction<'m> {
    let n = model.cset.len();
    let grand: f64 = model.n_train() as f64;
    let mut scores: Vec<f64> = model
        .totals
        .iter()
        .map(|&t| (t as f64 / grand).ln())
        .collect();
    for feature in &evidence {
        for (i, score) in scores.iter_mut().enumerate().take(n) {
            *score += smoothed_likelihood(&feature.stats, i).ln();
        }
    }
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
    let sum: f64 = weights.iter().sum();
    Prediction {
        chosen: argmax_with_tiebreak(&scores, &model.totals),
        posterior: weights.into_iter().map(|w| w / sum).collect(),
        evidence,
    }
}

/// Priors times the smoothed likelihoods of all accepted evidence, in log
/// space.
pub fn predict_bayes<'m>(model: &'m TrainedModel, occ: &Occurrence<'_>) -> Prediction<'m> {
    bayes_with(model, gather_evidence(model, occ))
}

/// The priors updated by the first matching feature alone; no match falls
/// back to the baseline.
pub fn predict_decision_list<'m>(model: &'m TrainedModel, occ: &Occurrence<'_>) -> Prediction<'m> {
    let k = model.config.k;
    match model.features.iter().find(|f| f.id.matches(occ, k)) {
        Some(feature) => bayes_with(model, vec![feature]),
        None => predict_baseline(model),
    }
}

pub fn predict<'m>(
    model: &'m TrainedModel,
    method: Method,
    occ: &Occurrence<'_>,
) -> Prediction<'m> {
    match method {
        Method::Baseline => predict_baseline(model),
        Method::DecisionList => predict_decision_list(model, occ),
        Method::Bayes => predict_bayes(model, occ),
        Method::ContextWords => bayes_with(model, gather(model, occ, FeatureKinds::CONTEXT_WORDS)),
        Method::Collocations => bayes_with(model, gather(model, occ, FeatureKinds::COLLOCATIONS)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    pub sentence: usize,
    pub position: usize,
    pub line: usize,
    pub column: usize,
    /// Confusion set that produced the suggestion.
    pub set: String,
    pub original: String,
    pub suggested: String,
    pub p_original: f64,
    pub p_suggested: f64,
    /// The token belongs to more than one loaded confusion set.
    pub shared: bool,
}

/// Suggest a replacement wherever the method prefers another word of the
/// set and its posterior beats the written word's by at least `threshold`.
pub fn correct_text(
    models: &[TrainedModel],
    sentences: &[Sentence],
    threshold: f64,
    method: Method,
) -> Vec<Suggestion> {
    let mut membership: HashMap<(usize, usize), usize> = HashMap::new();
    let mut found = Vec::new();
    for (sentence, s) in sentences.iter().enumerate() {
        for model in models {
            for occ in find_occurrences(std::slice::from_ref(s), &model.cset) {
                *membership.entry((sentence, occ.position)).or_default() += 1;
                found.push((sentence, model, occ));
            }
        }
    }
    found.sort_by_key(|(sentence, _, occ)| (*sentence, occ.position));

    let mut out = Vec::new();
    for (sentence, model, occ) in found {
        let prediction = predict(model, method, &occ);
        if prediction.chosen == occ.observed {
            continue;
        }
        let p_original = prediction.posterior[occ.observed];
        let p_suggested = prediction.posterior[prediction.chosen];
        // Both posteriors are positive, so the difference is below 1 even
        // when rounding says otherwise.
        if threshold >= 1.0 || p_suggested - p_original < threshold {
            continue;
        }
        let token = occ.target();
        out.push(Suggestion {
            sentence,
            position: occ.position,
            line: token.line,
            column: token.column,
            set: model.cset.to_string(),
            original: token.surface.clone(),
            suggested: model.cset.word(prediction.chosen).to_string(),
            p_original,
            p_suggested,
            shared: membership[&(sentence, occ.position)] > 1,
        });
    }
    out
}
