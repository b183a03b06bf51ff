//! Shared fixtures: seeded synthetic corpora and from-scratch oracles that
//! re-derive matching, conflicts, counts and posteriors from the serialized
//! feature text instead of the library's data structures.

#![allow(dead_code)]

use cssc::{find_occurrences, tokenize, ConfusionSet, Sentence, TagDictionary, TrainedModel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TAGS: [&str; 5] = ["A", "B", "C", "D", "E"];

pub struct Generated {
    pub cset: ConfusionSet,
    pub dict: TagDictionary,
    pub train: Vec<Sentence>,
    pub test: Vec<Sentence>,
}

fn dictionary(rng: &mut ChaCha8Rng, words: &[String]) -> TagDictionary {
    let mut text = format!("TAGS: {}\n", TAGS.join(","));
    for w in words {
        // Roughly one word in six stays unknown and gets no tags.
        let n_tags = [0, 1, 1, 1, 2, 2][rng.gen_range(0..6)];
        let mut tags: Vec<&str> = TAGS.choose_multiple(rng, n_tags).copied().collect();
        tags.sort();
        if !tags.is_empty() {
            text.push_str(&format!("{w}\t{}\n", tags.join(",")));
        }
    }
    TagDictionary::parse(&text).expect("generated dictionary is valid")
}

fn sentence(rng: &mut ChaCha8Rng, n: usize, fillers: &[String], weights: &[f64]) -> String {
    let len = rng.gen_range(3..14);
    let mut words: Vec<String> = (0..len)
        .map(|_| fillers.choose(rng).unwrap().clone())
        .collect();
    let mut pick = rng.gen::<f64>() * weights.iter().sum::<f64>();
    let mut target = n - 1;
    for (i, w) in weights.iter().enumerate() {
        if pick < *w {
            target = i;
            break;
        }
        pick -= w;
    }
    let pos = rng.gen_range(0..=words.len());
    words.insert(pos, format!("c{target}"));
    // Cues usually point at the true word, sometimes at another one.
    let cue_of = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.8) {
            target
        } else {
            rng.gen_range(0..n)
        }
    };
    if rng.gen_bool(0.5) {
        let c = cue_of(rng);
        words.insert(pos, format!("p{c}"));
    }
    if rng.gen_bool(0.6) {
        let c = cue_of(rng);
        let offset = rng.gen_range(1..=3).min(words.len());
        let at = (pos + 1 + offset).min(words.len());
        words.insert(at, format!("k{c}"));
    }
    if rng.gen_bool(0.1) {
        // A second confusion word in the same sentence.
        let at = rng.gen_range(0..=words.len());
        words.insert(at, format!("c{}", rng.gen_range(0..n)));
    }
    words.join(" ")
}

fn corpus(
    rng: &mut ChaCha8Rng,
    sentences: usize,
    n: usize,
    fillers: &[String],
    weights: &[f64],
) -> String {
    (0..sentences)
        .map(|_| sentence(rng, n, fillers, weights))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// A corpus with `n` confusion words `c0..` whose contexts carry cue
/// words `k<i>` (within three positions) and `p<i>` (just left).
pub fn generate(seed: u64, n: usize, sentences: usize) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fillers: Vec<String> = (0..rng.gen_range(8..30)).map(|i| format!("f{i}")).collect();
    let cset = ConfusionSet::new((0..n).map(|i| format!("c{i}"))).unwrap();
    let mut vocab = fillers.clone();
    for i in 0..n {
        vocab.extend([format!("c{i}"), format!("k{i}"), format!("p{i}")]);
    }
    let dict = dictionary(&mut rng, &vocab);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let train_text = corpus(&mut rng, sentences, n, &fillers, &weights);
    let test_text = corpus(&mut rng, sentences / 3 + 1, n, &fillers, &weights);
    let mut train = tokenize(&train_text);
    let mut test = tokenize(&test_text);
    dict.annotate(&mut train);
    dict.annotate(&mut test);
    Generated {
        cset,
        dict,
        train,
        test,
    }
}

/// A feature re-read from its text form.
#[derive(Debug, Clone)]
pub enum OracleFeature {
    Word(String),
    /// Elements as (is_tag, text), left of the target then right of it.
    Pattern(Vec<(bool, String)>, Vec<(bool, String)>),
}

pub fn parse_feature(text: &str) -> OracleFeature {
    let mut parts = text.split(' ');
    match parts.next() {
        Some("CW") => OracleFeature::Word(parts.next().unwrap().to_string()),
        Some("CO") => {
            let rest: Vec<&str> = parts.collect();
            let gap = rest.iter().position(|p| *p == "__").unwrap();
            let el = |s: &&str| (s.chars().any(|c| c.is_uppercase()), s.to_string());
            OracleFeature::Pattern(
                rest[..gap].iter().map(el).collect(),
                rest[gap + 1..].iter().map(el).collect(),
            )
        }
        other => panic!("unknown feature prefix {other:?}"),
    }
}

pub fn oracle_matches(f: &OracleFeature, s: &Sentence, pos: usize, k: usize) -> bool {
    let toks = &s.tokens;
    let elem_ok = |idx: isize, (is_tag, text): &(bool, String)| {
        if idx < 0 || idx as usize >= toks.len() {
            return false;
        }
        let t = &toks[idx as usize];
        if *is_tag {
            t.tags.contains(text)
        } else {
            t.norm == *text
        }
    };
    match f {
        OracleFeature::Word(w) => (0..toks.len())
            .filter(|&i| i != pos && i.abs_diff(pos) <= k)
            .any(|i| toks[i].norm == *w),
        OracleFeature::Pattern(left, right) => {
            let p = pos as isize;
            let l = left.len() as isize;
            left.iter()
                .enumerate()
                .all(|(j, e)| elem_ok(p - l + j as isize, e))
                && right
                    .iter()
                    .enumerate()
                    .all(|(j, e)| elem_ok(p + 1 + j as isize, e))
        }
    }
}

pub fn oracle_conflict(a: &OracleFeature, b: &OracleFeature) -> bool {
    use OracleFeature::*;
    let literal = |side: &[(bool, String)], w: &str| side.iter().any(|(tag, t)| !tag && t == w);
    match (a, b) {
        (Word(_), Word(_)) => false,
        (Pattern(l1, r1), Pattern(l2, r2)) => {
            (!l1.is_empty() && !l2.is_empty()) || (!r1.is_empty() && !r2.is_empty())
        }
        (Word(w), Pattern(l, r)) | (Pattern(l, r), Word(w)) => literal(l, w) || literal(r, w),
    }
}

/// Accepted features (indices into the model list) for one occurrence.
pub fn oracle_evidence(model: &TrainedModel, s: &Sentence, pos: usize) -> Vec<usize> {
    let parsed: Vec<OracleFeature> = model
        .features
        .iter()
        .map(|f| parse_feature(&f.id.to_string()))
        .collect();
    let mut accepted: Vec<usize> = Vec::new();
    for (i, f) in parsed.iter().enumerate() {
        if oracle_matches(f, s, pos, model.config.k)
            && accepted.iter().all(|&a| !oracle_conflict(&parsed[a], f))
        {
            accepted.push(i);
        }
    }
    accepted
}

/// Priors times add-one smoothed likelihoods, multiplied out directly.
pub fn oracle_posterior(model: &TrainedModel, evidence: &[usize]) -> Vec<f64> {
    let grand: u64 = model.totals.iter().sum();
    let mut p: Vec<f64> = model
        .totals
        .iter()
        .map(|&t| t as f64 / grand as f64)
        .collect();
    for &i in evidence {
        let stats = &model.features[i].stats;
        for (w, pw) in p.iter_mut().enumerate() {
            *pw *= (stats.matched()[w] as f64 + 1.0) / (stats.totals()[w] as f64 + 2.0);
        }
    }
    let sum: f64 = p.iter().sum();
    p.iter().map(|x| x / sum).collect()
}

/// Per-word counts of training occurrences the feature matches.
pub fn oracle_counts(
    model: &TrainedModel,
    feature: &OracleFeature,
    train: &[Sentence],
) -> Vec<u64> {
    let mut counts = vec![0u64; model.cset.len()];
    for s in train {
        for (pos, tok) in s.tokens.iter().enumerate() {
            if let Some(w) = model.cset.index_of(&tok.norm) {
                if oracle_matches(feature, s, pos, model.config.k) {
                    counts[w] += 1;
                }
            }
        }
    }
    counts
}

/// Pearson statistic from the observed/expected cells of the 2×n table.
pub fn oracle_chi_square(matched: &[u64], totals: &[u64]) -> f64 {
    let n: f64 = totals.iter().sum::<u64>() as f64;
    let row_p: f64 = matched.iter().sum::<u64>() as f64;
    let row_a = n - row_p;
    let mut stat = 0.0;
    for (&m, &t) in matched.iter().zip(totals) {
        for (obs, row) in [(m as f64, row_p), ((t - m) as f64, row_a)] {
            let exp = row * t as f64 / n;
            if exp > 0.0 {
                stat += (obs - exp).powi(2) / exp;
            }
        }
    }
    stat
}

/// Upper 5% points of chi-square for df = 1 and 2.
pub fn critical_005(df: usize) -> f64 {
    match df {
        1 => 3.841_458_820_694_124,
        2 => 5.991_464_547_107_979,
        _ => panic!("no tabulated value for df {df}"),
    }
}

pub fn occurrences_of(g: &Generated, sentences: &[Sentence]) -> usize {
    find_occurrences(sentences, &g.cset).len()
}
