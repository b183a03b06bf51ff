//! Line-oriented model files.
//!
//! Fields are separated by tabs, shown here as `→`:
//!
//! ```text
//! CSSC1
//! set→peace,piece
//! config→k=3→ell=2→tmin=10→alpha=0.05→metric=reliability→features=cwords,collocs
//! totals→184→126
//! features→98
//! CO __ corps→0.9795918367346939→47→0
//! ...
//! ```
//!
//! Counts are stored raw; smoothing happens at prediction time. Floats are
//! written in their shortest round-trip form, so loading and saving again
//! reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::classifiers::{FeatureKinds, TrainConfig, TrainedModel};
use crate::corpus::ConfusionSet;
use crate::error::{Error, Result};
use crate::features::{Feature, FeatureId};
use crate::stats::{FeatureStats, Metric};

pub const FORMAT_VERSION: &str = "CSSC1";
pub const MODEL_EXTENSION: &str = "model";

pub fn to_string(model: &TrainedModel) -> String {
    let c = &model.config;
    let mut out = String::new();
    writeln!(out, "{FORMAT_VERSION}").unwrap();
    writeln!(out, "set\t{}", model.cset).unwrap();
    writeln!(
        out,
        "config\tk={}\tell={}\ttmin={}\talpha={}\tmetric={}\tfeatures={}",
        c.k, c.ell, c.prune.t_min, c.prune.alpha, c.metric, c.kinds
    )
    .unwrap();
    write!(out, "totals").unwrap();
    for t in &model.totals {
        write!(out, "\t{t}").unwrap();
    }
    out.push('\n');
    writeln!(out, "features\t{}", model.features.len()).unwrap();
    for f in &model.features {
        write!(out, "{}\t{}", f.id, f.strength).unwrap();
        for m in f.stats.matched() {
            write!(out, "\t{m}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn save(model: &TrainedModel, path: &Path) -> Result<()> {
    fs::write(path, to_string(model)).map_err(|e| Error::io(path, e))
}

struct Reader<'a> {
    origin: &'a str,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Reader<'a> {
    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::ModelFormat {
            path: self.origin.to_string(),
            line,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        match self.lines.next() {
            Some((i, l)) => Ok((i + 1, l)),
            None => Err(self.error(0, "unexpected end of file")),
        }
    }

    /// Next line, which must be `key<TAB>fields...`.
    fn keyed(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (no, line) = self.next()?;
        let mut fields = line.split('\t');
        if fields.next() != Some(key) {
            return Err(self.error(no, format!("expected {key:?} line")));
        }
        Ok((no, fields.collect()))
    }
}

fn parse_num<T: std::str::FromStr>(reader: &Reader<'_>, line: usize, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| reader.error(line, format!("bad number {text:?}")))
}

/// Parse a model; `origin` names the source in error messages.
pub fn from_str(text: &str, origin: &str) -> Result<TrainedModel> {
    let mut r = Reader {
        origin,
        lines: text.lines().enumerate(),
    };
    let (no, version) = r.next()?;
    if version != FORMAT_VERSION {
        return Err(r.error(
            no,
            format!("unsupported model format {version:?} (expected {FORMAT_VERSION})"),
        ));
    }

    let (no, fields) = r.keyed("set")?;
    let words = fields.first().ok_or_else(|| r.error(no, "missing words"))?;
    let cset = ConfusionSet::new(words.split(',')).map_err(|m| r.error(no, m))?;
    let n = cset.len();

    let (no, fields) = r.keyed("config")?;
    let mut config = TrainConfig::default();
    let mut seen = 0;
    for field in &fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| r.error(no, format!("bad config field {field:?}")))?;
        match key {
            "k" => config.k = parse_num(&r, no, value)?,
            "ell" => config.ell = parse_num(&r, no, value)?,
            "tmin" => config.prune.t_min = parse_num(&r, no, value)?,
            "alpha" => config.prune.alpha = parse_num(&r, no, value)?,
            "metric" => {
                config.metric = value
                    .parse::<Metric>()
                    .map_err(|e| r.error(no, e.to_string()))?
            }
            "features" => {
                config.kinds = value
                    .parse::<FeatureKinds>()
                    .map_err(|e| r.error(no, e.to_string()))?
            }
            other => return Err(r.error(no, format!("unknown config key {other:?}"))),
        }
        seen += 1;
    }
    if seen != 6 {
        return Err(r.error(no, "config needs k, ell, tmin, alpha, metric and features"));
    }
    config.validate().map_err(|e| r.error(no, e.to_string()))?;

    let (no, fields) = r.keyed("totals")?;
    if fields.len() != n {
        return Err(r.error(no, format!("expected {n} totals")));
    }
    let totals = fields
        .iter()
        .map(|f| parse_num::<u64>(&r, no, f))
        .collect::<Result<Vec<u64>>>()?;
    if totals.iter().sum::<u64>() == 0 {
        return Err(r.error(no, "no training occurrences"));
    }

    let (no, fields) = r.keyed("features")?;
    let count: usize = match fields.as_slice() {
        [c] => parse_num(&r, no, c)?,
        _ => return Err(r.error(no, "expected a feature count")),
    };

    let mut features = Vec::with_capacity(count);
    for _ in 0..count {
        let (no, line) = r.next()?;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != n + 2 {
            return Err(r.error(no, format!("expected feature, strength and {n} counts")));
        }
        let id: FeatureId = fields[0]
            .parse()
            .map_err(|e: Error| r.error(no, e.to_string()))?;
        let strength: f64 = parse_num(&r, no, fields[1])?;
        if !strength.is_finite() {
            return Err(r.error(no, "strength is not finite"));
        }
        let matched = fields[2..]
            .iter()
            .map(|f| parse_num::<u64>(&r, no, f))
            .collect::<Result<Vec<u64>>>()?;
        let stats = FeatureStats::new(matched, totals.clone()).map_err(|m| r.error(no, m))?;
        if let Some(prev) = features.last().map(|f: &Feature| f.strength) {
            if strength > prev {
                return Err(r.error(no, "features are not sorted by strength"));
            }
        }
        features.push(Feature {
            id,
            stats,
            strength,
        });
    }
    if let Some((i, extra)) = r.lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(r.error(i + 1, format!("unexpected trailing content {extra:?}")));
    }

    Ok(TrainedModel {
        cset,
        totals,
        features,
        config,
    })
}

pub fn load(path: &Path) -> Result<TrainedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_str(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "CSSC1
set\tpeace,piece
config\tk=3\tell=2\ttmin=10\talpha=0.05\tmetric=reliability\tfeatures=cwords,collocs
totals\t184\t126
features\t2
CO __ corps\t0.9795918367346939\t47\t0
CW the\t0.6124031007751938\t179\t113
";

    #[test]
    fn parses_and_reserializes_identically() {
        let model = from_str(SAMPLE, "sample").unwrap();
        assert_eq!(model.features.len(), 2);
        assert_eq!(model.features[0].stats.matched(), [47, 0]);
        assert_eq!(model.totals, [184, 126]);
        assert_eq!(to_string(&model), SAMPLE);
    }

    #[test]
    fn version_mismatch_names_origin() {
        let text = SAMPLE.replacen("CSSC1", "CSSC0", 1);
        let err = from_str(&text, "models/peace-piece.model").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("models/peace-piece.model") && msg.contains("CSSC0"),
            "{msg}"
        );
    }

    #[test]
    fn rejects_malformed_models() {
        let cases = [
            SAMPLE.replace("features\t2", "features\t3"),
            SAMPLE.replace("\t47\t0", "\t47"),
            SAMPLE.replace("\t47\t0", "\t470\t0"),
            SAMPLE.replace("0.9795918367346939", "0.1"),
            SAMPLE.replace("metric=reliability", "metric=gini"),
            SAMPLE.replace("totals\t184\t126", "totals\t0\t0"),
            SAMPLE.replace("CO __ corps", "CO corps"),
            format!("{SAMPLE}CW extra\t0.5\t1\t1\n"),
        ];
        for case in cases {
            assert!(from_str(&case, "x").is_err(), "accepted:\n{case}");
        }
    }
}
