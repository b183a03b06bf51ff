//! The two feature kinds and how they are proposed, matched and compared.
//!
//! A context word is a binary test for a word anywhere within ±k tokens of
//! the target. A collocation is a contiguous pattern of literal words and
//! part-of-speech tags immediately left and/or right of the target.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::corpus::{Occurrence, Token};
use crate::error::{Error, Result};
use crate::stats::FeatureStats;

/// One position of a collocation pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Word(String),
    Tag(String),
}

impl Element {
    pub fn matches(&self, token: &Token) -> bool {
        match self {
            Element::Word(w) => *w == token.norm,
            Element::Tag(t) => token.tags.contains(t),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Word(w) | Element::Tag(w) => f.write_str(w),
        }
    }
}

/// `left` occupies offsets -|left|..-1 and `right` offsets +1..+|right|.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collocation {
    pub left: Vec<Element>,
    pub right: Vec<Element>,
}

impl Collocation {
    pub fn new(left: Vec<Element>, right: Vec<Element>) -> Self {
        Collocation { left, right }
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// (offset, element) pairs in left-to-right order.
    pub fn positions(&self) -> impl Iterator<Item = (isize, &Element)> {
        let n_left = self.left.len() as isize;
        self.left
            .iter()
            .enumerate()
            .map(move |(i, e)| (i as isize - n_left, e))
            .chain(
                self.right
                    .iter()
                    .enumerate()
                    .map(|(j, e)| (j as isize + 1, e)),
            )
    }

    pub fn matches(&self, occ: &Occurrence<'_>) -> bool {
        self.positions().all(|(offset, element)| {
            occ.sentence
                .at_offset(occ.position, offset)
                .is_some_and(|token| element.matches(token))
        })
    }

    /// Offsets are contiguous from the target, so two patterns overlap
    /// exactly when they both extend to the same side.
    pub fn overlaps(&self, other: &Collocation) -> bool {
        (!self.left.is_empty() && !other.left.is_empty())
            || (!self.right.is_empty() && !other.right.is_empty())
    }

    /// Whether the pattern contains a literal test for `word`.
    pub fn tests_word(&self, word: &str) -> bool {
        self.left
            .iter()
            .chain(&self.right)
            .any(|e| matches!(e, Element::Word(w) if w == word))
    }
}

impl fmt::Display for Collocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.left {
            write!(f, "{e} ")?;
        }
        f.write_str("__")?;
        for e in &self.right {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    ContextWord,
    Collocation,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureId {
    ContextWord(String),
    Colloc(Collocation),
}

impl FeatureId {
    pub fn kind(&self) -> FeatureKind {
        match self {
            FeatureId::ContextWord(_) => FeatureKind::ContextWord,
            FeatureId::Colloc(_) => FeatureKind::Collocation,
        }
    }

    pub fn matches(&self, occ: &Occurrence<'_>, k: usize) -> bool {
        match self {
            FeatureId::ContextWord(w) => window(occ, k).any(|t| t.norm == *w),
            FeatureId::Colloc(c) => c.matches(occ),
        }
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureId::ContextWord(w) => write!(f, "CW {w}"),
            FeatureId::Colloc(c) => write!(f, "CO {c}"),
        }
    }
}

impl FromStr for FeatureId {
    type Err = Error;

    /// `CW <word>` or `CO <elements with __ for the target>`. Elements with
    /// an upper-case letter are tags, everything else is a literal word.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::FeatureSyntax(format!("{msg}: {s:?}"));
        let (kind, rest) = s
            .split_once(' ')
            .ok_or_else(|| bad("missing feature kind"))?;
        match kind {
            "CW" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(bad("context word must be a single word"));
                }
                Ok(FeatureId::ContextWord(rest.to_string()))
            }
            "CO" => {
                let mut left = Vec::new();
                let mut right = Vec::new();
                let mut seen_target = false;
                for item in rest.split(' ') {
                    if item == "__" {
                        if seen_target {
                            return Err(bad("more than one target marker"));
                        }
                        seen_target = true;
                        continue;
                    }
                    if item.is_empty() {
                        return Err(bad("empty element"));
                    }
                    let element = if item.chars().any(char::is_uppercase) {
                        Element::Tag(item.to_string())
                    } else {
                        Element::Word(item.to_string())
                    };
                    if seen_target {
                        right.push(element);
                    } else {
                        left.push(element);
                    }
                }
                if !seen_target {
                    return Err(bad("missing target marker __"));
                }
                if left.is_empty() && right.is_empty() {
                    return Err(bad("collocation without elements"));
                }
                Ok(FeatureId::Colloc(Collocation { left, right }))
            }
            _ => Err(bad("unknown feature kind")),
        }
    }
}

/// A learned feature: identity, training counts, and strength.
#[derive(Debug, Clone, PartialEq)]
pub struct Feature {
    pub id: FeatureId,
    pub stats: FeatureStats,
    pub strength: f64,
}

fn window<'a>(occ: &Occurrence<'a>, k: usize) -> impl Iterator<Item = &'a Token> {
    let tokens = &occ.sentence.tokens;
    let start = occ.position.saturating_sub(k);
    let end = (occ.position + k + 1).min(tokens.len());
    let position = occ.position;
    tokens[start..end]
        .iter()
        .enumerate()
        .filter(move |(i, _)| start + i != position)
        .map(|(_, t)| t)
}

/// Norms of the tokens within ±k of the target, target position excluded.
/// Other confusion-set words in the window are kept.
pub fn extract_context_words<'a>(occ: &Occurrence<'a>, k: usize) -> BTreeSet<&'a str> {
    window(occ, k).map(|t| t.norm.as_str()).collect()
}

fn alternatives(token: &Token) -> Vec<Element> {
    let mut out = Vec::with_capacity(1 + token.tags.len());
    // A word containing an upper-case letter would read back as a tag.
    if !token.norm.chars().any(char::is_uppercase) {
        out.push(Element::Word(token.norm.clone()));
    }
    out.extend(token.tags.iter().map(|t| Element::Tag(t.clone())));
    out
}

/// Every collocation of 1..=ell elements that matches `occ`. Each position
/// contributes its literal word and each of its possible tags.
pub fn generate_collocations(occ: &Occurrence<'_>, ell: usize) -> BTreeSet<Collocation> {
    let sentence = occ.sentence;
    let pos = occ.position;
    let mut out = BTreeSet::new();
    for n_left in 0..=ell.min(pos) {
        let max_right = (ell - n_left).min(sentence.len() - pos - 1);
        for n_right in 0..=max_right {
            if n_left + n_right == 0 {
                continue;
            }
            let slots: Vec<Vec<Element>> = (pos - n_left..pos)
                .chain(pos + 1..=pos + n_right)
                .map(|i| alternatives(&sentence.tokens[i]))
                .collect();
            let mut partial: Vec<Vec<Element>> = vec![Vec::with_capacity(slots.len())];
            for slot in &slots {
                partial = partial
                    .iter()
                    .flat_map(|prefix| {
                        slot.iter().map(move |e| {
                            let mut next = prefix.clone();
                            next.push(e.clone());
                            next
                        })
                    })
                    .collect();
            }
            for mut elements in partial {
                let right = elements.split_off(n_left);
                out.insert(Collocation {
                    left: elements,
                    right,
                });
            }
        }
    }
    out
}

/// Context words never conflict with each other; collocations conflict when
/// they overlap; a context word conflicts with a collocation that literally
/// tests for it.
pub fn features_conflict(a: &FeatureId, b: &FeatureId) -> bool {
    match (a, b) {
        (FeatureId::ContextWord(_), FeatureId::ContextWord(_)) => false,
        (FeatureId::Colloc(x), FeatureId::Colloc(y)) => x.overlaps(y),
        (FeatureId::ContextWord(w), FeatureId::Colloc(c))
        | (FeatureId::Colloc(c), FeatureId::ContextWord(w)) => c.tests_word(w),
    }
}
