//! Text ingestion: tokenization, sentence segmentation, part-of-speech tag
//! sets from a dictionary, confusion sets, and locating the occurrences of
//! confusion-set words.
//!
//! Tokenization rules:
//!
//! * text is split on whitespace into chunks;
//! * leading and trailing non-alphanumeric characters of a chunk become
//!   single-character tokens, anything internal (apostrophes, hyphens,
//!   periods) stays inside the word, so `it's` and `you're` are one token;
//! * every token is lower-cased into its `norm`;
//! * a sentence ends after a chunk whose trailing punctuation contains
//!   `.`, `!` or `?` (optionally followed by closing quotes or brackets) when
//!   the next chunk starts with an upper-case letter or the text ends;
//! * a single capital letter followed by a period (`J. Smith`) is an
//!   initial, not a sentence end;
//! * a blank line always ends the current sentence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared, immutable set of part-of-speech tag names.
pub type TagSet = Arc<BTreeSet<String>>;

/// The bundled 40-tag dictionary (derived from Eric Brill's lexicon).
pub const BUNDLED_TAGS: &str = include_str!("../data/tags.dict");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub norm: String,
    pub tags: TagSet,
    /// 1-based line of the token in its source text.
    pub line: usize,
    /// 1-based character column of the token in its source line.
    pub column: usize,
}

impl Token {
    pub fn new(surface: &str, line: usize, column: usize) -> Self {
        Token {
            surface: surface.to_string(),
            norm: surface.to_lowercase(),
            tags: TagSet::default(),
            line,
            column,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at a signed offset from `position`, if it lies inside the sentence.
    pub fn at_offset(&self, position: usize, offset: isize) -> Option<&Token> {
        let idx = position as isize + offset;
        if idx < 0 {
            return None;
        }
        self.tokens.get(idx as usize)
    }

    /// Space-joined normalized tokens. Tokenizing the result again yields
    /// the same token sequence.
    pub fn render(&self) -> String {
        let norms: Vec<&str> = self.tokens.iter().map(|t| t.norm.as_str()).collect();
        norms.join(" ")
    }
}

const TERMINALS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 8] = ['"', '\'', ')', ']', '}', '\u{201d}', '\u{2019}', '\u{bb}'];
const OPENERS: [char; 8] = ['"', '\'', '(', '[', '{', '\u{201c}', '\u{2018}', '\u{ab}'];

struct Chunk<'a> {
    text: &'a str,
    line: usize,
    column: usize,
    after_blank_line: bool,
}

fn chunks(text: &str) -> Vec<Chunk<'_>> {
    let mut out = Vec::new();
    let mut blank_pending = false;
    for (line_idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            blank_pending = true;
            continue;
        }
        let mut start: Option<(usize, usize)> = None;
        let mut column = 0;
        for (byte, ch) in line.char_indices() {
            column += 1;
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    out.push(Chunk {
                        text: &line[b..byte],
                        line: line_idx + 1,
                        column: c,
                        after_blank_line: std::mem::take(&mut blank_pending),
                    });
                }
            } else if start.is_none() {
                start = Some((byte, column));
            }
        }
        if let Some((b, c)) = start {
            out.push(Chunk {
                text: &line[b..],
                line: line_idx + 1,
                column: c,
                after_blank_line: std::mem::take(&mut blank_pending),
            });
        }
    }
    out
}

/// Splits a chunk into (token text, char offset) pieces and reports whether
/// the chunk can end a sentence.
fn split_chunk(chunk: &str) -> (Vec<(String, usize)>, bool) {
    let chars: Vec<char> = chunk.chars().collect();
    let lead = chars.iter().take_while(|c| !c.is_alphanumeric()).count();
    if lead == chars.len() {
        let pieces = chars
            .iter()
            .enumerate()
            .map(|(i, c)| (c.to_string(), i))
            .collect();
        return (pieces, ends_with_terminal(&chars));
    }
    let trail = chars
        .iter()
        .rev()
        .take_while(|c| !c.is_alphanumeric())
        .count();
    let core_end = chars.len() - trail;

    let mut pieces: Vec<(String, usize)> = Vec::with_capacity(lead + trail + 1);
    pieces.extend(
        chars[..lead]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.to_string(), i)),
    );
    pieces.push((chars[lead..core_end].iter().collect(), lead));
    pieces.extend(
        chars[core_end..]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.to_string(), core_end + i)),
    );

    let trailing = &chars[core_end..];
    let core = &chars[lead..core_end];
    let initial = core.len() == 1 && core[0].is_uppercase() && trailing == ['.'];
    (pieces, !initial && ends_with_terminal(trailing))
}

fn ends_with_terminal(run: &[char]) -> bool {
    let body = run.iter().rev().skip_while(|c| CLOSERS.contains(c)).count();
    body > 0 && TERMINALS.contains(&run[body - 1])
}

fn starts_uppercase(chunk: &str) -> bool {
    chunk
        .chars()
        .find(|c| !OPENERS.contains(c))
        .is_some_and(char::is_uppercase)
}

/// Segment `text` into sentences of tokens. Tokens carry no tags until a
/// [`TagDictionary`] annotates them.
pub fn tokenize(text: &str) -> Vec<Sentence> {
    let chunks = chunks(text);
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();

    for (idx, chunk) in chunks.iter().enumerate() {
        if chunk.after_blank_line && !current.is_empty() {
            sentences.push(Sentence {
                tokens: std::mem::take(&mut current),
            });
        }
        let (pieces, terminal) = split_chunk(chunk.text);
        for (piece, offset) in pieces {
            current.push(Token::new(&piece, chunk.line, chunk.column + offset));
        }
        let ends = terminal
            && chunks
                .get(idx + 1)
                .is_none_or(|next| starts_uppercase(next.text));
        if ends && !current.is_empty() {
            sentences.push(Sentence {
                tokens: std::mem::take(&mut current),
            });
        }
    }
    if !current.is_empty() {
        sentences.push(Sentence { tokens: current });
    }
    sentences
}

/// Read a corpus from a file, or from every regular file of a directory in
/// file-name order. Each file is tokenized as its own document.
pub fn read_corpus(path: &Path) -> Result<Vec<Sentence>> {
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    let files = if meta.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
            let entry = entry.map_err(|e| Error::io(path, e))?;
            if entry
                .file_type()
                .map_err(|e| Error::io(entry.path(), e))?
                .is_file()
            {
                files.push(entry.path());
            }
        }
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };
    let mut sentences = Vec::new();
    for file in files {
        let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        sentences.extend(tokenize(&text));
    }
    Ok(sentences)
}

/// Words that are mutually confusable. The order fixes each word's index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfusionSet {
    words: Vec<String>,
}

impl ConfusionSet {
    pub fn new<I, S>(words: I) -> std::result::Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        if words.len() < 2 {
            return Err("a confusion set needs at least two words".into());
        }
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() {
                return Err("empty word".into());
            }
            if w.chars().any(char::is_whitespace) {
                return Err(format!("word {w:?} contains whitespace"));
            }
            if *w != w.to_lowercase() {
                return Err(format!("word {w:?} is not in lower case"));
            }
            if words[..i].contains(w) {
                return Err(format!("word {w:?} appears twice"));
            }
        }
        Ok(ConfusionSet { words })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, norm: &str) -> Option<usize> {
        self.words.iter().position(|w| w == norm)
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    /// File-name friendly identifier, e.g. `there-their-they_re`.
    pub fn slug(&self) -> String {
        let parts: Vec<String> = self
            .words
            .iter()
            .map(|w| {
                w.chars()
                    .map(|c| if c.is_alphanumeric() { c } else { '_' })
                    .collect()
            })
            .collect();
        parts.join("-")
    }
}

impl fmt::Display for ConfusionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.words.join(","))
    }
}

/// One set per line, words separated by commas; `#` starts a comment line.
pub fn parse_confusion_sets(text: &str) -> Result<Vec<ConfusionSet>> {
    let mut sets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let set = ConfusionSet::new(line.split(',').map(str::trim)).map_err(|message| {
            Error::ConfusionSet {
                line: idx + 1,
                message,
            }
        })?;
        sets.push(set);
    }
    Ok(sets)
}

pub fn load_confusion_sets(path: &Path) -> Result<Vec<ConfusionSet>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_confusion_sets(&text)
}

/// Word → set of possible part-of-speech tags.
#[derive(Debug, Clone, Default)]
pub struct TagDictionary {
    inventory: BTreeSet<String>,
    entries: HashMap<String, TagSet>,
    empty: TagSet,
}

fn valid_tag_name(tag: &str) -> bool {
    !tag.is_empty()
        && tag != "__"
        && tag.chars().any(char::is_uppercase)
        && !tag.chars().any(|c| c.is_whitespace() || c == ',')
}

impl TagDictionary {
    /// Parse the dictionary format: a `TAGS:` line listing the inventory,
    /// then `word<TAB>TAG,TAG,...` lines. Repeated words merge their tags.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (header_idx, header) = lines.next().ok_or(Error::TagDictionary {
            line: 1,
            message: "missing TAGS: header".into(),
        })?;
        let inventory_list = header
            .trim()
            .strip_prefix("TAGS:")
            .ok_or(Error::TagDictionary {
                line: header_idx + 1,
                message: "first line must start with TAGS:".into(),
            })?;
        let mut inventory = BTreeSet::new();
        for tag in inventory_list.split(',').map(str::trim) {
            if !valid_tag_name(tag) {
                return Err(Error::TagDictionary {
                    line: header_idx + 1,
                    message: format!("invalid tag name {tag:?} (tags need an upper-case letter)"),
                });
            }
            inventory.insert(tag.to_string());
        }

        let mut merged: HashMap<String, BTreeSet<String>> = HashMap::new();
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim_end_matches(['\r', '\n']);
            let (word, tags) =
                line.trim_start()
                    .split_once(char::is_whitespace)
                    .ok_or(Error::TagDictionary {
                        line: line_no,
                        message: "expected word, TAB, comma-separated tags".into(),
                    })?;
            let tags = tags.trim();
            if tags.is_empty() {
                return Err(Error::TagDictionary {
                    line: line_no,
                    message: format!("no tags for {word:?}"),
                });
            }
            let set = merged.entry(word.to_lowercase()).or_default();
            for tag in tags.split(',').map(str::trim) {
                if !inventory.contains(tag) {
                    return Err(Error::TagDictionary {
                        line: line_no,
                        message: format!("tag {tag:?} is not in the declared inventory"),
                    });
                }
                set.insert(tag.to_string());
            }
        }
        let entries = merged
            .into_iter()
            .map(|(word, tags)| (word, Arc::new(tags)))
            .collect();
        Ok(TagDictionary {
            inventory,
            entries,
            empty: TagSet::default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TAGS).expect("bundled tag dictionary is well-formed")
    }

    pub fn inventory(&self) -> &BTreeSet<String> {
        &self.inventory
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Possible tags of a normalized word; unknown words get the empty set.
    pub fn tag_set(&self, norm: &str) -> &TagSet {
        self.entries.get(norm).unwrap_or(&self.empty)
    }

    pub fn annotate(&self, sentences: &mut [Sentence]) {
        for token in sentences.iter_mut().flat_map(|s| s.tokens.iter_mut()) {
            token.tags = Arc::clone(self.tag_set(&token.norm));
        }
    }
}

/// One appearance of a confusion-set word in context.
#[derive(Debug, Clone, Copy)]
pub struct Occurrence<'a> {
    pub sentence: &'a Sentence,
    pub position: usize,
    /// Index into the confusion set of the word actually written.
    pub observed: usize,
}

impl<'a> Occurrence<'a> {
    pub fn target(&self) -> &'a Token {
        &self.sentence.tokens[self.position]
    }
}

/// Every token whose norm is in `cset`, in document order.
pub fn find_occurrences<'a>(sentences: &'a [Sentence], cset: &ConfusionSet) -> Vec<Occurrence<'a>> {
    sentences
        .iter()
        .flat_map(|sentence| {
            sentence
                .tokens
                .iter()
                .enumerate()
                .filter_map(move |(position, token)| {
                    cset.index_of(&token.norm).map(|observed| Occurrence {
                        sentence,
                        position,
                        observed,
                    })
                })
        })
        .collect()
}
