#!/usr/bin/env node
// Build the bundled tag dictionary from Eric Brill's English lexicon as
// distributed in the `pos` npm package (package/lexicon.js).
//
// Usage: node build_tag_dictionary.js <path/to/lexicon.js> <out file>
//
// Penn Treebank tags are folded into a 40-tag inventory. Forms of be, have
// and do get their own tags, and contractions (which the lexicon splits but
// our tokenizer keeps whole) get hand-written compound tags.

"use strict";

const fs = require("fs");

const INVENTORY = [
  "DET", "PDT", "NS", "NP", "NPR", "NPRS", "PRO", "POSS",
  "V", "VZ", "VD", "VG", "VN", "MOD", "BE", "HAVE", "DO",
  "ADJ", "ADJR", "ADJS", "ADV", "ADVR", "ADVS",
  "PREP", "CONJ", "TO", "NUM", "WH", "PART", "EX", "UH", "NEG", "PUNC",
  "PRO+BE", "PRO+MOD", "PRO+HAVE", "V+PRO", "AUX+NEG", "WH+BE", "EX+BE",
];

const PENN = {
  DT: "DET", PDT: "PDT", NN: "NS", NNS: "NP", NNP: "NPR", NNPS: "NPRS",
  FW: "NS", PRP: "PRO", "PRP$": "POSS",
  VB: "V", VBP: "V", VBZ: "VZ", VBD: "VD", VBG: "VG", VBN: "VN", MD: "MOD",
  JJ: "ADJ", JJR: "ADJR", JJS: "ADJS", RB: "ADV", RBR: "ADVR", RBS: "ADVS",
  IN: "PREP", CC: "CONJ", TO: "TO", CD: "NUM", LS: "NUM",
  WDT: "WH", WP: "WH", "WP$": "WH", WRB: "WH",
  RP: "PART", EX: "EX", UH: "UH", SYM: "PUNC",
  ",": "PUNC", ".": "PUNC", ":": "PUNC", "``": "PUNC", "''": "PUNC",
  '"': "PUNC", "(": "PUNC", ")": "PUNC", "#": "PUNC", "$": "PUNC",
};

// Words whose most likely tag is one of these keep only closed-class,
// adverb and particle readings; the rest of their tail is annotation noise.
const CLOSED = new Set([
  "DT", "PDT", "IN", "CC", "TO", "MD", "PRP", "PRP$", "WDT", "WP", "WP$", "WRB", "EX",
]);
const CLOSED_EXTRA = new Set(["RB", "RP"]);

const FIXED = {
  DET: ["the", "a", "an"],
  BE: ["be", "is", "am", "are", "was", "were", "been", "being"],
  HAVE: ["have", "has", "had", "having"],
  DO: ["do", "does", "did", "doing", "done"],
  NEG: ["not"],
};

const COMPOUND = {
  "PRO+BE": ["i'm", "you're", "we're", "they're", "he's", "she's", "it's", "that's"],
  "PRO+HAVE": ["i've", "you've", "we've", "they've", "he's", "she's", "it's"],
  "PRO+MOD": [
    "i'll", "you'll", "we'll", "they'll", "he'll", "she'll", "it'll", "that'll",
    "i'd", "you'd", "we'd", "they'd", "he'd", "she'd",
  ],
  "V+PRO": ["let's"],
  "AUX+NEG": [
    "don't", "doesn't", "didn't", "can't", "cannot", "couldn't", "won't",
    "wouldn't", "shouldn't", "isn't", "aren't", "wasn't", "weren't", "haven't",
    "hasn't", "hadn't", "mustn't", "mightn't", "needn't", "ain't",
  ],
  "WH+BE": ["what's", "who's", "where's", "how's", "when's", "why's"],
  "EX+BE": ["there's"],
};

const PUNCTUATION = [
  ".", ",", ";", ":", "!", "?", "'", '"', "(", ")", "[", "]", "{", "}",
  "-", "/", "&", "%", "$", "#", "*",
];

function main(lexiconPath, outPath) {
  const lexicon = require(require("path").resolve(lexiconPath));
  // Lower-case forms win; capitalized variants only fill gaps.
  const lower = new Map();
  const folded = new Map();
  for (const [word, penn] of Object.entries(lexicon)) {
    if (/\s/.test(word) || word.length === 0) continue;
    const kept = CLOSED.has(penn[0])
      ? penn.filter((t) => CLOSED.has(t) || CLOSED_EXTRA.has(t))
      : penn;
    const tags = kept.map((t) => PENN[t]).filter(Boolean);
    if (tags.length === 0) continue;
    const key = word.toLowerCase();
    const target = word === key ? lower : folded;
    if (!target.has(key)) target.set(key, new Set());
    tags.forEach((t) => target.get(key).add(t));
  }
  const entries = new Map(lower);
  for (const [key, tags] of folded) {
    if (!entries.has(key)) entries.set(key, tags);
  }
  for (const [tag, words] of Object.entries(FIXED)) {
    words.forEach((w) => entries.set(w, new Set([tag])));
  }
  const contractions = new Map();
  for (const [tag, words] of Object.entries(COMPOUND)) {
    words.forEach((w) => {
      if (!contractions.has(w)) contractions.set(w, new Set());
      contractions.get(w).add(tag);
    });
  }
  for (const [w, tags] of contractions) entries.set(w, tags);
  PUNCTUATION.forEach((p) => entries.set(p, new Set(["PUNC"])));

  const order = new Map(INVENTORY.map((t, i) => [t, i]));
  const lines = ["TAGS: " + INVENTORY.join(",")];
  for (const key of [...entries.keys()].sort()) {
    const tags = [...entries.get(key)].sort((a, b) => order.get(a) - order.get(b));
    lines.push(key + "\t" + tags.join(","));
  }
  fs.writeFileSync(outPath, lines.join("\n") + "\n");
}

main(process.argv[2], process.argv[3]);
