//! Root extraction, noun/verb tagging and thesaurus lookup.
//!
//! The stemmer and tagger sit behind traits so a heavier morphological
//! analyser can replace the bundled rule-based ones without touching the
//! rest of the pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::normalize;

/// Shortest stem the light stemmer will produce by stripping affixes.
pub const MIN_STEM_CHARS: usize = 3;

/// Single-letter proclitics: conjunctions و ف and prepositions ب ك ل.
const CLITICS: [&str; 5] = ["و", "ف", "ب", "ك", "ل"];

/// The definite article and its assimilated form after ل.
const ARTICLES: [&str; 2] = ["ال", "لل"];

/// Suffixes, longest first.
const SUFFIXES: [&str; 9] = ["ها", "ان", "ات", "ون", "ين", "ه", "ة", "ي", "ت"];

pub trait Stemmer: Send + Sync {
    /// Maps a normalized word to its root. Must be idempotent.
    fn stem(&self, word: &str) -> Result<String>;
}

pub trait Tagger: Send + Sync {
    fn tag(&self, word: &str, preceding: Option<&str>) -> PosTag;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
        })
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "NOUN" | "noun" => Ok(PosTag::Noun),
            "VERB" | "verb" => Ok(PosTag::Verb),
            other => Err(format!("unknown tag {other:?}, expected NOUN or VERB")),
        }
    }
}

/// Entries of the stemmer override file: `word<TAB>root[<TAB>NOUN|VERB]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub roots: BTreeMap<String, String>,
    pub tags: BTreeMap<String, PosTag>,
}

impl Overrides {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut overrides = Overrides::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() < 2 || cols.len() > 3 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "expected word<TAB>root[<TAB>NOUN|VERB]",
                ));
            }
            let word = normalize(cols[0]).into_string();
            let root = normalize(cols[1]).into_string();
            if let Some(previous) = overrides.roots.insert(word.clone(), root.clone()) {
                if previous != root {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        format!("{word:?} already maps to {previous:?}"),
                    ));
                }
            }
            if let Some(tag) = cols.get(2).filter(|c| !c.is_empty()) {
                let tag = tag.parse().map_err(|e: String| Error::parse(source_name, line_no, e))?;
                overrides.tags.insert(word, tag);
            }
        }
        Ok(overrides)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Overrides::parse(&text, &path.display().to_string())
    }
}

/// Rule-based light stemmer: strips one proclitic, article or suffix at a
/// time until nothing more can be removed without leaving fewer than
/// [`MIN_STEM_CHARS`] characters. The override table is consulted before
/// every step and its roots are never stripped further.
#[derive(Debug, Clone, Default)]
pub struct LightStemmer {
    overrides: BTreeMap<String, String>,
    protected: BTreeSet<String>,
}

impl LightStemmer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_overrides(overrides: &Overrides) -> Result<Self> {
        let protected: BTreeSet<String> = overrides.roots.values().cloned().collect();
        for root in &protected {
            if let Some(other) = overrides.roots.get(root) {
                if other != root {
                    return Err(Error::Conflict(format!(
                        "override root {root:?} is itself overridden to {other:?}"
                    )));
                }
            }
        }
        Ok(LightStemmer {
            overrides: overrides.roots.clone(),
            protected,
        })
    }

    /// Removes a single affix. Order per step: a proclitic attached to the
    /// article, the article, a suffix, a bare proclitic.
    fn strip_once(word: &str) -> &str {
        let len = word.chars().count();
        let fits = |affix: &str| len - affix.chars().count() >= MIN_STEM_CHARS;

        for clitic in CLITICS {
            if let Some(rest) = word.strip_prefix(clitic) {
                if rest.starts_with(ARTICLES[0]) && fits(clitic) {
                    return rest;
                }
            }
        }
        for article in ARTICLES {
            if let Some(rest) = word.strip_prefix(article) {
                if fits(article) {
                    return rest;
                }
            }
        }
        for suffix in SUFFIXES {
            if let Some(rest) = word.strip_suffix(suffix) {
                if fits(suffix) {
                    return rest;
                }
            }
        }
        for clitic in CLITICS {
            if let Some(rest) = word.strip_prefix(clitic) {
                if fits(clitic) {
                    return rest;
                }
            }
        }
        word
    }
}

impl Stemmer for LightStemmer {
    fn stem(&self, word: &str) -> Result<String> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut current = word;
        loop {
            if self.protected.contains(current) {
                return Ok(current.to_owned());
            }
            if let Some(root) = self.overrides.get(current) {
                return Ok(root.clone());
            }
            let next = Self::strip_once(current);
            if next.len() == current.len() {
                return Ok(current.to_owned());
            }
            current = next;
        }
    }
}

/// Ordered heuristics: override table, the definite article, a preceding
/// verb-governing particle, then NOUN.
#[derive(Debug, Clone)]
pub struct HeuristicTagger {
    overrides: BTreeMap<String, PosTag>,
    verb_particles: BTreeSet<String>,
}

impl HeuristicTagger {
    pub fn new(overrides: &Overrides) -> Self {
        HeuristicTagger {
            overrides: overrides.tags.clone(),
            verb_particles: ["لم", "لن", "قد", "سوف"].into_iter().map(str::to_owned).collect(),
        }
    }
}

impl Default for HeuristicTagger {
    fn default() -> Self {
        HeuristicTagger::new(&Overrides::default())
    }
}

impl Tagger for HeuristicTagger {
    fn tag(&self, word: &str, preceding: Option<&str>) -> PosTag {
        if let Some(&tag) = self.overrides.get(word) {
            return tag;
        }
        if word.starts_with(crate::text::DEFINITE_ARTICLE) {
            return PosTag::Noun;
        }
        if preceding.is_some_and(|p| self.verb_particles.contains(p)) {
            return PosTag::Verb;
        }
        PosTag::Noun
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Synonym,
    Antonym,
}

impl Relation {
    fn code(self) -> &'static str {
        match self {
            Relation::Synonym => "syn",
            Relation::Antonym => "ant",
        }
    }
}

/// Word-to-word synonym and antonym tables. Relations are stored exactly as
/// listed: neither symmetry nor transitivity is inferred.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    pub synonyms: BTreeMap<String, BTreeSet<String>>,
    pub antonyms: BTreeMap<String, BTreeSet<String>>,
}

impl Thesaurus {
    /// Parses `word<TAB>syn|ant<TAB>target target ...` rows. Rows for the
    /// same key and relation are merged.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut thesaurus = Thesaurus::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [word, relation, targets] = cols[..] else {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "expected word<TAB>syn|ant<TAB>targets",
                ));
            };
            let relation = match relation {
                "syn" => Relation::Synonym,
                "ant" => Relation::Antonym,
                other => {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        format!("unknown relation {other:?}, expected syn or ant"),
                    ))
                }
            };
            let word = normalize(word).into_string();
            let targets: Vec<String> = targets.split_whitespace().map(|t| normalize(t).into_string()).collect();
            if word.is_empty() || targets.is_empty() {
                return Err(Error::parse(source_name, line_no, "empty word or target list"));
            }
            thesaurus.insert(&word, relation, targets);
        }
        thesaurus.check_conflicts()?;
        Ok(thesaurus)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Thesaurus::parse(&text, &path.display().to_string())
    }

    pub fn insert(&mut self, word: &str, relation: Relation, targets: impl IntoIterator<Item = String>) {
        let table = match relation {
            Relation::Synonym => &mut self.synonyms,
            Relation::Antonym => &mut self.antonyms,
        };
        table.entry(word.to_owned()).or_default().extend(targets);
    }

    fn check_conflicts(&self) -> Result<()> {
        for (word, syns) in &self.synonyms {
            if let Some(ants) = self.antonyms.get(word) {
                if let Some(both) = syns.intersection(ants).next() {
                    return Err(Error::Conflict(format!(
                        "{both:?} is both a synonym and an antonym of {word:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serializes back to the TSV format, one row per key and relation.
    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(&str, Relation, &BTreeSet<String>)> = self
            .synonyms
            .iter()
            .map(|(w, t)| (w.as_str(), Relation::Synonym, t))
            .chain(self.antonyms.iter().map(|(w, t)| (w.as_str(), Relation::Antonym, t)))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(b.0).then(a.1.code().cmp(b.1.code()).reverse()));
        let mut out = String::new();
        for (word, relation, targets) in rows {
            let targets: Vec<&str> = targets.iter().map(String::as_str).collect();
            out.push_str(&format!("{word}\t{}\t{}\n", relation.code(), targets.join(" ")));
        }
        out
    }

    pub fn lookup_synonyms(&self, word: &str) -> BTreeSet<String> {
        self.synonyms.get(word).cloned().unwrap_or_default()
    }

    pub fn lookup_antonyms(&self, word: &str) -> BTreeSet<String> {
        self.antonyms.get(word).cloned().unwrap_or_default()
    }

    /// Looks up the surface word first and falls back to its root; the first
    /// hit wins.
    pub fn expand(&self, word: &str, relation: Relation, stemmer: &dyn Stemmer) -> Result<BTreeSet<String>> {
        let lookup = |w: &str| match relation {
            Relation::Synonym => self.lookup_synonyms(w),
            Relation::Antonym => self.lookup_antonyms(w),
        };
        let direct = lookup(word);
        if !direct.is_empty() {
            return Ok(direct);
        }
        Ok(lookup(&stemmer.stem(word)?))
    }
}
