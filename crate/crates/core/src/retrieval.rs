//! Corpus indexing and the two candidate-paragraph rankers.
//!
//! Paragraph technique: every paragraph in the corpus is scored with the
//! passage formula
//!
//! ```text
//! sim(p, q) = Σ_t  w(p, t) · w(q, t)
//! w(p, t)   = (N / n) · log((tf + 1) / pl)
//! w(q, t)   = (N / n) · log((qtf + 1) / ql)
//! ```
//!
//! where `N` is the paragraph count, `n` the number of paragraphs holding
//! `t`, `pl`/`ql` the content-term lengths of paragraph and query. Weights
//! go negative whenever `tf + 1 < pl`; they are used as is.
//!
//! Document technique: documents are scored with
//!
//! ```text
//! sim(d, q) = Σ_i  (f_id / max_k f_kd) · log2(N / n_i)
//!                · (0.5 + 0.5 · f_iq / max_k f_kq) · log2(N / n_i)
//! ```
//!
//! the best documents are kept and their paragraphs are ranked with the
//! passage formula.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphology::Stemmer;
use crate::text::{content_tokens, split_paragraphs, Lexicons};

pub const INDEX_FORMAT_VERSION: u32 = 1;

pub type TermCounts = BTreeMap<String, u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedParagraph {
    pub doc_id: String,
    /// Ordinal of the paragraph inside its document, counting every
    /// blank-line separated block.
    pub para_id: usize,
    pub text: String,
    pub terms: TermCounts,
    /// Number of content terms.
    pub length: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedDocument {
    pub doc_id: String,
    pub terms: TermCounts,
    pub max_tf: u32,
    /// Positions of this document's paragraphs in [`Index::paragraphs`].
    pub paragraphs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Index {
    pub format_version: u32,
    pub paragraphs: Vec<IndexedParagraph>,
    pub documents: Vec<IndexedDocument>,
    pub paragraph_df: BTreeMap<String, usize>,
    pub document_df: BTreeMap<String, usize>,
}

/// Content terms of `text`: normalized, stopwords and negation particles
/// removed, each token reduced to its root.
pub fn content_terms(text: &str, lex: &Lexicons, stemmer: &dyn Stemmer) -> Result<Vec<String>> {
    content_tokens(text, lex)
        .iter()
        .map(|t| stemmer.stem(&t.surface))
        .collect()
}

fn count_terms<I: IntoIterator<Item = String>>(terms: I) -> TermCounts {
    let mut counts = TermCounts::new();
    for term in terms {
        *counts.entry(term).or_default() += 1;
    }
    counts
}

fn document_frequencies<'a, I: IntoIterator<Item = &'a TermCounts>>(units: I) -> BTreeMap<String, usize> {
    let mut df = BTreeMap::new();
    for counts in units {
        for term in counts.keys() {
            *df.entry(term.clone()).or_default() += 1;
        }
    }
    df
}

/// Indexes every paragraph with at least one content term. Documents are
/// ordered by id so ingestion order never affects the result.
pub fn build_index(corpus: &[Document], lex: &Lexicons, stemmer: &dyn Stemmer) -> Result<Index> {
    let mut sorted: Vec<&Document> = corpus.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));

    let mut paragraphs = Vec::new();
    let mut documents = Vec::new();
    for doc in sorted {
        let mut doc_terms = TermCounts::new();
        let mut members = Vec::new();
        for (para_id, text) in split_paragraphs(&doc.text).into_iter().enumerate() {
            let terms = content_terms(&text, lex, stemmer)?;
            if terms.is_empty() {
                continue;
            }
            let length = terms.len() as u32;
            let terms = count_terms(terms);
            for (term, tf) in &terms {
                *doc_terms.entry(term.clone()).or_default() += tf;
            }
            members.push(paragraphs.len());
            paragraphs.push(IndexedParagraph {
                doc_id: doc.id.clone(),
                para_id,
                text,
                terms,
                length,
            });
        }
        if members.is_empty() {
            continue;
        }
        documents.push(IndexedDocument {
            doc_id: doc.id.clone(),
            max_tf: doc_terms.values().copied().max().unwrap_or(0),
            terms: doc_terms,
            paragraphs: members,
        });
    }
    if paragraphs.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    Ok(Index {
        format_version: INDEX_FORMAT_VERSION,
        paragraph_df: document_frequencies(paragraphs.iter().map(|p| &p.terms)),
        document_df: document_frequencies(documents.iter().map(|d| &d.terms)),
        paragraphs,
        documents,
    })
}

impl Index {
    pub fn paragraph_count(&self) -> usize {
        self.paragraphs.len()
    }

    pub fn document_count(&self) -> usize {
        self.documents.len()
    }

    pub fn vocabulary_size(&self) -> usize {
        self.paragraph_df.len()
    }

    /// Corpus-wide passage statistics.
    pub fn passage_stats(&self) -> PassageStats<'_> {
        PassageStats {
            total: self.paragraphs.len(),
            df: Cow::Borrowed(&self.paragraph_df),
        }
    }

    /// Passage statistics computed over a subset of paragraphs only.
    pub fn passage_stats_for(&self, paragraphs: &[usize]) -> PassageStats<'static> {
        PassageStats {
            total: paragraphs.len(),
            df: Cow::Owned(document_frequencies(
                paragraphs.iter().map(|&i| &self.paragraphs[i].terms),
            )),
        }
    }

    /// Writes a JSON snapshot, replacing any existing file atomically.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let file_name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let tmp = dir.join(format!(".{file_name}.tmp"));
        let json = serde_json::to_vec(self).map_err(|e| Error::Snapshot(e.to_string()))?;
        let mut file = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        file.write_all(&json).map_err(|e| Error::io(&tmp, e))?;
        file.sync_all().map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Index> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let index: Index = serde_json::from_slice(&bytes).map_err(|e| Error::Snapshot(e.to_string()))?;
        if index.format_version != INDEX_FORMAT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported format version {} (expected {INDEX_FORMAT_VERSION})",
                index.format_version
            )));
        }
        Ok(index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassageStats<'a> {
    pub total: usize,
    pub df: Cow<'a, BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Query {
    pub terms: TermCounts,
    /// Σ qtf.
    pub length: u32,
    pub max_freq: u32,
}

impl Query {
    /// Returns `None` for an empty term list.
    pub fn from_terms<I: IntoIterator<Item = S>, S: Into<String>>(terms: I) -> Option<Query> {
        let terms = count_terms(terms.into_iter().map(Into::into));
        let length = terms.values().sum::<u32>();
        let max_freq = terms.values().copied().max()?;
        Some(Query {
            terms,
            length,
            max_freq,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PassageWeighting {
    /// `(N/n) · log((tf+1)/pl)`.
    #[default]
    Printed,
    /// `(N/n) · log(tf+1) / pl`, which stays non-negative. Not the default.
    LengthNormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassageScoring {
    pub log_base: f64,
    pub weighting: PassageWeighting,
}

impl Default for PassageScoring {
    fn default() -> Self {
        PassageScoring {
            log_base: 2.0,
            weighting: PassageWeighting::Printed,
        }
    }
}

impl PassageScoring {
    fn weight(&self, idf_ratio: f64, tf: f64, length: f64) -> f64 {
        match self.weighting {
            PassageWeighting::Printed => idf_ratio * ((tf + 1.0) / length).log(self.log_base),
            PassageWeighting::LengthNormalized => idf_ratio * (tf + 1.0).log(self.log_base) / length,
        }
    }
}

pub fn passage_similarity(p: &IndexedParagraph, q: &Query, stats: &PassageStats<'_>, scoring: PassageScoring) -> f64 {
    let mut score = 0.0;
    for (term, &qtf) in &q.terms {
        let Some(&tf) = p.terms.get(term) else { continue };
        let Some(&n) = stats.df.get(term).filter(|&&n| n > 0) else {
            continue;
        };
        let ratio = stats.total as f64 / n as f64;
        let wp = scoring.weight(ratio, tf as f64, p.length as f64);
        let wq = scoring.weight(ratio, qtf as f64, q.length as f64);
        score += wp * wq;
    }
    score
}

pub fn document_similarity(d: &IndexedDocument, q: &Query, idx: &Index) -> f64 {
    let total = idx.documents.len() as f64;
    let mut score = 0.0;
    for (term, &qf) in &q.terms {
        let Some(&f) = d.terms.get(term) else { continue };
        let Some(&n) = idx.document_df.get(term).filter(|&&n| n > 0) else {
            continue;
        };
        let idf = (total / n as f64).log2();
        let wd = f as f64 / d.max_tf as f64 * idf;
        let wq = (0.5 + 0.5 * qf as f64 / q.max_freq as f64) * idf;
        score += wd * wq;
    }
    score
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredCandidate {
    pub doc_id: String,
    /// Absent for document-level scores.
    pub para_id: Option<usize>,
    pub score: f64,
    /// Position in [`Index::paragraphs`] or [`Index::documents`].
    #[serde(skip)]
    pub slot: usize,
}

/// Score descending, then doc id, then paragraph id.
fn rank_order(a: &ScoredCandidate, b: &ScoredCandidate) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.doc_id.cmp(&b.doc_id))
        .then_with(|| a.para_id.cmp(&b.para_id))
}

fn top_k(mut scored: Vec<ScoredCandidate>, k: usize) -> Vec<ScoredCandidate> {
    scored.sort_by(rank_order);
    scored.truncate(k);
    scored
}

fn rank_paragraphs(
    idx: &Index,
    members: &[usize],
    q: &Query,
    stats: &PassageStats<'_>,
    scoring: PassageScoring,
    k: usize,
) -> Vec<ScoredCandidate> {
    let scored = members
        .iter()
        .map(|&slot| {
            let p = &idx.paragraphs[slot];
            ScoredCandidate {
                doc_id: p.doc_id.clone(),
                para_id: Some(p.para_id),
                score: passage_similarity(p, q, stats, scoring),
                slot,
            }
        })
        .collect();
    top_k(scored, k)
}

/// Top `k` paragraphs of the whole corpus.
pub fn paragraph_technique(idx: &Index, q: &Query, k: usize, scoring: PassageScoring) -> Vec<ScoredCandidate> {
    let all: Vec<usize> = (0..idx.paragraphs.len()).collect();
    rank_paragraphs(idx, &all, q, &idx.passage_stats(), scoring, k)
}

/// Top `k` documents by the document formula.
pub fn rank_documents(idx: &Index, q: &Query, k: usize) -> Vec<ScoredCandidate> {
    let scored = idx
        .documents
        .iter()
        .enumerate()
        .map(|(slot, d)| ScoredCandidate {
            doc_id: d.doc_id.clone(),
            para_id: None,
            score: document_similarity(d, q, idx),
            slot,
        })
        .collect();
    top_k(scored, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatsScope {
    /// `N` and `n` counted over the paragraphs of the retained documents.
    #[default]
    Retained,
    Global,
}

/// Top `k_docs` documents, then the top `k_paras` of their paragraphs.
pub fn document_technique(
    idx: &Index,
    q: &Query,
    k_docs: usize,
    k_paras: usize,
    scoring: PassageScoring,
    scope: StatsScope,
) -> Vec<ScoredCandidate> {
    let docs = rank_documents(idx, q, k_docs);
    let mut members: Vec<usize> = docs
        .iter()
        .flat_map(|d| idx.documents[d.slot].paragraphs.iter().copied())
        .collect();
    members.sort_unstable();
    let stats = match scope {
        StatsScope::Retained => idx.passage_stats_for(&members),
        StatsScope::Global => idx.passage_stats(),
    };
    rank_paragraphs(idx, &members, q, &stats, scoring, k_paras)
}
