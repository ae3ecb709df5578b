//! Answer selection: finds the sentence in the retrieved paragraphs that
//! best supports one of the question's logical representations and turns
//! its polarity into a yes/no verdict.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::morphology::Stemmer;
use crate::question::{LogicalRep, Provenance, RepSet};
use crate::text::{normalize, split_sentences, strip_article, tokenize, Lexicons, TokenSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

impl FromStr for Answer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" => Ok(Answer::Yes),
            "no" => Ok(Answer::No),
            "unknown" => Ok(Answer::Unknown),
            other => Err(format!("expected yes or no, got {other:?}")),
        }
    }
}

/// Whether the smallest or the largest span wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankDirection {
    #[default]
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchStrictness {
    /// A relation root and every remaining root must be present.
    #[default]
    Strict,
    /// Only a relation root is required.
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SelectionOptions {
    pub strictness: MatchStrictness,
    pub rank_direction: RankDirection,
    pub advanced_search: bool,
}

/// A sentence broken down for matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedSentence {
    pub text: String,
    pub index: usize,
    pub tokens: TokenSeq,
    /// Content tokens (no stopwords, no negation particles) with the
    /// article removed; these are compared against the exact head.
    pub surfaces: Vec<String>,
    /// Roots of the content tokens, aligned with `surfaces`.
    pub roots: Vec<String>,
}

impl AnalyzedSentence {
    pub fn analyze(text: &str, index: usize, lex: &Lexicons, stemmer: &dyn Stemmer) -> Result<Self> {
        let tokens = tokenize(&normalize(text));
        let mut surfaces = Vec::new();
        let mut roots = Vec::new();
        for token in tokens.iter() {
            if lex.is_stopword(&token.surface) || lex.is_negation(&token.surface) {
                continue;
            }
            surfaces.push(strip_article(&token.surface, lex).to_owned());
            roots.push(stemmer.stem(&token.surface)?);
        }
        Ok(AnalyzedSentence {
            text: text.to_owned(),
            index,
            tokens,
            surfaces,
            roots,
        })
    }

    fn head_positions(&self, head: &str) -> Vec<usize> {
        positions(&self.surfaces, head)
    }

    fn root_positions(&self, root: &str) -> Vec<usize> {
        positions(&self.roots, root)
    }

    pub fn contains_head(&self, head: &str) -> bool {
        self.surfaces.iter().any(|s| s == head)
    }
}

fn positions(items: &[String], wanted: &str) -> Vec<usize> {
    items
        .iter()
        .enumerate()
        .filter(|(_, s)| *s == wanted)
        .map(|(i, _)| i)
        .collect()
}

/// Keeps the sentences holding the representation's head as an exact
/// (article-stripped) token.
pub fn filter_candidates<'a>(sentences: &'a [AnalyzedSentence], rep: &LogicalRep) -> Vec<&'a AnalyzedSentence> {
    sentences.iter().filter(|s| s.contains_head(&rep.head)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceMatch {
    /// Every position of every matched term, keyed by head or root.
    pub term_positions: BTreeMap<String, Vec<usize>>,
    /// Last minus first of the first occurrences of the matched terms.
    pub span_rank: usize,
}

impl SentenceMatch {
    fn from_positions(term_positions: BTreeMap<String, Vec<usize>>) -> Option<Self> {
        let firsts: Vec<usize> = term_positions.values().filter_map(|p| p.first().copied()).collect();
        let span_rank = firsts.iter().max()? - firsts.iter().min()?;
        Some(SentenceMatch {
            term_positions,
            span_rank,
        })
    }
}

/// Records the relation roots present in `sentence`; `None` if there is none.
fn match_relation(
    sentence: &AnalyzedSentence,
    rep: &LogicalRep,
    found: &mut BTreeMap<String, Vec<usize>>,
) -> Option<()> {
    let mut hit = false;
    for root in &rep.relation_roots {
        let at = sentence.root_positions(root);
        if !at.is_empty() {
            found.insert(root.clone(), at);
            hit = true;
        }
    }
    hit.then_some(())
}

/// Matches a sentence that contains the head. A relation root is always
/// required; remaining roots are required under [`MatchStrictness::Strict`].
pub fn match_and_rank(
    sentence: &AnalyzedSentence,
    rep: &LogicalRep,
    strictness: MatchStrictness,
) -> Option<SentenceMatch> {
    let head = sentence.head_positions(&rep.head);
    if head.is_empty() {
        return None;
    }
    let mut found = BTreeMap::from([(rep.head.clone(), head)]);
    match_relation(sentence, rep, &mut found)?;
    for root in &rep.remaining_roots {
        let at = sentence.root_positions(root);
        if at.is_empty() {
            if strictness == MatchStrictness::Strict {
                return None;
            }
        } else {
            found.insert(root.clone(), at);
        }
    }
    SentenceMatch::from_positions(found)
}

pub fn detect_answer_negation(tokens: &TokenSeq, lex: &Lexicons) -> bool {
    tokens.iter().any(|t| lex.is_negation(&t.surface))
}

/// Yes when question and answer agree in polarity.
pub fn resolve_polarity(rep_negated: bool, answer_negated: bool) -> Answer {
    if rep_negated == answer_negated {
        Answer::Yes
    } else {
        Answer::No
    }
}

/// Preceding-sentence lookup for a head that a later sentence only refers
/// to implicitly. Sentence `i` must carry a relation root but not the head;
/// sentence `i - 1` must carry the head. Remaining roots may come from
/// either sentence. Span is measured in sentence `i` alone.
fn advanced_matches(
    sentences: &[AnalyzedSentence],
    rep: &LogicalRep,
    strictness: MatchStrictness,
) -> Vec<(usize, SentenceMatch)> {
    let mut out = Vec::new();
    for (i, pair) in sentences.windows(2).enumerate() {
        let (prev, current) = (&pair[0], &pair[1]);
        if current.contains_head(&rep.head) || !prev.contains_head(&rep.head) {
            continue;
        }
        let mut found = BTreeMap::new();
        if match_relation(current, rep, &mut found).is_none() {
            continue;
        }
        let mut complete = true;
        for root in &rep.remaining_roots {
            let here = current.root_positions(root);
            if !here.is_empty() {
                found.insert(root.clone(), here);
            } else if prev.root_positions(root).is_empty() {
                complete = false;
            }
        }
        if !complete && strictness == MatchStrictness::Strict {
            continue;
        }
        if let Some(m) = SentenceMatch::from_positions(found) {
            out.push((i + 1, m));
        }
    }
    out
}

/// Best preceding-sentence match (smallest span, then earliest sentence).
pub fn advanced_search(
    sentences: &[AnalyzedSentence],
    rep: &LogicalRep,
    strictness: MatchStrictness,
) -> Option<(usize, SentenceMatch)> {
    advanced_matches(sentences, rep, strictness)
        .into_iter()
        .min_by(|a, b| a.1.span_rank.cmp(&b.1.span_rank).then(a.0.cmp(&b.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievedParagraph {
    pub doc_id: String,
    pub para_id: usize,
    pub score: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSentence {
    pub text: String,
    pub doc_id: String,
    pub para_id: usize,
    /// Rank of the paragraph in the retrieval output, 0-based.
    pub paragraph_rank: usize,
    pub sentence_index: usize,
    pub matched_rep: LogicalRep,
    pub term_positions: BTreeMap<String, Vec<usize>>,
    pub span_rank: usize,
    pub answer_negated: bool,
    pub via_advanced_search: bool,
}

impl CandidateSentence {
    pub fn answer(&self) -> Answer {
        resolve_polarity(self.matched_rep.negated, self.answer_negated)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub rep: String,
    pub provenance: Provenance,
    pub doc_id: String,
    pub para_id: usize,
    pub sentence_index: usize,
    pub span_rank: usize,
    pub via_advanced_search: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub supporting: Option<CandidateSentence>,
    pub trace: Vec<TraceRecord>,
}

fn selection_order(direction: RankDirection) -> impl Fn(&CandidateSentence, &CandidateSentence) -> Ordering {
    move |a, b| {
        let span = match direction {
            RankDirection::Min => a.span_rank.cmp(&b.span_rank),
            RankDirection::Max => b.span_rank.cmp(&a.span_rank),
        };
        span.then(a.paragraph_rank.cmp(&b.paragraph_rank))
            .then(a.sentence_index.cmp(&b.sentence_index))
            .then(a.matched_rep.provenance.cmp(&b.matched_rep.provenance))
    }
}

/// Collects direct matches for every (sentence, representation) pair and
/// falls back to the preceding-sentence search only when there are none.
pub fn select_answer(
    paragraphs: &[RetrievedParagraph],
    repset: &RepSet,
    lex: &Lexicons,
    stemmer: &dyn Stemmer,
    opts: SelectionOptions,
) -> Result<Verdict> {
    let analyzed = paragraphs
        .iter()
        .map(|p| {
            split_sentences(&p.text)
                .iter()
                .enumerate()
                .map(|(i, s)| AnalyzedSentence::analyze(s, i, lex, stemmer))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let candidate = |rank: usize, sentence: &AnalyzedSentence, rep: &LogicalRep, m: SentenceMatch, advanced: bool| {
        let p = &paragraphs[rank];
        CandidateSentence {
            text: sentence.text.clone(),
            doc_id: p.doc_id.clone(),
            para_id: p.para_id,
            paragraph_rank: rank,
            sentence_index: sentence.index,
            matched_rep: rep.clone(),
            term_positions: m.term_positions,
            span_rank: m.span_rank,
            answer_negated: detect_answer_negation(&sentence.tokens, lex),
            via_advanced_search: advanced,
        }
    };

    let mut candidates = Vec::new();
    for (rank, sentences) in analyzed.iter().enumerate() {
        for rep in &repset.reps {
            for sentence in filter_candidates(sentences, rep) {
                if let Some(m) = match_and_rank(sentence, rep, opts.strictness) {
                    candidates.push(candidate(rank, sentence, rep, m, false));
                }
            }
        }
    }
    if candidates.is_empty() && opts.advanced_search {
        for (rank, sentences) in analyzed.iter().enumerate() {
            for rep in &repset.reps {
                for (i, m) in advanced_matches(sentences, rep, opts.strictness) {
                    candidates.push(candidate(rank, &sentences[i], rep, m, true));
                }
            }
        }
    }

    candidates.sort_by(selection_order(opts.rank_direction));
    let trace = candidates
        .iter()
        .map(|c| TraceRecord {
            rep: c.matched_rep.to_string(),
            provenance: c.matched_rep.provenance,
            doc_id: c.doc_id.clone(),
            para_id: c.para_id,
            sentence_index: c.sentence_index,
            span_rank: c.span_rank,
            via_advanced_search: c.via_advanced_search,
        })
        .collect();
    let supporting = candidates.into_iter().next();
    let answer = supporting.as_ref().map_or(Answer::Unknown, CandidateSentence::answer);
    Ok(Verdict {
        answer,
        supporting,
        trace,
    })
}
