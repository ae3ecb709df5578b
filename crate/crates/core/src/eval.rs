//! Batch evaluation against hand-labeled questions.
//!
//! Question files are UTF-8 TSV, one `question<TAB>yes|no` per line, with
//! blank lines and `#` comments ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::answer::Answer;
use crate::error::{Error, Result};
use crate::pipeline::{Engine, Resources, Settings, Technique};
use crate::retrieval::Document;

pub const DEFAULT_SWEEP: [usize; 4] = [5, 10, 15, 20];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledQuestion {
    pub question: String,
    pub gold: Answer,
}

pub fn parse_questions(text: &str, source_name: &str) -> Result<Vec<LabeledQuestion>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((question, gold)) = trimmed.rsplit_once('\t') else {
            return Err(Error::parse(source_name, i + 1, "expected question<TAB>yes|no"));
        };
        let gold = match gold.trim() {
            "yes" => Answer::Yes,
            "no" => Answer::No,
            other => {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    format!("gold label must be yes or no, got {other:?}"),
                ))
            }
        };
        let question = question.trim();
        if question.is_empty() {
            return Err(Error::parse(source_name, i + 1, "empty question"));
        }
        out.push(LabeledQuestion {
            question: question.to_owned(),
            gold,
        });
    }
    Ok(out)
}

pub fn load_questions(path: &Path) -> Result<Vec<LabeledQuestion>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_questions(&text, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalRecord {
    /// 0-based position in the question file.
    pub index: usize,
    pub question: String,
    pub gold: Answer,
    pub predicted: Answer,
    pub correct: bool,
    /// Rejection reason when the question failed to parse.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub label: String,
    pub settings: Settings,
    pub documents_used: usize,
    pub questions: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub records: Vec<EvalRecord>,
}

impl EvalReport {
    pub fn incorrect(&self) -> usize {
        self.questions - self.correct
    }
}

/// Answers every question. A malformed question counts as UNKNOWN, hence
/// incorrect; any other error aborts the run.
pub fn evaluate(engine: &Engine, questions: &[LabeledQuestion], label: impl Into<String>) -> Result<EvalReport> {
    let mut records = Vec::with_capacity(questions.len());
    for (index, q) in questions.iter().enumerate() {
        let (predicted, error) = match engine.ask(&q.question) {
            Ok(outcome) => (outcome.verdict.answer, None),
            Err(Error::Malformed(reason)) => (Answer::Unknown, Some(reason)),
            Err(e) => return Err(e),
        };
        records.push(EvalRecord {
            index,
            question: q.question.clone(),
            gold: q.gold,
            predicted,
            correct: predicted == q.gold,
            error,
        });
    }
    let correct = records.iter().filter(|r| r.correct).count();
    let total = records.len();
    Ok(EvalReport {
        label: label.into(),
        settings: *engine.settings(),
        documents_used: engine.index().document_count(),
        questions: total,
        correct,
        accuracy: if total == 0 { 0.0 } else { correct as f64 / total as f64 },
        records,
    })
}

/// Short label such as `P+T+A`: technique initial, then `T` for the
/// thesaurus and `A` for advanced search when enabled.
pub fn settings_label(s: &Settings) -> String {
    let mut label = String::from(match s.technique {
        Technique::Paragraph => "P",
        Technique::Document => "D",
    });
    if s.use_thesaurus {
        label.push_str("+T");
    }
    if s.use_advanced_search {
        label.push_str("+A");
    }
    label
}

/// Technique x thesaurus x advanced search, everything else from `base`.
pub fn settings_matrix(base: Settings) -> Vec<Settings> {
    let mut out = Vec::with_capacity(8);
    for technique in [Technique::Paragraph, Technique::Document] {
        for use_thesaurus in [false, true] {
            for use_advanced_search in [false, true] {
                out.push(Settings {
                    technique,
                    use_thesaurus,
                    use_advanced_search,
                    ..base
                });
            }
        }
    }
    out
}

/// Corpus sizes clipped to the corpus and deduplicated, ascending.
pub fn sweep_sizes(requested: &[usize], corpus_len: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = requested
        .iter()
        .map(|&s| s.min(corpus_len))
        .filter(|&s| s > 0)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

/// Number of leading questions paired with `size` documents, proportional to
/// the largest size in the sweep and rounded up.
pub fn bucket_len(total_questions: usize, size: usize, max_size: usize) -> usize {
    if max_size == 0 {
        return 0;
    }
    (total_questions * size).div_ceil(max_size).min(total_questions)
}

/// One report per corpus size. Each size indexes the first `size` documents
/// (by id order). Questions are bucketed in file order unless
/// `all_questions` is set.
pub fn corpus_sweep(
    resources: Arc<Resources>,
    corpus: &[Document],
    questions: &[LabeledQuestion],
    settings: Settings,
    sizes: &[usize],
    all_questions: bool,
) -> Result<Vec<EvalReport>> {
    let mut sorted: Vec<Document> = corpus.to_vec();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let sizes = sweep_sizes(sizes, sorted.len());
    let max_size = sizes.last().copied().unwrap_or(0);
    let mut reports = Vec::with_capacity(sizes.len());
    for size in sizes {
        let engine = Engine::from_corpus(resources.clone(), &sorted[..size], settings)?;
        let n = if all_questions {
            questions.len()
        } else {
            bucket_len(questions.len(), size, max_size)
        };
        reports.push(evaluate(&engine, &questions[..n], settings_label(&settings))?);
    }
    Ok(reports)
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Fixed-width table with correct and incorrect percentages.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>9} {:>9} {:>8} {:>10} {:>12}",
        "config", "documents", "questions", "correct", "correct %", "incorrect %"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<10} {:>9} {:>9} {:>8} {:>10.1} {:>12.1}",
            r.label,
            r.documents_used,
            r.questions,
            r.correct,
            percent(r.correct, r.questions),
            percent(r.incorrect(), r.questions),
        );
    }
    out
}

/// One JSON object per report, newline terminated.
pub fn render_json_lines(reports: &[EvalReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        let line = serde_json::to_string(r).map_err(|e| Error::Snapshot(e.to_string()))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
