//! End-to-end question answering: analysis, retrieval, answer selection.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::answer::{select_answer, MatchStrictness, RankDirection, RetrievedParagraph, SelectionOptions, Verdict};
use crate::error::{Error, Result};
use crate::morphology::{HeuristicTagger, LightStemmer, Overrides, Stemmer, Tagger, Thesaurus};
use crate::question::{analyze_question, RepSet};
use crate::retrieval::{
    build_index, document_technique, paragraph_technique, Document, Index, PassageScoring, PassageWeighting, Query,
    ScoredCandidate, StatsScope,
};
use crate::text::Lexicons;

const BUNDLED_STOPWORDS: &str = include_str!("../../../data/lexicon/stopwords.txt");
const BUNDLED_NEGATION: &str = include_str!("../../../data/lexicon/negation.txt");
const BUNDLED_ARTICLE_EXCEPTIONS: &str = include_str!("../../../data/lexicon/alef_lam.txt");
const BUNDLED_THESAURUS: &str = include_str!("../../../data/lexicon/thesaurus.tsv");
const BUNDLED_STEMS: &str = include_str!("../../../data/lexicon/stems.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    #[default]
    Paragraph,
    Document,
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technique::Paragraph => "paragraph",
            Technique::Document => "document",
        })
    }
}

impl FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paragraph" => Ok(Technique::Paragraph),
            "document" => Ok(Technique::Document),
            other => Err(format!("unknown technique {other:?}, expected paragraph or document")),
        }
    }
}

/// Every knob of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub technique: Technique,
    pub k_paras: usize,
    pub k_docs: usize,
    pub use_thesaurus: bool,
    pub use_advanced_search: bool,
    pub log_base: f64,
    pub rank_direction: RankDirection,
    pub match_strictness: MatchStrictness,
    pub passage_weighting: PassageWeighting,
    pub stats_scope: StatsScope,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            technique: Technique::Paragraph,
            k_paras: 5,
            k_docs: 5,
            use_thesaurus: true,
            use_advanced_search: true,
            log_base: 2.0,
            rank_direction: RankDirection::Min,
            match_strictness: MatchStrictness::Strict,
            passage_weighting: PassageWeighting::Printed,
            stats_scope: StatsScope::Retained,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        if self.k_paras == 0 || self.k_docs == 0 {
            return Err(Error::Config("k and k_docs must be at least 1".into()));
        }
        if !(self.log_base > 0.0 && self.log_base != 1.0 && self.log_base.is_finite()) {
            return Err(Error::Config(format!("log base {} is not usable", self.log_base)));
        }
        Ok(())
    }

    fn scoring(&self) -> PassageScoring {
        PassageScoring {
            log_base: self.log_base,
            weighting: self.passage_weighting,
        }
    }

    fn selection(&self) -> SelectionOptions {
        SelectionOptions {
            strictness: self.match_strictness,
            rank_direction: self.rank_direction,
            advanced_search: self.use_advanced_search,
        }
    }
}

/// Lexicons, thesaurus and morphology shared by every query.
pub struct Resources {
    pub lexicons: Lexicons,
    pub thesaurus: Thesaurus,
    pub stemmer: Arc<dyn Stemmer>,
    pub tagger: Arc<dyn Tagger>,
}

impl fmt::Debug for Resources {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Resources")
            .field("lexicons", &self.lexicons)
            .field("thesaurus", &self.thesaurus)
            .finish_non_exhaustive()
    }
}

/// Optional replacements for the bundled lexicon files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconPaths {
    pub stopwords: Option<PathBuf>,
    pub negation: Option<PathBuf>,
    pub article_exceptions: Option<PathBuf>,
    pub thesaurus: Option<PathBuf>,
    pub stems: Option<PathBuf>,
}

impl LexiconPaths {
    pub fn iter(&self) -> impl Iterator<Item = &Path> {
        [
            &self.stopwords,
            &self.negation,
            &self.article_exceptions,
            &self.thesaurus,
            &self.stems,
        ]
        .into_iter()
        .filter_map(|p| p.as_deref())
    }
}

fn read_or(path: Option<&Path>, bundled: &'static str) -> Result<(String, String)> {
    match path {
        Some(p) => Ok((
            std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
            p.display().to_string(),
        )),
        None => Ok((bundled.to_owned(), "<bundled>".to_owned())),
    }
}

impl Resources {
    /// The lexicons shipped in `data/lexicon`.
    pub fn bundled() -> Result<Self> {
        Resources::load(&LexiconPaths::default())
    }

    pub fn load(paths: &LexiconPaths) -> Result<Self> {
        let (stop, _) = read_or(paths.stopwords.as_deref(), BUNDLED_STOPWORDS)?;
        let (neg, _) = read_or(paths.negation.as_deref(), BUNDLED_NEGATION)?;
        let (exc, _) = read_or(paths.article_exceptions.as_deref(), BUNDLED_ARTICLE_EXCEPTIONS)?;
        let (thes, thes_name) = read_or(paths.thesaurus.as_deref(), BUNDLED_THESAURUS)?;
        let (stems, stems_name) = read_or(paths.stems.as_deref(), BUNDLED_STEMS)?;

        let overrides = Overrides::parse(&stems, &stems_name)?;
        Ok(Resources {
            lexicons: Lexicons::from_word_lists(&stop, &neg, &exc)?,
            thesaurus: Thesaurus::parse(&thes, &thes_name)?,
            stemmer: Arc::new(LightStemmer::with_overrides(&overrides)?),
            tagger: Arc::new(HeuristicTagger::new(&overrides)),
        })
    }

    pub fn build_index(&self, corpus: &[Document]) -> Result<Index> {
        build_index(corpus, &self.lexicons, self.stemmer.as_ref())
    }

    pub fn analyze(&self, question: &str, use_thesaurus: bool) -> Result<RepSet> {
        analyze_question(
            question,
            &self.lexicons,
            self.tagger.as_ref(),
            self.stemmer.as_ref(),
            use_thesaurus.then_some(&self.thesaurus),
        )
    }
}

/// Reads every `.txt` file of `dir`; the file stem becomes the document id.
pub fn load_corpus(dir: &Path) -> Result<Vec<Document>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut docs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() || path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        docs.push(Document::new(id, text));
    }
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AskOutcome {
    pub question: String,
    pub repset: RepSet,
    pub retrieved: Vec<RetrievedParagraph>,
    /// Document scores, filled by the document technique only.
    pub documents: Vec<ScoredCandidate>,
    pub verdict: Verdict,
}

pub struct Engine {
    resources: Arc<Resources>,
    index: Index,
    settings: Settings,
}

impl Engine {
    pub fn new(resources: Arc<Resources>, index: Index, settings: Settings) -> Result<Self> {
        settings.validate()?;
        Ok(Engine {
            resources,
            index,
            settings,
        })
    }

    pub fn from_corpus(resources: Arc<Resources>, corpus: &[Document], settings: Settings) -> Result<Self> {
        let index = resources.build_index(corpus)?;
        Engine::new(resources, index, settings)
    }

    pub fn index(&self) -> &Index {
        &self.index
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn resources(&self) -> &Resources {
        &self.resources
    }

    pub fn with_settings(&self, settings: Settings) -> Result<Engine> {
        Engine::new(self.resources.clone(), self.index.clone(), settings)
    }

    pub fn ask(&self, question: &str) -> Result<AskOutcome> {
        let s = &self.settings;
        let repset = self.resources.analyze(question, s.use_thesaurus)?;
        let query = Query::from_terms(repset.query_terms.iter().cloned())
            .ok_or_else(|| Error::Malformed("question has no content terms".into()))?;

        let (ranked, documents) = match s.technique {
            Technique::Paragraph => (
                paragraph_technique(&self.index, &query, s.k_paras, s.scoring()),
                Vec::new(),
            ),
            Technique::Document => (
                document_technique(&self.index, &query, s.k_docs, s.k_paras, s.scoring(), s.stats_scope),
                crate::retrieval::rank_documents(&self.index, &query, s.k_docs),
            ),
        };
        let retrieved: Vec<RetrievedParagraph> = ranked
            .iter()
            .map(|c| {
                let p = &self.index.paragraphs[c.slot];
                RetrievedParagraph {
                    doc_id: p.doc_id.clone(),
                    para_id: p.para_id,
                    score: c.score,
                    text: p.text.clone(),
                }
            })
            .collect();

        let verdict = select_answer(
            &retrieved,
            &repset,
            &self.resources.lexicons,
            self.resources.stemmer.as_ref(),
            s.selection(),
        )?;
        Ok(AskOutcome {
            question: question.to_owned(),
            repset,
            retrieved,
            documents,
            verdict,
        })
    }
}
