//! Yes/no question answering over Arabic text.
//!
//! A هل-question is parsed into logical representations (with thesaurus
//! expansion and negation tracking), the corpus is searched with a
//! paragraph-level or document-level tf-idf ranking, and the closest
//! matching sentence decides between yes and no.
//!
//! ```no_run
//! use std::sync::Arc;
//! use halqa_core::{load_corpus, Engine, Resources, Settings};
//!
//! let resources = Arc::new(Resources::bundled()?);
//! let corpus = load_corpus("data/corpus".as_ref())?;
//! let engine = Engine::from_corpus(resources, &corpus, Settings::default())?;
//! println!("{}", engine.ask("هل محمد ولد جميل ؟")?.verdict.answer);
//! # Ok::<(), halqa_core::Error>(())
//! ```

pub mod answer;
pub mod config;
pub mod error;
pub mod eval;
pub mod morphology;
pub mod pipeline;
pub mod question;
pub mod retrieval;
pub mod text;

pub use answer::{Answer, MatchStrictness, RankDirection, Verdict};
pub use config::Config;
pub use error::{Error, Result};
pub use eval::{EvalRecord, EvalReport, LabeledQuestion};
pub use morphology::{LightStemmer, PosTag, Stemmer, Tagger, Thesaurus};
pub use pipeline::{load_corpus, AskOutcome, Engine, LexiconPaths, Resources, Settings, Technique};
pub use question::{LogicalRep, ParsedQuestion, Provenance, RepSet, SentenceKind};
pub use retrieval::{Document, Index, PassageWeighting, StatsScope};
pub use text::{normalize, tokenize, Lexicons, NormalizedText, Token, TokenSeq};
