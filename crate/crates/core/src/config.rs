//! TOML run configuration. Every field is optional; unset fields fall back to
//! [`Settings::default`] and the bundled lexicons. Relative paths are
//! resolved against the directory holding the config file.
//!
//! ```toml
//! corpus = "data/corpus"
//! technique = "document"
//! k = 5
//! k_docs = 5
//! thesaurus = true
//! advanced = false
//!
//! [lexicon]
//! thesaurus = "data/lexicon/thesaurus.tsv"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::answer::{MatchStrictness, RankDirection};
use crate::error::{Error, Result};
use crate::pipeline::{LexiconPaths, Settings, Technique};
use crate::retrieval::{PassageWeighting, StatsScope};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub corpus: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub technique: Option<Technique>,
    pub k: Option<usize>,
    pub k_docs: Option<usize>,
    pub thesaurus: Option<bool>,
    pub advanced: Option<bool>,
    pub log_base: Option<f64>,
    pub rank_direction: Option<RankDirection>,
    pub match_strictness: Option<MatchStrictness>,
    pub passage_weighting: Option<PassageWeighting>,
    pub stats_scope: Option<StatsScope>,
    #[serde(default)]
    pub lexicon: LexiconPaths,
}

impl Config {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(path) = p {
                if path.is_relative() {
                    *path = base_dir.join(&*path);
                }
            }
        };
        resolve(&mut config.corpus);
        resolve(&mut config.index);
        let lex = &mut config.lexicon;
        for p in [
            &mut lex.stopwords,
            &mut lex.negation,
            &mut lex.article_exceptions,
            &mut lex.thesaurus,
            &mut lex.stems,
        ] {
            resolve(p);
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::parse(&text, base)
    }

    pub fn settings(&self) -> Result<Settings> {
        let d = Settings::default();
        let settings = Settings {
            technique: self.technique.unwrap_or(d.technique),
            k_paras: self.k.unwrap_or(d.k_paras),
            k_docs: self.k_docs.unwrap_or(d.k_docs),
            use_thesaurus: self.thesaurus.unwrap_or(d.use_thesaurus),
            use_advanced_search: self.advanced.unwrap_or(d.use_advanced_search),
            log_base: self.log_base.unwrap_or(d.log_base),
            rank_direction: self.rank_direction.unwrap_or(d.rank_direction),
            match_strictness: self.match_strictness.unwrap_or(d.match_strictness),
            passage_weighting: self.passage_weighting.unwrap_or(d.passage_weighting),
            stats_scope: self.stats_scope.unwrap_or(d.stats_scope),
        };
        settings.validate()?;
        Ok(settings)
    }

    /// Fails when a referenced file or directory is missing.
    pub fn check_paths(&self) -> Result<()> {
        for path in self.lexicon.iter() {
            if !path.is_file() {
                return Err(Error::Config(format!("lexicon file {} does not exist", path.display())));
            }
        }
        if let Some(corpus) = &self.corpus {
            if !corpus.is_dir() {
                return Err(Error::Config(format!(
                    "corpus directory {} does not exist",
                    corpus.display()
                )));
            }
        }
        Ok(())
    }
}
