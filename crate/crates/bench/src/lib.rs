//! Fixture loading shared by the benchmarks.

use std::path::{Path, PathBuf};

use halqa_core::{load_corpus, Document, Result};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fixture_corpus() -> Result<Vec<Document>> {
    load_corpus(&data_dir().join("corpus"))
}

pub fn fixture_questions() -> Result<Vec<String>> {
    let qs = halqa_core::eval::load_questions(&data_dir().join("questions.tsv"))?;
    Ok(qs.into_iter().map(|q| q.question).collect())
}
