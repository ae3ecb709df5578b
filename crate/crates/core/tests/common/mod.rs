//! Random corpora and a brute-force scorer that never touches the index.

#![allow(dead_code)]

use std::path::PathBuf;

use halqa_core::{Document, Lexicons};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Documents as lists of paragraphs as lists of terms.
#[derive(Debug, Clone)]
pub struct RawCorpus {
    pub docs: Vec<(String, Vec<Vec<String>>)>,
}

pub fn term(i: usize) -> String {
    format!("w{i:02}")
}

/// Up to 10 documents, up to 5 paragraphs each, over a vocabulary of at
/// most 30 terms. Latin tokens pass through the stemmer untouched.
pub fn random_corpus(rng: &mut StdRng) -> (RawCorpus, usize) {
    let vocab = rng.gen_range(1..=30);
    let n_docs = rng.gen_range(1..=10);
    let docs = (0..n_docs)
        .map(|d| {
            let n_paras = rng.gen_range(1..=5);
            let paras = (0..n_paras)
                .map(|_| {
                    let len = rng.gen_range(1..=12);
                    (0..len).map(|_| term(rng.gen_range(0..vocab))).collect()
                })
                .collect();
            (format!("doc{d:02}"), paras)
        })
        .collect();
    (RawCorpus { docs }, vocab)
}

/// One to six terms, duplicates allowed, sometimes one the corpus lacks.
pub fn random_query(rng: &mut StdRng, vocab: usize) -> Vec<String> {
    let len = rng.gen_range(1..=6);
    let mut q: Vec<String> = (0..len).map(|_| term(rng.gen_range(0..vocab))).collect();
    if rng.gen_bool(0.2) {
        q.push("absent".into());
    }
    q.shuffle(rng);
    q
}

impl RawCorpus {
    pub fn documents(&self) -> Vec<Document> {
        self.docs
            .iter()
            .map(|(id, paras)| {
                let text = paras.iter().map(|p| p.join(" ")).collect::<Vec<_>>().join("\n\n");
                Document::new(id.clone(), text)
            })
            .collect()
    }

    fn paragraphs(&self) -> impl Iterator<Item = &Vec<String>> {
        self.docs.iter().flat_map(|(_, paras)| paras.iter())
    }

    fn count(list: &[String], t: &str) -> usize {
        list.iter().filter(|x| *x == t).count()
    }

    fn distinct(list: &[String]) -> Vec<&String> {
        let mut seen: Vec<&String> = Vec::new();
        for t in list {
            if !seen.contains(&t) {
                seen.push(t);
            }
        }
        seen
    }

    /// Passage formula over every paragraph of the corpus, base 2.
    pub fn passage_score(&self, doc: usize, para: usize, query: &[String]) -> f64 {
        let p = &self.docs[doc].1[para];
        let big_n = self.paragraphs().count() as f64;
        let pl = p.len() as f64;
        let ql = query.len() as f64;
        let mut score = 0.0;
        for t in Self::distinct(query) {
            let tf = Self::count(p, t) as f64;
            if tf == 0.0 {
                continue;
            }
            let n = self.paragraphs().filter(|q| q.contains(t)).count() as f64;
            let qtf = Self::count(query, t) as f64;
            let wp = big_n / n * ((tf + 1.0) / pl).ln() / std::f64::consts::LN_2;
            let wq = big_n / n * ((qtf + 1.0) / ql).ln() / std::f64::consts::LN_2;
            score += wp * wq;
        }
        score
    }

    /// Document formula: tf over the whole document, max-normalized on both sides.
    pub fn document_score(&self, doc: usize, query: &[String]) -> f64 {
        let flat: Vec<String> = self.docs[doc].1.iter().flatten().cloned().collect();
        let big_n = self.docs.len() as f64;
        let max_d = Self::distinct(&flat)
            .iter()
            .map(|t| Self::count(&flat, t))
            .max()
            .unwrap_or(0) as f64;
        let max_q = Self::distinct(query)
            .iter()
            .map(|t| Self::count(query, t))
            .max()
            .unwrap_or(0) as f64;
        let mut score = 0.0;
        for t in Self::distinct(query) {
            let f = Self::count(&flat, t) as f64;
            if f == 0.0 {
                continue;
            }
            let n = self
                .docs
                .iter()
                .filter(|(_, ps)| ps.iter().any(|p| p.contains(t)))
                .count() as f64;
            let idf = (big_n / n).ln() / std::f64::consts::LN_2;
            let qf = Self::count(query, t) as f64;
            score += (f / max_d) * idf * (0.5 + 0.5 * qf / max_q) * idf;
        }
        score
    }
}

pub fn plain_lexicons() -> Lexicons {
    Lexicons::new(Vec::<&str>::new(), Vec::<&str>::new(), Vec::<&str>::new()).unwrap()
}
