//! Question analysis: turns a هل-question into a nominal or verbal parse
//! and expands it into logical representations.
//!
//! A nominal question `هل محمد ولد جميل` yields the topic محمد, the comment
//! جميل and the remaining word ولد. A verbal question `هل فتح محمود الباب`
//! yields the verb فتح, the subject محمود and the remaining word الباب. Each
//! parse expands into at most three representations: the base form, one
//! built from the thesaurus synonyms of the comment/verb, and one built from
//! its antonyms with the polarity flipped.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphology::{PosTag, Relation, Stemmer, Tagger, Thesaurus};
use crate::text::{detect_negation, normalize, remove_stopwords, strip_article, tokenize, Lexicons};

pub const INTERROGATIVE: &str = "هل";

/// Verbs whose object is introduced by ب and carries the actual predicate
/// (يوصف بـ, يشتهر بـ, يتميز بـ).
pub const SPECIAL_VERB_ROOTS: [&str; 3] = ["وصف", "شهر", "ميز"];

const PREPOSITION_BA: &str = "ب";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SentenceKind {
    Nominal,
    Verbal,
}

impl SentenceKind {
    pub fn symbol(self) -> char {
        match self {
            SentenceKind::Nominal => 'N',
            SentenceKind::Verbal => 'V',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParsedQuestion {
    pub kind: SentenceKind,
    /// Topic of a nominal question or subject of a verbal one, article
    /// stripped but not stemmed.
    pub head: String,
    /// Comment of a nominal question or verb of a verbal one.
    pub relation: String,
    pub remaining: Vec<String>,
    pub negated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Base,
    Synonym,
    Antonym,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogicalRep {
    pub kind: SentenceKind,
    pub negated: bool,
    pub head: String,
    pub relation_roots: BTreeSet<String>,
    pub remaining_roots: Vec<String>,
    pub provenance: Provenance,
}

impl fmt::Display for LogicalRep {
    /// `~N(محمد, root{قبيح}, [ولد])`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        let relation: Vec<&str> = self.relation_roots.iter().map(String::as_str).collect();
        write!(
            f,
            "{}({}, root{{{}}}, [{}])",
            self.kind.symbol(),
            self.head,
            relation.join(" "),
            self.remaining_roots.join(" ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepSet {
    pub reps: Vec<LogicalRep>,
    pub source: ParsedQuestion,
    /// Root of the head, then the base relation root, then the remaining
    /// roots, duplicates kept.
    pub query_terms: Vec<String>,
}

impl RepSet {
    pub fn base(&self) -> &LogicalRep {
        self.reps
            .iter()
            .find(|r| r.provenance == Provenance::Base)
            .expect("a RepSet always holds a base representation")
    }
}

fn malformed(reason: impl Into<String>) -> Error {
    Error::Malformed(reason.into())
}

/// Checks the question shape and extracts head, relation and remaining
/// words. Rejects anything that does not start with هل or lacks a head or a
/// relation.
pub fn parse_question(raw: &str, lex: &Lexicons, tagger: &dyn Tagger) -> Result<ParsedQuestion> {
    let tokens = tokenize(&normalize(raw));
    match tokens.first() {
        Some(t) if t.surface == INTERROGATIVE => {}
        Some(_) => return Err(malformed("question does not start with هل")),
        None => return Err(malformed("empty question")),
    }
    let all: Vec<String> = tokens.surfaces().map(str::to_owned).collect();

    let rest = tokens.iter().skip(1).cloned().collect();
    let (negated, content) = detect_negation(remove_stopwords(rest, lex), lex);
    if content.is_empty() {
        return Err(malformed("no content words after هل"));
    }

    let tagged: Vec<(&str, PosTag)> = content
        .iter()
        .map(|t| {
            let preceding = t.position.checked_sub(1).map(|p| all[p].as_str());
            (t.surface.as_str(), tagger.tag(&t.surface, preceding))
        })
        .collect();

    let (kind, head_idx, relation_idx) = match tagged[0].1 {
        PosTag::Verb => {
            let subject = tagged
                .iter()
                .skip(1)
                .position(|&(_, tag)| tag == PosTag::Noun)
                .map(|i| i + 1)
                .ok_or_else(|| malformed("no subject noun after the verb"))?;
            (SentenceKind::Verbal, subject, 0)
        }
        PosTag::Noun => {
            let comment = tagged
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .find(|&(_, &(word, tag))| tag == PosTag::Noun && !lex.has_article(word))
                .map(|(i, _)| i)
                .ok_or_else(|| malformed("no comment: every noun after the topic carries ال"))?;
            (SentenceKind::Nominal, 0, comment)
        }
    };

    let head = strip_article(tagged[head_idx].0, lex).to_owned();
    let relation = tagged[relation_idx].0.to_owned();
    let remaining = tagged
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != head_idx && i != relation_idx)
        .map(|(_, &(word, _))| word.to_owned())
        .collect();

    Ok(ParsedQuestion {
        kind,
        head,
        relation,
        remaining,
        negated,
    })
}

/// For verbs rooted in وصف, شهر or ميز the predicate is the ب-object:
/// `هل يوصف محمد بالكرم` asks about كرم, not about describing. The first
/// remaining word starting with ب replaces the relation (as a root).
pub fn preprocess_special_verb(q: ParsedQuestion, stemmer: &dyn Stemmer) -> Result<ParsedQuestion> {
    if q.kind != SentenceKind::Verbal {
        return Ok(q);
    }
    let verb_root = stemmer.stem(&q.relation)?;
    if !SPECIAL_VERB_ROOTS.contains(&verb_root.as_str()) {
        return Ok(q);
    }
    let Some(idx) = q
        .remaining
        .iter()
        .position(|w| w.starts_with(PREPOSITION_BA) && w.chars().count() > 1)
    else {
        return Ok(q);
    };
    let mut q = q;
    let object = q.remaining.remove(idx);
    q.relation = stemmer.stem(&object[PREPOSITION_BA.len()..])?;
    Ok(q)
}

/// Builds the base representation plus synonym and antonym variants when the
/// thesaurus has entries for the relation. Antonyms flip the polarity.
pub fn build_representations(
    q: &ParsedQuestion,
    thesaurus: Option<&Thesaurus>,
    stemmer: &dyn Stemmer,
) -> Result<RepSet> {
    let remaining_roots = q
        .remaining
        .iter()
        .map(|w| stemmer.stem(w))
        .collect::<Result<Vec<_>>>()?;
    let relation_root = stemmer.stem(&q.relation)?;

    let rep = |relation_roots: BTreeSet<String>, provenance: Provenance| LogicalRep {
        kind: q.kind,
        negated: q.negated ^ (provenance == Provenance::Antonym),
        head: q.head.clone(),
        relation_roots,
        remaining_roots: remaining_roots.clone(),
        provenance,
    };

    let mut reps = vec![rep(BTreeSet::from([relation_root.clone()]), Provenance::Base)];
    if let Some(thesaurus) = thesaurus {
        for (relation, provenance) in [
            (Relation::Synonym, Provenance::Synonym),
            (Relation::Antonym, Provenance::Antonym),
        ] {
            let words = thesaurus.expand(&q.relation, relation, stemmer)?;
            if words.is_empty() {
                continue;
            }
            let roots = words.iter().map(|w| stemmer.stem(w)).collect::<Result<BTreeSet<_>>>()?;
            reps.push(rep(roots, provenance));
        }
    }

    let mut query_terms = vec![stemmer.stem(&q.head)?, relation_root];
    query_terms.extend(remaining_roots.iter().cloned());

    Ok(RepSet {
        reps,
        source: q.clone(),
        query_terms,
    })
}

/// The deduplicated retrieval query: head root, base relation root, then the
/// remaining roots. Synonym and antonym roots are left out.
pub fn retrieval_terms(rs: &RepSet) -> Vec<String> {
    let mut seen = BTreeSet::new();
    rs.query_terms
        .iter()
        .filter(|t| seen.insert(t.as_str()))
        .cloned()
        .collect()
}

/// Parse, special-verb rewrite and representation building in one call.
pub fn analyze_question(
    raw: &str,
    lex: &Lexicons,
    tagger: &dyn Tagger,
    stemmer: &dyn Stemmer,
    thesaurus: Option<&Thesaurus>,
) -> Result<RepSet> {
    let parsed = parse_question(raw, lex, tagger)?;
    let parsed = preprocess_special_verb(parsed, stemmer)?;
    build_representations(&parsed, thesaurus, stemmer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::{HeuristicTagger, LightStemmer, Overrides};

    struct Fixture {
        lex: Lexicons,
        tagger: HeuristicTagger,
        stemmer: LightStemmer,
        thesaurus: Thesaurus,
    }

    fn fixture() -> Fixture {
        let overrides = Overrides::parse(
            "فتح\tفتح\tVERB\nيفتح\tفتح\tVERB\nتكثر\tتكثر\tVERB\nيوصف\tوصف\tVERB\nيشتهر\tشهر\tVERB\n",
            "test",
        )
        .unwrap();
        Fixture {
            lex: Lexicons::new(["في", "التي", "الذي"], ["لا", "لم", "لن", "ليس", "ما", "غير"], ["الله"]).unwrap(),
            tagger: HeuristicTagger::new(&overrides),
            stemmer: LightStemmer::with_overrides(&overrides).unwrap(),
            thesaurus: Thesaurus::parse(
                "كسرت\tsyn\tحطمت\nتكثر\tsyn\tتزداد\nتكثر\tant\tتقل\nجميل\tant\tقبيح\nفتح\tant\tأغلق\n",
                "test",
            )
            .unwrap(),
        }
    }

    fn parse(f: &Fixture, q: &str) -> Result<ParsedQuestion> {
        parse_question(q, &f.lex, &f.tagger)
    }

    #[test]
    fn nominal_parse() {
        let f = fixture();
        let q = parse(&f, "هل محمد ولد جميل ؟").unwrap();
        assert_eq!(q.kind, SentenceKind::Nominal);
        assert_eq!(q.head, "محمد");
        assert_eq!(q.relation, "جميل");
        assert_eq!(q.remaining, vec!["ولد"]);
        assert!(!q.negated);
    }

    #[test]
    fn verbal_parse() {
        let f = fixture();
        let q = parse(&f, "هل فتح محمود الباب ؟").unwrap();
        assert_eq!(q.kind, SentenceKind::Verbal);
        assert_eq!(q.head, "محمود");
        assert_eq!(q.relation, "فتح");
        assert_eq!(q.remaining, vec!["الباب"]);
    }

    #[test]
    fn rejects_malformed() {
        let f = fixture();
        assert!(matches!(parse(&f, "جميل الجو"), Err(Error::Malformed(_))));
        assert!(matches!(parse(&f, "كيف حالك ؟"), Err(Error::Malformed(_))));
        assert!(matches!(parse(&f, "هل ؟"), Err(Error::Malformed(_))));
        assert!(matches!(parse(&f, ""), Err(Error::Malformed(_))));
        // topic with no article-free comment
        assert!(matches!(parse(&f, "هل محمد في البيت ؟"), Err(Error::Malformed(_))));
        // verb with no subject
        assert!(matches!(parse(&f, "هل فتح ؟"), Err(Error::Malformed(_))));
    }

    #[test]
    fn negated_question_tags_verb_after_particle() {
        let f = fixture();
        let q = parse(&f, "هل لم يفتح محمود الباب ؟").unwrap();
        assert!(q.negated);
        assert_eq!(q.kind, SentenceKind::Verbal);
        assert_eq!(q.relation, "يفتح");
    }

    #[test]
    fn head_loses_its_article() {
        let f = fixture();
        let q = parse(&f, "هل تكثر الأماكن السياحية في الأردن ؟").unwrap();
        assert_eq!(q.head, "اماكن");
        assert_eq!(q.remaining, vec!["السياحية", "الاردن"]);
        let q = parse(&f, "هل الله رحيم ؟").unwrap();
        assert_eq!(q.head, "الله");
    }

    #[test]
    fn special_verb_rewrite() {
        let f = fixture();
        let q = parse(&f, "هل يوصف محمد بالجمال ؟").unwrap();
        let rewritten = preprocess_special_verb(q, &f.stemmer).unwrap();
        assert_eq!(rewritten.relation, "جمال");
        assert!(rewritten.remaining.is_empty());

        let rs = build_representations(&rewritten, None, &f.stemmer).unwrap();
        let hand = LogicalRep {
            kind: SentenceKind::Verbal,
            negated: false,
            head: "محمد".into(),
            relation_roots: BTreeSet::from(["جمال".to_string()]),
            remaining_roots: vec![],
            provenance: Provenance::Base,
        };
        assert_eq!(rs.reps, vec![hand]);
    }

    #[test]
    fn special_verb_untouched_cases() {
        let f = fixture();
        let q = parse(&f, "هل فتح محمود الباب ؟").unwrap();
        assert_eq!(preprocess_special_verb(q.clone(), &f.stemmer).unwrap(), q);
        let q = parse(&f, "هل يشتهر الاردن سياحة ؟").unwrap();
        assert_eq!(preprocess_special_verb(q.clone(), &f.stemmer).unwrap(), q);
    }

    #[test]
    fn representation_polarity_and_provenance() {
        let f = fixture();
        let q = parse(&f, "هل لم يفتح محمود الباب ؟").unwrap();
        let rs = build_representations(&q, Some(&f.thesaurus), &f.stemmer).unwrap();
        assert_eq!(rs.reps.len(), 2);
        assert_eq!(rs.reps[0].provenance, Provenance::Base);
        assert!(rs.reps[0].negated);
        assert_eq!(rs.reps[1].provenance, Provenance::Antonym);
        assert!(!rs.reps[1].negated);
        assert!(rs.reps[1].relation_roots.contains("اغلق"));
    }

    #[test]
    fn thesaurus_disabled_gives_base_only() {
        let f = fixture();
        let q = parse(&f, "هل محمد ولد جميل ؟").unwrap();
        let rs = build_representations(&q, None, &f.stemmer).unwrap();
        assert_eq!(rs.reps.len(), 1);
    }

    #[test]
    fn retrieval_terms_dedup_and_order() {
        let f = fixture();
        let q = parse(&f, "هل محمد ولد جميل ؟").unwrap();
        let rs = build_representations(&q, Some(&f.thesaurus), &f.stemmer).unwrap();
        assert_eq!(retrieval_terms(&rs), vec!["محمد", "جميل", "ولد"]);

        let q = parse(&f, "هل محمد جميل ؟").unwrap();
        let rs = build_representations(&q, Some(&f.thesaurus), &f.stemmer).unwrap();
        assert_eq!(retrieval_terms(&rs), vec!["محمد", "جميل"]);

        let q = parse(&f, "هل محمد ولد ولد جميل ؟").unwrap();
        let rs = build_representations(&q, None, &f.stemmer).unwrap();
        assert_eq!(rs.query_terms.len(), 4);
        assert_eq!(retrieval_terms(&rs), vec!["محمد", "جميل", "ولد"]);
    }

    #[test]
    fn display_form() {
        let f = fixture();
        let q = parse(&f, "هل محمد ولد جميل ؟").unwrap();
        let rs = build_representations(&q, Some(&f.thesaurus), &f.stemmer).unwrap();
        assert_eq!(rs.reps[1].to_string(), "~N(محمد, root{قبيح}, [ولد])");
    }
}
