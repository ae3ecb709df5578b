//! Arabic text handling shared by every stage of the pipeline: Alef
//! normalization, tokenization, lexicon-driven filtering (stopwords,
//! negation particles, the definite article) and paragraph/sentence
//! segmentation.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::path::Path;

use crate::error::{Error, Result};

pub const BARE_ALEF: char = '\u{0627}';

/// أ إ آ
const ALEF_VARIANTS: [char; 3] = ['\u{0623}', '\u{0625}', '\u{0622}'];

const TATWEEL: char = '\u{0640}';

pub const DEFINITE_ARTICLE: &str = "ال";

/// Sentence terminators: full stop, Arabic question mark, exclamation mark,
/// Arabic semicolon.
pub const SENTENCE_TERMINATORS: [char; 4] = ['.', '\u{061F}', '!', '\u{061B}'];

/// Harakat, tanween, shadda, sukun and the superscript alef.
fn is_diacritic(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}')
}

/// Text whose Alef variants have been folded to bare Alef.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalizedText(String);

impl NormalizedText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for NormalizedText {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Folds أ إ آ to ا and drops tatweel and diacritics. Every other character
/// passes through untouched.
pub fn normalize(raw: &str) -> NormalizedText {
    let content = raw
        .chars()
        .filter(|&c| c != TATWEEL && !is_diacritic(c))
        .map(|c| if ALEF_VARIANTS.contains(&c) { BARE_ALEF } else { c })
        .collect();
    NormalizedText(content)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    /// Index in the sequence produced by [`tokenize`]; filtering keeps it.
    pub position: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, position: usize) -> Self {
        Token {
            surface: surface.into(),
            position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSeq(Vec<Token>);

impl TokenSeq {
    pub fn new(tokens: Vec<Token>) -> Self {
        TokenSeq(tokens)
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|t| t.surface.as_str())
    }

    pub fn into_vec(self) -> Vec<Token> {
        self.0
    }

    fn retain_where(self, mut keep: impl FnMut(&Token) -> bool) -> TokenSeq {
        TokenSeq(self.0.into_iter().filter(|t| keep(t)).collect())
    }
}

impl Deref for TokenSeq {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.0
    }
}

impl FromIterator<Token> for TokenSeq {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        TokenSeq(iter.into_iter().collect())
    }
}

/// Splits on anything that is not a letter or digit. Punctuation (including
/// `؟` and `?`) never reaches a token.
pub fn tokenize(text: &NormalizedText) -> TokenSeq {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(position, surface)| Token::new(surface, position))
        .collect()
}

/// The three word lists the pipeline consults. All entries are stored
/// normalized and the lists are pairwise disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicons {
    pub stopwords: BTreeSet<String>,
    pub negation_particles: BTreeSet<String>,
    /// Words whose leading ال belongs to the word itself.
    pub article_exceptions: BTreeSet<String>,
}

impl Lexicons {
    pub fn new<S, N, A>(stopwords: S, negation_particles: N, article_exceptions: A) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: AsRef<str>,
        N: IntoIterator,
        N::Item: AsRef<str>,
        A: IntoIterator,
        A::Item: AsRef<str>,
    {
        let lex = Lexicons {
            stopwords: fold_words(stopwords),
            negation_particles: fold_words(negation_particles),
            article_exceptions: fold_words(article_exceptions),
        };
        lex.check_disjoint()?;
        Ok(lex)
    }

    /// Builds lexicons from the text of three word-list files.
    pub fn from_word_lists(stopwords: &str, negation_particles: &str, article_exceptions: &str) -> Result<Self> {
        Lexicons::new(
            parse_word_list(stopwords),
            parse_word_list(negation_particles),
            parse_word_list(article_exceptions),
        )
    }

    pub fn load(stopwords: &Path, negation_particles: &Path, article_exceptions: &Path) -> Result<Self> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::io(p, e));
        Lexicons::from_word_lists(
            &read(stopwords)?,
            &read(negation_particles)?,
            &read(article_exceptions)?,
        )
    }

    fn check_disjoint(&self) -> Result<()> {
        let pairs = [
            (
                "stopword",
                &self.stopwords,
                "negation particle",
                &self.negation_particles,
            ),
            (
                "stopword",
                &self.stopwords,
                "article exception",
                &self.article_exceptions,
            ),
            (
                "negation particle",
                &self.negation_particles,
                "article exception",
                &self.article_exceptions,
            ),
        ];
        for (a_name, a, b_name, b) in pairs {
            if let Some(word) = a.intersection(b).next() {
                return Err(Error::Conflict(format!(
                    "{word:?} is listed both as a {a_name} and as a {b_name}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn is_negation(&self, word: &str) -> bool {
        self.negation_particles.contains(word)
    }

    /// True when `word` starts with a removable definite article.
    pub fn has_article(&self, word: &str) -> bool {
        word.starts_with(DEFINITE_ARTICLE) && word.chars().count() > 2 && !self.article_exceptions.contains(word)
    }
}

fn fold_words<I>(words: I) -> BTreeSet<String>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    words
        .into_iter()
        .map(|w| normalize(w.as_ref().trim()).into_string())
        .filter(|w| !w.is_empty())
        .collect()
}

/// One entry per line; blank lines and `#` comments are skipped.
pub fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(str::to_owned)
        .collect()
}

pub fn remove_stopwords(tokens: TokenSeq, lex: &Lexicons) -> TokenSeq {
    tokens.retain_where(|t| !lex.is_stopword(&t.surface))
}

/// Removes a leading ال unless the word is an article exception. A bare
/// `ال` is left alone so the result is never empty.
pub fn strip_article<'a>(word: &'a str, lex: &Lexicons) -> &'a str {
    if lex.has_article(word) {
        &word[DEFINITE_ARTICLE.len()..]
    } else {
        word
    }
}

/// Returns whether any negation particle occurs, and the tokens without them.
pub fn detect_negation(tokens: TokenSeq, lex: &Lexicons) -> (bool, TokenSeq) {
    let negated = tokens.iter().any(|t| lex.is_negation(&t.surface));
    (negated, tokens.retain_where(|t| !lex.is_negation(&t.surface)))
}

/// Normalized tokens with stopwords and negation particles removed.
pub fn content_tokens(text: &str, lex: &Lexicons) -> TokenSeq {
    let tokens = remove_stopwords(tokenize(&normalize(text)), lex);
    detect_negation(tokens, lex).1
}

/// Paragraphs are blocks separated by one or more blank lines.
pub fn split_paragraphs(document: &str) -> Vec<String> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in document.lines() {
        if line.trim().is_empty() {
            flush_paragraph(&mut current, &mut paragraphs);
        } else {
            current.push(line);
        }
    }
    flush_paragraph(&mut current, &mut paragraphs);
    paragraphs
}

fn flush_paragraph(lines: &mut Vec<&str>, out: &mut Vec<String>) {
    if lines.is_empty() {
        return;
    }
    let joined = lines.join("\n");
    let trimmed = joined.trim();
    if !trimmed.is_empty() {
        out.push(trimmed.to_owned());
    }
    lines.clear();
}

/// Splits at `.`, `؟`, `!` and `؛`. Terminators are not kept; trailing text
/// without a terminator becomes the last sentence.
pub fn split_sentences(paragraph: &str) -> Vec<String> {
    paragraph
        .split(|c| SENTENCE_TERMINATORS.contains(&c))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex() -> Lexicons {
        Lexicons::new(["في", "التي", "من"], ["لا", "لم", "لن", "ليس", "ما", "غير"], ["الله"]).unwrap()
    }

    fn seq(words: &[(&str, usize)]) -> TokenSeq {
        words.iter().map(|&(w, p)| Token::new(w, p)).collect()
    }

    #[test]
    fn normalize_folds_alef_variants() {
        assert_eq!(normalize("أحمد").as_str(), "احمد");
        assert_eq!(normalize("إلى الآن").as_str(), "الى الان");
        assert_eq!(normalize("محمد").as_str(), "محمد");
        assert_eq!(normalize("").as_str(), "");
    }

    #[test]
    fn normalize_drops_tatweel_and_diacritics() {
        assert_eq!(normalize("جمـــيل").as_str(), "جميل");
        assert_eq!(normalize("كَتَبَ").as_str(), "كتب");
    }

    #[test]
    fn tokenize_drops_punctuation() {
        let tokens = tokenize(&normalize("هل فتح محمود الباب ؟"));
        assert_eq!(tokens, seq(&[("هل", 0), ("فتح", 1), ("محمود", 2), ("الباب", 3)]));
        assert!(tokenize(&normalize("")).is_empty());
        assert_eq!(tokenize(&normalize("كتاب.")), seq(&[("كتاب", 0)]));
        assert_eq!(tokenize(&normalize("نعم؟لا")).len(), 2);
    }

    #[test]
    fn stopwords_removed_with_positions_kept() {
        let out = remove_stopwords(seq(&[("في", 0), ("الاردن", 1)]), &lex());
        assert_eq!(out, seq(&[("الاردن", 1)]));
        assert!(remove_stopwords(TokenSeq::default(), &lex()).is_empty());
        let plain = seq(&[("محمد", 0), ("جميل", 1)]);
        assert_eq!(remove_stopwords(plain.clone(), &lex()), plain);
    }

    #[test]
    fn article_stripping() {
        let lex = lex();
        assert_eq!(strip_article("الباب", &lex), "باب");
        assert_eq!(strip_article("الله", &lex), "الله");
        assert_eq!(strip_article("باب", &lex), "باب");
        assert_eq!(strip_article("ال", &lex), "ال");
    }

    #[test]
    fn negation_detection() {
        let lex = lex();
        let (neg, rest) = detect_negation(seq(&[("لم", 0), ("يفتح", 1), ("الباب", 2)]), &lex);
        assert!(neg);
        assert_eq!(rest, seq(&[("يفتح", 1), ("الباب", 2)]));

        let plain = seq(&[("فتح", 0), ("الباب", 1)]);
        assert_eq!(detect_negation(plain.clone(), &lex), (false, plain));
        assert_eq!(detect_negation(TokenSeq::default(), &lex), (false, TokenSeq::default()));
    }

    #[test]
    fn lexicons_must_be_disjoint() {
        let err = Lexicons::new(["لا"], ["لا"], Vec::<String>::new()).unwrap_err();
        assert!(matches!(err, Error::Conflict(_)));
    }

    #[test]
    fn lexicon_entries_are_normalized() {
        let lex = Lexicons::new(["إلى"], Vec::<&str>::new(), Vec::<&str>::new()).unwrap();
        assert!(lex.is_stopword("الى"));
    }

    #[test]
    fn word_list_format() {
        let words = parse_word_list("# header\nفي\n\n  من  # preposition\n");
        assert_eq!(words, vec!["في", "من"]);
    }

    #[test]
    fn paragraphs() {
        assert_eq!(split_paragraphs("A\n\nB"), vec!["A", "B"]);
        assert_eq!(split_paragraphs("A\nB"), vec!["A\nB"]);
        assert_eq!(split_paragraphs("A\n\n\n\nB"), vec!["A", "B"]);
        assert_eq!(split_paragraphs("A\n  \t\nB\r\n"), vec!["A", "B"]);
        assert!(split_paragraphs("\n\n").is_empty());
    }

    #[test]
    fn sentences() {
        assert_eq!(split_sentences("فتح محمود الباب. اغلق النافذة").len(), 2);
        assert_eq!(split_sentences("جملة واحدة"), vec!["جملة واحدة"]);
        assert!(split_sentences("").is_empty());
        assert_eq!(
            split_sentences("نعم؟ لا! ربما؛ اخيرا."),
            vec!["نعم", "لا", "ربما", "اخيرا"]
        );
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in "\\PC*") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once.clone());
            prop_assert!(!once.chars().any(|c| ALEF_VARIANTS.contains(&c)));
        }

        #[test]
        fn normalize_is_idempotent_on_arabic(s in "[\\u0600-\\u06FF ]{0,40}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once);
        }

        #[test]
        fn tokens_carry_no_separators(s in "[\\u0620-\\u064A\\u0622\\u0623\\u0625 .?\\u061F\\n\\t]{0,60}") {
            for token in tokenize(&normalize(&s)).iter() {
                prop_assert!(!token.surface.is_empty());
                prop_assert!(!token.surface.contains(['؟', '?', '.']), "punctuation left in {:?}", token.surface);
                prop_assert!(!token.surface.chars().any(char::is_whitespace));
            }
        }

        #[test]
        fn filters_preserve_order(words in proptest::collection::vec(
            prop_oneof![Just("في"), Just("لم"), Just("محمد"), Just("كتاب"), Just("لا"), Just("من")], 0..20))
        {
            let tokens: TokenSeq = words.iter().enumerate().map(|(i, w)| Token::new(*w, i)).collect();
            let lex = lex();
            let (_, filtered) = detect_negation(remove_stopwords(tokens, &lex), &lex);
            prop_assert!(filtered.windows(2).all(|w| w[0].position < w[1].position));
        }

        #[test]
        fn paragraph_round_trip(paras in proptest::collection::vec("[a-z\\u0627-\\u064A]{1,8}( [a-z]{1,5}){0,3}(\\n[a-z]{1,4}){0,2}", 0..6)) {
            let doc = paras.join("\n\n\n");
            let first = split_paragraphs(&doc);
            let again = split_paragraphs(&first.join("\n\n"));
            prop_assert_eq!(first, again);
        }
    }
}
