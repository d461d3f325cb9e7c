//! Comment preprocessing: clean → tokenize → stopwords → lemmatize, then
//! pooled word frequencies.

mod resources;

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::model::CommentCorpus;

pub use resources::{LemmaLexicon, SlangMap, StopList};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("stopword list not readable: {}", .0.display())]
    MissingStoplist(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}, line {line}: {cause}")]
    InvalidEntry {
        origin: String,
        line: usize,
        cause: String,
    },
    #[error("slang entry {word:?} -> {lemma:?} maps onto another slang key")]
    SlangCycle { word: String, lemma: String },
    #[error("document {kol_id:?} is at stage {found}, expected {expected}")]
    Stage {
        kol_id: String,
        expected: Stage,
        found: Stage,
    },
    #[error("{0:?} is not a lowercase letters-only token")]
    InvalidToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Raw,
    Cleaned,
    Tokenized,
    Stopped,
    Lemmatized,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Lowercases and keeps only letters, with single spaces between words.
pub fn clean(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut gap = false;
    for c in raw.chars().flat_map(char::to_lowercase) {
        if is_token_char(c) {
            if gap && !out.is_empty() {
                out.push(' ');
            }
            gap = false;
            out.push(c);
        } else if c.is_whitespace() {
            gap = true;
        }
    }
    out
}

fn is_token_char(c: char) -> bool {
    c.is_alphabetic() && !c.is_uppercase()
}

pub fn tokenize(cleaned: &str) -> Vec<String> {
    cleaned
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn remove_stopwords(tokens: &[String], stop_id: &StopList, stop_en: &StopList) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stop_id.contains(t) && !stop_en.contains(t))
        .cloned()
        .collect()
}

/// Slang map first, then the lemma table, then the token itself.
/// The result is lowercase letters only (possibly empty for a junk token).
pub fn lemmatize(token: &str, lemmas: &LemmaLexicon, slang: &SlangMap) -> String {
    let lower = token.to_lowercase();
    let standard = slang.get(&lower).unwrap_or(&lower);
    let lemma = lemmas.get(standard).unwrap_or(standard);
    lemma
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|&c| is_token_char(c))
        .collect()
}

/// One KOL's comments at a given pipeline stage.
///
/// Before tokenization `tokens` holds whole comments; from `Tokenized` on it
/// holds words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub kol_id: String,
    stage: Stage,
    tokens: Vec<String>,
}

impl TokenDoc {
    pub fn raw(kol_id: impl Into<String>, comments: Vec<String>) -> Self {
        TokenDoc {
            kol_id: kol_id.into(),
            stage: Stage::Raw,
            tokens: comments,
        }
    }

    pub fn from_corpus(corpus: &CommentCorpus) -> Self {
        TokenDoc::raw(corpus.kol_id.clone(), corpus.comments.clone())
    }

    /// Wraps tokens that are already lemmatized (e.g. from an external tool).
    pub fn from_lemmas(kol_id: impl Into<String>, tokens: Vec<String>) -> Result<Self, TextError> {
        if let Some(bad) = tokens
            .iter()
            .find(|t| t.is_empty() || !t.chars().all(is_token_char))
        {
            return Err(TextError::InvalidToken(bad.clone()));
        }
        Ok(TokenDoc {
            kol_id: kol_id.into(),
            stage: Stage::Lemmatized,
            tokens,
        })
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    fn expect(&self, expected: Stage) -> Result<(), TextError> {
        if self.stage == expected {
            Ok(())
        } else {
            Err(TextError::Stage {
                kol_id: self.kol_id.clone(),
                expected,
                found: self.stage,
            })
        }
    }

    fn advance(self, stage: Stage, tokens: Vec<String>) -> TokenDoc {
        TokenDoc {
            kol_id: self.kol_id,
            stage,
            tokens,
        }
    }

    pub fn cleaned(self) -> Result<TokenDoc, TextError> {
        self.expect(Stage::Raw)?;
        let cleaned = self
            .tokens
            .iter()
            .map(|c| clean(c))
            .filter(|c| !c.is_empty())
            .collect();
        Ok(self.advance(Stage::Cleaned, cleaned))
    }

    pub fn tokenized(self) -> Result<TokenDoc, TextError> {
        self.expect(Stage::Cleaned)?;
        let tokens = self.tokens.iter().flat_map(|c| tokenize(c)).collect();
        Ok(self.advance(Stage::Tokenized, tokens))
    }

    pub fn without_stopwords(self, stop_id: &StopList, stop_en: &StopList) -> Result<TokenDoc, TextError> {
        self.expect(Stage::Tokenized)?;
        let tokens = remove_stopwords(&self.tokens, stop_id, stop_en);
        Ok(self.advance(Stage::Stopped, tokens))
    }

    pub fn lemmatized(self, lemmas: &LemmaLexicon, slang: &SlangMap) -> Result<TokenDoc, TextError> {
        self.expect(Stage::Stopped)?;
        let tokens = self
            .tokens
            .iter()
            .map(|t| lemmatize(t, lemmas, slang))
            .filter(|t| !t.is_empty())
            .collect();
        Ok(self.advance(Stage::Lemmatized, tokens))
    }
}

/// The resources for a full preprocessing run.
#[derive(Debug, Clone)]
pub struct TextPipeline {
    pub stop_id: StopList,
    pub stop_en: StopList,
    pub lemmas: LemmaLexicon,
    pub slang: SlangMap,
}

impl TextPipeline {
    /// Pipeline backed by the word lists shipped with the crate.
    pub fn bundled() -> Self {
        TextPipeline {
            stop_id: StopList::bundled_indonesian(),
            stop_en: StopList::bundled_english(),
            lemmas: LemmaLexicon::bundled(),
            slang: SlangMap::bundled(),
        }
    }

    pub fn process(&self, doc: TokenDoc) -> Result<TokenDoc, TextError> {
        doc.cleaned()?
            .tokenized()?
            .without_stopwords(&self.stop_id, &self.stop_en)?
            .lemmatized(&self.lemmas, &self.slang)
    }

    /// Processes each corpus independently; output order follows input order.
    pub fn process_corpora(&self, corpora: &[CommentCorpus], exec: Execution) -> Vec<TokenDoc> {
        exec.map(corpora, |c| {
            self.process(TokenDoc::from_corpus(c))
                .expect("a raw document passes through every stage")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub text: String,
    pub n: u64,
}

/// Word counts, most frequent first, ties alphabetical.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
}

impl FrequencyTable {
    pub fn from_counts(counts: HashMap<String, u64>) -> Self {
        let mut rows: Vec<FrequencyRow> = counts
            .into_iter()
            .map(|(text, n)| FrequencyRow { text, n })
            .collect();
        rows.sort_by(|a, b| b.n.cmp(&a.n).then_with(|| a.text.cmp(&b.text)));
        FrequencyTable { rows }
    }

    pub fn top(&self, k: usize) -> &[FrequencyRow] {
        &self.rows[..k.min(self.rows.len())]
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("text,n\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}\n", r.text, r.n));
        }
        out
    }
}

/// Pools token counts over lemmatized documents.
pub fn word_frequencies(docs: &[TokenDoc]) -> Result<FrequencyTable, TextError> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for doc in docs {
        doc.expect(Stage::Lemmatized)?;
        for t in &doc.tokens {
            *counts.entry(t.clone()).or_default() += 1;
        }
    }
    Ok(FrequencyTable::from_counts(counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn clean_examples() {
        assert_eq!(clean("SBR011 mantap!!! 💰"), "sbr mantap");
        assert_eq!(clean(""), "");
        assert_eq!(clean("Investasi 5 juta, ayo."), "investasi juta ayo");
        assert_eq!(clean("  Café\tdéjà\n\nvu "), "café déjà vu");
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("investasi juta ayo"), strings(&["investasi", "juta", "ayo"]));
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("a a a"), strings(&["a", "a", "a"]));
    }

    #[test]
    fn stopword_examples() {
        let id = StopList::bundled_indonesian();
        let en = StopList::bundled_english();
        assert_eq!(remove_stopwords(&strings(&["yang", "investasi"]), &id, &en), strings(&["investasi"]));
        assert!(remove_stopwords(&[], &id, &en).is_empty());
        let plain = strings(&["investasi", "uang"]);
        assert_eq!(remove_stopwords(&plain, &id, &en), plain);
        assert_eq!(remove_stopwords(&strings(&["the", "money"]), &id, &en), strings(&["money"]));
    }

    #[test]
    fn lemmatize_examples() {
        let lemmas = LemmaLexicon::bundled();
        let slang = SlangMap::bundled();
        assert_eq!(lemmatize("nyidam", &lemmas, &slang), "mengidam");
        assert_eq!(lemmatize("ngelamar", &lemmas, &slang), "melamar");
        assert_eq!(lemmatize("zzz", &lemmas, &slang), "zzz");
        assert_eq!(lemmatize("Berinvestasi", &lemmas, &slang), "investasi");
        // slang rewrite feeds the lemma table
        assert_eq!(lemmatize("duwit", &lemmas, &slang), "duit");
        assert_eq!(lemmatize("abc1", &lemmas, &slang), "abc");
    }

    #[test]
    fn frequency_examples() {
        let doc = TokenDoc::from_lemmas("k", strings(&["a", "b", "a"])).unwrap();
        let t = word_frequencies(&[doc]).unwrap();
        assert_eq!(
            t.rows,
            vec![
                FrequencyRow { text: "a".into(), n: 2 },
                FrequencyRow { text: "b".into(), n: 1 }
            ]
        );
        assert!(word_frequencies(&[]).unwrap().is_empty());
        assert_eq!(t.to_csv(), "text,n\na,2\nb,1\n");
        assert_eq!(t.top(1).len(), 1);
        assert_eq!(t.top(10).len(), 2);
    }

    #[test]
    fn stage_errors() {
        let raw = TokenDoc::raw("k", strings(&["Halo"]));
        assert!(matches!(
            word_frequencies(std::slice::from_ref(&raw)),
            Err(TextError::Stage { expected: Stage::Lemmatized, found: Stage::Raw, .. })
        ));
        assert!(matches!(raw.tokenized(), Err(TextError::Stage { .. })));
        assert!(TokenDoc::from_lemmas("k", strings(&["Bad"])).is_err());
    }

    #[test]
    fn full_pipeline() {
        let p = TextPipeline::bundled();
        let doc = p
            .process(TokenDoc::raw("k", strings(&["Aku nyidam investasi 5 juta, aman!!", "bgt"])))
            .unwrap();
        assert_eq!(doc.stage(), Stage::Lemmatized);
        assert_eq!(doc.tokens(), strings(&["mengidam", "investasi", "juta", "aman", "banget"]).as_slice());
    }
}
