//! Word lists and lookup tables used by the text pipeline.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use super::TextError;

const BUNDLED_STOP_ID: &str = include_str!("../../data/stopwords.id.txt");
const BUNDLED_STOP_EN: &str = include_str!("../../data/stopwords.en.txt");
const BUNDLED_LEMMAS: &str = include_str!("../../data/lemmas.id.tsv");
const BUNDLED_SLANG: &str = include_str!("../../data/slang.tsv");

/// A set of lowercase stopwords, one per line in the source file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StopList(HashSet<String>);

impl StopList {
    pub fn parse(text: &str) -> Self {
        StopList(
            text.lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect(),
        )
    }

    pub fn load(path: &Path) -> Result<Self, TextError> {
        fs::read_to_string(path)
            .map(|t| StopList::parse(&t))
            .map_err(|_| TextError::MissingStoplist(path.to_path_buf()))
    }

    pub fn bundled_indonesian() -> Self {
        StopList::parse(BUNDLED_STOP_ID)
    }

    pub fn bundled_english() -> Self {
        StopList::parse(BUNDLED_STOP_EN)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for StopList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        StopList(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

/// word → lemma dictionary (TSV `word\tlemma`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LemmaLexicon(HashMap<String, String>);

impl LemmaLexicon {
    pub fn parse(text: &str, origin: &str) -> Result<Self, TextError> {
        Ok(LemmaLexicon(parse_pairs(text, origin)?.into_iter().collect()))
    }

    pub fn load(path: &Path) -> Result<Self, TextError> {
        LemmaLexicon::parse(&read(path)?, &path.display().to_string())
    }

    pub fn bundled() -> Self {
        LemmaLexicon::parse(BUNDLED_LEMMAS, "bundled lemmas.id.tsv").expect("bundled lemma table is valid")
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.0.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Non-standard (slang) token → standard form. No value is also a key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SlangMap(HashMap<String, String>);

impl SlangMap {
    pub fn new(entries: impl IntoIterator<Item = (String, String)>) -> Result<Self, TextError> {
        let map: HashMap<String, String> = entries.into_iter().collect();
        for (word, lemma) in &map {
            for s in [word, lemma] {
                if !is_lower_word(s) {
                    return Err(TextError::InvalidEntry {
                        origin: "slang map".into(),
                        line: 0,
                        cause: format!("{s:?} is not a lowercase word"),
                    });
                }
            }
            if map.contains_key(lemma) {
                return Err(TextError::SlangCycle {
                    word: word.clone(),
                    lemma: lemma.clone(),
                });
            }
        }
        Ok(SlangMap(map))
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, TextError> {
        SlangMap::new(parse_pairs(text, origin)?)
    }

    pub fn load(path: &Path) -> Result<Self, TextError> {
        SlangMap::parse(&read(path)?, &path.display().to_string())
    }

    pub fn bundled() -> Self {
        SlangMap::parse(BUNDLED_SLANG, "bundled slang.tsv").expect("bundled slang map is valid")
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.0.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn read(path: &Path) -> Result<String, TextError> {
    fs::read_to_string(path).map_err(|source| TextError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn is_lower_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphabetic() && !c.is_uppercase())
}

/// Parses `key\tvalue` lines; blank lines and `#` comments are skipped.
fn parse_pairs(text: &str, origin: &str) -> Result<Vec<(String, String)>, TextError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |cause: String| TextError::InvalidEntry {
            origin: origin.to_string(),
            line: i + 1,
            cause,
        };
        let mut parts = line.split('\t');
        let (Some(key), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected exactly two tab-separated fields".into()));
        };
        let (key, value) = (key.trim(), value.trim());
        if !is_lower_word(key) || !is_lower_word(value) {
            return Err(bad(format!("{key:?} -> {value:?} must be lowercase letters only")));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}
