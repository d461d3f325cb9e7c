//! Emotion scoring of lemmatized comment words.
//!
//! Indonesian lemmas are translated to English through a
//! [`TranslationProvider`], looked up in a ten-category word/emotion
//! association lexicon, and summed into [`CategoryTotals`].

mod http;
mod translate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::textprep::FrequencyTable;

pub use http::{HttpConfig, HttpProvider, API_KEY_ENV};
pub use translate::{
    translate_words, DictionaryProvider, TranslationCache, TranslationProvider, DEFAULT_BATCH_SIZE,
    SOURCE_LANG, TARGET_LANG,
};

#[derive(Debug, Error)]
pub enum SentimentError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}, line {line}: {cause}")]
    Parse {
        origin: String,
        line: usize,
        cause: String,
    },
    #[error("unknown emotion category {0:?}")]
    BadCategory(String),
    #[error("translation provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error("translation cache {}: {cause}", path.display())]
    CacheIo { path: PathBuf, cause: String },
}

/// The ten association categories, in alphabetical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Negative,
    Positive,
    Sadness,
    Surprise,
    Trust,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Anger,
        Category::Anticipation,
        Category::Disgust,
        Category::Fear,
        Category::Joy,
        Category::Negative,
        Category::Positive,
        Category::Sadness,
        Category::Surprise,
        Category::Trust,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Anger => "anger",
            Category::Anticipation => "anticipation",
            Category::Disgust => "disgust",
            Category::Fear => "fear",
            Category::Joy => "joy",
            Category::Negative => "negative",
            Category::Positive => "positive",
            Category::Sadness => "sadness",
            Category::Surprise => "surprise",
            Category::Trust => "trust",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = SentimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| SentimentError::BadCategory(s.to_string()))
    }
}

/// 0/1 indicator per category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct EmotionVector(u16);

impl EmotionVector {
    pub const ZERO: EmotionVector = EmotionVector(0);

    pub fn from_categories(cats: &[Category]) -> Self {
        let mut v = EmotionVector::ZERO;
        for &c in cats {
            v.set(c);
        }
        v
    }

    pub fn get(self, c: Category) -> u8 {
        ((self.0 >> c.index()) & 1) as u8
    }

    pub fn set(&mut self, c: Category) {
        self.0 |= 1 << c.index();
    }

    pub fn union(self, other: EmotionVector) -> EmotionVector {
        EmotionVector(self.0 | other.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Number of categories set (at most 10).
    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn categories(self) -> impl Iterator<Item = Category> {
        Category::ALL.into_iter().filter(move |&c| self.get(c) == 1)
    }

    pub fn to_array(self) -> [u8; 10] {
        Category::ALL.map(|c| self.get(c))
    }
}

impl Serialize for EmotionVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(10))?;
        for c in Category::ALL {
            map.serialize_entry(c.as_str(), &self.get(c))?;
        }
        map.end()
    }
}

/// English word → emotion indicator vector.
///
/// Words whose association lines are all `0` are not stored, so presence in
/// the map is equivalent to having at least one category set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmotionLexicon {
    entries: HashMap<String, EmotionVector>,
}

impl EmotionLexicon {
    /// Parses `word\tcategory\t{0|1}` lines. Repeated lines are harmless.
    pub fn parse(text: &str, origin: &str) -> Result<Self, SentimentError> {
        let mut entries: HashMap<String, EmotionVector> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |cause: &str| SentimentError::Parse {
                origin: origin.to_string(),
                line: i + 1,
                cause: cause.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [word, category, flag] = fields[..] else {
                return Err(bad("expected word<TAB>category<TAB>0|1"));
            };
            let word = word.trim().to_lowercase();
            if word.is_empty() {
                return Err(bad("empty word"));
            }
            let category: Category = category.trim().parse()?;
            match flag.trim() {
                "1" => entries.entry(word).or_default().set(category),
                "0" => {}
                _ => return Err(bad("association flag must be 0 or 1")),
            }
        }
        Ok(EmotionLexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self, SentimentError> {
        let text = fs::read_to_string(path).map_err(|source| SentimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        EmotionLexicon::parse(&text, &path.display().to_string())
    }

    pub fn get(&self, word: &str) -> Option<EmotionVector> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_lexicon(path: &Path) -> Result<EmotionLexicon, SentimentError> {
    EmotionLexicon::load(path)
}

/// Lexicon lookup. A multi-word translation missing from the lexicon is
/// scored as the union of its words' vectors.
pub fn score_word(translated: &str, lexicon: &EmotionLexicon) -> EmotionVector {
    let key = translated.trim().to_lowercase();
    if let Some(v) = lexicon.get(&key) {
        return v;
    }
    if key.contains(char::is_whitespace) {
        return key
            .split_whitespace()
            .filter_map(|w| lexicon.get(w))
            .fold(EmotionVector::ZERO, EmotionVector::union);
    }
    EmotionVector::ZERO
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredWord {
    /// Indonesian lemma.
    pub text: String,
    pub translated: String,
    pub vector: EmotionVector,
    pub occurrences: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Each word counts as often as it occurs.
    #[default]
    Occurrences,
    /// Each distinct word counts once.
    Unique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryTotals {
    pub totals: BTreeMap<Category, u64>,
    /// Categories by total descending, ties alphabetical.
    pub dominant: Vec<Category>,
}

impl CategoryTotals {
    pub fn get(&self, c: Category) -> u64 {
        self.totals.get(&c).copied().unwrap_or(0)
    }

    fn from_totals(totals: BTreeMap<Category, u64>) -> Self {
        let mut dominant: Vec<Category> = Category::ALL.to_vec();
        dominant.sort_by(|a, b| totals[b].cmp(&totals[a]).then(a.cmp(b)));
        CategoryTotals { totals, dominant }
    }

    /// Componentwise sum.
    pub fn add(&self, other: &CategoryTotals) -> CategoryTotals {
        let totals = Category::ALL
            .into_iter()
            .map(|c| (c, self.get(c) + other.get(c)))
            .collect();
        CategoryTotals::from_totals(totals)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("category,total\n");
        for c in &self.dominant {
            out.push_str(&format!("{},{}\n", c, self.totals[c]));
        }
        out
    }
}

pub fn aggregate(scored: &[ScoredWord], weighting: Weighting) -> CategoryTotals {
    let mut totals: BTreeMap<Category, u64> = Category::ALL.into_iter().map(|c| (c, 0)).collect();
    for w in scored {
        let weight = match weighting {
            Weighting::Occurrences => w.occurrences,
            Weighting::Unique => 1,
        };
        for c in w.vector.categories() {
            *totals.get_mut(&c).expect("all categories present") += weight;
        }
    }
    CategoryTotals::from_totals(totals)
}

/// Everything the scoring stage produces for one corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentOutcome {
    /// Sorted by Indonesian lemma.
    pub scored: Vec<ScoredWord>,
    pub totals: CategoryTotals,
    /// Lemmas whose translation matched no lexicon entry.
    pub unscored: Vec<String>,
}

/// Translates and scores every word in `frequencies`.
///
/// Translation happens in full before any scoring, so a provider failure
/// never yields partial totals.
pub fn score_frequencies(
    frequencies: &FrequencyTable,
    provider: &dyn TranslationProvider,
    cache: &mut TranslationCache,
    lexicon: &EmotionLexicon,
    weighting: Weighting,
) -> Result<SentimentOutcome, SentimentError> {
    let mut rows: Vec<_> = frequencies.rows.iter().collect();
    rows.sort_by(|a, b| a.text.cmp(&b.text));
    let words: Vec<String> = rows.iter().map(|r| r.text.clone()).collect();
    let translations = translate_words(&words, provider, cache)?;

    let scored: Vec<ScoredWord> = rows
        .iter()
        .zip(translations)
        .map(|(row, (text, translated))| ScoredWord {
            vector: score_word(&translated, lexicon),
            text,
            translated,
            occurrences: row.n,
        })
        .collect();
    let unscored = scored
        .iter()
        .filter(|w| w.vector.is_zero())
        .map(|w| w.text.clone())
        .collect();
    Ok(SentimentOutcome {
        totals: aggregate(&scored, weighting),
        scored,
        unscored,
    })
}

/// Per-word table: `text,translated,<ten categories>`.
pub fn scores_csv(scored: &[ScoredWord]) -> String {
    let mut out = String::from("text,translated");
    for c in Category::ALL {
        out.push(',');
        out.push_str(c.as_str());
    }
    out.push('\n');
    for w in scored {
        out.push_str(&crate::metrics::csv_field(&w.text));
        out.push(',');
        out.push_str(&crate::metrics::csv_field(&w.translated));
        for bit in w.vector.to_array() {
            out.push(',');
            out.push_str(if bit == 1 { "1" } else { "0" });
        }
        out.push('\n');
    }
    out
}
