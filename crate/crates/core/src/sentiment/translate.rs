use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::SentimentError;

pub const SOURCE_LANG: &str = "id";
pub const TARGET_LANG: &str = "en";
pub const DEFAULT_BATCH_SIZE: usize = 128;

/// Translates batches of single words.
///
/// Implementations must return exactly one lowercase translation per input,
/// in input order, and be deterministic for a given provider version.
pub trait TranslationProvider: Send + Sync {
    /// Identifies the provider and its version.
    fn name(&self) -> String;

    fn batch_size(&self) -> usize {
        DEFAULT_BATCH_SIZE
    }

    fn translate(&self, words: &[String], source: &str, target: &str) -> Result<Vec<String>, SentimentError>;
}

/// Offline provider backed by a bilingual `id_word\ten_word` table.
/// Words missing from the table pass through unchanged.
#[derive(Debug, Clone, Default)]
pub struct DictionaryProvider {
    entries: HashMap<String, String>,
    origin: String,
}

impl DictionaryProvider {
    pub fn parse(text: &str, origin: &str) -> Result<Self, SentimentError> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((id, en)) = line.split_once('\t') else {
                return Err(SentimentError::Parse {
                    origin: origin.to_string(),
                    line: i + 1,
                    cause: "expected id_word<TAB>en_word".into(),
                });
            };
            let (id, en) = (id.trim().to_lowercase(), en.trim().to_lowercase());
            if id.is_empty() || en.is_empty() || en.contains('\t') {
                return Err(SentimentError::Parse {
                    origin: origin.to_string(),
                    line: i + 1,
                    cause: "empty or malformed field".into(),
                });
            }
            entries.insert(id, en);
        }
        Ok(DictionaryProvider {
            entries,
            origin: origin.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, SentimentError> {
        let text = fs::read_to_string(path).map_err(|source| SentimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        DictionaryProvider::parse(&text, &path.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl TranslationProvider for DictionaryProvider {
    fn name(&self) -> String {
        format!("dictionary:{}", self.origin)
    }

    fn translate(&self, words: &[String], _source: &str, _target: &str) -> Result<Vec<String>, SentimentError> {
        Ok(words
            .iter()
            .map(|w| self.entries.get(w).cloned().unwrap_or_else(|| w.to_lowercase()))
            .collect())
    }
}

/// id → en translations, optionally persisted as a JSON object.
///
/// Saving writes a temporary sibling file and renames it over the target.
/// One writer per cache file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TranslationCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, String>,
    dirty: bool,
}

impl TranslationCache {
    pub fn in_memory() -> Self {
        TranslationCache::default()
    }

    /// Opens a cache file; a missing file starts an empty cache.
    pub fn open(path: &Path) -> Result<Self, SentimentError> {
        let entries = match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| SentimentError::CacheIo {
                path: path.to_path_buf(),
                cause: e.to_string(),
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => {
                return Err(SentimentError::CacheIo {
                    path: path.to_path_buf(),
                    cause: e.to_string(),
                })
            }
        };
        Ok(TranslationCache {
            path: Some(path.to_path_buf()),
            entries,
            dirty: false,
        })
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn insert(&mut self, word: String, translated: String) {
        if self.entries.get(&word) != Some(&translated) {
            self.entries.insert(word, translated);
            self.dirty = true;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes pending changes, if any, to the backing file.
    pub fn save(&mut self) -> Result<(), SentimentError> {
        let Some(path) = self.path.clone() else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let io_err = |e: std::io::Error| SentimentError::CacheIo {
            path: path.clone(),
            cause: e.to_string(),
        };
        let json = serde_json::to_string_pretty(&self.entries).expect("string map serializes");
        let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        {
            let mut f = fs::File::create(&tmp).map_err(io_err)?;
            f.write_all(json.as_bytes()).map_err(io_err)?;
            f.write_all(b"\n").map_err(io_err)?;
            f.sync_all().map_err(io_err)?;
        }
        fs::rename(&tmp, &path).map_err(io_err)?;
        self.dirty = false;
        Ok(())
    }
}

/// Translates `words` (duplicates allowed), consulting and updating `cache`.
///
/// Each distinct uncached word is sent to the provider exactly once, in
/// batches of `provider.batch_size()`. The cache is saved afterwards.
pub fn translate_words(
    words: &[String],
    provider: &dyn TranslationProvider,
    cache: &mut TranslationCache,
) -> Result<Vec<(String, String)>, SentimentError> {
    let missing: Vec<String> = words
        .iter()
        .filter(|w| cache.get(w).is_none())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    for chunk in missing.chunks(provider.batch_size().max(1)) {
        let out = provider.translate(chunk, SOURCE_LANG, TARGET_LANG)?;
        if out.len() != chunk.len() {
            return Err(SentimentError::ProviderUnavailable(format!(
                "{} returned {} translations for {} words",
                provider.name(),
                out.len(),
                chunk.len()
            )));
        }
        for (word, translated) in chunk.iter().zip(out) {
            cache.insert(word.clone(), translated.trim().to_lowercase());
        }
    }
    cache.save()?;

    Ok(words
        .iter()
        .map(|w| {
            let t = cache.get(w).expect("translated above").to_string();
            (w.clone(), t)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct Counting<P> {
        inner: P,
        calls: AtomicUsize,
        batch: usize,
    }

    impl<P: TranslationProvider> TranslationProvider for Counting<P> {
        fn name(&self) -> String {
            "counting".into()
        }
        fn batch_size(&self) -> usize {
            self.batch
        }
        fn translate(&self, words: &[String], s: &str, t: &str) -> Result<Vec<String>, SentimentError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.inner.translate(words, s, t)
        }
    }

    fn dict() -> DictionaryProvider {
        DictionaryProvider::parse("akal\tsense\nbank\tbank\nayo\tcome on\n", "test").unwrap()
    }

    fn words(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dictionary_translation_and_passthrough() {
        let mut cache = TranslationCache::in_memory();
        let out = translate_words(&words(&["akal", "bank", "bca", "ayo"]), &dict(), &mut cache).unwrap();
        assert_eq!(out[0].1, "sense");
        assert_eq!(out[1].1, "bank");
        assert_eq!(out[2].1, "bca");
        assert_eq!(out[3].1, "come on");
    }

    #[test]
    fn batches_unique_words_once() {
        let p = Counting {
            inner: dict(),
            calls: AtomicUsize::new(0),
            batch: 2,
        };
        let mut cache = TranslationCache::in_memory();
        let input = words(&["akal", "akal", "bank", "ayo", "bank"]);
        let out = translate_words(&input, &p, &mut cache).unwrap();
        assert_eq!(out.len(), 5);
        // three distinct words in batches of two
        assert_eq!(p.calls.load(Ordering::SeqCst), 2);

        let again = translate_words(&input, &p, &mut cache).unwrap();
        assert_eq!(p.calls.load(Ordering::SeqCst), 2);
        assert_eq!(again, out);
    }

    #[test]
    fn cache_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        let mut cache = TranslationCache::open(&path).unwrap();
        assert!(cache.is_empty());
        translate_words(&words(&["akal"]), &dict(), &mut cache).unwrap();
        let reopened = TranslationCache::open(&path).unwrap();
        assert_eq!(reopened.get("akal"), Some("sense"));
        assert!(!dir.path().join("cache.json.tmp").exists());
    }

    #[test]
    fn corrupt_cache_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        fs::write(&path, "not json").unwrap();
        assert!(matches!(
            TranslationCache::open(&path),
            Err(SentimentError::CacheIo { .. })
        ));
    }

    struct Short;
    impl TranslationProvider for Short {
        fn name(&self) -> String {
            "short".into()
        }
        fn translate(&self, _: &[String], _: &str, _: &str) -> Result<Vec<String>, SentimentError> {
            Ok(vec![])
        }
    }

    #[test]
    fn length_mismatch_is_provider_error() {
        let mut cache = TranslationCache::in_memory();
        assert!(matches!(
            translate_words(&words(&["x"]), &Short, &mut cache),
            Err(SentimentError::ProviderUnavailable(_))
        ));
    }
}
