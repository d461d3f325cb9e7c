//! `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths are
//! resolved against the directory holding the config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kolan_core::metrics::Scale;
use kolan_core::sentiment::{Weighting, DEFAULT_BATCH_SIZE};

use crate::error::CliError;

pub const DEFAULT_K: usize = 3;
pub const DEFAULT_SEED: u64 = 7;

const KEYS: &[&str] = &[
    "profiles",
    "corpora",
    "stopwords_id",
    "stopwords_en",
    "lemmas",
    "slang",
    "lexicon",
    "dictionary",
    "provider",
    "endpoint",
    "batch_size",
    "cache",
    "k",
    "seed",
    "scale",
    "weighting",
    "out",
    "formats",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    Dictionary,
    Http,
}

impl ProviderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProviderKind::Dictionary => "dictionary",
            ProviderKind::Http => "http",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

impl FromStr for Formats {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut f = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(format!("unknown format {other:?} (expected csv, json, svg)")),
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub profiles: Option<PathBuf>,
    pub corpora: Option<PathBuf>,
    pub stopwords_id: Option<PathBuf>,
    pub stopwords_en: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub slang: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub provider: ProviderKind,
    pub endpoint: Option<String>,
    pub batch_size: usize,
    pub cache: Option<PathBuf>,
    pub k: usize,
    pub seed: u64,
    pub scale: Scale,
    pub weighting: Weighting,
    pub out: PathBuf,
    pub formats: Formats,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scale: Option<Scale>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub unique: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        RunConfig::parse(&text, base).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, String> {
        let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {lineno}: expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(format!("line {lineno}: unknown key {key:?}"));
            }
            if values.insert(key, (lineno, value)).is_some() {
                return Err(format!("line {lineno}: duplicate key {key:?}"));
            }
        }

        let path = |key: &str| values.get(key).map(|(_, v)| base.join(v));
        fn parsed<T: FromStr>(
            values: &BTreeMap<&str, (usize, &str)>,
            key: &str,
        ) -> Result<Option<T>, String>
        where
            T::Err: std::fmt::Display,
        {
            values
                .get(key)
                .map(|(line, v)| v.parse::<T>().map_err(|e| format!("line {line}: {key}: {e}")))
                .transpose()
        }

        let provider = match values.get("provider").map(|(l, v)| (*l, *v)) {
            None | Some((_, "dictionary")) => ProviderKind::Dictionary,
            Some((_, "http")) => ProviderKind::Http,
            Some((l, other)) => return Err(format!("line {l}: provider must be dictionary or http, got {other:?}")),
        };
        let weighting = match values.get("weighting").map(|(l, v)| (*l, *v)) {
            None | Some((_, "occurrences")) => Weighting::Occurrences,
            Some((_, "unique")) => Weighting::Unique,
            Some((l, other)) => {
                return Err(format!("line {l}: weighting must be occurrences or unique, got {other:?}"))
            }
        };

        Ok(RunConfig {
            profiles: path("profiles"),
            corpora: path("corpora"),
            stopwords_id: path("stopwords_id"),
            stopwords_en: path("stopwords_en"),
            lemmas: path("lemmas"),
            slang: path("slang"),
            lexicon: path("lexicon"),
            dictionary: path("dictionary"),
            provider,
            endpoint: values.get("endpoint").map(|(_, v)| v.to_string()),
            batch_size: parsed(&values, "batch_size")?.unwrap_or(DEFAULT_BATCH_SIZE),
            cache: path("cache"),
            k: parsed(&values, "k")?.unwrap_or(DEFAULT_K),
            seed: parsed(&values, "seed")?.unwrap_or(DEFAULT_SEED),
            scale: parsed(&values, "scale")?.unwrap_or(Scale::Linear),
            weighting,
            out: path("out").unwrap_or_else(|| base.join("out")),
            formats: parsed(&values, "formats")?.unwrap_or_default(),
        })
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(scale) = o.scale {
            self.scale = scale;
        }
        if let Some(k) = o.k {
            self.k = k;
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if o.unique {
            self.weighting = Weighting::Unique;
        }
        self
    }

    pub fn require_profiles(&self) -> Result<&Path, CliError> {
        self.profiles
            .as_deref()
            .ok_or_else(|| CliError::Usage("config is missing `profiles`".into()))
    }

    /// Checks `k` and that every file the given sections read exists.
    pub fn validate(&self, metrics_or_pca: bool, sentiment: bool) -> Result<(), CliError> {
        if self.k == 0 {
            return Err(CliError::Usage("k must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(CliError::Usage("batch_size must be at least 1".into()));
        }
        let mut required: Vec<&Path> = Vec::new();
        if metrics_or_pca || sentiment {
            required.push(self.require_profiles()?);
        }
        if sentiment {
            let need = |key: &str, v: &Option<PathBuf>| -> Result<PathBuf, CliError> {
                v.clone()
                    .ok_or_else(|| CliError::Usage(format!("sentiment analysis needs `{key}` in the config")))
            };
            let corpora = need("corpora", &self.corpora)?;
            let lexicon = need("lexicon", &self.lexicon)?;
            for p in [corpora, lexicon] {
                check_exists(&p)?;
            }
            match self.provider {
                ProviderKind::Dictionary => check_exists(&need("dictionary", &self.dictionary)?)?,
                ProviderKind::Http => {
                    if self.endpoint.is_none() {
                        return Err(CliError::Usage("provider = http needs `endpoint`".into()));
                    }
                }
            }
            required.extend(
                [&self.stopwords_id, &self.stopwords_en, &self.lemmas, &self.slang]
                    .into_iter()
                    .flatten()
                    .map(PathBuf::as_path),
            );
        }
        required.into_iter().try_for_each(check_exists)
    }
}

fn check_exists(p: &Path) -> Result<(), CliError> {
    if p.is_file() {
        Ok(())
    } else {
        Err(CliError::io(p, "file not found"))
    }
}
