//! Influencer profiles, comment corpora and their file formats.
//!
//! Profiles come from a CSV file with a fixed header ([`PROFILE_HEADER`]),
//! comment corpora from a JSON array. Loading validates every invariant and
//! reports the offending row (CSV) or line (JSON).

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact header line of the profiles CSV.
pub const PROFILE_HEADER: [&str; 12] = [
    "id",
    "name",
    "kol_type",
    "platform",
    "follower_tier",
    "follower_count",
    "post_count",
    "avg_likes_per_post",
    "theme",
    "audience",
    "campaign_likes",
    "campaign_format",
];

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at row {row}, column {column}: {cause}")]
    Parse {
        row: u64,
        column: String,
        cause: String,
    },
    #[error("invalid {entity}: {message}")]
    Validation { entity: String, message: String },
    #[error("corpus references unknown profile id {0:?}")]
    DanglingReference(String),
    #[error("follower count {0} is below the smallest tier (Nano starts at 1000)")]
    BelowNano(u64),
}

/// Declares a closed enum whose string form is the variant name.
/// Unknown strings are rejected rather than coerced.
macro_rules! closed_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => stringify!($variant)),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($variant) => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown {} {:?} (expected one of: {})",
                        stringify!($name),
                        other,
                        [$(stringify!($variant)),+].join(", ")
                    )),
                }
            }
        }
    };
}

closed_enum!(KolType {
    Student,
    Professional,
    Entrepreneur,
    Housewife
});
closed_enum!(Platform { Instagram, TikTok });
closed_enum!(
    /// Follower-count band. Bands are half-open: `[lo, hi)`.
    FollowerTier { Nano, Micro, MidTier, Macro, Mega }
);
closed_enum!(Theme { Finance, General });
closed_enum!(Audience { Young, VeryYoung });
closed_enum!(CampaignFormat { Video, Image });
closed_enum!(
    /// Comment sources; TikTok comments are not collectable.
    CommentPlatform { Instagram }
);

impl FollowerTier {
    /// Inclusive lower bound of the band.
    pub fn lower_bound(self) -> u64 {
        match self {
            FollowerTier::Nano => 1_000,
            FollowerTier::Micro => 10_000,
            FollowerTier::MidTier => 50_000,
            FollowerTier::Macro => 500_000,
            FollowerTier::Mega => 1_000_000,
        }
    }

    /// Exclusive upper bound; `None` for the open-ended Mega band.
    pub fn upper_bound(self) -> Option<u64> {
        match self {
            FollowerTier::Mega => None,
            FollowerTier::Nano => Some(10_000),
            FollowerTier::Micro => Some(50_000),
            FollowerTier::MidTier => Some(500_000),
            FollowerTier::Macro => Some(1_000_000),
        }
    }
}

/// Maps a follower count onto its tier.
pub fn tier_of(follower_count: u64) -> Result<FollowerTier, ModelError> {
    FollowerTier::ALL
        .iter()
        .rev()
        .copied()
        .find(|t| follower_count >= t.lower_bound())
        .ok_or(ModelError::BelowNano(follower_count))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KolProfile {
    pub id: String,
    pub name: String,
    pub kol_type: KolType,
    pub platform: Platform,
    pub follower_tier: FollowerTier,
    pub follower_count: u64,
    pub post_count: u64,
    /// Baseline engagement, likes per post.
    pub avg_likes_per_post: f64,
    pub theme: Theme,
    pub audience: Audience,
    /// Likes on the campaign post (one aggregated figure per KOL).
    pub campaign_likes: u64,
    pub campaign_format: CampaignFormat,
}

impl KolProfile {
    /// Checks the per-profile invariants.
    pub fn validate(&self) -> Result<(), ModelError> {
        let invalid = |message: String| ModelError::Validation {
            entity: format!("profile {:?}", self.id),
            message,
        };
        if self.id.is_empty() {
            return Err(invalid("id must not be empty".into()));
        }
        let tier = tier_of(self.follower_count).map_err(|e| invalid(e.to_string()))?;
        if tier != self.follower_tier {
            return Err(invalid(format!(
                "follower_tier {} does not match follower_count {} (expected {})",
                self.follower_tier, self.follower_count, tier
            )));
        }
        if !(self.avg_likes_per_post.is_finite() && self.avg_likes_per_post > 0.0) {
            return Err(invalid(format!(
                "avg_likes_per_post must be a positive finite number, got {}",
                self.avg_likes_per_post
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommentCorpus {
    pub kol_id: String,
    pub source_platform: CommentPlatform,
    pub comments: Vec<String>,
}

/// A validated collection of profiles and the corpora that reference them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    profiles: Vec<KolProfile>,
    corpora: Vec<CommentCorpus>,
}

impl Dataset {
    pub fn new(profiles: Vec<KolProfile>, corpora: Vec<CommentCorpus>) -> Result<Self, ModelError> {
        if profiles.is_empty() {
            return Err(ModelError::Validation {
                entity: "dataset".into(),
                message: "dataset must contain ≥1 profile".into(),
            });
        }
        let mut ids = HashSet::new();
        for p in &profiles {
            p.validate()?;
            if !ids.insert(p.id.as_str()) {
                return Err(ModelError::Validation {
                    entity: format!("profile {:?}", p.id),
                    message: "duplicate profile id".into(),
                });
            }
        }
        let mut seen_corpora = HashSet::new();
        for c in &corpora {
            if !ids.contains(c.kol_id.as_str()) {
                return Err(ModelError::DanglingReference(c.kol_id.clone()));
            }
            if !seen_corpora.insert(c.kol_id.as_str()) {
                return Err(ModelError::Validation {
                    entity: format!("corpus {:?}", c.kol_id),
                    message: "duplicate corpus for the same profile".into(),
                });
            }
            if c.comments.is_empty() {
                return Err(ModelError::Validation {
                    entity: format!("corpus {:?}", c.kol_id),
                    message: "comments must not be empty".into(),
                });
            }
        }
        Ok(Dataset { profiles, corpora })
    }

    pub fn profiles(&self) -> &[KolProfile] {
        &self.profiles
    }

    pub fn corpora(&self) -> &[CommentCorpus] {
        &self.corpora
    }

    pub fn profile(&self, id: &str) -> Option<&KolProfile> {
        self.profiles.iter().find(|p| p.id == id)
    }

    /// Same profiles, corpora dropped.
    pub fn without_corpora(&self) -> Dataset {
        Dataset {
            profiles: self.profiles.clone(),
            corpora: Vec::new(),
        }
    }

    pub fn to_profiles_csv(&self) -> String {
        write_profiles_csv(&self.profiles)
    }

    pub fn to_corpora_json(&self) -> String {
        serde_json::to_string_pretty(&self.corpora).expect("corpora serialize")
    }
}

/// Reads and validates a dataset from disk. Corpora are optional.
pub fn load_dataset(profiles_path: &Path, corpora_path: Option<&Path>) -> Result<Dataset, ModelError> {
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    let profiles = parse_profiles_csv(&read(profiles_path)?)?;
    let corpora = match corpora_path {
        Some(path) => parse_corpora_json(&read(path)?)?,
        None => Vec::new(),
    };
    Dataset::new(profiles, corpora)
}

/// Parses profile rows and checks per-row invariants (tier, baseline).
/// Dataset-level checks happen in [`Dataset::new`].
pub fn parse_profiles_csv(text: &str) -> Result<Vec<KolProfile>, ModelError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.iter().ne(PROFILE_HEADER.iter().copied()) {
        return Err(ModelError::Parse {
            row: 1,
            column: "header".into(),
            cause: format!("expected {:?}", PROFILE_HEADER.join(",")),
        });
    }

    let mut profiles = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() != PROFILE_HEADER.len() {
            return Err(ModelError::Parse {
                row,
                column: "*".into(),
                cause: format!("expected {} fields, found {}", PROFILE_HEADER.len(), record.len()),
            });
        }
        let field = |i: usize| record.get(i).unwrap_or_default();
        let profile = KolProfile {
            id: field(0).to_string(),
            name: field(1).to_string(),
            kol_type: parse_field(row, 2, field(2))?,
            platform: parse_field(row, 3, field(3))?,
            follower_tier: parse_field(row, 4, field(4))?,
            follower_count: parse_field(row, 5, field(5))?,
            post_count: parse_field(row, 6, field(6))?,
            avg_likes_per_post: parse_field(row, 7, field(7))?,
            theme: parse_field(row, 8, field(8))?,
            audience: parse_field(row, 9, field(9))?,
            campaign_likes: parse_field(row, 10, field(10))?,
            campaign_format: parse_field(row, 11, field(11))?,
        };
        profile.validate().map_err(|e| match e {
            ModelError::Validation { entity, message } => ModelError::Validation {
                entity: format!("{entity} (row {row})"),
                message,
            },
            other => other,
        })?;
        profiles.push(profile);
    }
    Ok(profiles)
}

fn parse_field<T>(row: u64, col: usize, raw: &str) -> Result<T, ModelError>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    raw.parse::<T>().map_err(|e| ModelError::Parse {
        row,
        column: PROFILE_HEADER[col].to_string(),
        cause: format!("{raw:?}: {e}"),
    })
}

fn csv_error(e: csv::Error, fallback_row: u64) -> ModelError {
    let row = e.position().map_or(fallback_row, |p| p.line());
    ModelError::Parse {
        row,
        column: "*".into(),
        cause: e.to_string(),
    }
}

pub fn parse_corpora_json(text: &str) -> Result<Vec<CommentCorpus>, ModelError> {
    serde_json::from_str(text).map_err(|e| ModelError::Parse {
        row: e.line() as u64,
        column: e.column().to_string(),
        cause: e.to_string(),
    })
}

pub fn write_profiles_csv(profiles: &[KolProfile]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PROFILE_HEADER).expect("in-memory write");
    for p in profiles {
        w.write_record([
            p.id.clone(),
            p.name.clone(),
            p.kol_type.to_string(),
            p.platform.to_string(),
            p.follower_tier.to_string(),
            p.follower_count.to_string(),
            p.post_count.to_string(),
            // shortest representation that parses back to the same f64
            p.avg_likes_per_post.to_string(),
            p.theme.to_string(),
            p.audience.to_string(),
            p.campaign_likes.to_string(),
            p.campaign_format.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(id: &str, followers: u64) -> KolProfile {
        KolProfile {
            id: id.into(),
            name: id.to_uppercase(),
            kol_type: KolType::Professional,
            platform: Platform::Instagram,
            follower_tier: tier_of(followers).unwrap(),
            follower_count: followers,
            post_count: 10,
            avg_likes_per_post: 120.0,
            theme: Theme::Finance,
            audience: Audience::Young,
            campaign_likes: 100,
            campaign_format: CampaignFormat::Image,
        }
    }

    #[test]
    fn tier_boundaries() {
        assert_eq!(tier_of(1_000).unwrap(), FollowerTier::Nano);
        assert_eq!(tier_of(9_999).unwrap(), FollowerTier::Nano);
        assert_eq!(tier_of(10_000).unwrap(), FollowerTier::Micro);
        assert_eq!(tier_of(75_000).unwrap(), FollowerTier::MidTier);
        assert_eq!(tier_of(999_999).unwrap(), FollowerTier::Macro);
        assert_eq!(tier_of(1_000_000).unwrap(), FollowerTier::Mega);
        assert!(matches!(tier_of(999), Err(ModelError::BelowNano(999))));
    }

    #[test]
    fn empty_profiles_file_is_a_validation_error() {
        for text in ["", "\n", &PROFILE_HEADER.join(",")] {
            let profiles = parse_profiles_csv(text).unwrap();
            match Dataset::new(profiles, vec![]) {
                Err(ModelError::Validation { message, .. }) => {
                    assert_eq!(message, "dataset must contain ≥1 profile")
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn dangling_corpus_reference() {
        let corpus = CommentCorpus {
            kol_id: "ghost".into(),
            source_platform: CommentPlatform::Instagram,
            comments: vec!["halo".into()],
        };
        let err = Dataset::new(vec![profile("a", 20_000)], vec![corpus]).unwrap_err();
        assert!(matches!(err, ModelError::DanglingReference(ref id) if id == "ghost"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = Dataset::new(vec![profile("a", 20_000), profile("a", 30_000)], vec![]).unwrap_err();
        assert!(matches!(err, ModelError::Validation { .. }));
    }

    #[test]
    fn mismatched_tier_cites_row() {
        let mut p = profile("a", 20_000);
        let mut text = write_profiles_csv(&[profile("ok", 2_000), p.clone()]);
        p.follower_tier = FollowerTier::Mega;
        text = text.replace("a,A,Professional,Instagram,Micro", "a,A,Professional,Instagram,Mega");
        match parse_profiles_csv(&text) {
            Err(ModelError::Validation { entity, message }) => {
                assert!(entity.contains("row 3"), "{entity}");
                assert!(message.contains("follower_tier"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_enum_is_parse_error_with_column() {
        let text = write_profiles_csv(&[profile("a", 20_000)]).replace("Finance", "Crypto");
        match parse_profiles_csv(&text) {
            Err(ModelError::Parse { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "theme");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_baseline_rejected() {
        let mut p = profile("a", 20_000);
        p.avg_likes_per_post = 0.0;
        assert!(matches!(p.validate(), Err(ModelError::Validation { .. })));
    }

    #[test]
    fn wrong_header_rejected() {
        let text = "id,name\nx,y\n";
        assert!(matches!(
            parse_profiles_csv(text),
            Err(ModelError::Parse { row: 1, .. })
        ));
    }

    #[test]
    fn ragged_row_rejected() {
        let mut text = write_profiles_csv(&[profile("a", 20_000)]);
        text.push_str("b,B,Student\n");
        assert!(matches!(
            parse_profiles_csv(&text),
            Err(ModelError::Parse { row: 3, .. })
        ));
    }

    #[test]
    fn corpora_json_rejects_tiktok() {
        let text = r#"[{"kol_id":"a","source_platform":"TikTok","comments":["x"]}]"#;
        assert!(matches!(parse_corpora_json(text), Err(ModelError::Parse { row: 1, .. })));
    }
}
