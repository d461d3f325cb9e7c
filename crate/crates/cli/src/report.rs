//! The `report.json` bundle.

use std::collections::BTreeMap;

use kolan_core::metrics::{ChartSeries, EnthusiasmRecord, Scale};
use kolan_core::model::CampaignFormat;
use kolan_core::pca::ClusterAssignment;
use kolan_core::sentiment::{CategoryTotals, ScoredWord, Weighting};
use kolan_core::textprep::FrequencyRow;
use serde::Serialize;

/// Bumped on any incompatible change to the bundle layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub settings: Settings,
    pub sections: Sections,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub k: usize,
    pub seed: u64,
    pub scale: Scale,
    pub weighting: Weighting,
    pub provider: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Sections {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pca: Option<PcaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<SentimentSection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricsSection {
    pub engagement: ChartSeries,
    pub campaign_engagement: ChartSeries,
    /// Highest rate first.
    pub enthusiasm: Vec<EnthusiasmRecord>,
    pub format_means: BTreeMap<CampaignFormat, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PcaSection {
    pub feature_names: Vec<String>,
    pub eigenvalues: Vec<f64>,
    pub explained_ratio: Vec<f64>,
    /// One row per feature, one value per component.
    pub loadings: Vec<Row>,
    /// One row per KOL, one value per component.
    pub scores: Vec<Row>,
    pub clusters: ClusterAssignment,
}

#[derive(Debug, Clone, Serialize)]
pub struct SentimentSection {
    pub weighting: Weighting,
    pub token_count: u64,
    pub unique_words: usize,
    pub top_words: Vec<FrequencyRow>,
    pub scores: Vec<ScoredWord>,
    pub totals: CategoryTotals,
    pub unscored: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
