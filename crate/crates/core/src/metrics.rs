//! Engagement proxies and enthusiasm rates.
//!
//! Engagement is the average likes per post of a KOL. Enthusiasm is the
//! ratio of likes on the campaign post to that baseline: 1.0 means the
//! campaign post did exactly as well as a typical post.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::model::{CampaignFormat, Dataset, KolProfile};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("non-positive value {value} for {what} cannot be used as a ratio baseline or log input")]
    ZeroBaseline { what: String, value: f64 },
}

/// Campaign likes divided by the usual likes per post.
pub fn enthusiasm_rate(campaign_likes: u64, baseline_avg: f64) -> Result<f64, MetricsError> {
    if !baseline_avg.is_finite() || baseline_avg <= 0.0 {
        return Err(MetricsError::ZeroBaseline {
            what: "baseline_avg".into(),
            value: baseline_avg,
        });
    }
    Ok(campaign_likes as f64 / baseline_avg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnthusiasmRecord {
    pub kol_id: String,
    pub rate: f64,
    pub campaign_likes: u64,
    pub baseline_avg: f64,
}

impl EnthusiasmRecord {
    pub fn for_profile(p: &KolProfile) -> Result<Self, MetricsError> {
        Ok(EnthusiasmRecord {
            kol_id: p.id.clone(),
            rate: enthusiasm_rate(p.campaign_likes, p.avg_likes_per_post).map_err(|_| {
                MetricsError::ZeroBaseline {
                    what: format!("avg_likes_per_post of {}", p.id),
                    value: p.avg_likes_per_post,
                }
            })?,
            campaign_likes: p.campaign_likes,
            baseline_avg: p.avg_likes_per_post,
        })
    }
}

/// Per-KOL enthusiasm, highest rate first, ties by id.
pub fn enthusiasm_table(dataset: &Dataset) -> Result<Vec<EnthusiasmRecord>, MetricsError> {
    enthusiasm_table_with(dataset, Execution::default())
}

pub fn enthusiasm_table_with(
    dataset: &Dataset,
    exec: Execution,
) -> Result<Vec<EnthusiasmRecord>, MetricsError> {
    let mut rows = exec.try_map(dataset.profiles(), EnthusiasmRecord::for_profile)?;
    rows.sort_by(|a, b| desc_then_id(a.rate, &a.kol_id, b.rate, &b.kol_id));
    Ok(rows)
}

/// Unweighted mean enthusiasm per campaign format. Formats without KOLs are omitted.
pub fn enthusiasm_by_format(dataset: &Dataset) -> BTreeMap<CampaignFormat, f64> {
    let records: Vec<(CampaignFormat, f64)> = Execution::default().map(dataset.profiles(), |p| {
        (
            p.campaign_format,
            // baselines are validated positive at load time
            p.campaign_likes as f64 / p.avg_likes_per_post,
        )
    });
    let mut acc: BTreeMap<CampaignFormat, (f64, usize)> = BTreeMap::new();
    for (format, rate) in records {
        let e = acc.entry(format).or_insert((0.0, 0));
        e.0 += rate;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(format, (sum, n))| (format, sum / n as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log10,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log10 => "log10",
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Scale::Linear),
            "log10" => Ok(Scale::Log10),
            other => Err(format!("unknown scale {other:?} (expected linear or log10)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub category: String,
    /// Plotted value, transformed into the series scale.
    pub value: f64,
    /// Untransformed value.
    pub linear: f64,
}

/// An ordered bar series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSeries {
    pub label: String,
    pub points: Vec<ChartPoint>,
    pub scale: Scale,
}

impl ChartSeries {
    /// Builds a series from raw (linear) values: sorted by raw value
    /// descending, ties by category ascending, then transformed.
    pub fn from_raw(
        label: impl Into<String>,
        raw: Vec<(String, f64)>,
        scale: Scale,
    ) -> Result<Self, MetricsError> {
        let mut raw = raw;
        raw.sort_by(|a, b| desc_then_id(a.1, &a.0, b.1, &b.0));
        let points = raw
            .into_iter()
            .map(|(category, v)| {
                let value = match scale {
                    Scale::Linear => v,
                    Scale::Log10 => {
                        if v.is_nan() || v <= 0.0 {
                            return Err(MetricsError::ZeroBaseline {
                                what: format!("log10 input for {category}"),
                                value: v,
                            });
                        }
                        v.log10()
                    }
                };
                Ok(ChartPoint {
                    category,
                    value,
                    linear: v,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChartSeries {
            label: label.into(),
            points,
            scale,
        })
    }

    /// `label,category,value,scale,plotted` rows with a header line.
    /// `value` is always linear; `plotted` is the value in `scale`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,category,value,scale,plotted\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&self.label),
                csv_field(&p.category),
                p.linear,
                self.scale.as_str(),
                p.value
            ));
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Average likes per post, log10 scale.
pub fn engagement_series(dataset: &Dataset) -> Result<ChartSeries, MetricsError> {
    engagement_series_scaled(dataset, Scale::Log10)
}

pub fn engagement_series_scaled(dataset: &Dataset, scale: Scale) -> Result<ChartSeries, MetricsError> {
    let raw = dataset
        .profiles()
        .iter()
        .map(|p| (p.id.clone(), p.avg_likes_per_post))
        .collect();
    ChartSeries::from_raw("avg_likes_per_post", raw, scale)
}

/// Likes on the campaign post, log10 scale.
pub fn campaign_engagement_series(dataset: &Dataset) -> Result<ChartSeries, MetricsError> {
    campaign_engagement_series_scaled(dataset, Scale::Log10)
}

pub fn campaign_engagement_series_scaled(
    dataset: &Dataset,
    scale: Scale,
) -> Result<ChartSeries, MetricsError> {
    let raw = dataset
        .profiles()
        .iter()
        .map(|p| (p.id.clone(), p.campaign_likes as f64))
        .collect();
    ChartSeries::from_raw("campaign_likes", raw, scale)
}

fn desc_then_id(a: f64, a_id: &str, b: f64, b_id: &str) -> Ordering {
    b.total_cmp(&a).then_with(|| a_id.cmp(b_id))
}
