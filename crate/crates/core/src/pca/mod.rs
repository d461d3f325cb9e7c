//! Principal component analysis of influencer profiles.
//!
//! Six variables are encoded per KOL (see [`FeatureVector`]), standardized
//! to z-scores, and decomposed through the correlation matrix with the
//! in-crate Jacobi solver ([`eigen_sym`]). Loading columns are made
//! sign-canonical so results do not depend on the solver's sign choices.
//! KOLs are then grouped with k-means on the PC1/PC2 plane ([`cluster_scores`]).

mod cluster;
mod eigen;
mod matrix;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Audience, CampaignFormat, Dataset, KolProfile, Theme};

pub use cluster::{cluster_points, cluster_scores, ClusterAssignment, ClusterMember, MAX_ITERATIONS};
pub use eigen::{eigen_sym, eigen_sym_batch, eigen_sym_with, JacobiOptions, SymmetricEigen};
pub use matrix::Matrix;

/// Row labels of the loadings matrix, in encoding order.
pub const FEATURE_NAMES: [&str; 6] = [
    "audiens",
    "theme",
    "jml_fol",
    "jml_post",
    "post_type",
    "avg_like_post",
];

/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are rounding noise and are set to zero.
pub const EIGEN_CLAMP: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum PcaError {
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("column {0:?} has zero variance")]
    ZeroVariance(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col}): difference {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("{names} column names given for a matrix with {cols} columns")]
    NameMismatch { names: usize, cols: usize },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("k = {k} exceeds the number of points ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("clustering needs at least two score columns")]
    TooFewComponents,
}

/// Numeric encoding of one KOL.
///
/// Categorical codes: Young→0 / VeryYoung→1, Finance→0 / General→1,
/// Image→0 / Video→1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub audiens: f64,
    pub theme: f64,
    pub jml_fol: f64,
    pub jml_post: f64,
    pub post_type: f64,
    pub avg_like_post: f64,
}

impl FeatureVector {
    pub fn to_array(self) -> [f64; 6] {
        [
            self.audiens,
            self.theme,
            self.jml_fol,
            self.jml_post,
            self.post_type,
            self.avg_like_post,
        ]
    }
}

pub fn encode_features(p: &KolProfile) -> FeatureVector {
    FeatureVector {
        audiens: match p.audience {
            Audience::Young => 0.0,
            Audience::VeryYoung => 1.0,
        },
        theme: match p.theme {
            Theme::Finance => 0.0,
            Theme::General => 1.0,
        },
        jml_fol: p.follower_count as f64,
        jml_post: p.post_count as f64,
        post_type: match p.campaign_format {
            CampaignFormat::Image => 0.0,
            CampaignFormat::Video => 1.0,
        },
        avg_like_post: p.avg_likes_per_post,
    }
}

/// One row per profile, in dataset order.
pub fn feature_matrix(dataset: &Dataset) -> Matrix {
    let rows: Vec<[f64; 6]> = dataset
        .profiles()
        .iter()
        .map(|p| encode_features(p).to_array())
        .collect();
    Matrix::from_rows(&rows)
}

/// Column means and sample standard deviations (n − 1 denominator).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

pub fn column_stats<S: AsRef<str>>(x: &Matrix, names: &[S]) -> Result<ColumnStats, PcaError> {
    if names.len() != x.cols() {
        return Err(PcaError::NameMismatch {
            names: names.len(),
            cols: x.cols(),
        });
    }
    let n = x.rows();
    if n < 2 {
        return Err(PcaError::TooFewRows { needed: 2, got: n });
    }
    let mut means = Vec::with_capacity(x.cols());
    let mut sds = Vec::with_capacity(x.cols());
    for (j, name) in names.iter().enumerate() {
        let col = x.column(j);
        if col.iter().any(|v| !v.is_finite()) {
            return Err(PcaError::NonFinite);
        }
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        let scale = col.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        // a constant column can still produce sd ~ ulp(mean) after rounding
        if sd <= 64.0 * f64::EPSILON * scale || sd == 0.0 {
            return Err(PcaError::ZeroVariance(name.as_ref().to_string()));
        }
        means.push(mean);
        sds.push(sd);
    }
    Ok(ColumnStats { means, sds })
}

/// Z-scores every column (mean 0, sample sd 1).
pub fn standardize<S: AsRef<str>>(x: &Matrix, names: &[S]) -> Result<Matrix, PcaError> {
    let stats = column_stats(x, names)?;
    Ok(apply_standardization(x, &stats))
}

fn apply_standardization(x: &Matrix, stats: &ColumnStats) -> Matrix {
    let mut z = x.clone();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            z[(i, j)] = (x[(i, j)] - stats.means[j]) / stats.sds[j];
        }
    }
    z
}

/// `ZᵀZ / (n − 1)` for an already standardized matrix, exactly symmetric.
pub fn correlation_matrix(z: &Matrix) -> Matrix {
    let p = z.cols();
    let denom = (z.rows() - 1) as f64;
    let mut c = Matrix::zeros(p, p);
    for a in 0..p {
        for b in a..p {
            let s: f64 = (0..z.rows()).map(|i| z[(i, a)] * z[(i, b)]).sum();
            c[(a, b)] = s / denom;
            c[(b, a)] = s / denom;
        }
    }
    c
}

/// Magnitudes closer than this count as tied in [`canonicalize_signs`].
pub const SIGN_TIE_TOLERANCE: f64 = 1e-12;

/// Flips each column so its largest-magnitude entry is positive.
/// Ties (within [`SIGN_TIE_TOLERANCE`]) go to the earliest row.
pub fn canonicalize_signs(loadings: &mut Matrix) {
    for j in 0..loadings.cols() {
        let mut best = 0;
        for i in 1..loadings.rows() {
            if loadings[(i, j)].abs() > loadings[(best, j)].abs() + SIGN_TIE_TOLERANCE {
                best = i;
            }
        }
        if loadings[(best, j)] < 0.0 {
            for i in 0..loadings.rows() {
                loadings[(i, j)] = -loadings[(i, j)];
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    /// Row labels of `loadings`.
    pub feature_names: Vec<String>,
    /// Row labels of `scores`.
    pub row_ids: Vec<String>,
    /// p×p, column k is the unit loading vector of PC(k+1).
    pub loadings: Matrix,
    pub eigenvalues: Vec<f64>,
    pub explained_ratio: Vec<f64>,
    /// n×p projections of the standardized rows.
    pub scores: Matrix,
    pub stats: ColumnStats,
}

impl PcaResult {
    /// `scores · loadingsᵀ`, i.e. the standardized input.
    pub fn reconstruct_standardized(&self) -> Matrix {
        self.scores.matmul(&self.loadings.transpose())
    }

    /// Reconstruction mapped back to the original units.
    pub fn reconstruct(&self) -> Matrix {
        let mut x = self.reconstruct_standardized();
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                x[(i, j)] = x[(i, j)] * self.stats.sds[j] + self.stats.means[j];
            }
        }
        x
    }

    /// (PC1, PC2) per row.
    pub fn plane(&self) -> Vec<[f64; 2]> {
        (0..self.scores.rows())
            .map(|i| {
                let r = self.scores.row(i);
                [r[0], r.get(1).copied().unwrap_or(0.0)]
            })
            .collect()
    }
}

/// Correlation-matrix PCA of the dataset's encoded features.
pub fn run_pca(dataset: &Dataset) -> Result<PcaResult, PcaError> {
    let ids: Vec<String> = dataset.profiles().iter().map(|p| p.id.clone()).collect();
    run_pca_matrix(&feature_matrix(dataset), &FEATURE_NAMES, &ids)
}

pub fn run_pca_matrix<S: AsRef<str>>(
    x: &Matrix,
    names: &[S],
    row_ids: &[String],
) -> Result<PcaResult, PcaError> {
    let stats = column_stats(x, names)?;
    let z = apply_standardization(x, &stats);
    let corr = correlation_matrix(&z);
    let eig = eigen_sym(&corr)?;

    let eigenvalues: Vec<f64> = eig
        .values
        .iter()
        .map(|&v| if (-EIGEN_CLAMP..0.0).contains(&v) { 0.0 } else { v })
        .collect();
    let total: f64 = eigenvalues.iter().sum();
    let explained_ratio = eigenvalues.iter().map(|v| v / total).collect();

    let mut loadings = eig.vectors;
    canonicalize_signs(&mut loadings);
    let scores = z.matmul(&loadings);

    Ok(PcaResult {
        feature_names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        row_ids: row_ids.to_vec(),
        loadings,
        eigenvalues,
        explained_ratio,
        scores,
        stats,
    })
}
