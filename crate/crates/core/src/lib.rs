//! Batch analytics for influencer ("KOL") marketing campaigns.
//!
//! The crate is split along the analysis stages:
//!
//! * [`model`]: influencer profiles, comment corpora, CSV/JSON ingestion.
//! * [`metrics`]: engagement proxies, enthusiasm rates, chart series.
//! * [`pca`]: feature encoding, standardization, Jacobi eigensolver, PCA, k-means.
//! * [`textprep`]: cleaning, tokenization, stopwords, lemmatization, frequencies.
//! * [`sentiment`]: translation providers, emotion lexicon scoring, totals.
//!
//! Data-parallel loops go through [`exec::Execution`]; with the `parallel`
//! feature disabled every path runs sequentially and produces identical output.

pub mod exec;
pub mod metrics;
pub mod model;
pub mod pca;
pub mod sentiment;
pub mod textprep;

pub use exec::Execution;
pub use model::{Dataset, KolProfile};
