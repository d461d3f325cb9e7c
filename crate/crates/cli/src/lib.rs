//! `kolan` command-line front end: runs the metrics, PCA and sentiment
//! sections from a config file and writes CSV, JSON and SVG outputs plus a
//! `report.json` bundle.

pub mod config;
pub mod error;
pub mod report;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use kolan_core::metrics::{
    campaign_engagement_series_scaled, engagement_series_scaled, enthusiasm_by_format,
    enthusiasm_table, Scale,
};
use kolan_core::model::{load_dataset, Dataset};
use kolan_core::pca::{cluster_scores, run_pca};
use kolan_core::sentiment::{
    load_lexicon, score_frequencies, scores_csv, DictionaryProvider, HttpConfig, HttpProvider,
    TranslationCache, TranslationProvider,
};
use kolan_core::textprep::{word_frequencies, LemmaLexicon, SlangMap, StopList, TextPipeline};
use kolan_core::Execution;

use config::{Formats, Overrides, ProviderKind, RunConfig};
use error::CliError;
use report::{MetricsSection, PcaSection, Report, Row, Sections, SentimentSection, Settings, SCHEMA_VERSION};

/// Rows shown in the top-words table.
pub const TOP_WORDS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "kolan", version, about = "Influencer campaign analytics reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Engagement, enthusiasm and format tables.
    Metrics(RunArgs),
    /// Principal components and k-means clusters of the profiles.
    Pca(RunArgs),
    /// Word frequencies and emotion scores of the comment corpora.
    Sentiment(RunArgs),
    /// All sections plus the report.json bundle.
    Report(RunArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// key = value config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Chart scale: linear or log10.
    #[arg(long)]
    pub scale: Option<Scale>,
    /// Number of clusters.
    #[arg(long)]
    pub k: Option<usize>,
    /// Tie-break seed for clustering.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Count each distinct word once in the category totals.
    #[arg(long)]
    pub unique: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Metrics(_) => "metrics",
            Command::Pca(_) => "pca",
            Command::Sentiment(_) => "sentiment",
            Command::Report(_) => "report",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Metrics(a) | Command::Pca(a) | Command::Sentiment(a) | Command::Report(a) => a,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// A file to write, relative to the output directory.
struct Artifact {
    path: String,
    contents: String,
}

#[derive(Default)]
struct Artifacts(Vec<Artifact>);

impl Artifacts {
    fn add(&mut self, enabled: bool, path: impl Into<String>, contents: String) {
        if enabled {
            self.0.push(Artifact {
                path: path.into(),
                contents,
            });
        }
    }
}

pub fn run(command: &Command) -> Result<RunSummary, CliError> {
    let args = command.args();
    let cfg = RunConfig::load(&args.config)?.apply(&Overrides {
        scale: args.scale,
        k: args.k,
        seed: args.seed,
        out: args.out.clone(),
        unique: args.unique,
    });

    let (metrics, pca, mut sentiment) = match command {
        Command::Metrics(_) => (true, false, false),
        Command::Pca(_) => (false, true, false),
        Command::Sentiment(_) => (false, false, true),
        Command::Report(_) => (true, true, true),
    };
    let mut warnings = Vec::new();
    if matches!(command, Command::Report(_)) && cfg.corpora.is_none() {
        sentiment = false;
        warnings.push("sentiment section skipped: no `corpora` configured".to_string());
    }
    cfg.validate(metrics || pca, sentiment)?;

    let corpora = if sentiment { cfg.corpora.as_deref() } else { None };
    let dataset = load_dataset(cfg.require_profiles()?, corpora)?;

    let mut files = Artifacts::default();
    let mut sections = Sections::default();
    if metrics {
        sections.metrics = Some(metrics_section(&dataset, &cfg, &mut files)?);
    }
    if pca {
        sections.pca = Some(pca_section(&dataset, &cfg, &mut files)?);
    }
    if sentiment {
        let s = sentiment_section(&dataset, &cfg, &mut files)?;
        if s.token_count == 0 {
            warnings.push("comment corpora contain no words after preprocessing".to_string());
        }
        sections.sentiment = Some(s);
    }

    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: command.name().to_string(),
        settings: Settings {
            k: cfg.k,
            seed: cfg.seed,
            scale: cfg.scale,
            weighting: cfg.weighting,
            provider: cfg.provider.as_str().to_string(),
        },
        sections,
        warnings: warnings.clone(),
    };
    files.add(true, "report.json", report.to_json());

    let written = write_all(&cfg.out, files)?;
    Ok(RunSummary {
        out: cfg.out,
        files: written,
        warnings,
    })
}

fn write_all(out: &Path, files: Artifacts) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::with_capacity(files.0.len());
    for a in files.0 {
        let path = out.join(&a.path);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        fs::write(&path, a.contents).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn metrics_section(ds: &Dataset, cfg: &RunConfig, files: &mut Artifacts) -> Result<MetricsSection, CliError> {
    let Formats { csv, json, svg } = cfg.formats;
    let engagement = engagement_series_scaled(ds, cfg.scale)?;
    let campaign = campaign_engagement_series_scaled(ds, cfg.scale)?;
    let enthusiasm = enthusiasm_table(ds)?;
    let format_means = enthusiasm_by_format(ds);

    let scale_note = match cfg.scale {
        Scale::Linear => "",
        Scale::Log10 => " (log10)",
    };
    for (name, series, title) in [
        ("engagement", &engagement, "Average likes per post"),
        ("campaign_engagement", &campaign, "Likes on the campaign post"),
    ] {
        files.add(csv, format!("metrics/{name}.csv"), series.to_csv());
        let bars: Vec<(String, f64)> = series.points.iter().map(|p| (p.category.clone(), p.value)).collect();
        files.add(svg, format!("metrics/{name}.svg"), svg::bar_chart(title, &format!("{}{scale_note}", series.label), &bars));
    }

    let mut table = String::from("kol_id,rate,campaign_likes,baseline_avg\n");
    for r in &enthusiasm {
        table.push_str(&format!("{},{},{},{}\n", csv_field(&r.kol_id), r.rate, r.campaign_likes, r.baseline_avg));
    }
    files.add(csv, "metrics/enthusiasm.csv", table);
    let bars: Vec<(String, f64)> = enthusiasm.iter().map(|r| (r.kol_id.clone(), r.rate)).collect();
    files.add(svg, "metrics/enthusiasm.svg", svg::bar_chart("Audience enthusiasm per KOL", "campaign likes / average likes", &bars));

    let mut table = String::from("format,mean_rate\n");
    for (f, m) in &format_means {
        table.push_str(&format!("{f},{m}\n"));
    }
    files.add(csv, "metrics/format.csv", table);
    let bars: Vec<(String, f64)> = format_means.iter().map(|(f, m)| (f.to_string(), *m)).collect();
    files.add(svg, "metrics/format.svg", svg::bar_chart("Mean enthusiasm by campaign format", "mean rate", &bars));

    let section = MetricsSection {
        engagement,
        campaign_engagement: campaign,
        enthusiasm,
        format_means,
    };
    files.add(json, "metrics/metrics.json", to_json(&section));
    Ok(section)
}

fn pca_section(ds: &Dataset, cfg: &RunConfig, files: &mut Artifacts) -> Result<PcaSection, CliError> {
    let Formats { csv, json, svg } = cfg.formats;
    let result = run_pca(ds)?;
    let clusters = cluster_scores(&result, cfg.k, cfg.seed)?;
    let p = result.loadings.cols();
    let pc_header: String = (1..=p).map(|i| format!(",PC{i}")).collect();

    let loadings: Vec<Row> = result
        .feature_names
        .iter()
        .enumerate()
        .map(|(i, f)| Row {
            id: f.clone(),
            values: result.loadings.row(i).to_vec(),
        })
        .collect();
    let scores: Vec<Row> = result
        .row_ids
        .iter()
        .enumerate()
        .map(|(i, id)| Row {
            id: id.clone(),
            values: result.scores.row(i).to_vec(),
        })
        .collect();

    files.add(csv, "pca/loadings.csv", rows_csv("feature", &pc_header, &loadings));
    files.add(csv, "pca/scores.csv", rows_csv("kol_id", &pc_header, &scores));
    let mut table = String::from("component,eigenvalue,explained_ratio\n");
    for (i, (ev, r)) in result.eigenvalues.iter().zip(&result.explained_ratio).enumerate() {
        table.push_str(&format!("PC{},{ev},{r}\n", i + 1));
    }
    files.add(csv, "pca/explained.csv", table);
    let mut table = String::from("kol_id,cluster,pc1,pc2\n");
    for m in &clusters.members {
        table.push_str(&format!("{},{},{},{}\n", csv_field(&m.kol_id), m.cluster, m.pc1, m.pc2));
    }
    files.add(csv, "pca/clusters.csv", table);

    let points: Vec<svg::ScatterPoint<'_>> = clusters
        .members
        .iter()
        .map(|m| svg::ScatterPoint {
            label: &m.kol_id,
            x: m.pc1,
            y: m.pc2,
            group: m.cluster,
        })
        .collect();
    let arrows: Vec<svg::Arrow<'_>> = loadings
        .iter()
        .map(|r| svg::Arrow {
            label: &r.id,
            x: r.values[0],
            y: r.values.get(1).copied().unwrap_or(0.0),
        })
        .collect();
    let pct = |i: usize| result.explained_ratio.get(i).copied().unwrap_or(0.0) * 100.0;
    files.add(
        svg,
        "pca/biplot.svg",
        svg::biplot(
            &format!("KOL clusters on the first two components (k = {})", cfg.k),
            &points,
            &arrows,
            &format!("PC1 ({:.1}%)", pct(0)),
            &format!("PC2 ({:.1}%)", pct(1)),
        ),
    );

    let section = PcaSection {
        feature_names: result.feature_names.clone(),
        eigenvalues: result.eigenvalues.clone(),
        explained_ratio: result.explained_ratio.clone(),
        loadings,
        scores,
        clusters,
    };
    files.add(json, "pca/pca.json", to_json(&section));
    Ok(section)
}

fn text_pipeline(cfg: &RunConfig) -> Result<TextPipeline, CliError> {
    let bundled = TextPipeline::bundled();
    Ok(TextPipeline {
        stop_id: cfg.stopwords_id.as_deref().map(StopList::load).transpose()?.unwrap_or(bundled.stop_id),
        stop_en: cfg.stopwords_en.as_deref().map(StopList::load).transpose()?.unwrap_or(bundled.stop_en),
        lemmas: cfg.lemmas.as_deref().map(LemmaLexicon::load).transpose()?.unwrap_or(bundled.lemmas),
        slang: cfg.slang.as_deref().map(SlangMap::load).transpose()?.unwrap_or(bundled.slang),
    })
}

fn provider(cfg: &RunConfig) -> Result<Box<dyn TranslationProvider>, CliError> {
    match cfg.provider {
        ProviderKind::Dictionary => {
            let path = cfg.dictionary.as_deref().expect("validated");
            Ok(Box::new(DictionaryProvider::load(path)?))
        }
        ProviderKind::Http => {
            let mut http = HttpConfig::from_env(cfg.endpoint.clone().expect("validated"))?;
            http.batch_size = cfg.batch_size;
            Ok(Box::new(HttpProvider::new(http)?))
        }
    }
}

fn sentiment_section(ds: &Dataset, cfg: &RunConfig, files: &mut Artifacts) -> Result<SentimentSection, CliError> {
    let Formats { csv, json, svg } = cfg.formats;
    let pipeline = text_pipeline(cfg)?;
    let lexicon = load_lexicon(cfg.lexicon.as_deref().expect("validated"))?;
    let docs = pipeline.process_corpora(ds.corpora(), Execution::default());
    let freq = word_frequencies(&docs)?;

    let provider = provider(cfg)?;
    let mut cache = match &cfg.cache {
        Some(path) => TranslationCache::open(path)?,
        None => TranslationCache::in_memory(),
    };
    let outcome = score_frequencies(&freq, provider.as_ref(), &mut cache, &lexicon, cfg.weighting)?;

    files.add(csv, "sentiment/words.csv", freq.to_csv());
    files.add(csv, "sentiment/scores.csv", scores_csv(&outcome.scored));
    files.add(csv, "sentiment/totals.csv", outcome.totals.to_csv());
    let mut unscored = String::from("text\n");
    for w in &outcome.unscored {
        unscored.push_str(&csv_field(w));
        unscored.push('\n');
    }
    files.add(csv, "sentiment/unscored.csv", unscored);
    let bars: Vec<(String, f64)> = outcome
        .totals
        .dominant
        .iter()
        .map(|c| (c.to_string(), outcome.totals.get(*c) as f64))
        .collect();
    let axis = match cfg.weighting {
        kolan_core::sentiment::Weighting::Occurrences => "word occurrences",
        kolan_core::sentiment::Weighting::Unique => "distinct words",
    };
    files.add(svg, "sentiment/totals.svg", svg::bar_chart("Audience emotion categories", axis, &bars));

    let section = SentimentSection {
        weighting: cfg.weighting,
        token_count: freq.total(),
        unique_words: freq.rows.len(),
        top_words: freq.top(TOP_WORDS).to_vec(),
        scores: outcome.scored,
        totals: outcome.totals,
        unscored: outcome.unscored,
    };
    files.add(json, "sentiment/sentiment.json", to_json(&section));
    Ok(section)
}

fn rows_csv(id_header: &str, pc_header: &str, rows: &[Row]) -> String {
    let mut out = format!("{id_header}{pc_header}\n");
    for r in rows {
        out.push_str(&csv_field(&r.id));
        for v in &r.values {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("section serializes");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
