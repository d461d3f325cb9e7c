//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use kolan_core::metrics::{enthusiasm_by_format, enthusiasm_rate, enthusiasm_table};
use kolan_core::model::{load_dataset, CampaignFormat, Dataset};
use kolan_core::pca::{canonicalize_signs, eigen_sym, run_pca, standardize, feature_matrix, Matrix, FEATURE_NAMES};
use kolan_core::sentiment::{
    load_lexicon, score_frequencies, score_word, Category, DictionaryProvider, TranslationCache,
    TranslationProvider, Weighting,
};
use kolan_core::textprep::{lemmatize, word_frequencies, LemmaLexicon, SlangMap, TextPipeline, TokenDoc};
use kolan_core::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn dataset() -> Dataset {
    load_dataset(&fixtures().join("profiles.csv"), Some(&fixtures().join("corpora.json"))).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn loadings_table() -> Check {
    let text = fs::read_to_string(fixtures().join("reference_loadings.csv")).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|v| v.trim().parse().unwrap()).collect())
        .collect();
    let l = Matrix::from_rows(&rows);
    ensure(l.rows() == 6 && l.cols() == 6, "expected a 6x6 table")?;
    let dev = l.transpose().matmul(&l).max_abs_diff(&Matrix::identity(6));
    ensure(dev <= 2e-3, format!("max|LtL - I| = {dev:e} > 2e-3"))?;
    Ok(format!("max|LtL - I| = {dev:.2e}"))
}

fn enthusiasm_ratios() -> Check {
    let high = enthusiasm_rate(1250, 1000.0).map_err(|e| e.to_string())?;
    let low = enthusiasm_rate(600, 1000.0).map_err(|e| e.to_string())?;
    ensure((high - 1.25).abs() <= 1e-12, format!("1250/1000 gave {high}"))?;
    ensure((low - 0.60).abs() <= 1e-12, format!("600/1000 gave {low}"))?;
    let table = enthusiasm_table(&dataset()).map_err(|e| e.to_string())?;
    ensure(table[0].kol_id == "chornella", format!("first is {}", table[0].kol_id))?;
    let vina = table.iter().find(|r| r.kol_id == "vina").ok_or("vina missing")?;
    ensure(vina.rate < 0.65, format!("vina rate {}", vina.rate))?;
    Ok(format!("chornella {:.4} first, vina {:.4}", table[0].rate, vina.rate))
}

fn word_scoring() -> Check {
    let dict = DictionaryProvider::load(&fixtures().join("dictionary.id-en.tsv")).map_err(|e| e.to_string())?;
    let lex = load_lexicon(&fixtures().join("emotion-lexicon.tsv")).map_err(|e| e.to_string())?;
    let words: Vec<String> = ["allah", "akal", "bank"].map(String::from).to_vec();
    let mut cache = TranslationCache::in_memory();
    let translated = kolan_core::sentiment::translate_words(&words, &dict, &mut cache).map_err(|e| e.to_string())?;
    let expect = [("allah", "god"), ("akal", "sense"), ("bank", "bank")];
    for ((w, t), (ew, et)) in translated.iter().zip(expect) {
        ensure(w == ew && t == et, format!("{w} -> {t}, expected {ew} -> {et}"))?;
    }
    let shown = [
        Category::Anger,
        Category::Anticipation,
        Category::Disgust,
        Category::Fear,
        Category::Joy,
        Category::Sadness,
        Category::Surprise,
    ];
    let row = |t: &str| shown.map(|c| score_word(t, &lex).get(c));
    ensure(row("god") == [0, 1, 0, 1, 1, 0, 0], format!("god row {:?}", row("god")))?;
    ensure(row("sense") == [0; 7], format!("sense row {:?}", row("sense")))?;
    ensure(row("bank") == [0; 7], format!("bank row {:?}", row("bank")))?;
    let _ = dict.name();
    Ok("allah/god 0,1,0,1,1,0,0; akal/sense and bank/bank all zero".into())
}

fn slang() -> Check {
    let (lemmas, slang) = (LemmaLexicon::bundled(), SlangMap::bundled());
    for (w, expect) in [("nyidam", "mengidam"), ("ngelamar", "melamar")] {
        let got = lemmatize(w, &lemmas, &slang);
        ensure(got == expect, format!("{w} -> {got}, expected {expect}"))?;
    }
    Ok("nyidam -> mengidam, ngelamar -> melamar".into())
}

const TOP10: [(&str, u64); 10] = [
    ("investasi", 5),
    ("banget", 4),
    ("barang", 4),
    ("mengatur", 3),
    ("uang", 3),
    ("bahan", 2),
    ("bank", 2),
    ("duit", 2),
    ("gudang", 2),
    ("juta", 2),
];

fn frequency_table() -> Check {
    // shuffled multiset
    let mut tokens = Vec::new();
    for i in [7, 2, 9, 0, 4, 8, 1, 6, 3, 5] {
        let (w, n) = TOP10[i];
        tokens.extend(std::iter::repeat_n(w.to_string(), n as usize));
    }
    tokens.rotate_left(11);
    let doc = TokenDoc::from_lemmas("kol", tokens).map_err(|e| e.to_string())?;
    let table = word_frequencies(&[doc]).map_err(|e| e.to_string())?;
    let got: Vec<(&str, u64)> = table.rows.iter().map(|r| (r.text.as_str(), r.n)).collect();
    ensure(got == TOP10, format!("got {got:?}"))?;
    Ok("10 rows in expected order".into())
}

fn dominance() -> Check {
    let ds = dataset();
    let docs = TextPipeline::bundled().process_corpora(ds.corpora(), Execution::default());
    let freq = word_frequencies(&docs).map_err(|e| e.to_string())?;
    let dict = DictionaryProvider::load(&fixtures().join("dictionary.id-en.tsv")).map_err(|e| e.to_string())?;
    let lex = load_lexicon(&fixtures().join("emotion-lexicon.tsv")).map_err(|e| e.to_string())?;
    let mut cache = TranslationCache::in_memory();
    let out = score_frequencies(&freq, &dict, &mut cache, &lex, Weighting::Occurrences).map_err(|e| e.to_string())?;
    let d = &out.totals.dominant;
    ensure(d[0] == Category::Positive, format!("dominant {:?}", d[0]))?;
    for c in [Category::Trust, Category::Joy, Category::Anticipation] {
        ensure(d[..4].contains(&c), format!("{c} not in top four {:?}", &d[..4]))?;
    }
    let top: Vec<String> = d[..4].iter().map(|c| format!("{c}={}", out.totals.get(*c))).collect();
    Ok(top.join(", "))
}

fn eigensolver() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let (mut worst_res, mut worst_orth, mut worst_trace) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let mut a = Matrix::zeros(6, 6);
        for i in 0..6 {
            for j in i..6 {
                let v = rng.gen_range(-10.0..10.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let eig = eigen_sym(&a).map_err(|e| e.to_string())?;
        let bound = 1e-8 * a.norm_inf().max(1.0);
        for k in 0..6 {
            let v = eig.vector(k);
            let av = a.mat_vec(&v);
            let res = av.iter().zip(&v).map(|(x, y)| (x - eig.values[k] * y).abs()).fold(0.0, f64::max);
            ensure(res <= bound, format!("residual {res:e} > {bound:e}"))?;
            worst_res = worst_res.max(res / bound);
        }
        let orth = eig.vectors.transpose().matmul(&eig.vectors).max_abs_diff(&Matrix::identity(6));
        ensure(orth <= 1e-10, format!("orthonormality {orth:e}"))?;
        let tr = (eig.values.iter().sum::<f64>() - a.trace()).abs();
        ensure(tr <= 1e-8, format!("trace gap {tr:e}"))?;
        ensure(eig.values.windows(2).all(|w| w[0] >= w[1]), "values not descending")?;
        worst_orth = worst_orth.max(orth);
        worst_trace = worst_trace.max(tr);
    }
    for _ in 0..100 {
        let (a, b, c): (f64, f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let eig = eigen_sym(&Matrix::from_rows(&[[a, b], [b, c]])).map_err(|e| e.to_string())?;
        let mid = (a + c) / 2.0;
        let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        let gap = (eig.values[0] - (mid + rad)).abs().max((eig.values[1] - (mid - rad)).abs());
        ensure(gap <= 1e-10, format!("2x2 closed form off by {gap:e}"))?;
    }
    Ok(format!(
        "residual/bound {worst_res:.1e}, orthonormality {worst_orth:.1e}, trace {worst_trace:.1e}"
    ))
}

fn pca_properties() -> Check {
    let ds = dataset();
    let r = run_pca(&ds).map_err(|e| e.to_string())?;
    let orth = r.loadings.transpose().matmul(&r.loadings).max_abs_diff(&Matrix::identity(6));
    ensure(orth <= 1e-8, format!("orthonormality {orth:e}"))?;
    let ratio = (r.explained_ratio.iter().sum::<f64>() - 1.0).abs();
    ensure(ratio <= 1e-10, format!("explained ratio sum off by {ratio:e}"))?;
    let z = standardize(&feature_matrix(&ds), &FEATURE_NAMES).map_err(|e| e.to_string())?;
    let recon = r.reconstruct_standardized().max_abs_diff(&z);
    ensure(recon <= 1e-8, format!("reconstruction error {recon:e}"))?;

    let perm = [9, 3, 0, 7, 1, 8, 2, 6, 4, 5];
    let shuffled = Dataset::new(perm.iter().map(|&i| ds.profiles()[i].clone()).collect(), vec![]).map_err(|e| e.to_string())?;
    let rp = run_pca(&shuffled).map_err(|e| e.to_string())?;
    let dl = rp.loadings.max_abs_diff(&r.loadings);
    let ds_ = rp.scores.max_abs_diff(&r.scores.select_rows(&perm));
    ensure(dl <= 1e-10 && ds_ <= 1e-9, format!("permutation: loadings {dl:e}, scores {ds_:e}"))?;

    let mut again = r.loadings.clone();
    canonicalize_signs(&mut again);
    ensure(again == r.loadings, "canonicalization not idempotent")?;
    let mut flipped = r.loadings.clone();
    for i in 0..6 {
        for j in [0, 2, 5] {
            flipped[(i, j)] = -flipped[(i, j)];
        }
    }
    canonicalize_signs(&mut flipped);
    ensure(flipped == r.loadings, "flipped columns canonicalize differently")?;
    Ok(format!("orthonormality {orth:.1e}, ratio sum {ratio:.1e}, reconstruction {recon:.1e}"))
}

fn format_means() -> Check {
    let m = enthusiasm_by_format(&dataset());
    let (v, i) = (m[&CampaignFormat::Video], m[&CampaignFormat::Image]);
    ensure(v > i, format!("Video {v} <= Image {i}"))?;
    Ok(format!("Video {v:.4} > Image {i:.4}"))
}

fn write_config(dir: &Path, endpoint: &str) -> PathBuf {
    let f = fixtures().canonicalize().unwrap();
    let cfg = dir.join("kolan.conf");
    fs::write(
        &cfg,
        format!(
            "profiles = {p}\ncorpora = {c}\nlexicon = {l}\ndictionary = {d}\nprovider = dictionary\nendpoint = {endpoint}\nk = 3\nseed = 7\n",
            p = f.join("profiles.csv").display(),
            c = f.join("corpora.json").display(),
            l = f.join("emotion-lexicon.tsv").display(),
            d = f.join("dictionary.id-en.tsv").display(),
        ),
    )
    .unwrap();
    cfg
}

fn determinism() -> Check {
    let listener = TcpListener::bind("127.0.0.1:0").map_err(|e| e.to_string())?;
    listener.set_nonblocking(true).map_err(|e| e.to_string())?;
    let endpoint = format!("http://{}/translate", listener.local_addr().unwrap());
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = write_config(dir.path(), &endpoint);

    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_kolan"))
            .args(["report", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .env("TRANSLATE_API_KEY", "unused")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), format!("run {run} failed: {}", String::from_utf8_lossy(&status.stderr)))?;
        outputs.push(fs::read(out.join("report.json")).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], "report.json differs between runs")?;
    let connections = std::iter::from_fn(|| listener.accept().ok()).count();
    ensure(connections == 0, format!("{connections} connections reached the endpoint"))?;
    Ok(format!("{} identical bytes, 0 connections", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("loadings table orthonormal within 2e-3", loadings_table),
        ("enthusiasm ratios 1.25 and 0.60", enthusiasm_ratios),
        ("per-word scoring rows", word_scoring),
        ("slang normalization", slang),
        ("top-10 frequency table order", frequency_table),
        ("emotion dominance ordering", dominance),
        ("eigensolver property suite", eigensolver),
        ("PCA properties on fixture", pca_properties),
        ("format aggregation Video > Image", format_means),
        ("deterministic report, no network", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name} [{detail}] ({ms:.1} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why} ({ms:.1} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
