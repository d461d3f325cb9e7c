#![allow(dead_code)]

use std::path::PathBuf;

use kolan_core::model::{load_dataset, Dataset};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_dataset() -> Dataset {
    let dir = fixtures();
    load_dataset(&dir.join("profiles.csv"), Some(&dir.join("corpora.json"))).expect("fixture loads")
}
