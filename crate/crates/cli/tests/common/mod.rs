#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use chromatika::corpus::ingest_manifest;
use chromatika::lda::{train, HyperParams};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// A small model trained once on the fixture corpus, saved under a temp dir
/// that lives for the whole test binary.
pub fn model_path() -> &'static Path {
    static PATH: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    &PATH
        .get_or_init(|| {
            let dir = tempfile::tempdir().unwrap();
            let corpus = ingest_manifest(&fixtures().join("corpus/manifest.json")).unwrap();
            let hp = HyperParams { k: 6, sweeps: 40, burn_in: 20, seed: 3, ..Default::default() };
            let model = train(&corpus, &hp).unwrap();
            let path = dir.path().join("model.json");
            model.save(&path).unwrap();
            (dir, path)
        })
        .1
}

pub fn pool_path() -> PathBuf {
    fixtures().join("pool.json")
}
