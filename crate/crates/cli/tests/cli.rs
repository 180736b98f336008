mod common;

use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;

use chromatika::click::{load_trials, relevance, AggregateOptions, RelevanceReport, SpreadDivisor};
use chromatika_cli::args::{Cli, Command as Sub};
use chromatika_cli::commands::hyperparams;
use chromatika_cli::output::json_value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chromatika"));
    c.env_remove("CHROMATIKA_MODEL").env("RUST_LOG", "error");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn default_config_uses_published_hyperparameters() {
    let cli =
        Cli::try_parse_from(["chromatika", "train", "--corpus", "c.json", "--out", "m.json", "--config", "default"])
            .unwrap();
    let Sub::Train(args) = cli.command else { panic!() };
    let hp = hyperparams(&args).unwrap();
    assert_eq!((hp.k, hp.alpha, hp.beta, hp.gamma), (12, 0.8, 0.1, 0.1));

    let cli = Cli::try_parse_from(["chromatika", "train", "--corpus", "c", "--out", "m", "-k", "4", "--alpha", "0.2"])
        .unwrap();
    let Sub::Train(args) = cli.command else { panic!() };
    let hp = hyperparams(&args).unwrap();
    assert_eq!((hp.k, hp.alpha, hp.beta), (4, 0.2, 0.1));
}

#[test]
fn config_file_is_read_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hp.json");
    std::fs::write(&cfg, r#"{"k": 5, "alpha": 0.3, "sweeps": 7, "burn_in": 3}"#).unwrap();
    let cli = Cli::try_parse_from([
        "chromatika",
        "train",
        "--corpus",
        "c",
        "--out",
        "m",
        "--config",
        p(&cfg),
        "--sweeps",
        "9",
    ])
    .unwrap();
    let Sub::Train(args) = cli.command else { panic!() };
    let hp = hyperparams(&args).unwrap();
    assert_eq!((hp.k, hp.alpha, hp.gamma, hp.sweeps), (5, 0.3, 0.1, 9));
}

#[test]
fn survey_simulate_is_byte_identical_per_seed() {
    let a = ok(&["survey-simulate", "--seed", "7", "--trials-per-palette", "50"]);
    let b = ok(&["survey-simulate", "--seed", "7", "--trials-per-palette", "50"]);
    assert_eq!(a, b);
    assert!(a.starts_with(
        b"set_id,palette,cloud_pos1,cloud_pos2,cloud_pos3,sel1,sel2,sel3,sel_none,gender,country,designer,age\n"
    ));
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 1 + 12 * 50);
    assert_ne!(a, ok(&["survey-simulate", "--seed", "8", "--trials-per-palette", "50"]));
}

#[test]
fn survey_analyze_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("t.csv");
    ok(&["survey-simulate", "-k", "5", "--seed", "3", "--trials-per-palette", "400", "--out", p(&trials)]);
    let ts = load_trials(&trials).unwrap();

    let exact: RelevanceReport =
        serde_json::from_slice(&ok(&["survey-analyze", "--trials", p(&trials), "-k", "5", "--exact"])).unwrap();
    let lib = RelevanceReport::new(&relevance(&ts, 5).unwrap(), AggregateOptions::default()).unwrap();
    assert_eq!(exact, lib);

    let rounded: serde_json::Value =
        serde_json::from_slice(&ok(&["survey-analyze", "--trials", p(&trials), "-k", "5"])).unwrap();
    assert_eq!(rounded, json_value(&lib, false).unwrap());

    let sample: RelevanceReport = serde_json::from_slice(&ok(&[
        "survey-analyze",
        "--trials",
        p(&trials),
        "-k",
        "5",
        "--exact",
        "--divisor",
        "sample",
    ]))
    .unwrap();
    assert_eq!(sample.options.divisor, SpreadDivisor::Sample);
    assert_ne!(sample.separation, lib.separation);
}

#[test]
fn survey_analyze_filters_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("t.csv");
    let csv = dir.path().join("r.csv");
    ok(&["survey-simulate", "-k", "4", "--seed", "1", "--trials-per-palette", "30", "--out", p(&trials)]);
    ok(&[
        "survey-analyze",
        "--trials",
        p(&trials),
        "-k",
        "4",
        "--csv",
        p(&csv),
        "--out",
        p(&dir.path().join("r.json")),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("palette,m_i,r_0,r_1,r_2,r_3,dominance,separation\n"));
    assert_eq!(text.lines().count(), 6);

    let by_set: serde_json::Value =
        serde_json::from_slice(&ok(&["survey-analyze", "--trials", p(&trials), "-k", "4", "--by-set"])).unwrap();
    assert!(by_set.get("1").is_some());

    let out = run(&["survey-analyze", "--trials", p(&trials), "-k", "4", "--where", "gender=female"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gender=female"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["query", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["ingest", "--manifest", "/nonexistent/m.json", "--out", "/tmp/x.json"]).status.code(), Some(1));
    let model = common::model_path();
    let pool = common::pool_path();
    let out = run(&["query", "--model", p(model), "--pool", p(&pool), "--text", "the of"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dropped"));
}

#[test]
fn model_path_from_environment() {
    let out = bin()
        .env("CHROMATIKA_MODEL", common::model_path())
        .args(["palettes", "--pool", p(&common::pool_path()), "--topic", "1", "-n", "3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["topic"], 1);
    assert_eq!(v[0]["palettes"].as_array().unwrap().len(), 3);
}

#[test]
fn image_commands() {
    let dir = tempfile::tempdir().unwrap();
    let model = common::model_path();
    let input = common::fixtures().join("corpus/images/ocean-1.png");
    let out = dir.path().join("sel.png");
    let mask = dir.path().join("mask.png");
    ok(&[
        "select-pixels",
        "--model",
        p(model),
        "--text",
        "ocean",
        "--image",
        p(&input),
        "--out",
        p(&out),
        "--threshold",
        "0",
        "--mask",
        p(&mask),
    ]);
    let a = image::open(&out).unwrap().to_rgb8();
    assert_eq!(a, image::open(&input).unwrap().to_rgb8());
    assert!(image::open(&mask).unwrap().to_luma8().pixels().all(|p| p.0[0] == 255));

    let recolored = dir.path().join("rec.png");
    let pattern = common::fixtures().join("pattern.png");
    let summary: serde_json::Value = serde_json::from_slice(&ok(&[
        "recolor",
        "--model",
        p(model),
        "--pool",
        p(&common::pool_path()),
        "--text",
        "winter snow",
        "--image",
        p(&pattern),
        "--out",
        p(&recolored),
    ]))
    .unwrap();
    let palette: Vec<[u8; 3]> = serde_json::from_value(summary["palette"].clone()).unwrap();
    let img = image::open(&recolored).unwrap().to_rgb8();
    assert!(img.pixels().all(|px| palette.contains(&px.0)));

    let ranked: serde_json::Value = serde_json::from_slice(&ok(&[
        "rerank",
        "--model",
        p(model),
        "--text",
        "winter snow",
        p(&common::fixtures().join("corpus/images/night-1.png")),
        p(&common::fixtures().join("corpus/images/winter-2.png")),
    ]))
    .unwrap();
    assert_eq!(ranked.as_array().unwrap().len(), 2);
}

#[test]
fn generate_writes_planted_truth() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("synthetic.json");
    let truth = dir.path().join("truth.json");
    ok(&["generate", "--out", p(&corpus), "--truth-out", p(&truth), "--docs", "20", "--tokens", "30", "--seed", "4"]);
    let c = chromatika::corpus::Corpus::load(&corpus).unwrap();
    assert_eq!(c.documents.len(), 20);
    let t: serde_json::Value = serde_json::from_slice(&std::fs::read(&truth).unwrap()).unwrap();
    assert_eq!(t["phi"].as_array().unwrap().len(), 3);
}

#[test]
fn ingest_train_palettes_query_pipeline_is_deterministic() {
    let manifest = common::fixtures().join("corpus/manifest.json");
    let pool = common::pool_path();
    let run_once = |dir: &Path| {
        let corpus = dir.join("corpus.json");
        let model = dir.join("model.json");
        ok(&["ingest", "--manifest", p(&manifest), "--out", p(&corpus)]);
        ok(&[
            "train",
            "--corpus",
            p(&corpus),
            "--out",
            p(&model),
            "-k",
            "4",
            "--sweeps",
            "20",
            "--burn-in",
            "10",
            "--seed",
            "9",
        ]);
        let palettes = ok(&["palettes", "--model", p(&model), "--pool", p(&pool)]);
        let query = ok(&["query", "--model", p(&model), "--pool", p(&pool), "--text", "cozy winter cabin"]);
        let files: Vec<Vec<u8>> = ["corpus.json", "model.json", "model.phi.f64", "model.psi.f64", "model.theta.f64"]
            .iter()
            .map(|f| std::fs::read(dir.join(f)).unwrap())
            .collect();
        (files, palettes, query)
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run_once(a.path()), run_once(b.path()));
}
