use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use image::RgbImage;
use log::info;
use serde::Serialize;

use chromatika::apps::{self, NamedImage};
use chromatika::click::{self, AggregateOptions, RelevanceReport, Respondent, SurveyTrial};
use chromatika::color::{extract_palette, Palette5, PalettePool, PoolEntry};
use chromatika::corpus::{self, generate_synthetic_corpus, Corpus, Manifest, SyntheticConfig};
use chromatika::lda::{self, HyperParams, TrainedModel};
use chromatika::Matrix;

use crate::args::*;
use crate::output::to_json_string;
use crate::views;
use crate::UsageError;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Train(a) => train(a),
        Command::Generate(a) => generate(a),
        Command::Pool(a) => pool(a),
        Command::Palettes(a) => palettes(a),
        Command::Query(a) => query(a),
        Command::Rerank(a) => rerank(a),
        Command::SelectPixels(a) => select_pixels(a),
        Command::Recolor(a) => recolor(a),
        Command::SurveyAnalyze(a) => survey_analyze(a),
        Command::SurveySimulate(a) => survey_simulate(a),
        Command::Serve(a) => crate::server::run_blocking(crate::server::ServiceConfig {
            model: a.model.model,
            pool: a.pool,
            bind: a.bind,
            port: a.port,
        }),
    }
}

fn print_json<T: Serialize>(data: &T, exact: bool) -> Result<()> {
    let s = to_json_string(data, exact)?;
    std::io::stdout().lock().write_all(s.as_bytes())?;
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| chromatika::Error::Io { path: path.to_path_buf(), source: e })?;
    Ok(())
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    Ok(fs::read(path).map_err(|e| chromatika::Error::Io { path: path.to_path_buf(), source: e })?)
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    Ok(TrainedModel::load(path)?)
}

pub fn load_pool(path: &Path) -> Result<Vec<Palette5>> {
    let pool = PalettePool::load(path)?;
    if pool.is_empty() {
        return Err(UsageError(format!("palette pool {} is empty", path.display())).into());
    }
    Ok(pool.palettes())
}

fn load_image(path: &Path) -> Result<RgbImage> {
    corpus::decode_image(&read_file(path)?).with_context(|| path.display().to_string())
}

fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    let mut buf = std::io::Cursor::new(Vec::new());
    img.write_to(&mut buf, image::ImageFormat::Png)?;
    write_file(path, &buf.into_inner())
}

fn ingest(a: IngestArgs) -> Result<()> {
    let corpus = corpus::ingest_manifest(&a.manifest)?;
    corpus.save(&a.out)?;
    info!(
        "{} documents, {} excluded, {} words in vocabulary",
        corpus.documents.len(),
        corpus.excluded.len(),
        corpus.num_words()
    );
    Ok(())
}

pub fn hyperparams(a: &TrainArgs) -> Result<HyperParams> {
    let mut hp = if a.config == "default" {
        HyperParams::default()
    } else {
        let text = read_file(Path::new(&a.config))?;
        serde_json::from_slice(&text).map_err(|e| UsageError(format!("{}: {e}", a.config)))?
    };
    if let Some(k) = a.k {
        hp.k = k;
    }
    if let Some(v) = a.alpha {
        hp.alpha = v;
    }
    if let Some(v) = a.beta {
        hp.beta = v;
    }
    if let Some(v) = a.gamma {
        hp.gamma = v;
    }
    if let Some(v) = a.sweeps {
        hp.sweeps = v;
    }
    if let Some(v) = a.burn_in {
        hp.burn_in = v;
    }
    if let Some(v) = a.seed {
        hp.seed = v;
    }
    if let Some(v) = a.estimate {
        hp.estimate = v.into();
    }
    hp.validate()?;
    Ok(hp)
}

fn train(a: TrainArgs) -> Result<()> {
    let hp = hyperparams(&a)?;
    let corpus = Corpus::load(&a.corpus)?;
    info!(
        "training K={} on {} documents for {} sweeps (burn-in {})",
        hp.k,
        corpus.documents.len(),
        hp.sweeps,
        hp.burn_in
    );
    let model = lda::train(&corpus, &hp)?;
    model.save(&a.out)?;
    Ok(())
}

#[derive(Serialize)]
struct Truth<'a> {
    phi: Vec<Vec<f64>>,
    psi: Vec<Vec<f64>>,
    theta: Vec<Vec<f64>>,
    config: &'a SyntheticConfig,
}

fn generate(a: GenerateArgs) -> Result<()> {
    let cfg = SyntheticConfig {
        k: a.k,
        num_words: a.words,
        num_colors: a.colors,
        num_docs: a.docs,
        tokens_per_doc: a.tokens,
        sharpness: a.sharpness,
        alpha: a.alpha,
        seed: a.seed,
    };
    let synth = generate_synthetic_corpus(&cfg)?;
    synth.corpus.save(&a.out)?;
    if let Some(path) = &a.truth_out {
        let truth =
            Truth { phi: synth.phi.to_rows(), psi: synth.psi.to_rows(), theta: synth.theta.to_rows(), config: &cfg };
        write_file(path, to_json_string(&truth, true)?.as_bytes())?;
    }
    Ok(())
}

fn pool(a: PoolArgs) -> Result<()> {
    let manifest = Manifest::load(&a.manifest)?;
    let base = a.manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut pool = PalettePool::default();
    for entry in &manifest.entries {
        let Some(image) = &entry.image else {
            log::warn!("`{}` has no image; skipped", entry.id);
            continue;
        };
        let img = load_image(&base.join(image))?;
        let ex = extract_palette(&img, a.seed)?;
        pool.entries.push(PoolEntry { colors: ex.palette, source: Some(entry.id.clone()) });
    }
    if pool.is_empty() {
        return Err(UsageError("manifest has no images to extract palettes from".into()).into());
    }
    pool.save(&a.out)?;
    info!("{} palettes written", pool.len());
    Ok(())
}

fn palettes(a: PalettesArgs) -> Result<()> {
    let model = load_model(&a.model.model)?;
    let pool = load_pool(&a.pool)?;
    let topics: Vec<usize> = match a.topic {
        Some(t) => vec![t],
        None => (0..model.num_topics()).collect(),
    };
    let views = topics
        .into_iter()
        .map(|t| views::topic_palettes(&model, &pool, t, a.n, a.wed.into()))
        .collect::<chromatika::Result<Vec<_>>>()?;
    print_json(&views, a.json.exact)
}

fn query(a: QueryArgs) -> Result<()> {
    let model = load_model(&a.model.model)?;
    let pool = load_pool(&a.pool)?;
    let n = a.n.min(pool.len());
    let rec = apps::recommend_palettes_with(&a.text, &model, &pool, n, a.scoring.into(), a.wed.into())?;
    print_json(&views::query_view(&model, &rec, &pool), a.json.exact)
}

fn rerank(a: RerankArgs) -> Result<()> {
    let model = load_model(&a.model.model)?;
    let images = a
        .images
        .iter()
        .map(|p| Ok(NamedImage { name: p.display().to_string(), bytes: read_file(p)? }))
        .collect::<Result<Vec<_>>>()?;
    let ranked = apps::rerank_images(&a.text, &images, &model)?;
    print_json(&ranked, a.json.exact)
}

fn select_pixels(a: SelectPixelsArgs) -> Result<()> {
    let model = load_model(&a.model.model)?;
    let img = load_image(&a.image)?;
    let sel = apps::select_pixels(&img, &a.text, &model, a.threshold)?;
    save_png(&sel.image, &a.out)?;
    if let Some(mask) = &a.mask {
        write_file(mask, &apps::encode_mask_png(&sel.mask)?)?;
    }
    let kept = sel.mask.pixels().filter(|p| p.0[0] != 0).count();
    info!("kept {kept} of {} pixels", sel.mask.pixels().len());
    Ok(())
}

#[derive(Serialize)]
struct RecolorSummary {
    pool_index: usize,
    palette: [[u8; 3]; 5],
    weights: Vec<f64>,
}

fn recolor(a: RecolorArgs) -> Result<()> {
    let model = load_model(&a.model.model)?;
    let pool = load_pool(&a.pool)?;
    let img = load_image(&a.image)?;
    let rec = apps::recolor_pattern(&img, &a.text, &model, &pool)?;
    save_png(&rec.image, &a.out)?;
    print_json(&RecolorSummary { pool_index: rec.pool_index, palette: rec.palette, weights: rec.query.weights }, false)
}

type TrialFilter = Box<dyn Fn(&SurveyTrial) -> bool>;

fn parse_filter(spec: &str) -> Result<TrialFilter> {
    let (field, value) =
        spec.split_once('=').ok_or_else(|| UsageError(format!("filter `{spec}` is not FIELD=VALUE")))?;
    let value = value.trim().to_string();
    let bad = || UsageError(format!("bad value in filter `{spec}`"));
    Ok(match field.trim() {
        "gender" => Box::new(move |t| t.respondent.gender.eq_ignore_ascii_case(&value)),
        "country" => Box::new(move |t| t.respondent.country.eq_ignore_ascii_case(&value)),
        "designer" => {
            let want = match value.as_str() {
                "1" | "true" | "yes" => true,
                "0" | "false" | "no" => false,
                _ => return Err(bad().into()),
            };
            Box::new(move |t| t.respondent.designer == want)
        }
        "age" => {
            let (lo, hi) = value.split_once('-').unwrap_or((&value, &value));
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            Box::new(move |t| t.respondent.age.is_some_and(|a| (lo..=hi).contains(&a)))
        }
        "set" => {
            let set: u8 = value.parse().map_err(|_| bad())?;
            Box::new(move |t| t.set_id == set)
        }
        other => return Err(UsageError(format!("unknown filter field `{other}`")).into()),
    })
}

/// The JSON document `survey-analyze` prints for these arguments.
pub fn analyze_trials(trials: &[SurveyTrial], a: &SurveyAnalyzeArgs) -> Result<serde_json::Value> {
    let filters = a.filters.iter().map(|f| parse_filter(f)).collect::<Result<Vec<_>>>()?;
    let selected: Vec<SurveyTrial> = if filters.is_empty() {
        trials.to_vec()
    } else {
        let name = a.filters.join(" & ");
        let subset: Vec<SurveyTrial> = trials.iter().filter(|t| filters.iter().all(|f| f(t))).cloned().collect();
        if subset.is_empty() {
            return Err(chromatika::Error::EmptySubgroup(name).into());
        }
        subset
    };
    let opts = AggregateOptions { divisor: a.divisor(), summary: a.summary() };
    let value = if a.by_set {
        let mut reports = std::collections::BTreeMap::new();
        for (set, m) in click::relevance_by_set(&selected, a.k)? {
            reports.insert(set.to_string(), RelevanceReport::new(&m, opts)?);
        }
        if let Some(path) = &a.csv {
            let mut out = String::new();
            for (set, r) in &reports {
                out.push_str(&format!("# set {set}\n"));
                out.push_str(&r.to_csv());
            }
            write_file(path, out.as_bytes())?;
        }
        crate::output::json_value(&reports, a.json.exact)?
    } else {
        let report = RelevanceReport::new(&click::relevance(&selected, a.k)?, opts)?;
        if let Some(path) = &a.csv {
            write_file(path, report.to_csv().as_bytes())?;
        }
        crate::output::json_value(&report, a.json.exact)?
    };
    Ok(value)
}

fn survey_analyze(a: SurveyAnalyzeArgs) -> Result<()> {
    let trials = click::load_trials(&a.trials)?;
    let value = analyze_trials(&trials, &a)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    match &a.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn survey_simulate(a: SurveySimulateArgs) -> Result<()> {
    let r = match &a.relevance {
        Some(path) => {
            let rows: Vec<Vec<f64>> = serde_json::from_slice(&read_file(path)?)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            Matrix::from_rows(&rows)?
        }
        None => click::random_relevance(a.k, 0.9, a.seed),
    };
    if r.rows() != a.k {
        return Err(UsageError(format!("relevance is {}×{} but K={}", r.rows(), r.cols(), a.k)).into());
    }
    let bias: [f64; 3] = a.bias.as_slice().try_into().map_err(|_| UsageError("--bias takes three values".into()))?;
    let trials =
        click::simulate_survey_with(&r, &bias, a.trials_per_palette, a.seed, a.set_id, &Respondent::default())?;
    let mut buf = Vec::new();
    click::write_trials(&mut buf, &trials)?;
    match &a.out {
        Some(path) => write_file(path, &buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    if let Some(path) = &a.truth_out {
        write_file(path, to_json_string(&r.to_rows(), true)?.as_bytes())?;
    }
    Ok(())
}
