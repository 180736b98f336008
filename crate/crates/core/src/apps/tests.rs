use image::{ImageFormat, Rgb, RgbImage};

use super::*;
use crate::color::{nearest_palettes, Palette5};
use crate::corpus::{bin_representative, quantize_color, Vocabulary, TOTAL_BINS};
use crate::error::Error;
use crate::lda::{HyperParams, TrainedModel};
use crate::matrix::Matrix;

const VOCAB: [&str; 4] = ["garden", "night", "ocean", "sun"];

fn model_with_phi(phi: Matrix) -> TrainedModel {
    let psi =
        Matrix::from_rows(&[vec![0.5, 0.1, 0.4, 0.0], vec![0.2, 0.6, 0.2, 0.0], vec![0.1, 0.1, 0.2, 0.6]]).unwrap();
    TrainedModel {
        phi,
        psi,
        theta: Matrix::zeros(0, 3),
        hyperparams: HyperParams { k: 3, ..Default::default() },
        vocabulary: Vocabulary::from_tokens(VOCAB),
        docs: Vec::new(),
        word_topic_weights: vec![1.0 / 3.0; 3],
        color_topic_weights: vec![1.0 / 3.0; 3],
    }
}

/// Three color topics, each peaked on eight bins over a small floor.
fn model() -> TrainedModel {
    let mut rows = Vec::new();
    for start in [0usize, 200, 500] {
        let mut row = vec![1.0; TOTAL_BINS];
        for b in start..start + 8 {
            row[b] = 200.0;
        }
        let s: f64 = row.iter().sum();
        rows.push(row.iter().map(|v| v / s).collect());
    }
    model_with_phi(Matrix::from_rows(&rows).unwrap())
}

fn png(img: &RgbImage) -> Vec<u8> {
    let mut buf = std::io::Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png).unwrap();
    buf.into_inner()
}

#[test]
fn vocabulary_is_sorted_like_the_fixture() {
    let m = model();
    for (i, w) in VOCAB.iter().enumerate() {
        assert_eq!(m.vocabulary.get(w), Some(i as u32));
    }
}

#[test]
fn single_exclusive_token_is_one_hot() {
    let q = query_to_topic_weights("sun", &model()).unwrap();
    assert_eq!(q.weights, vec![0.0, 0.0, 1.0]);
    assert_eq!(q.tokens, vec![3]);
}

#[test]
fn column_sum_oracle() {
    let q = query_to_topic_weights("Gardens", &model()).unwrap();
    let total = 0.5 + 0.2 + 0.1;
    assert_eq!(q.weights, vec![0.5 / total, 0.2 / total, 0.1 / total]);
}

#[test]
fn duplicated_token_doubles_its_summand() {
    let m = model();
    let q = query_to_topic_weights("garden night garden", &m).unwrap();
    let raw: Vec<f64> = (0..3).map(|k| 2.0 * m.psi.get(k, 0) + m.psi.get(k, 1)).collect();
    let s: f64 = raw.iter().sum();
    for k in 0..3 {
        assert!((q.weights[k] - raw[k] / s).abs() < 1e-15);
    }
    assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn query_errors_list_dropped_words() {
    match query_to_topic_weights("the xyzzy", &model()) {
        Err(Error::Query { dropped }) => assert_eq!(dropped, vec!["the", "xyzzy"]),
        other => panic!("{other:?}"),
    }
    let q = query_to_topic_weights("ocean xyzzy", &model()).unwrap();
    assert_eq!(q.dropped, vec!["xyzzy"]);
}

#[test]
fn multiplicative_scoring() {
    let m = model();
    let single = query_to_topic_weights_with("ocean", &m, QueryScoring::Multiplicative).unwrap();
    let add = query_to_topic_weights("ocean", &m).unwrap();
    for k in 0..3 {
        assert!((single.weights[k] - add.weights[k]).abs() < 1e-12);
    }
    let q = query_to_topic_weights_with("garden ocean", &m, QueryScoring::Multiplicative).unwrap();
    let prod: Vec<f64> = (0..3).map(|k| m.psi.get(k, 0) * m.psi.get(k, 2)).collect();
    let s: f64 = prod.iter().sum();
    for k in 0..3 {
        assert!((q.weights[k] - prod[k] / s).abs() < 1e-12);
    }
    // "sun" has zero mass in topics 0 and 1
    let q = query_to_topic_weights_with("sun garden", &m, QueryScoring::Multiplicative).unwrap();
    assert_eq!(q.weights, vec![0.0, 0.0, 1.0]);
}

fn pool() -> Vec<Palette5> {
    let mut pool = Vec::new();
    for start in [0usize, 100, 200, 300, 400, 500, 7, 203] {
        pool.push(Palette5::new(std::array::from_fn(|i| bin_representative((start + 2 * i) % TOTAL_BINS).unwrap())));
    }
    pool.push(Palette5::new([[250, 250, 250], [10, 10, 10], [128, 0, 0], [0, 128, 0], [0, 0, 128]]));
    pool
}

#[test]
fn one_hot_query_reduces_to_topic_ranking() {
    let m = model();
    let rec = recommend_palettes("sun", &m, &pool(), 5).unwrap();
    let direct = nearest_palettes(&topic_histogram(&m, 2).unwrap(), &pool(), 5).unwrap();
    assert_eq!(rec.palettes, direct);
}

#[test]
fn recommendation_matches_full_recomputation() {
    let m = model();
    let p = pool();
    let rec = recommend_palettes("garden ocean", &m, &p, p.len()).unwrap();
    let q = &rec.query.weights;
    let mut h = vec![0.0; TOTAL_BINS];
    for c in 0..TOTAL_BINS {
        h[c] = (0..3).map(|k| q[k] * m.phi.get(k, c)).sum();
    }
    let hist = crate::color::WeightedColorHistogram::normalized(&h).unwrap();
    let mut scores: Vec<(f64, usize)> =
        p.iter().enumerate().map(|(i, pal)| (crate::color::wed_distance(&hist, pal).unwrap(), i)).collect();
    scores.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let got: Vec<usize> = rec.palettes.iter().map(|r| r.index).collect();
    assert_eq!(got, scores.iter().map(|s| s.1).collect::<Vec<_>>());
    for (r, s) in rec.palettes.iter().zip(&scores) {
        assert!((r.score - s.0).abs() <= 1e-9 * s.0.max(1.0));
    }
    assert!(recommend_palettes("garden", &m, &[], 1).is_err());
}

fn two_tone(a: [u8; 3], b: [u8; 3], split: u32) -> RgbImage {
    RgbImage::from_fn(300, 200, |x, _| if x < split { Rgb(a) } else { Rgb(b) })
}

#[test]
fn rerank_orders_by_l1_distance() {
    let target = two_tone([16, 16, 16], [48, 16, 16], 120);
    let counts = crate::corpus::image_histogram(&target).unwrap();
    let mut phi_rows = vec![counts.iter().map(|&c| c as f64 / 60000.0).collect::<Vec<f64>>()];
    phi_rows.push(vec![1.0 / TOTAL_BINS as f64; TOTAL_BINS]);
    phi_rows.push(vec![1.0 / TOTAL_BINS as f64; TOTAL_BINS]);
    // "sun" is exclusive to topic 2; swap rows so it picks the target histogram
    phi_rows.swap(0, 2);
    let m = model_with_phi(Matrix::from_rows(&phi_rows).unwrap());

    let other = two_tone([16, 16, 16], [240, 240, 240], 150);
    let far = two_tone([240, 16, 16], [16, 240, 16], 150);
    let images = vec![
        NamedImage { name: "far".into(), bytes: png(&far) },
        NamedImage { name: "target".into(), bytes: png(&target) },
        NamedImage { name: "broken".into(), bytes: b"not an image".to_vec() },
        NamedImage { name: "other".into(), bytes: png(&other) },
        NamedImage { name: "target-copy".into(), bytes: png(&target) },
    ];
    let ranked = rerank_images("sun", &images, &m).unwrap();
    let names: Vec<&str> = ranked.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, vec!["target", "target-copy", "other", "far"]);
    assert_eq!(ranked[0].score, 0.0);
    // hand L1: `other` shares 120/300 of the target's dark bin mass as 150/300
    assert!((ranked[2].score - (0.1 + 0.6 + 0.5)).abs() < 1e-12);
    assert!((ranked[3].score - 2.0).abs() < 1e-12);
    assert!(rerank_images("sun", &[], &m).is_err());
}

fn test_image() -> RgbImage {
    RgbImage::from_fn(64, 40, |x, y| {
        let b = ((x * 7 + y * 13) % TOTAL_BINS as u32) as usize;
        let rep = bin_representative([0, 3, 201, 205, 333, 502, b][(x as usize + y as usize) % 7]).unwrap();
        Rgb([rep[0].wrapping_add((x % 5) as u8), rep[1], rep[2]])
    })
}

#[test]
fn select_pixels_extremes() {
    let m = model();
    let img = test_image();
    let all = select_pixels(&img, "night", &m, 0.0).unwrap();
    assert_eq!(all.image, img);
    assert!(all.mask.pixels().all(|p| p.0[0] == 255));
    let none = select_pixels(&img, "night", &m, 1.5).unwrap();
    assert!(none.image.pixels().all(|p| p.0[0] == p.0[1] && p.0[1] == p.0[2]));
    assert!(none.mask.pixels().all(|p| p.0[0] == 0));
}

#[test]
fn selection_matches_independent_scores() {
    let m = model();
    let img = test_image();
    let q = query_to_topic_weights("night ocean", &m).unwrap();
    let sel = select_pixels(&img, "night ocean", &m, 0.5).unwrap();
    let raw: Vec<f64> = (0..TOTAL_BINS)
        .map(|c| {
            let num: f64 = (0..3).map(|k| q.weights[k] * m.phi.get(k, c)).sum();
            let base: f64 = (0..3).map(|k| m.phi.get(k, c)).sum::<f64>() / 3.0;
            num / base
        })
        .collect();
    let max = raw.iter().copied().fold(0.0, f64::max);
    let mut kept = 0;
    for (x, y, p) in img.enumerate_pixels() {
        let keep = raw[quantize_color(p.0)] / max >= 0.5;
        assert_eq!(sel.mask.get_pixel(x, y).0[0] == 255, keep);
        let out = sel.image.get_pixel(x, y).0;
        if keep {
            kept += 1;
            assert_eq!(out, p.0);
        } else {
            let y = (0.2126 * p.0[0] as f64 + 0.7152 * p.0[1] as f64 + 0.0722 * p.0[2] as f64).round() as u8;
            assert_eq!(out, [y, y, y]);
        }
    }
    assert!(kept > 0 && kept < img.pixels().len());
}

#[test]
fn mask_shrinks_as_threshold_grows() {
    let m = model();
    let img = test_image();
    let mut prev = usize::MAX;
    for t in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 1.1] {
        let sel = select_pixels(&img, "garden", &m, t).unwrap();
        let n = sel.mask.pixels().filter(|p| p.0[0] == 255).count();
        assert!(n <= prev);
        prev = n;
    }
}

#[test]
fn mask_png_round_trip() {
    let sel = select_pixels(&test_image(), "night", &model(), 0.5).unwrap();
    let bytes = encode_mask_png(&sel.mask).unwrap();
    let decoded = image::load_from_memory(&bytes).unwrap().to_luma8();
    assert_eq!(decoded, sel.mask);
}

#[test]
fn luma_weights() {
    assert_eq!(luma([255, 255, 255]), 255);
    assert_eq!(luma([255, 0, 0]), 54);
    assert_eq!(luma([0, 255, 0]), 182);
    assert_eq!(luma([0, 0, 255]), 18);
}

#[test]
fn five_level_card_uses_each_palette_color_in_order() {
    let m = model();
    let p = pool();
    let card = RgbImage::from_fn(100, 20, |x, _| {
        let v = [10u8, 70, 130, 190, 250][(x / 20) as usize];
        Rgb([v, v, v])
    });
    let rec = recolor_pattern(&card, "sun", &m, &p).unwrap();
    for (x, _, px) in rec.image.enumerate_pixels() {
        assert_eq!(px.0, rec.palette[(x / 20) as usize]);
    }
    assert_eq!(rec.palette, p[rec.pool_index].sorted_by_lightness());
}

#[test]
fn constant_gray_maps_to_middle_band() {
    let flat = RgbImage::from_pixel(30, 30, Rgb([90, 90, 90]));
    let pal = pool()[8].sorted_by_lightness();
    let out = paint_bands(&flat, &pal);
    assert!(out.pixels().all(|p| p.0 == pal[2]));
}

#[test]
fn recolor_rejects_color_input() {
    let img = RgbImage::from_pixel(4, 4, Rgb([1, 2, 3]));
    assert!(matches!(recolor_pattern(&img, "sun", &model(), &pool()), Err(Error::Input(_))));
}

#[test]
fn bands_follow_sorted_pixel_quantiles() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let n = rng.random_range(1..400);
        let levels: Vec<u8> = (0..n).map(|_| rng.random_range(0..40u8) * 6).collect();
        let bands = luminance_bands(&levels);
        let mut sorted = levels.clone();
        sorted.sort_unstable();
        for &v in &levels {
            let first = sorted.iter().position(|&s| s == v).unwrap();
            let last = sorted.iter().rposition(|&s| s == v).unwrap();
            // mean rank position of the run of v, as a fraction of n
            let mid = (first + last + 1) as f64 / 2.0 / n as f64;
            assert_eq!(bands[v as usize], ((5.0 * mid).floor() as usize).min(4), "level {v} n {n}");
        }
        // bands are non-decreasing in level
        assert!(bands.windows(2).all(|w| w[0] <= w[1]));
    }
}
