use std::io::Cursor;

use image::{GrayImage, Luma, RgbImage};
use log::warn;
use serde::{Deserialize, Serialize};

use super::query::{blended_histogram, query_to_topic_weights_with, recommend_palettes_with, QueryScoring, TopicQuery};
use crate::color::{Palette5, WedOptions, PALETTE_SIZE};
use crate::corpus::{decode_image, image_histogram, quantize_color, TOKENS_PER_IMAGE};
use crate::error::{Error, Result};
use crate::lda::TrainedModel;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// An encoded image and a caller-chosen label.
#[derive(Debug, Clone)]
pub struct NamedImage {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedImage {
    /// Position in the input list.
    pub index: usize,
    pub name: String,
    pub score: f64,
}

/// L1 distance between each decodable image's normalized histogram and the
/// query's blended color histogram, ascending.
pub fn rerank_images(text: &str, images: &[NamedImage], model: &TrainedModel) -> Result<Vec<RankedImage>> {
    let query = query_to_topic_weights_with(text, model, QueryScoring::default())?;
    rerank_for_query(&query, images, model)
}

pub fn rerank_for_query(query: &TopicQuery, images: &[NamedImage], model: &TrainedModel) -> Result<Vec<RankedImage>> {
    if images.is_empty() {
        return Err(Error::input("no images to rank"));
    }
    let h = blended_histogram(model, &query.weights)?;
    let mut ranked = Vec::with_capacity(images.len());
    for (index, img) in images.iter().enumerate() {
        let counts = match decode_image(&img.bytes).and_then(|im| image_histogram(&im)) {
            Ok(c) => c,
            Err(e) => {
                warn!("skipping image `{}`: {e}", img.name);
                continue;
            }
        };
        let score = counts.iter().zip(h.weights()).map(|(&c, &w)| (c as f64 / TOKENS_PER_IMAGE as f64 - w).abs()).sum();
        ranked.push(RankedImage { index, name: img.name.clone(), score });
    }
    if ranked.is_empty() {
        return Err(Error::input("none of the images could be decoded"));
    }
    ranked.sort_by(|a, b| a.score.total_cmp(&b.score));
    Ok(ranked)
}

/// Per-bin ratio of the query's color mass to the uniform-topic baseline,
/// scaled so the largest is 1.
pub fn pixel_scores(model: &TrainedModel, weights: &[f64]) -> Result<Vec<f64>> {
    let k = model.num_topics();
    if weights.len() != k {
        return Err(Error::input(format!("{} weights for {k} topics", weights.len())));
    }
    let raw: Vec<f64> = (0..model.num_colors())
        .map(|c| {
            let (mut num, mut base) = (0.0, 0.0);
            for (t, &w) in weights.iter().enumerate() {
                let p = model.phi.get(t, c);
                num += w * p;
                base += p / k as f64;
            }
            if base > 0.0 {
                num / base
            } else {
                0.0
            }
        })
        .collect();
    let max = raw.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::Degenerate("query has no color mass".into()));
    }
    Ok(raw.iter().map(|s| s / max).collect())
}

pub fn luma(rgb: [u8; 3]) -> u8 {
    let y = 0.2126 * rgb[0] as f64 + 0.7152 * rgb[1] as f64 + 0.0722 * rgb[2] as f64;
    y.round().min(255.0) as u8
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub image: RgbImage,
    /// 255 where the original color was kept.
    pub mask: GrayImage,
    pub query: TopicQuery,
}

/// Keeps pixels whose bin scores at least `threshold`; turns the rest gray.
pub fn select_pixels(image: &RgbImage, text: &str, model: &TrainedModel, threshold: f64) -> Result<Selection> {
    let query = query_to_topic_weights_with(text, model, QueryScoring::default())?;
    select_pixels_for_query(image, query, model, threshold)
}

pub fn select_pixels_for_query(
    image: &RgbImage,
    query: TopicQuery,
    model: &TrainedModel,
    threshold: f64,
) -> Result<Selection> {
    if threshold.is_nan() {
        return Err(Error::input("threshold is NaN"));
    }
    let scores = pixel_scores(model, &query.weights)?;
    let mut out = image.clone();
    let mut mask = GrayImage::new(image.width(), image.height());
    for ((px, m), orig) in out.pixels_mut().zip(mask.pixels_mut()).zip(image.pixels()) {
        if scores[quantize_color(orig.0)] >= threshold {
            *m = Luma([255]);
        } else {
            let y = luma(orig.0);
            px.0 = [y, y, y];
        }
    }
    Ok(Selection { image: out, mask, query })
}

/// Encodes a mask as a 1-bit grayscale PNG (nonzero → white).
pub fn encode_mask_png(mask: &GrayImage) -> Result<Vec<u8>> {
    let (w, h) = mask.dimensions();
    let stride = (w as usize).div_ceil(8);
    let mut packed = vec![0u8; stride * h as usize];
    for (x, y, p) in mask.enumerate_pixels() {
        if p.0[0] != 0 {
            packed[y as usize * stride + x as usize / 8] |= 0x80 >> (x % 8);
        }
    }
    let mut buf = Vec::new();
    {
        let mut enc = png::Encoder::new(Cursor::new(&mut buf), w, h);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::One);
        let mut writer = enc.write_header().map_err(|e| Error::input(e.to_string()))?;
        writer.write_image_data(&packed).map_err(|e| Error::input(e.to_string()))?;
    }
    Ok(buf)
}

/// Luminance band of every gray level: `floor(5 · midrank / N)`, where the
/// midrank of level `v` is the mean of the fraction of pixels below `v` and
/// the fraction at or below it.
pub fn luminance_bands(levels: &[u8]) -> [usize; 256] {
    let mut hist = [0u64; 256];
    for &v in levels {
        hist[v as usize] += 1;
    }
    let n = levels.len().max(1) as u64;
    let mut bands = [0usize; 256];
    let mut below = 0u64;
    for (v, &c) in hist.iter().enumerate() {
        let through = below + c;
        // integer arithmetic keeps boundaries exact
        bands[v] = ((PALETTE_SIZE as u64 * (below + through)) / (2 * n)).min(PALETTE_SIZE as u64 - 1) as usize;
        below = through;
    }
    bands
}

pub fn is_gray(image: &RgbImage) -> bool {
    image.pixels().all(|p| p.0[0] == p.0[1] && p.0[1] == p.0[2])
}

#[derive(Debug, Clone)]
pub struct Recoloring {
    pub image: RgbImage,
    /// Palette colors darkest first; band `b` is painted with entry `b`.
    pub palette: [[u8; 3]; PALETTE_SIZE],
    pub pool_index: usize,
    pub query: TopicQuery,
}

/// Paints a grayscale pattern with the best-matching palette, one color per
/// equal-mass luminance band.
pub fn recolor_pattern(image: &RgbImage, text: &str, model: &TrainedModel, pool: &[Palette5]) -> Result<Recoloring> {
    if !is_gray(image) {
        return Err(Error::input("recoloring needs a grayscale image (R = G = B everywhere)"));
    }
    let rec = recommend_palettes_with(text, model, pool, 1, QueryScoring::default(), WedOptions::default())?;
    let best = rec.palettes[0].index;
    let palette = pool[best].sorted_by_lightness();
    Ok(Recoloring { image: paint_bands(image, &palette), palette, pool_index: best, query: rec.query })
}

/// Band mapping of a gray image onto a darkest-first palette.
pub fn paint_bands(image: &RgbImage, palette: &[[u8; 3]; PALETTE_SIZE]) -> RgbImage {
    let levels: Vec<u8> = image.pixels().map(|p| p.0[0]).collect();
    let bands = luminance_bands(&levels);
    let mut out = image.clone();
    for p in out.pixels_mut() {
        p.0 = palette[bands[p.0[0] as usize]];
    }
    out
}
