//! The fixed 512-bin sRGB color basis.
//!
//! Bins are laid out r-major: `index = r_bin * 64 + g_bin * 8 + b_bin`, where
//! each channel is split into 8 bins of width 32. This layout is part of the
//! on-disk histogram format and must not change.

use image::RgbImage;

use crate::error::{Error, Result};

pub const BINS_PER_CHANNEL: usize = 8;
pub const TOTAL_BINS: usize = BINS_PER_CHANNEL * BINS_PER_CHANNEL * BINS_PER_CHANNEL;
const BIN_WIDTH: usize = 256 / BINS_PER_CHANNEL;

/// Working raster size used before quantization (width, height).
pub const RASTER_WIDTH: u32 = 300;
pub const RASTER_HEIGHT: u32 = 200;
pub const TOKENS_PER_IMAGE: usize = (RASTER_WIDTH * RASTER_HEIGHT) as usize;

/// Zero-sized handle to the color basis; exists so the basis can be passed
/// and serialized alongside a vocabulary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ColorBasis;

impl ColorBasis {
    pub fn bins_per_channel(&self) -> usize {
        BINS_PER_CHANNEL
    }

    pub fn total_bins(&self) -> usize {
        TOTAL_BINS
    }

    pub fn representative(&self, bin: usize) -> Result<[u8; 3]> {
        bin_representative(bin)
    }
}

pub fn quantize_color(rgb: [u8; 3]) -> usize {
    let [r, g, b] = rgb.map(|c| c as usize / BIN_WIDTH);
    r * BINS_PER_CHANNEL * BINS_PER_CHANNEL + g * BINS_PER_CHANNEL + b
}

/// Quantize a color given as wide integers, rejecting channels outside `0..=255`.
pub fn quantize_color_checked(rgb: [i64; 3]) -> Result<usize> {
    let mut out = [0u8; 3];
    for (o, &c) in out.iter_mut().zip(rgb.iter()) {
        *o = u8::try_from(c).map_err(|_| Error::input(format!("color channel {c} outside [0,255]")))?;
    }
    Ok(quantize_color(out))
}

/// Center of a bin: each channel is `32 * coordinate + 16`.
pub fn bin_representative(bin: usize) -> Result<[u8; 3]> {
    if bin >= TOTAL_BINS {
        return Err(Error::input(format!("color bin {bin} outside [0,{TOTAL_BINS})")));
    }
    let n = BINS_PER_CHANNEL;
    let coords = [bin / (n * n), (bin / n) % n, bin % n];
    Ok(coords.map(|c| (c * BIN_WIDTH + BIN_WIDTH / 2) as u8))
}

/// Resize to the working raster with bicubic (Catmull-Rom) interpolation and
/// quantize every pixel. Always returns exactly [`TOKENS_PER_IMAGE`] tokens.
pub fn image_to_color_tokens(image: &RgbImage) -> Result<Vec<usize>> {
    if image.width() == 0 || image.height() == 0 {
        return Err(Error::Decode("empty raster".into()));
    }
    let resized = image::imageops::resize(image, RASTER_WIDTH, RASTER_HEIGHT, image::imageops::FilterType::CatmullRom);
    Ok(resized.pixels().map(|p| quantize_color(p.0)).collect())
}

/// 512-bin count vector of an image after resizing.
pub fn image_histogram(image: &RgbImage) -> Result<Vec<u64>> {
    Ok(tokens_to_counts(&image_to_color_tokens(image)?))
}

pub fn tokens_to_counts(tokens: &[usize]) -> Vec<u64> {
    let mut counts = vec![0u64; TOTAL_BINS];
    for &t in tokens {
        counts[t] += 1;
    }
    counts
}

/// Expand a count vector into sorted bin tokens.
pub fn counts_to_tokens(counts: &[u64]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(bin, &c)| std::iter::repeat_n(bin, c as usize)).collect()
}

pub fn decode_image(bytes: &[u8]) -> Result<RgbImage> {
    let img = image::load_from_memory(bytes).map_err(|e| Error::Decode(e.to_string()))?;
    if img.width() == 0 || img.height() == 0 {
        return Err(Error::Decode("empty raster".into()));
    }
    Ok(img.to_rgb8())
}

/// Parse a histogram CSV: exactly 512 comma-separated non-negative integers.
pub fn parse_histogram_csv(text: &str) -> Result<Vec<u64>> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>().map_err(|_| Error::input(format!("histogram value `{s}` is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.len() != TOTAL_BINS {
        return Err(Error::input(format!("histogram has {} values, expected {TOTAL_BINS}", values.len())));
    }
    Ok(values)
}
