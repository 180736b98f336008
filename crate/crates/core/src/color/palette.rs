//! Five-color palettes, palette pools, and palette extraction from images.

use std::path::Path;

use image::RgbImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lab::{delta_e, lab_to_srgb, srgb_to_lab, Lab};
use crate::error::{Error, Result};

pub const PALETTE_SIZE: usize = 5;

/// An ordered 5-color palette with its L\*a\*b\* forms cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[u8; 3]; 5]", into = "[[u8; 3]; 5]")]
pub struct Palette5 {
    colors: [[u8; 3]; PALETTE_SIZE],
    lab: [Lab; PALETTE_SIZE],
}

impl Palette5 {
    pub fn new(colors: [[u8; 3]; PALETTE_SIZE]) -> Self {
        Self { colors, lab: colors.map(srgb_to_lab) }
    }

    pub fn from_slice(colors: &[[u8; 3]]) -> Result<Self> {
        let arr: [[u8; 3]; PALETTE_SIZE] = colors
            .try_into()
            .map_err(|_| Error::input(format!("palette needs exactly 5 colors, got {}", colors.len())))?;
        Ok(Self::new(arr))
    }

    pub fn colors(&self) -> &[[u8; 3]; PALETTE_SIZE] {
        &self.colors
    }

    pub fn lab(&self) -> &[Lab; PALETTE_SIZE] {
        &self.lab
    }

    /// Colors ordered from darkest to lightest (stable on equal L\*).
    pub fn sorted_by_lightness(&self) -> [[u8; 3]; PALETTE_SIZE] {
        let mut idx: [usize; PALETTE_SIZE] = [0, 1, 2, 3, 4];
        idx.sort_by(|&a, &b| self.lab[a].l.total_cmp(&self.lab[b].l));
        idx.map(|i| self.colors[i])
    }
}

impl From<[[u8; 3]; 5]> for Palette5 {
    fn from(c: [[u8; 3]; 5]) -> Self {
        Self::new(c)
    }
}

impl From<Palette5> for [[u8; 3]; 5] {
    fn from(p: Palette5) -> Self {
        p.colors
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub colors: Palette5,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PoolEntryRepr {
    Bare(Palette5),
    Tagged(PoolEntry),
}

/// Palette pool file: a JSON array whose items are either five `[r,g,b]`
/// triples or `{"colors": [...], "source": "doc-id"}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PalettePool {
    pub entries: Vec<PoolEntry>,
}

impl PalettePool {
    pub fn palettes(&self) -> Vec<Palette5> {
        self.entries.iter().map(|e| e.colors).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<PoolEntryRepr> = serde_json::from_str(text)?;
        Ok(Self {
            entries: raw
                .into_iter()
                .map(|r| match r {
                    PoolEntryRepr::Bare(colors) => PoolEntry { colors, source: None },
                    PoolEntryRepr::Tagged(e) => e,
                })
                .collect(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.entries)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }
}

/// Outcome of [`extract_palette`]; `padded` is set when the image had fewer
/// than five distinct colors and dominant colors were repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub palette: Palette5,
    pub padded: bool,
}

pub const DEFAULT_EXTRACTION_SEED: u64 = 0x5eed;
const MAX_ITERATIONS: usize = 100;

/// Pixel-weighted k-means (k = 5) in L\*a\*b\* with seeded k-means++ init.
/// Centers are ordered by descending cluster mass.
pub fn extract_palette(image: &RgbImage, seed: u64) -> Result<Extraction> {
    if image.width() == 0 || image.height() == 0 {
        return Err(Error::Decode("empty raster".into()));
    }
    let mut counts: std::collections::BTreeMap<[u8; 3], f64> = Default::default();
    for p in image.pixels() {
        *counts.entry(p.0).or_default() += 1.0;
    }
    let mut colors: Vec<([u8; 3], f64)> = counts.into_iter().collect();
    // heaviest first; BTreeMap order breaks ties
    colors.sort_by(|a, b| b.1.total_cmp(&a.1));

    if colors.len() <= PALETTE_SIZE {
        let padded = colors.len() < PALETTE_SIZE;
        if padded {
            log::warn!("image has {} distinct colors; padding palette with dominant colors", colors.len());
        }
        let mut out = Vec::with_capacity(PALETTE_SIZE);
        let mut i = 0;
        while out.len() < PALETTE_SIZE {
            out.push(colors[i % colors.len()].0);
            i += 1;
        }
        return Ok(Extraction { palette: Palette5::from_slice(&out)?, padded });
    }

    let points: Vec<Lab> = colors.iter().map(|(c, _)| srgb_to_lab(*c)).collect();
    let weights: Vec<f64> = colors.iter().map(|(_, w)| *w).collect();
    let mut centers = kmeans_pp_init(&points, &weights, PALETTE_SIZE, seed);
    let mut labels = vec![0usize; points.len()];
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let best = nearest(p, &centers);
            if best != labels[i] {
                labels[i] = best;
                changed = true;
            }
        }
        let mut sums = vec![(0.0, 0.0, 0.0, 0.0); PALETTE_SIZE];
        for ((p, &w), &l) in points.iter().zip(&weights).zip(&labels) {
            let s = &mut sums[l];
            s.0 += w * p.l;
            s.1 += w * p.a;
            s.2 += w * p.b;
            s.3 += w;
        }
        for (c, s) in centers.iter_mut().zip(&sums) {
            if s.3 > 0.0 {
                *c = Lab::new(s.0 / s.3, s.1 / s.3, s.2 / s.3);
            }
        }
        if !changed {
            break;
        }
    }
    let mut mass = [0.0; PALETTE_SIZE];
    for (&l, &w) in labels.iter().zip(&weights) {
        mass[l] += w;
    }
    let mut order: Vec<usize> = (0..PALETTE_SIZE).collect();
    order.sort_by(|&a, &b| mass[b].total_cmp(&mass[a]).then(a.cmp(&b)));
    let out: Vec<[u8; 3]> = order.iter().map(|&i| lab_to_srgb(centers[i])).collect();
    Ok(Extraction { palette: Palette5::from_slice(&out)?, padded: false })
}

fn nearest(p: &Lab, centers: &[Lab]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centers.iter().enumerate() {
        let d = delta_e(p, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

fn kmeans_pp_init(points: &[Lab], weights: &[f64], k: usize, seed: u64) -> Vec<Lab> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng, w: &[f64]| -> usize {
        let total: f64 = w.iter().sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        for (i, &x) in w.iter().enumerate() {
            acc += x;
            if target < acc {
                return i;
            }
        }
        w.iter().rposition(|&x| x > 0.0).unwrap_or(0)
    };
    let mut centers = vec![points[pick(&mut rng, weights)]];
    let mut d2: Vec<f64> = points.iter().map(|p| delta_e(p, &centers[0]).powi(2)).collect();
    while centers.len() < k {
        let scores: Vec<f64> = d2.iter().zip(weights).map(|(d, w)| d * w).collect();
        let c = points[pick(&mut rng, &scores)];
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(delta_e(p, &c).powi(2));
        }
        centers.push(c);
    }
    centers
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::Rgb;

    const REGIONS: [[u8; 3]; 5] = [[220, 30, 40], [20, 160, 60], [30, 60, 200], [240, 230, 80], [40, 40, 40]];

    fn stripes(noise: bool) -> RgbImage {
        // region i covers (i+1) columns out of every 15, so masses are distinct
        RgbImage::from_fn(150, 40, |x, y| {
            let col = x % 15;
            let region = match col {
                0 => 0,
                1..=2 => 1,
                3..=5 => 2,
                6..=9 => 3,
                _ => 4,
            };
            let mut c = REGIONS[region];
            if noise {
                let jitter = ((x * 7 + y * 13) % 5) as i32 - 2;
                c = c.map(|v| (v as i32 + jitter).clamp(0, 255) as u8);
            }
            Rgb(c)
        })
    }

    #[test]
    fn flat_regions_recovered() {
        for noise in [false, true] {
            let e = extract_palette(&stripes(noise), DEFAULT_EXTRACTION_SEED).unwrap();
            assert!(!e.padded);
            // mass order: region 4 (5 cols), 3 (4), 2 (3), 1 (2), 0 (1)
            for (got, want) in e.palette.colors().iter().zip([4, 3, 2, 1, 0]) {
                let d = delta_e(&srgb_to_lab(*got), &srgb_to_lab(REGIONS[want]));
                assert!(d < 2.3, "noise={noise}: {got:?} vs {:?} (ΔE {d})", REGIONS[want]);
            }
        }
    }

    #[test]
    fn uniform_image_is_padded() {
        let img = RgbImage::from_pixel(10, 10, Rgb([9, 99, 199]));
        let e = extract_palette(&img, 1).unwrap();
        assert!(e.padded);
        assert_eq!(e.palette.colors(), &[[9, 99, 199]; 5]);
    }

    #[test]
    fn deterministic() {
        let img = RgbImage::from_fn(64, 64, |x, y| Rgb([(x * 4) as u8, (y * 4) as u8, ((x + y) * 2) as u8]));
        assert_eq!(extract_palette(&img, 3).unwrap(), extract_palette(&img, 3).unwrap());
    }

    #[test]
    fn pool_file_formats() {
        let text = r#"[
            [[1,2,3],[4,5,6],[7,8,9],[10,11,12],[13,14,15]],
            {"colors": [[0,0,0],[0,0,0],[0,0,0],[0,0,0],[255,255,255]], "source": "cover-1"}
        ]"#;
        let pool = PalettePool::from_json(text).unwrap();
        assert_eq!(pool.len(), 2);
        assert_eq!(pool.entries[1].source.as_deref(), Some("cover-1"));
        assert_eq!(PalettePool::from_json(&pool.to_json().unwrap()).unwrap(), pool);
        assert!(PalettePool::from_json("[[[1,2,3]]]").is_err());
    }

    #[test]
    fn lightness_sort() {
        let p = Palette5::new([[255, 255, 255], [0, 0, 0], [128, 128, 128], [60, 60, 60], [200, 200, 200]]);
        assert_eq!(
            p.sorted_by_lightness(),
            [[0, 0, 0], [60, 60, 60], [128, 128, 128], [200, 200, 200], [255, 255, 255]]
        );
    }
}
