//! Weighted Euclidean assignment distance between a 512-bin color histogram
//! and a 5-color palette, and nearest-palette search over a pool.
//!
//! The edge cost between histogram bin `i` (at its bin-center color) and
//! palette color `j` is `‖Lab_i − Lab_j‖ / w_i` over bins with `w_i > 0`. The
//! distance is the cheapest way to match the five palette colors to five
//! distinct bins.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::hungarian::assignment_cost;
use super::lab::{delta_e, srgb_to_lab, Lab};
use super::palette::{Palette5, PALETTE_SIZE};
use crate::corpus::{bin_representative, TOTAL_BINS};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// L\*a\*b\* of every bin center.
pub fn bin_lab_table() -> &'static [Lab; TOTAL_BINS] {
    static TABLE: OnceLock<[Lab; TOTAL_BINS]> = OnceLock::new();
    TABLE.get_or_init(|| std::array::from_fn(|b| srgb_to_lab(bin_representative(b).expect("bin in range"))))
}

/// Normalized non-negative weights over the 512-bin basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedColorHistogram {
    weights: Vec<f64>,
}

impl WeightedColorHistogram {
    /// Accepts weights already summing to 1 (± 1e-9).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::check(&weights)?;
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::input(format!("histogram sums to {s}, not 1")));
        }
        Ok(Self { weights })
    }

    /// Scales arbitrary non-negative mass to sum to 1.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        Self::check(weights)?;
        let s: f64 = weights.iter().sum();
        if s <= 0.0 {
            return Err(Error::input("histogram has no mass"));
        }
        Ok(Self { weights: weights.iter().map(|w| w / s).collect() })
    }

    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        Self::normalized(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
    }

    fn check(weights: &[f64]) -> Result<()> {
        if weights.len() != TOTAL_BINS {
            return Err(Error::input(format!("histogram has {} bins, expected {TOTAL_BINS}", weights.len())));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::input("histogram weights must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Bins with positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..TOTAL_BINS).filter(|&i| self.weights[i] > 0.0).collect()
    }
}

/// How a bin's weight scales its edge costs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeWeighting {
    /// `distance / w_i`: heavy bins are cheap to match.
    #[default]
    Inverse,
    /// `distance * w_i`.
    Proportional,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WedMode {
    /// Cheapest matching of palette colors to distinct bins.
    #[default]
    Assignment,
    /// Sum of every edge cost over all bin/palette pairs.
    FullSum,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedOptions {
    pub weighting: EdgeWeighting,
    pub mode: WedMode,
}

/// `PALETTE_SIZE × support` edge-cost matrix.
pub fn edge_costs(hist: &WeightedColorHistogram, palette: &Palette5, weighting: EdgeWeighting) -> (Matrix, Vec<usize>) {
    let support = hist.support();
    let table = bin_lab_table();
    let mut m = Matrix::zeros(PALETTE_SIZE, support.len());
    for (j, pc) in palette.lab().iter().enumerate() {
        for (col, &i) in support.iter().enumerate() {
            let d = delta_e(&table[i], pc);
            let w = hist.weights()[i];
            let cost = match weighting {
                EdgeWeighting::Inverse => d / w,
                EdgeWeighting::Proportional => d * w,
            };
            m.set(j, col, cost);
        }
    }
    (m, support)
}

pub fn wed_distance(hist: &WeightedColorHistogram, palette: &Palette5) -> Result<f64> {
    wed_distance_with(hist, palette, WedOptions::default())
}

pub fn wed_distance_with(hist: &WeightedColorHistogram, palette: &Palette5, opts: WedOptions) -> Result<f64> {
    let (costs, support) = edge_costs(hist, palette, opts.weighting);
    if support.len() < PALETTE_SIZE {
        return Err(Error::Degenerate(format!(
            "histogram has {} nonzero bins; at least {PALETTE_SIZE} needed",
            support.len()
        )));
    }
    match opts.mode {
        WedMode::Assignment => assignment_cost(&costs),
        WedMode::FullSum => Ok(costs.as_slice().iter().sum()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedPalette {
    /// Position in the pool.
    pub index: usize,
    pub score: f64,
}

/// The `n` pool palettes closest to `hist`, ascending by distance, ties by pool index.
pub fn nearest_palettes(hist: &WeightedColorHistogram, pool: &[Palette5], n: usize) -> Result<Vec<RankedPalette>> {
    nearest_palettes_with(hist, pool, n, WedOptions::default())
}

pub fn nearest_palettes_with(
    hist: &WeightedColorHistogram,
    pool: &[Palette5],
    n: usize,
    opts: WedOptions,
) -> Result<Vec<RankedPalette>> {
    if pool.is_empty() {
        return Err(Error::input("palette pool is empty"));
    }
    if n > pool.len() {
        return Err(Error::input(format!("requested {n} palettes from a pool of {}", pool.len())));
    }
    let mut ranked = pool
        .iter()
        .enumerate()
        .map(|(index, p)| Ok(RankedPalette { index, score: wed_distance_with(hist, p, opts)? }))
        .collect::<Result<Vec<_>>>()?;
    // stable sort keeps pool order among equal scores
    ranked.sort_by(|a, b| a.score.total_cmp(&b.score));
    ranked.truncate(n);
    Ok(ranked)
}
