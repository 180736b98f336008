use log::warn;
use serde::{Deserialize, Serialize};

use super::estimate::RelevanceMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Normalization of the off-diagonal spread in the separation score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadDivisor {
    /// `1/(N−1)` over the `N−1` off-diagonal values.
    #[default]
    AsPrinted,
    /// `1/(N−2)`: the unbiased sample estimate over `N−1` values.
    Sample,
}

/// What the matrix-level summary averages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryMean {
    /// Mean of the per-row ratios `D_i` or `S_i`.
    #[default]
    RowRatios,
    /// Mean of the off-diagonal means (dominance) or spreads (separation).
    AsPrinted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateOptions {
    pub divisor: SpreadDivisor,
    pub summary: SummaryMean,
}

/// Per-row values (`None` when undefined) and their mean over defined rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowAggregate {
    pub per_row: Vec<Option<f64>>,
    pub mean: Option<f64>,
}

fn off_diagonal(row: &[f64], i: usize) -> impl Iterator<Item = f64> + '_ {
    row.iter().enumerate().filter(move |&(j, _)| j != i).map(|(_, &v)| v)
}

fn off_mean(row: &[f64], i: usize) -> f64 {
    off_diagonal(row, i).sum::<f64>() / (row.len() - 1) as f64
}

fn off_spread(row: &[f64], i: usize, divisor: SpreadDivisor) -> f64 {
    let mean = off_mean(row, i);
    let ss: f64 = off_diagonal(row, i).map(|v| (v - mean).powi(2)).sum();
    let n = row.len() as f64;
    let d = match divisor {
        SpreadDivisor::AsPrinted => n - 1.0,
        SpreadDivisor::Sample => n - 2.0,
    };
    (ss / d).sqrt()
}

/// `D_i = r_ii / mean(off-diagonal)`; `None` if that mean is zero.
pub fn dominance_row(row: &[f64], i: usize) -> Option<f64> {
    let m = off_mean(row, i);
    (m > 0.0).then(|| row[i] / m)
}

/// `S_i = |r_ii − mean(off-diagonal)| / spread(off-diagonal)`; `None` if the spread is zero.
pub fn separation_row(row: &[f64], i: usize, divisor: SpreadDivisor) -> Option<f64> {
    let s = off_spread(row, i, divisor);
    (s > 0.0).then(|| (row[i] - off_mean(row, i)).abs() / s)
}

fn check_rows(rows: &[Option<&[f64]>], min_n: usize) -> Result<()> {
    let n = rows.len();
    if n < min_n {
        return Err(Error::input(format!("aggregate needs at least {min_n} rows, got {n}")));
    }
    for row in rows.iter().flatten() {
        if row.len() != n {
            return Err(Error::input(format!("matrix is not square: row of {} in {n} rows", row.len())));
        }
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::input("matrix entries must be finite and non-negative"));
        }
    }
    Ok(())
}

fn mean_defined(values: &[Option<f64>], what: &str) -> Option<f64> {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    let skipped = values.len() - defined.len();
    if skipped > 0 {
        warn!("{what}: {skipped} undefined row(s) excluded from the mean");
    }
    (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
}

fn dominance_rows(rows: &[Option<&[f64]>], summary: SummaryMean) -> Result<RowAggregate> {
    check_rows(rows, 2)?;
    let per_row: Vec<Option<f64>> = rows.iter().enumerate().map(|(i, r)| r.and_then(|r| dominance_row(r, i))).collect();
    let mean = match summary {
        SummaryMean::RowRatios => mean_defined(&per_row, "diagonal dominance"),
        SummaryMean::AsPrinted => {
            let means: Vec<Option<f64>> = rows.iter().enumerate().map(|(i, r)| r.map(|r| off_mean(r, i))).collect();
            mean_defined(&means, "diagonal dominance")
        }
    };
    Ok(RowAggregate { per_row, mean })
}

fn separation_rows(rows: &[Option<&[f64]>], opts: AggregateOptions) -> Result<RowAggregate> {
    let min_n = match opts.divisor {
        SpreadDivisor::AsPrinted => 2,
        SpreadDivisor::Sample => 3,
    };
    check_rows(rows, min_n)?;
    let per_row: Vec<Option<f64>> =
        rows.iter().enumerate().map(|(i, r)| r.and_then(|r| separation_row(r, i, opts.divisor))).collect();
    let mean = match opts.summary {
        SummaryMean::RowRatios => mean_defined(&per_row, "diagonal separation"),
        SummaryMean::AsPrinted => {
            let spreads: Vec<Option<f64>> =
                rows.iter().enumerate().map(|(i, r)| r.map(|r| off_spread(r, i, opts.divisor))).collect();
            mean_defined(&spreads, "diagonal separation")
        }
    };
    Ok(RowAggregate { per_row, mean })
}

fn matrix_rows(r: &Matrix) -> Vec<Option<&[f64]>> {
    r.iter_rows().map(Some).collect()
}

pub fn diagonal_dominance(r: &Matrix) -> Result<RowAggregate> {
    diagonal_dominance_with(r, SummaryMean::default())
}

pub fn diagonal_dominance_with(r: &Matrix, summary: SummaryMean) -> Result<RowAggregate> {
    dominance_rows(&matrix_rows(r), summary)
}

pub fn diagonal_separation(r: &Matrix) -> Result<RowAggregate> {
    diagonal_separation_with(r, AggregateOptions::default())
}

pub fn diagonal_separation_with(r: &Matrix, opts: AggregateOptions) -> Result<RowAggregate> {
    separation_rows(&matrix_rows(r), opts)
}

impl RelevanceMatrix {
    /// Dominance over rows with data; rows never shown stay `None`.
    pub fn dominance(&self, summary: SummaryMean) -> Result<RowAggregate> {
        let rows: Vec<Option<&[f64]>> = (0..self.k).map(|i| self.row(i)).collect();
        dominance_rows(&rows, summary)
    }

    pub fn separation(&self, opts: AggregateOptions) -> Result<RowAggregate> {
        let rows: Vec<Option<&[f64]>> = (0..self.k).map(|i| self.row(i)).collect();
        separation_rows(&rows, opts)
    }
}
