use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::aggregate::{AggregateOptions, RowAggregate};
use super::estimate::{PositionBias, RelevanceMatrix};
use crate::error::Result;

/// Relevance matrix with its dominance and separation summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelevanceReport {
    pub k: usize,
    pub r_hat: Vec<Option<Vec<f64>>>,
    pub m_i: Vec<u64>,
    pub m_ij: Vec<Vec<u64>>,
    pub biases: BTreeMap<u8, PositionBias>,
    pub options: AggregateOptions,
    pub dominance: RowAggregate,
    pub separation: RowAggregate,
}

impl RelevanceReport {
    pub fn new(matrix: &RelevanceMatrix, options: AggregateOptions) -> Result<Self> {
        Ok(RelevanceReport {
            k: matrix.k,
            r_hat: matrix.r_hat.clone(),
            m_i: matrix.m_i.clone(),
            m_ij: matrix.m_ij.clone(),
            biases: matrix.biases.clone(),
            options,
            dominance: matrix.dominance(options.summary)?,
            separation: matrix.separation(options)?,
        })
    }

    /// One row per palette: `palette,m_i,r_0..r_{K−1},dominance,separation`; undefined cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("palette,m_i");
        for j in 0..self.k {
            write!(out, ",r_{j}").unwrap();
        }
        out.push_str(",dominance,separation\n");
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for i in 0..self.k {
            write!(out, "{i},{}", self.m_i[i]).unwrap();
            for j in 0..self.k {
                write!(out, ",{}", cell(self.r_hat[i].as_ref().map(|r| r[j]))).unwrap();
            }
            writeln!(out, ",{},{}", cell(self.dominance.per_row[i]), cell(self.separation.per_row[i])).unwrap();
        }
        writeln!(out, "mean,,{}{},{}", ",".repeat(self.k), cell(self.dominance.mean), cell(self.separation.mean))
            .unwrap();
        out
    }
}
