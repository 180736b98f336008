//! Synthetic corpora with planted topics, for testing topic recovery.

use serde::{Deserialize, Serialize};

use super::{ColorBasis, Corpus, Document, Vocabulary, TOTAL_BINS};
use crate::error::{Error, Result};
use crate::lda::generate;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub k: usize,
    pub num_words: usize,
    pub num_colors: usize,
    pub num_docs: usize,
    /// Color tokens and word tokens per document (each).
    pub tokens_per_doc: usize,
    /// Mass of each planted topic on its own block; 1 means disjoint supports.
    pub sharpness: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            k: 3,
            num_words: 30,
            num_colors: 30,
            num_docs: 200,
            tokens_per_doc: 200,
            sharpness: 1.0,
            alpha: 0.8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub phi: Matrix,
    pub psi: Matrix,
    pub theta: Matrix,
    /// Planted topic of every color token, aligned with `corpus.documents`.
    pub color_topics: Vec<Vec<usize>>,
    pub word_topics: Vec<Vec<usize>>,
}

/// Topic `t` owns the contiguous block `[t*size/k, (t+1)*size/k)`.
pub fn block_of(symbol: usize, size: usize, k: usize) -> usize {
    (0..k).find(|&t| symbol < (t + 1) * size / k).expect("symbol in range")
}

fn planted(k: usize, size: usize, sharpness: f64) -> Matrix {
    let mut m = Matrix::zeros(k, size);
    for t in 0..k {
        let (lo, hi) = (t * size / k, (t + 1) * size / k);
        let block = (hi - lo) as f64;
        for (s, x) in m.row_mut(t).iter_mut().enumerate() {
            let inside = if (lo..hi).contains(&s) { sharpness / block } else { 0.0 };
            *x = inside + (1.0 - sharpness) / size as f64;
        }
    }
    m
}

/// Sample a corpus from planted block topics. Colors are bins `0..num_colors`
/// of the 512-bin basis; words are named `w000`, `w001`, ...
pub fn generate_synthetic_corpus(cfg: &SyntheticConfig) -> Result<SyntheticCorpus> {
    if cfg.k == 0 || cfg.k > cfg.num_words.min(cfg.num_colors) {
        return Err(Error::input(format!(
            "K={} must be in [1, min(W={}, C={})]",
            cfg.k, cfg.num_words, cfg.num_colors
        )));
    }
    if cfg.num_colors > TOTAL_BINS {
        return Err(Error::input(format!("at most {TOTAL_BINS} colors")));
    }
    if !(cfg.sharpness > 0.0 && cfg.sharpness <= 1.0) {
        return Err(Error::input("sharpness must be in (0, 1]"));
    }
    if cfg.num_docs == 0 || cfg.tokens_per_doc == 0 {
        return Err(Error::input("need at least one document and one token per document"));
    }
    let phi = planted(cfg.k, cfg.num_colors, cfg.sharpness);
    let psi = planted(cfg.k, cfg.num_words, cfg.sharpness);
    let sizes = vec![(cfg.tokens_per_doc, cfg.tokens_per_doc); cfg.num_docs];
    let g = generate(&phi, &psi, cfg.alpha, &sizes, cfg.seed)?;

    let width = cfg.num_words.to_string().len().max(3);
    let vocabulary = Vocabulary::from_tokens((0..cfg.num_words).map(|i| format!("w{i:0width$}")));
    let documents = g
        .colors
        .into_iter()
        .zip(g.words)
        .enumerate()
        .map(|(d, (colors, words))| Document::new(format!("doc{d:04}"), colors, words))
        .collect();
    Ok(SyntheticCorpus {
        corpus: Corpus { documents, vocabulary, basis: ColorBasis, excluded: Vec::new() },
        phi,
        psi,
        theta: g.theta,
        color_topics: g.color_topics,
        word_topics: g.word_topics,
    })
}
