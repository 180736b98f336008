//! Forward sampling from the LDA-dual generative process.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Output of [`generate`]: observed tokens plus the latent draws that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub colors: Vec<Vec<u16>>,
    pub words: Vec<Vec<u32>>,
    pub color_topics: Vec<Vec<usize>>,
    pub word_topics: Vec<Vec<usize>>,
    pub theta: Matrix,
}

/// Draw one symmetric Dirichlet vector via normalized Gamma variates.
pub fn sample_dirichlet<R: Rng + ?Sized>(dim: usize, concentration: f64, rng: &mut R) -> Result<Vec<f64>> {
    let gamma = Gamma::new(concentration, 1.0)
        .map_err(|e| Error::input(format!("Dirichlet concentration {concentration}: {e}")))?;
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
        let total: f64 = v.iter().sum();
        // all-zero draws happen when concentration is tiny and every variate underflows
        if total > 0.0 && total.is_finite() {
            v.iter_mut().for_each(|x| *x /= total);
            return Ok(v);
        }
    }
}

/// Draw `k` topic distributions over `size` symbols from a symmetric Dirichlet.
pub fn sample_topics(k: usize, size: usize, concentration: f64, seed: u64) -> Result<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(k, size);
    for t in 0..k {
        m.row_mut(t).copy_from_slice(&sample_dirichlet(size, concentration, &mut rng)?);
    }
    Ok(m)
}

/// Inverse-CDF draw from an unnormalized non-negative weight vector.
pub(crate) fn sample_index(weights: &[f64], total: f64, u: f64) -> usize {
    let target = u * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // rounding can leave target == total; fall back to the last positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

fn sample_from<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    sample_index(probs, 1.0, rng.random::<f64>())
}

/// Sample documents given topic distributions.
///
/// For each document: draw θ ~ Dirichlet(alpha); for each word draw a topic
/// from θ then a word from ψ of that topic; then the same for each color with φ.
/// `doc_sizes` holds `(colors, words)` per document.
pub fn generate(phi: &Matrix, psi: &Matrix, alpha: f64, doc_sizes: &[(usize, usize)], seed: u64) -> Result<Generated> {
    if phi.rows() != psi.rows() || phi.rows() == 0 {
        return Err(Error::input("phi and psi must have the same, nonzero number of topics"));
    }
    if !(alpha > 0.0) {
        return Err(Error::input("alpha must be positive"));
    }
    if phi.cols() > u16::MAX as usize + 1 {
        return Err(Error::input("too many color bins"));
    }
    phi.check_row_stochastic(1e-9)?;
    psi.check_row_stochastic(1e-9)?;

    let k = phi.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Generated {
        colors: Vec::with_capacity(doc_sizes.len()),
        words: Vec::with_capacity(doc_sizes.len()),
        color_topics: Vec::with_capacity(doc_sizes.len()),
        word_topics: Vec::with_capacity(doc_sizes.len()),
        theta: Matrix::zeros(doc_sizes.len(), k),
    };
    for (d, &(n_colors, n_words)) in doc_sizes.iter().enumerate() {
        let theta = sample_dirichlet(k, alpha, &mut rng)?;
        out.theta.row_mut(d).copy_from_slice(&theta);

        let mut words = Vec::with_capacity(n_words);
        let mut word_topics = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            let t = sample_from(&theta, &mut rng);
            word_topics.push(t);
            words.push(sample_from(psi.row(t), &mut rng) as u32);
        }
        let mut colors = Vec::with_capacity(n_colors);
        let mut color_topics = Vec::with_capacity(n_colors);
        for _ in 0..n_colors {
            let t = sample_from(&theta, &mut rng);
            color_topics.push(t);
            colors.push(sample_from(phi.row(t), &mut rng) as u16);
        }
        out.colors.push(colors);
        out.words.push(words);
        out.color_topics.push(color_topics);
        out.word_topics.push(word_topics);
    }
    Ok(out)
}
