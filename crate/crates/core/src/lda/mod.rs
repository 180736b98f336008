//! The LDA-dual joint color-word topic model.

mod checkpoint;
mod generate;
mod sampler;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Vocabulary};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use checkpoint::CHECKPOINT_VERSION;
pub use generate::{generate, sample_dirichlet, sample_topics, Generated};
pub use sampler::{CountTables, SamplerState};

/// How the point estimate is taken from the chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate {
    /// Counts of the final state.
    #[default]
    FinalState,
    /// Mean of per-sweep estimates over all post-burn-in sweeps.
    Average,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Total sweeps, burn-in included.
    pub sweeps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub estimate: Estimate,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            k: 12,
            alpha: 0.8,
            beta: 0.1,
            gamma: 0.1,
            sweeps: 500,
            burn_in: 250,
            seed: 0,
            estimate: Estimate::FinalState,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::input("K must be at least 1"));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.burn_in > self.sweeps {
            return Err(Error::input("burn_in exceeds sweeps"));
        }
        Ok(())
    }
}

/// Per-document metadata carried into the model for grouping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocMeta {
    pub id: String,
    pub title: String,
    pub genre: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    /// K×C color topics.
    pub phi: Matrix,
    /// K×W word topics.
    pub psi: Matrix,
    /// D×K document proportions.
    pub theta: Matrix,
    pub hyperparams: HyperParams,
    pub vocabulary: Vocabulary,
    pub docs: Vec<DocMeta>,
    /// Share of all word tokens assigned to each topic.
    pub word_topic_weights: Vec<f64>,
    /// Share of all color tokens assigned to each topic.
    pub color_topic_weights: Vec<f64>,
}

impl TrainedModel {
    pub fn num_topics(&self) -> usize {
        self.phi.rows()
    }

    pub fn num_colors(&self) -> usize {
        self.phi.cols()
    }

    pub fn num_words(&self) -> usize {
        self.psi.cols()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.phi.rows();
        if self.psi.rows() != k || self.theta.cols() != k {
            return Err(Error::Checkpoint("matrix shapes disagree on K".into()));
        }
        if self.psi.cols() != self.vocabulary.len() {
            return Err(Error::Checkpoint("psi width differs from vocabulary size".into()));
        }
        if self.theta.rows() != self.docs.len() {
            return Err(Error::Checkpoint("theta height differs from document count".into()));
        }
        for (name, m) in [("phi", &self.phi), ("psi", &self.psi), ("theta", &self.theta)] {
            m.check_row_stochastic(1e-9).map_err(|e| Error::Checkpoint(format!("{name}: {e}")))?;
        }
        Ok(())
    }

    /// Topics ranked by `row` weight, top `n` entries as `(index, weight)`.
    pub fn top_entries(row: &[f64], n: usize) -> Vec<(usize, f64)> {
        let mut idx: Vec<usize> = (0..row.len()).collect();
        idx.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        idx.into_iter().take(n).map(|i| (i, row[i])).collect()
    }
}

/// Accumulates smoothed estimates from sampler states.
struct Estimator {
    phi: Matrix,
    psi: Matrix,
    theta: Matrix,
    samples: usize,
}

impl Estimator {
    fn new(k: usize, c: usize, w: usize, d: usize) -> Self {
        Self { phi: Matrix::zeros(k, c), psi: Matrix::zeros(k, w), theta: Matrix::zeros(d, k), samples: 0 }
    }

    fn add(&mut self, state: &SamplerState<'_>, hp: &HyperParams) {
        let (k, c, w) = (state.num_topics(), state.num_colors(), state.num_words());
        let kf = k as f64;
        for t in 0..k {
            let den = state.topic_colors_total()[t] as f64 + c as f64 * hp.beta;
            let row = self.phi.row_mut(t);
            for (cc, x) in row.iter_mut().enumerate() {
                *x += (state.topic_color(t, cc) as f64 + hp.beta) / den;
            }
            let den = state.topic_words_total()[t] as f64 + w as f64 * hp.gamma;
            let row = self.psi.row_mut(t);
            for (ww, x) in row.iter_mut().enumerate() {
                *x += (state.topic_word(t, ww) as f64 + hp.gamma) / den;
            }
        }
        for d in 0..state.num_docs() {
            let colors = state.doc_topic_colors(d);
            let words = state.doc_topic_words(d);
            let len: u32 = colors.iter().chain(words).sum();
            let den = len as f64 + kf * hp.alpha;
            for (t, x) in self.theta.row_mut(d).iter_mut().enumerate() {
                *x += ((colors[t] + words[t]) as f64 + hp.alpha) / den;
            }
        }
        self.samples += 1;
    }

    fn finish(mut self) -> (Matrix, Matrix, Matrix) {
        if self.samples > 1 {
            let s = self.samples as f64;
            for m in [&mut self.phi, &mut self.psi, &mut self.theta] {
                for r in 0..m.rows() {
                    let row = m.row_mut(r);
                    row.iter_mut().for_each(|x| *x /= s);
                    // renormalize away accumulated rounding
                    let total: f64 = row.iter().sum();
                    row.iter_mut().for_each(|x| *x /= total);
                }
            }
        }
        (self.phi, self.psi, self.theta)
    }
}

/// Run the collapsed Gibbs sampler over a corpus.
pub fn train(corpus: &Corpus, hp: &HyperParams) -> Result<TrainedModel> {
    train_documents(&corpus.documents, corpus.num_colors(), &corpus.vocabulary, hp)
}

/// Train on explicit documents; `num_colors` is the color alphabet size.
pub fn train_documents(
    docs: &[Document],
    num_colors: usize,
    vocabulary: &Vocabulary,
    hp: &HyperParams,
) -> Result<TrainedModel> {
    hp.validate()?;
    if docs.is_empty() {
        return Err(Error::input("cannot train on an empty corpus"));
    }
    if vocabulary.is_empty() {
        return Err(Error::input("cannot train with an empty vocabulary"));
    }
    let mut state = SamplerState::random(docs, num_colors, vocabulary.len(), hp.k, hp.seed)?;
    let mut est = Estimator::new(hp.k, num_colors, vocabulary.len(), docs.len());
    for sweep in 0..hp.sweeps {
        state.sweep(hp);
        if hp.estimate == Estimate::Average && sweep >= hp.burn_in {
            est.add(&state, hp);
        }
        if log::log_enabled!(log::Level::Debug) && (sweep + 1) % 50 == 0 {
            log::debug!("sweep {}: log joint {:.3}", sweep + 1, state.log_joint(hp));
        }
    }
    if est.samples == 0 {
        est.add(&state, hp);
    }
    let (phi, psi, theta) = est.finish();
    let total_words: u32 = state.topic_words_total().iter().sum();
    let total_colors: u32 = state.topic_colors_total().iter().sum();
    let share = |counts: &[u32], total: u32| -> Vec<f64> {
        counts.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
    };
    let model = TrainedModel {
        phi,
        psi,
        theta,
        hyperparams: hp.clone(),
        vocabulary: vocabulary.clone(),
        docs: docs
            .iter()
            .map(|d| DocMeta { id: d.id.clone(), title: d.title.clone(), genre: d.genre.clone() })
            .collect(),
        word_topic_weights: share(state.topic_words_total(), total_words),
        color_topic_weights: share(state.topic_colors_total(), total_colors),
    };
    Ok(model)
}

/// Mean θ row per label. Documents whose label is `None` are skipped with a warning.
pub fn topic_proportions_by_group<F>(model: &TrainedModel, mut label: F) -> BTreeMap<String, Vec<f64>>
where
    F: FnMut(usize, &DocMeta) -> Option<String>,
{
    let k = model.num_topics();
    let mut sums: BTreeMap<String, (Vec<f64>, usize)> = BTreeMap::new();
    for (d, meta) in model.docs.iter().enumerate() {
        let Some(l) = label(d, meta) else {
            log::warn!("document `{}` has no group label; skipped", meta.id);
            continue;
        };
        let entry = sums.entry(l).or_insert_with(|| (vec![0.0; k], 0));
        for (acc, &x) in entry.0.iter_mut().zip(model.theta.row(d)) {
            *acc += x;
        }
        entry.1 += 1;
    }
    sums.into_iter().map(|(l, (s, n))| (l, s.into_iter().map(|x| x / n as f64).collect())).collect()
}
