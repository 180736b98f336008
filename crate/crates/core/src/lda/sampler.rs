//! Collapsed Gibbs sampling for LDA-dual.
//!
//! Both token types of a document draw their topics from the same θ_d, so
//! after integrating θ out the document-topic factor of either conditional
//! counts color AND word assignments of that document:
//!
//! ```text
//! p(y_dm = k | rest) ∝ (n_dk^colors + n_dk^words⁻ + α) · (n_kw⁻ + γ) / (n_k^words⁻ + Wγ)
//! p(z_dn = k | rest) ∝ (n_dk^colors⁻ + n_dk^words + α) · (n_kc⁻ + β) / (n_k^colors⁻ + Cβ)
//! ```
//!
//! where ⁻ marks counts with the resampled token removed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

use super::generate::sample_index;
use super::HyperParams;
use crate::corpus::Document;
use crate::error::{Error, Result};

/// Topic assignments and the count tables they imply.
#[derive(Debug, Clone)]
pub struct SamplerState<'a> {
    colors: Vec<&'a [u16]>,
    words: Vec<&'a [u32]>,
    num_topics: usize,
    num_colors: usize,
    num_words: usize,
    /// Color-token topic per (d, n).
    pub z: Vec<Vec<u16>>,
    /// Word-token topic per (d, m).
    pub y: Vec<Vec<u16>>,
    n_dk_colors: Vec<u32>,
    n_dk_words: Vec<u32>,
    n_kc: Vec<u32>,
    n_kw: Vec<u32>,
    n_k_colors: Vec<u32>,
    n_k_words: Vec<u32>,
    rng: ChaCha8Rng,
    scratch: Vec<f64>,
}

/// Count tables recomputed from scratch; used to audit incremental bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTables {
    pub n_dk_colors: Vec<u32>,
    pub n_dk_words: Vec<u32>,
    pub n_kc: Vec<u32>,
    pub n_kw: Vec<u32>,
    pub n_k_colors: Vec<u32>,
    pub n_k_words: Vec<u32>,
}

impl<'a> SamplerState<'a> {
    /// Uniformly random initial assignments.
    pub fn random(
        docs: &'a [Document],
        num_colors: usize,
        num_words: usize,
        num_topics: usize,
        seed: u64,
    ) -> Result<Self> {
        if num_topics == 0 {
            return Err(Error::input("topic count must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = num_topics;
        let z = docs.iter().map(|d| d.color_tokens.iter().map(|_| rng.random_range(0..k) as u16).collect()).collect();
        let y = docs.iter().map(|d| d.word_tokens.iter().map(|_| rng.random_range(0..k) as u16).collect()).collect();
        Self::build(docs, num_colors, num_words, num_topics, z, y, rng)
    }

    /// State with given assignments; the rng is seeded from `seed`.
    pub fn from_assignments(
        docs: &'a [Document],
        num_colors: usize,
        num_words: usize,
        num_topics: usize,
        z: Vec<Vec<u16>>,
        y: Vec<Vec<u16>>,
        seed: u64,
    ) -> Result<Self> {
        Self::build(docs, num_colors, num_words, num_topics, z, y, ChaCha8Rng::seed_from_u64(seed))
    }

    fn build(
        docs: &'a [Document],
        num_colors: usize,
        num_words: usize,
        num_topics: usize,
        z: Vec<Vec<u16>>,
        y: Vec<Vec<u16>>,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        if num_topics == 0 || num_topics > u16::MAX as usize {
            return Err(Error::input(format!("topic count {num_topics} out of range")));
        }
        if z.len() != docs.len() || y.len() != docs.len() {
            return Err(Error::input("assignment lists do not match document count"));
        }
        for (d, doc) in docs.iter().enumerate() {
            if z[d].len() != doc.num_colors() || y[d].len() != doc.num_words() {
                return Err(Error::input(format!("assignment lengths mismatch in document {d}")));
            }
            if z[d].iter().chain(&y[d]).any(|&t| t as usize >= num_topics) {
                return Err(Error::input(format!("topic out of range in document {d}")));
            }
            if doc.color_tokens.iter().any(|&c| c as usize >= num_colors) {
                return Err(Error::input(format!("document {}: color token out of range", doc.id)));
            }
            if doc.word_tokens.iter().any(|&w| w as usize >= num_words) {
                return Err(Error::input(format!("document {}: word token out of range", doc.id)));
            }
        }
        let mut state = Self {
            colors: docs.iter().map(|d| d.color_tokens.as_slice()).collect(),
            words: docs.iter().map(|d| d.word_tokens.as_slice()).collect(),
            num_topics,
            num_colors,
            num_words,
            z,
            y,
            n_dk_colors: Vec::new(),
            n_dk_words: Vec::new(),
            n_kc: Vec::new(),
            n_kw: Vec::new(),
            n_k_colors: Vec::new(),
            n_k_words: Vec::new(),
            rng,
            scratch: vec![0.0; num_topics],
        };
        let t = state.recount();
        state.n_dk_colors = t.n_dk_colors;
        state.n_dk_words = t.n_dk_words;
        state.n_kc = t.n_kc;
        state.n_kw = t.n_kw;
        state.n_k_colors = t.n_k_colors;
        state.n_k_words = t.n_k_words;
        Ok(state)
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn num_docs(&self) -> usize {
        self.colors.len()
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn num_words(&self) -> usize {
        self.num_words
    }

    /// Tally count tables directly from `z` and `y`.
    pub fn recount(&self) -> CountTables {
        let (k, d_count) = (self.num_topics, self.colors.len());
        let mut t = CountTables {
            n_dk_colors: vec![0; d_count * k],
            n_dk_words: vec![0; d_count * k],
            n_kc: vec![0; k * self.num_colors],
            n_kw: vec![0; k * self.num_words],
            n_k_colors: vec![0; k],
            n_k_words: vec![0; k],
        };
        for d in 0..d_count {
            for (&c, &topic) in self.colors[d].iter().zip(&self.z[d]) {
                let topic = topic as usize;
                t.n_dk_colors[d * k + topic] += 1;
                t.n_kc[topic * self.num_colors + c as usize] += 1;
                t.n_k_colors[topic] += 1;
            }
            for (&w, &topic) in self.words[d].iter().zip(&self.y[d]) {
                let topic = topic as usize;
                t.n_dk_words[d * k + topic] += 1;
                t.n_kw[topic * self.num_words + w as usize] += 1;
                t.n_k_words[topic] += 1;
            }
        }
        t
    }

    /// The incrementally maintained tables.
    pub fn counts(&self) -> CountTables {
        CountTables {
            n_dk_colors: self.n_dk_colors.clone(),
            n_dk_words: self.n_dk_words.clone(),
            n_kc: self.n_kc.clone(),
            n_kw: self.n_kw.clone(),
            n_k_colors: self.n_k_colors.clone(),
            n_k_words: self.n_k_words.clone(),
        }
    }

    pub(crate) fn doc_topic_colors(&self, d: usize) -> &[u32] {
        &self.n_dk_colors[d * self.num_topics..(d + 1) * self.num_topics]
    }

    pub(crate) fn doc_topic_words(&self, d: usize) -> &[u32] {
        &self.n_dk_words[d * self.num_topics..(d + 1) * self.num_topics]
    }

    pub(crate) fn topic_color(&self, k: usize, c: usize) -> u32 {
        self.n_kc[k * self.num_colors + c]
    }

    pub(crate) fn topic_word(&self, k: usize, w: usize) -> u32 {
        self.n_kw[k * self.num_words + w]
    }

    pub(crate) fn topic_colors_total(&self) -> &[u32] {
        &self.n_k_colors
    }

    pub(crate) fn topic_words_total(&self) -> &[u32] {
        &self.n_k_words
    }

    fn check_word(&self, d: usize, m: usize) -> Result<()> {
        if d >= self.words.len() || m >= self.words[d].len() {
            return Err(Error::input(format!("no word token at ({d}, {m})")));
        }
        Ok(())
    }

    fn check_color(&self, d: usize, n: usize) -> Result<()> {
        if d >= self.colors.len() || n >= self.colors[d].len() {
            return Err(Error::input(format!("no color token at ({d}, {n})")));
        }
        Ok(())
    }

    /// Unnormalized word conditional into `out`; returns the total.
    fn word_weights(&self, hp: &HyperParams, d: usize, m: usize, out: &mut [f64]) -> f64 {
        let k_count = self.num_topics;
        let w = self.words[d][m] as usize;
        let current = self.y[d][m] as usize;
        let w_gamma = self.num_words as f64 * hp.gamma;
        let base = d * k_count;
        let mut total = 0.0;
        for (k, o) in out.iter_mut().enumerate() {
            let own = (k == current) as u32;
            let doc = (self.n_dk_colors[base + k] + self.n_dk_words[base + k] - own) as f64 + hp.alpha;
            let num = (self.n_kw[k * self.num_words + w] - own) as f64 + hp.gamma;
            let den = (self.n_k_words[k] - own) as f64 + w_gamma;
            *o = doc * num / den;
            total += *o;
        }
        total
    }

    fn color_weights(&self, hp: &HyperParams, d: usize, n: usize, out: &mut [f64]) -> f64 {
        let k_count = self.num_topics;
        let c = self.colors[d][n] as usize;
        let current = self.z[d][n] as usize;
        let c_beta = self.num_colors as f64 * hp.beta;
        let base = d * k_count;
        let mut total = 0.0;
        for (k, o) in out.iter_mut().enumerate() {
            let own = (k == current) as u32;
            let doc = (self.n_dk_colors[base + k] + self.n_dk_words[base + k] - own) as f64 + hp.alpha;
            let num = (self.n_kc[k * self.num_colors + c] - own) as f64 + hp.beta;
            let den = (self.n_k_colors[k] - own) as f64 + c_beta;
            *o = doc * num / den;
            total += *o;
        }
        total
    }

    /// Full conditional of the topic of word token `(d, m)`.
    pub fn conditional_word(&self, hp: &HyperParams, d: usize, m: usize) -> Result<Vec<f64>> {
        self.check_word(d, m)?;
        let mut p = vec![0.0; self.num_topics];
        let total = self.word_weights(hp, d, m, &mut p);
        p.iter_mut().for_each(|x| *x /= total);
        Ok(p)
    }

    /// Full conditional of the topic of color token `(d, n)`.
    pub fn conditional_color(&self, hp: &HyperParams, d: usize, n: usize) -> Result<Vec<f64>> {
        self.check_color(d, n)?;
        let mut p = vec![0.0; self.num_topics];
        let total = self.color_weights(hp, d, n, &mut p);
        p.iter_mut().for_each(|x| *x /= total);
        Ok(p)
    }

    fn move_word(&mut self, d: usize, m: usize, to: usize) {
        let from = self.y[d][m] as usize;
        if from == to {
            return;
        }
        let (k, w) = (self.num_topics, self.words[d][m] as usize);
        self.n_dk_words[d * k + from] -= 1;
        self.n_dk_words[d * k + to] += 1;
        self.n_kw[from * self.num_words + w] -= 1;
        self.n_kw[to * self.num_words + w] += 1;
        self.n_k_words[from] -= 1;
        self.n_k_words[to] += 1;
        self.y[d][m] = to as u16;
    }

    fn move_color(&mut self, d: usize, n: usize, to: usize) {
        let from = self.z[d][n] as usize;
        if from == to {
            return;
        }
        let (k, c) = (self.num_topics, self.colors[d][n] as usize);
        self.n_dk_colors[d * k + from] -= 1;
        self.n_dk_colors[d * k + to] += 1;
        self.n_kc[from * self.num_colors + c] -= 1;
        self.n_kc[to * self.num_colors + c] += 1;
        self.n_k_colors[from] -= 1;
        self.n_k_colors[to] += 1;
        self.z[d][n] = to as u16;
    }

    /// One sequential-scan pass: documents in order, words then colors.
    pub fn sweep(&mut self, hp: &HyperParams) {
        let mut scratch = std::mem::take(&mut self.scratch);
        for d in 0..self.colors.len() {
            for m in 0..self.words[d].len() {
                let total = self.word_weights(hp, d, m, &mut scratch);
                let u: f64 = self.rng.random();
                let k = sample_index(&scratch, total, u);
                self.move_word(d, m, k);
            }
            for n in 0..self.colors[d].len() {
                let total = self.color_weights(hp, d, n, &mut scratch);
                let u: f64 = self.rng.random();
                let k = sample_index(&scratch, total, u);
                self.move_color(d, n, k);
            }
        }
        self.scratch = scratch;
    }

    /// Log of the joint p(z, y, c, w) with θ, Φ and Ψ integrated out.
    pub fn log_joint(&self, hp: &HyperParams) -> f64 {
        let k = self.num_topics;
        let kf = k as f64;
        let mut lp = 0.0;
        let lg_alpha = ln_gamma(hp.alpha);
        for d in 0..self.colors.len() {
            let len = (self.colors[d].len() + self.words[d].len()) as f64;
            lp += ln_gamma(kf * hp.alpha) - ln_gamma(len + kf * hp.alpha);
            for t in 0..k {
                let n = (self.n_dk_colors[d * k + t] + self.n_dk_words[d * k + t]) as f64;
                lp += ln_gamma(n + hp.alpha) - lg_alpha;
            }
        }
        lp += dirichlet_multinomial(&self.n_kc, &self.n_k_colors, self.num_colors, hp.beta);
        lp += dirichlet_multinomial(&self.n_kw, &self.n_k_words, self.num_words, hp.gamma);
        lp
    }
}

/// Σ_k log ∫ Π_v φ_kv^{n_kv} Dir(φ_k; conc) dφ_k.
fn dirichlet_multinomial(n_kv: &[u32], n_k: &[u32], vocab: usize, conc: f64) -> f64 {
    let v = vocab as f64;
    let lg_conc = ln_gamma(conc);
    let mut lp = 0.0;
    for (t, &total) in n_k.iter().enumerate() {
        lp += ln_gamma(v * conc) - ln_gamma(total as f64 + v * conc);
        for &n in &n_kv[t * vocab..(t + 1) * vocab] {
            if n > 0 {
                lp += ln_gamma(n as f64 + conc) - lg_conc;
            }
        }
    }
    lp
}
