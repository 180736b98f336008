use serde::{Deserialize, Serialize};

use crate::color::{nearest_palettes_with, Palette5, RankedPalette, WedOptions, WeightedColorHistogram};
use crate::corpus::normalize_word;
use crate::error::{Error, Result};
use crate::lda::TrainedModel;

/// How per-token word-topic probabilities combine into topic weights.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryScoring {
    /// `w_k ∝ Σ_t ψ_k(t)`.
    #[default]
    Additive,
    /// `w_k ∝ Π_t ψ_k(t)`.
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicQuery {
    pub raw_text: String,
    /// In-vocabulary token ids, duplicates kept.
    pub tokens: Vec<u32>,
    /// Surface words that produced no in-vocabulary token.
    pub dropped: Vec<String>,
    /// Probability vector over topics.
    pub weights: Vec<f64>,
}

pub fn query_to_topic_weights(text: &str, model: &TrainedModel) -> Result<TopicQuery> {
    query_to_topic_weights_with(text, model, QueryScoring::default())
}

pub fn query_to_topic_weights_with(text: &str, model: &TrainedModel, scoring: QueryScoring) -> Result<TopicQuery> {
    let mut tokens = Vec::new();
    let mut dropped = Vec::new();
    for raw in text.split_whitespace() {
        let ids: Vec<u32> = normalize_word(raw).iter().filter_map(|t| model.vocabulary.get(t)).collect();
        if ids.is_empty() {
            dropped.push(raw.to_string());
        }
        tokens.extend(ids);
    }
    if tokens.is_empty() {
        return Err(Error::Query { dropped });
    }
    let k = model.num_topics();
    let psi = |topic: usize, t: u32| model.psi.get(topic, t as usize);
    let weights = match scoring {
        QueryScoring::Additive => {
            let raw: Vec<f64> = (0..k).map(|topic| tokens.iter().map(|&t| psi(topic, t)).sum()).collect();
            let total: f64 = raw.iter().sum();
            if total <= 0.0 {
                return Err(Error::Degenerate("query tokens have zero mass in every topic".into()));
            }
            raw.iter().map(|w| w / total).collect::<Vec<_>>()
        }
        QueryScoring::Multiplicative => {
            let logs: Vec<f64> = (0..k).map(|topic| tokens.iter().map(|&t| psi(topic, t).ln()).sum()).collect();
            let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if max == f64::NEG_INFINITY {
                return Err(Error::Degenerate("no topic gives every query token positive mass".into()));
            }
            let exp: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
            let total: f64 = exp.iter().sum();
            exp.iter().map(|w| w / total).collect()
        }
    };
    Ok(TopicQuery { raw_text: text.to_string(), tokens, dropped, weights })
}

/// `h = Σ_k w_k · φ_k`, renormalized.
pub fn blended_histogram(model: &TrainedModel, weights: &[f64]) -> Result<WeightedColorHistogram> {
    if weights.len() != model.num_topics() {
        return Err(Error::input(format!("{} weights for {} topics", weights.len(), model.num_topics())));
    }
    let mut h = vec![0.0; model.num_colors()];
    for (k, &w) in weights.iter().enumerate() {
        for (hc, &p) in h.iter_mut().zip(model.phi.row(k)) {
            *hc += w * p;
        }
    }
    WeightedColorHistogram::normalized(&h)
}

/// Color topic `k` as a histogram.
pub fn topic_histogram(model: &TrainedModel, k: usize) -> Result<WeightedColorHistogram> {
    if k >= model.num_topics() {
        return Err(Error::input(format!("topic {k} out of range for K={}", model.num_topics())));
    }
    let mut onehot = vec![0.0; model.num_topics()];
    onehot[k] = 1.0;
    blended_histogram(model, &onehot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub query: TopicQuery,
    pub palettes: Vec<RankedPalette>,
}

pub fn recommend_palettes(text: &str, model: &TrainedModel, pool: &[Palette5], n: usize) -> Result<Recommendation> {
    recommend_palettes_with(text, model, pool, n, QueryScoring::default(), WedOptions::default())
}

pub fn recommend_palettes_with(
    text: &str,
    model: &TrainedModel,
    pool: &[Palette5],
    n: usize,
    scoring: QueryScoring,
    wed: WedOptions,
) -> Result<Recommendation> {
    let query = query_to_topic_weights_with(text, model, scoring)?;
    let h = blended_histogram(model, &query.weights)?;
    let palettes = nearest_palettes_with(&h, pool, n, wed)?;
    Ok(Recommendation { query, palettes })
}
