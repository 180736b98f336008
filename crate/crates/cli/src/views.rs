//! Response payloads shared by the command line and the HTTP service.

use serde::{Deserialize, Serialize};

use chromatika::apps::{Recommendation, TopicQuery};
use chromatika::color::{nearest_palettes_with, Palette5, RankedPalette, WedOptions};
use chromatika::corpus::bin_representative;
use chromatika::lda::TrainedModel;

pub const TOPIC_TOP_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedWord {
    pub token: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedBin {
    pub bin: usize,
    pub rgb: [u8; 3],
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicView {
    pub topic: usize,
    pub word_weight: f64,
    pub color_weight: f64,
    pub words: Vec<WeightedWord>,
    pub colors: Vec<WeightedBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicWeights {
    pub words: Vec<f64>,
    pub colors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicsView {
    pub k: usize,
    pub topic_weights: TopicWeights,
    pub topics: Vec<TopicView>,
}

pub fn topics_view(model: &TrainedModel) -> TopicsView {
    let topics = (0..model.num_topics())
        .map(|k| TopicView {
            topic: k,
            word_weight: model.word_topic_weights[k],
            color_weight: model.color_topic_weights[k],
            words: TrainedModel::top_entries(model.psi.row(k), TOPIC_TOP_N)
                .into_iter()
                .map(|(w, weight)| WeightedWord {
                    token: model.vocabulary.token(w as u32).unwrap_or_default().to_string(),
                    weight,
                })
                .collect(),
            colors: TrainedModel::top_entries(model.phi.row(k), TOPIC_TOP_N)
                .into_iter()
                .map(|(bin, weight)| WeightedBin { bin, rgb: bin_representative(bin).unwrap_or_default(), weight })
                .collect(),
        })
        .collect();
    TopicsView {
        k: model.num_topics(),
        topic_weights: TopicWeights {
            words: model.word_topic_weights.clone(),
            colors: model.color_topic_weights.clone(),
        },
        topics,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteView {
    pub rank: usize,
    /// Position in the pool.
    pub index: usize,
    pub score: f64,
    pub colors: [[u8; 3]; 5],
}

pub fn palette_views(ranked: &[RankedPalette], pool: &[Palette5]) -> Vec<PaletteView> {
    ranked
        .iter()
        .enumerate()
        .map(|(r, p)| PaletteView { rank: r + 1, index: p.index, score: p.score, colors: *pool[p.index].colors() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicPalettesView {
    pub topic: usize,
    pub palettes: Vec<PaletteView>,
}

pub fn topic_palettes(
    model: &TrainedModel,
    pool: &[Palette5],
    topic: usize,
    n: usize,
    wed: WedOptions,
) -> chromatika::Result<TopicPalettesView> {
    let h = chromatika::apps::topic_histogram(model, topic)?;
    let ranked = nearest_palettes_with(&h, pool, n.min(pool.len()), wed)?;
    Ok(TopicPalettesView { topic, palettes: palette_views(&ranked, pool) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryView {
    pub text: String,
    pub tokens: Vec<String>,
    pub dropped: Vec<String>,
    pub weights: Vec<f64>,
    pub palettes: Vec<PaletteView>,
}

pub fn query_view(model: &TrainedModel, rec: &Recommendation, pool: &[Palette5]) -> QueryView {
    let TopicQuery { raw_text, tokens, dropped, weights } = &rec.query;
    QueryView {
        text: raw_text.clone(),
        tokens: tokens.iter().map(|&t| model.vocabulary.token(t).unwrap_or_default().to_string()).collect(),
        dropped: dropped.clone(),
        weights: weights.clone(),
        palettes: palette_views(&rec.palettes, pool),
    }
}
