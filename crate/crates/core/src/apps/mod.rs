//! Applications on a trained model: palette recommendation, image re-ranking,
//! pixel selection and pattern recoloring.

mod imaging;
mod query;

pub use imaging::{
    encode_mask_png, is_gray, luma, luminance_bands, paint_bands, pixel_scores, recolor_pattern, rerank_for_query,
    rerank_images, select_pixels, select_pixels_for_query, NamedImage, RankedImage, Recoloring, Selection,
    DEFAULT_THRESHOLD,
};
pub use query::{
    blended_histogram, query_to_topic_weights, query_to_topic_weights_with, recommend_palettes,
    recommend_palettes_with, topic_histogram, QueryScoring, Recommendation, TopicQuery,
};

#[cfg(test)]
mod tests;
