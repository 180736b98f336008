//! Joint color-word topic modeling for design mining.
//!
//! - [`corpus`]: color quantization, word normalization, manifest ingestion.
//! - [`lda`]: the LDA-dual model and its collapsed Gibbs sampler.
//! - [`color`]: CIE L\*a\*b\*, assignment solver, histogram-to-palette distance.
//! - [`click`]: click-model analysis of palette/word-cloud surveys.
//! - [`apps`]: query-driven palette recommendation and image tools.

pub mod apps;
pub mod click;
pub mod color;
pub mod corpus;
pub mod error;
pub mod lda;
pub mod matrix;

pub use error::{Error, Result};
pub use matrix::Matrix;
