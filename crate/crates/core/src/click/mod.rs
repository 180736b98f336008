//! Position-bias click model for survey logs pairing palettes with word clouds.

mod aggregate;
mod estimate;
mod report;
mod simulate;
mod trial;

pub use aggregate::{
    diagonal_dominance, diagonal_dominance_with, diagonal_separation, diagonal_separation_with, dominance_row,
    separation_row, AggregateOptions, RowAggregate, SpreadDivisor, SummaryMean,
};
pub use estimate::{
    display_prob, position_bias, position_bias_by_set, q_factor, relevance, relevance_by_set, relevance_with_biases,
    subgroup_relevance, PositionBias, RelevanceMatrix,
};
pub use report::RelevanceReport;
pub use simulate::{random_relevance, simulate_survey, simulate_survey_with};
pub use trial::{load_trials, read_trials, save_trials, write_trials, Respondent, SurveyTrial, DISPLAY_SLOTS};
