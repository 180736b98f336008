use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::trial::{Respondent, SurveyTrial, DISPLAY_SLOTS};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Draws trials from the forward click model: each shown cloud `j` at slot
/// `p` is ticked independently with probability `r[i][j] · b[p]`.
///
/// Palettes are visited in order, `trials_per_palette` each, all in question set 1.
pub fn simulate_survey(
    r: &Matrix,
    b: &[f64; DISPLAY_SLOTS],
    trials_per_palette: usize,
    seed: u64,
) -> Result<Vec<SurveyTrial>> {
    simulate_survey_with(r, b, trials_per_palette, seed, 1, &Respondent::default())
}

pub fn simulate_survey_with(
    r: &Matrix,
    b: &[f64; DISPLAY_SLOTS],
    trials_per_palette: usize,
    seed: u64,
    set_id: u8,
    respondent: &Respondent,
) -> Result<Vec<SurveyTrial>> {
    let k = r.rows();
    if r.cols() != k || k < 3 {
        return Err(Error::input(format!("relevance must be square with K ≥ 3, got {}×{}", r.rows(), r.cols())));
    }
    if b.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::input(format!("position biases {b:?} must lie in [0, 1]")));
    }
    let b_max = b.iter().copied().fold(0.0, f64::max);
    for (idx, &v) in r.as_slice().iter().enumerate() {
        if !v.is_finite() || v < 0.0 || v * b_max > 1.0 {
            return Err(Error::input(format!(
                "relevance r[{}][{}] = {v} gives a selection probability outside [0, 1]",
                idx / k,
                idx % k
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::with_capacity(k * trials_per_palette);
    let mut others: Vec<usize> = Vec::with_capacity(k - 1);
    for i in 0..k {
        others.clear();
        others.extend((0..k).filter(|&c| c != i));
        for _ in 0..trials_per_palette {
            let (picked, _) = others.partial_shuffle(&mut rng, 2);
            let mut clouds = [i, picked[0], picked[1]];
            clouds.shuffle(&mut rng);
            let mut selected = [false; DISPLAY_SLOTS];
            for p in 0..DISPLAY_SLOTS {
                selected[p] = rng.random_bool(r.get(i, clouds[p]) * b[p]);
            }
            trials.push(SurveyTrial {
                set_id,
                palette: i,
                clouds,
                selected,
                selected_none: !selected.iter().any(|&s| s),
                respondent: respondent.clone(),
            });
        }
    }
    Ok(trials)
}

/// K×K relevance with entries drawn uniformly from `[0, high)`.
pub fn random_relevance(k: usize, high: f64, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..k * k).map(|_| rng.random::<f64>() * high).collect();
    Matrix::from_vec(k, k, data).expect("k*k entries")
}
