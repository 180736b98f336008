use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::trial::{SurveyTrial, DISPLAY_SLOTS};
use crate::error::{Error, Result};

/// Selection rate of each slot: three word-cloud positions, then "none of the above".
pub type PositionBias = [f64; DISPLAY_SLOTS + 1];

/// `b_p = m_p / m`. Rates need not sum to one since several clouds may be ticked.
pub fn position_bias(trials: &[SurveyTrial]) -> Result<PositionBias> {
    if trials.is_empty() {
        return Err(Error::input("position bias needs at least one trial"));
    }
    let mut counts = [0u64; DISPLAY_SLOTS + 1];
    for t in trials {
        for (c, &s) in counts.iter_mut().zip(&t.selected) {
            *c += s as u64;
        }
        counts[DISPLAY_SLOTS] += t.selected_none as u64;
    }
    let m = trials.len() as f64;
    Ok(counts.map(|c| c as f64 / m))
}

/// Biases computed separately for each question set.
pub fn position_bias_by_set(trials: &[SurveyTrial]) -> Result<BTreeMap<u8, PositionBias>> {
    let mut sets: BTreeMap<u8, Vec<SurveyTrial>> = BTreeMap::new();
    for t in trials {
        sets.entry(t.set_id).or_default().push(t.clone());
    }
    if sets.is_empty() {
        return Err(Error::input("position bias needs at least one trial"));
    }
    sets.into_iter().map(|(s, ts)| Ok((s, position_bias(&ts)?))).collect()
}

/// Probability that cloud `j` is among the three shown with palette `i`.
pub fn display_prob(i: usize, j: usize, k: usize) -> f64 {
    if i == j {
        1.0
    } else {
        2.0 / (k as f64 - 1.0)
    }
}

/// `q_ij = display_prob(i, j) · (b₁ + b₂ + b₃) / 3`. Only the first three entries of `b` are read.
pub fn q_factor(b: &[f64], i: usize, j: usize, k: usize) -> f64 {
    display_prob(i, j, k) * (b[0] + b[1] + b[2]) / 3.0
}

/// Estimated intrinsic relevance of cloud `j` to palette `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelevanceMatrix {
    pub k: usize,
    /// `None` for palettes that were never shown.
    pub r_hat: Vec<Option<Vec<f64>>>,
    pub m_i: Vec<u64>,
    pub m_ij: Vec<Vec<u64>>,
    /// Biases used, keyed by question set.
    pub biases: BTreeMap<u8, PositionBias>,
}

impl RelevanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.r_hat[i].as_ref().map(|row| row[j])
    }

    pub fn row(&self, i: usize) -> Option<&[f64]> {
        self.r_hat[i].as_deref()
    }

    pub fn defined_rows(&self) -> usize {
        self.r_hat.iter().filter(|r| r.is_some()).count()
    }
}

fn validate_all(trials: &[SurveyTrial], k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::input(format!("need at least 3 topics, got K={k}")));
    }
    trials.iter().try_for_each(|t| t.validate(k))
}

fn estimate(trials: &[SurveyTrial], k: usize, biases: BTreeMap<u8, PositionBias>) -> RelevanceMatrix {
    let mut m_i = vec![0u64; k];
    let mut m_ij = vec![vec![0u64; k]; k];
    // trials per (palette, set) so the expected exposure can mix sets
    let mut per_set: BTreeMap<(usize, u8), u64> = BTreeMap::new();
    for t in trials {
        m_i[t.palette] += 1;
        *per_set.entry((t.palette, t.set_id)).or_default() += 1;
        for (&cloud, &sel) in t.clouds.iter().zip(&t.selected) {
            if sel {
                m_ij[t.palette][cloud] += 1;
            }
        }
    }
    let r_hat = (0..k)
        .map(|i| {
            if m_i[i] == 0 {
                return None;
            }
            let row = (0..k)
                .map(|j| {
                    if m_ij[i][j] == 0 {
                        return 0.0;
                    }
                    let exposure: f64 = per_set
                        .range((i, u8::MIN)..=(i, u8::MAX))
                        .map(|(&(_, s), &n)| n as f64 * q_factor(&biases[&s], i, j, k))
                        .sum();
                    m_ij[i][j] as f64 / exposure
                })
                .collect();
            Some(row)
        })
        .collect();
    RelevanceMatrix { k, r_hat, m_i, m_ij, biases }
}

/// `r̂_ij = m_ij / (m_i · q_ij)` with biases estimated per question set.
///
/// When several sets are present the denominator sums each trial's own `q_ij`.
pub fn relevance(trials: &[SurveyTrial], k: usize) -> Result<RelevanceMatrix> {
    validate_all(trials, k)?;
    let biases = if trials.is_empty() { BTreeMap::new() } else { position_bias_by_set(trials)? };
    Ok(estimate(trials, k, biases))
}

/// Same estimator with externally supplied slot biases for every set.
pub fn relevance_with_biases(trials: &[SurveyTrial], k: usize, b: &[f64]) -> Result<RelevanceMatrix> {
    validate_all(trials, k)?;
    if b.len() < DISPLAY_SLOTS {
        return Err(Error::input(format!("need {DISPLAY_SLOTS} position biases, got {}", b.len())));
    }
    let mut full = [0.0; DISPLAY_SLOTS + 1];
    for (f, v) in full.iter_mut().zip(b) {
        *f = *v;
    }
    let biases = trials.iter().map(|t| (t.set_id, full)).collect();
    Ok(estimate(trials, k, biases))
}

/// One matrix per question set.
pub fn relevance_by_set(trials: &[SurveyTrial], k: usize) -> Result<BTreeMap<u8, RelevanceMatrix>> {
    let mut sets: BTreeMap<u8, Vec<SurveyTrial>> = BTreeMap::new();
    for t in trials {
        sets.entry(t.set_id).or_default().push(t.clone());
    }
    sets.into_iter().map(|(s, ts)| Ok((s, relevance(&ts, k)?))).collect()
}

/// `relevance` restricted to trials accepted by `predicate`, biases recomputed on the subset.
pub fn subgroup_relevance<P>(trials: &[SurveyTrial], k: usize, name: &str, predicate: P) -> Result<RelevanceMatrix>
where
    P: Fn(&SurveyTrial) -> bool,
{
    let subset: Vec<SurveyTrial> = trials.iter().filter(|t| predicate(t)).cloned().collect();
    if subset.is_empty() {
        return Err(Error::EmptySubgroup(name.to_string()));
    }
    relevance(&subset, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::click::trial::Respondent;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn trial(set_id: u8, palette: usize, clouds: [usize; 3], selected: [bool; 3], none: bool) -> SurveyTrial {
        SurveyTrial { set_id, palette, clouds, selected, selected_none: none, respondent: Respondent::default() }
    }

    #[test]
    fn bias_direct_counts() {
        let mut ts = Vec::new();
        let pattern = [[true, true, true], [true, true, true], [true, true, true], [true, false, false]];
        for s in pattern {
            ts.push(trial(1, 0, [0, 1, 2], s, false));
        }
        while ts.len() < 10 {
            ts.push(trial(1, 0, [0, 1, 2], [false; 3], false));
        }
        assert_eq!(position_bias(&ts).unwrap(), [0.4, 0.3, 0.3, 0.0]);
        let only_first: Vec<_> = (0..5).map(|_| trial(1, 0, [0, 1, 2], [true, false, false], false)).collect();
        assert_eq!(position_bias(&only_first).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        assert!(position_bias(&[]).is_err());
    }

    #[test]
    fn display_probabilities() {
        assert_eq!(display_prob(3, 3, 12), 1.0);
        assert_eq!(display_prob(3, 4, 12), 2.0 / 11.0);
        for k in 3..30 {
            for i in 0..k {
                let s: f64 = (0..k).map(|j| display_prob(i, j, k)).sum();
                assert_relative_eq!(s, 3.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn q_with_published_first_set_biases() {
        let b = [0.323, 0.3626, 0.3381, 0.1499];
        assert_relative_eq!(q_factor(&b, 0, 0, 12), 1.0237 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(q_factor(&b, 0, 0, 12), 0.341233333, epsilon = 1e-9);
        assert_relative_eq!(q_factor(&b, 0, 1, 12) / q_factor(&b, 0, 0, 12), 2.0 / 11.0, epsilon = 1e-15);
        assert_eq!(q_factor(&[1.0, 1.0, 1.0, 0.0], 2, 2, 12), 1.0);
    }

    #[test]
    fn mle_arithmetic() {
        // 100 trials of palette 0 with biases giving q_00 = 0.341233…; cloud 0 ticked 30 times
        let b = [0.323, 0.3626, 0.3381];
        let ts: Vec<_> = (0..100).map(|n| trial(1, 0, [0, 1, 2], [n < 30, false, false], false)).collect();
        let r = relevance_with_biases(&ts, 12, &b).unwrap();
        assert_relative_eq!(r.get(0, 0).unwrap(), 30.0 / (100.0 * 1.0237 / 3.0), epsilon = 1e-12);
        assert_relative_eq!(r.get(0, 0).unwrap(), 0.879164, epsilon = 1e-6);
        assert_eq!(r.get(0, 1), Some(0.0));
        assert_eq!(r.get(1, 1), None);
        assert_eq!(r.m_i[0], 100);
        assert_eq!(r.m_ij[0][0], 30);
    }

    #[test]
    fn no_selections_gives_zero_matrix() {
        let ts: Vec<_> = (0..12).map(|i| trial(1, i, [i, (i + 1) % 12, (i + 2) % 12], [false; 3], true)).collect();
        let r = relevance(&ts, 12).unwrap();
        for i in 0..12 {
            assert!(r.row(i).unwrap().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn none_co_selection_still_counts() {
        let a = vec![trial(1, 0, [0, 1, 2], [true, false, false], false)];
        let b = vec![trial(1, 0, [0, 1, 2], [true, false, false], true)];
        let ra = relevance_with_biases(&a, 3, &[0.5, 0.5, 0.5]).unwrap();
        let rb = relevance_with_biases(&b, 3, &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(ra.r_hat, rb.r_hat);
    }

    #[test]
    fn biases_are_per_set() {
        let ts = vec![
            trial(1, 0, [0, 1, 2], [true, false, false], false),
            trial(2, 0, [0, 1, 2], [false, false, false], true),
            trial(2, 0, [0, 1, 2], [false, true, false], false),
        ];
        let r = relevance(&ts, 3).unwrap();
        assert_eq!(r.biases[&1], [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.biases[&2], [0.0, 0.5, 0.0, 0.5]);
        // exposure for cloud 0: one set-1 trial at q = 1/3 plus two set-2 trials at q = 1/6
        assert_relative_eq!(r.get(0, 0).unwrap(), 1.0 / (1.0 / 3.0 + 2.0 / 6.0), epsilon = 1e-15);
        let by_set = relevance_by_set(&ts, 3).unwrap();
        assert_eq!(by_set.len(), 2);
        assert_eq!(by_set[&1].m_i[0], 1);
    }

    #[test]
    fn subgroups() {
        let mut ts = Vec::new();
        for n in 0..40 {
            let mut t = trial(1, n % 4, [n % 4, (n + 1) % 4, (n + 2) % 4], [n % 3 == 0, n % 5 == 0, false], false);
            t.respondent.gender = if n % 2 == 0 { "female" } else { "male" }.into();
            ts.push(t);
        }
        let all = subgroup_relevance(&ts, 4, "all", |_| true).unwrap();
        assert_eq!(all, relevance(&ts, 4).unwrap());
        let f = subgroup_relevance(&ts, 4, "female", |t| t.respondent.gender == "female").unwrap();
        let m = subgroup_relevance(&ts, 4, "male", |t| t.respondent.gender == "male").unwrap();
        for i in 0..4 {
            assert_eq!(f.m_i[i] + m.m_i[i], all.m_i[i]);
        }
        match subgroup_relevance(&ts, 4, "designers", |t| t.respondent.designer) {
            Err(Error::EmptySubgroup(name)) => assert_eq!(name, "designers"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_inconsistent_trials() {
        let ts = vec![trial(1, 0, [1, 2, 3], [false; 3], false)];
        assert!(relevance(&ts, 5).is_err());
    }

    proptest! {
        #[test]
        fn equivariant_under_relabeling(seed in any::<u64>(), perm_seed in any::<u64>()) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let k = 6;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let ts: Vec<SurveyTrial> = (0..60).map(|_| {
                let i = rng.random_range(0..k);
                let mut others: Vec<usize> = (0..k).filter(|&c| c != i).collect();
                others.shuffle(&mut rng);
                let mut clouds = [i, others[0], others[1]];
                clouds.shuffle(&mut rng);
                trial(1, i, clouds, [rng.random(), rng.random(), rng.random()], false)
            }).collect();
            let mut perm: Vec<usize> = (0..k).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let relabeled: Vec<SurveyTrial> = ts.iter().map(|t| SurveyTrial {
                palette: perm[t.palette],
                clouds: t.clouds.map(|c| perm[c]),
                ..t.clone()
            }).collect();
            let a = relevance(&ts, k).unwrap();
            let b = relevance(&relabeled, k).unwrap();
            for i in 0..k {
                prop_assert_eq!(a.m_i[i], b.m_i[perm[i]]);
                for j in 0..k {
                    prop_assert_eq!(a.get(i, j), b.get(perm[i], perm[j]));
                }
            }
        }
    }
}
