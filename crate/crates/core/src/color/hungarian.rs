//! Rectangular linear assignment (Kuhn-Munkres with potentials).

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Column assigned to each row.
    pub columns: Vec<usize>,
    pub cost: f64,
}

fn validate(cost: &Matrix) -> Result<()> {
    if cost.rows() > cost.cols() {
        return Err(Error::input(format!("assignment needs rows <= columns, got {}x{}", cost.rows(), cost.cols())));
    }
    if cost.as_slice().iter().any(|c| !c.is_finite()) {
        return Err(Error::input("assignment costs must be finite"));
    }
    Ok(())
}

fn total(cost: &Matrix, columns: &[usize]) -> f64 {
    columns.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum()
}

/// Shortest-augmenting-path solver, O(n²m). Rows and columns restricted to
/// `rows` and `cols`; returns the column (from `cols`) for each entry of `rows`.
fn solve(cost: &Matrix, rows: &[usize], cols: &[usize]) -> Vec<usize> {
    let (n, m) = (rows.len(), cols.len());
    let a = |i: usize, j: usize| cost.get(rows[i - 1], cols[j - 1]);
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = a(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = cols[j - 1];
        }
    }
    out
}

/// Minimum total cost of assigning every row to a distinct column.
pub fn assignment_cost(cost: &Matrix) -> Result<f64> {
    validate(cost)?;
    let rows: Vec<usize> = (0..cost.rows()).collect();
    let cols: Vec<usize> = (0..cost.cols()).collect();
    Ok(total(cost, &solve(cost, &rows, &cols)))
}

/// Optimal assignment for an n×m cost matrix with n ≤ m.
///
/// Among optimal assignments (costs equal within a relative 1e-9), the
/// lexicographically smallest column sequence is returned.
pub fn hungarian(cost: &Matrix) -> Result<Assignment> {
    validate(cost)?;
    let n = cost.rows();
    let all_rows: Vec<usize> = (0..n).collect();
    let all_cols: Vec<usize> = (0..cost.cols()).collect();
    let optimal = solve(cost, &all_rows, &all_cols);
    let best = total(cost, &optimal);
    let tol = 1e-9 * best.abs().max(1.0);

    let mut columns = Vec::with_capacity(n);
    let mut prefix = 0.0;
    for i in 0..n {
        let rest_rows: Vec<usize> = (i + 1..n).collect();
        let chosen = all_cols
            .iter()
            .copied()
            .filter(|j| !columns.contains(j))
            .find(|&j| {
                let free: Vec<usize> = all_cols.iter().copied().filter(|c| *c != j && !columns.contains(c)).collect();
                let rest = solve(cost, &rest_rows, &free);
                let rest_cost: f64 = rest_rows.iter().zip(&rest).map(|(&r, &c)| cost.get(r, c)).sum();
                prefix + cost.get(i, j) + rest_cost <= best + tol
            })
            .unwrap_or(optimal[i]);
        prefix += cost.get(i, chosen);
        columns.push(chosen);
    }
    let cost_total = total(cost, &columns);
    Ok(Assignment { columns, cost: cost_total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(cost: &Matrix) -> f64 {
        fn go(cost: &Matrix, row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == cost.rows() {
                *best = best.min(acc);
                return;
            }
            for j in 0..cost.cols() {
                if !used[j] {
                    used[j] = true;
                    go(cost, row + 1, used, acc + cost.get(row, j), best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        go(cost, 0, &mut vec![false; cost.cols()], 0.0, &mut best);
        best
    }

    #[test]
    fn two_by_two() {
        let c = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let a = hungarian(&c).unwrap();
        assert_eq!(a.columns, vec![0, 1]);
        assert_eq!(a.cost, 2.0);
    }

    #[test]
    fn diagonal_dominant() {
        let mut c = Matrix::from_vec(4, 6, vec![10.0; 24]).unwrap();
        for i in 0..4 {
            c.set(i, i, 0.5);
        }
        assert_eq!(hungarian(&c).unwrap().columns, vec![0, 1, 2, 3]);
    }

    #[test]
    fn ties_take_lowest_columns() {
        let c = Matrix::from_vec(2, 4, vec![1.0; 8]).unwrap();
        assert_eq!(hungarian(&c).unwrap().columns, vec![0, 1]);
        let c = Matrix::from_rows(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(hungarian(&c).unwrap().columns, vec![0, 1]);
    }

    #[test]
    fn tall_matrix_rejected() {
        let c = Matrix::zeros(3, 2);
        assert!(hungarian(&c).is_err());
        let mut c = Matrix::zeros(1, 2);
        c.set(0, 1, f64::NAN);
        assert!(hungarian(&c).is_err());
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let (n, m) = (rng.random_range(1..=5), rng.random_range(5..=7));
            let data = (0..n * m).map(|_| rng.random_range(-5.0..20.0)).collect();
            let c = Matrix::from_vec(n, m, data).unwrap();
            let a = hungarian(&c).unwrap();
            assert_eq!(a.cost, brute(&c));
            assert_eq!(assignment_cost(&c).unwrap(), brute(&c));
            let mut cols = a.columns.clone();
            cols.sort_unstable();
            cols.dedup();
            assert_eq!(cols.len(), n);
        }
    }

    #[test]
    fn beats_random_feasible_assignments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data = (0..5 * 30).map(|_| rng.random::<f64>()).collect();
        let c = Matrix::from_vec(5, 30, data).unwrap();
        let best = hungarian(&c).unwrap().cost;
        for _ in 0..1000 {
            let mut cols: Vec<usize> = (0..30).collect();
            for i in 0..5 {
                let j = rng.random_range(i..30);
                cols.swap(i, j);
            }
            let random: f64 = (0..5).map(|i| c.get(i, cols[i])).sum();
            assert!(best <= random + 1e-12);
        }
    }
}
