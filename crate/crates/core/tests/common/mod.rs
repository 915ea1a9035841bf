#![allow(dead_code)]

use dgtime_core::radau::gauss_rule;
use dgtime_core::{PiecewiseTrajectory, TimePartition};
use rand::Rng;

/// Discontinuous degree `q-1` trajectory with stage values uniform in `[-1, 1]`.
pub fn random_trajectory<R: Rng>(rng: &mut R, partition: TimePartition, radau: &[f64], dim: usize) -> PiecewiseTrajectory {
    let values = (0..partition.intervals())
        .map(|_| (0..radau.len()).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect())
        .collect();
    PiecewiseTrajectory::discontinuous(partition, radau, values).unwrap()
}

/// Largest defect of
/// `int_{J_n} (what_t, v) = int_{J_n} (w_t, v) + (w_n^+ - w_n, v_n^+)`
/// over intervals, components and the local monomials `v = tau^j`,
/// divided by `max(1, max |w|)`.
pub fn reconstruction_identity_defect(w: &PiecewiseTrajectory, what: &PiecewiseTrajectory, u0: &[f64]) -> f64 {
    let q = w.stages();
    let dim = w.dim();
    let k = w.partition().step();
    let rule = gauss_rule(q + 2).unwrap();
    let mut d_hat = vec![0.0; dim];
    let mut d_w = vec![0.0; dim];
    let mut plus = vec![0.0; dim];
    let mut scale = u0.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut worst = 0.0f64;
    for n in 0..w.intervals() {
        for i in 0..q {
            scale = w.radau_value(n, i).iter().fold(scale, |a, v| a.max(v.abs()));
        }
        let left: Vec<f64> = if n == 0 { u0.to_vec() } else { w.end_value(n - 1).to_vec() };
        w.eval_local_into(n, 0.0, &mut plus);
        for j in 0..q as i32 {
            let mut lhs = vec![0.0; dim];
            let mut rhs = vec![0.0; dim];
            for (&x, &g) in rule.nodes.iter().zip(&rule.weights) {
                what.derivative_local_into(n, x, &mut d_hat);
                w.derivative_local_into(n, x, &mut d_w);
                let v = x.powi(j);
                for c in 0..dim {
                    lhs[c] += g * k * d_hat[c] * v;
                    rhs[c] += g * k * d_w[c] * v;
                }
            }
            let v0 = if j == 0 { 1.0 } else { 0.0 };
            for c in 0..dim {
                let defect = lhs[c] - rhs[c] - (plus[c] - left[c]) * v0;
                worst = worst.max(defect.abs());
            }
        }
    }
    worst / scale
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Largest `|a - b|` over two lists of fields, relative to `max |b|`.
pub fn relative_gap(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().flatten().fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}
