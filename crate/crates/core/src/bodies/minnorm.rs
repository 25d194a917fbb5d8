//! Wolfe's minimum-norm-point algorithm for the convex hull of finitely many
//! points in `R^D`.
//!
//! The nearest point of `conv{p_i}` to the origin decides membership of the
//! origin: distance zero gives convex weights, a positive distance gives the
//! separating direction `−x/|x|`, since `p_i·x ≥ |x|²` for all `i` at the
//! optimum.

use nalgebra::{DMatrix, DVector};

use crate::error::{ensure, Result};

#[derive(Clone, Debug)]
pub struct MinNormPoint {
    pub point: Vec<f64>,
    /// `(index, weight)` pairs of the active set; weights sum to 1.
    pub weights: Vec<(usize, f64)>,
    pub distance: f64,
    /// `|x|² − min_i p_i·x`, the duality gap of the optimality test.
    pub gap: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(points: &[Vec<f64>], set: &[usize], w: &[f64]) -> Vec<f64> {
    let dim = points[set[0]].len();
    let mut x = vec![0.0; dim];
    for (&i, &wi) in set.iter().zip(w) {
        for (xk, pk) in x.iter_mut().zip(&points[i]) {
            *xk += wi * pk;
        }
    }
    x
}

/// Minimizer of `|Σ α_i p_i|` subject to `Σ α_i = 1` over the active set.
fn affine_minimizer(points: &[Vec<f64>], set: &[usize]) -> Option<Vec<f64>> {
    let k = set.len();
    let mut sys = DMatrix::<f64>::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..=a {
            let g = dot(&points[set[a]], &points[set[b]]);
            sys[(a, b)] = g;
            sys[(b, a)] = g;
        }
        sys[(a, k)] = 1.0;
        sys[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = sys.clone().lu().solve(&rhs).or_else(|| sys.svd(true, true).solve(&rhs, 1e-14).ok())?;
    let alpha: Vec<f64> = sol.iter().take(k).copied().collect();
    alpha.iter().all(|v| v.is_finite()).then_some(alpha)
}

/// Nearest point of `conv{points}` to the origin.
pub fn min_norm_point(points: &[Vec<f64>]) -> Result<MinNormPoint> {
    ensure!(!points.is_empty(), Input, "empty point set");
    let dim = points[0].len();
    ensure!(points.iter().all(|p| p.len() == dim), Shape, "points of unequal dimension");
    let norms: Vec<f64> = points.iter().map(|p| dot(p, p)).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max).max(1e-300);
    let start = (0..points.len()).min_by(|&a, &b| norms[a].total_cmp(&norms[b])).expect("nonempty");

    let mut set = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();
    let eps_gap = 1e-14 * max_norm;
    let eps_weight = 1e-14;
    let max_major = 20 * (points.len() + dim) + 100;

    let mut gap = f64::INFINITY;
    for _ in 0..max_major {
        let xx = dot(&x, &x);
        let (j, pjx) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(p, &x)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty");
        gap = xx - pjx;
        if gap <= eps_gap || set.contains(&j) || set.len() > dim + 1 {
            break;
        }
        set.push(j);
        lambda.push(0.0);

        loop {
            let Some(alpha) = affine_minimizer(points, &set) else { break };
            if alpha.iter().all(|&a| a > eps_weight) {
                lambda = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= eps_weight {
                    let denom = l - a;
                    let th = if denom > 0.0 { l / denom } else { 0.0 };
                    theta = theta.min(th);
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = (1.0 - theta) * *l + theta * a;
            }
            // Drop the smallest weight at least, plus any that vanished.
            let drop = (0..lambda.len()).min_by(|&a, &b| lambda[a].total_cmp(&lambda[b])).expect("nonempty");
            let keep: Vec<usize> = (0..set.len()).filter(|&i| i != drop && lambda[i] > eps_weight).collect();
            if keep.is_empty() {
                break;
            }
            set = keep.iter().map(|&i| set[i]).collect();
            lambda = keep.iter().map(|&i| lambda[i]).collect();
            let s: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= s);
            if set.len() == 1 {
                lambda = vec![1.0];
                break;
            }
        }
        x = combine(points, &set, &lambda);
    }
    let distance = dot(&x, &x).sqrt();
    let weights = set.into_iter().zip(lambda).collect();
    Ok(MinNormPoint { point: x, weights, distance, gap })
}
