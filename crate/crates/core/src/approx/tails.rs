//! Monte Carlo checks of the scalar and matrix Hoeffding tail bounds.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::caps::{CapSampler, CapSpec};
use crate::error::{ensure, Result};
use crate::hermitian::{HermitianMatrix, SeedStream};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TailCheck {
    pub empirical_tail: f64,
    pub bound: f64,
    /// `√(b(1−b)/trials)` at `b = min(bound, 1)`.
    pub std_err: f64,
    pub trials: usize,
    /// Exact tail probability where available.
    pub exact_tail: Option<f64>,
    pub passed: bool,
    pub seed: u64,
}

/// `P(B(N,p) ≤ k)` by summing the pmf in log space.
pub fn binomial_cdf(n: u64, p: f64, k: u64) -> f64 {
    if p >= 1.0 {
        return if k >= n { 1.0 } else { 0.0 };
    }
    if p <= 0.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_pmf = n as f64 * lq;
    let mut total = 0.0;
    for j in 0..=k.min(n) {
        total += log_pmf.exp();
        if j < n {
            log_pmf += ((n - j) as f64).ln() - ((j + 1) as f64).ln() + lp - lq;
        }
    }
    total.min(1.0)
}

/// Frequency of `B(N,p) ≤ Np/2` against `exp(−p²N/2)`.
pub fn hoeffding_tail_check(n: u64, p: f64, trials: usize, seeds: SeedStream) -> Result<TailCheck> {
    ensure!(p > 0.0 && p <= 1.0, Parameter, "p must lie in (0, 1], got {p}");
    ensure!(n >= 1 && trials >= 1, Parameter, "need N ≥ 1 and trials ≥ 1");
    let threshold = n as f64 * p / 2.0;
    let hits: usize = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = seeds.rng(i as u64);
            let b = if p >= 1.0 { n } else { Binomial::new(n, p).expect("valid").sample(&mut rng) };
            (b as f64) <= threshold
        })
        .count();
    let empirical_tail = hits as f64 / trials as f64;
    let bound = (-p * p * n as f64 / 2.0).exp();
    let b = bound.min(1.0);
    let std_err = (b * (1.0 - b) / trials as f64).sqrt();
    let exact_tail = Some(binomial_cdf(n, p, threshold.floor() as u64));
    Ok(TailCheck {
        empirical_tail,
        bound,
        std_err,
        trials,
        exact_tail,
        passed: empirical_tail <= bound + 3.0 * std_err,
        seed: seeds.seed,
    })
}

/// Whether the Monte Carlo tail agrees with the exact binomial CDF within 3σ.
pub fn agrees_with_exact(check: &TailCheck) -> bool {
    match check.exact_tail {
        Some(q) => {
            let se = (q * (1.0 - q) / check.trials as f64).sqrt();
            (check.empirical_tail - q).abs() <= 3.0 * se + 1e-12
        }
        None => false,
    }
}

/// Frequency of `‖(1/M) Σ X_k‖_op ≥ t` with `X_k = |φ_k⟩⟨φ_k| − (1−α)∙|ψ⟩⟨ψ|`
/// over cap samples `φ_k`, against `min(1, 2d·exp(−M t²/8))`.
pub fn matrix_hoeffding_check(
    cap: &CapSpec,
    alpha: f64,
    m: usize,
    t: f64,
    trials: usize,
    seeds: SeedStream,
) -> Result<TailCheck> {
    ensure!(m >= 1 && trials >= 1 && t > 0.0, Parameter, "M, trials and t must be positive");
    let d = cap.dim();
    let sampler = CapSampler::new(cap);
    let center = &cap.center.projector().scale(1.0 - alpha) + &HermitianMatrix::identity(d).scale(alpha / d as f64);
    let hits: usize = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = seeds.rng(i as u64);
            let mut acc = nalgebra::DMatrix::<crate::hermitian::C64>::zeros(d, d);
            for _ in 0..m {
                let v = sampler.sample(&mut rng);
                let v = v.vector();
                acc += v * v.adjoint();
            }
            let mean = HermitianMatrix::hermitian_part(&(acc / crate::hermitian::C64::new(m as f64, 0.0))).expect("square");
            (&mean - &center).op_norm() >= t
        })
        .count();
    let empirical_tail = hits as f64 / trials as f64;
    let bound = (2.0 * d as f64 * (-(m as f64) * t * t / 8.0).exp()).min(1.0);
    let std_err = (bound * (1.0 - bound) / trials as f64).sqrt();
    Ok(TailCheck {
        empirical_tail,
        bound,
        std_err,
        trials,
        exact_tail: None,
        passed: empirical_tail <= bound + 3.0 * std_err,
        seed: seeds.seed,
    })
}

/// Uniform draw helper kept for callers that need raw binomials.
pub fn binomial_sample<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Result<u64> {
    let dist = Binomial::new(n, p).map_err(|e| crate::Error::Parameter(e.to_string()))?;
    Ok(dist.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::haar_pure;

    #[test]
    fn binomial_cdf_small_cases() {
        // N=10, p=1/2, k=2: (1 + 10 + 45)/1024.
        assert!((binomial_cdf(10, 0.5, 2) - 56.0 / 1024.0).abs() < 1e-15);
        assert_eq!(binomial_cdf(5, 1.0, 4), 0.0);
        assert!((binomial_cdf(7, 0.3, 7) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p_one_is_impossible_event() {
        let r = hoeffding_tail_check(50, 1.0, 100, SeedStream::new(1)).unwrap();
        assert_eq!(r.empirical_tail, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn exact_agreement_small_n() {
        let r = hoeffding_tail_check(10, 0.5, 20_000, SeedStream::new(2)).unwrap();
        assert!(agrees_with_exact(&r), "{r:?}");
        assert!(r.passed);
    }

    #[test]
    fn matrix_tail_impossible_at_two() {
        let mut rng = SeedStream::new(3).rng(0);
        let cap = CapSpec::new(haar_pure(2, &mut rng), 0.3).unwrap();
        let r = matrix_hoeffding_check(&cap, 0.05, 20, 2.0, 200, SeedStream::new(4)).unwrap();
        assert_eq!(r.empirical_tail, 0.0);
    }
}
