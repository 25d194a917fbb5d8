//! Random `k`-dimensional sections of gauge bodies: how round is `K ∩ E`?

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::hermitian::{HermitianBasis, HermitianMatrix, SeedStream, TracelessDirection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "gauge")]
pub enum Gauge {
    Ball,
    Cube,
    CrossPolytope,
    /// `D(C^m)` about `ρ_*` in orthonormal traceless coordinates.
    States { m: usize },
    /// Its polar, whose gauge is `λ_1`.
    StatesPolar { m: usize },
}

impl Gauge {
    pub fn polar(self) -> Gauge {
        match self {
            Gauge::Ball => Gauge::Ball,
            Gauge::Cube => Gauge::CrossPolytope,
            Gauge::CrossPolytope => Gauge::Cube,
            Gauge::States { m } => Gauge::StatesPolar { m },
            Gauge::StatesPolar { m } => Gauge::States { m },
        }
    }

    /// Required ambient dimension, if fixed by the body.
    pub fn fixed_dim(self) -> Option<usize> {
        match self {
            Gauge::States { m } | Gauge::StatesPolar { m } => Some(m * m - 1),
            _ => None,
        }
    }

    /// Radius of the largest centered Euclidean ball inside the body.
    pub fn inradius(self, n: usize) -> f64 {
        match self {
            Gauge::Ball | Gauge::Cube => 1.0,
            Gauge::CrossPolytope => 1.0 / (n as f64).sqrt(),
            Gauge::States { m } => 1.0 / ((m * (m - 1)) as f64).sqrt(),
            Gauge::StatesPolar { m } => (m as f64 / (m as f64 - 1.0)).sqrt(),
        }
    }
}

/// Gauge value and a subgradient at `x`.
struct Evaluator {
    gauge: Gauge,
    basis: Option<HermitianBasis>,
}

impl Evaluator {
    fn new(gauge: Gauge) -> Self {
        let basis = match gauge {
            Gauge::States { m } | Gauge::StatesPolar { m } => Some(HermitianBasis::new(m)),
            _ => None,
        };
        Self { gauge, basis }
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(match self.gauge {
            Gauge::Ball => norm(x),
            Gauge::Cube => x.iter().fold(0.0, |a, v| a.max(v.abs())),
            Gauge::CrossPolytope => x.iter().map(|v| v.abs()).sum(),
            Gauge::States { m } => -(m as f64) * self.direction(x)?.matrix().lambda_min(),
            Gauge::StatesPolar { .. } => self.direction(x)?.matrix().lambda_max(),
        })
    }

    fn value_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        Ok(match self.gauge {
            Gauge::Ball => {
                let n = norm(x);
                (n, x.iter().map(|v| v / n.max(1e-300)).collect())
            }
            Gauge::Cube => {
                let (k, v) = x.iter().enumerate().fold((0, 0.0), |(k, best), (i, v)| if v.abs() > best { (i, v.abs()) } else { (k, best) });
                let mut g = vec![0.0; x.len()];
                g[k] = x[k].signum();
                (v, g)
            }
            Gauge::CrossPolytope => (x.iter().map(|v| v.abs()).sum(), x.iter().map(|v| v.signum()).collect()),
            Gauge::States { m } => {
                let (l, v) = self.direction(x)?.matrix().eigh()?.bottom();
                let g = self.coords(&HermitianMatrix::outer(&v));
                (-(m as f64) * l, g.into_iter().map(|c| -(m as f64) * c).collect())
            }
            Gauge::StatesPolar { .. } => {
                let (l, v) = self.direction(x)?.matrix().eigh()?.top();
                (l, self.coords(&HermitianMatrix::outer(&v)))
            }
        })
    }

    fn direction(&self, x: &[f64]) -> Result<TracelessDirection> {
        self.basis.as_ref().expect("state gauges carry a basis").direction(x)
    }

    fn coords(&self, p: &HermitianMatrix) -> Vec<f64> {
        self.basis.as_ref().expect("state gauges carry a basis").offset_coords(p)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn gaussian_unit<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// `n×k` matrix with orthonormal columns spanning a uniform random subspace.
fn random_frame<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SectionTrial {
    pub max_gauge: f64,
    pub min_gauge: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SectionExperiment {
    pub gauge: Gauge,
    pub ambient_dim: usize,
    pub section_dim: usize,
    pub trials: usize,
    pub samples_per_trial: usize,
    pub per_trial: Vec<SectionTrial>,
    pub median_ratio: f64,
    /// Mean gauge over the full sphere.
    pub mean_gauge_m: f64,
    /// Mean polar gauge on the same sphere points.
    pub mean_polar_gauge_m_star: f64,
    /// Standard error of the paired product `M·M*` (delta method).
    pub m_m_star_std_err: f64,
    pub sphere_samples: usize,
    pub inradius: f64,
    pub seed: u64,
}

const REFINE_STARTS: usize = 3;

/// Local search on `S^{k−1}` for the max (`sign = 1`) or min (`sign = −1`) of
/// the gauge along the frame, by projected subgradient steps with step
/// doubling and halving.
fn refine(ev: &Evaluator, frame: &DMatrix<f64>, mut u: Vec<f64>, sign: f64) -> Result<f64> {
    let k = u.len();
    let lift = |u: &[f64]| -> Vec<f64> { (frame * nalgebra::DVector::from_column_slice(u)).as_slice().to_vec() };
    let eval = |u: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (v, g) = ev.value_grad(&lift(u))?;
        let gu = frame.transpose() * nalgebra::DVector::from_vec(g);
        Ok((sign * v, gu.iter().map(|x| sign * x).collect()))
    };
    let (mut value, mut grad) = eval(&u)?;
    if k == 1 {
        return Ok(sign * value);
    }
    let mut step = 0.25;
    for _ in 0..200 {
        let radial: f64 = grad.iter().zip(&u).map(|(g, x)| g * x).sum();
        let tangent: Vec<f64> = grad.iter().zip(&u).map(|(g, x)| g - radial * x).collect();
        let tn = norm(&tangent);
        if tn < 1e-14 {
            break;
        }
        let mut moved = false;
        while step > 1e-12 {
            let cand: Vec<f64> = u.iter().zip(&tangent).map(|(x, t)| x + step * t / tn).collect();
            let cn = norm(&cand);
            let cand: Vec<f64> = cand.into_iter().map(|c| c / cn).collect();
            let (v, g) = eval(&cand)?;
            if v > value + 1e-15 {
                u = cand;
                value = v;
                grad = g;
                moved = true;
                step = (2.0 * step).min(1.0);
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok(sign * value)
}

fn section_trial(ev: &Evaluator, frame: &DMatrix<f64>, samples: usize, rng: &mut impl Rng) -> Result<SectionTrial> {
    let k = frame.ncols();
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u = gaussian_unit(k, rng);
        let x = frame * nalgebra::DVector::from_column_slice(&u);
        scored.push((ev.value(x.as_slice())?, u));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut max_gauge = scored.last().map_or(f64::NEG_INFINITY, |s| s.0);
    let mut min_gauge = scored.first().map_or(f64::INFINITY, |s| s.0);
    for s in scored.iter().rev().take(REFINE_STARTS) {
        max_gauge = max_gauge.max(refine(ev, frame, s.1.clone(), 1.0)?);
    }
    for s in scored.iter().take(REFINE_STARTS) {
        min_gauge = min_gauge.min(refine(ev, frame, s.1.clone(), -1.0)?);
    }
    Ok(SectionTrial { max_gauge, min_gauge, ratio: max_gauge / min_gauge })
}

/// Section ratios over `trials` uniform `k`-subspaces of `R^n` (trial `i`
/// uses stream `i`), plus `M`, `M*` over the full sphere.
pub fn dvoretzky_section(gauge: Gauge, n: usize, k: usize, trials: usize, samples_per_trial: usize, seeds: SeedStream) -> Result<SectionExperiment> {
    ensure!(n >= 1 && k >= 1, Parameter, "dimensions must be positive");
    ensure!(k <= n, Parameter, "section dimension {k} exceeds ambient dimension {n}");
    ensure!(trials >= 1 && samples_per_trial >= 1, Parameter, "need at least one trial and one sample");
    if let Some(fixed) = gauge.fixed_dim() {
        ensure!(n == fixed, Parameter, "{gauge:?} lives in dimension {fixed}, got {n}");
    }
    let ev = Evaluator::new(gauge);
    let trial_seeds = seeds.child(1);
    let per_trial: Vec<SectionTrial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_seeds.rng(i as u64);
            let frame = random_frame(n, k, &mut rng);
            section_trial(&ev, &frame, samples_per_trial, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut ratios: Vec<f64> = per_trial.iter().map(|t| t.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let median_ratio = median(&ratios);

    let polar = Evaluator::new(gauge.polar());
    let sphere_samples = samples_per_trial.max(1000);
    let sphere_seeds = seeds.child(2);
    let pairs: Vec<(f64, f64)> = (0..sphere_samples)
        .into_par_iter()
        .map(|i| {
            let x = gaussian_unit(n, &mut sphere_seeds.rng(i as u64));
            Ok((ev.value(&x)?, polar.value(&x)?))
        })
        .collect::<Result<_>>()?;
    let s = sphere_samples as f64;
    let (ma, mb) = pairs.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0 / s, acc.1 + p.1 / s));
    // Var(ā·b̄) ≈ (b² Var a + a² Var b + 2ab Cov)/s.
    let (va, vb, cab) = pairs.iter().fold((0.0, 0.0, 0.0), |acc, p| {
        (acc.0 + (p.0 - ma).powi(2), acc.1 + (p.1 - mb).powi(2), acc.2 + (p.0 - ma) * (p.1 - mb))
    });
    let denom = (s - 1.0).max(1.0);
    let var = (mb * mb * va + ma * ma * vb + 2.0 * ma * mb * cab) / denom / s;
    Ok(SectionExperiment {
        gauge,
        ambient_dim: n,
        section_dim: k,
        trials,
        samples_per_trial,
        per_trial,
        median_ratio,
        mean_gauge_m: ma,
        mean_polar_gauge_m_star: mb,
        m_m_star_std_err: var.max(0.0).sqrt(),
        sphere_samples,
        inradius: gauge.inradius(n),
        seed: seeds.seed,
    })
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// The same measurement on a caller-supplied frame (orthonormal columns).
pub fn fixed_frame_section(gauge: Gauge, frame: &[Vec<f64>], samples: usize, seeds: SeedStream) -> Result<SectionTrial> {
    ensure!(!frame.is_empty(), Parameter, "empty frame");
    let n = frame[0].len();
    ensure!(frame.iter().all(|c| c.len() == n), Shape, "frame columns differ in length");
    if let Some(fixed) = gauge.fixed_dim() {
        ensure!(n == fixed, Parameter, "{gauge:?} lives in dimension {fixed}, got {n}");
    }
    let f = DMatrix::from_fn(n, frame.len(), |i, j| frame[j][i]);
    let gram = f.transpose() * &f;
    let err = (gram - DMatrix::identity(frame.len(), frame.len())).abs().max();
    ensure!(err <= 1e-10, Input, "frame is not orthonormal (deviation {err:e})");
    section_trial(&Evaluator::new(gauge), &f, samples.max(1), &mut seeds.rng(0))
}
