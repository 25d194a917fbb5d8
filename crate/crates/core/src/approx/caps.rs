//! Uniform sampling in geodesic caps `C(ψ, θ) = {φ : Re⟨ψ|φ⟩ ≥ cos θ}` of the
//! real sphere `S_{C^d} ≅ S^{2d−1}`, and the cap-average weight α.
//!
//! The polar angle of a uniform cap point has density `∝ sin^{2d−2} t` on
//! `[0, θ]`; the direction orthogonal to ψ is uniform on `S^{2d−2}`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::hermitian::{CVector, HermitianMatrix, PureState, SeedStream, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CapSpec {
    #[serde(with = "state_serde")]
    pub center: PureState,
    pub theta: f64,
    /// `1/σ(C(ψ,θ))`, the inverse normalized cap measure.
    pub measure_inv: f64,
}

mod state_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &PureState, s: S) -> std::result::Result<S::Ok, S::Error> {
        let re: Vec<f64> = p.vector().iter().map(|z| z.re).collect();
        let im: Vec<f64> = p.vector().iter().map(|z| z.im).collect();
        [re, im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<PureState, D::Error> {
        let [re, im] = <[Vec<f64>; 2]>::deserialize(d)?;
        PureState::from_slice(&re, &im).map_err(serde::de::Error::custom)
    }
}

fn weight(t: f64, power: i32) -> f64 {
    t.sin().powi(power)
}

/// `∫_a^b sin^p` by composite Simpson with `n` (even) panels.
fn simpson(a: f64, b: f64, power: i32, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = weight(a, power) + weight(b, power);
    for k in 1..n {
        let c = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += c * weight(a + k as f64 * h, power);
    }
    s * h / 3.0
}

impl CapSpec {
    pub fn new(center: PureState, theta: f64) -> Result<Self> {
        ensure!(
            theta > 0.0 && theta < std::f64::consts::FRAC_PI_2,
            Parameter,
            "cap radius must lie in (0, π/2), got {theta}"
        );
        let power = 2 * center.dim() as i32 - 2;
        let cap = simpson(0.0, theta, power, 4096);
        let total = simpson(0.0, std::f64::consts::PI, power, 1 << 14);
        Ok(Self { center, theta, measure_inv: total / cap })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }
}

/// Inverse-CDF sampler for one cap; build once, sample many times.
#[derive(Clone, Debug)]
pub struct CapSampler {
    cap: CapSpec,
    power: i32,
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

const GRID: usize = 2048;

impl CapSampler {
    pub fn new(cap: &CapSpec) -> Self {
        let power = 2 * cap.dim() as i32 - 2;
        let h = cap.theta / GRID as f64;
        let grid: Vec<f64> = (0..=GRID).map(|k| k as f64 * h).collect();
        let mut cdf = vec![0.0; GRID + 1];
        for k in 0..GRID {
            cdf[k + 1] = cdf[k] + simpson(grid[k], grid[k + 1], power, 8);
        }
        Self { cap: cap.clone(), power, grid, cdf }
    }

    /// Polar angle with density `∝ sin^{2d−2}` on `[0, θ]`.
    pub fn angle<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let target = rng.random::<f64>() * self.cdf[GRID];
        let k = self.cdf.partition_point(|&c| c <= target).clamp(1, GRID) - 1;
        let (mut lo, mut hi) = (self.grid[k], self.grid[k + 1]);
        let base = self.cdf[k];
        let span = self.cdf[k + 1] - base;
        let mut t = if span > 0.0 { lo + (hi - lo) * (target - base) / span } else { lo };
        // Safeguarded Newton on F(t) = base + ∫_{t_k}^t sin^p.
        for _ in 0..30 {
            let f = base + simpson(self.grid[k], t, self.power, 4) - target;
            if f.abs() <= 1e-15 * self.cdf[GRID] {
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let w = weight(t, self.power);
            let next = if w > 0.0 { t - f / w } else { f64::NAN };
            t = if next.is_finite() && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 {
                break;
            }
        }
        t
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PureState {
        let t = self.angle(rng);
        let psi = self.cap.center.vector();
        let d = psi.len();
        // Uniform direction in the real orthogonal complement of ψ.
        let u = loop {
            let g = CVector::from_fn(d, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
            let proj = psi.dotc(&g).re;
            let u = &g - psi * C64::new(proj, 0.0);
            let n = u.norm();
            if n > 1e-12 {
                break u / C64::new(n, 0.0);
            }
        };
        let phi = psi * C64::new(t.cos(), 0.0) + u * C64::new(t.sin(), 0.0);
        PureState::normalize(phi).expect("unit combination")
    }
}

/// One uniform sample of the cap.
pub fn sample_cap<R: Rng + ?Sized>(cap: &CapSpec, rng: &mut R) -> PureState {
    CapSampler::new(cap).sample(rng)
}

/// Mean of `|⟨ψ|φ⟩|²` over the cap, by quadrature of
/// `cos²t + sin²t/(2d−1)` against the angle density.
pub fn cap_overlap_quadrature(d: usize, theta: f64) -> f64 {
    let p = 2 * d as i32 - 2;
    let n = 1 << 14;
    let h = theta / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..=n {
        let c = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let t = k as f64 * h;
        let w = weight(t, p);
        num += c * w * (t.cos().powi(2) + t.sin().powi(2) / (2 * d - 1) as f64);
        den += c * w;
    }
    num / den
}

/// α from the quadrature mean: `d(1 − mean)/(d − 1)`.
pub fn cap_alpha_quadrature(d: usize, theta: f64) -> Result<f64> {
    ensure!(d >= 2, OutOfValidity, "α is undefined at d = 1");
    Ok(d as f64 * (1.0 - cap_overlap_quadrature(d, theta)) / (d as f64 - 1.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlphaEstimate {
    pub alpha_hat: f64,
    pub std_err: f64,
    /// `θ²·d/(d−1)`.
    pub bound: f64,
    pub within_bound: bool,
    pub alpha_quadrature: f64,
    pub samples: usize,
    pub seed: u64,
}

const CHUNK: usize = 4096;

/// Monte Carlo α̂ with its standard error; chunk `c` draws from stream `c`.
pub fn cap_alpha_estimate(cap: &CapSpec, samples: usize, seeds: SeedStream) -> Result<AlphaEstimate> {
    let d = cap.dim();
    ensure!(d >= 2, OutOfValidity, "α is undefined at d = 1");
    ensure!(samples >= 1000, Parameter, "need at least 10³ samples");
    let sampler = CapSampler::new(cap);
    let chunks = samples.div_ceil(CHUNK);
    let (s1, s2) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeds.rng(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for _ in 0..n {
                let o = cap.center.overlap(&sampler.sample(&mut rng));
                s1 += o;
                s2 += o * o;
            }
            (s1, s2)
        })
        // Summed in chunk order so the result does not depend on the thread count.
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    let scale = d as f64 / (d as f64 - 1.0);
    let alpha_hat = scale * (1.0 - mean);
    let std_err = scale * (var / n).sqrt();
    let bound = cap.theta * cap.theta * scale;
    Ok(AlphaEstimate {
        alpha_hat,
        std_err,
        bound,
        within_bound: alpha_hat <= bound + 3.0 * std_err,
        alpha_quadrature: cap_alpha_quadrature(d, cap.theta)?,
        samples,
        seed: seeds.seed,
    })
}

/// Fixed seed for the frozen high-precision α.
pub const FROZEN_ALPHA_SEED: u64 = 0x0a1f_a5ee_d000_0001;
pub const FROZEN_ALPHA_SAMPLES: usize = 1_000_000;

/// α estimated once at 10⁶ samples from a fixed seed, for use as a constant.
pub fn frozen_alpha(cap: &CapSpec) -> Result<AlphaEstimate> {
    cap_alpha_estimate(cap, FROZEN_ALPHA_SAMPLES, SeedStream::new(FROZEN_ALPHA_SEED))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CapAverageCheck {
    pub samples: usize,
    pub alpha: f64,
    /// Largest `|mean − expected| / stdErr` over real and imaginary entry parts.
    pub max_z: f64,
    pub passed: bool,
}

/// Compares the empirical mean of `|φ⟩⟨φ|` over the cap with
/// `(1−α)|ψ⟩⟨ψ| + α·Id/d` entrywise, within 3 standard errors.
pub fn cap_average_check(cap: &CapSpec, alpha: f64, samples: usize, seeds: SeedStream) -> Result<CapAverageCheck> {
    ensure!(samples >= 2, Parameter, "need at least two samples");
    let d = cap.dim();
    let sampler = CapSampler::new(cap);
    let chunks = samples.div_ceil(CHUNK);
    let zero = || (vec![0.0; 2 * d * d], vec![0.0; 2 * d * d]);
    let (s1, s2) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeds.rng(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut s1, mut s2) = zero();
            for _ in 0..n {
                let phi = sampler.sample(&mut rng);
                let v = phi.vector();
                for i in 0..d {
                    for j in 0..d {
                        let z = v[i] * v[j].conj();
                        let k = 2 * (i * d + j);
                        s1[k] += z.re;
                        s1[k + 1] += z.im;
                        s2[k] += z.re * z.re;
                        s2[k + 1] += z.im * z.im;
                    }
                }
            }
            (s1, s2)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(zero(), |mut a, b| {
            a.0.iter_mut().zip(&b.0).for_each(|(x, y)| *x += y);
            a.1.iter_mut().zip(&b.1).for_each(|(x, y)| *x += y);
            a
        });
    let expected = &cap.center.projector().scale(1.0 - alpha) + &HermitianMatrix::identity(d).scale(alpha / d as f64);
    let n = samples as f64;
    let mut max_z: f64 = 0.0;
    let mut passed = true;
    for i in 0..d {
        for j in 0..d {
            let e = expected.get(i, j);
            for (part, target) in [(0, e.re), (1, e.im)] {
                let k = 2 * (i * d + j) + part;
                let mean = s1[k] / n;
                let var = (s2[k] / n - mean * mean).max(0.0) * n / (n - 1.0);
                let se = (var / n).sqrt();
                let dev = (mean - target).abs();
                if dev > 3.0 * se + 1e-12 {
                    passed = false;
                }
                if se > 0.0 {
                    max_z = max_z.max(dev / se);
                }
            }
        }
    }
    Ok(CapAverageCheck { samples, alpha, max_z, passed })
}
