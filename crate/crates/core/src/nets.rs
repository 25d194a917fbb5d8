//! ε-nets on real unit spheres `S^{n−1}` and on complex spheres viewed as
//! `S^{2m−1}`, by greedy ε-separation.
//!
//! A complex vector `ψ ∈ C^m` is stored as the real vector
//! `(Re ψ_1, …, Re ψ_m, Im ψ_1, …, Im ψ_m)`. The projective metric
//! `min_θ |ψ − e^{iθ}χ| = √(2 − 2|⟨ψ|χ⟩|)` ignores global phases, which is
//! all that matters for nets whose points are used as projectors.

use std::io::{Read, Write};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::hermitian::{CVector, PureState, SeedStream, C64};

/// Hard cap on net size; constructions predicted to exceed it are refused.
pub const DESK_LIMIT: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetMethod {
    GreedySeparated,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Chordal,
    /// Phase-quotient metric on a complex sphere.
    Projective,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverageEstimate {
    pub fraction_covered: f64,
    pub samples: usize,
    pub radius: f64,
    pub uncovered: usize,
    /// Largest sample-to-net distance seen.
    pub worst_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SphereNet {
    pub real_dim: usize,
    pub eps: f64,
    pub method: NetMethod,
    pub metric: Metric,
    pub points: Vec<Vec<f64>>,
    /// Consecutive rejections that ended the greedy construction.
    #[serde(default)]
    pub max_failures: usize,
    #[serde(default)]
    pub samples_drawn: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub coverage_estimate: Option<CoverageEstimate>,
}

fn uniform_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn sq_chordal(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `|⟨a|b⟩|` for complex vectors in the split real layout.
fn complex_overlap(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len() / 2;
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..m {
        let (ar, ai, br, bi) = (a[k], a[m + k], b[k], b[m + k]);
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    (re * re + im * im).sqrt()
}

/// Squared distance in the given metric.
pub fn sq_distance(metric: Metric, a: &[f64], b: &[f64]) -> f64 {
    match metric {
        Metric::Chordal => sq_chordal(a, b),
        Metric::Projective => (2.0 - 2.0 * complex_overlap(a, b)).max(0.0),
    }
}

/// Volumetric upper bound `(1 + 2/ε)^n` on any ε-separated set in `S^{n−1}`.
pub fn max_card_bound(n: usize, eps: f64) -> f64 {
    (1.0 + 2.0 / eps).powi(n as i32)
}

/// Cap-counting lower bound `2 / sin^{n−1} θ`, `θ = 2 arcsin(ε/2)`, on any ε-net.
pub fn min_card_bound(n: usize, eps: f64) -> Result<f64> {
    ensure!(n >= 1, Parameter, "sphere dimension must be positive");
    ensure!(eps > 0.0, Parameter, "eps must be positive");
    ensure!(eps < std::f64::consts::SQRT_2, OutOfValidity, "eps = {eps} ≥ √2 puts θ at or beyond π/2");
    let theta = 2.0 * (eps / 2.0).asin();
    Ok(2.0 / theta.sin().powi(n as i32 - 1))
}

fn greedy<R: Rng + ?Sized>(
    n: usize,
    eps: f64,
    metric: Metric,
    rng: &mut R,
    max_failures: Option<usize>,
) -> Result<(Vec<Vec<f64>>, usize, u64)> {
    let eps2 = eps * eps;
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut failures = 0usize;
    let mut drawn = 0u64;
    loop {
        let limit = max_failures.unwrap_or(50 * points.len().max(1));
        if failures >= limit {
            return Ok((points, limit, drawn));
        }
        let cand = uniform_point(n, rng);
        drawn += 1;
        if points.iter().all(|p| sq_distance(metric, p, &cand) >= eps2) {
            points.push(cand);
            failures = 0;
            ensure!(points.len() <= DESK_LIMIT, Parameter, "net exceeded {DESK_LIMIT} points");
        } else {
            failures += 1;
        }
    }
}

/// Maximal ε-separated family in `S^{n−1}` by rejection sampling; stops after
/// `max_failures` consecutive rejections (default `50·card`).
pub fn build_net(n: usize, eps: f64, seeds: SeedStream, max_failures: Option<usize>) -> Result<SphereNet> {
    ensure!(n >= 1, Parameter, "sphere dimension must be positive");
    ensure!(eps > 0.0 && eps < 2.0, Parameter, "eps must lie in (0, 2), got {eps}");
    if eps < std::f64::consts::SQRT_2 {
        let need = min_card_bound(n, eps)?;
        ensure!(need <= DESK_LIMIT as f64, Parameter, "an {eps}-net of S^{} needs at least {need:.3e} points", n - 1);
    }
    let mut rng = seeds.rng(0);
    let (points, limit, drawn) = greedy(n, eps, Metric::Chordal, &mut rng, max_failures)?;
    let net = SphereNet {
        real_dim: n,
        eps,
        method: NetMethod::GreedySeparated,
        metric: Metric::Chordal,
        points,
        max_failures: limit,
        samples_drawn: drawn,
        seed: Some(seeds.seed),
        coverage_estimate: None,
    };
    if net.points.len() as f64 > max_card_bound(n, eps) {
        return Err(Error::Internal(format!("{} points exceed the volumetric bound", net.points.len())));
    }
    Ok(net)
}

/// Greedy ε-separated family on the complex sphere of `C^m` in the
/// projective metric. Separation there implies chordal separation, so the
/// volumetric bound on `S^{2m−1}` still applies.
pub fn build_projective_net(m: usize, eps: f64, seeds: SeedStream, max_failures: Option<usize>) -> Result<SphereNet> {
    ensure!(m >= 1, Parameter, "dimension must be positive");
    ensure!(eps > 0.0 && eps < std::f64::consts::SQRT_2, Parameter, "projective eps must lie in (0, √2), got {eps}");
    // A projective ε-net of CP^{m−1} lifts to a chordal net of S^{2m−1} only after phases,
    // so compare against the real sphere of one dimension less.
    let need = if m >= 2 { min_card_bound(2 * m - 1, eps)? / 2.0 } else { 1.0 };
    ensure!(need <= DESK_LIMIT as f64, Parameter, "a projective {eps}-net of C^{m} needs about {need:.3e} points");
    let mut rng = seeds.rng(0);
    let (points, limit, drawn) = greedy(2 * m, eps, Metric::Projective, &mut rng, max_failures)?;
    let net = SphereNet {
        real_dim: 2 * m,
        eps,
        method: NetMethod::GreedySeparated,
        metric: Metric::Projective,
        points,
        max_failures: limit,
        samples_drawn: drawn,
        seed: Some(seeds.seed),
        coverage_estimate: None,
    };
    if net.points.len() as f64 > max_card_bound(2 * m, eps) {
        return Err(Error::Internal(format!("{} points exceed the volumetric bound", net.points.len())));
    }
    Ok(net)
}

/// `count` independent uniform points.
pub fn random_net(n: usize, count: usize, seeds: SeedStream) -> Result<SphereNet> {
    ensure!(n >= 1 && count >= 1, Parameter, "need n ≥ 1 and at least one point");
    let mut rng = seeds.rng(0);
    Ok(SphereNet {
        real_dim: n,
        eps: 2.0,
        method: NetMethod::Random,
        metric: Metric::Chordal,
        points: (0..count).map(|_| uniform_point(n, &mut rng)).collect(),
        max_failures: 0,
        samples_drawn: count as u64,
        seed: Some(seeds.seed),
        coverage_estimate: None,
    })
}

impl SphereNet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exact pairwise check `d(p_i, p_j)² ≥ ε²`, no tolerance.
    pub fn is_separated(&self) -> bool {
        let eps2 = self.eps * self.eps;
        (0..self.points.len())
            .into_par_iter()
            .all(|i| (0..i).all(|j| sq_distance(self.metric, &self.points[i], &self.points[j]) >= eps2))
    }

    pub fn all_unit(&self, tol: f64) -> bool {
        self.points.iter().all(|p| (p.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() <= tol)
    }

    /// Points as pure states; requires an even real dimension.
    pub fn states(&self) -> Result<Vec<PureState>> {
        ensure!(self.real_dim % 2 == 0, Shape, "odd real dimension {} is not a complex sphere", self.real_dim);
        self.points.iter().map(|p| point_to_state(p)).collect()
    }

    /// Distance from `x` to the nearest net point.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        self.points
            .iter()
            .map(|p| sq_distance(self.metric, p, x))
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let net: SphereNet = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        ensure!(net.points.iter().all(|p| p.len() == net.real_dim), Shape, "point length differs from realDim");
        Ok(net)
    }

    /// Binary form: `u64` LE header length, JSON header without points, then
    /// the coordinates as little-endian `f64`, point after point.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let header = BinaryHeader {
            real_dim: self.real_dim,
            eps: self.eps,
            method: self.method,
            metric: self.metric,
            count: self.points.len(),
            max_failures: self.max_failures,
            samples_drawn: self.samples_drawn,
            seed: self.seed,
        };
        let h = serde_json::to_vec(&header).map_err(|e| Error::Internal(e.to_string()))?;
        let io = |e: std::io::Error| Error::Input(format!("i/o: {e}"));
        w.write_all(&(h.len() as u64).to_le_bytes()).map_err(io)?;
        w.write_all(&h).map_err(io)?;
        for p in &self.points {
            for x in p {
                w.write_all(&x.to_le_bytes()).map_err(io)?;
            }
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let io = |e: std::io::Error| Error::Input(format!("i/o: {e}"));
        let mut len = [0u8; 8];
        r.read_exact(&mut len).map_err(io)?;
        let len = u64::from_le_bytes(len) as usize;
        ensure!(len <= 1 << 20, Input, "implausible header length {len}");
        let mut h = vec![0u8; len];
        r.read_exact(&mut h).map_err(io)?;
        let header: BinaryHeader = serde_json::from_slice(&h).map_err(|e| Error::Input(e.to_string()))?;
        let mut points = Vec::with_capacity(header.count);
        let mut buf = [0u8; 8];
        for _ in 0..header.count {
            let mut p = Vec::with_capacity(header.real_dim);
            for _ in 0..header.real_dim {
                r.read_exact(&mut buf).map_err(io)?;
                p.push(f64::from_le_bytes(buf));
            }
            points.push(p);
        }
        Ok(SphereNet {
            real_dim: header.real_dim,
            eps: header.eps,
            method: header.method,
            metric: header.metric,
            points,
            max_failures: header.max_failures,
            samples_drawn: header.samples_drawn,
            seed: header.seed,
            coverage_estimate: None,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BinaryHeader {
    real_dim: usize,
    eps: f64,
    method: NetMethod,
    metric: Metric,
    count: usize,
    max_failures: usize,
    samples_drawn: u64,
    seed: Option<u64>,
}

pub fn point_to_state(p: &[f64]) -> Result<PureState> {
    let m = p.len() / 2;
    PureState::normalize(CVector::from_fn(m, |k, _| C64::new(p[k], p[m + k])))
}

pub fn state_to_point(psi: &PureState) -> Vec<f64> {
    let v = psi.vector();
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

/// Fraction of `samples` uniform sphere points within `radius` of the net,
/// measured in the net's own metric. Sample `i` uses stream `i`.
pub fn verify_cover(net: &SphereNet, samples: usize, radius: f64, seeds: SeedStream) -> Result<CoverageEstimate> {
    ensure!(radius > 0.0, Parameter, "radius must be positive");
    ensure!(samples >= 1, Parameter, "need at least one sample");
    ensure!(!net.points.is_empty(), Input, "empty net");
    let r2 = radius * radius;
    let dists: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let x = uniform_point(net.real_dim, &mut rng);
            net.points.iter().map(|p| sq_distance(net.metric, p, &x)).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let uncovered = dists.iter().filter(|&&d| d > r2).count();
    Ok(CoverageEstimate {
        fraction_covered: (samples - uncovered) as f64 / samples as f64,
        samples,
        radius,
        uncovered,
        worst_distance: dists.iter().copied().fold(0.0, f64::max).sqrt(),
    })
}

/// `{e^{2πij/d} φ_i : 1 ≤ j ≤ d}` for a net on a complex sphere.
pub fn phase_expand(net: &SphereNet, d: usize) -> Result<SphereNet> {
    ensure!(d >= 1, Parameter, "phase count must be positive");
    let states = net.states()?;
    let mut points = Vec::with_capacity(states.len() * d);
    for psi in &states {
        for j in 1..=d {
            points.push(state_to_point(&psi.with_phase(2.0 * std::f64::consts::PI * j as f64 / d as f64)));
        }
    }
    Ok(SphereNet {
        real_dim: net.real_dim,
        eps: net.eps,
        method: net.method,
        metric: Metric::Chordal,
        points,
        max_failures: net.max_failures,
        samples_drawn: net.samples_drawn,
        seed: net.seed,
        coverage_estimate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sphere() {
        let net = build_net(1, 0.5, SeedStream::new(1), None).unwrap();
        let mut pts: Vec<f64> = net.points.iter().map(|p| p[0]).collect();
        pts.sort_by(f64::total_cmp);
        assert_eq!(pts, vec![-1.0, 1.0]);
    }

    #[test]
    fn circle_at_sqrt2() {
        let eps = 2f64.sqrt();
        for seed in 0..20 {
            let net = build_net(2, eps, SeedStream::new(seed), None).unwrap();
            assert!(net.len() >= 2 && net.len() <= 5, "{}", net.len());
            assert!(net.is_separated());
        }
    }

    #[test]
    fn min_card_bound_values() {
        assert!((min_card_bound(3, 1.0).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        assert!((min_card_bound(2, 2f64.sqrt() - 1e-12).unwrap() - 2.0).abs() < 1e-6);
        assert!(matches!(min_card_bound(2, 1.5), Err(Error::OutOfValidity(_))));
    }

    #[test]
    fn sandwich_and_separation() {
        for (n, eps) in [(2, 0.3), (3, 0.5), (4, 0.6), (5, 0.9)] {
            let net = build_net(n, eps, SeedStream::new(n as u64), None).unwrap();
            assert!(net.is_separated());
            assert!(net.all_unit(1e-12));
            let lo = min_card_bound(n, eps).unwrap();
            assert!(lo <= net.len() as f64 && net.len() as f64 <= max_card_bound(n, eps), "n={n}");
        }
    }

    #[test]
    fn cover_full_radius_and_tiny_cap() {
        let net = build_net(3, 0.5, SeedStream::new(2), None).unwrap();
        assert_eq!(verify_cover(&net, 1000, 2.0, SeedStream::new(3)).unwrap().fraction_covered, 1.0);
        let single = SphereNet { points: vec![vec![0.0, 0.0, 1.0]], ..net.clone() };
        let f = verify_cover(&single, 20_000, 0.1, SeedStream::new(4)).unwrap().fraction_covered;
        // Cap area fraction (1 − cos θ)/2 with chord 0.1: 0.0025.
        assert!(f < 0.01 && f > 0.0005, "{f}");
    }

    #[test]
    fn projective_net_properties() {
        let net = build_projective_net(2, 0.3, SeedStream::new(5), None).unwrap();
        assert!(net.is_separated());
        assert!(net.all_unit(1e-12));
        // Projective distance never exceeds chordal distance.
        for i in 0..net.len().min(50) {
            for j in 0..i {
                let pr = sq_distance(Metric::Projective, &net.points[i], &net.points[j]);
                let ch = sq_distance(Metric::Chordal, &net.points[i], &net.points[j]);
                assert!(pr <= ch + 1e-15);
            }
        }
        let cov = verify_cover(&net, 5000, 0.3, SeedStream::new(6)).unwrap();
        assert!(cov.fraction_covered > 0.999, "{:?}", cov);
    }

    #[test]
    fn phase_expansion_covers_chordally() {
        let net = build_projective_net(2, 0.25, SeedStream::new(7), None).unwrap();
        let d = 8;
        let ex = phase_expand(&net, d).unwrap();
        assert!(ex.len() <= d * net.len());
        // Phase step 2π/d adds at most 2 sin(π/(2d)) of chordal error.
        let slack = 0.25 + 2.0 * (std::f64::consts::PI / (2.0 * d as f64)).sin();
        let cov = verify_cover(&ex, 3000, slack, SeedStream::new(8)).unwrap();
        assert!(cov.fraction_covered > 0.999, "{:?}", cov);
    }

    #[test]
    fn refuses_astronomical_nets() {
        assert!(build_net(20, 0.1, SeedStream::new(1), None).is_err());
        assert!(build_net(3, 2.5, SeedStream::new(1), None).is_err());
    }

    #[test]
    fn serialization_round_trips() {
        let net = build_net(3, 0.8, SeedStream::new(9), None).unwrap();
        let back = SphereNet::from_json(&net.to_json().unwrap()).unwrap();
        assert_eq!(back, net);
        let mut buf = Vec::new();
        net.write_binary(&mut buf).unwrap();
        let back = SphereNet::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back.points, net.points);
        assert_eq!(back.eps, net.eps);
    }

    #[test]
    fn state_layout_round_trip() {
        let mut rng = SeedStream::new(10).rng(0);
        let psi = crate::hermitian::haar_pure(3, &mut rng);
        let back = point_to_state(&state_to_point(&psi)).unwrap();
        assert!((back.vector() - psi.vector()).norm() < 1e-15);
    }
}
