//! Entanglement detection by positive maps, robust entanglement, and the
//! inscribed-ball and mixing-factor checks on two qubits.

pub mod maps;

pub use maps::{builtin_map, complete_range, unitalize, BuiltinMap, MapFlags, PositiveMapRep, Provenance};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::hermitian::{
    apply_map_tensor_id, bullet_scale, check_same_dim, gue_traceless, haar_pure, partial_transpose, random_density, schmidt,
    HermitianMatrix, PureState, SeedStream, C64, CVector,
};

/// Default sign tolerance for eigenvalues of unit-trace matrices.
pub const SIGN_TOL: f64 = 1e-9;

/// `(λ_min((Φ⊗I)ρ) < −tol, λ_min)`.
pub fn detects(map: &PositiveMapRep, rho: &HermitianMatrix, tol: f64) -> Result<(bool, f64)> {
    check_same_dim(rho.dim(), map.d_in * map.d_in, "state on C^d⊗C^d vs map input")?;
    let l = apply_map_tensor_id(map, rho)?.lambda_min();
    Ok((l < -tol, l))
}

/// Exact separability on `C²⊗C²` (positive partial transpose).
pub fn is_separable_2x2(rho: &HermitianMatrix, tol: f64) -> Result<bool> {
    ensure!(rho.dim() == 4, Capability, "the PPT test decides separability only on C²⊗C², got dimension {}", rho.dim());
    Ok(partial_transpose(rho, 2)?.lambda_min() >= -tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EntanglementVerdict {
    pub entangled: bool,
    /// False when a PPT state above `C²⊗C²` was called separable.
    pub verified: bool,
}

/// Whether `eps∙ρ` is entangled. Exact on `C²⊗C²`; above that a negative
/// partial transpose still proves entanglement, but a PPT answer is unverified.
pub fn epsilon_entangled(rho: &HermitianMatrix, eps: f64, tol: f64) -> Result<EntanglementVerdict> {
    ensure!(eps > 0.0 && eps <= 1.0, Parameter, "eps must lie in (0, 1], got {eps}");
    let d = crate::hermitian::local_dim(rho.dim())?;
    let x = bullet_scale(eps, rho)?;
    let npt = partial_transpose(&x, d)?.lambda_min() < -tol;
    Ok(EntanglementVerdict { entangled: npt, verified: npt || d == 2 })
}

/// `½∙ρ` entangled.
pub fn robustly_entangled(rho: &HermitianMatrix, tol: f64) -> Result<EntanglementVerdict> {
    epsilon_entangled(rho, 0.5, tol)
}

/// `|Φ+⟩ = Σ|ii⟩/√d`.
pub fn phi_plus(d: usize) -> PureState {
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    PureState::new(v).expect("unit vector")
}

/// `w|Φ+⟩⟨Φ+| + (1−w)ρ_*` on `C²⊗C²`.
pub fn werner(w: f64) -> HermitianMatrix {
    bullet_scale(w, &phi_plus(2).projector()).expect("unit trace")
}

/// Bisection for the switch point of a predicate that is false at `lo` and
/// true at `hi`.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, pred: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    ensure!(!pred(lo)? && pred(hi)?, Parameter, "predicate must be false at {lo} and true at {hi}");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectionVerdict {
    Detected,
    Undetected,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionReport {
    pub state_id: usize,
    pub family_size: usize,
    pub detected_by: Vec<usize>,
    pub min_eigenvalues: Vec<f64>,
    pub verdict: DetectionVerdict,
}

pub fn detection_report(family: &[PositiveMapRep], rho: &HermitianMatrix, state_id: usize, tol: f64) -> Result<DetectionReport> {
    let mut detected_by = Vec::new();
    let mut min_eigenvalues = Vec::with_capacity(family.len());
    for (i, map) in family.iter().enumerate() {
        let (hit, l) = detects(map, rho, tol)?;
        if hit {
            detected_by.push(i);
        }
        min_eigenvalues.push(l);
    }
    let verdict = if detected_by.is_empty() { DetectionVerdict::Undetected } else { DetectionVerdict::Detected };
    Ok(DetectionReport { state_id, family_size: family.len(), detected_by, min_eigenvalues, verdict })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverageReport {
    pub states: usize,
    pub detected: usize,
    pub coverage: f64,
    pub per_map: Vec<usize>,
    /// True when the states are certified robustly entangled (only on
    /// `C²⊗C²`); otherwise coverage is a lower bound with an unverified
    /// complement.
    pub exact: bool,
}

/// Fraction of `states` detected by at least one family member.
pub fn family_coverage(family: &[PositiveMapRep], states: &[HermitianMatrix], exact: bool, tol: f64) -> Result<CoverageReport> {
    ensure!(!family.is_empty(), Parameter, "empty family");
    let reports: Vec<DetectionReport> = states
        .par_iter()
        .enumerate()
        .map(|(i, rho)| detection_report(family, rho, i, tol))
        .collect::<Result<_>>()?;
    let mut per_map = vec![0; family.len()];
    for r in &reports {
        for &i in &r.detected_by {
            per_map[i] += 1;
        }
    }
    let detected = reports.iter().filter(|r| r.verdict == DetectionVerdict::Detected).count();
    Ok(CoverageReport {
        states: states.len(),
        detected,
        coverage: if states.is_empty() { 0.0 } else { detected as f64 / states.len() as f64 },
        per_map,
        exact,
    })
}

const MAX_REJECTIONS: usize = 10_000;

/// `count` robustly entangled two-qubit states by rejection from Haar pure
/// and rank-2 states; state `i` draws from stream `i`.
pub fn sample_robustly_entangled_2x2(count: usize, seeds: SeedStream) -> Result<Vec<HermitianMatrix>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            for _ in 0..MAX_REJECTIONS {
                let rho = if i % 2 == 0 { haar_pure(4, &mut rng).projector() } else { random_density(4, 2, &mut rng).into_matrix() };
                if robustly_entangled(&rho, SIGN_TOL)?.entangled {
                    return Ok(rho);
                }
            }
            Err(Error::Internal("no robustly entangled state found".into()))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceBoundReport {
    pub samples: usize,
    pub min_trace: f64,
    pub max_trace: f64,
    pub bound: f64,
    /// Largest gap between the direct trace and `Σ λ_i² tr Φ(|e_i⟩⟨e_i|)` over pure samples.
    pub max_schmidt_deviation: f64,
    pub passed: bool,
}

/// `0 ≤ tr[(Φ⊗I)ρ] ≤ d` over pure (even streams) and mixed (odd) states.
pub fn trace_bound_check(map: &PositiveMapRep, samples: usize, seeds: SeedStream) -> Result<TraceBoundReport> {
    ensure!(map.is_unital(1e-10), Precondition, "map {} is not unital; unitalize it first", map.name);
    ensure!(samples >= 1, Parameter, "need at least one sample");
    let d = map.d_in;
    let rows: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            if i % 2 == 0 {
                let psi = haar_pure(d * d, &mut rng);
                let direct = apply_map_tensor_id(map, &psi.projector())?.trace();
                let s = schmidt(&psi)?;
                let via: f64 = s
                    .coefficients
                    .iter()
                    .zip(&s.left)
                    .map(|(l, e)| l * l * map.apply_hermitian(&HermitianMatrix::outer(e)).map(|h| h.trace()).unwrap_or(f64::NAN))
                    .sum();
                Ok((direct, (direct - via).abs()))
            } else {
                let rho = random_density(d * d, 1 + i % (d * d), &mut rng).into_matrix();
                Ok((apply_map_tensor_id(map, &rho)?.trace(), 0.0))
            }
        })
        .collect::<Result<_>>()?;
    let min_trace = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_trace = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let max_schmidt_deviation = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let bound = d as f64;
    Ok(TraceBoundReport {
        samples,
        min_trace,
        max_trace,
        bound,
        max_schmidt_deviation,
        passed: min_trace >= -1e-9 && max_trace <= bound + 1e-9 && max_schmidt_deviation <= 1e-9,
    })
}

/// `(t/(1+t))∙(M/t) = (M + ρ_*)/(1+t)` with `t = tr M`; returns the largest
/// entry deviation.
pub fn bullet_identity_check(m: &HermitianMatrix) -> Result<(bool, f64)> {
    let t = m.trace();
    ensure!(t > 0.0, Parameter, "trace must be positive, got {t}");
    ensure!(m.lambda_min() >= -1e-12 * t, Precondition, "matrix is not positive semidefinite");
    let n = m.dim();
    let lhs = bullet_scale(t / (1.0 + t), &m.scale(1.0 / t))?;
    let rho = HermitianMatrix::identity(n).scale(1.0 / n as f64);
    let rhs = (m + &rho).scale(1.0 / (1.0 + t));
    let dev = lhs.max_abs_diff(&rhs);
    Ok((dev <= 1e-12, dev))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BallCheckReport {
    pub d: usize,
    pub radius_or_factor: f64,
    pub samples: usize,
    pub separable: usize,
    pub all_separable: bool,
    /// Smallest eigenvalue of a partial transpose over the samples.
    pub min_ppt_eigenvalue: f64,
    pub seed: u64,
}

fn ppt_min(rho: &HermitianMatrix) -> Result<f64> {
    Ok(partial_transpose(rho, 2)?.lambda_min())
}

fn ball_report(d: usize, r: f64, mins: Vec<f64>, seeds: SeedStream) -> BallCheckReport {
    let separable = mins.iter().filter(|&&l| l >= -SIGN_TOL).count();
    BallCheckReport {
        d,
        radius_or_factor: r,
        samples: mins.len(),
        separable,
        all_separable: separable == mins.len(),
        min_ppt_eigenvalue: mins.iter().copied().fold(f64::INFINITY, f64::min),
        seed: seeds.seed,
    }
}

/// States `ρ_* + r·A/‖A‖_HS` on the sphere of radius `r = 1/√(d²(d²−1))`
/// must all be separable.
pub fn gurvits_barnum_check(d: usize, samples: usize, seeds: SeedStream) -> Result<BallCheckReport> {
    ensure!(d == 2, Capability, "no exact separability test on C^{d}⊗C^{d}");
    let m = (d * d) as f64;
    let r = 1.0 / (m * (m - 1.0)).sqrt();
    let mins: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| ppt_min(&gue_traceless(d * d, &mut seeds.rng(i as u64)).normalized().scale(r).to_point()))
        .collect::<Result<_>>()?;
    Ok(ball_report(d, r, mins, seeds))
}

/// `(2/(2+d²))∙ρ` must be separable for every state; pure states on even
/// streams, mixed states of varying rank on odd ones.
pub fn vidal_tarrach_check(d: usize, samples: usize, seeds: SeedStream) -> Result<BallCheckReport> {
    ensure!(d == 2, Capability, "no exact separability test on C^{d}⊗C^{d}");
    let factor = 2.0 / (2.0 + (d * d) as f64);
    let mins: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let rho = if i % 2 == 0 { haar_pure(4, &mut rng).projector() } else { random_density(4, 1 + i % 4, &mut rng).into_matrix() };
            ppt_min(&bullet_scale(factor, &rho)?)
        })
        .collect::<Result<_>>()?;
    Ok(ball_report(d, factor, mins, seeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::haar_product_pure;

    #[test]
    fn transpose_on_bell_state() {
        let t = builtin_map(BuiltinMap::Transpose, 2).unwrap();
        let (hit, l) = detects(&t, &phi_plus(2).projector(), SIGN_TOL).unwrap();
        assert!(hit && (l + 0.5).abs() < 1e-12);
        let (hit, _) = detects(&t, &werner(0.5), SIGN_TOL).unwrap();
        assert!(hit);
        let (hit, _) = detects(&t, &HermitianMatrix::identity(4).scale(0.25), SIGN_TOL).unwrap();
        assert!(!hit);
        assert!(detects(&t, &HermitianMatrix::identity(9).scale(1.0 / 9.0), SIGN_TOL).is_err());
        let id = builtin_map(BuiltinMap::Identity, 2).unwrap();
        assert!(!detects(&id, &phi_plus(2).projector(), SIGN_TOL).unwrap().0);
    }

    #[test]
    fn werner_threshold() {
        // Oracle: partial-transpose spectrum of the Werner state is {(1+w)/4 ×3, (1−3w)/4}.
        for w in [0.0, 0.2, 0.5, 0.9] {
            assert!((ppt_min(&werner(w)).unwrap() - (1.0 - 3.0 * w) / 4.0).abs() < 1e-12);
        }
        let t = bisect(0.0, 1.0, 1e-12, |w| Ok(!is_separable_2x2(&werner(w), 0.0)?)).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-9);
        assert!(is_separable_2x2(&HermitianMatrix::identity(9).scale(1.0 / 9.0), 0.0).is_err());
    }

    #[test]
    fn robust_and_epsilon() {
        assert!(robustly_entangled(&phi_plus(2).projector(), SIGN_TOL).unwrap().entangled);
        assert!(!robustly_entangled(&HermitianMatrix::identity(4).scale(0.25), SIGN_TOL).unwrap().entangled);
        assert!(!robustly_entangled(&werner(0.4), SIGN_TOL).unwrap().entangled);
        let e = bisect(0.01, 1.0, 1e-12, |e| Ok(epsilon_entangled(&phi_plus(2).projector(), e, 0.0)?.entangled)).unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-9);
        // d = 3: PPT answers are unverified.
        let v = robustly_entangled(&HermitianMatrix::identity(9).scale(1.0 / 9.0), SIGN_TOL).unwrap();
        assert!(!v.entangled && !v.verified);
    }

    #[test]
    fn positive_maps_miss_product_states() {
        for d in [2, 3] {
            let mut maps = vec![
                builtin_map(BuiltinMap::Identity, d).unwrap(),
                builtin_map(BuiltinMap::Transpose, d).unwrap(),
                builtin_map(BuiltinMap::Reduction, d).unwrap(),
                builtin_map(BuiltinMap::RandomUnitalCp { seed: 3 }, d).unwrap(),
            ];
            if d == 3 {
                maps.push(builtin_map(BuiltinMap::ChoiD3, 3).unwrap());
            }
            let mut rng = SeedStream::new(d as u64).rng(0);
            for _ in 0..100 {
                let v = haar_product_pure(d, &mut rng).projector();
                for m in &maps {
                    assert!(!detects(m, &v, SIGN_TOL).unwrap().0, "{}", m.name);
                }
            }
        }
    }

    #[test]
    fn coverage_extremes() {
        let states = sample_robustly_entangled_2x2(100, SeedStream::new(4)).unwrap();
        let t = builtin_map(BuiltinMap::Transpose, 2).unwrap();
        let id = builtin_map(BuiltinMap::Identity, 2).unwrap();
        assert_eq!(family_coverage(&[t.clone()], &states, true, SIGN_TOL).unwrap().coverage, 1.0);
        assert_eq!(family_coverage(&[id.clone()], &states, true, SIGN_TOL).unwrap().coverage, 0.0);
        let both = family_coverage(&[id, t], &states, true, SIGN_TOL).unwrap();
        assert_eq!(both.per_map, vec![0, 100]);
        assert!(family_coverage(&[], &states, true, SIGN_TOL).is_err());
    }

    #[test]
    fn trace_bounds() {
        let r = unitalize(&builtin_map(BuiltinMap::Reduction, 2).unwrap()).unwrap();
        let rep = trace_bound_check(&r, 200, SeedStream::new(5)).unwrap();
        assert!(rep.passed, "{rep:?}");
        let id = builtin_map(BuiltinMap::Identity, 3).unwrap();
        let rep = trace_bound_check(&id, 50, SeedStream::new(6)).unwrap();
        assert!((rep.min_trace - 1.0).abs() < 1e-12 && (rep.max_trace - 1.0).abs() < 1e-12);
        // At d = 2 the reduction map is already unital; d = 3 is not.
        let raw = builtin_map(BuiltinMap::Reduction, 3).unwrap();
        assert!(matches!(trace_bound_check(&raw, 10, SeedStream::new(6)), Err(Error::Precondition(_))));
    }

    #[test]
    fn bullet_identity_examples() {
        let rho = HermitianMatrix::identity(3).scale(1.0 / 3.0);
        assert!(bullet_identity_check(&rho).unwrap().0);
        let psi = haar_pure(3, &mut SeedStream::new(7).rng(0));
        let m = psi.projector().scale(2.0);
        assert!(bullet_identity_check(&m).unwrap().0);
        assert!(bullet_identity_check(&HermitianMatrix::zeros(2)).is_err());
    }

    #[test]
    fn inscribed_ball_is_tight() {
        let r = gurvits_barnum_check(2, 500, SeedStream::new(8)).unwrap();
        assert!(r.all_separable);
        // Along the Werner line the ball touches the boundary: w = r/‖Φ+ − ρ_*‖ = 1/3.
        let dir = crate::hermitian::TracelessDirection::project(&phi_plus(2).projector()).normalized();
        assert!(is_separable_2x2(&dir.scale(r.radius_or_factor).to_point(), 1e-12).unwrap());
        assert!(!is_separable_2x2(&dir.scale(1.05 * r.radius_or_factor).to_point(), 1e-12).unwrap());
        assert!(gurvits_barnum_check(3, 1, SeedStream::new(8)).is_err());
    }

    #[test]
    fn mixing_factor_third() {
        let r = vidal_tarrach_check(2, 500, SeedStream::new(9)).unwrap();
        assert!(r.all_separable);
        let boundary = ppt_min(&bullet_scale(1.0 / 3.0, &phi_plus(2).projector()).unwrap()).unwrap();
        assert!(boundary.abs() < 1e-10);
    }
}
