//! Hilbert–Schmidt in- and outradii of D and Sep about `ρ_*`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauge_d;
use crate::error::{ensure, Result};
use crate::hermitian::{
    gue_traceless, haar_product_pure, haar_pure, partial_transpose, random_density, HermitianMatrix,
    SeedStream, TracelessDirection,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "body")]
pub enum BallBody {
    /// `D(C^m)`.
    D { m: usize },
    /// `Sep(C^d ⊗ C^d)`.
    Sep { d: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AsphericityReport {
    pub body: BallBody,
    pub inradius: f64,
    pub outradius: f64,
    pub ratio: f64,
    /// Smallest boundary distance found along sampled and refined directions.
    pub inradius_numeric: Option<f64>,
    /// Largest distance from `ρ_*` over sampled extreme points.
    pub outradius_numeric: f64,
    pub inradius_verified: bool,
    pub samples: usize,
    pub note: String,
}

fn outradius_scan(m: usize, samples: usize, seeds: SeedStream, product: Option<usize>) -> f64 {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let psi = match product {
                Some(d) => haar_product_pure(d, &mut rng),
                None => haar_pure(m, &mut rng),
            };
            let pure = TracelessDirection::project(&psi.projector()).hs_norm();
            let mixed = TracelessDirection::project(random_density(m, 2, &mut rng).matrix()).hs_norm();
            pure.max(mixed)
        })
        .reduce(|| 0.0, f64::max)
}

/// Boundary distance of D along unit `A` is `1/gauge_D(A)`; its minimum over
/// the sphere is attained at `A ∝ −(|v⟩⟨v| − ρ_*)`. Each sample is refined by
/// one step onto that family.
fn inradius_scan(m: usize, samples: usize, seeds: SeedStream) -> Result<f64> {
    let found: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = seeds.rng(i as u64);
            let a = gue_traceless(m, &mut rng).normalized();
            let raw = 1.0 / gauge_d(&a)?;
            let (_, v) = a.matrix().eigh()?.bottom();
            let refined = TracelessDirection::project(&HermitianMatrix::outer(&v)).normalized().neg();
            Ok(raw.min(1.0 / gauge_d(&refined)?))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().fold(f64::INFINITY, f64::min))
}

/// `(inradius, outradius, ratio)` of the HS balls around `ρ_*` for D or Sep,
/// with numerical re-verification over `samples` seeded draws.
pub fn asphericity_hsball(body: BallBody, samples: usize, seeds: SeedStream) -> Result<AsphericityReport> {
    ensure!(samples >= 1, Parameter, "samples must be positive");
    match body {
        BallBody::D { m } => {
            ensure!(m >= 2, Parameter, "D(C^{m}) needs m ≥ 2");
            let mf = m as f64;
            let inradius = 1.0 / (mf * (mf - 1.0)).sqrt();
            let outradius = ((mf - 1.0) / mf).sqrt();
            let inr = inradius_scan(m, samples, seeds.child(1))?;
            let outr = outradius_scan(m, samples, seeds.child(2), None);
            Ok(AsphericityReport {
                body,
                inradius,
                outradius,
                ratio: outradius / inradius,
                inradius_numeric: Some(inr),
                outradius_numeric: outr,
                inradius_verified: (inr - inradius).abs() <= 1e-9,
                samples,
                note: "inradius from the gauge of D, outradius from pure states".into(),
            })
        }
        BallBody::Sep { d } => {
            ensure!(d >= 2, Parameter, "Sep(C^{d}⊗C^{d}) needs d ≥ 2");
            let m = d * d;
            let mf = m as f64;
            let inradius = 1.0 / (mf * (mf - 1.0)).sqrt();
            let outradius = ((mf - 1.0) / mf).sqrt();
            let outr = outradius_scan(m, samples, seeds.child(2), Some(d));
            let (verified, note) = if d == 2 {
                // Every state on the inscribed sphere must pass the exact PPT test.
                let all_ppt = (0..samples).into_par_iter().all(|i| {
                    let mut rng = seeds.child(3).rng(i as u64);
                    let x = gue_traceless(m, &mut rng).normalized().scale(inradius).to_point();
                    partial_transpose(&x, d).map(|pt| pt.lambda_min() >= -1e-10).unwrap_or(false)
                });
                (all_ppt, "inradius checked by the PPT test on sampled boundary states".to_string())
            } else {
                (false, "no exact separability test above d = 2; inradius not verified".to_string())
            };
            Ok(AsphericityReport {
                body,
                inradius,
                outradius,
                ratio: outradius / inradius,
                inradius_numeric: None,
                outradius_numeric: outr,
                inradius_verified: verified,
                samples,
                note,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_ball() {
        let r = asphericity_hsball(BallBody::D { m: 2 }, 64, SeedStream::new(1)).unwrap();
        let s = 0.5f64.sqrt();
        assert!((r.inradius - s).abs() < 1e-15 && (r.outradius - s).abs() < 1e-15);
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!((r.inradius_numeric.unwrap() - s).abs() < 1e-9);
        assert!((r.outradius_numeric - s).abs() < 1e-9);
    }

    #[test]
    fn ratio_m_minus_one() {
        for m in 2..=5 {
            let r = asphericity_hsball(BallBody::D { m }, 32, SeedStream::new(2)).unwrap();
            assert!((r.ratio - (m as f64 - 1.0)).abs() < 1e-9);
            assert!(r.inradius_verified);
        }
    }

    #[test]
    fn separable_two_qubits() {
        let r = asphericity_hsball(BallBody::Sep { d: 2 }, 500, SeedStream::new(3)).unwrap();
        assert!((r.ratio - 3.0).abs() < 1e-9);
        assert!(r.inradius_verified);
        let r3 = asphericity_hsball(BallBody::Sep { d: 3 }, 10, SeedStream::new(3)).unwrap();
        assert!(!r3.inradius_verified);
        assert!(asphericity_hsball(BallBody::D { m: 1 }, 10, SeedStream::new(3)).is_err());
    }
}
