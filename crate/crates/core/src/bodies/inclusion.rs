//! Certification and falsification of `t∙K ⊂ L` through
//! `t·h_K(A) ≤ h_L(A)` for all traceless `A`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polytope::{membership_polytope, polytope_support, Membership, StatePolytope};
use super::{BodyOracle, HsBall, ScaledBody, StateSpace, Verdict};
use crate::error::{ensure, Error, Result};
use crate::hermitian::{
    bullet_scale, HermitianBasis, HermitianMatrix, MatrixRecord, SeedStream, TracelessDirection,
};

/// One side of an inclusion question.
#[derive(Clone, Copy)]
pub enum Operand<'a> {
    Polytope(&'a StatePolytope),
    /// The full state space `D(C^m)`.
    States(usize),
    Ball(HsBall),
    Oracle(&'a dyn BodyOracle),
}

impl Operand<'_> {
    fn dim(&self) -> usize {
        match self {
            Operand::Polytope(p) => p.dim(),
            Operand::States(m) => *m,
            Operand::Ball(b) => b.m,
            Operand::Oracle(o) => o.dim(),
        }
    }

    fn with_oracle<R>(&self, f: impl FnOnce(&dyn BodyOracle) -> R) -> R {
        match self {
            Operand::Polytope(p) => f(*p),
            Operand::States(m) => f(&StateSpace { m: *m }),
            Operand::Ball(b) => f(b),
            Operand::Oracle(o) => f(*o),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionStatus {
    Certified,
    NotFalsified,
    Falsified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Polytope into a body with an exact membership test (D, HS ball, Sep at d=2).
    PolytopeIntoExact,
    PolytopeIntoPolytope,
    /// HS ball into D, decided by the closed-form inradius.
    BallIntoStates,
    /// Support-function ascent; can only falsify.
    OracleIntoPolytope,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct InclusionBudget {
    /// Random directions evaluated without refinement.
    pub directions: usize,
    /// Independent ascent runs.
    pub restarts: usize,
    pub tol: f64,
}

impl Default for InclusionBudget {
    fn default() -> Self {
        Self { directions: 1000, restarts: 64, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InclusionReport {
    pub factor: f64,
    pub inner: String,
    pub outer: String,
    pub regime: Regime,
    pub status: InclusionStatus,
    pub witness_direction: Option<MatrixRecord>,
    /// Direction attaining `gap` in the search regime, violating or not.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremal_direction: Option<MatrixRecord>,
    /// Smallest `h_L(A) − t·h_K(A)` over the directions examined.
    pub gap: f64,
    pub directions_tested: usize,
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl InclusionReport {
    pub fn witness(&self) -> Option<TracelessDirection> {
        record_direction(self.witness_direction.as_ref())
    }

    pub fn extremal(&self) -> Option<TracelessDirection> {
        record_direction(self.extremal_direction.as_ref())
    }
}

fn record_direction(r: Option<&MatrixRecord>) -> Option<TracelessDirection> {
    r.and_then(|r| r.to_hermitian(1e-12).ok()).map(|h| TracelessDirection::project(&h))
}

/// Decides or tests `t∙K ⊂ L`. Unsupported pairs are a capability error.
pub fn check_inclusion(
    t: f64,
    k: Operand<'_>,
    l: Operand<'_>,
    budget: InclusionBudget,
    seeds: SeedStream,
) -> Result<InclusionReport> {
    ensure!(t.is_finite(), Parameter, "factor {t}");
    ensure!(budget.tol > 0.0, Parameter, "tol must be positive");
    ensure!(k.dim() == l.dim(), Shape, "inner dimension {} vs outer {}", k.dim(), l.dim());
    let (inner, outer) = (k.with_oracle(|o| o.label()), l.with_oracle(|o| o.label()));
    let mut report = InclusionReport {
        factor: t,
        inner,
        outer,
        regime: Regime::OracleIntoPolytope,
        status: InclusionStatus::NotFalsified,
        witness_direction: None,
        extremal_direction: None,
        gap: f64::INFINITY,
        directions_tested: 0,
        restarts: 0,
        tol: budget.tol,
        seed: seeds.seed,
    };
    match (k, l) {
        (Operand::Polytope(p), Operand::Polytope(q)) => {
            report.regime = Regime::PolytopeIntoPolytope;
            scaled_vertices(&mut report, t, p, |y| {
                Ok(match membership_polytope(y, q, budget.tol)? {
                    Membership::Inside { .. } => None,
                    Membership::Outside { direction, .. } => Some(direction),
                })
            }, |a| polytope_support(q, a))?;
        }
        (Operand::Polytope(p), Operand::States(_)) => {
            report.regime = Regime::PolytopeIntoExact;
            let d = StateSpace { m: p.dim() };
            scaled_vertices(&mut report, t, p, |y| {
                Ok(match d.membership(y, 1e-10)? {
                    Verdict::Inside => None,
                    Verdict::Outside(dir) => dir,
                    Verdict::Unknown => return Err(Error::Internal("state membership is exact".into())),
                })
            }, |a| d.support(a))?;
        }
        (Operand::Polytope(p), l @ (Operand::Ball(_) | Operand::Oracle(_))) => {
            let exact = l.with_oracle(|o| o.membership_is_exact());
            ensure!(exact, Capability, "no exact membership test for {}", report.outer);
            report.regime = Regime::PolytopeIntoExact;
            l.with_oracle(|o| {
                scaled_vertices(&mut report, t, p, |y| {
                    Ok(match o.membership(y, budget.tol)? {
                        Verdict::Inside => None,
                        Verdict::Outside(dir) => dir,
                        Verdict::Unknown => return Err(Error::Capability("membership undecided".into())),
                    })
                }, |a| o.support(a))
            })?;
        }
        (Operand::Ball(b), Operand::States(m)) => {
            report.regime = Regime::BallIntoStates;
            ball_into_states(&mut report, t, b, m, budget, seeds)?;
        }
        (k @ (Operand::States(_) | Operand::Ball(_) | Operand::Oracle(_)), Operand::Polytope(q)) => {
            report.regime = Regime::OracleIntoPolytope;
            k.with_oracle(|o| ascent(&mut report, t, o, q, budget, seeds))?;
        }
        _ => {
            return Err(Error::Capability(format!(
                "no decision or search procedure for {} ⊂ {}",
                report.inner, report.outer
            )))
        }
    }
    Ok(report)
}

/// Exact regimes: `t∙K ⊂ L` iff every `t∙v_i ∈ L`.
fn scaled_vertices(
    report: &mut InclusionReport,
    t: f64,
    p: &StatePolytope,
    outside: impl Fn(&HermitianMatrix) -> Result<Option<TracelessDirection>> + Sync,
    outer_support: impl Fn(&TracelessDirection) -> Result<f64> + Sync,
) -> Result<()> {
    let found: Vec<(usize, Option<TracelessDirection>)> = (0..p.len())
        .into_par_iter()
        .map(|i| -> Result<_> { Ok((i, outside(&bullet_scale(t, &p.vertex(i).projector())?)?)) })
        .collect::<Result<_>>()?;
    report.directions_tested = p.len();
    report.status = InclusionStatus::Certified;
    let mut gap = f64::INFINITY;
    for (_, dir) in found {
        if let Some(a) = dir {
            let a = a.normalized();
            let g = outer_support(&a)? - t_support(t, p, &a)?;
            if g < gap {
                gap = g;
                report.witness_direction = Some(MatrixRecord::from(a.matrix()));
            }
            report.status = InclusionStatus::Falsified;
        }
    }
    report.gap = if report.status == InclusionStatus::Falsified { gap } else { 0.0 };
    Ok(())
}

fn t_support(t: f64, p: &StatePolytope, a: &TracelessDirection) -> Result<f64> {
    ScaledBody { t, inner: p }.support(a)
}

fn ball_into_states(
    report: &mut InclusionReport,
    t: f64,
    b: HsBall,
    m: usize,
    budget: InclusionBudget,
    seeds: SeedStream,
) -> Result<()> {
    ensure!(m >= 2, Parameter, "D(C^1) has empty interior");
    let inradius = 1.0 / ((m * (m - 1)) as f64).sqrt();
    let r = t.abs() * b.radius;
    // Boundary sampling with the exact PSD test, as a numerical cross-check.
    let worst: Vec<(f64, TracelessDirection)> = (0..budget.directions)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let a = crate::hermitian::gue_traceless(m, &mut rng).normalized();
            let x = a.scale(r).to_point();
            (x.lambda_min(), a)
        })
        .collect();
    report.directions_tested = budget.directions;
    // h_D(A) ≥ inradius for unit A, with equality at A = −(P − ρ_*)/|P − ρ_*|.
    let extremal = {
        let p = HermitianMatrix::outer(&crate::hermitian::PureState::basis(m, 0).vector().clone());
        TracelessDirection::project(&p).normalized().neg()
    };
    report.gap = inradius - r;
    if r <= inradius * (1.0 + 1e-12) {
        report.status = InclusionStatus::Certified;
        ensure!(
            worst.iter().all(|(l, _)| *l >= -1e-10),
            Internal,
            "closed-form inradius contradicted by boundary sample"
        );
    } else {
        report.status = InclusionStatus::Falsified;
        let a = worst
            .into_iter()
            .filter(|(l, _)| *l < -1e-10)
            .min_by(|x, y| x.0.total_cmp(&y.0))
            .map(|(_, a)| a)
            .unwrap_or(extremal);
        let h_l = super::support_d(&a)?;
        report.gap = report.gap.min(h_l - r);
        report.witness_direction = Some(MatrixRecord::from(a.matrix()));
    }
    Ok(())
}

struct AscentResult {
    value: f64,
    direction: Vec<f64>,
    evaluations: usize,
}

/// Riemannian ascent of `f(A) = h_{t∙K}(A) − h_L(A)` on the unit sphere of
/// traceless coordinates, with supergradients from the support points.
fn ascent(
    report: &mut InclusionReport,
    t: f64,
    k: &dyn BodyOracle,
    q: &StatePolytope,
    budget: InclusionBudget,
    seeds: SeedStream,
) -> Result<()> {
    let m = q.dim();
    ensure!(m >= 2, Parameter, "inclusion in D(C^1) is trivial");
    let basis = HermitianBasis::new(m);
    let dim = basis.traceless_len();
    let scaled = ScaledBody { t, inner: k };
    let eval = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        let a = basis.direction(x)?;
        let hk = scaled.support(&a)?;
        let (hl, j) = q.support_with_index(&a)?;
        let mut g = match scaled.support_point(&a)? {
            Some(p) => basis.offset_coords(&p),
            None => vec![0.0; dim],
        };
        let lv = basis.offset_coords(&q.vertex(j).projector());
        g.iter_mut().zip(&lv).for_each(|(gi, li)| *gi -= li);
        Ok((hk - hl, g))
    };
    let random_unit = |task: u64| {
        use rand::Rng;
        let mut rng = seeds.rng(task);
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
            let n = norm(&v);
            if n > 1e-12 {
                return v.into_iter().map(|x| x / n).collect::<Vec<f64>>();
            }
        }
    };

    let sampled: Vec<AscentResult> = (0..budget.directions)
        .into_par_iter()
        .map(|i| {
            let x = random_unit((budget.restarts + i) as u64);
            let (value, _) = eval(&x)?;
            Ok(AscentResult { value, direction: x, evaluations: 1 })
        })
        .collect::<Result<_>>()?;
    let climbed: Vec<AscentResult> = (0..budget.restarts)
        .into_par_iter()
        .map(|i| climb(&eval, random_unit(i as u64)))
        .collect::<Result<_>>()?;

    report.restarts = budget.restarts;
    report.directions_tested = sampled.len() + climbed.iter().map(|r| r.evaluations).sum::<usize>();
    // Largest violation wins; ties go to the earliest run (restarts first).
    let best = climbed
        .into_iter()
        .chain(sampled)
        .reduce(|a, b| if b.value > a.value { b } else { a });
    if let Some(best) = best {
        report.gap = -best.value;
        report.extremal_direction = Some(MatrixRecord::from(basis.direction(&best.direction)?.matrix()));
        if best.value > budget.tol {
            report.status = InclusionStatus::Falsified;
            report.witness_direction = Some(MatrixRecord::from(basis.direction(&best.direction)?.matrix()));
        } else {
            report.status = InclusionStatus::NotFalsified;
        }
    } else {
        report.status = InclusionStatus::NotFalsified;
    }
    Ok(())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn climb(eval: &(dyn Fn(&[f64]) -> Result<(f64, Vec<f64>)> + Sync), mut x: Vec<f64>) -> Result<AscentResult> {
    let (mut value, mut grad) = eval(&x)?;
    let mut evaluations = 1;
    let mut step = 0.5;
    for _ in 0..200 {
        let radial: f64 = grad.iter().zip(&x).map(|(g, xi)| g * xi).sum();
        let tangent: Vec<f64> = grad.iter().zip(&x).map(|(g, xi)| g - radial * xi).collect();
        let tn = norm(&tangent);
        if tn < 1e-12 {
            break;
        }
        let mut accepted = false;
        while step > 1e-10 {
            let cand: Vec<f64> = x.iter().zip(&tangent).map(|(xi, ti)| xi + step * ti / tn).collect();
            let cn = norm(&cand);
            let cand: Vec<f64> = cand.into_iter().map(|c| c / cn).collect();
            let (v, g) = eval(&cand)?;
            evaluations += 1;
            if v > value + 1e-15 {
                x = cand;
                value = v;
                grad = g;
                accepted = true;
                step = (step * 2.0).min(1.0);
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(AscentResult { value, direction: x, evaluations })
}
