//! Convex bodies in the unit-trace hyperplane with origin `ρ_* = Id/m`.
//!
//! A body is exposed through its support function
//! `h_K(A) = sup_{ρ∈K} tr(A(ρ − ρ_*))` on trace-zero directions `A`, and a
//! membership oracle. Directions carrying a trace component are rejected.

mod asphericity;
mod inclusion;
mod lp;
mod minnorm;
mod polar;
mod polytope;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::hermitian::{
    local_dim, partial_transpose, CMatrix, HermitianMatrix, PureState, SeedStream,
    TracelessDirection, C64,
};

pub use asphericity::{asphericity_hsball, AsphericityReport, BallBody};
pub use inclusion::{check_inclusion, InclusionBudget, InclusionReport, InclusionStatus, Operand, Regime};
pub use lp::{solve_standard_form, LpOutcome};
pub use minnorm::{min_norm_point, MinNormPoint};
pub use polar::{polar_of_states, polar_polytope, PolarPolytope, PolarStates};
pub use polytope::{membership_polytope, polytope_support, Membership, PolytopeRecord, StatePolytope};

pub use crate::hermitian::bullet_scale;

/// Answer of a membership oracle.
#[derive(Clone, Debug)]
pub enum Verdict {
    Inside,
    /// Outside, with a traceless direction `A` such that `tr(A X) > h_K(A)`.
    Outside(Option<TracelessDirection>),
    Unknown,
}

/// A convex body presented by oracles.
pub trait BodyOracle: Sync {
    fn dim(&self) -> usize;
    fn label(&self) -> String;
    /// `h_K(A)`. For heuristic bodies this is a certified lower bound.
    fn support(&self, a: &TracelessDirection) -> Result<f64>;
    /// A point of K whose pairing with `A` equals [`support`](Self::support).
    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>>;
    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict>;
    /// Whether `support` is exact rather than a lower bound.
    fn support_is_exact(&self) -> bool {
        true
    }
    /// Whether `membership` never answers `Unknown` and is exact up to `tol`.
    fn membership_is_exact(&self) -> bool {
        true
    }
}

pub(crate) fn check_direction(a: &TracelessDirection, m: usize) -> Result<()> {
    ensure!(a.dim() == m, Shape, "direction of dimension {} for body of dimension {m}", a.dim());
    let tr = a.matrix().trace();
    ensure!(tr.abs() <= 1e-12 * a.hs_norm().max(1.0), Input, "direction has trace {tr:e}");
    Ok(())
}

/// `h_D(A) = λ_1(A)`.
pub fn support_d(a: &TracelessDirection) -> Result<f64> {
    check_direction(a, a.dim())?;
    Ok(a.matrix().eigh()?.eigenvalues[0])
}

/// Gauge of D about `ρ_*`: `inf{t ≥ 0 : ρ_* + A/t ∈ D} = m·λ_1(−A)`.
pub fn gauge_d(a: &TracelessDirection) -> Result<f64> {
    check_direction(a, a.dim())?;
    let m = a.dim() as f64;
    let lmin = *a.matrix().eigh()?.eigenvalues.last().expect("nonempty");
    Ok((-m * lmin).max(0.0))
}

/// The set of all states `D(C^m)`.
#[derive(Clone, Copy, Debug)]
pub struct StateSpace {
    pub m: usize,
}

impl BodyOracle for StateSpace {
    fn dim(&self) -> usize {
        self.m
    }

    fn label(&self) -> String {
        format!("D(C^{})", self.m)
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        check_direction(a, self.m)?;
        support_d(a)
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        check_direction(a, self.m)?;
        let (_, v) = a.matrix().eigh()?.top();
        Ok(Some(HermitianMatrix::outer(&v)))
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        ensure!(x.dim() == self.m, Shape, "point of dimension {} in D(C^{})", x.dim(), self.m);
        let spec = x.eigh()?;
        let (lmin, v) = spec.bottom();
        if lmin >= -tol {
            return Ok(Verdict::Inside);
        }
        let dir = TracelessDirection::project(&HermitianMatrix::outer(&v).scale(-1.0));
        Ok(Verdict::Outside(Some(dir)))
    }
}

/// Hilbert–Schmidt ball of radius `radius` about `ρ_*`.
#[derive(Clone, Copy, Debug)]
pub struct HsBall {
    pub m: usize,
    pub radius: f64,
}

impl BodyOracle for HsBall {
    fn dim(&self) -> usize {
        self.m
    }

    fn label(&self) -> String {
        format!("B_HS(C^{}, r={})", self.m, self.radius)
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        check_direction(a, self.m)?;
        Ok(self.radius * a.hs_norm())
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        check_direction(a, self.m)?;
        let n = a.hs_norm();
        if n == 0.0 {
            return Ok(Some(TracelessDirection::zero(self.m).to_point()));
        }
        Ok(Some(a.scale(self.radius / n).to_point()))
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        let off = TracelessDirection::from_state_offset(x)?;
        let r = off.hs_norm();
        if r <= self.radius + tol {
            Ok(Verdict::Inside)
        } else {
            Ok(Verdict::Outside(Some(off.normalized())))
        }
    }
}

/// Result of the alternating maximization for the separable support function.
#[derive(Clone, Debug)]
pub struct SepSupport {
    /// Attained value `⟨ψ⊗φ|A|ψ⊗φ⟩`, a certified lower bound on `h_Sep(A)`.
    pub value: f64,
    pub left: PureState,
    pub right: PureState,
    /// `true` for `d ≥ 3`, where the optimum is not guaranteed global.
    pub heuristic: bool,
}

impl SepSupport {
    pub fn argmax(&self) -> PureState {
        self.left.kron(&self.right)
    }
}

/// `d×d` contraction of `A` against a vector on one factor:
/// `⟨x|M|x⟩ = ⟨x⊗φ|A|x⊗φ⟩` (fixing the second factor) or
/// `⟨ψ⊗x|A|ψ⊗x⟩` (fixing the first).
fn contraction(a: &CMatrix, d: usize, fixed: &PureState, fixed_is_second: bool) -> HermitianMatrix {
    let f = fixed.vector();
    HermitianMatrix::from_lower_fn(d, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            for l in 0..d {
                let entry = if fixed_is_second { a[(i * d + k, j * d + l)] } else { a[(k * d + i, l * d + j)] };
                acc += f[k].conj() * entry * f[l];
            }
        }
        acc
    })
}

fn product_value(a: &HermitianMatrix, left: &PureState, right: &PureState) -> f64 {
    a.expectation(left.kron(right).vector())
}

/// Alternating maximization of `⟨ψ⊗φ|A|ψ⊗φ⟩` from one starting pair.
fn alternate(a: &HermitianMatrix, d: usize, mut left: PureState, mut right: PureState) -> SepSupport {
    let am = a.as_matrix();
    let mut value = product_value(a, &left, &right);
    for _ in 0..500 {
        let m1 = contraction(am, d, &right, true);
        let (_, v) = m1.eigh().expect("finite").top();
        left = PureState::normalize(v).expect("eigenvector");
        let m2 = contraction(am, d, &left, false);
        let (_, w) = m2.eigh().expect("finite").top();
        right = PureState::normalize(w).expect("eigenvector");
        let next = product_value(a, &left, &right);
        let done = next - value <= 1e-15 * (1.0 + value.abs());
        value = value.max(next);
        if done {
            break;
        }
    }
    let value = product_value(a, &left, &right);
    SepSupport { value, left, right, heuristic: d >= 3 }
}

/// Support function of the separable states in direction `A` on `C^d⊗C^d`,
/// best of `restarts` Haar-initialized alternating maximizations. Restart `i`
/// draws from stream `i` of `seeds`.
pub fn support_sep(a: &TracelessDirection, restarts: usize, seeds: SeedStream) -> Result<SepSupport> {
    ensure!(restarts >= 1, Parameter, "restarts must be at least 1");
    let d = local_dim(a.dim())?;
    check_direction(a, d * d)?;
    let runs: Vec<SepSupport> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let right = crate::hermitian::haar_pure(d, &mut rng);
            let left = crate::hermitian::haar_pure(d, &mut rng);
            alternate(a.matrix(), d, left, right)
        })
        .collect();
    // Max value wins; ties go to the lowest restart index.
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("restarts >= 1");
    Ok(best)
}

/// The separable states on `C^d⊗C^d`. Support is the alternating-maximization
/// lower bound; membership is exact (PPT) at `d = 2`, and certifies only
/// non-membership at `d ≥ 3`.
#[derive(Clone, Copy, Debug)]
pub struct SeparableStates {
    pub d: usize,
    pub restarts: usize,
    pub seeds: SeedStream,
}

impl BodyOracle for SeparableStates {
    fn dim(&self) -> usize {
        self.d * self.d
    }

    fn label(&self) -> String {
        format!("Sep(C^{0}⊗C^{0})", self.d)
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        Ok(support_sep(a, self.restarts, self.seeds)?.value)
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        Ok(Some(support_sep(a, self.restarts, self.seeds)?.argmax().projector()))
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        match (StateSpace { m: self.dim() }).membership(x, tol)? {
            Verdict::Inside => {}
            other => return Ok(other),
        }
        let pt = partial_transpose(x, self.d)?;
        let (lmin, v) = pt.eigh()?.bottom();
        if lmin < -tol {
            // tr(X · (|v⟩⟨v|)^Γ) = ⟨v|X^Γ|v⟩ < 0 while product states give ≥ 0.
            let w = partial_transpose(&HermitianMatrix::outer(&v), self.d)?;
            return Ok(Verdict::Outside(Some(TracelessDirection::project(&w.scale(-1.0)))));
        }
        Ok(if self.d == 2 { Verdict::Inside } else { Verdict::Unknown })
    }

    fn support_is_exact(&self) -> bool {
        false
    }

    fn membership_is_exact(&self) -> bool {
        self.d == 2
    }
}

/// `t∙K` for a body K and real `t ≠ 0`: `h_{t∙K}(A) = |t|·h_K(sign(t)·A)`.
pub struct ScaledBody<'a> {
    pub t: f64,
    pub inner: &'a dyn BodyOracle,
}

impl BodyOracle for ScaledBody<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn label(&self) -> String {
        format!("({})∙{}", self.t, self.inner.label())
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        let signed = if self.t < 0.0 { a.neg() } else { a.clone() };
        Ok(self.t.abs() * self.inner.support(&signed)?)
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        let signed = if self.t < 0.0 { a.neg() } else { a.clone() };
        match self.inner.support_point(&signed)? {
            Some(p) => Ok(Some(bullet_scale(self.t, &p)?)),
            None => Ok(None),
        }
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        ensure!(self.t != 0.0, Parameter, "membership in 0∙K");
        let back = bullet_scale(1.0 / self.t, x)?;
        Ok(match self.inner.membership(&back, tol / self.t.abs())? {
            Verdict::Outside(Some(dir)) => {
                Verdict::Outside(Some(if self.t < 0.0 { dir.neg() } else { dir }))
            }
            v => v,
        })
    }

    fn support_is_exact(&self) -> bool {
        self.inner.support_is_exact()
    }

    fn membership_is_exact(&self) -> bool {
        self.inner.membership_is_exact()
    }
}

/// Which built-in body an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinBody {
    D,
    Sep,
}
