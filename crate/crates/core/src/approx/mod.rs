//! Polytopes approximating `D(C^m)` and `Sep(C^d⊗C^d)`, each shipped with a
//! certificate that records how its inclusion factor was obtained and how it
//! was tested.
//!
//! Three constructions:
//! * a projective δ-net of `C^m`, factor `1 − 2mδ`;
//! * products of projective ε-nets of `C^d`, factor `1 − 4εd²` for Sep;
//! * `N` Haar-random vertices with a target factor `1 − ε`, tested only.

pub mod caps;
pub mod tails;

pub use caps::{
    cap_alpha_estimate, cap_alpha_quadrature, cap_average_check, cap_overlap_quadrature, frozen_alpha, sample_cap,
    AlphaEstimate, CapAverageCheck, CapSampler, CapSpec,
};
pub use tails::{agrees_with_exact, binomial_cdf, hoeffding_tail_check, matrix_hoeffding_check, TailCheck};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{
    check_inclusion, membership_polytope, polytope_support, support_d, support_sep, InclusionBudget, InclusionReport,
    InclusionStatus, Membership, Operand, Regime, StatePolytope,
};
use crate::error::{ensure, Result};
use crate::hermitian::{
    bullet_scale, gue_traceless, haar_pure, MatrixRecord, PureState, SeedStream, TracelessDirection,
};
use crate::nets::{build_projective_net, random_net, verify_cover, CoverageEstimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    /// Projective δ-net of the states, factor `1 − 2mδ`.
    StateNet,
    ProductNet,
    RandomNet,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxParameters {
    /// `m` for nets of `D(C^m)`, `d` for product nets and random nets.
    pub dim: usize,
    /// δ or ε.
    pub resolution: f64,
    /// Net size (per factor for product nets), or `N` for random nets.
    pub net_size: usize,
    pub vertices: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxBudget {
    /// Random directions for the support comparison and the ascent.
    pub directions: usize,
    pub restarts: usize,
    /// Pure test states for the membership sweep.
    pub test_states: usize,
    /// Alternating-maximization restarts per Sep support evaluation.
    pub sep_restarts: usize,
    pub tol: f64,
}

impl Default for ApproxBudget {
    fn default() -> Self {
        Self { directions: 1000, restarts: 200, test_states: 1000, sep_restarts: 16, tol: 1e-9 }
    }
}

impl ApproxBudget {
    fn inclusion(&self) -> InclusionBudget {
        InclusionBudget { directions: self.directions, restarts: self.restarts, tol: self.tol }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MembershipSummary {
    pub tested: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub worst_residual: f64,
    /// Separating direction for the first rejected test state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_direction: Option<MatrixRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SupportSummary {
    pub directions: usize,
    /// Directions with `factor·h_K(A) > h_P(A) + tol`.
    pub violations: usize,
    /// `min_A h_P(A) − factor·h_K(A)` over unit directions.
    pub min_slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_direction: Option<MatrixRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxCertificate {
    pub guaranteed_factor: f64,
    pub mechanism: Mechanism,
    pub parameters: ApproxParameters,
    pub budget: ApproxBudget,
    pub test_outcome: InclusionReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipSummary>,
    pub support_test: SupportSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<CoverageEstimate>,
    pub status: InclusionStatus,
}

impl ApproxCertificate {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::Error::Internal(e.to_string()))
    }
}

// Child-seed labels, fixed so that certificates replay from their seed.
const NET: u64 = 1;
const SEARCH: u64 = 2;
const TESTS: u64 = 3;
const DIRECTIONS: u64 = 4;
const COVER: u64 = 5;
const SEP: u64 = 6;

/// `factor∙|ψ⟩⟨ψ| ∈ P` for each test state.
pub fn membership_sweep(p: &StatePolytope, factor: f64, states: &[PureState], tol: f64) -> Result<MembershipSummary> {
    let results: Vec<Membership> = states
        .par_iter()
        .map(|psi| membership_polytope(&bullet_scale(factor, &psi.projector())?, p, tol))
        .collect::<Result<_>>()?;
    let mut s = MembershipSummary { tested: results.len(), ..Default::default() };
    for r in results {
        match r {
            Membership::Inside { residual, .. } => {
                s.accepted += 1;
                s.worst_residual = s.worst_residual.max(residual);
            }
            Membership::Outside { direction, .. } => {
                s.rejected += 1;
                if s.witness_direction.is_none() {
                    s.witness_direction = Some(MatrixRecord::from(direction.matrix()));
                }
            }
        }
    }
    Ok(s)
}

/// Compares `factor·inner(A)` with `h_P(A)` over `directions` unit GUE
/// directions; direction `i` comes from stream `i`.
pub fn support_sweep(
    p: &StatePolytope,
    factor: f64,
    directions: usize,
    tol: f64,
    seeds: SeedStream,
    inner: impl Fn(usize, &TracelessDirection) -> Result<f64> + Sync,
) -> Result<SupportSummary> {
    let slacks: Vec<(f64, TracelessDirection)> = (0..directions)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let a = gue_traceless(p.dim(), &mut rng).normalized();
            let slack = polytope_support(p, &a)? - factor * inner(i, &a)?;
            Ok((slack, a))
        })
        .collect::<Result<_>>()?;
    let violations = slacks.iter().filter(|(s, _)| *s < -tol).count();
    let worst = slacks.into_iter().reduce(|a, b| if b.0 < a.0 { b } else { a });
    Ok(SupportSummary {
        directions,
        violations,
        min_slack: worst.as_ref().map_or(f64::INFINITY, |w| w.0),
        worst_direction: worst.map(|w| MatrixRecord::from(w.1.matrix())),
    })
}

fn haar_states(m: usize, count: usize, seeds: SeedStream) -> Vec<PureState> {
    (0..count).map(|i| haar_pure(m, &mut seeds.rng(i as u64))).collect()
}

fn combine(report: &InclusionReport, membership: Option<&MembershipSummary>, support: &SupportSummary) -> InclusionStatus {
    let rejected = membership.is_some_and(|m| m.rejected > 0);
    if report.status == InclusionStatus::Falsified || rejected || support.violations > 0 {
        InclusionStatus::Falsified
    } else {
        report.status
    }
}

/// Vertex polytope of a projective δ-net of `C^m`, with factor `1 − 2mδ`
/// tested by support ascent, a support comparison and a membership sweep.
pub fn net_polytope_d(m: usize, delta: f64, seeds: SeedStream, budget: ApproxBudget) -> Result<(StatePolytope, ApproxCertificate)> {
    ensure!(m >= 1, Parameter, "dimension must be positive");
    ensure!(delta > 0.0 && 2.0 * m as f64 * delta < 1.0, Parameter, "delta must lie in (0, 1/(2m)) = (0, {}), got {delta}", 0.5 / m as f64);
    let factor = 1.0 - 2.0 * m as f64 * delta;
    let parameters = |net_size, vertices| ApproxParameters { dim: m, resolution: delta, net_size, vertices, seed: seeds.seed };
    if m == 1 {
        // D(C^1) is the single point 1; every net polytope equals it.
        let p = StatePolytope::new(vec![PureState::basis(1, 0)], "net of C^1")?;
        let report = InclusionReport {
            factor,
            inner: "D(C^1)".into(),
            outer: p.label().to_string(),
            regime: Regime::PolytopeIntoExact,
            status: InclusionStatus::Certified,
            witness_direction: None,
            extremal_direction: None,
            gap: 0.0,
            directions_tested: 0,
            restarts: 0,
            tol: budget.tol,
            seed: seeds.seed,
        };
        let support_test = SupportSummary { directions: 0, violations: 0, min_slack: 0.0, worst_direction: None };
        let cert = ApproxCertificate {
            guaranteed_factor: factor,
            mechanism: Mechanism::StateNet,
            parameters: parameters(1, 1),
            budget,
            test_outcome: report,
            membership: None,
            support_test,
            coverage: None,
            status: InclusionStatus::Certified,
        };
        return Ok((p, cert));
    }
    let net = build_projective_net(m, delta, seeds.child(NET), None)?;
    let coverage = verify_cover(&net, budget.test_states.max(1), delta, seeds.child(COVER))?;
    let p = StatePolytope::new(net.states()?, format!("{delta}-net of C^{m}"))?;
    let report = check_inclusion(factor, Operand::States(m), Operand::Polytope(&p), budget.inclusion(), seeds.child(SEARCH))?;
    let tests = haar_states(m, budget.test_states, seeds.child(TESTS));
    let membership = membership_sweep(&p, factor, &tests, budget.tol)?;
    let support_test = support_sweep(&p, factor, budget.directions, budget.tol, seeds.child(DIRECTIONS), |_, a| support_d(a))?;
    let status = combine(&report, Some(&membership), &support_test);
    let cert = ApproxCertificate {
        guaranteed_factor: factor,
        mechanism: Mechanism::StateNet,
        parameters: parameters(net.len(), p.len()),
        budget,
        test_outcome: report,
        membership: Some(membership),
        support_test,
        coverage: Some(coverage),
        status,
    };
    Ok((p, cert))
}

/// Product vertices `|ψ_i⊗ψ_j⟩⟨ψ_i⊗ψ_j|` over a projective ε-net of `C^d`,
/// with factor `1 − 4εd²` for the separable states. The test compares
/// `factor·h_Sep(A)` against `h_P(A)`; since the Sep value comes from an
/// explicit product state it is a lower bound, so a violation is genuine.
pub fn product_net_polytope_sep(d: usize, eps: f64, seeds: SeedStream, budget: ApproxBudget) -> Result<(StatePolytope, ApproxCertificate)> {
    ensure!(d >= 2, Parameter, "local dimension must be at least 2");
    let dd = (d * d) as f64;
    ensure!(eps > 0.0 && 4.0 * eps * dd < 1.0, Parameter, "eps must lie in (0, 1/(4d²)) = (0, {}), got {eps}", 0.25 / dd);
    ensure!(budget.sep_restarts >= 1, Parameter, "sep_restarts must be positive");
    let factor = 1.0 - 4.0 * eps * dd;
    let net = build_projective_net(d, eps, seeds.child(NET), None)?;
    let states = net.states()?;
    let p = StatePolytope::product(states.clone(), states, format!("{eps}-net of C^{d} squared"))?;
    let sep_seeds = seeds.child(SEP);
    let support_test = support_sweep(&p, factor, budget.directions, budget.tol, seeds.child(DIRECTIONS), |i, a| {
        Ok(support_sep(a, budget.sep_restarts, sep_seeds.child(i as u64))?.value)
    })?;
    let status = if support_test.violations > 0 { InclusionStatus::Falsified } else { InclusionStatus::NotFalsified };
    let report = InclusionReport {
        factor,
        inner: format!("Sep(C^{d}⊗C^{d})"),
        outer: p.label().to_string(),
        regime: Regime::OracleIntoPolytope,
        status,
        witness_direction: if status == InclusionStatus::Falsified { support_test.worst_direction.clone() } else { None },
        extremal_direction: support_test.worst_direction.clone(),
        gap: support_test.min_slack,
        directions_tested: budget.directions,
        restarts: budget.sep_restarts,
        tol: budget.tol,
        seed: seeds.seed,
    };
    let cert = ApproxCertificate {
        guaranteed_factor: factor,
        mechanism: Mechanism::ProductNet,
        parameters: ApproxParameters { dim: d, resolution: eps, net_size: net.len(), vertices: p.len(), seed: seeds.seed },
        budget,
        test_outcome: report,
        membership: None,
        support_test,
        coverage: None,
        status,
    };
    Ok((p, cert))
}

/// `n` Haar-random vertices in `C^d` tested against the target factor `1 − ε`.
/// Fewer than `d²` vertices cannot work (the hull is not full-dimensional)
/// and come back falsified.
pub fn random_net_d(d: usize, n: usize, eps: f64, seeds: SeedStream, budget: ApproxBudget) -> Result<(StatePolytope, ApproxCertificate)> {
    ensure!(d >= 2, Parameter, "dimension must be at least 2");
    ensure!(n >= 1, Parameter, "need at least one vertex");
    ensure!(eps > 0.0 && eps < 1.0, Parameter, "eps must lie in (0, 1), got {eps}");
    let factor = 1.0 - eps;
    let net = random_net(2 * d, n, seeds.child(NET))?;
    let p = StatePolytope::new(net.states()?, format!("{n} random states of C^{d}"))?;
    let report = check_inclusion(factor, Operand::States(d), Operand::Polytope(&p), budget.inclusion(), seeds.child(SEARCH))?;
    // Haar states plus the states the search pushed hardest against.
    let mut tests = haar_states(d, budget.test_states, seeds.child(TESTS));
    for a in [report.extremal(), report.witness()].into_iter().flatten() {
        if a.hs_norm() > 0.0 {
            let (_, v) = a.matrix().eigh()?.top();
            tests.push(PureState::normalize(v)?);
        }
    }
    let membership = membership_sweep(&p, factor, &tests, budget.tol)?;
    let support_test = support_sweep(&p, factor, budget.directions, budget.tol, seeds.child(DIRECTIONS), |_, a| support_d(a))?;
    let status = combine(&report, Some(&membership), &support_test);
    let cert = ApproxCertificate {
        guaranteed_factor: factor,
        mechanism: Mechanism::RandomNet,
        parameters: ApproxParameters { dim: d, resolution: eps, net_size: n, vertices: n, seed: seeds.seed },
        budget,
        test_outcome: report,
        membership: Some(membership),
        support_test,
        coverage: None,
        status,
    };
    Ok((p, cert))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepEntry {
    pub n: usize,
    pub seed: u64,
    pub status: InclusionStatus,
    pub rejected_states: usize,
    pub min_slack: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub d: usize,
    pub eps: f64,
    pub entries: Vec<SweepEntry>,
    pub smallest_not_falsified: Option<usize>,
}

/// Doubling search `N = d², 2d², …` up to `max_n` for the first random net
/// that survives testing. Run `k` uses child seed `k`.
pub fn random_net_sweep(d: usize, eps: f64, max_n: usize, seeds: SeedStream, budget: ApproxBudget) -> Result<SweepReport> {
    ensure!(max_n >= d * d, Parameter, "max_n must be at least d² = {}", d * d);
    let mut entries = Vec::new();
    let mut n = d * d;
    let mut k = 0;
    let mut found = None;
    while n <= max_n {
        let s = seeds.child(k);
        let (_, cert) = random_net_d(d, n, eps, s, budget)?;
        entries.push(SweepEntry {
            n,
            seed: s.seed,
            status: cert.status,
            rejected_states: cert.membership.as_ref().map_or(0, |m| m.rejected),
            min_slack: cert.support_test.min_slack,
        });
        if cert.status != InclusionStatus::Falsified {
            found = Some(n);
            break;
        }
        n *= 2;
        k += 1;
    }
    Ok(SweepReport { d, eps, entries, smallest_not_falsified: found })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConspiracyReport {
    pub vertices: usize,
    /// Smallest `|⟨φ_i|e_1⟩|²` over the vertices.
    pub min_overlap: f64,
    pub maximally_mixed_outside: bool,
    /// `tr(Aρ_*) − h_P(A)` for the separating direction.
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<MatrixRecord>,
}

/// Vertices in `C^2` all leaning towards `e_1` (`|⟨φ|e_1⟩|² > threshold > 1/2`):
/// the maximally mixed state lies outside their hull.
pub fn conspiracy_net(n: usize, threshold: f64, seeds: SeedStream) -> Result<ConspiracyReport> {
    ensure!(n >= 1, Parameter, "need at least one vertex");
    ensure!(threshold > 0.5 && threshold < 1.0, Parameter, "threshold must lie in (1/2, 1), got {threshold}");
    let e1 = PureState::basis(2, 0);
    let mut rng = seeds.rng(0);
    let mut vertices = Vec::with_capacity(n);
    while vertices.len() < n {
        let phi = haar_pure(2, &mut rng);
        if phi.overlap(&e1) > threshold {
            vertices.push(phi);
        }
        // Keep the stream position independent of acceptance luck.
        let _: f64 = rng.random();
    }
    let min_overlap = vertices.iter().map(|v| v.overlap(&e1)).fold(f64::INFINITY, f64::min);
    let p = StatePolytope::new(vertices, "leaning net")?;
    let rho = crate::hermitian::HermitianMatrix::identity(2).scale(0.5);
    Ok(match membership_polytope(&rho, &p, 1e-9)? {
        Membership::Inside { .. } => ConspiracyReport { vertices: n, min_overlap, maximally_mixed_outside: false, margin: 0.0, direction: None },
        Membership::Outside { direction, margin } => ConspiracyReport {
            vertices: n,
            min_overlap,
            maximally_mixed_outside: true,
            margin,
            direction: Some(MatrixRecord::from(direction.matrix())),
        },
    })
}
