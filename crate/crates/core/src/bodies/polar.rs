//! Polar bodies about `ρ_*`: `K° = {X : tr((X−ρ_*)(Y−ρ_*)) ≤ 1 ∀ Y ∈ K}`.
//!
//! `h_{K°}` is the gauge of K. For a polytope that gauge is the linear
//! program `min Σλ_i  s.t.  Σ λ_i (v_i − ρ_*) = A, λ ≥ 0`, whose dual
//! optimum is the maximizing point of `P°`.

use super::lp::{solve_standard_form, LpOutcome};
use super::polytope::StatePolytope;
use super::{check_direction, BodyOracle, Verdict};
use crate::error::{ensure, Error, Result};
use crate::hermitian::{HermitianBasis, HermitianMatrix, TracelessDirection};

/// Oracle for `P°` of a state polytope containing `ρ_*` in its interior.
#[derive(Clone, Debug)]
pub struct PolarPolytope {
    dim: usize,
    label: String,
    basis: HermitianBasis,
    /// Columns `v_i − ρ_*` in traceless coordinates, stored as rows.
    vertex_coords: Vec<Vec<f64>>,
    /// Largest gauge among `±e_k`; its inverse bounds an inscribed cross-polytope.
    pub interior_gauge: f64,
}

#[derive(Clone, Debug)]
struct GaugeSolution {
    value: f64,
    dual: Vec<f64>,
}

impl PolarPolytope {
    fn gauge(&self, a: &[f64]) -> Result<Option<GaugeSolution>> {
        let rows = a.len();
        let n = self.vertex_coords.len();
        let lp_rows: Vec<Vec<f64>> = (0..rows).map(|r| (0..n).map(|i| self.vertex_coords[i][r]).collect()).collect();
        match solve_standard_form(&lp_rows, a, &vec![1.0; n])? {
            LpOutcome::Optimal { y, value, .. } => Ok(Some(GaugeSolution { value, dual: y })),
            LpOutcome::Infeasible { .. } => Ok(None),
            LpOutcome::Unbounded => Err(Error::Internal("gauge program cannot be unbounded".into())),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Builds the polar of `P`; fails when `ρ_*` is not interior to `P`.
pub fn polar_polytope(p: &StatePolytope) -> Result<PolarPolytope> {
    let dim = p.dim();
    ensure!(dim >= 2, DegeneratePolar, "the state space of C^1 is a point");
    let basis = HermitianBasis::new(dim);
    let mut polar = PolarPolytope {
        dim,
        label: format!("polar({})", p.label()),
        basis,
        vertex_coords: p.offset_coords(),
        interior_gauge: 0.0,
    };
    let len = polar.basis.traceless_len();
    let mut worst: f64 = 0.0;
    for k in 0..len {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; len];
            e[k] = s;
            match polar.gauge(&e)? {
                Some(g) => worst = worst.max(g.value),
                None => {
                    return Err(Error::DegeneratePolar(format!(
                        "ρ_* is not interior to {}: direction {}e_{k} leaves the cone of vertices",
                        p.label(),
                        if s > 0.0 { "+" } else { "−" }
                    )))
                }
            }
        }
    }
    polar.interior_gauge = worst;
    Ok(polar)
}

impl BodyOracle for PolarPolytope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        check_direction(a, self.dim)?;
        let coords = self.basis.traceless_coords(a);
        match self.gauge(&coords)? {
            Some(g) => Ok(g.value),
            None => Err(Error::Internal("interior point lost its cone".into())),
        }
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        check_direction(a, self.dim)?;
        let coords = self.basis.traceless_coords(a);
        match self.gauge(&coords)? {
            Some(g) => Ok(Some(self.basis.direction(&g.dual)?.to_point())),
            None => Err(Error::Internal("interior point lost its cone".into())),
        }
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        ensure!(x.dim() == self.dim, Shape, "point of dimension {} in {}", x.dim(), self.label);
        let xo = TracelessDirection::from_state_offset(x)?;
        let xc = self.basis.traceless_coords(&xo);
        let (best, j) = self
            .vertex_coords
            .iter()
            .enumerate()
            .map(|(i, v)| (v.iter().zip(&xc).map(|(a, b)| a * b).sum::<f64>(), i))
            .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });
        if best <= 1.0 + tol {
            Ok(Verdict::Inside)
        } else {
            Ok(Verdict::Outside(Some(self.basis.direction(&self.vertex_coords[j])?)))
        }
    }
}

/// `D°`, with support computed as the gauge of D by bisection on
/// Cholesky-tested positive definiteness of `s·ρ_* + A`.
#[derive(Clone, Copy, Debug)]
pub struct PolarStates {
    pub m: usize,
}

pub fn polar_of_states(m: usize) -> Result<PolarStates> {
    ensure!(m >= 2, DegeneratePolar, "the state space of C^1 is a point");
    Ok(PolarStates { m })
}

impl BodyOracle for PolarStates {
    fn dim(&self) -> usize {
        self.m
    }

    fn label(&self) -> String {
        format!("polar(D(C^{}))", self.m)
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        check_direction(a, self.m)?;
        let m = self.m as f64;
        let norm = a.hs_norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        // ρ_* + A/s ∈ D  ⟺  A + (s/m)·Id ⪰ 0.
        let inside = |s: f64| a.matrix().is_psd_cholesky(s / m);
        let (mut lo, mut hi) = (0.0, m * norm * (1.0 + 1e-12));
        ensure!(inside(hi), Internal, "gauge bracket does not contain the boundary");
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        check_direction(a, self.m)?;
        // The maximizer is −m(|v⟩⟨v| − ρ_*) for the bottom eigenvector v of A.
        let (_, v) = a.matrix().eigh()?.bottom();
        let dir = TracelessDirection::project(&HermitianMatrix::outer(&v)).scale(-(self.m as f64));
        Ok(Some(dir.to_point()))
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        let xo = TracelessDirection::from_state_offset(x)?;
        let spec = xo.matrix().eigh()?;
        let (top, v) = spec.top();
        if top <= 1.0 + tol {
            Ok(Verdict::Inside)
        } else {
            Ok(Verdict::Outside(Some(TracelessDirection::project(&HermitianMatrix::outer(&v)))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{polytope_support, StatePolytope};
    use crate::hermitian::{gue_traceless, haar_pure, PureState, SeedStream};

    fn bloch_polytope(n: usize, seed: u64) -> StatePolytope {
        let mut rng = SeedStream::new(seed).rng(0);
        StatePolytope::new((0..n).map(|_| haar_pure(2, &mut rng)).collect(), "bloch").unwrap()
    }

    #[test]
    fn polar_of_dense_bloch_polytope_is_nearly_a_ball() {
        let p = bloch_polytope(400, 1);
        let polar = polar_polytope(&p).unwrap();
        let mut rng = SeedStream::new(2).rng(0);
        for _ in 0..50 {
            let a = gue_traceless(2, &mut rng).normalized();
            let h = polar.support(&a).unwrap();
            // Between √2 (ball) and √2/cos of the net resolution.
            assert!(h >= 2f64.sqrt() - 1e-9, "{h}");
            assert!(h <= 2f64.sqrt() * 1.2, "{h}");
            let pt = polar.support_point(&a).unwrap().unwrap();
            assert!((a.pair(&pt) - h).abs() < 1e-8);
            assert!(matches!(polar.membership(&pt, 1e-8).unwrap(), Verdict::Inside));
        }
    }

    #[test]
    fn bipolar_sanity() {
        let p = bloch_polytope(60, 3);
        let polar = polar_polytope(&p).unwrap();
        for k in 0..p.len() {
            let x = p.vertex(k).projector();
            let a = TracelessDirection::from_state_offset(&x).unwrap();
            // X ∈ P gives gauge_P(X − ρ_*) ≤ 1.
            assert!(polar.support(&a).unwrap() <= 1.0 + 1e-9);
            assert!(polytope_support(&p, &a).unwrap() >= a.hs_norm().powi(2) - 1e-12);
        }
    }

    #[test]
    fn degenerate_polar_detected() {
        let p = StatePolytope::new(vec![PureState::basis(2, 0), PureState::basis(2, 1)], "z").unwrap();
        assert!(matches!(polar_polytope(&p), Err(Error::DegeneratePolar(_))));
    }

    #[test]
    fn polar_states_matches_scaled_d() {
        let mut rng = SeedStream::new(4).rng(0);
        for m in [2, 3] {
            let polar = polar_of_states(m).unwrap();
            for _ in 0..200 {
                let a = gue_traceless(m, &mut rng);
                let lhs = polar.support(&a).unwrap();
                let rhs = m as f64 * a.matrix().scale(-1.0).lambda_max();
                assert!((lhs - rhs).abs() <= 1e-8, "{lhs} vs {rhs}");
            }
        }
        assert!(polar_of_states(1).is_err());
    }
}
