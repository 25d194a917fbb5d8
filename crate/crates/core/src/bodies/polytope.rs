//! Polytopes `conv{|ψ_i⟩⟨ψ_i|}` spanned by pure-state projectors.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::minnorm::min_norm_point;
use super::{check_direction, BodyOracle, Verdict};
use crate::error::{ensure, Error, Result};
use crate::hermitian::{HermitianBasis, HermitianMatrix, PureState, TracelessDirection, C64};

#[derive(Clone, Debug)]
enum Vertices {
    Explicit(Vec<PureState>),
    /// All products `ψ_i ⊗ φ_j`; vertex `i·len(right) + j`.
    Product { left: Vec<PureState>, right: Vec<PureState> },
}

/// Convex hull of pure-state projectors, with cached real coordinates.
#[derive(Clone, Debug)]
pub struct StatePolytope {
    dim: usize,
    vertices: Vertices,
    label: String,
    basis: OnceLock<HermitianBasis>,
    /// Coordinates of `|ψ_i⟩⟨ψ_i| − ρ_*` (explicit) or of `|φ_j⟩⟨φ_j|` (product, right factor).
    coords: OnceLock<Vec<Vec<f64>>>,
}

impl StatePolytope {
    pub fn new(vertices: Vec<PureState>, label: impl Into<String>) -> Result<Self> {
        ensure!(!vertices.is_empty(), Input, "polytope needs at least one vertex");
        let dim = vertices[0].dim();
        ensure!(vertices.iter().all(|v| v.dim() == dim), Shape, "vertices of unequal dimension");
        Ok(Self { dim, vertices: Vertices::Explicit(vertices), label: label.into(), basis: OnceLock::new(), coords: OnceLock::new() })
    }

    /// The polytope with vertices `ψ_i ⊗ φ_j` over two factor lists.
    pub fn product(left: Vec<PureState>, right: Vec<PureState>, label: impl Into<String>) -> Result<Self> {
        ensure!(!left.is_empty() && !right.is_empty(), Input, "polytope needs at least one vertex");
        let d = left[0].dim();
        ensure!(
            left.iter().chain(&right).all(|v| v.dim() == d),
            Shape,
            "product factors must share one local dimension"
        );
        Ok(Self {
            dim: d * d,
            vertices: Vertices::Product { left, right },
            label: label.into(),
            basis: OnceLock::new(),
            coords: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        match &self.vertices {
            Vertices::Explicit(v) => v.len(),
            Vertices::Product { left, right } => left.len() * right.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertex(&self, k: usize) -> PureState {
        match &self.vertices {
            Vertices::Explicit(v) => v[k].clone(),
            Vertices::Product { left, right } => left[k / right.len()].kron(&right[k % right.len()]),
        }
    }

    pub fn vertices(&self) -> Vec<PureState> {
        (0..self.len()).map(|k| self.vertex(k)).collect()
    }

    /// The factor lists when the polytope was built as a product.
    pub fn product_factors(&self) -> Option<(&[PureState], &[PureState])> {
        match &self.vertices {
            Vertices::Product { left, right } => Some((left, right)),
            Vertices::Explicit(_) => None,
        }
    }

    fn basis(&self) -> &HermitianBasis {
        self.basis.get_or_init(|| HermitianBasis::new(self.dim))
    }

    /// Traceless coordinates of every vertex offset `|ψ_i⟩⟨ψ_i| − ρ_*`.
    pub fn offset_coords(&self) -> Vec<Vec<f64>> {
        let basis = self.basis();
        match &self.vertices {
            Vertices::Explicit(_) => self.explicit_coords().clone(),
            Vertices::Product { .. } => {
                (0..self.len()).into_par_iter().map(|k| basis.offset_coords(&self.vertex(k).projector())).collect()
            }
        }
    }

    fn explicit_coords(&self) -> &Vec<Vec<f64>> {
        self.coords.get_or_init(|| match &self.vertices {
            Vertices::Explicit(v) => {
                let basis = self.basis();
                v.par_iter().map(|p| basis.offset_coords(&p.projector())).collect()
            }
            Vertices::Product { right, .. } => {
                let b = HermitianBasis::new(right[0].dim());
                right.par_iter().map(|p| b.coords(&p.projector())).collect()
            }
        })
    }

    /// `max_i ⟨ψ_i|A|ψ_i⟩` together with the maximizing vertex index.
    pub fn support_with_index(&self, a: &TracelessDirection) -> Result<(f64, usize)> {
        ensure!(a.dim() == self.dim, Shape, "direction of dimension {} for polytope of dimension {}", a.dim(), self.dim);
        check_direction(a, self.dim)?;
        match &self.vertices {
            Vertices::Explicit(_) => {
                let ac = self.basis().traceless_coords(a);
                let coords = self.explicit_coords();
                let best = coords
                    .par_iter()
                    .enumerate()
                    .map(|(i, c)| (c.iter().zip(&ac).map(|(x, y)| x * y).sum::<f64>(), i))
                    .reduce(|| (f64::NEG_INFINITY, usize::MAX), pick_max);
                Ok(best)
            }
            Vertices::Product { left, right } => {
                let d = left[0].dim();
                let rb = HermitianBasis::new(d);
                let rc = self.explicit_coords();
                let am = a.matrix().as_matrix();
                let best = left
                    .par_iter()
                    .enumerate()
                    .map(|(i, psi)| {
                        // ⟨ψ⊗φ|A|ψ⊗φ⟩ = tr(M φφ†) with M the contraction of A against ψ.
                        let f = psi.vector();
                        let m = HermitianMatrix::from_lower_fn(d, |r, c| {
                            let mut acc = C64::new(0.0, 0.0);
                            for k in 0..d {
                                for l in 0..d {
                                    acc += f[k].conj() * am[(k * d + r, l * d + c)] * f[l];
                                }
                            }
                            acc
                        });
                        let mc = rb.coords(&m);
                        rc.iter()
                            .enumerate()
                            .map(|(j, c)| (c.iter().zip(&mc).map(|(x, y)| x * y).sum::<f64>(), i * right.len() + j))
                            .fold((f64::NEG_INFINITY, usize::MAX), pick_max)
                    })
                    .reduce(|| (f64::NEG_INFINITY, usize::MAX), pick_max);
                Ok(best)
            }
        }
    }

    pub fn to_record(&self) -> PolytopeRecord {
        PolytopeRecord {
            dim: self.dim,
            vertices: (0..self.len())
                .map(|k| {
                    let v = self.vertex(k);
                    [v.vector().iter().map(|z| z.re).collect(), v.vector().iter().map(|z| z.im).collect()]
                })
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_record(rec: &PolytopeRecord) -> Result<Self> {
        let vertices = rec
            .vertices
            .iter()
            .map(|[re, im]| {
                ensure!(re.len() == rec.dim && im.len() == rec.dim, Shape, "vertex length differs from dim {}", rec.dim);
                PureState::from_slice(re, im)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, rec.label.clone())
    }
}

fn pick_max(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Serialized polytope: each vertex is `[re…], [im…]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolytopeRecord {
    pub dim: usize,
    pub vertices: Vec<[Vec<f64>; 2]>,
    pub label: String,
}

/// `max_i ⟨ψ_i|A|ψ_i⟩`.
pub fn polytope_support(p: &StatePolytope, a: &TracelessDirection) -> Result<f64> {
    Ok(p.support_with_index(a)?.0)
}

#[derive(Clone, Debug)]
pub enum Membership {
    /// Convex weights `(vertex, w)` with `‖Σ w_i|ψ_i⟩⟨ψ_i| − X‖_HS = residual ≤ tol`.
    Inside { weights: Vec<(usize, f64)>, residual: f64 },
    /// `tr(A X) − polytope_support(P, A) = margin > tol/2`.
    Outside { direction: TracelessDirection, margin: f64 },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Decides `X ∈ P` by the nearest point of `P` to `X`.
pub fn membership_polytope(x: &HermitianMatrix, p: &StatePolytope, tol: f64) -> Result<Membership> {
    ensure!(tol > 0.0, Parameter, "tol must be positive");
    ensure!(x.dim() == p.dim(), Shape, "point of dimension {} for polytope of dimension {}", x.dim(), p.dim());
    let xo = TracelessDirection::from_state_offset(x)?;
    let basis = p.basis();
    let xc = basis.traceless_coords(&xo);
    let shifted: Vec<Vec<f64>> = match &p.vertices {
        Vertices::Explicit(_) => p.explicit_coords().iter().map(|c| c.iter().zip(&xc).map(|(a, b)| a - b).collect()).collect(),
        Vertices::Product { .. } => p.offset_coords().into_iter().map(|c| c.iter().zip(&xc).map(|(a, b)| a - b).collect()).collect(),
    };
    let mnp = min_norm_point(&shifted)?;
    if mnp.distance <= tol {
        // Recompute the residual from the weights in matrix form.
        let mut acc = HermitianMatrix::zeros(p.dim());
        for &(i, w) in &mnp.weights {
            acc = &acc + &p.vertex(i).projector().scale(w);
        }
        let residual = (&acc - x).hs_norm();
        if residual <= tol {
            return Ok(Membership::Inside { weights: mnp.weights, residual });
        }
    }
    let dir_coords: Vec<f64> = mnp.point.iter().map(|v| -v / mnp.distance.max(1e-300)).collect();
    let direction = basis.direction(&dir_coords)?;
    let margin = direction.pair(x) - polytope_support(p, &direction)?;
    if margin > tol / 2.0 {
        Ok(Membership::Outside { direction, margin })
    } else {
        Err(Error::Internal(format!(
            "membership undecided: distance {:e}, margin {:e}, tol {:e}",
            mnp.distance, margin, tol
        )))
    }
}

impl BodyOracle for StatePolytope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn support(&self, a: &TracelessDirection) -> Result<f64> {
        polytope_support(self, a)
    }

    fn support_point(&self, a: &TracelessDirection) -> Result<Option<HermitianMatrix>> {
        let (_, k) = self.support_with_index(a)?;
        Ok(Some(self.vertex(k).projector()))
    }

    fn membership(&self, x: &HermitianMatrix, tol: f64) -> Result<Verdict> {
        Ok(match membership_polytope(x, self, tol)? {
            Membership::Inside { .. } => Verdict::Inside,
            Membership::Outside { direction, .. } => Verdict::Outside(Some(direction)),
        })
    }
}
