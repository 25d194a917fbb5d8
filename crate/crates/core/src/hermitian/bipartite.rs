//! Operations on `C^d ⊗ C^d`. Basis index of `e_i ⊗ f_k` is `i·d + k`.

use super::{eigh, CMatrix, CVector, HermitianMatrix, PureState, C64};
use crate::error::{ensure, Error, Result};

/// Which tensor factor an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// A linear map on square matrices, applied to the first tensor factor by
/// [`apply_map_tensor_id`].
pub trait SuperOperator {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    /// Complex-linear action on an arbitrary `input_dim × input_dim` matrix.
    fn apply(&self, x: &CMatrix) -> CMatrix;
}

/// Local dimension `d` of a square total dimension `d²`.
pub fn local_dim(total: usize) -> Result<usize> {
    let d = (total as f64).sqrt().round() as usize;
    ensure!(d * d == total && d > 0, Shape, "dimension {total} is not a perfect square");
    Ok(d)
}

fn check_bipartite(total: usize, d: usize) -> Result<()> {
    ensure!(d > 0 && d * d == total, Shape, "dimension {total} is not {d}²");
    Ok(())
}

/// Transpose on the second tensor factor.
pub fn partial_transpose(rho: &HermitianMatrix, d: usize) -> Result<HermitianMatrix> {
    check_bipartite(rho.dim(), d)?;
    let m = rho.as_matrix();
    // (i,k),(j,l) ↦ (i,l),(j,k)
    Ok(HermitianMatrix::from_lower_fn(d * d, |r, c| {
        let (i, l) = (r / d, r % d);
        let (j, k) = (c / d, c % d);
        m[(i * d + k, j * d + l)]
    }))
}

/// Partial trace over `which`.
pub fn partial_trace(rho: &HermitianMatrix, d: usize, which: Factor) -> Result<HermitianMatrix> {
    check_bipartite(rho.dim(), d)?;
    let m = rho.as_matrix();
    Ok(HermitianMatrix::from_lower_fn(d, |a, b| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            acc += match which {
                Factor::Second => m[(a * d + k, b * d + k)],
                Factor::First => m[(k * d + a, k * d + b)],
            };
        }
        acc
    }))
}

/// `ψ = Σ λ_r e_r ⊗ f_r` with `λ` descending.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> CVector {
        let d = self.coefficients.len();
        let mut out = CVector::zeros(d * d);
        for r in 0..d {
            out += self.left[r].kronecker(&self.right[r]) * C64::new(self.coefficients[r], 0.0);
        }
        out
    }
}

/// Schmidt decomposition of a unit vector on `C^d ⊗ C^d`.
///
/// Left vectors are eigenvectors of the reduced state `C C†` (C the `d×d`
/// reshaping); right vectors are `Cᵀ ē_r / λ_r`, completed to a basis where
/// the coefficient vanishes.
pub fn schmidt(psi: &PureState) -> Result<SchmidtDecomposition> {
    let d = local_dim(psi.dim())?;
    let v = psi.vector();
    let n = v.norm();
    ensure!((n - 1.0).abs() <= 1e-12, Input, "schmidt: vector norm {n}");
    let c = CMatrix::from_fn(d, d, |i, k| v[i * d + k]);
    let reduced = HermitianMatrix::hermitian_part(&(&c * c.adjoint()))?;
    let spec = eigh(&reduced)?;

    let mut coefficients = Vec::with_capacity(d);
    let mut left = Vec::with_capacity(d);
    let mut right: Vec<CVector> = Vec::with_capacity(d);
    let ct = c.transpose();
    for r in 0..d {
        let e = spec.vector(r);
        let f = &ct * e.map(|z| z.conj());
        let lam = f.norm();
        coefficients.push(lam);
        left.push(e);
        right.push(f);
    }
    // Normalize the right vectors; complete the null part by Gram–Schmidt.
    let cutoff = 1e-7;
    let mut basis: Vec<CVector> = Vec::with_capacity(d);
    for r in 0..d {
        if coefficients[r] > cutoff {
            let f = &right[r] / C64::new(coefficients[r], 0.0);
            basis.push(orthogonalize(f, &basis).unwrap_or_else(|| right[r].clone()));
        } else {
            basis.push(CVector::zeros(d));
        }
    }
    for r in 0..d {
        if coefficients[r] <= cutoff {
            let filled: Vec<CVector> = basis.iter().filter(|b| b.norm() > 0.5).cloned().collect();
            let mut found = None;
            for k in 0..d {
                let mut trial = CVector::zeros(d);
                trial[k] = C64::new(1.0, 0.0);
                if let Some(f) = orthogonalize(trial, &filled) {
                    found = Some(f);
                    break;
                }
            }
            basis[r] = found.ok_or_else(|| Error::Internal("schmidt basis completion".into()))?;
        }
    }
    Ok(SchmidtDecomposition { coefficients, left, right: basis })
}

fn orthogonalize(mut f: CVector, basis: &[CVector]) -> Option<CVector> {
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&f);
            f -= b * proj;
        }
    }
    let n = f.norm();
    (n > 1e-8).then(|| f / C64::new(n, 0.0))
}

/// `(Φ ⊗ I)(ρ)` with Φ acting on the first factor of `C^{d_in} ⊗ C^{k}`.
///
/// The Hermitian part of the result is returned; for Hermiticity-preserving
/// maps this only removes rounding.
pub fn apply_map_tensor_id<S: SuperOperator + ?Sized>(map: &S, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    let din = map.input_dim();
    let dout = map.output_dim();
    let total = rho.dim();
    ensure!(din > 0 && total % din == 0, Shape, "map input dimension {din} does not divide {total}");
    let k = total / din;
    let m = rho.as_matrix();
    let mut out = CMatrix::zeros(dout * k, dout * k);
    for a in 0..k {
        for b in 0..k {
            let block = CMatrix::from_fn(din, din, |i, j| m[(i * k + a, j * k + b)]);
            let image = map.apply(&block);
            for i in 0..dout {
                for j in 0..dout {
                    out[(i * k + a, j * k + b)] = image[(i, j)];
                }
            }
        }
    }
    HermitianMatrix::hermitian_part(&out)
}
