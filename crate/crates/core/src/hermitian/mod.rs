//! Complex Hermitian linear algebra: matrices, states, spectral
//! decomposition, bipartite operations and seeded sampling.

mod basis;
mod bipartite;
mod eigen;
mod io;
mod sample;

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{ensure, Error, Result};

pub use basis::HermitianBasis;
pub use bipartite::{
    apply_map_tensor_id, local_dim, partial_trace, partial_transpose, schmidt, Factor,
    SchmidtDecomposition, SuperOperator,
};
pub use eigen::eigh;
pub use io::MatrixRecord;
pub use sample::{
    gue_traceless, haar_product_pure, haar_pure, random_density, sample, Sample, SampleKind,
    SeedStream,
};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Absolute tolerance on the trace of a state.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue a state may carry.
pub const PSD_TOL: f64 = 1e-10;

/// A self-adjoint matrix. Hermiticity holds bit-exactly: every constructor
/// fills the upper triangle from the conjugated lower triangle and keeps the
/// diagonal real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    /// Builds from the lower triangle; `f(i, j)` is only queried for `i >= j`.
    pub fn from_lower_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            m[(j, j)] = C64::new(f(j, j).re, 0.0);
            for i in j + 1..dim {
                let z = f(i, j);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self { m }
    }

    /// Hermitian part `(M + M†)/2` of an arbitrary square matrix.
    pub fn hermitian_part(m: &CMatrix) -> Result<Self> {
        ensure!(m.is_square(), Shape, "matrix is {}x{}", m.nrows(), m.ncols());
        Ok(Self::from_lower_fn(m.nrows(), |i, j| {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }))
    }

    /// Accepts a matrix that is already Hermitian within `tol` (entrywise).
    pub fn try_from_matrix(m: &CMatrix, tol: f64) -> Result<Self> {
        ensure!(m.is_square(), Shape, "matrix is {}x{}", m.nrows(), m.ncols());
        ensure!(
            m.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            Input,
            "non-finite entries"
        );
        let n = m.nrows();
        for i in 0..n {
            for j in 0..=i {
                let gap = (m[(i, j)] - m[(j, i)].conj()).norm();
                ensure!(gap <= tol, Input, "entry ({i},{j}) breaks Hermiticity by {gap:e}");
            }
        }
        Self::hermitian_part(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: CMatrix::identity(dim, dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_lower_fn(n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// `|v⟩⟨v|` for an arbitrary (not necessarily unit) vector.
    pub fn outer(v: &CVector) -> Self {
        Self::from_lower_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn projector(psi: &PureState) -> Self {
        Self::outer(psi.vector())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    /// `tr(AB)`, real for Hermitian arguments.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Re⟨v|A|v⟩`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        let av = &self.m * v;
        v.iter().zip(av.iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.map(|z| z * s) }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: self.m.kronecker(&other.m) }
    }

    /// Entrywise maximum deviation.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.iter().zip(other.m.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        eigh(self)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigh().expect("finite matrix").eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigh().expect("finite matrix").eigenvalues.last().expect("nonempty")
    }

    pub fn op_norm(&self) -> f64 {
        let ev = self.eigh().expect("finite matrix").eigenvalues;
        ev.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn trace_norm(&self) -> f64 {
        self.eigh().expect("finite matrix").eigenvalues.iter().map(|x| x.abs()).sum()
    }

    /// Subtracts `tr(A)/m · Id`, pinning the last diagonal entry so the trace
    /// of the result is exactly zero in floating point.
    pub fn traceless_part(&self) -> Self {
        let n = self.dim();
        let shift = self.trace() / n as f64;
        let mut out = self.m.clone();
        let mut acc = 0.0;
        for i in 0..n {
            if i + 1 < n {
                out[(i, i)] = C64::new(self.m[(i, i)].re - shift, 0.0);
                acc += out[(i, i)].re;
            } else {
                out[(i, i)] = C64::new(-acc, 0.0);
            }
        }
        Self { m: out }
    }

    /// Positive-definiteness via Cholesky after shifting by `shift`.
    /// Independent of the Jacobi eigensolver.
    pub fn is_psd_cholesky(&self, shift: f64) -> bool {
        // Hand-rolled: the complex square root would accept negative pivots.
        let n = self.dim();
        let mut l = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = self.m[(j, j)].re + shift;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return false;
            }
            let d = d.sqrt();
            l[(j, j)] = C64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self.m[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        true
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

/// A trace-zero Hermitian matrix: a direction in the hyperplane of unit-trace
/// matrices, measured from the maximally mixed state.
#[derive(Clone, Debug, PartialEq)]
pub struct TracelessDirection {
    matrix: HermitianMatrix,
}

impl TracelessDirection {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        ensure!(matrix.is_finite(), Input, "non-finite direction");
        let scale = matrix.hs_norm().max(1.0);
        let tr = matrix.trace();
        ensure!(tr.abs() <= 1e-12 * scale, Input, "direction has trace {tr:e}");
        Ok(Self { matrix })
    }

    /// Projects an arbitrary Hermitian matrix onto the traceless hyperplane.
    pub fn project(matrix: &HermitianMatrix) -> Self {
        Self { matrix: matrix.traceless_part() }
    }

    /// `X − Id/m` for a unit-trace `X`.
    pub fn from_state_offset(x: &HermitianMatrix) -> Result<Self> {
        let tr = x.trace();
        ensure!((tr - 1.0).abs() <= 1e-9, Input, "point has trace {tr}, expected 1");
        Ok(Self::project(x))
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: HermitianMatrix::zeros(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn hs_norm(&self) -> f64 {
        self.matrix.hs_norm()
    }

    pub fn normalized(&self) -> Self {
        let n = self.hs_norm();
        if n == 0.0 {
            return self.clone();
        }
        Self { matrix: self.matrix.scale(1.0 / n) }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { matrix: self.matrix.scale(s) }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.matrix.hs_inner(&other.matrix)
    }

    /// `tr(A X)` for any matrix X; equals `tr(A (X − ρ_*))` on unit-trace X.
    pub fn pair(&self, x: &HermitianMatrix) -> f64 {
        self.matrix.hs_inner(x)
    }

    /// The point `ρ_* + A` of the unit-trace hyperplane.
    pub fn to_point(&self) -> HermitianMatrix {
        let n = self.dim();
        &HermitianMatrix::identity(n).scale(1.0 / n as f64) + &self.matrix
    }
}

/// A quantum state: PSD, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        ensure!(matrix.is_finite(), Input, "non-finite state");
        let tr = matrix.trace();
        ensure!((tr - 1.0).abs() <= TRACE_TOL * matrix.dim() as f64, Input, "state has trace {tr}");
        let lmin = matrix.lambda_min();
        ensure!(lmin >= -PSD_TOL, Input, "state has eigenvalue {lmin:e}");
        Ok(Self { matrix })
    }

    /// The maximally mixed state `Id/m`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: HermitianMatrix::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn pure(psi: &PureState) -> Self {
        Self { matrix: HermitianMatrix::projector(psi) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }
}

/// A unit vector in `C^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    v: CVector,
}

impl PureState {
    pub fn new(v: CVector) -> Result<Self> {
        ensure!(!v.is_empty(), Input, "empty vector");
        let n = v.norm();
        ensure!((n - 1.0).abs() <= 1e-12, Input, "vector has norm {n}");
        Ok(Self { v })
    }

    pub fn normalize(v: CVector) -> Result<Self> {
        let n = v.norm();
        ensure!(n.is_finite() && n > 0.0, Input, "cannot normalize vector of norm {n}");
        Ok(Self { v: v / C64::new(n, 0.0) })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Self { v }
    }

    pub fn from_slice(re: &[f64], im: &[f64]) -> Result<Self> {
        ensure!(re.len() == im.len(), Shape, "re/im lengths {} vs {}", re.len(), im.len());
        Self::new(CVector::from_iterator(re.len(), re.iter().zip(im).map(|(a, b)| C64::new(*a, *b))))
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.v
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.v.dotc(&other.v)
    }

    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { v: self.v.kronecker(&other.v) }
    }

    pub fn projector(&self) -> HermitianMatrix {
        HermitianMatrix::projector(self)
    }

    pub fn with_phase(&self, angle: f64) -> Self {
        Self { v: &self.v * C64::from_polar(1.0, angle) }
    }
}

/// Eigenvalues in descending order and the matching unitary of column
/// eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= *lam;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn top(&self) -> (f64, CVector) {
        (self.eigenvalues[0], self.vector(0))
    }

    pub fn bottom(&self) -> (f64, CVector) {
        let k = self.eigenvalues.len() - 1;
        (self.eigenvalues[k], self.vector(k))
    }
}

/// Affine rescaling about the maximally mixed state:
/// `t∙ρ = tρ + (1−t)Id/m`.
pub fn bullet_scale(t: f64, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    ensure!(t.is_finite(), Parameter, "scale {t}");
    let tr = rho.trace();
    ensure!((tr - 1.0).abs() <= 1e-9, Input, "bullet scaling needs trace 1, got {tr}");
    let n = rho.dim();
    let mixed = HermitianMatrix::identity(n).scale((1.0 - t) / n as f64);
    Ok(&rho.scale(t) + &mixed)
}

pub fn check_same_dim(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!("{what}: dimension {a} vs {b}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn construction_is_exactly_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = gue_traceless(6, &mut rng);
        let m = a.matrix().as_matrix();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m[(i, j)], m[(j, i)].conj());
            }
        }
    }

    #[test]
    fn bullet_endpoints() {
        let rho = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(bullet_scale(0.0, &rho).unwrap().max_abs_diff(mixed.matrix()) < 1e-15);
        assert!(bullet_scale(1.0, &rho).unwrap().max_abs_diff(&rho) < 1e-15);
        let scaled = bullet_scale(-2.0, &rho).unwrap();
        let expected = HermitianMatrix::from_real_diagonal(&[-0.5, 1.5]);
        assert!(scaled.max_abs_diff(&expected) < 1e-15);
        assert!((scaled.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bullet_rejects_wrong_trace() {
        let rho = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]);
        assert!(matches!(bullet_scale(0.5, &rho), Err(Error::Input(_))));
    }

    #[test]
    fn traceless_part_has_zero_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in 1..8 {
            let x = random_density(m, m, &mut rng);
            let t = x.matrix().traceless_part();
            assert_eq!(t.trace(), 0.0);
        }
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(HermitianMatrix::from_real_diagonal(&[1.2, -0.2])).is_err());
        assert!(DensityMatrix::new(HermitianMatrix::from_real_diagonal(&[0.3, 0.3])).is_err());
        assert!(DensityMatrix::new(HermitianMatrix::from_real_diagonal(&[0.3, 0.7])).is_ok());
    }

    #[test]
    fn pure_state_norm_checked() {
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(PureState::new(v.clone()).is_err());
        assert!(PureState::normalize(v).is_ok());
    }

    #[test]
    fn traceless_direction_rejects_trace() {
        let a = HermitianMatrix::from_real_diagonal(&[0.5, 0.0]);
        assert!(TracelessDirection::new(a).is_err());
    }

    #[test]
    fn norm_bounds_for_traceless_directions() {
        // ‖A‖_op ≤ m λ_1(A) and ‖A‖_Tr ≤ 2m λ_1(A) on trace-zero A.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 2..7 {
            for _ in 0..200 {
                let a = gue_traceless(m, &mut rng);
                let l1 = a.matrix().lambda_max();
                assert!(a.matrix().op_norm() <= m as f64 * l1 + 1e-12);
                assert!(a.matrix().trace_norm() <= 2.0 * m as f64 * l1 + 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_test_rejects_indefinite() {
        assert!(HermitianMatrix::identity(3).is_psd_cholesky(0.0));
        assert!(!HermitianMatrix::from_real_diagonal(&[1.0, -1e-6]).is_psd_cholesky(0.0));
        assert!(HermitianMatrix::from_real_diagonal(&[1.0, -1e-6]).is_psd_cholesky(2e-6));
        let y = HermitianMatrix::from_lower_fn(2, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.5) });
        assert!(!y.is_psd_cholesky(0.0));
        assert!(y.is_psd_cholesky(0.6));
    }
}
