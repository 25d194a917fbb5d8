//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real symmetric Jacobi rotation to the
//! resulting 2×2 block. Sweeps stop once the off-diagonal Frobenius mass
//! drops below `1e-12` of the total mass (or hits the underflow floor).

use super::{CMatrix, HermitianMatrix, SpectralDecomposition, C64};
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Full spectral decomposition of a Hermitian matrix, eigenvalues descending.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    if !h.is_finite() {
        return Err(Error::Input("eigh: non-finite entries".into()));
    }
    let n = h.dim();
    let mut a: CMatrix = h.as_matrix().clone();
    let mut v = CMatrix::identity(n, n);

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let floor = (OFF_DIAGONAL_TOL * OFF_DIAGONAL_TOL * total).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_mass(&a);
        if off <= floor {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_mass(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal in floating point.
    if mag < 1e-300 || (app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.nrows();
    let pc = phase.conj();

    // A ← A G with G = [[c, s], [−s·conj(u), c·conj(u)]] on columns (p, q).
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c - aiq * pc * s;
        a[(i, q)] = aip * s + aiq * pc * c;
    }
    // A ← G† A on rows (p, q).
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c - aqj * phase * s;
        a[(q, j)] = apj * s + aqj * phase * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * pc * s;
        v[(i, q)] = vip * s + viq * pc * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{gue_traceless, CMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_input_sorted() {
        let h = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let d = eigh(&h).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x() {
        let h = HermitianMatrix::from_lower_fn(2, |i, j| if i == j { c(0.0, 0.0) } else { c(1.0, 0.0) });
        let d = eigh(&h).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_complex_pivot() {
        let h = HermitianMatrix::from_lower_fn(2, |i, j| if i == j { c(0.0, 0.0) } else { c(0.0, 1.0) });
        let d = eigh(&h).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-15);
        let err = (d.reconstruct() - h.as_matrix()).norm();
        assert!(err < 1e-14);
    }

    #[test]
    fn rejects_non_finite() {
        let h = HermitianMatrix::from_real_diagonal(&[f64::NAN, 1.0]);
        assert!(matches!(eigh(&h), Err(Error::Input(_))));
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let m = 1 + k % 12;
            let h = gue_traceless(m, &mut rng).matrix().clone();
            let d = eigh(&h).unwrap();
            let rel = (d.reconstruct() - h.as_matrix()).norm() / h.hs_norm().max(1e-300);
            worst = worst.max(rel);
            let gram = d.eigenvectors.adjoint() * &d.eigenvectors;
            assert!((gram - CMatrix::identity(m, m)).norm() < 1e-10);
            assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
        assert!(worst < 1e-10, "worst relative reconstruction error {worst:e}");
    }

    #[test]
    fn agrees_with_nalgebra_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in [3, 8, 16] {
            let h = gue_traceless(m, &mut rng).matrix().clone();
            let mut ours = eigh(&h).unwrap().eigenvalues;
            let mut theirs: Vec<f64> = h.as_matrix().clone().symmetric_eigenvalues().iter().copied().collect();
            ours.sort_by(f64::total_cmp);
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let h = HermitianMatrix::identity(5).scale(0.25);
        let d = eigh(&h).unwrap();
        assert!(d.eigenvalues.iter().all(|x| *x == 0.25));
    }
}
