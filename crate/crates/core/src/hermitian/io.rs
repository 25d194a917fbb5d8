//! JSON exchange format for matrices: `{dim, re, im}` with row-major arrays.

use serde::{Deserialize, Serialize};

use super::{CMatrix, HermitianMatrix, C64};
use crate::error::{ensure, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { dim: n, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        ensure!(
            self.re.len() == n * n && self.im.len() == n * n,
            Shape,
            "record of dim {n} carries {} / {} entries",
            self.re.len(),
            self.im.len()
        );
        Ok(CMatrix::from_fn(n, n, |i, j| C64::new(self.re[i * n + j], self.im[i * n + j])))
    }

    /// Parses a Hermitian matrix, accepting asymmetry up to `tol`.
    pub fn to_hermitian(&self, tol: f64) -> Result<HermitianMatrix> {
        HermitianMatrix::try_from_matrix(&self.to_matrix()?, tol)
    }
}

impl From<&HermitianMatrix> for MatrixRecord {
    fn from(h: &HermitianMatrix) -> Self {
        Self::from_matrix(h.as_matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{random_density, SeedStream};

    #[test]
    fn json_round_trip_is_exact() {
        let mut rng = SeedStream::new(5).rng(0);
        let h = random_density(3, 2, &mut rng).into_matrix();
        let text = serde_json::to_string(&MatrixRecord::from(&h)).unwrap();
        let back: MatrixRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_hermitian(0.0).unwrap(), h);
    }

    #[test]
    fn row_major_layout() {
        let text = r#"{"dim":2,"re":[1.0,2.0,2.0,3.0],"im":[0.0,-1.0,1.0,0.0]}"#;
        let rec: MatrixRecord = serde_json::from_str(text).unwrap();
        let h = rec.to_hermitian(0.0).unwrap();
        assert_eq!(h.get(0, 1), C64::new(2.0, -1.0));
        let bad = MatrixRecord { dim: 2, re: vec![0.0; 3], im: vec![0.0; 4] };
        assert!(bad.to_matrix().is_err());
    }
}
