//! Orthonormal (Hilbert–Schmidt) basis of Hermitian matrices: identity
//! direction first, then the generalized Gell-Mann matrices.

use super::{CMatrix, HermitianMatrix, TracelessDirection, C64};
use crate::error::{ensure, Result};

#[derive(Clone, Debug)]
struct Element {
    entries: Vec<(usize, usize, C64)>,
}

/// Coordinates of Hermitian matrices in a fixed real orthonormal basis.
///
/// Index 0 is `Id/√m`; indices `1..m²` span the traceless hyperplane, so the
/// traceless coordinates of a direction are `coords(A)[1..]`.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<Element>,
}

impl HermitianBasis {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        let mut elements = Vec::with_capacity(dim * dim);
        let s = 1.0 / (dim as f64).sqrt();
        elements.push(Element { entries: (0..dim).map(|i| (i, i, C64::new(s, 0.0))).collect() });
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..dim {
            for k in j + 1..dim {
                elements.push(Element { entries: vec![(j, k, C64::new(r, 0.0)), (k, j, C64::new(r, 0.0))] });
                elements.push(Element { entries: vec![(j, k, C64::new(0.0, -r)), (k, j, C64::new(0.0, r))] });
            }
        }
        for l in 1..dim {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let mut entries: Vec<_> = (0..l).map(|j| (j, j, C64::new(norm, 0.0))).collect();
            entries.push((l, l, C64::new(-(l as f64) * norm, 0.0)));
            elements.push(Element { entries });
        }
        Self { dim, elements }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, `m²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Real dimension of the traceless hyperplane, `m² − 1`.
    pub fn traceless_len(&self) -> usize {
        self.elements.len() - 1
    }

    /// `tr(G_j X)` for an arbitrary complex matrix; real when X is Hermitian.
    pub fn complex_coords(&self, x: &CMatrix) -> Vec<C64> {
        self.elements
            .iter()
            .map(|e| e.entries.iter().map(|&(r, c, g)| g * x[(c, r)]).sum())
            .collect()
    }

    pub fn coords(&self, x: &HermitianMatrix) -> Vec<f64> {
        self.complex_coords(x.as_matrix()).into_iter().map(|z| z.re).collect()
    }

    /// Coordinates of a direction in the traceless hyperplane (length `m²−1`).
    pub fn traceless_coords(&self, a: &TracelessDirection) -> Vec<f64> {
        let mut c = self.coords(a.matrix());
        c.remove(0);
        c
    }

    /// Coordinates of `X − Id/m` for a unit-trace matrix `X`.
    pub fn offset_coords(&self, x: &HermitianMatrix) -> Vec<f64> {
        let mut c = self.coords(x);
        c.remove(0);
        c
    }

    pub fn complex_combination(&self, coeffs: &[C64]) -> CMatrix {
        assert_eq!(coeffs.len(), self.len());
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (e, &a) in self.elements.iter().zip(coeffs) {
            for &(r, c, g) in &e.entries {
                out[(r, c)] += g * a;
            }
        }
        out
    }

    pub fn combination(&self, coeffs: &[f64]) -> HermitianMatrix {
        let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
        HermitianMatrix::hermitian_part(&self.complex_combination(&c)).expect("square")
    }

    pub fn direction(&self, coords: &[f64]) -> Result<TracelessDirection> {
        ensure!(
            coords.len() == self.traceless_len(),
            Shape,
            "expected {} traceless coordinates, got {}",
            self.traceless_len(),
            coords.len()
        );
        let mut full = Vec::with_capacity(self.len());
        full.push(0.0);
        full.extend_from_slice(coords);
        Ok(TracelessDirection::project(&self.combination(&full)))
    }

    pub fn element(&self, k: usize) -> HermitianMatrix {
        let mut c = vec![0.0; self.len()];
        c[k] = 1.0;
        self.combination(&c)
    }
}
