//! Linear maps on `M_d` stored as real action matrices in the orthonormal
//! Hermitian basis, with claimed properties and their provenance.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::hermitian::{CMatrix, HermitianBasis, HermitianMatrix, SeedStream, SuperOperator, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Builtin,
    Constructed,
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MapFlags {
    pub claimed_positive: bool,
    pub unital: bool,
    pub trace_preserving: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PositiveMapRep {
    pub name: String,
    pub d_in: usize,
    pub d_out: usize,
    /// `action[k][j] = tr(G'_k Φ(G_j))`, a `d_out² × d_in²` real matrix.
    pub action: Vec<Vec<f64>>,
    pub flags: MapFlags,
    pub provenance: Provenance,
}

impl SuperOperator for PositiveMapRep {
    fn input_dim(&self) -> usize {
        self.d_in
    }

    fn output_dim(&self) -> usize {
        self.d_out
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let c = HermitianBasis::new(self.d_in).complex_coords(x);
        let out: Vec<C64> = self.action.iter().map(|row| row.iter().zip(&c).map(|(r, z)| z * *r).sum()).collect();
        HermitianBasis::new(self.d_out).complex_combination(&out)
    }
}

impl PositiveMapRep {
    /// Tabulates a Hermiticity-preserving map. Flags are computed for unitality
    /// and trace preservation; positivity is taken as claimed.
    pub fn from_fn(
        name: impl Into<String>,
        d_in: usize,
        d_out: usize,
        claimed_positive: bool,
        provenance: Provenance,
        f: impl Fn(&CMatrix) -> CMatrix,
    ) -> Result<Self> {
        ensure!(d_in >= 1 && d_out >= 1, Parameter, "dimensions must be positive");
        let bin = HermitianBasis::new(d_in);
        let bout = HermitianBasis::new(d_out);
        let mut action = vec![vec![0.0; bin.len()]; bout.len()];
        for j in 0..bin.len() {
            let image = f(bin.element(j).as_matrix());
            ensure!(image.nrows() == d_out && image.ncols() == d_out, Shape, "map image has shape {}×{}", image.nrows(), image.ncols());
            for (k, z) in bout.complex_coords(&image).into_iter().enumerate() {
                ensure!(z.im.abs() <= 1e-10, Input, "map does not preserve Hermiticity");
                action[k][j] = z.re;
            }
        }
        let mut rep = Self {
            name: name.into(),
            d_in,
            d_out,
            action,
            flags: MapFlags { claimed_positive, unital: false, trace_preserving: false },
            provenance,
        };
        rep.flags.unital = rep.is_unital(1e-10);
        rep.flags.trace_preserving = rep.is_trace_preserving(1e-10);
        Ok(rep)
    }

    pub fn apply_hermitian(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        ensure!(x.dim() == self.d_in, Shape, "input of dimension {} for map on M_{}", x.dim(), self.d_in);
        HermitianMatrix::hermitian_part(&self.apply(x.as_matrix()))
    }

    /// `Φ(Id)`.
    pub fn image_of_identity(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.apply(&CMatrix::identity(self.d_in, self.d_in))).expect("square")
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.d_in == self.d_out && self.image_of_identity().max_abs_diff(&HermitianMatrix::identity(self.d_out)) <= tol
    }

    /// `tr Φ(G_j) = tr G_j` for every basis element.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let bin = HermitianBasis::new(self.d_in);
        let bout = HermitianBasis::new(self.d_out);
        (0..bin.len()).all(|j| {
            let out: Vec<f64> = self.action.iter().map(|row| row[j]).collect();
            (bout.combination(&out).trace() - bin.element(j).trace()).abs() <= tol
        })
    }

    /// `X ↦ Φ(X)` followed by `Y ↦ L Y L†`.
    fn congruence(&self, name: String, l: &CMatrix) -> Result<Self> {
        let positive = self.flags.claimed_positive;
        PositiveMapRep::from_fn(name, self.d_in, self.d_out, positive, Provenance::Constructed, |x| {
            l * self.apply(x) * l.adjoint()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "map")]
pub enum BuiltinMap {
    Identity,
    Transpose,
    /// `X ↦ tr(X)·Id − X`.
    Reduction,
    /// Choi's non-decomposable map on `M_3`.
    ChoiD3,
    RandomUnitalCp { seed: u64 },
}

impl std::str::FromStr for BuiltinMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => BuiltinMap::Identity,
            "transpose" => BuiltinMap::Transpose,
            "reduction" => BuiltinMap::Reduction,
            "choi-d3" => BuiltinMap::ChoiD3,
            _ => match s.strip_prefix("random-unital-cp") {
                Some("") => BuiltinMap::RandomUnitalCp { seed: 0 },
                Some(rest) => {
                    let seed = rest.trim_start_matches([':', '=']).parse().map_err(|_| Error::Input(format!("bad seed in map name {s:?}")))?;
                    BuiltinMap::RandomUnitalCp { seed }
                }
                None => return Err(Error::Input(format!("unknown map {s:?}"))),
            },
        })
    }
}

const KRAUS: usize = 3;

/// Builtin map on `M_d`.
pub fn builtin_map(which: BuiltinMap, d: usize) -> Result<PositiveMapRep> {
    ensure!(d >= 1, Parameter, "dimension must be positive");
    let ident = CMatrix::identity(d, d);
    match which {
        BuiltinMap::Identity => PositiveMapRep::from_fn("identity", d, d, true, Provenance::Builtin, |x| x.clone()),
        BuiltinMap::Transpose => PositiveMapRep::from_fn("transpose", d, d, true, Provenance::Builtin, |x| x.transpose()),
        BuiltinMap::Reduction => PositiveMapRep::from_fn("reduction", d, d, true, Provenance::Builtin, |x| &ident * x.trace() - x),
        BuiltinMap::ChoiD3 => {
            ensure!(d == 3, Parameter, "the Choi map acts on M_3, not M_{d}");
            PositiveMapRep::from_fn("choi-d3", 3, 3, true, Provenance::Builtin, |x| {
                let mut y = -x.clone();
                y[(0, 0)] += x[(0, 0)] * 2.0 + x[(2, 2)];
                y[(1, 1)] += x[(1, 1)] * 2.0 + x[(0, 0)];
                y[(2, 2)] += x[(2, 2)] * 2.0 + x[(1, 1)];
                y
            })
        }
        BuiltinMap::RandomUnitalCp { seed } => {
            let mut rng = SeedStream::new(seed).rng(0);
            let mut gauss = || C64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal));
            let raw: Vec<CMatrix> = (0..KRAUS).map(|_| CMatrix::from_fn(d, d, |_, _| gauss())).collect();
            // Σ K K† = Id after K ↦ S^{-1/2} K.
            let s = raw.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k * k.adjoint());
            let inv_sqrt = inverse_sqrt(&HermitianMatrix::hermitian_part(&s)?)?;
            let kraus: Vec<CMatrix> = raw.iter().map(|k| &inv_sqrt * k).collect();
            PositiveMapRep::from_fn(format!("random-unital-cp:{seed}"), d, d, true, Provenance::Builtin, |x| {
                kraus.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k * x * k.adjoint())
            })
        }
    }
}

/// `S^{-1/2}` for positive definite `S`.
fn inverse_sqrt(s: &HermitianMatrix) -> Result<CMatrix> {
    let spec = s.eigh()?;
    let top = spec.eigenvalues.iter().copied().fold(0.0, f64::max);
    let n = s.dim();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let l = spec.eigenvalues[k];
        if l <= 1e-12 * top.max(1e-300) {
            return Err(Error::Precondition(format!(
                "Φ(Id) is singular (eigenvalue {l:e}); apply complete_range first"
            )));
        }
        let v = spec.vector(k);
        out += &v * v.adjoint() * C64::new(1.0 / l.sqrt(), 0.0);
    }
    Ok(out)
}

/// `X ↦ Φ(Id)^{-1/2} Φ(X) Φ(Id)^{-1/2}`.
pub fn unitalize(map: &PositiveMapRep) -> Result<PositiveMapRep> {
    ensure!(map.d_in == map.d_out, Parameter, "unitalization needs a map on a single M_d");
    if map.is_unital(1e-12) {
        return Ok(map.clone());
    }
    let l = inverse_sqrt(&map.image_of_identity())?;
    let mut out = map.congruence(format!("unitalized({})", map.name), &l)?;
    out.flags.unital = out.is_unital(1e-10);
    ensure!(out.flags.unital, Internal, "unitalized map misses Φ(Id) = Id");
    Ok(out)
}

/// `X ↦ Φ(X) + P X P` with `P` the projector onto `ker Φ(Id)`, so that the
/// image of the identity becomes invertible.
pub fn complete_range(map: &PositiveMapRep) -> Result<PositiveMapRep> {
    ensure!(map.d_in == map.d_out, Parameter, "range completion needs a map on a single M_d");
    let spec = map.image_of_identity().eigh()?;
    let top = spec.eigenvalues.iter().copied().fold(0.0, f64::max);
    let d = map.d_in;
    let mut p = CMatrix::zeros(d, d);
    let mut kernel = 0;
    for k in 0..d {
        if spec.eigenvalues[k] <= 1e-10 * top.max(1.0) {
            let v = spec.vector(k);
            p += &v * v.adjoint();
            kernel += 1;
        }
    }
    if kernel == 0 {
        return Ok(map.clone());
    }
    PositiveMapRep::from_fn(format!("completed({})", map.name), d, d, map.flags.claimed_positive, Provenance::Constructed, |x| {
        map.apply(x) + &p * x * &p
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_flags() {
        let t = builtin_map(BuiltinMap::Transpose, 2).unwrap();
        assert!(t.flags.unital && t.flags.trace_preserving && t.flags.claimed_positive);
        let r = builtin_map(BuiltinMap::Reduction, 3).unwrap();
        assert!(!r.flags.unital && !r.flags.trace_preserving);
        let c = builtin_map(BuiltinMap::RandomUnitalCp { seed: 5 }, 3).unwrap();
        assert!(c.image_of_identity().max_abs_diff(&HermitianMatrix::identity(3)) <= 1e-10);
        assert!(builtin_map(BuiltinMap::ChoiD3, 2).is_err());
        assert!("frobnicate".parse::<BuiltinMap>().is_err());
        assert_eq!("random-unital-cp:7".parse::<BuiltinMap>().unwrap(), BuiltinMap::RandomUnitalCp { seed: 7 });
    }

    #[test]
    fn choi_map_entries() {
        let c = builtin_map(BuiltinMap::ChoiD3, 3).unwrap();
        let x = CMatrix::from_fn(3, 3, |i, j| C64::new((i + 1) as f64 * 10.0 + j as f64, if i == j { 0.0 } else { i as f64 - j as f64 }));
        let x = (&x + x.adjoint()) * C64::new(0.5, 0.0);
        let y = c.apply(&x);
        assert!((y[(0, 0)] - (x[(0, 0)] + x[(2, 2)])).norm() < 1e-12);
        assert!((y[(1, 1)] - (x[(1, 1)] + x[(0, 0)])).norm() < 1e-12);
        assert!((y[(0, 1)] + x[(0, 1)]).norm() < 1e-12);
        assert!(c.image_of_identity().max_abs_diff(&HermitianMatrix::identity(3).scale(2.0)) < 1e-12);
    }

    #[test]
    fn unitalize_examples() {
        let t = builtin_map(BuiltinMap::Transpose, 2).unwrap();
        let u = unitalize(&t).unwrap();
        assert_eq!(u.action, t.action);
        let dd = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]));
        let f = PositiveMapRep::from_fn("DXD", 2, 2, true, Provenance::Constructed, |x| &dd * x * &dd).unwrap();
        let id = builtin_map(BuiltinMap::Identity, 2).unwrap();
        let u = unitalize(&f).unwrap();
        for (a, b) in u.action.iter().flatten().zip(id.action.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
        let r = builtin_map(BuiltinMap::Reduction, 3).unwrap();
        let u = unitalize(&r).unwrap();
        for (a, b) in u.action.iter().flatten().zip(r.action.iter().flatten()) {
            assert!((a - b / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_identity_image() {
        let p = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
        let f = PositiveMapRep::from_fn("PXP", 2, 2, true, Provenance::Constructed, |x| &p * x * &p).unwrap();
        assert!(matches!(unitalize(&f), Err(Error::Precondition(_))));
        let g = complete_range(&f).unwrap();
        assert!(g.image_of_identity().lambda_min() > 0.0);
        // PXP + P⊥XP⊥ on a sample matrix.
        let x = CMatrix::from_fn(2, 2, |i, j| C64::new(1.0 + i as f64, j as f64 - i as f64));
        let y = g.apply(&x);
        assert!((y[(0, 1)]).norm() < 1e-12 && (y[(0, 0)] - x[(0, 0)]).norm() < 1e-12 && (y[(1, 1)] - x[(1, 1)]).norm() < 1e-12);
        let t = builtin_map(BuiltinMap::Transpose, 2).unwrap();
        assert_eq!(complete_range(&t).unwrap().action, t.action);
    }

    #[test]
    fn map_serializes() {
        let t = builtin_map(BuiltinMap::Reduction, 2).unwrap();
        let back: PositiveMapRep = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back.action, t.action);
        assert_eq!(back.provenance, Provenance::Builtin);
    }
}
