//! Seeded sampling of pure states, mixed states and traceless directions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{CVector, DensityMatrix, HermitianMatrix, PureState, TracelessDirection, C64};
use crate::error::{ensure, Result};

/// A seed that hands out independent ChaCha streams by task index.
///
/// `rng(i)` is the keystream of `seed` at stream number `i`, so parallel
/// workers indexed by task draw reproducible, non-overlapping sequences no
/// matter how tasks are scheduled. `child(label)` derives a fresh seed for
/// nested experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedStream {
    pub seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn rng(&self, task: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(task);
        rng
    }

    pub fn child(&self, label: u64) -> Self {
        Self { seed: splitmix64(self.seed ^ splitmix64(label.wrapping_add(0x9e37_79b9_7f4a_7c15))) }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random unit vector in `C^m` (normalized complex Gaussian).
pub fn haar_pure<R: Rng + ?Sized>(m: usize, rng: &mut R) -> PureState {
    assert!(m >= 1, "dimension must be positive");
    loop {
        let v = CVector::from_fn(m, |_, _| complex_gaussian(rng));
        if let Ok(psi) = PureState::normalize(v) {
            return psi;
        }
    }
}

/// `ψ ⊗ φ` with independent Haar factors on `C^d`.
pub fn haar_product_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    let a = haar_pure(d, rng);
    let b = haar_pure(d, rng);
    a.kron(&b)
}

/// GUE matrix with its trace removed; the trace of the result is exactly 0.
pub fn gue_traceless<R: Rng + ?Sized>(m: usize, rng: &mut R) -> TracelessDirection {
    assert!(m >= 1, "dimension must be positive");
    let h = HermitianMatrix::from_lower_fn(m, |i, j| {
        if i == j {
            C64::new(gaussian(rng), 0.0)
        } else {
            complex_gaussian(rng)
        }
    });
    TracelessDirection::project(&h)
}

/// Random state `G G† / tr(G G†)` with `G` an `m × rank` complex Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(m: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(m >= 1 && rank >= 1);
    let g = nalgebra::DMatrix::from_fn(m, rank, |_, _| complex_gaussian(rng));
    let w = &g * g.adjoint();
    let h = HermitianMatrix::hermitian_part(&w).expect("square");
    let tr = h.trace();
    DensityMatrix::new(h.scale(1.0 / tr)).expect("Wishart matrices are states")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "dim")]
pub enum SampleKind {
    HaarPure(usize),
    GueTraceless(usize),
    HaarProductPure(usize),
}

#[derive(Clone, Debug)]
pub enum Sample {
    Pure(PureState),
    Direction(TracelessDirection),
}

pub fn sample<R: Rng + ?Sized>(kind: SampleKind, rng: &mut R) -> Result<Sample> {
    Ok(match kind {
        SampleKind::HaarPure(m) => {
            ensure!(m >= 1, Parameter, "dimension must be positive");
            Sample::Pure(haar_pure(m, rng))
        }
        SampleKind::GueTraceless(m) => {
            ensure!(m >= 1, Parameter, "dimension must be positive");
            Sample::Direction(gue_traceless(m, rng))
        }
        SampleKind::HaarProductPure(d) => {
            ensure!(d >= 1, Parameter, "dimension must be positive");
            Sample::Pure(haar_product_pure(d, rng))
        }
    })
}
