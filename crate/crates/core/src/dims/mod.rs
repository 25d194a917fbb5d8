//! Verticial and facial dimension bounds (natural logarithm throughout),
//! ball sandwich constructions, FLM-type products and the overlap check on
//! product-state polytopes.

pub mod sections;

pub use sections::{dvoretzky_section, fixed_frame_section, Gauge, SectionExperiment, SectionTrial};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::StatePolytope;
use crate::error::{ensure, Result};
use crate::hermitian::{haar_pure, schmidt, PureState, SeedStream};
use crate::nets::{build_net, verify_cover};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "body")]
pub enum DimBody {
    D { m: usize },
    Sep { d: usize },
    Ball { n: usize },
    Cube { n: usize },
    Simplex { n: usize },
}

impl DimBody {
    pub fn label(&self) -> String {
        match self {
            DimBody::D { m } => format!("D(C^{m})"),
            DimBody::Sep { d } => format!("Sep(C^{d}⊗C^{d})"),
            DimBody::Ball { n } => format!("B_2^{n}"),
            DimBody::Cube { n } => format!("cube^{n}"),
            DimBody::Simplex { n } => format!("simplex^{n}"),
        }
    }

    /// Real dimension of the body.
    pub fn ambient(&self) -> usize {
        match *self {
            DimBody::D { m } => m * m - 1,
            DimBody::Sep { d } => d * d * d * d - 1,
            DimBody::Ball { n } | DimBody::Cube { n } | DimBody::Simplex { n } => n,
        }
    }

    /// Hilbert–Schmidt asphericity `R/r` about the natural center, where known.
    pub fn asphericity(&self) -> Option<f64> {
        match *self {
            DimBody::D { m } => Some(m as f64 - 1.0),
            DimBody::Sep { d } => Some((d * d) as f64 - 1.0),
            DimBody::Ball { .. } => Some(1.0),
            DimBody::Cube { n } => Some((n as f64).sqrt()),
            DimBody::Simplex { n } => Some(n as f64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    Verticial,
    Facial,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimEstimate {
    pub body_label: String,
    pub resolution: f64,
    pub kind: DimKind,
    pub lower_nats: Option<f64>,
    pub upper_nats: Option<f64>,
    pub method: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<serde_json::Value>,
}

/// `(n−1)/(2A²)`.
pub fn dim_lower_ball(n: usize, a: f64) -> Result<f64> {
    ensure!(n >= 2, Parameter, "n must be at least 2");
    ensure!(a > 1.0, Parameter, "resolution must exceed 1, got {a}");
    Ok((n as f64 - 1.0) / (2.0 * a * a))
}

/// Normalized measure of a spherical cap of angular radius `phi` on `S^{n−1}`.
pub fn cap_measure(n: usize, phi: f64) -> f64 {
    if phi >= std::f64::consts::PI {
        return 1.0;
    }
    if n == 1 {
        return 0.5;
    }
    if n == 2 {
        return phi / std::f64::consts::PI;
    }
    let p = n as i32 - 2;
    let simpson = |b: f64, panels: usize| {
        let h = b / panels as f64;
        let mut s = 0.0;
        for k in 0..=panels {
            let c = if k == 0 || k == panels { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            s += c * (k as f64 * h).sin().powi(p);
        }
        s * h / 3.0
    };
    simpson(phi, 1 << 14) / simpson(std::f64::consts::PI, 1 << 15)
}

/// Lower bound for both dimensions of `B_2^n` at resolution `A`: with
/// `B ⊂ P ⊂ AB`, the facet normals' caps of angular radius `arccos(1/A)`
/// cover the sphere; by polarity the same count bounds vertices.
pub fn cap_cover_lower(n: usize, a: f64) -> Result<f64> {
    ensure!(n >= 1, Parameter, "n must be positive");
    ensure!(a > 1.0, Parameter, "resolution must exceed 1, got {a}");
    Ok((1.0 / cap_measure(n, (1.0 / a).acos())).ln().max(0.0))
}

/// Best available lower bound for `B_2^n`.
pub fn ball_lower(n: usize, a: f64) -> Result<(f64, &'static str)> {
    let quad = dim_lower_ball(n, a)?;
    let cap = cap_cover_lower(n, a)?;
    Ok(if cap > quad { (cap, "cap covering") } else { (quad, "quadratic") })
}

/// Constructive verticial upper bound, in nats.
pub fn dim_v_upper(body: DimBody, a: f64) -> Result<DimEstimate> {
    ensure!(a > 1.0, Parameter, "resolution must exceed 1, got {a}");
    let shrink = 1.0 - 1.0 / a;
    let (nats, method) = match body {
        DimBody::D { m } => {
            ensure!(m >= 2, Parameter, "D(C^{m}) is a point");
            let delta = shrink / (2.0 * m as f64);
            (2.0 * m as f64 * (1.0 + 2.0 / delta).ln(), format!("projective δ-net of C^{m}, δ = {delta}, volumetric count"))
        }
        DimBody::Sep { d } => {
            ensure!(d >= 2, Parameter, "local dimension must be at least 2");
            let eps = shrink / (4.0 * (d * d) as f64);
            (4.0 * d as f64 * (1.0 + 2.0 / eps).ln(), format!("product of ε-nets of C^{d}, ε = {eps}, volumetric count"))
        }
        DimBody::Ball { n } => {
            ensure!(n >= 1, Parameter, "n must be positive");
            ball_upper(n, a)
        }
        DimBody::Cube { n } => {
            ensure!(n >= 1, Parameter, "n must be positive");
            (n as f64 * 2f64.ln(), "the cube's own vertices".into())
        }
        DimBody::Simplex { n } => {
            ensure!(n >= 1, Parameter, "n must be positive");
            (((n + 1) as f64).ln(), "the simplex's own vertices".into())
        }
    };
    Ok(DimEstimate {
        body_label: body.label(),
        resolution: a,
        kind: DimKind::Verticial,
        lower_nats: None,
        upper_nats: Some(nats),
        method,
        witnesses: Vec::new(),
    })
}

fn ball_upper(n: usize, a: f64) -> (f64, String) {
    let nf = n as f64;
    let delta = (2.0 * (1.0 - 1.0 / a)).sqrt();
    let mut best = (nf * (1.0 + 2.0 / delta).ln(), format!("net of S^{}, δ = {delta}, volumetric count", n - 1));
    let mut consider = |nats: f64, what: &str| {
        if nats < best.0 {
            best = (nats, what.to_string());
        }
    };
    if nf <= a {
        consider((nf + 1.0).ln(), "regular simplex");
    }
    if nf.sqrt() <= a {
        consider((2.0 * nf).ln(), "cross-polytope");
        consider(nf * 2f64.ln(), "cube");
    }
    best
}

/// A vertex polytope `P` with `B ⊂ P ⊂ A·B`, checked numerically.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BallConstruction {
    pub name: String,
    pub n: usize,
    pub vertices: usize,
    /// Largest vertex norm.
    pub outer: f64,
    /// Smallest support value over the probe directions.
    pub inner_probe: f64,
    pub contains_ball: bool,
    pub inside_scaled_ball: bool,
    pub log_card: f64,
}

fn simplex_vertices(n: usize) -> Vec<Vec<f64>> {
    // Centered regular simplex: e_i − c in R^{n+1}, then an orthonormal basis
    // of the hyperplane Σx = 0 via Gram–Schmidt.
    let dim = n + 1;
    let centered: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / dim as f64).collect())
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in &centered {
        let mut w = v.clone();
        for b in &basis {
            let p: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let nn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nn > 1e-9 && basis.len() < n {
            basis.push(w.into_iter().map(|x| x / nn).collect());
        }
    }
    let raw: Vec<Vec<f64>> = centered.iter().map(|v| basis.iter().map(|b| v.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
    // Inradius of the unit-circumradius simplex is 1/n; scale it to 1.
    let r = raw[0].iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.into_iter().map(|v| v.into_iter().map(|x| x * n as f64 / r).collect()).collect()
}

fn probe_inner(vertices: &[Vec<f64>], n: usize, probes: usize, seeds: SeedStream) -> f64 {
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(probes + 2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            dirs.push(e);
        }
    }
    // Outward normals of the polytope sit opposite vertices; probe those too.
    dirs.extend(vertices.iter().map(|v| {
        let nn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter().map(|x| -x / nn).collect()
    }));
    if let Ok(net) = crate::nets::random_net(n, probes.max(1), seeds) {
        dirs.extend(net.points);
    }
    dirs.par_iter()
        .map(|u| vertices.iter().map(|v| v.iter().zip(u).map(|(x, y)| x * y).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max))
        .reduce(|| f64::INFINITY, f64::min)
}

/// Every vertex construction the toolkit offers for `B ⊂ P ⊂ A·B` in `R^n`.
pub fn ball_constructions(n: usize, a: f64, probes: usize, seeds: SeedStream) -> Result<Vec<BallConstruction>> {
    ensure!(n >= 2, Parameter, "n must be at least 2");
    ensure!(a > 1.0, Parameter, "resolution must exceed 1, got {a}");
    let nf = n as f64;
    let mut out: Vec<(String, Vec<Vec<f64>>)> = Vec::new();
    if nf <= a {
        out.push(("regular simplex".into(), simplex_vertices(n)));
    }
    if nf.sqrt() <= a {
        let cross: Vec<Vec<f64>> = (0..2 * n)
            .map(|k| {
                let mut v = vec![0.0; n];
                v[k / 2] = if k % 2 == 0 { nf.sqrt() } else { -nf.sqrt() };
                v
            })
            .collect();
        out.push(("cross-polytope".into(), cross));
        let cube: Vec<Vec<f64>> = (0..1usize << n)
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect())
            .collect();
        out.push(("cube".into(), cube));
    }
    // Net: δ-cover ⇒ conv ⊇ (1 − δ²/2)B. Shrink δ a little for slack against
    // holes left by greedy sampling.
    let delta = 0.9 * (2.0 * (1.0 - 1.0 / a)).sqrt();
    let net = build_net(n, delta, seeds.child(1), None)?;
    let cover = verify_cover(&net, probes.max(1), delta, seeds.child(2))?;
    let scale = 1.0 / (1.0 - delta * delta / 2.0);
    out.push((
        format!("net, δ = {delta:.4}, coverage {:.4}", cover.fraction_covered),
        net.points.iter().map(|p| p.iter().map(|x| x * scale).collect()).collect(),
    ));
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(k, (name, vertices))| {
            let outer = vertices.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
            let inner_probe = probe_inner(&vertices, n, probes, seeds.child(10 + k as u64));
            BallConstruction {
                name,
                n,
                vertices: vertices.len(),
                outer,
                inner_probe,
                contains_ball: inner_probe >= 1.0 - 1e-9,
                inside_scaled_ball: outer <= a + 1e-9,
                log_card: (vertices.len() as f64).ln(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlmRow {
    pub body: String,
    pub n: usize,
    pub asphericity: f64,
    pub a: f64,
    pub b: f64,
    pub dim_f_lower: Option<f64>,
    pub dim_v_lower: Option<f64>,
    pub dim_v_upper: Option<f64>,
    /// `A²·dim_F·B²·dim_V·a²` from the lower bounds.
    pub product: Option<f64>,
    pub ratio: Option<f64>,
    pub complete: bool,
    pub note: String,
}

/// Lower bounds for a body via its HS sandwich `rB ⊂ K ⊂ RB`: any `P` with
/// `K ⊂ P ⊂ AK` sandwiches a ball at resolution `A·R/r`.
fn sandwich_lower(n: usize, a: f64, asph: f64) -> Result<f64> {
    cap_cover_lower(n, a * asph)
}

/// One row per body; missing ingredients leave the row incomplete.
pub fn flm_report(bodies: &[DimBody], a: f64, b: f64) -> Result<Vec<FlmRow>> {
    ensure!(a > 1.0 && b > 1.0, Parameter, "resolutions must exceed 1");
    bodies
        .iter()
        .map(|&body| {
            let n = body.ambient();
            let asph = body.asphericity().unwrap_or(f64::NAN);
            let upper = dim_v_upper(body, b).ok().and_then(|e| e.upper_nats);
            let (f_low, v_low, note) = match body {
                DimBody::Ball { n } if n >= 2 => {
                    let (fl, how_f) = ball_lower(n, a)?;
                    let (vl, how_v) = ball_lower(n, b)?;
                    let q = dim_lower_ball(n, a)? * dim_lower_ball(n, b)?;
                    (Some(fl), Some(vl), format!("{how_f}/{how_v} bounds; quadratic-only ratio {:.4}", a * a * b * b * q / (n * n) as f64))
                }
                DimBody::Sep { .. } => (
                    Some(sandwich_lower(n, a, asph)?),
                    Some(sandwich_lower(n, b, asph)?),
                    "lower bounds from the HS sandwich only; the facial bound of order d³/log d is not computed".into(),
                ),
                DimBody::D { .. } => (
                    Some(sandwich_lower(n, a, asph)?),
                    Some(sandwich_lower(n, b, asph)?),
                    "lower bounds from the HS sandwich only".into(),
                ),
                _ => (None, None, "no lower bound available".into()),
            };
            let product = match (f_low, v_low) {
                (Some(f), Some(v)) if asph.is_finite() => Some(a * a * f * b * b * v * asph * asph),
                _ => None,
            };
            Ok(FlmRow {
                body: body.label(),
                n,
                asphericity: asph,
                a,
                b,
                dim_f_lower: f_low,
                dim_v_lower: v_low,
                dim_v_upper: upper,
                product,
                ratio: product.map(|p| p / (n * n) as f64),
                complete: product.is_some() && upper.is_some(),
                note,
            })
        })
        .collect()
}

/// Writes rows as CSV with a header.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| crate::Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::Error::Internal(e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectiveNetCheck {
    pub d: usize,
    pub samples: usize,
    /// `min_φ max_i |⟨φ|φ_i⟩|²` over the sampled φ.
    pub worst_overlap: f64,
    pub bound: f64,
    pub pass: bool,
    /// Smallest value of `g` over all vertices and samples (nonnegative by construction).
    pub min_g_vertices: f64,
    /// Smallest `g(¼∙|χ⊗φ⟩⟨χ⊗φ|)`; nonnegative whenever `¼∙Sep ⊂ P`.
    pub min_g_quarter: f64,
    /// Smallest `α` permitted by `g(¼∙·) ≥ 0`: `(1 + 3/d²)/(1 + 3/d)`.
    pub implied_alpha: f64,
    pub seed: u64,
}

fn product_factors(p: &StatePolytope) -> Result<(Vec<PureState>, Vec<PureState>)> {
    if let Some((l, r)) = p.product_factors() {
        return Ok((l.to_vec(), r.to_vec()));
    }
    let mut left = Vec::with_capacity(p.len());
    let mut right = Vec::with_capacity(p.len());
    for v in p.vertices() {
        let s = schmidt(&v)?;
        ensure!(s.coefficients.get(1).is_none_or(|&c| c <= 1e-9), Input, "vertex is not a product state (second Schmidt coefficient {:e})", s.coefficients[1]);
        left.push(PureState::normalize(s.left[0].clone())?);
        right.push(PureState::normalize(s.right[0].clone())?);
    }
    Ok((left, right))
}

/// For sampled `φ`, `α(φ) = max_i |⟨φ|φ_i⟩|²` over the second factors; a
/// polytope containing `¼∙Sep` forces `α ≥ 1 − 3/d`. Also evaluates
/// `g(ρ) = tr[ρ(|χ⟩⟨χ| ⊗ (α Id − |φ⟩⟨φ|))]` on the vertices and on
/// `¼∙|χ⊗φ⟩⟨χ⊗φ|`. The inclusion itself is the caller's responsibility.
pub fn projective_net_check(p: &StatePolytope, samples: usize, tol: f64, seeds: SeedStream) -> Result<ProjectiveNetCheck> {
    ensure!(samples >= 1, Parameter, "need at least one sample");
    let d = crate::hermitian::local_dim(p.dim())?;
    let (left, right) = product_factors(p)?;
    let product = p.product_factors().is_some();
    let df = d as f64;
    let per: Vec<(f64, f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds.rng(i as u64);
            let phi = haar_pure(d, &mut rng);
            let chi = haar_pure(d, &mut rng);
            let b: Vec<f64> = right.iter().map(|r| phi.overlap(r)).collect();
            let alpha = b.iter().copied().fold(0.0, f64::max);
            let a: Vec<f64> = left.iter().map(|l| chi.overlap(l)).collect();
            // g on vertex (i, j) is a_i (α − b_j); over a product set take the extreme pair.
            let g_min = if product {
                let gb = b.iter().map(|x| alpha - x).fold(f64::INFINITY, f64::min);
                let (amin, amax) = a.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                if gb >= 0.0 { amin * gb } else { amax * gb }
            } else {
                a.iter().zip(&b).map(|(ai, bi)| ai * (alpha - bi)).fold(f64::INFINITY, f64::min)
            };
            // tr[(¼|χφ⟩⟨χφ| + ¾ Id/d²)(|χ⟩⟨χ| ⊗ (α Id − |φ⟩⟨φ|))].
            let g_quarter = 0.25 * (alpha - 1.0) + 0.75 * (alpha * df - 1.0) / (df * df);
            (alpha, g_min, g_quarter)
        })
        .collect();
    let worst_overlap = per.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    let bound = 1.0 - 3.0 / df;
    Ok(ProjectiveNetCheck {
        d,
        samples,
        worst_overlap,
        bound,
        pass: worst_overlap >= bound - tol,
        min_g_vertices: per.iter().map(|x| x.1).fold(f64::INFINITY, f64::min),
        min_g_quarter: per.iter().map(|x| x.2).fold(f64::INFINITY, f64::min),
        implied_alpha: (1.0 + 3.0 / (df * df)) / (1.0 + 3.0 / df),
        seed: seeds.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::build_projective_net;

    #[test]
    fn table_rows() {
        let s = dim_v_upper(DimBody::Simplex { n: 10 }, 4.0).unwrap();
        assert!((s.upper_nats.unwrap() - 11f64.ln()).abs() < 1e-15);
        let c = dim_v_upper(DimBody::Cube { n: 7 }, 4.0).unwrap();
        assert!((c.upper_nats.unwrap() - 7.0 * 2f64.ln()).abs() < 1e-15);
        let d = dim_v_upper(DimBody::D { m: 2 }, 4.0).unwrap();
        assert!((d.upper_nats.unwrap() - 4.0 * (1.0f64 + 2.0 / (3.0 / 16.0)).ln()).abs() < 1e-12);
        assert!(dim_v_upper(DimBody::D { m: 2 }, 1.0).is_err());
    }

    #[test]
    fn upper_monotone_in_resolution() {
        for body in [DimBody::D { m: 3 }, DimBody::Sep { d: 2 }, DimBody::Ball { n: 9 }, DimBody::Ball { n: 3 }] {
            let mut prev = f64::INFINITY;
            for a in [1.1, 1.5, 2.0, 3.0, 4.0, 8.0, 100.0] {
                let u = dim_v_upper(body, a).unwrap().upper_nats.unwrap();
                assert!(u <= prev + 1e-12, "{body:?} at {a}");
                prev = u;
            }
        }
    }

    #[test]
    fn quadratic_bound_arithmetic() {
        assert!((dim_lower_ball(2, 4.0).unwrap() - 1.0 / 32.0).abs() < 1e-15);
        assert!((dim_lower_ball(33, 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(dim_lower_ball(9, 2.0).unwrap(), 4.0 * dim_lower_ball(9, 4.0).unwrap());
    }

    #[test]
    fn cap_measure_closed_forms() {
        // S^2: (1 − cos φ)/2.
        for phi in [0.1, 0.7, 1.3] {
            assert!((cap_measure(3, phi) - (1.0 - phi.cos()) / 2.0).abs() < 1e-10);
        }
        assert!((cap_measure(7, std::f64::consts::FRAC_PI_2) - 0.5).abs() < 1e-10);
        // Circle at A = 2: three arcs of angle 2π/3 each are needed.
        assert!((cap_cover_lower(2, 2.0).unwrap() - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn constructions_sandwich_ball() {
        for n in 2..=5 {
            for c in ball_constructions(n, 4.0, 2000, SeedStream::new(n as u64)).unwrap() {
                assert!(c.contains_ball && c.inside_scaled_ball, "{c:?}");
                assert!(c.log_card >= cap_cover_lower(n, 4.0).unwrap() - 1e-12, "{c:?}");
            }
        }
    }

    #[test]
    fn flm_rows() {
        let rows = flm_report(&[DimBody::Ball { n: 8 }, DimBody::D { m: 3 }, DimBody::Sep { d: 2 }, DimBody::Cube { n: 3 }], 4.0, 4.0).unwrap();
        assert!(rows[0].complete && rows[0].ratio.unwrap() > 0.2);
        assert!(rows[2].note.contains("not computed"));
        assert!(!rows[3].complete);
        assert!(to_csv(&rows).unwrap().lines().count() == 5);
    }

    #[test]
    fn overlap_check_small() {
        let net = build_projective_net(2, 0.3, SeedStream::new(1), None).unwrap();
        let s = net.states().unwrap();
        let p = StatePolytope::product(s.clone(), s, "p").unwrap();
        let r = projective_net_check(&p, 200, 1e-12, SeedStream::new(2)).unwrap();
        assert!(r.pass && r.bound < 0.0);
        assert!(r.min_g_vertices >= 0.0);
        // Explicit product vertices take the Schmidt route.
        let q = StatePolytope::new(p.vertices(), "q").unwrap();
        let r2 = projective_net_check(&q, 200, 1e-12, SeedStream::new(2)).unwrap();
        assert!((r2.worst_overlap - r.worst_overlap).abs() < 1e-9);
        // Entangled vertex is rejected.
        let bell = PureState::normalize(crate::hermitian::CVector::from_vec(vec![
            crate::hermitian::C64::new(1.0, 0.0),
            crate::hermitian::C64::new(0.0, 0.0),
            crate::hermitian::C64::new(0.0, 0.0),
            crate::hermitian::C64::new(1.0, 0.0),
        ]))
        .unwrap();
        let e = StatePolytope::new(vec![bell], "bell").unwrap();
        assert!(projective_net_check(&e, 10, 1e-12, SeedStream::new(3)).is_err());
    }
}
