//! Acceptance suite. Runs every criterion, prints one line each and a
//! roll-up, and exits nonzero if any criterion fails or overruns its budget.

use std::f64::consts::SQRT_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use qsep_core::approx::{
    agrees_with_exact, binomial_cdf, cap_alpha_estimate, cap_average_check, conspiracy_net, frozen_alpha, hoeffding_tail_check,
    matrix_hoeffding_check, net_polytope_d, product_net_polytope_sep, random_net_sweep, ApproxBudget, CapSpec,
};
use qsep_core::bodies::{asphericity_hsball, polar_of_states, BallBody, BodyOracle, InclusionStatus};
use qsep_core::dims::{ball_constructions, dim_lower_ball, dvoretzky_section, flm_report, DimBody, Gauge};
use qsep_core::hermitian::{
    gue_traceless, haar_pure, partial_transpose, random_density, CMatrix, HermitianMatrix, SeedStream, C64,
};
use qsep_core::witness::{
    self, builtin_map, complete_range, detects, family_coverage, gurvits_barnum_check, is_separable_2x2, phi_plus, robustly_entangled,
    sample_robustly_entangled_2x2, trace_bound_check, unitalize, vidal_tarrach_check, werner, BuiltinMap, PositiveMapRep,
    Provenance, SIGN_TOL,
};

type Outcome = Result<String, String>;

macro_rules! require {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Eigenvalues of a Hermitian matrix through its real symmetric embedding
/// `[[Re, −Im], [Im, Re]]`, whose spectrum repeats each eigenvalue twice.
fn embedded_eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    let n = h.dim();
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h.get(i % n, j % n);
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

fn bloch_geometry() -> Outcome {
    let r = e(asphericity_hsball(BallBody::D { m: 2 }, 2000, SeedStream::new(101)))?;
    let s = 1.0 / SQRT_2;
    require!((r.inradius - s).abs() <= 1e-9 && (r.outradius - s).abs() <= 1e-9, "radii {} {}", r.inradius, r.outradius);
    let inr = r.inradius_numeric.ok_or("no numeric inradius")?;
    require!((inr - s).abs() <= 1e-9 && (r.outradius_numeric - s).abs() <= 1e-9, "numeric radii {inr} {}", r.outradius_numeric);
    require!((r.ratio - 1.0).abs() <= 1e-9, "a = {}", r.ratio);
    // Every pure qubit state sits at HS distance 1/√2 from Id/2.
    let mut rng = SeedStream::new(102).rng(0);
    for _ in 0..100 {
        let p = haar_pure(2, &mut rng).projector();
        let d = (&p - &HermitianMatrix::identity(2).scale(0.5)).hs_norm();
        require!((d - s).abs() <= 1e-12, "pure state at distance {d}");
    }
    Ok(format!("r = R = {:.12}, a = {:.12}", r.inradius, r.ratio))
}

fn asphericity_of_states() -> Outcome {
    let mut parts = Vec::new();
    for m in 2..=5usize {
        let r = e(asphericity_hsball(BallBody::D { m }, 4000, SeedStream::new(200 + m as u64)))?;
        let mf = m as f64;
        require!((r.ratio - (mf - 1.0)).abs() <= 1e-6, "m = {m}: a = {}", r.ratio);
        require!(r.inradius_verified, "m = {m}: inradius not re-verified ({:?})", r.inradius_numeric);
        require!((r.outradius_numeric - r.outradius).abs() <= 1e-6, "m = {m}: outradius {} vs {}", r.outradius_numeric, r.outradius);
        // Oracle: rank-one projector offset norm is √((m−1)/m).
        require!((r.outradius - ((mf - 1.0) / mf).sqrt()).abs() <= 1e-12, "m = {m}: analytic outradius");
        parts.push(format!("a({m}) = {:.9}", r.ratio));
    }
    Ok(parts.join(", "))
}

fn polarity() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [2usize, 3] {
        let polar = e(polar_of_states(m))?;
        let seeds = SeedStream::new(300 + m as u64);
        for i in 0..10_000u64 {
            let a = gue_traceless(m, &mut seeds.rng(i));
            let got = e(polar.support(&a))?;
            // h_{(−m)∙D}(A) = m·λ_max(−A).
            let lmin = embedded_eigenvalues(a.matrix())[0];
            let want = -(m as f64) * lmin;
            worst = worst.max((got - want).abs());
        }
    }
    require!(worst <= 1e-8, "largest disagreement {worst:e}");
    Ok(format!("2×10⁴ directions, max |h_D° − h_(−m)∙D| = {worst:.2e}"))
}

fn state_net() -> Outcome {
    let budget = ApproxBudget { directions: 1000, restarts: 200, test_states: 1000, ..ApproxBudget::default() };
    let (p, cert) = e(net_polytope_d(2, 0.05, SeedStream::new(400), budget))?;
    require!((cert.guaranteed_factor - 0.8).abs() <= 1e-12, "factor {}", cert.guaranteed_factor);
    require!(cert.status != InclusionStatus::Falsified, "falsified: {:?}", cert.test_outcome.witness_direction);
    require!(cert.test_outcome.restarts >= 200, "only {} restarts", cert.test_outcome.restarts);
    let mem = cert.membership.as_ref().ok_or("no membership sweep")?;
    require!(mem.tested >= 1000 && mem.rejected == 0, "{} of {} rejected", mem.rejected, mem.tested);
    require!(cert.support_test.violations == 0, "{} support violations", cert.support_test.violations);
    Ok(format!(
        "{} vertices, {:?}, {} states accepted, ascent gap {:.3e}",
        p.len(),
        cert.status,
        mem.accepted,
        cert.test_outcome.gap
    ))
}

fn product_net() -> Outcome {
    let budget = ApproxBudget { directions: 1000, ..ApproxBudget::default() };
    let (p, cert) = e(product_net_polytope_sep(2, 1.0 / 32.0, SeedStream::new(500), budget))?;
    require!((cert.guaranteed_factor - 0.5).abs() <= 1e-12, "factor {}", cert.guaranteed_factor);
    require!(cert.support_test.directions >= 1000, "{} directions", cert.support_test.directions);
    require!(cert.support_test.violations == 0, "{} violations, min slack {:e}", cert.support_test.violations, cert.support_test.min_slack);
    Ok(format!("{} vertices, min slack {:.4e}", p.len(), cert.support_test.min_slack))
}

fn random_nets() -> Outcome {
    let budget = ApproxBudget { directions: 1000, restarts: 64, test_states: 1000, ..ApproxBudget::default() };
    let sweep = e(random_net_sweep(2, 0.75, 1 << 14, SeedStream::new(600), budget))?;
    let n = sweep.smallest_not_falsified.ok_or("every N ≤ 2¹⁴ falsified")?;
    require!(n <= 1 << 14, "N = {n}");
    let c = e(conspiracy_net(64, 0.55, SeedStream::new(601)))?;
    require!(c.min_overlap > 0.55, "vertex overlap {}", c.min_overlap);
    require!(c.maximally_mixed_outside && c.margin > 0.0, "ρ_* not separated (margin {})", c.margin);
    require!(c.direction.is_some(), "no separating direction");
    let tried: Vec<String> = sweep.entries.iter().map(|x| format!("{}:{:?}", x.n, x.status)).collect();
    Ok(format!("sweep [{}]; leaning net margin {:.3e}", tried.join(" "), c.margin))
}

fn cap_statistics() -> Outcome {
    let seeds = SeedStream::new(700);
    let theta = (3.0f64 / 32.0).sqrt();
    let cap = e(CapSpec::new(haar_pure(2, &mut seeds.rng(0)), theta))?;
    let est = e(cap_alpha_estimate(&cap, 100_000, seeds.child(1)))?;
    require!((est.bound - 0.1875).abs() <= 1e-15, "bound {}", est.bound);
    require!(est.alpha_hat <= 0.1875 + 3.0 * est.std_err, "α̂ = {} ± {}", est.alpha_hat, est.std_err);
    require!((est.alpha_hat - est.alpha_quadrature).abs() <= 4.0 * est.std_err, "α̂ {} vs quadrature {}", est.alpha_hat, est.alpha_quadrature);
    let alpha = e(frozen_alpha(&cap))?;
    let avg = e(cap_average_check(&cap, alpha.alpha_hat, 100_000, seeds.child(2)))?;
    require!(avg.passed, "cap average off by {} σ", avg.max_z);
    Ok(format!("α̂ = {:.5} ± {:.1e} (quadrature {:.5}), cap average max |z| = {:.2}", est.alpha_hat, est.std_err, est.alpha_quadrature, avg.max_z))
}

fn tails() -> Outcome {
    let s = hoeffding_tail_check(2000, 0.05, 10_000, SeedStream::new(800)).map_err(|e| e.to_string())?;
    require!((s.bound - (-0.05f64 * 0.05 * 2000.0 / 2.0).exp()).abs() <= 1e-15, "scalar bound {}", s.bound);
    require!(s.passed && s.empirical_tail <= s.bound, "scalar tail {} > {}", s.empirical_tail, s.bound);
    require!(agrees_with_exact(&s), "scalar tail disagrees with the exact CDF");

    let seeds = SeedStream::new(801);
    let cap = e(CapSpec::new(haar_pure(2, &mut seeds.rng(0)), 0.3))?;
    let alpha = e(frozen_alpha(&cap))?;
    let m = e(matrix_hoeffding_check(&cap, alpha.alpha_hat, 500, 0.2, 10_000, seeds.child(1)))?;
    require!((m.bound - (4.0 * (-500.0f64 * 0.04 / 8.0).exp()).min(1.0)).abs() <= 1e-15, "matrix bound {}", m.bound);
    require!(m.passed && m.empirical_tail <= m.bound, "matrix tail {} > {}", m.empirical_tail, m.bound);

    // Exact CDF of B(10, 1/2) from integer binomial coefficients.
    let mut c = 1u64;
    let mut acc = 0u64;
    for k in 0..=10u64 {
        acc += c;
        let want = acc as f64 / 1024.0;
        let got = binomial_cdf(10, 0.5, k);
        require!((got - want).abs() <= 1e-12, "P(B ≤ {k}) = {got}, expected {want}");
        c = c * (10 - k) / (k + 1);
    }
    Ok(format!("scalar {:.4} ≤ {:.4}, matrix {:.4} ≤ {:.4}, B(10,½) CDF exact", s.empirical_tail, s.bound, m.empirical_tail, m.bound))
}

fn ball_cardinality() -> Outcome {
    let mut parts = Vec::new();
    for n in 2..=6usize {
        let lower = (n as f64 - 1.0) / 32.0;
        require!((e(dim_lower_ball(n, 4.0))? - lower).abs() <= 1e-15, "quadratic bound at n = {n}");
        let built = e(ball_constructions(n, 4.0, 4000, SeedStream::new(900 + n as u64)))?;
        let valid: Vec<_> = built.iter().filter(|c| c.contains_ball && c.inside_scaled_ball).collect();
        require!(!valid.is_empty(), "no construction sandwiches the ball at n = {n}");
        for c in &valid {
            require!(c.log_card >= lower, "{} at n = {n}: log card {} < {lower}", c.name, c.log_card);
            require!((c.log_card - (c.vertices as f64).ln()).abs() <= 1e-12, "{}: log card mismatch", c.name);
        }
        let min = valid.iter().map(|c| c.vertices).min().unwrap_or(0);
        parts.push(format!("n={n}: {} valid, smallest {min}", valid.len()));
    }
    Ok(parts.join("; "))
}

fn flm_property() -> Outcome {
    let bodies: Vec<DimBody> = (4..=12).map(|n| DimBody::Ball { n }).collect();
    let rows = e(flm_report(&bodies, 4.0, 4.0))?;
    let mut worst = f64::INFINITY;
    let mut worst_quadratic = f64::INFINITY;
    for r in &rows {
        let (f, v) = (r.dim_f_lower.ok_or("missing dim_F")?, r.dim_v_lower.ok_or("missing dim_V")?);
        // Recompute [16·dim_F·16·dim_V·a²]/n² with a = 1 from the row's own bounds.
        let ratio = 16.0 * f * 16.0 * v / (r.n * r.n) as f64;
        require!((ratio - r.ratio.unwrap_or(f64::NAN)).abs() <= 1e-12, "n = {}: ratio mismatch", r.n);
        require!(ratio >= 0.2, "n = {}: ratio {ratio}", r.n);
        worst = worst.min(ratio);
        let q = (r.n as f64 - 1.0) / 32.0;
        worst_quadratic = worst_quadratic.min(256.0 * q * q / (r.n * r.n) as f64);
    }
    Ok(format!("min ratio {worst:.4} (quadratic bound alone {worst_quadratic:.4})"))
}

#[derive(serde::Deserialize)]
#[serde(rename_all = "camelCase")]
struct Golden {
    seed: u64,
    trials: usize,
    samples_per_trial: usize,
    median: f64,
    half_width: f64,
}

fn dvoretzky() -> Outcome {
    let ball = e(dvoretzky_section(Gauge::Ball, 32, 4, 20, 200, SeedStream::new(1100)))?;
    let off = ball.per_trial.iter().map(|t| (t.ratio - 1.0).abs()).fold(0.0, f64::max);
    require!(off <= 1e-12, "ball section ratio off by {off:e}");

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/dvoretzky_cross_n64_k4.json");
    let golden: Golden = e(serde_json::from_str(&e(std::fs::read_to_string(&path))?))?;
    let run = |k| dvoretzky_section(Gauge::CrossPolytope, 64, k, golden.trials, golden.samples_per_trial, SeedStream::new(golden.seed));
    let at4 = e(run(4))?;
    require!(
        (at4.median_ratio - golden.median).abs() <= golden.half_width,
        "median {} outside {} ± {}",
        at4.median_ratio,
        golden.median,
        golden.half_width
    );
    let mut medians = Vec::new();
    for k in [2, 4, 8, 16] {
        medians.push(e(run(k))?.median_ratio);
    }
    require!(medians.windows(2).all(|w| w[0] <= w[1]), "medians not monotone in k: {medians:?}");
    let shown: Vec<String> = medians.iter().map(|m| format!("{m:.4}")).collect();
    Ok(format!("ball max |ratio−1| = {off:.1e}; median {:.5} in {:.5} ± {:.5}; k=2,4,8,16: {}", at4.median_ratio, golden.median, golden.half_width, shown.join(" ")))
}

fn witness_suite() -> Outcome {
    let t = e(witness::bisect(0.0, 1.0, 1e-13, |w| Ok(!is_separable_2x2(&werner(w), 0.0)?)))?;
    require!((t - 1.0 / 3.0).abs() <= 1e-9, "Werner threshold {t}");
    let v = e(robustly_entangled(&phi_plus(2).projector(), SIGN_TOL))?;
    require!(v.entangled && v.verified, "Φ+ not robustly entangled");
    let states = e(sample_robustly_entangled_2x2(1000, SeedStream::new(1200)))?;
    // Independent oracle: each sample's ½-mixture has a negative partial transpose.
    for s in &states {
        let half = &s.scale(0.5) + &HermitianMatrix::identity(4).scale(0.125);
        require!(embedded_eigenvalues(&e(partial_transpose(&half, 2))?)[0] < 0.0, "sample is not robustly entangled");
    }
    let transpose = e(builtin_map(BuiltinMap::Transpose, 2))?;
    let identity = e(builtin_map(BuiltinMap::Identity, 2))?;
    let ct = e(family_coverage(&[transpose], &states, true, SIGN_TOL))?;
    let ci = e(family_coverage(&[identity], &states, true, SIGN_TOL))?;
    require!(ct.coverage == 1.0, "transpose coverage {}", ct.coverage);
    require!(ci.coverage == 0.0, "identity coverage {}", ci.coverage);
    Ok(format!("threshold {t:.12}, coverage transpose {} identity {}", ct.coverage, ci.coverage))
}

fn ball_checks() -> Outcome {
    let gb = e(gurvits_barnum_check(2, 10_000, SeedStream::new(1300)))?;
    require!((gb.radius_or_factor - 1.0 / 12f64.sqrt()).abs() <= 1e-15, "radius {}", gb.radius_or_factor);
    require!(gb.all_separable, "{} of {} boundary states separable", gb.separable, gb.samples);
    let vt = e(vidal_tarrach_check(2, 10_000, SeedStream::new(1301)))?;
    require!((vt.radius_or_factor - 1.0 / 3.0).abs() <= 1e-15, "factor {}", vt.radius_or_factor);
    require!(vt.all_separable, "{} of {} mixed states separable", vt.separable, vt.samples);
    let boundary = embedded_eigenvalues(&e(partial_transpose(&werner(1.0 / 3.0), 2))?)[0];
    require!(boundary.abs() <= 1e-10, "Werner boundary PT eigenvalue {boundary:e}");
    Ok(format!("GB min PT eig {:.3e}, VT min PT eig {:.3e}, Werner boundary {boundary:.1e}", gb.min_ppt_eigenvalue, vt.min_ppt_eigenvalue))
}

fn trace_bounds() -> Outcome {
    let mut parts = Vec::new();
    for d in [2usize, 3] {
        let mut maps = vec![BuiltinMap::Identity, BuiltinMap::Transpose, BuiltinMap::Reduction];
        if d == 3 {
            maps.push(BuiltinMap::ChoiD3);
        }
        maps.extend((0..3).map(|seed| BuiltinMap::RandomUnitalCp { seed }));
        for (i, which) in maps.into_iter().enumerate() {
            let map = e(unitalize(&e(complete_range(&e(builtin_map(which, d))?))?))?;
            // Even streams are pure, so 2000 samples give 10³ pure states.
            let r = e(trace_bound_check(&map, 2000, SeedStream::new(1400 + 10 * d as u64 + i as u64)))?;
            require!(r.passed, "{} at d = {d}: traces in [{}, {}]", map.name, r.min_trace, r.max_trace);
            require!(r.max_trace <= d as f64 + 1e-9 && r.min_trace >= -1e-9, "{}: bound", map.name);
            require!(r.max_schmidt_deviation <= 1e-10, "{}: Schmidt deviation {:e}", map.name, r.max_schmidt_deviation);
            parts.push(format!("{}@{d}≤{:.3}", map.name, r.max_trace));
        }
    }
    Ok(parts.join(" "))
}

/// `X ↦ S·Xᵀ·S` with `S = diag(s)`; positive, not unital unless `s` is all ones.
fn skewed_transpose(s: &[f64]) -> PositiveMapRep {
    let d = s.len();
    let sm = CMatrix::from_fn(d, d, |i, j| if i == j { C64::new(s[i], 0.0) } else { C64::new(0.0, 0.0) });
    PositiveMapRep::from_fn("skewed-transpose", d, d, true, Provenance::Constructed, |x| &sm * x.transpose() * &sm).unwrap()
}

fn algebra() -> Outcome {
    let seeds = SeedStream::new(1500);
    let mut worst: f64 = 0.0;
    for i in 0..1000u64 {
        let mut rng = seeds.rng(i);
        let m = 2 + (i % 4) as usize;
        let scale = 0.05 + (i % 13) as f64;
        let x = random_density(m, 1 + (i as usize) % m, &mut rng).into_matrix().scale(scale);
        let (ok, dev) = e(witness::bullet_identity_check(&x))?;
        require!(ok, "bullet identity deviates by {dev:e}");
        worst = worst.max(dev);
    }
    let mut changed = 0;
    let mut detected = 0;
    let mut total = 0;
    for (k, map) in [skewed_transpose(&[1.0, 0.0]), skewed_transpose(&[1.0, 2.0]), skewed_transpose(&[0.5, 1.0, 0.0])].iter().enumerate() {
        let d = map.d_in;
        let completed = e(complete_range(map))?;
        let unital = e(unitalize(&completed))?;
        let s = seeds.child(k as u64 + 1);
        for i in 0..1000u64 {
            let mut rng = s.rng(i);
            let rho = if i % 2 == 0 { haar_pure(d * d, &mut rng).projector() } else { random_density(d * d, 1 + (i as usize) % (d * d), &mut rng).into_matrix() };
            let (v0, _) = e(detects(map, &rho, SIGN_TOL))?;
            let (v1, _) = e(detects(&completed, &rho, SIGN_TOL))?;
            let (v2, _) = e(detects(&unital, &rho, SIGN_TOL))?;
            changed += usize::from(v0 != v1 || v0 != v2);
            detected += usize::from(v0);
            total += 1;
        }
    }
    require!(changed == 0, "{changed} verdicts changed");
    require!(detected > 0, "no state detected, the comparison is vacuous");
    Ok(format!("bullet identity max deviation {worst:.1e}; {total} verdicts preserved ({detected} detected)"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const fn c(id: u32, name: &'static str, secs: u64, run: fn() -> Outcome) -> Criterion {
    Criterion { id, name, budget: Duration::from_secs(secs), run }
}

const CRITERIA: [Criterion; 15] = [
    c(1, "bloch geometry", 1, bloch_geometry),
    c(2, "asphericity of D(C^m)", 10, asphericity_of_states),
    c(3, "polarity D° = (−m)∙D", 30, polarity),
    c(4, "state net factor 0.8", 120, state_net),
    c(5, "product net factor 1/2", 300, product_net),
    c(6, "random nets and leaning net", 600, random_nets),
    c(7, "cap statistics", 60, cap_statistics),
    c(8, "tail bounds", 600, tails),
    c(9, "ball polytope cardinality", 60, ball_cardinality),
    c(10, "dimension product ratio", 1, flm_property),
    c(11, "random sections", 600, dvoretzky),
    c(12, "witness suite", 120, witness_suite),
    c(13, "separable ball checks", 300, ball_checks),
    c(14, "trace bounds of unital maps", 120, trace_bounds),
    c(15, "bullet algebra and verdict preservation", 120, algebra),
];

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for crit in CRITERIA.iter().filter(|c| filter.is_empty() || filter.iter().any(|f| c.id.to_string() == *f || c.name.contains(f.as_str()))) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(crit.run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if took <= crit.budget => (true, d),
            Ok(d) => (false, format!("over budget ({:.0?} > {:?}): {d}", took, crit.budget)),
            Err(d) => (false, d),
        };
        ran += 1;
        failed += usize::from(!pass);
        println!("criterion {:>2} {:<42} {} {:>8.2}s  {detail}", crit.id, crit.name, if pass { "PASS" } else { "FAIL" }, took.as_secs_f64());
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
