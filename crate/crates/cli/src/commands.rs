use serde::Serialize;
use serde_json::{json, Value};

use qsep_core::approx::{
    self, cap_alpha_estimate, cap_average_check, frozen_alpha, hoeffding_tail_check, matrix_hoeffding_check, ApproxBudget,
    ApproxCertificate, CapSpec,
};
use qsep_core::bodies::{asphericity_hsball, BallBody, InclusionStatus};
use qsep_core::dims::{self, ball_constructions, ball_lower, dim_v_upper, dvoretzky_section, flm_report, DimBody, Gauge};
use qsep_core::hermitian::{haar_pure, random_density, SeedStream};
use qsep_core::nets::{self, build_net, build_projective_net, verify_cover};
use qsep_core::witness::{
    self, builtin_map, complete_range, detects, family_coverage, gurvits_barnum_check, is_separable_2x2, phi_plus,
    robustly_entangled, sample_robustly_entangled_2x2, trace_bound_check, unitalize, vidal_tarrach_check, werner,
    BuiltinMap, PositiveMapRep, SIGN_TOL,
};

use crate::args::*;
use crate::error::CliError;
use crate::report::{Check, Status};

/// Result of one command before it is wrapped into a report.
pub struct Outcome {
    pub status: Status,
    pub checks: Vec<Check>,
    pub result: Value,
    /// CSV rendering of the main table, when the command has one.
    pub table: Option<String>,
}

impl Outcome {
    fn from_checks(checks: Vec<Check>, result: Value) -> Self {
        let status = if checks.iter().all(|c| c.passed) { Status::Pass } else { Status::Failed };
        Self { status, checks, result, table: None }
    }

    fn with_table(mut self, table: String) -> Self {
        self.table = Some(table);
        self
    }
}

pub struct Ctx {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl Ctx {
    fn seeds(&self, command: &str) -> Result<SeedStream, CliError> {
        self.seed.map(SeedStream::new).ok_or_else(|| CliError::Usage(format!("{command} is stochastic and needs --seed")))
    }

    /// Seed for commands whose sampling only re-verifies closed forms.
    fn seeds_or_default(&self) -> SeedStream {
        SeedStream::new(self.seed.unwrap_or(0))
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(x)?)
}

fn need(x: Option<usize>, flag: &str, command: &str) -> Result<usize, CliError> {
    x.ok_or_else(|| CliError::Usage(format!("{command} needs --{flag}")))
}

pub fn run(command: &Command, ctx: &Ctx) -> Result<Outcome, CliError> {
    match command {
        Command::Net(a) => net(a, ctx),
        Command::ApproxD(a) => approx_d(a, ctx),
        Command::ApproxSep(a) => approx_sep(a, ctx),
        Command::RandomNet(a) => random_net(a, ctx),
        Command::CapStats(a) => cap_stats(a, ctx),
        Command::Hoeffding(a) => hoeffding(a, ctx),
        Command::Dims(a) => dims_cmd(a, ctx),
        Command::Flm(a) => flm(a),
        Command::Dvoretzky(a) => dvoretzky(a, ctx),
        Command::Witness(a) => witness_cmd(a, ctx),
        Command::Balls(a) => balls(a, ctx),
    }
}

fn net(a: &NetArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("net")?;
    let net = match (a.n, a.m) {
        (Some(n), None) => build_net(n, a.eps, seeds.child(1), a.max_failures)?,
        (None, Some(m)) => build_projective_net(m, a.eps, seeds.child(1), a.max_failures)?,
        _ => return Err(CliError::Usage("net needs exactly one of --n and --m".into())),
    };
    let coverage = verify_cover(&net, a.coverage_samples.max(1), a.eps, seeds.child(2))?;
    let upper = nets::max_card_bound(net.real_dim, a.eps);
    let separated = net.is_separated();
    let unit = net.all_unit(ctx.tol(1e-12));
    let checks = vec![
        Check::new("separated", "greedy separated family", separated, format!("{} points at pairwise distance ≥ {}", net.len(), a.eps)),
        Check::new("unit", "points on the unit sphere", unit, ""),
        Check::new("volumetric", "volumetric bound (1+2/ε)^n", (net.len() as f64) <= upper, format!("{} ≤ {upper:.4e}", net.len())),
    ];
    let result = json!({
        "realDim": net.real_dim,
        "eps": net.eps,
        "metric": net.metric,
        "size": net.len(),
        "maxFailures": net.max_failures,
        "samplesDrawn": net.samples_drawn,
        "volumetricUpper": upper,
        "coverage": coverage,
    });
    Ok(Outcome::from_checks(checks, result))
}

fn certificate_outcome(cert: &ApproxCertificate, anchor: &str) -> Result<Outcome, CliError> {
    let status = match cert.status {
        InclusionStatus::Certified => Status::Pass,
        InclusionStatus::NotFalsified => Status::NotFalsified,
        InclusionStatus::Falsified => Status::Falsified,
    };
    let mut checks = vec![Check::new(
        "support",
        anchor,
        cert.support_test.violations == 0,
        format!("{} directions, min slack {:.3e}", cert.support_test.directions, cert.support_test.min_slack),
    )];
    if let Some(m) = &cert.membership {
        checks.push(Check::new(
            "membership",
            anchor,
            m.rejected == 0,
            format!("{}/{} scaled test states accepted", m.accepted, m.tested),
        ));
    }
    checks.push(Check::new(
        "inclusion",
        anchor,
        cert.test_outcome.status != InclusionStatus::Falsified,
        format!("{:?} regime, gap {:.3e}", cert.test_outcome.regime, cert.test_outcome.gap),
    ));
    Ok(Outcome { status, checks, result: to_value(cert)?, table: None })
}

fn approx_d(a: &ApproxDArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("approx-d")?;
    let budget = ApproxBudget {
        directions: a.directions,
        restarts: a.restarts,
        test_states: a.test_states,
        tol: ctx.tol(ApproxBudget::default().tol),
        ..ApproxBudget::default()
    };
    let (_, cert) = approx::net_polytope_d(a.m, a.delta, seeds, budget)?;
    certificate_outcome(&cert, "state net polytope, factor 1 − 2mδ")
}

fn approx_sep(a: &ApproxSepArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("approx-sep")?;
    let budget = ApproxBudget {
        directions: a.directions,
        sep_restarts: a.sep_restarts,
        tol: ctx.tol(ApproxBudget::default().tol),
        ..ApproxBudget::default()
    };
    let (_, cert) = approx::product_net_polytope_sep(a.d, a.eps, seeds, budget)?;
    certificate_outcome(&cert, "product net polytope, factor 1/2 of Sep")
}

fn random_net(a: &RandomNetArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("random-net")?;
    let budget = ApproxBudget {
        directions: a.directions,
        restarts: a.restarts,
        test_states: a.test_states,
        tol: ctx.tol(ApproxBudget::default().tol),
        ..ApproxBudget::default()
    };
    let anchor = "random pure-state polytope";
    let mut out = if a.sweep {
        let sweep = approx::random_net_sweep(a.d, a.eps, a.max_n, seeds.child(1), budget)?;
        let found = sweep.smallest_not_falsified;
        let checks = vec![Check::new(
            "sweep",
            anchor,
            found.is_some(),
            match found {
                Some(n) => format!("N = {n} survives testing"),
                None => format!("every N ≤ {} falsified", a.max_n),
            },
        )];
        let table = dims::to_csv(&sweep.entries)?;
        let status = if found.is_some() { Status::NotFalsified } else { Status::Falsified };
        Outcome { status, checks, result: to_value(&sweep)?, table: Some(table) }
    } else {
        let n = need(a.n, "N", "random-net without --sweep")?;
        let (_, cert) = approx::random_net_d(a.d, n, a.eps, seeds.child(1), budget)?;
        certificate_outcome(&cert, anchor)?
    };
    if let Some(threshold) = a.conspiracy {
        if a.d != 2 {
            return Err(CliError::Usage("--conspiracy is defined for d = 2".into()));
        }
        let rep = approx::conspiracy_net(a.n.unwrap_or(16), threshold, seeds.child(2))?;
        out.checks.push(Check::new(
            "conspiracy",
            "leaning net misses the maximally mixed state",
            rep.maximally_mixed_outside,
            format!("margin {:.3e}, min overlap {:.4}", rep.margin, rep.min_overlap),
        ));
        if !rep.maximally_mixed_outside {
            out.status = Status::Failed;
        }
        out.result = json!({ "nets": out.result, "conspiracy": rep });
    }
    Ok(out)
}

fn cap_stats(a: &CapStatsArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("cap-stats")?;
    let center = haar_pure(a.d, &mut seeds.child(1).rng(0));
    let cap = CapSpec::new(center, a.theta)?;
    let est = cap_alpha_estimate(&cap, a.samples, seeds.child(2))?;
    let frozen = frozen_alpha(&cap)?;
    let avg = cap_average_check(&cap, frozen.alpha_hat, a.samples, seeds.child(3))?;
    let checks = vec![
        Check::new(
            "alpha-bound",
            "average cap weight α ≤ θ²d/(d−1)",
            est.within_bound,
            format!("α̂ = {:.6} ± {:.1e}, bound {:.6}", est.alpha_hat, est.std_err, est.bound),
        ),
        Check::new(
            "alpha-quadrature",
            "independent quadrature of the cap weight",
            (est.alpha_hat - est.alpha_quadrature).abs() <= 4.0 * est.std_err,
            format!("quadrature {:.6}", est.alpha_quadrature),
        ),
        Check::new("cap-average", "cap average (1−α)|ψ⟩⟨ψ| + α Id/d", avg.passed, format!("max |z| = {:.3}", avg.max_z)),
    ];
    Ok(Outcome::from_checks(checks, json!({ "cap": cap, "alpha": est, "frozenAlpha": frozen, "average": avg })))
}

fn hoeffding(a: &HoeffdingArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("hoeffding")?;
    match a.kind {
        TailKind::Scalar => {
            let check = hoeffding_tail_check(a.n, a.p, a.trials, seeds)?;
            let exact = approx::agrees_with_exact(&check);
            let checks = vec![
                Check::new(
                    "tail",
                    "scalar Hoeffding exp(−p²N/2)",
                    check.passed,
                    format!("empirical {:.4e} vs bound {:.4e}", check.empirical_tail, check.bound),
                ),
                Check::new("exact", "binomial CDF", exact, format!("exact tail {:?}", check.exact_tail)),
            ];
            Ok(Outcome::from_checks(checks, to_value(&check)?))
        }
        TailKind::Matrix => {
            if a.m.is_empty() {
                return Err(CliError::Usage("--M needs at least one value".into()));
            }
            let center = haar_pure(a.d, &mut seeds.child(1).rng(0));
            let cap = CapSpec::new(center, a.theta)?;
            let alpha = frozen_alpha(&cap)?;
            let runs = a
                .m
                .iter()
                .enumerate()
                .map(|(i, &m)| matrix_hoeffding_check(&cap, alpha.alpha_hat, m, a.t, a.trials, seeds.child(2 + i as u64)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut checks: Vec<Check> = runs
                .iter()
                .zip(&a.m)
                .map(|(r, m)| {
                    Check::new(
                        &format!("tail-M{m}"),
                        "matrix Hoeffding 2d·exp(−Mt²/8)",
                        r.passed,
                        format!("empirical {:.4e} vs bound {:.4e}", r.empirical_tail, r.bound),
                    )
                })
                .collect();
            if runs.len() > 1 {
                let mut order: Vec<usize> = (0..runs.len()).collect();
                order.sort_by_key(|&i| a.m[i]);
                let monotone = order.windows(2).all(|w| {
                    let (x, y) = (&runs[w[0]], &runs[w[1]]);
                    y.empirical_tail <= x.empirical_tail + 3.0 * (x.std_err + y.std_err).max(1.0 / a.trials as f64)
                });
                checks.push(Check::new("monotone", "tail decreases with M", monotone, ""));
            }
            Ok(Outcome::from_checks(checks, json!({ "cap": cap, "alpha": alpha, "runs": runs })))
        }
    }
}

fn dim_body(kind: BodyKind, m: Option<usize>, d: Option<usize>, n: Option<usize>) -> Result<DimBody, CliError> {
    Ok(match kind {
        BodyKind::D => DimBody::D { m: need(m, "m", "body D")? },
        BodyKind::Sep => DimBody::Sep { d: need(d, "d", "body Sep")? },
        BodyKind::Ball => DimBody::Ball { n: need(n, "n", "body ball")? },
        BodyKind::Cube => DimBody::Cube { n: need(n, "n", "body cube")? },
        BodyKind::Simplex => DimBody::Simplex { n: need(n, "n", "body simplex")? },
    })
}

fn dims_cmd(a: &DimsArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let body = dim_body(a.body, a.m, a.d, a.n)?;
    let upper = dim_v_upper(body, a.a)?;
    let mut checks = Vec::new();
    let mut result = json!({ "body": body, "upper": upper });
    if let DimBody::Ball { n } = body {
        let (lower, how) = ball_lower(n, a.a)?;
        let built = ball_constructions(n, a.a, a.probes, ctx.seeds_or_default())?;
        for c in &built {
            let valid = c.contains_ball && c.inside_scaled_ball;
            checks.push(Check::new(
                &format!("card-{}", c.name),
                "cardinality of B ⊂ P ⊂ A·B against the lower bound",
                !valid || c.log_card >= lower,
                format!("log card {:.4} vs lower {lower:.4} ({how}){}", c.log_card, if valid { "" } else { "; sandwich not verified" }),
            ));
        }
        if let Some(u) = upper.upper_nats {
            checks.push(Check::new("bracket", "lower ≤ upper", lower <= u + 1e-12, format!("{lower:.4} ≤ {u:.4}")));
        }
        result["lower"] = json!({ "nats": lower, "method": how });
        result["constructions"] = to_value(&built)?;
        let out = Outcome::from_checks(checks, result);
        return Ok(out.with_table(dims::to_csv(&built)?));
    }
    Ok(Outcome::from_checks(checks, result))
}

fn flm(a: &FlmArgs) -> Result<Outcome, CliError> {
    if a.n_min < 2 || a.n_min > a.n_max {
        return Err(CliError::Usage("need 2 ≤ --n-min ≤ --n-max".into()));
    }
    let mut bodies: Vec<DimBody> = (a.n_min..=a.n_max).map(|n| DimBody::Ball { n }).collect();
    bodies.extend(a.m.iter().map(|&m| DimBody::D { m }));
    bodies.extend(a.d.iter().map(|&d| DimBody::Sep { d }));
    let rows = flm_report(&bodies, a.a, a.b)?;
    let balls: Vec<_> = rows.iter().zip(&bodies).filter(|(_, b)| matches!(b, DimBody::Ball { .. })).map(|(r, _)| r).collect();
    let worst = balls.iter().filter_map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let all = balls.iter().all(|r| r.ratio.is_some_and(|x| x >= a.min_ratio));
    let checks = vec![Check::new(
        "ratio",
        "dimension product over n² for Euclidean balls",
        all,
        format!("smallest ball ratio {worst:.4} vs {}", a.min_ratio),
    )];
    let table = dims::to_csv(&rows)?;
    Ok(Outcome::from_checks(checks, to_value(&rows)?).with_table(table))
}

fn dvoretzky(a: &DvoretzkyArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = ctx.seeds("dvoretzky")?;
    let gauge = match a.gauge {
        GaugeKind::Ball => Gauge::Ball,
        GaugeKind::Cube => Gauge::Cube,
        GaugeKind::CrossPolytope => Gauge::CrossPolytope,
        GaugeKind::States => Gauge::States { m: need(a.m, "m", "the states gauge")? },
        GaugeKind::StatesPolar => Gauge::StatesPolar { m: need(a.m, "m", "the polar states gauge")? },
    };
    let n = match (gauge.fixed_dim(), a.n) {
        (Some(f), Some(n)) if f != n => return Err(CliError::Usage(format!("this gauge lives in dimension {f}, not {n}"))),
        (Some(f), _) => f,
        (None, n) => need(n, "n", "dvoretzky")?,
    };
    let exp = dvoretzky_section(gauge, n, a.k, a.trials, a.samples, seeds)?;
    let tol = ctx.tol(1e-9);
    let min_ratio = exp.per_trial.iter().map(|t| t.ratio).fold(f64::INFINITY, f64::min);
    let mut checks = vec![
        Check::new("ratio-at-least-one", "max/min gauge on a section", min_ratio >= 1.0 - tol, format!("smallest ratio {min_ratio:.6}")),
        Check::new(
            "mm-star",
            "M·M* ≥ 1",
            exp.mean_gauge_m * exp.mean_polar_gauge_m_star >= 1.0 - 3.0 * exp.m_m_star_std_err - tol,
            format!("{:.4} ± {:.1e}", exp.mean_gauge_m * exp.mean_polar_gauge_m_star, exp.m_m_star_std_err),
        ),
    ];
    if gauge == Gauge::Ball {
        checks.push(Check::new("ball-round", "every section of the ball is round", (exp.median_ratio - 1.0).abs() <= tol, format!("median {:.15}", exp.median_ratio)));
    }
    let table = dims::to_csv(&exp.per_trial)?;
    Ok(Outcome::from_checks(checks, to_value(&exp)?).with_table(table))
}

fn parse_maps(names: &[String], d: usize) -> Result<Vec<PositiveMapRep>, CliError> {
    names
        .iter()
        .map(|s| {
            let which: BuiltinMap = s.parse()?;
            Ok(builtin_map(which, d)?)
        })
        .collect()
}

fn witness_cmd(a: &WitnessArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let seeds = if a.check.stochastic() { ctx.seeds("witness")? } else { ctx.seeds_or_default() };
    let tol = ctx.tol(SIGN_TOL);
    let d = a.d;
    match a.check {
        WitnessCheck::Werner => {
            if d != 2 {
                return Err(CliError::Unavailable("the Werner threshold is computed on two qubits".into()));
            }
            let t = witness::bisect(0.0, 1.0, 1e-13, |w| Ok(!is_separable_2x2(&werner(w), 0.0)?))?;
            let checks = vec![Check::new("threshold", "Werner entanglement threshold 1/3", (t - 1.0 / 3.0).abs() <= 1e-9, format!("{t:.15}"))];
            Ok(Outcome::from_checks(checks, json!({ "threshold": t })))
        }
        WitnessCheck::Robust => {
            let v = robustly_entangled(&phi_plus(d).projector(), tol)?;
            let checks = vec![Check::new("phi-plus", "maximally entangled state is robustly entangled", v.entangled, format!("verified {}", v.verified))];
            Ok(Outcome::from_checks(checks, to_value(&v)?))
        }
        WitnessCheck::Coverage => {
            if d != 2 {
                return Err(CliError::Unavailable("coverage needs certified robustly entangled samples, available on two qubits".into()));
            }
            let family = parse_maps(&a.maps, 2)?;
            let states = sample_robustly_entangled_2x2(a.samples, seeds)?;
            let rep = family_coverage(&family, &states, true, tol)?;
            let checks = match a.expect_coverage {
                Some(e) => vec![Check::new(
                    "coverage",
                    "universal family on robustly entangled states",
                    (rep.coverage - e).abs() <= 1e-12,
                    format!("{} of {} detected", rep.detected, rep.states),
                )],
                None => Vec::new(),
            };
            Ok(Outcome::from_checks(checks, to_value(&rep)?))
        }
        WitnessCheck::TraceBound => {
            let mut checks = Vec::new();
            let mut reports = Vec::new();
            for (i, map) in parse_maps(&a.maps, d)?.iter().enumerate() {
                let map = unitalize(&complete_range(map)?)?;
                let r = trace_bound_check(&map, a.samples, seeds.child(i as u64))?;
                checks.push(Check::new(
                    &format!("trace-{}", map.name),
                    "0 ≤ tr[(Φ⊗I)ρ] ≤ d for unital positive Φ",
                    r.passed,
                    format!("range [{:.6}, {:.6}], Schmidt deviation {:.1e}", r.min_trace, r.max_trace, r.max_schmidt_deviation),
                ));
                reports.push(json!({ "map": map.name, "report": r }));
            }
            Ok(Outcome::from_checks(checks, Value::Array(reports)))
        }
        WitnessCheck::BulletIdentity => {
            let mut worst: f64 = 0.0;
            let mut ok = true;
            for i in 0..a.samples {
                let mut rng = seeds.rng(i as u64);
                let scale = 0.1 + (i % 37) as f64 / 3.0;
                let m = random_density(d, 1 + i % d, &mut rng).into_matrix().scale(scale);
                let (pass, dev) = witness::bullet_identity_check(&m)?;
                ok &= pass;
                worst = worst.max(dev);
            }
            let checks = vec![Check::new("identity", "(t/(1+t))∙(M/t) = (M + ρ_*)/(1+t)", ok, format!("max deviation {worst:.2e}"))];
            Ok(Outcome::from_checks(checks, json!({ "samples": a.samples, "maxDeviation": worst })))
        }
        WitnessCheck::Preserve => {
            let family = parse_maps(&a.maps, d)?;
            let mut checks = Vec::new();
            let mut rows = Vec::new();
            for (k, map) in family.iter().enumerate() {
                let completed = complete_range(map)?;
                let unital = unitalize(&completed)?;
                let mut changed = 0usize;
                let mut detected = 0usize;
                let s = seeds.child(k as u64);
                for i in 0..a.samples {
                    let mut rng = s.rng(i as u64);
                    let rho = random_density(d * d, 1 + i % (d * d), &mut rng).into_matrix();
                    let (v0, _) = detects(map, &rho, tol)?;
                    let (v1, _) = detects(&completed, &rho, tol)?;
                    let (v2, _) = detects(&unital, &rho, tol)?;
                    detected += v0 as usize;
                    changed += (v0 != v1 || v0 != v2) as usize;
                }
                checks.push(Check::new(
                    &format!("preserve-{}", map.name),
                    "range completion and unitalization keep detection verdicts",
                    changed == 0,
                    format!("{changed} changed verdicts, {detected} detected of {}", a.samples),
                ));
                rows.push(json!({ "map": map.name, "detected": detected, "changed": changed }));
            }
            Ok(Outcome::from_checks(checks, Value::Array(rows)))
        }
        WitnessCheck::VidalTarrach => {
            let r = vidal_tarrach_check(d, a.samples, seeds)?;
            let boundary = qsep_core::hermitian::partial_transpose(&werner(1.0 / 3.0), 2)?.lambda_min();
            let checks = vec![
                Check::new("separable", "(2/(2+d²))∙ρ is separable", r.all_separable, format!("{}/{} separable, min PT eigenvalue {:.3e}", r.separable, r.samples, r.min_ppt_eigenvalue)),
                Check::new("werner-boundary", "Werner state at w = 1/3 is on the boundary", boundary.abs() <= 1e-10, format!("min PT eigenvalue {boundary:.3e}")),
            ];
            Ok(Outcome::from_checks(checks, json!({ "report": r, "wernerBoundaryMinEigenvalue": boundary })))
        }
        WitnessCheck::GurvitsBarnum => {
            let r = gurvits_barnum_check(d, a.samples, seeds)?;
            let checks = vec![Check::new(
                "separable",
                "inscribed separable ball of radius 1/√(d²(d²−1))",
                r.all_separable,
                format!("{}/{} separable, min PT eigenvalue {:.3e}", r.separable, r.samples, r.min_ppt_eigenvalue),
            )];
            Ok(Outcome::from_checks(checks, to_value(&r)?))
        }
    }
}

fn balls(a: &BallsArgs, ctx: &Ctx) -> Result<Outcome, CliError> {
    let (body, expected) = match a.body {
        BallBodyKind::D => {
            let m = need(a.m, "m", "body D")?;
            (BallBody::D { m }, m as f64 - 1.0)
        }
        BallBodyKind::Sep => {
            let d = need(a.d, "d", "body Sep")?;
            (BallBody::Sep { d }, (d * d) as f64 - 1.0)
        }
    };
    let r = asphericity_hsball(body, a.samples, ctx.seeds_or_default())?;
    let tol = ctx.tol(1e-9);
    let checks = vec![
        Check::new("ratio", "asphericity of the state body", (r.ratio - expected).abs() <= tol * expected.max(1.0), format!("{:.12}", r.ratio)),
        Check::new("inradius", "inscribed ball re-verified", r.inradius_verified, r.inradius_numeric.map_or("not computed".into(), |x| format!("{x:.12}"))),
        Check::new(
            "outradius",
            "no sampled extreme point beyond the outradius",
            r.outradius_numeric <= r.outradius + tol,
            format!("{:.12} ≤ {:.12}", r.outradius_numeric, r.outradius),
        ),
    ];
    Ok(Outcome::from_checks(checks, to_value(&r)?))
}
