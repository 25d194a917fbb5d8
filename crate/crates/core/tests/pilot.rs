//! Regenerates the Dvoretzky golden file used by the acceptance suite:
//! `cargo test -p qsep-core --test pilot -- --ignored`.

use std::path::Path;

use qsep_core::dims::{dvoretzky_section, Gauge};
use qsep_core::hermitian::SeedStream;
use serde_json::json;

pub const GOLDEN_SEED: u64 = 64_004;
const PILOT_SEEDS: std::ops::Range<u64> = 1..21;

#[test]
#[ignore]
fn record_dvoretzky_golden() {
    let run = |seed| dvoretzky_section(Gauge::CrossPolytope, 64, 4, 100, 200, SeedStream::new(seed)).unwrap().median_ratio;
    let medians: Vec<f64> = PILOT_SEEDS.map(run).collect();
    let n = medians.len() as f64;
    let mean = medians.iter().sum::<f64>() / n;
    let sd = (medians.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let golden = json!({
        "gauge": "cross-polytope",
        "n": 64,
        "k": 4,
        "trials": 100,
        "samplesPerTrial": 200,
        "seed": GOLDEN_SEED,
        "median": run(GOLDEN_SEED),
        "pilotSeeds": PILOT_SEEDS.collect::<Vec<_>>(),
        "pilotMedians": medians,
        "pilotSd": sd,
        // Three seed-to-seed standard deviations of the median.
        "halfWidth": 3.0 * sd,
    });
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/dvoretzky_cross_n64_k4.json");
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(&path, serde_json::to_string_pretty(&golden).unwrap() + "\n").unwrap();
}
