//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use common::{gspace, snapshot_dir, stdout, without_timestamp};
use gamma_spacings::gamma::gamma_cdf;
use gamma_spacings::quadrature::{integrate, Quadrature};
use gamma_spacings::spacings::{claimed_law_yj, y2_cdf_exact};
use gamma_spacings::{
    claimed_pdf_yj, critical_value, dixon_dk, gamma_pdf, gamma_sample, ks_test, simulate_spacing,
    simulate_statistic, spacing_pdf_numeric, y2_mixture, y2_pdf_exact, z_k, z_k_telescoped,
    GammaParams, RngStream, SampleData, SimulationConfig, SpacingIndex, Statistic, StatisticConfig,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 42;

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn within(elapsed: Duration, limit_secs: u64, detail: String) -> Outcome {
    if elapsed.as_secs_f64() < limit_secs as f64 {
        Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "{detail}; took {:.2}s, limit {limit_secs}s",
            elapsed.as_secs_f64()
        ))
    }
}

fn y2_laws_under_simulation() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for m in [1.0, 3.0, 8.0] {
        let cfg = SimulationConfig::new(2, m, 1.0, 10_000, SEED).map_err(|e| e.to_string())?;
        let sample = simulate_spacing(&cfg, 2).map_err(|e| e.to_string())?.values;
        let exact = ks_test(&sample, |y| y2_cdf_exact(m, y).unwrap()).map_err(|e| e.to_string())?;
        let claimed_law = GammaParams::standard(m).unwrap();
        let claimed = ks_test(&sample, |y| gamma_cdf(y, claimed_law)).map_err(|e| e.to_string())?;
        notes.push(format!(
            "m={m}: p_true={:.3} p_claimed={:.3e}",
            exact.p_value, claimed.p_value
        ));
        if exact.p_value <= 0.01 {
            failures.push(format!("m={m} true law p={}", exact.p_value));
        }
        let claimed_ok = if m == 1.0 {
            claimed.p_value > 0.01
        } else {
            claimed.p_value < 1e-6
        };
        if !claimed_ok {
            failures.push(format!("m={m} claimed law p={}", claimed.p_value));
        }
    }
    if failures.is_empty() {
        within(start.elapsed(), 10, notes.join(", "))
    } else {
        Err(failures.join(", "))
    }
}

fn elementary_closed_form() -> Outcome {
    let worst = grid(0.0, 20.0, 1000)
        .into_iter()
        .map(|y| (y2_pdf_exact(2.0, y).unwrap() - 0.5 * ((-y).exp() + y * (-y).exp())).abs())
        .fold(0.0, f64::max);
    if worst < 1e-14 {
        Ok(format!("max |diff| = {worst:.2e}"))
    } else {
        Err(format!("max |diff| = {worst:.2e} >= 1e-14"))
    }
}

fn quadrature_oracle() -> Outcome {
    let start = Instant::now();
    let index = SpacingIndex::consecutive(2, 2).unwrap();
    let mut worst: f64 = 0.0;
    for m in [1.0, 2.0, 3.0, 8.0] {
        let p = GammaParams::standard(m).unwrap();
        for y in grid(0.0, 12.0 + 2.0 * m, 200) {
            let numeric = spacing_pdf_numeric(index, p, y, 1e-9).map_err(|e| e.to_string())?;
            worst = worst.max((numeric - y2_pdf_exact(m, y).unwrap()).abs());
        }
    }
    if worst < 1e-6 {
        within(start.elapsed(), 30, format!("sup distance {worst:.2e}"))
    } else {
        Err(format!("sup distance {worst:.2e} >= 1e-6"))
    }
}

fn normalization() -> Outcome {
    let mut worst_integral: f64 = 0.0;
    for m in 1..=10 {
        let m = m as f64;
        let total = integrate(
            |y| y2_pdf_exact(m, y).unwrap(),
            0.0,
            200.0,
            Quadrature::with_tolerance(1e-12),
        )
        .map_err(|e| e.to_string())?
        .value;
        worst_integral = worst_integral.max((total - 1.0).abs());
    }
    let worst_weights = (1..=50)
        .map(|m| (y2_mixture(m as f64).unwrap().weights.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let detail = format!("integral err {worst_integral:.2e}, weight-sum err {worst_weights:.2e}");
    if worst_integral < 1e-8 && worst_weights < 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mixture_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=10 {
        let mix = y2_mixture(m as f64).unwrap();
        for y in grid(0.0, 30.0, 301) {
            let composed: f64 = mix
                .weights
                .iter()
                .zip(&mix.component_shapes)
                .map(|(w, &k)| {
                    let p = GammaParams::standard(k as f64).unwrap();
                    // Γ(1, 1) has density 1 at the origin; higher shapes vanish there.
                    w * if y == 0.0 {
                        if k == 1 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        gamma_pdf(y, p)
                    }
                })
                .sum();
            worst = worst.max((y2_pdf_exact(m as f64, y).unwrap() - composed).abs());
        }
    }
    if worst < 1e-12 {
        Ok(format!("max |diff| = {worst:.2e}"))
    } else {
        Err(format!("max |diff| = {worst:.2e} >= 1e-12"))
    }
}

fn exponential_case() -> Outcome {
    let unit = GammaParams::standard(1.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut min_p: f64 = 1.0;
    for n in 3..=5 {
        for j in 2..=n {
            let index = SpacingIndex::consecutive(n, j).unwrap();
            for y in grid(0.0, 5.0, 51) {
                let numeric =
                    spacing_pdf_numeric(index, unit, y, 1e-9).map_err(|e| e.to_string())?;
                worst = worst.max((numeric - claimed_pdf_yj(n, j, 1.0, y).unwrap()).abs());
            }
            let cfg =
                SimulationConfig::new(n, 1.0, 1.0, 10_000, SEED).map_err(|e| e.to_string())?;
            let sample = simulate_spacing(&cfg, j).map_err(|e| e.to_string())?.values;
            let law = claimed_law_yj(n, j, unit).unwrap();
            min_p = min_p.min(
                ks_test(&sample, |y| gamma_cdf(y, law))
                    .map_err(|e| e.to_string())?
                    .p_value,
            );
        }
    }
    let detail = format!("pdf sup distance {worst:.2e}, smallest KS p {min_p:.3}");
    if worst < 1e-6 && min_p > 0.01 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn statistic_identities() -> Outcome {
    const SHAPES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
    let mut worst_identity: f64 = 0.0;
    let mut worst_general_scale: f64 = 0.0;
    let mut problems = Vec::new();
    for i in 0..10_000u64 {
        let mut rng = RngStream::new(7, i).rng();
        let n = rng.random_range(3..=50);
        let k = rng.random_range(1..n);
        let m = SHAPES[rng.random_range(0..SHAPES.len())];
        let x = gamma_sample(RngStream::new(8, i), GammaParams::standard(m).unwrap(), n).unwrap();
        let cfg = StatisticConfig::new(k);
        let data = SampleData::new(x.clone()).unwrap();
        let z = z_k(&data, cfg).unwrap();
        worst_identity = worst_identity.max((z - z_k_telescoped(&data, cfg).unwrap()).abs());

        let doubled = SampleData::new(x.iter().map(|v| v * 8.0).collect()).unwrap();
        if z_k(&doubled, cfg).unwrap() != z {
            problems.push(format!("z_k binary scaling, sample {i}"));
        }
        let stretched = SampleData::new(x.iter().map(|v| v * 7.3).collect()).unwrap();
        worst_general_scale = worst_general_scale.max((z_k(&stretched, cfg).unwrap() - z).abs());

        let lattice: Vec<f64> = x.iter().map(|v| (v * 1024.0).round() / 1024.0).collect();
        if let Ok(on_lattice) = SampleData::new(lattice.clone()) {
            if let Ok(d) = dixon_dk(&on_lattice, cfg) {
                let moved =
                    SampleData::new(lattice.iter().map(|v| 4.0 * v - 13.0).collect()).unwrap();
                if dixon_dk(&moved, cfg).unwrap() != d {
                    problems.push(format!("dixon location-scale, sample {i}"));
                }
            }
        }
        if z_k(&data, StatisticConfig::new(n - 1)).unwrap() != 1.0 {
            problems.push(format!("k = n-1 not exactly 1, sample {i}"));
        }
    }
    if worst_identity >= 1e-12 {
        problems.push(format!("identity error {worst_identity:.2e}"));
    }
    if worst_general_scale >= 1e-12 {
        problems.push(format!("general scaling error {worst_general_scale:.2e}"));
    }
    if problems.is_empty() {
        Ok(format!(
            "identity err {worst_identity:.2e}; binary scalings and lattice shifts bit-exact; non-binary scaling err {worst_general_scale:.2e}"
        ))
    } else {
        problems.truncate(5);
        Err(problems.join("; "))
    }
}

fn size_calibration() -> Outcome {
    let start = Instant::now();
    let null = SimulationConfig::new(5, 1.0, 1.0, 100_000, 1001)
        .and_then(|c| c.with_k(1))
        .map_err(|e| e.to_string())?;
    let crit = critical_value(
        &simulate_statistic(&null, Statistic::Zk).map_err(|e| e.to_string())?,
        0.05,
    )
    .map_err(|e| e.to_string())?;
    let fresh = SimulationConfig {
        seed: 2002,
        reps: 10_000,
        ..null
    };
    let fresh = simulate_statistic(&fresh, Statistic::Zk).map_err(|e| e.to_string())?;
    let size = fresh.values.iter().filter(|&&v| v > crit).count() as f64 / fresh.len() as f64;
    let detail = format!("critical value {crit:.4}, empirical size {size:.4}");
    if (size - 0.05).abs() <= 0.0065 {
        within(start.elapsed(), 60, detail)
    } else {
        Err(detail)
    }
}

fn run_twice(args: &[&str], out: &Path) -> Result<(), String> {
    let mut runs = Vec::new();
    for threads in ["1", "4"] {
        if out.exists() {
            std::fs::remove_dir_all(out).unwrap();
        }
        std::fs::create_dir_all(out).unwrap();
        let mut full = vec!["--threads".to_string(), threads.to_string()];
        full.extend(args.iter().map(|a| match a.strip_prefix("OUT") {
            Some(rest) => format!("{}{rest}", out.display()),
            None => a.to_string(),
        }));
        let result = gspace(&full);
        if !matches!(result.status.code(), Some(0 | 1)) {
            return Err(format!(
                "{args:?} failed: {}",
                String::from_utf8_lossy(&result.stderr)
            ));
        }
        runs.push((without_timestamp(&stdout(&result)), snapshot_dir(out)));
    }
    if runs[0] == runs[1] {
        Ok(())
    } else {
        Err(format!("{} differs between --threads 1 and 4", args[0]))
    }
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = tmp.path().join("data.txt");
    std::fs::write(&data, "1.1\n0.9\n1.0\n1.2\n50.0\n").unwrap();
    let data = data.to_str().unwrap().to_string();
    let out = tmp.path().join("out");
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "simulate",
            "--n",
            "2",
            "--m",
            "3",
            "--j",
            "2",
            "--reps",
            "10000",
            "--seed",
            "42",
            "--bins",
            "30",
            "--output",
            "OUT/y2.csv",
        ],
        vec![
            "simulate",
            "--n",
            "4",
            "--m",
            "2.5",
            "--sigma",
            "2",
            "--j",
            "3",
            "--reps",
            "5000",
            "--seed",
            "5",
            "--format",
            "json",
            "--output",
            "OUT/y3.json",
        ],
        vec![
            "simulate", "--stat", "zk", "--n", "5", "--k", "2", "--m", "1", "--reps", "10000",
            "--seed", "7",
        ],
        vec![
            "simulate",
            "--stat",
            "dk",
            "--n",
            "6",
            "--k",
            "1",
            "--m",
            "0.5",
            "--reps",
            "10000",
            "--seed",
            "7",
            "--output",
            "OUT/dk.csv",
        ],
        vec![
            "validate", "--m", "1,3,8", "--reps", "10000", "--seed", "42", "--alpha", "0.01",
            "--bins", "40", "--output", "OUT",
        ],
        vec![
            "critical-values",
            "--n",
            "5",
            "--k",
            "1",
            "--m",
            "1",
            "--reps",
            "20000",
            "--seed",
            "3",
            "--alpha",
            "0.1,0.05,0.01",
            "--stat",
            "zk,dk",
            "--output",
            "OUT/cv.csv",
        ],
        vec![
            "power",
            "--n",
            "5",
            "--k",
            "1",
            "--m",
            "1",
            "--b",
            "1,2,10",
            "--reps",
            "5000",
            "--seed",
            "4",
            "--stat",
            "zk,dk",
            "--format",
            "json",
            "--output",
            "OUT/power.json",
        ],
        vec![
            "test", &data, "--k", "1", "--m", "1", "--reps", "10000", "--seed", "9",
        ],
    ];
    for args in &commands {
        run_twice(args, &out)?;
    }
    Ok(format!(
        "{} runs byte-identical apart from timestamps",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "Y_2 simulation vs true and claimed laws (m = 1, 3, 8)",
            y2_laws_under_simulation,
        ),
        (
            "closed form for m = 2 is 0.5 (e^-y + y e^-y)",
            elementary_closed_form,
        ),
        (
            "closed form agrees with quadrature for n = 2",
            quadrature_oracle,
        ),
        (
            "density normalization and mixture weight sums",
            normalization,
        ),
        ("closed form equals its Gamma mixture", mixture_equivalence),
        (
            "exponential spacings follow the claimed law",
            exponential_case,
        ),
        ("statistic identities and invariances", statistic_identities),
        ("Z_k test size at alpha = 0.05", size_calibration),
        (
            "CLI reruns are deterministic across thread counts",
            determinism,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
