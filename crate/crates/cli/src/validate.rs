use std::io::Write;

use gamma_spacings::gamma::gamma_cdf;
use gamma_spacings::spacings::{claimed_law_yj, integer_shape, spacing_cdf_table, y2_cdf_exact};
use gamma_spacings::{
    density_curve, histogram, ks_test, simulate_spacing, Execution, GammaParams, KsResult,
    MonotoneCdf, SimulationConfig, SpacingDensity, SpacingIndex,
};
use serde::Serialize;
use serde_json::Map;

use crate::manifest::RunManifest;
use crate::output::{emit_csv, emit_json, prepare_dir, with_writer, CliResult};
use crate::ValidateArgs;

/// Points of the tabulated cdf used when no closed form exists.
const CDF_TABLE_POINTS: usize = 401;
const QUADRATURE_TOL: f64 = 1e-9;
/// Total absolute error allowed over the tabulated cdf.
const CDF_TABLE_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct LawCheck {
    statistic: f64,
    p_value: f64,
    verdict: &'static str,
}

impl LawCheck {
    fn new(ks: KsResult, alpha: f64) -> Self {
        Self {
            statistic: ks.statistic,
            p_value: ks.p_value,
            verdict: if ks.rejects_at(alpha) {
                "rejected"
            } else {
                "not rejected"
            },
        }
    }

    fn rejected(&self) -> bool {
        self.verdict == "rejected"
    }
}

#[derive(Debug, Serialize)]
struct ShapeReport {
    m: f64,
    /// "closed-form" or "quadrature".
    true_cdf: &'static str,
    true_law: LawCheck,
    claimed_law: LawCheck,
}

fn closed_form_applies(a: &ValidateArgs, m: f64) -> bool {
    a.n == 2 && a.j == 2 && integer_shape(m).is_ok()
}

fn check_shape(
    a: &ValidateArgs,
    m: f64,
    execution: Execution,
) -> CliResult<(ShapeReport, Vec<f64>)> {
    let cfg = SimulationConfig::new(a.n, m, 1.0, a.reps, a.seed)?.with_execution(execution);
    let sample = simulate_spacing(&cfg, a.j)?.values;
    let unit = GammaParams::standard(m)?;

    let (true_cdf, true_ks) = if closed_form_applies(a, m) {
        (
            "closed-form",
            ks_test(&sample, |y| {
                y2_cdf_exact(m, y).expect("integer shape checked")
            })?,
        )
    } else {
        let top = sample[sample.len() - 1];
        let grid: Vec<f64> = (0..CDF_TABLE_POINTS)
            .map(|i| top * i as f64 / (CDF_TABLE_POINTS - 1) as f64)
            .collect();
        let index = SpacingIndex::consecutive(a.n, a.j)?;
        let table = spacing_cdf_table(index, unit, &grid, CDF_TABLE_TOL)?;
        let cdf = MonotoneCdf::from_table(grid, table)?;
        ("quadrature", ks_test(&sample, |y| cdf.eval(y))?)
    };
    let claimed = claimed_law_yj(a.n, a.j, unit)?;
    let claimed_ks = ks_test(&sample, |y| gamma_cdf(y, claimed))?;
    let report = ShapeReport {
        m,
        true_cdf,
        true_law: LawCheck::new(true_ks, a.alpha),
        claimed_law: LawCheck::new(claimed_ks, a.alpha),
    };
    Ok((report, sample))
}

fn write_table<W: Write + ?Sized>(
    w: &mut W,
    a: &ValidateArgs,
    reports: &[ShapeReport],
) -> std::io::Result<()> {
    writeln!(
        w,
        "Y_{} of n={} Gamma samples, R={}, seed={}, alpha={}",
        a.j, a.n, a.reps, a.seed, a.alpha
    )?;
    writeln!(
        w,
        "{:>6}  {:<8}  {:>9}  {:>11}  verdict",
        "m", "law", "KS D", "p-value"
    )?;
    for r in reports {
        for (law, c) in [("true", &r.true_law), ("claimed", &r.claimed_law)] {
            writeln!(
                w,
                "{:>6}  {:<8}  {:>9.6}  {:>11.4e}  {}",
                r.m, law, c.statistic, c.p_value, c.verdict
            )?;
        }
    }
    let rejected: Vec<String> = reports
        .iter()
        .filter(|r| r.claimed_law.rejected())
        .map(|r| r.m.to_string())
        .collect();
    if rejected.is_empty() {
        writeln!(w, "claimed law not rejected for any m")
    } else {
        writeln!(w, "claimed law rejected for m = {}", rejected.join(", "))
    }
}

fn write_plot_data(
    a: &ValidateArgs,
    manifest: &RunManifest,
    m: f64,
    sample: &[f64],
    bins: usize,
) -> CliResult<()> {
    let dir = a
        .output
        .as_deref()
        .expect("clap requires --output with --bins");
    let top = sample[sample.len() - 1];
    let hist = histogram(sample, bins, Some((0.0, top)))?;
    emit_csv(manifest, Some(&dir.join(format!("hist_m{m}.csv"))), |w| {
        hist.write_csv(w)
    })?;

    let params = GammaParams::standard(m)?;
    let truth = if closed_form_applies(a, m) {
        SpacingDensity::Exact { params }
    } else {
        SpacingDensity::Numeric {
            index: SpacingIndex::consecutive(a.n, a.j)?,
            params,
            tol: QUADRATURE_TOL,
        }
    };
    let claimed = SpacingDensity::Claimed {
        n: a.n,
        j: a.j,
        params,
    };
    for (name, d) in [("true", truth), ("claimed", claimed)] {
        let curve = density_curve(d, top, 4 * bins + 1)?;
        emit_csv(manifest, Some(&dir.join(format!("{name}_m{m}.csv"))), |w| {
            curve.write_csv(w)
        })?;
    }
    Ok(())
}

pub fn run(a: &ValidateArgs, execution: Execution) -> CliResult<()> {
    let manifest = RunManifest::new("validate")
        .param("m", &a.m)
        .param("n", a.n)
        .param("j", a.j)
        .param("sigma", 1.0)
        .param("reps", a.reps)
        .param("seed", a.seed)
        .param("alpha", a.alpha)
        .param("bins", a.bins);
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(crate::output::usage(format!(
            "--alpha must lie in (0, 1), got {}",
            a.alpha
        )));
    }
    if let Some(dir) = &a.output {
        prepare_dir(&manifest, dir)?;
    }

    let mut reports = Vec::with_capacity(a.m.len());
    for &m in &a.m {
        let (report, sample) = check_shape(a, m, execution)?;
        if let Some(bins) = a.bins {
            write_plot_data(a, &manifest, m, &sample, bins)?;
        }
        reports.push(report);
    }

    with_writer(None, |w| write_table(w, a, &reports))?;
    if let Some(dir) = &a.output {
        let rejected: Vec<f64> = reports
            .iter()
            .filter(|r| r.claimed_law.rejected())
            .map(|r| r.m)
            .collect();
        let mut fields = Map::new();
        fields.insert("alpha".into(), a.alpha.into());
        fields.insert(
            "results".into(),
            serde_json::to_value(&reports).expect("report serializes"),
        );
        fields.insert("claimed_law_rejected_for".into(), rejected.into());
        emit_json(&manifest, Some(&dir.join("report.json")), fields)?;
    }
    Ok(())
}
