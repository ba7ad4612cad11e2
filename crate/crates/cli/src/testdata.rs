use std::path::Path;
use std::process::ExitCode;

use gamma_spacings::{discordancy_test, Execution, SampleData, SimulationConfig, Statistic};
use serde_json::{json, Map};

use crate::manifest::RunManifest;
use crate::output::{emit_json, usage, CliResult, Failure};
use crate::TestArgs;

/// Reads one number per line; blank lines and `#` comments are skipped.
pub fn read_observations(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|source| Failure::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            usage(format!(
                "{}:{}: '{line}' is not a number",
                path.display(),
                lineno + 1
            ))
        })?;
        values.push(v);
    }
    Ok(values)
}

pub fn run(a: &TestArgs, execution: Execution) -> CliResult<ExitCode> {
    let data = SampleData::new(read_observations(&a.datafile)?)?;
    let which = Statistic::from(a.stat);
    let cfg = SimulationConfig::new(data.len(), a.m, 1.0, a.reps, a.seed)?
        .with_k(a.k)?
        .with_execution(execution);
    let report = discordancy_test(&data, which, &cfg, a.alpha)?;
    let manifest = RunManifest::new("test")
        .param("datafile", a.datafile.display().to_string())
        .param("n", data.len())
        .param("k", a.k)
        .param("m", a.m)
        .param("stat", which.label())
        .param("reps", a.reps)
        .param("seed", a.seed)
        .param("alpha", a.alpha);

    let mut fields = Map::new();
    fields.insert("statistic".into(), json!(report.statistic));
    fields.insert("p_value".into(), json!(report.p_value));
    fields.insert("critical_value".into(), json!(report.critical_value));
    fields.insert("alpha".into(), json!(report.alpha));
    fields.insert("decision".into(), json!(report.decision));
    fields.insert(
        "config".into(),
        json!({
            "stat": report.statistic_name,
            "n": report.config.n,
            "k": report.config.k,
            "m": report.config.m,
            "reps": report.config.reps,
            "seed": report.config.seed,
        }),
    );
    emit_json(&manifest, a.output.as_deref(), fields)?;
    Ok(if report.decision.is_discordant() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
