use gamma_spacings::montecarlo::rate_std_error;
use gamma_spacings::{
    critical_value, simulate_power, simulate_statistic, EmpiricalSample, Execution,
    SimulationConfig, SlippageAlternative, Statistic,
};
use serde_json::{json, Map, Value};

use crate::manifest::RunManifest;
use crate::output::{emit_csv, emit_json, usage, CliResult, Format};
use crate::{CriticalValuesArgs, PowerArgs, StatArg};

fn statistics(list: &[StatArg]) -> CliResult<Vec<Statistic>> {
    let mut out: Vec<Statistic> = Vec::new();
    for &s in list {
        let s = Statistic::from(s);
        if out.contains(&s) {
            return Err(usage(format!("statistic {s} listed twice")));
        }
        out.push(s);
    }
    Ok(out)
}

fn null_samples(cfg: &SimulationConfig, stats: &[Statistic]) -> CliResult<Vec<EmpiricalSample>> {
    stats
        .iter()
        .map(|&s| simulate_statistic(cfg, s).map_err(Into::into))
        .collect()
}

pub fn critical_values(a: &CriticalValuesArgs, execution: Execution) -> CliResult<()> {
    let stats = statistics(&a.stat)?;
    let cfg = SimulationConfig::new(a.n, a.m, 1.0, a.reps, a.seed)?
        .with_k(a.k)?
        .with_execution(execution);
    let manifest = RunManifest::new("critical-values")
        .param("n", a.n)
        .param("k", a.k)
        .param("m", a.m)
        .param("reps", a.reps)
        .param("seed", a.seed)
        .param("alpha", &a.alpha)
        .param("stat", stats.iter().map(|s| s.label()).collect::<Vec<_>>());
    let nulls = null_samples(&cfg, &stats)?;
    let rows = a
        .alpha
        .iter()
        .map(|&alpha| {
            let crit = nulls
                .iter()
                .map(|s| critical_value(s, alpha))
                .collect::<gamma_spacings::Result<Vec<f64>>>()?;
            Ok((alpha, crit))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let output = a.output.as_deref();
    match a.format {
        Format::Csv => emit_csv(&manifest, output, |w| {
            let header: Vec<&str> = std::iter::once("alpha")
                .chain(stats.iter().map(|s| s.label()))
                .collect();
            writeln!(w, "{}", header.join(","))?;
            for (alpha, crit) in &rows {
                let cells: Vec<String> = crit.iter().map(f64::to_string).collect();
                writeln!(w, "{alpha},{}", cells.join(","))?;
            }
            Ok(())
        }),
        Format::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(alpha, crit)| {
                    let mut row = Map::new();
                    row.insert("alpha".into(), json!(alpha));
                    for (s, c) in stats.iter().zip(crit) {
                        row.insert(s.label().into(), json!(c));
                    }
                    Value::Object(row)
                })
                .collect();
            let mut fields = Map::new();
            fields.insert("critical_values".into(), Value::Array(table));
            emit_json(&manifest, output, fields)
        }
    }
}

pub fn power(a: &PowerArgs, execution: Execution) -> CliResult<()> {
    let stats = statistics(&a.stat)?;
    let cfg = SimulationConfig::new(a.n, a.m, 1.0, a.reps, a.seed)?
        .with_k(a.k)?
        .with_execution(execution);
    let alternatives =
        a.b.iter()
            .map(|&b| SlippageAlternative::new(a.k, b).map_err(Into::into))
            .collect::<CliResult<Vec<_>>>()?;
    let manifest = RunManifest::new("power")
        .param("n", a.n)
        .param("k", a.k)
        .param("m", a.m)
        .param("reps", a.reps)
        .param("seed", a.seed)
        .param("alpha", a.alpha)
        .param("b", &a.b)
        .param("stat", stats.iter().map(|s| s.label()).collect::<Vec<_>>());
    let nulls = null_samples(&cfg, &stats)?;
    let mut rows = Vec::new();
    for (s, null) in stats.iter().zip(&nulls) {
        for alt in &alternatives {
            let power = simulate_power(&cfg, *alt, a.alpha, null)?;
            rows.push((
                s.label(),
                alt.scale_factor,
                power,
                rate_std_error(power, a.reps),
            ));
        }
    }

    let output = a.output.as_deref();
    match a.format {
        Format::Csv => emit_csv(&manifest, output, |w| {
            writeln!(w, "stat,b,power,se")?;
            for (s, b, p, se) in &rows {
                writeln!(w, "{s},{b},{p},{se}")?;
            }
            Ok(())
        }),
        Format::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(s, b, p, se)| json!({ "stat": s, "b": b, "power": p, "se": se }))
                .collect();
            let mut fields = Map::new();
            fields.insert("power".into(), Value::Array(table));
            emit_json(&manifest, output, fields)
        }
    }
}
