use std::path::PathBuf;

use gamma_spacings::{
    histogram, simulate_spacing, simulate_statistic, Execution, SimulationConfig, Statistic,
};
use serde_json::Map;

use crate::manifest::RunManifest;
use crate::output::{emit_csv, emit_json, to_json, usage, CliResult, Format};
use crate::SimulateArgs;

pub fn run(a: &SimulateArgs, execution: Execution) -> CliResult<()> {
    let sigma = a.sigma.unwrap_or(1.0);
    let base = SimulationConfig::new(a.n, a.m, sigma, a.reps, a.seed)?.with_execution(execution);
    let manifest = RunManifest::new("simulate")
        .param("n", a.n)
        .param("m", a.m)
        .param("reps", a.reps)
        .param("seed", a.seed)
        .param("bins", a.bins);
    let (sample, manifest) = match (a.j, a.stat, a.k) {
        (Some(j), None, None) => (
            simulate_spacing(&base, j)?,
            manifest.param("sigma", sigma).param("j", j),
        ),
        (None, Some(stat), Some(k)) => {
            let which = Statistic::from(stat);
            let cfg = base.with_k(k)?;
            (
                simulate_statistic(&cfg, which)?,
                manifest.param("stat", which.label()).param("k", k),
            )
        }
        _ => return Err(usage("give either --j or both --stat and --k")),
    };

    let output = a.output.as_deref();
    match a.format {
        Format::Csv => emit_csv(&manifest, output, |w| sample.write_csv(w))?,
        Format::Json => {
            let mut fields = Map::new();
            fields.insert("sample".into(), to_json(&sample));
            emit_json(&manifest, output, fields)?
        }
    }

    if let (Some(bins), Some(out)) = (a.bins, output) {
        let hist = histogram(&sample.values, bins, None)?;
        let mut path = out.as_os_str().to_owned();
        path.push(".histogram.csv");
        emit_csv(&manifest, Some(&PathBuf::from(path)), |w| hist.write_csv(w))?;
    }
    Ok(())
}
