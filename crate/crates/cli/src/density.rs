use gamma_spacings::spacings::integer_shape;
use gamma_spacings::{density_curve, DensityCurve, GammaParams, SpacingDensity, SpacingIndex};
use serde_json::{Map, Value};

use crate::manifest::RunManifest;
use crate::output::{emit_csv, emit_json, prepare_dir, to_json, usage, CliResult, Format};
use crate::{DensityArgs, Which};

fn requested(a: &DensityArgs) -> CliResult<Vec<SpacingDensity>> {
    let params = GammaParams::new(a.m, a.sigma)?;
    let index = SpacingIndex::consecutive(a.n, a.j)?;
    let exact_ok = a.n == 2 && a.j == 2 && integer_shape(a.m).is_ok();
    let exact = SpacingDensity::Exact { params };
    let claimed = SpacingDensity::Claimed {
        n: a.n,
        j: a.j,
        params,
    };
    let numeric = SpacingDensity::Numeric {
        index,
        params,
        tol: a.tol,
    };
    Ok(match a.which {
        Which::Exact if !exact_ok => {
            return Err(usage(format!(
                "--which exact needs n=2, j=2 and an integer shape, got n={}, j={}, m={}",
                a.n, a.j, a.m
            )))
        }
        Which::Exact => vec![exact],
        Which::Claimed => vec![claimed],
        Which::Numeric => vec![numeric],
        Which::All if exact_ok => vec![exact, claimed],
        Which::All => vec![numeric, claimed],
    })
}

pub fn run(a: &DensityArgs) -> CliResult<()> {
    let which = requested(a)?;
    let manifest = RunManifest::new("density")
        .param("m", a.m)
        .param("n", a.n)
        .param("j", a.j)
        .param("sigma", a.sigma)
        .param("which", which.iter().map(|d| d.name()).collect::<Vec<_>>())
        .param(
            "grid",
            serde_json::json!({ "ymin": 0.0, "ymax": a.ymax, "points": a.points }),
        )
        .param("tol", a.tol);
    let curves = which
        .iter()
        .map(|d| Ok((d.name(), density_curve(*d, a.ymax, a.points)?)))
        .collect::<CliResult<Vec<(&str, DensityCurve)>>>()?;

    match (&a.output, a.format) {
        (Some(dir), format) => {
            prepare_dir(&manifest, dir)?;
            for (name, curve) in &curves {
                match format {
                    Format::Csv => {
                        emit_csv(&manifest, Some(&dir.join(format!("{name}.csv"))), |w| {
                            writeln!(w, "# curve: {name}")?;
                            curve.write_csv(w)
                        })?
                    }
                    Format::Json => {
                        let mut fields = Map::new();
                        fields.insert("curve".into(), Value::from(*name));
                        fields.insert("density".into(), to_json(curve));
                        emit_json(&manifest, Some(&dir.join(format!("{name}.json"))), fields)?
                    }
                }
            }
            Ok(())
        }
        (None, Format::Csv) => emit_csv(&manifest, None, |w| {
            for (i, (name, curve)) in curves.iter().enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                writeln!(w, "# curve: {name}")?;
                curve.write_csv(&mut *w)?;
            }
            Ok(())
        }),
        (None, Format::Json) => {
            let all: Map<String, Value> = curves
                .iter()
                .map(|(n, c)| (n.to_string(), to_json(c)))
                .collect();
            let mut fields = Map::new();
            fields.insert("curves".into(), Value::Object(all));
            emit_json(&manifest, None, fields)
        }
    }
}
