use rayon::prelude::*;
use serde_json::json;

use super::config::{ConfigError, ExperimentConfig};
use super::output::{Table, TaskOutput};
use super::{execute, mix_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisName {
    Lambda,
    Omega,
    /// Angle in turns: `z = e^{2πit}`.
    Z,
    N,
    Size,
}

impl AxisName {
    fn label(self) -> &'static str {
        match self {
            AxisName::Lambda => "lambda",
            AxisName::Omega => "omega",
            AxisName::Z => "z_turns",
            AxisName::N => "n",
            AxisName::Size => "size",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

pub fn parse_axes(specs: &[String]) -> Result<Vec<Axis>, ConfigError> {
    specs
        .iter()
        .map(|spec| {
            let (name, vals) = spec.split_once('=').ok_or_else(|| {
                ConfigError::at("--axis", format!("expected name=v1,v2,... (got {spec:?})"))
            })?;
            let name = match name.trim() {
                "lambda" => AxisName::Lambda,
                "omega" => AxisName::Omega,
                "z" => AxisName::Z,
                "n" => AxisName::N,
                "size" => AxisName::Size,
                other => return Err(ConfigError::at("--axis", format!("unknown axis {other:?}"))),
            };
            let values = vals
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| ConfigError::at("--axis", format!("{v:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(ConfigError::at("--axis", "no values"));
            }
            if matches!(name, AxisName::N | AxisName::Size)
                && values.iter().any(|v| v.fract() != 0.0 || *v < 1.0)
            {
                return Err(ConfigError::at(
                    "--axis",
                    format!("{} values must be positive integers", name.label()),
                ));
            }
            Ok(Axis { name, values })
        })
        .collect()
}

/// Cartesian product in row-major order (first axis slowest).
fn cells(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut c = prefix.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    out
}

fn apply(base: &ExperimentConfig, axes: &[Axis], values: &[f64], index: usize) -> ExperimentConfig {
    let mut cfg = base.clone();
    let seed = mix_seed(base.seed, index as u64);
    cfg.seed = seed;
    cfg.sampling.seed = seed;
    for (axis, &v) in axes.iter().zip(values) {
        match axis.name {
            AxisName::Lambda => cfg.scheme.lambda = v,
            AxisName::Omega => cfg.scheme.omega = v,
            AxisName::Z => {
                let z = crate::linalg::C64::from_polar(1.0, std::f64::consts::TAU * v);
                cfg.params.z = Some(vec![[z.re, z.im]]);
                cfg.params.z_grid = None;
            }
            AxisName::N => cfg.params.n = Some(v as usize),
            AxisName::Size => {
                cfg.params.size = Some(v as usize);
                cfg.params.sizes = None;
            }
        }
    }
    cfg
}

pub fn sweep(base: &ExperimentConfig, axes: &[Axis]) -> Result<TaskOutput, ConfigError> {
    let grid = cells(axes);
    let results: Vec<Result<TaskOutput, ConfigError>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, values)| execute(&apply(base, axes, values, i)))
        .collect();

    let mut columns: Vec<String> = vec!["cell".into()];
    columns.extend(axes.iter().map(|a| a.name.label().to_string()));
    let mut table: Option<Table> = None;
    let mut failures = Vec::new();
    let mut errors = 0;
    for (i, (values, res)) in grid.iter().zip(results).enumerate() {
        match res {
            Ok(mut out) => {
                let mut lead = vec![("cell", json!(i))];
                for (a, v) in axes.iter().zip(values) {
                    lead.push((a.name.label(), json!(v)));
                }
                out.table.prepend(&lead);
                failures.extend(out.failures.into_iter().map(|f| format!("cell {i}: {f}")));
                match &mut table {
                    Some(t) => t.rows.extend(out.table.rows),
                    None => table = Some(out.table),
                }
            }
            Err(e) => {
                errors += 1;
                failures.push(format!("cell {i}: {e}"));
            }
        }
    }
    let table = table.unwrap_or_else(|| Table {
        columns,
        rows: Vec::new(),
    });
    let summary = format!(
        "{} cells, {} rows, {} cell errors",
        grid.len(),
        table.rows.len(),
        errors
    );
    Ok(TaskOutput {
        table,
        summary,
        failures,
    })
}
