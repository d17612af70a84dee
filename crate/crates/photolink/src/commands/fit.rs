use std::collections::BTreeMap;
use std::path::Path;

use photolink_core::fitting::{
    fit_half_quadratic, fit_quadratic_offset, fit_resonator_with, ResonatorOptions, XYPoint,
    XYSeries, RESONATOR_PARAMS,
};
use photolink_core::rfchain::insertion_loss_from_fit;
use serde::Serialize;

use crate::config::{FitConfig, FitModel, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::output::{num, write_csv, write_json};

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub model: FitModel,
    pub param_order: Vec<&'static str>,
    pub params: BTreeMap<&'static str, f64>,
    pub sigmas: BTreeMap<&'static str, f64>,
    pub covariance: Vec<Vec<f64>>,
    pub residual_rms: f64,
    pub extras: BTreeMap<&'static str, f64>,
}

impl serde::Serialize for FitModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            FitModel::HalfQuadratic => "half_quadratic",
            FitModel::QuadraticOffset => "quadratic_offset",
            FitModel::Resonator => "resonator",
        })
    }
}

/// Two or three numeric columns after a single header line.
pub fn read_series(path: &Path) -> Result<XYSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record =
            record.map_err(|e| CliError::validation(format!("{}:{line}: {e}", path.display())))?;
        let field = |k: usize| -> Result<f64> {
            record[k].parse::<f64>().map_err(|e| {
                CliError::validation(format!("{}:{line}: column {}: {e}", path.display(), k + 1))
            })
        };
        let point = match record.len() {
            2 => XYPoint {
                x: field(0)?,
                y: field(1)?,
                sigma: None,
            },
            3 => XYPoint {
                x: field(0)?,
                y: field(1)?,
                sigma: Some(field(2)?),
            },
            n => {
                return Err(CliError::validation(format!(
                    "{}:{line}: expected 2 or 3 columns, found {n}",
                    path.display()
                )))
            }
        };
        points.push(point);
    }
    XYSeries::new(points).map_err(|e| CliError::core(&path.display().to_string(), e))
}

fn diag(names: &[&'static str], values: &[f64]) -> BTreeMap<&'static str, f64> {
    names.iter().copied().zip(values.iter().copied()).collect()
}

struct Solved {
    names: Vec<&'static str>,
    values: Vec<f64>,
    covariance: Vec<Vec<f64>>,
    residual_rms: f64,
    curve: Vec<f64>,
}

/// Fits `data` and returns the report together with the model curve.
pub fn fit(cfg: &FitConfig, data: &XYSeries) -> Result<(FitReport, Vec<f64>)> {
    let err = |e| CliError::core("fit", e);
    let mut extras = BTreeMap::new();
    extras.insert("n_points", data.len() as f64);
    let Solved {
        names,
        values,
        covariance,
        residual_rms,
        curve,
    } = match cfg.model {
        FitModel::HalfQuadratic => {
            let f = fit_half_quadratic(data).map_err(err)?;
            if let (Some(r), Some(z)) = (cfg.responsivity, cfg.impedance) {
                let il = insertion_loss_from_fit(f.a.value, r, z).map_err(err)?;
                extras.insert("insertion_loss_ratio", il.ratio);
                extras.insert("insertion_loss_db", il.db());
            }
            let curve = data.xs().map(|x| f.eval(x)).collect();
            Solved {
                names: vec!["a"],
                values: vec![f.a.value],
                covariance: vec![vec![f.a.sigma * f.a.sigma]],
                residual_rms: f.residual_rms,
                curve,
            }
        }
        FitModel::QuadraticOffset => {
            let f = fit_quadratic_offset(data).map_err(err)?;
            let cov = vec![
                vec![f.a.sigma * f.a.sigma, f.covariance_ab],
                vec![f.covariance_ab, f.b.sigma * f.b.sigma],
            ];
            let curve = data.xs().map(|x| f.eval(x)).collect();
            Solved {
                names: vec!["a", "b"],
                values: vec![f.a.value, f.b.value],
                covariance: cov,
                residual_rms: f.residual_rms,
                curve,
            }
        }
        FitModel::Resonator => {
            let r = cfg
                .resonator
                .clone()
                .unwrap_or_else(|| crate::config::ResonatorConfig {
                    baseline: 0.0,
                    trace: Default::default(),
                    weighting: None,
                    guess: Default::default(),
                });
            let options = ResonatorOptions {
                baseline: r.baseline,
                trace: r.trace,
                weighting: r.weighting,
                guess: r.guess,
                ..ResonatorOptions::default()
            };
            let f = fit_resonator_with(data, &options).map_err(err)?;
            extras.insert("q_loaded", f.q_loaded());
            extras.insert("baseline", f.baseline);
            extras.insert("iterations", f.iterations as f64);
            let curve = data.xs().map(|x| f.eval(x)).collect();
            let cov = f.covariance.iter().map(|row| row.to_vec()).collect();
            Solved {
                names: RESONATOR_PARAMS.to_vec(),
                values: f.params().to_vec(),
                covariance: cov,
                residual_rms: f.residual_rms,
                curve,
            }
        }
    };
    let sigmas: Vec<f64> = (0..names.len()).map(|i| covariance[i][i].sqrt()).collect();
    Ok((
        FitReport {
            model: cfg.model,
            params: diag(&names, &values),
            sigmas: diag(&names, &sigmas),
            param_order: names,
            covariance,
            residual_rms,
            extras,
        },
        curve,
    ))
}

pub fn run(
    cfg: &ScenarioConfig,
    out: &Path,
    data: Option<&Path>,
    overlay: Option<&Path>,
) -> Result<()> {
    let fit_cfg = cfg.section(&cfg.fit, "fit")?;
    let data_path = match (data, &fit_cfg.data) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => cfg.resolve(p),
        (None, None) => {
            return Err(CliError::validation(
                "fit: give the data file with --data or `fit.data`",
            ))
        }
    };
    let series = read_series(&data_path)?;
    let (report, curve) = fit(fit_cfg, &series)?;
    write_json(out, &report)?;
    if let Some(path) = overlay {
        let rows = series
            .points()
            .iter()
            .zip(&curve)
            .map(|(p, m)| [num(p.x), num(p.y), num(*m)]);
        write_csv(path, &["f", "data", "model"], rows)?;
    }
    Ok(())
}
