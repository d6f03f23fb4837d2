//! One-dimensional calibration of filter radius and thresholds.

use std::io::Write;

use lenscale_core::calibrate::{
    measure_1d, resolve_targets, sweep_intermediate, sweep_symmetric, SweepRow, MEASURE_BETA,
};
use lenscale_core::ThresholdSet;

use crate::error::{Error, Result};

pub const HEADER: &str =
    "param,r_fil,mu_ero,mu_int,mu_dil,solid_ero,solid_int,solid_dil,void_ero,void_int,void_dil,t_ero,t_dil";

/// What to measure.
#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationJob {
    /// A single threshold set.
    Single { thresholds: ThresholdSet, r_fil: f64 },
    /// A tabulated void-to-solid ratio at a solid minimum size.
    Ratio { ratio: u32, r_min_solid: f64 },
    /// `[0.5 + d, 0.5, 0.5 - d]` for each `d`.
    Symmetric { deltas: Vec<f64>, r_fil: f64 },
    /// Intermediate threshold between fixed outer ones.
    Intermediate { mu_int: Vec<f64>, eroded: f64, dilated: f64, r_fil: f64 },
}

/// `steps` evenly spaced values from `from` to `to`, inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect(),
    }
}

fn csv_row(param: f64, row: &SweepRow) -> String {
    let r = &row.report;
    let mut f = vec![format!("{param:.6}"), format!("{:.6}", r.r_fil)];
    f.extend(row.thresholds.as_array().iter().map(|v| format!("{v:.6}")));
    f.extend(r.solid.radii.iter().map(|v| format!("{v:.6}")));
    f.extend(r.void.radii.iter().map(|v| format!("{v:.6}")));
    f.push(format!("{:.6}", r.t_ero()));
    f.push(format!("{:.6}", r.t_dil()));
    f.join(",")
}

/// Runs the job and writes CSV rows (with header) to `out`.
pub fn execute(job: &CalibrationJob, out: &mut dyn Write) -> Result<Vec<SweepRow>> {
    let (params, rows): (Vec<f64>, Vec<SweepRow>) = match job {
        CalibrationJob::Single { thresholds, r_fil } => {
            let report = measure_1d(thresholds, *r_fil, MEASURE_BETA)?;
            (
                vec![thresholds.get(lenscale_core::Design::Intermediate)],
                vec![SweepRow { thresholds: *thresholds, report }],
            )
        }
        CalibrationJob::Ratio { ratio, r_min_solid } => {
            let t = resolve_targets(*r_min_solid, *ratio)?;
            let report = measure_1d(&t.thresholds, t.r_fil, MEASURE_BETA)?;
            (vec![*ratio as f64], vec![SweepRow { thresholds: t.thresholds, report }])
        }
        CalibrationJob::Symmetric { deltas, r_fil } => (deltas.clone(), sweep_symmetric(deltas, *r_fil)?),
        CalibrationJob::Intermediate { mu_int, eroded, dilated, r_fil } => {
            (mu_int.clone(), sweep_intermediate(mu_int, *eroded, *dilated, *r_fil)?)
        }
    };
    let mut text = String::from(HEADER);
    text.push('\n');
    for (p, row) in params.iter().zip(&rows) {
        text.push_str(&csv_row(*p, row));
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<output>", e))?;
    Ok(rows)
}
