//! Run settings from a flat `key = value` file plus command-line overrides.
//!
//! Keys are case-sensitive; `-` and `_` are interchangeable. `#` starts a
//! comment. Later assignments win, so flags are applied after the file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use lenscale_core::fem::SolverKind;
use lenscale_core::{BoundaryTreatment, Design, Preset, RunConfig, ThresholdSet};

use crate::error::{Error, Result};

/// Everything `run` needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub run: RunConfig,
    pub out: PathBuf,
    /// Write design snapshots every this many iterations; 0 writes only the
    /// final designs.
    pub snapshot_every: usize,
    nx: Option<usize>,
    ny: Option<usize>,
    nz: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Self { run: RunConfig::default(), out: PathBuf::from("out"), snapshot_every: 0, nx: None, ny: None, nz: None }
    }
}

pub const KEYS: &[&str] = &[
    "problem",
    "nx",
    "ny",
    "nz",
    "volfrac",
    "rmin",
    "void_ratio",
    "rmax",
    "gap",
    "thresholds",
    "rfil",
    "seed",
    "out",
    "strict",
    "snapshot_every",
    "boundary",
    "solver",
    "cg_tolerance",
    "cg_max_iterations",
    "e0",
    "emin",
    "nu",
    "max_size_designs",
    "gap_designs",
    "iterations_per_stage",
    "tolerance",
    "noise",
    "volume_update_interval",
    "max_size_epsilon",
    "max_size_exponent",
    "gap_exponent",
    "spring_in",
    "spring_out",
];

fn parse<T: FromStr>(origin: &str, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::config(origin, format!("bad value `{value}` for `{key}`: {e}")))
}

fn parse_bool(origin: &str, key: &str, value: &str) -> Result<bool> {
    match value {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::config(origin, format!("bad value `{value}` for `{key}`: expected true or false"))),
    }
}

pub fn parse_thresholds(value: &str) -> std::result::Result<ThresholdSet, String> {
    let parts: Vec<f64> = value
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => ThresholdSet::new(a, b, c).map_err(|e| e.to_string()),
        _ => Err(format!("expected three comma-separated thresholds, got {}", parts.len())),
    }
}

fn parse_designs(value: &str) -> std::result::Result<Vec<Design>, String> {
    if value == "none" {
        return Ok(Vec::new());
    }
    let mut out: Vec<Design> = value
        .split(',')
        .map(|p| p.parse::<Design>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl Settings {
    /// Applies one assignment. `origin` names the source in error messages.
    pub fn apply(&mut self, origin: &str, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let k = key.as_str();
        let r = &mut self.run;
        match k {
            "problem" => r.preset = parse::<Preset>(origin, k, value)?,
            "nx" => self.nx = Some(parse(origin, k, value)?),
            "ny" => self.ny = Some(parse(origin, k, value)?),
            "nz" => self.nz = Some(parse(origin, k, value)?),
            "volfrac" => r.volume_fraction = Some(parse(origin, k, value)?),
            "rmin" => r.r_min_solid = parse(origin, k, value)?,
            "void_ratio" => r.void_ratio = parse(origin, k, value)?,
            "rmax" => r.r_max = Some(parse(origin, k, value)?),
            "gap" => r.gap = Some(parse(origin, k, value)?),
            "thresholds" => {
                r.thresholds = Some(parse_thresholds(value).map_err(|m| Error::config(origin, m))?);
            }
            "rfil" => r.r_fil = Some(parse(origin, k, value)?),
            "seed" => r.seed = parse(origin, k, value)?,
            "out" => self.out = PathBuf::from(value),
            "strict" => r.strict_feasibility = parse_bool(origin, k, value)?,
            "snapshot_every" => self.snapshot_every = parse(origin, k, value)?,
            "boundary" => {
                r.boundary = match value {
                    "corrected" => BoundaryTreatment::Corrected,
                    "raw" => BoundaryTreatment::Raw,
                    _ => {
                        return Err(Error::config(origin, format!("boundary must be corrected or raw, got `{value}`")))
                    }
                }
            }
            "solver" => {
                r.solver = Some(match value {
                    "banded" | "direct" => SolverKind::Banded,
                    "cg" => SolverKind::Cg { tolerance: 1e-8, max_iterations: 20_000 },
                    _ => return Err(Error::config(origin, format!("solver must be banded or cg, got `{value}`"))),
                })
            }
            "cg_tolerance" | "cg_max_iterations" => {
                let (mut tol, mut max) = match r.solver {
                    Some(SolverKind::Cg { tolerance, max_iterations }) => (tolerance, max_iterations),
                    _ => (1e-8, 20_000),
                };
                if k == "cg_tolerance" {
                    tol = parse(origin, k, value)?;
                } else {
                    max = parse(origin, k, value)?;
                }
                r.solver = Some(SolverKind::Cg { tolerance: tol, max_iterations: max });
            }
            "e0" => r.material.e0 = parse(origin, k, value)?,
            "emin" => r.material.e_min = parse(origin, k, value)?,
            "nu" => r.material.nu = parse(origin, k, value)?,
            "max_size_designs" => {
                r.max_size_designs = Some(parse_designs(value).map_err(|m| Error::config(origin, m))?);
            }
            "gap_designs" => r.gap_designs = Some(parse_designs(value).map_err(|m| Error::config(origin, m))?),
            "iterations_per_stage" => r.schedule.iterations_per_stage = parse(origin, k, value)?,
            "tolerance" => r.schedule.tolerance = parse(origin, k, value)?,
            "noise" => r.initial_noise = parse(origin, k, value)?,
            "volume_update_interval" => r.volume_update_interval = parse(origin, k, value)?,
            "max_size_epsilon" => r.max_size_epsilon = parse(origin, k, value)?,
            "max_size_exponent" => r.max_size_exponent = parse(origin, k, value)?,
            "gap_exponent" => r.gap_exponent = parse(origin, k, value)?,
            "spring_in" => r.springs.input = parse(origin, k, value)?,
            "spring_out" => r.springs.output = parse(origin, k, value)?,
            _ => return Err(Error::config(origin, format!("unknown key `{k}`"))),
        }
        Ok(())
    }

    /// Applies every assignment in `text`.
    pub fn apply_text(&mut self, name: &str, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{name}:{}", n + 1);
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(&origin, format!("expected key = value, got `{line}`")))?;
            self.apply(&origin, k, v)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut s = Settings::default();
        s.apply_text(&path.display().to_string(), &text)?;
        Ok(s)
    }

    /// Fills grid dimensions from the preset defaults and returns the
    /// configuration handed to the core library.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut run = self.run.clone();
        if self.nx.is_some() || self.ny.is_some() || self.nz.is_some() {
            let d = run.preset.default_dims();
            let nz_default = if run.preset.ndim() == 2 { 1 } else { d[2] };
            run.dims = Some([self.nx.unwrap_or(d[0]), self.ny.unwrap_or(d[1]), self.nz.unwrap_or(nz_default)]);
        }
        lenscale_core::fem::Material::new(run.material.e0, run.material.e_min, run.material.nu, run.material.penal)?;
        if run.thresholds.is_some() != run.r_fil.is_some() {
            return Err(Error::config("settings", "thresholds and rfil must be given together"));
        }
        Ok(run)
    }
}
