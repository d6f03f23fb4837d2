//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lenscale_core::verifier::Tolerances;
use lenscale_core::Preset;

use crate::commands::calibrate::{linspace, CalibrationJob};
use crate::commands::verify::{parse_plane, preset_symmetry, VerifyRequest};
use crate::commands::{calibrate, run, verify};
use crate::config::{parse_thresholds, Settings};
use crate::error::{exit, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "lenscale", version, about = "Robust topology optimization with length-scale control")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an optimization and write designs, history and summary.
    Run(RunArgs),
    /// Measure the sizes a filter radius and thresholds impose in 1D.
    Calibrate(CalibrateArgs),
    /// Check a density file against length-scale targets.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Settings file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// mbb2d, inverter or mbb3d.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub nz: Option<usize>,
    #[arg(long)]
    pub volfrac: Option<f64>,
    /// Solid minimum size (radius, elements).
    #[arg(long)]
    pub rmin: Option<f64>,
    /// Void-to-solid minimum size ratio: 1, 2 or 3.
    #[arg(long)]
    pub void_ratio: Option<u32>,
    /// Maximum member radius.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Minimum gap between members.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Explicit thresholds `ero,int,dil`; needs --rfil.
    #[arg(long)]
    pub thresholds: Option<String>,
    #[arg(long)]
    pub rfil: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fail with exit code 4 when the length scales are incompatible.
    #[arg(long)]
    pub strict: bool,
    /// corrected or raw.
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    /// Any settings key, as KEY=VALUE. Repeatable; applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Suppress progress messages.
    #[arg(long, short)]
    pub quiet: bool,
}

impl RunArgs {
    pub fn settings(&self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let flags: [(&str, Option<String>); 16] = [
            ("problem", self.problem.clone()),
            ("nx", self.nx.map(|v| v.to_string())),
            ("ny", self.ny.map(|v| v.to_string())),
            ("nz", self.nz.map(|v| v.to_string())),
            ("volfrac", self.volfrac.map(|v| v.to_string())),
            ("rmin", self.rmin.map(|v| v.to_string())),
            ("void_ratio", self.void_ratio.map(|v| v.to_string())),
            ("rmax", self.rmax.map(|v| v.to_string())),
            ("gap", self.gap.map(|v| v.to_string())),
            ("thresholds", self.thresholds.clone()),
            ("rfil", self.rfil.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("strict", self.strict.then(|| "true".to_string())),
            ("boundary", self.boundary.clone()),
            ("snapshot_every", self.snapshot_every.map(|v| v.to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                s.apply(&format!("--{}", k.replace('_', "-")), k, &v)?;
            }
        }
        for kv in &self.set {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| Error::config("--set", format!("expected KEY=VALUE, got `{kv}`")))?;
            s.apply("--set", k, v)?;
        }
        Ok(s)
    }
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Thresholds `ero,int,dil` for a single measurement.
    #[arg(long, conflicts_with_all = ["void_ratio", "sweep"])]
    pub thresholds: Option<String>,
    /// Filter radius for single measurements and sweeps.
    #[arg(long, default_value_t = 20.0)]
    pub rfil: f64,
    /// Measure the tabulated setting for this void-to-solid ratio.
    #[arg(long, conflicts_with = "sweep")]
    pub void_ratio: Option<u32>,
    /// Solid minimum size used with --void-ratio.
    #[arg(long, default_value_t = 10.0)]
    pub rmin: f64,
    /// symmetric (sweeps the threshold spread) or intermediate.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub from: f64,
    #[arg(long, default_value_t = 0.45)]
    pub to: f64,
    #[arg(long, default_value_t = 9)]
    pub steps: usize,
    /// Eroded threshold for intermediate sweeps.
    #[arg(long, default_value_t = 0.75)]
    pub eroded: f64,
    /// Dilated threshold for intermediate sweeps.
    #[arg(long, default_value_t = 0.25)]
    pub dilated: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CalibrateArgs {
    pub fn job(&self) -> Result<CalibrationJob> {
        if let Some(t) = &self.thresholds {
            let thresholds = parse_thresholds(t).map_err(|m| Error::config("--thresholds", m))?;
            return Ok(CalibrationJob::Single { thresholds, r_fil: self.rfil });
        }
        if let Some(ratio) = self.void_ratio {
            return Ok(CalibrationJob::Ratio { ratio, r_min_solid: self.rmin });
        }
        let values = linspace(self.from, self.to, self.steps);
        match self.sweep.as_deref() {
            Some("symmetric") | None => Ok(CalibrationJob::Symmetric { deltas: values, r_fil: self.rfil }),
            Some("intermediate") => Ok(CalibrationJob::Intermediate {
                mu_int: values,
                eroded: self.eroded,
                dilated: self.dilated,
                r_fil: self.rfil,
            }),
            Some(other) => Err(Error::config("--sweep", format!("unknown sweep `{other}` (symmetric, intermediate)"))),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Density file, `.pgm` or `.vtk`.
    pub input: PathBuf,
    /// Take symmetry planes from this preset.
    #[arg(long)]
    pub problem: Option<String>,
    /// Symmetry planes such as `x-low`; repeatable.
    #[arg(long)]
    pub symmetry: Vec<String>,
    #[arg(long)]
    pub rmin: f64,
    /// Void minimum size; defaults to --rmin.
    #[arg(long)]
    pub rmin_void: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Inner radius of the maximum-size ring.
    #[arg(long)]
    pub ring_inner: Option<f64>,
    #[arg(long)]
    pub gap: Option<f64>,
    /// Width of the boundary band for the thickness split.
    #[arg(long)]
    pub band: Option<f64>,
    /// Share of a phase the opening may remove.
    #[arg(long, default_value_t = Tolerances::default().morphology)]
    pub tol_morphology: f64,
    /// Largest allowed local maximum-size value.
    #[arg(long, default_value_t = Tolerances::default().max_size_local)]
    pub tol_max_size: f64,
    /// Elements by which the gap may fall short.
    #[arg(long, default_value_t = Tolerances::default().gap_slack)]
    pub gap_slack: f64,
}

impl VerifyArgs {
    pub fn request(&self) -> Result<VerifyRequest> {
        let mut planes = match &self.problem {
            Some(p) => preset_symmetry(p.parse::<Preset>()?),
            None => Vec::new(),
        };
        for s in &self.symmetry {
            let p = parse_plane(s).map_err(|m| Error::config("--symmetry", m))?;
            if !planes.contains(&p) {
                planes.push(p);
            }
        }
        Ok(VerifyRequest {
            planes,
            r_min_solid: self.rmin,
            r_min_void: self.rmin_void.unwrap_or(self.rmin),
            r_max: self.rmax,
            ring_inner: self.ring_inner,
            gap: self.gap,
            band: self.band,
            tolerances: Tolerances {
                morphology: self.tol_morphology,
                max_size_local: self.tol_max_size,
                gap_slack: self.gap_slack,
            },
        })
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Run(a) => {
            let settings = a.settings()?;
            let mut sink = std::io::sink();
            let log: &mut dyn Write = if a.quiet { &mut sink } else { stderr };
            run::execute(&settings, log)?;
        }
        Command::Calibrate(a) => {
            let job = a.job()?;
            match &a.out {
                Some(path) => {
                    let mut buf = Vec::new();
                    calibrate::execute(&job, &mut buf)?;
                    std::fs::write(path, buf).map_err(|e| Error::io(path, e))?;
                }
                None => {
                    calibrate::execute(&job, stdout)?;
                }
            }
        }
        Command::Verify(a) => {
            verify::execute(&a.input, &a.request()?, stdout)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return exit::CONFIG;
            }
            let _ = write!(stdout, "{}", e.render());
            return exit::OK;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
