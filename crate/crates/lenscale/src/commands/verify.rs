//! Optimizer-independent length-scale checks on a density file.

use std::fmt::Write as _;
use std::path::Path;

use lenscale_core::constraints::scale_max_size;
use lenscale_core::grid::{Axis, Face, SymmetryPlane};
use lenscale_core::verifier::{self, Tolerances, VerificationReport, VerifyTargets};
use lenscale_core::{Design, GridSpec, OptProblem, Preset, RegionSpec};

use crate::error::{Error, Result};
use crate::io::{read_field, Field};

/// Width of the band along the boundary for a given maximum member radius.
pub fn boundary_band(r_min_solid: f64, r_max: Option<f64>) -> f64 {
    2.0 * r_max.unwrap_or(r_min_solid)
}

/// Targets implied by an assembled problem, for its intermediate design.
pub fn targets_for_problem(problem: &OptProblem) -> Result<VerifyTargets> {
    let s = &problem.scales;
    let max_size = match s.r_max {
        Some(r) => Some(scale_max_size(r, s.ring_inner(), s.offsets, Design::Intermediate)?),
        None => None,
    };
    Ok(VerifyTargets {
        r_min_solid: s.r_min_solid,
        r_min_void: s.r_min_void,
        max_size,
        gap: s.gap,
        boundary_band: boundary_band(s.r_min_solid, s.r_max),
    })
}

/// Symmetry planes of each preset's reduced domain.
pub fn preset_symmetry(preset: Preset) -> Vec<SymmetryPlane> {
    match preset {
        Preset::Mbb2d => vec![SymmetryPlane::new(Axis::X, Face::Low)],
        Preset::Inverter => vec![SymmetryPlane::new(Axis::Y, Face::Low)],
        Preset::Mbb3d => vec![SymmetryPlane::new(Axis::X, Face::Low), SymmetryPlane::new(Axis::Y, Face::Low)],
    }
}

/// Parses `x-low`, `y-high` and the like.
pub fn parse_plane(s: &str) -> std::result::Result<SymmetryPlane, String> {
    let (a, f) = s.trim().split_once('-').ok_or_else(|| format!("`{s}`: expected AXIS-FACE such as x-low"))?;
    let axis = match a {
        "x" => Axis::X,
        "y" => Axis::Y,
        "z" => Axis::Z,
        _ => return Err(format!("`{s}`: unknown axis `{a}`")),
    };
    let face = match f {
        "low" => Face::Low,
        "high" => Face::High,
        _ => return Err(format!("`{s}`: unknown face `{f}`")),
    };
    Ok(SymmetryPlane::new(axis, face))
}

pub fn grid_for(field: &Field, planes: &[SymmetryPlane]) -> Result<GridSpec> {
    let [nx, ny, nz] = field.dims;
    let mut g = if field.is_2d() { GridSpec::new_2d(nx, ny)? } else { GridSpec::new_3d(nx, ny, nz)? };
    for &p in planes {
        g = g.with_symmetry(p)?;
    }
    Ok(g)
}

/// Everything the `verify` subcommand needs besides the file.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRequest {
    pub planes: Vec<SymmetryPlane>,
    pub r_min_solid: f64,
    pub r_min_void: f64,
    pub r_max: Option<f64>,
    /// Inner radius of the maximum-size ring; defaults to the smaller
    /// minimum size.
    pub ring_inner: Option<f64>,
    pub gap: Option<f64>,
    pub band: Option<f64>,
    pub tolerances: Tolerances,
}

impl VerifyRequest {
    pub fn targets(&self) -> Result<VerifyTargets> {
        let max_size = match self.r_max {
            Some(r) => Some(RegionSpec::new(self.ring_inner.unwrap_or(self.r_min_void.min(self.r_min_solid)), r)?),
            None => None,
        };
        Ok(VerifyTargets {
            r_min_solid: self.r_min_solid,
            r_min_void: self.r_min_void,
            max_size,
            gap: self.gap,
            boundary_band: self.band.unwrap_or_else(|| boundary_band(self.r_min_solid, self.r_max)),
        })
    }
}

fn coords(grid: &GridSpec, e: usize) -> String {
    let c = grid.coords(e);
    if grid.ndim() == 2 {
        format!("({}, {})", c[0], c[1])
    } else {
        format!("({}, {}, {})", c[0], c[1], c[2])
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}

/// Human-readable `key: value` report.
pub fn format_report(
    name: &str,
    grid: &GridSpec,
    report: &VerificationReport,
    targets: &VerifyTargets,
    tol: &Tolerances,
) -> String {
    let (full, _) = grid.unfolded();
    let mut s = String::new();
    let _ = writeln!(s, "file: {name}");
    let _ = writeln!(s, "grid: {:?} (unfolded {:?})", grid.dims(), full.dims());
    let _ = writeln!(s, "solid_fraction: {:.6}", report.solid_fraction);
    let _ = writeln!(s, "gray_level: {:.6}", report.gray_level);
    let _ = writeln!(
        s,
        "min_solid: radius {:.3}, removed {:.6} (limit {:.3}) {}",
        targets.r_min_solid,
        report.solid_violation,
        tol.morphology,
        status(report.solid_violation <= tol.morphology)
    );
    let _ = writeln!(
        s,
        "min_void: radius {:.3}, removed {:.6} (limit {:.3}) {}",
        targets.r_min_void,
        report.void_violation,
        tol.morphology,
        status(report.void_violation <= tol.morphology)
    );
    match (report.max_size, targets.max_size) {
        (Some(m), Some(region)) => {
            let _ = writeln!(
                s,
                "max_size: ring [{:.3}, {:.3}], aggregate {:.6}, worst local {:.6} (boundary {:.6}, interior {:.6}), \
                 {} cell(s) over (limit {:.3}) {}",
                region.r_inner,
                region.r_outer,
                m.aggregate,
                m.worst_local,
                m.worst_boundary,
                m.worst_interior,
                m.violating_cells,
                tol.max_size_local,
                status(m.worst_local <= tol.max_size_local)
            );
        }
        _ => {
            let _ = writeln!(s, "max_size: not checked");
        }
    }
    match (targets.gap, report.gap) {
        (Some(target), Some(g)) => {
            let _ = writeln!(
                s,
                "min_gap: target {:.3}, closest members {:.3} apart at {} and {} {}",
                target,
                g.gap,
                coords(&full, g.cells.0),
                coords(&full, g.cells.1),
                status(g.gap >= target - tol.gap_slack)
            );
        }
        (Some(target), None) => {
            let _ = writeln!(s, "min_gap: target {target:.3}, no two members within search range ok");
        }
        (None, _) => {
            let _ = writeln!(s, "min_gap: not checked");
        }
    }
    let _ = writeln!(s, "solid_components: {}", report.solid_components);
    let _ = writeln!(s, "closed_cavities: {}", report.closed_cavities);
    let _ = writeln!(
        s,
        "thickness: boundary band {:.2}, boundary max {:.3}, interior max {:.3}",
        targets.boundary_band, report.thickness.boundary_max, report.thickness.interior_max
    );
    let v = report.violations(targets, tol);
    if v.is_empty() {
        let _ = writeln!(s, "result: pass");
    } else {
        let _ = writeln!(s, "result: fail ({} violation(s))", v.len());
    }
    s
}

/// Reads `path`, checks it and returns the report text. A failed check is
/// returned as `Error::Violations` after the text has been handed to `out`.
pub fn execute(path: &Path, request: &VerifyRequest, out: &mut dyn std::io::Write) -> Result<VerificationReport> {
    let field = read_field(path)?;
    let grid = grid_for(&field, &request.planes)?;
    let targets = request.targets()?;
    let report = verifier::measure(&grid, &field.values, &targets)?;
    let text = format_report(&path.display().to_string(), &grid, &report, &targets, &request.tolerances);
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))?;
    let count = report.violations(&targets, &request.tolerances).len();
    if count > 0 {
        return Err(Error::Violations { count });
    }
    Ok(report)
}
