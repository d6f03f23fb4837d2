//! Benchmark presets and assembly of a complete optimization problem.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::calibrate::{measure_1d, resolve_targets, MEASURE_BETA};
use crate::constraints::{check_feasibility, feasibility_margin, scale_max_size, scale_min_gap, DesignOffsets};
use crate::error::{Error, Result};
use crate::fem::{FemModel, LoadCase, Material, Mesh, ObjectiveKind, SolverKind};
use crate::fields::{Design, ThresholdSet};
use crate::grid::{Axis, Face, GridSpec, SymmetryPlane};
use crate::math;
use crate::neighborhoods::{build_filter, build_region, BoundaryTreatment, NeighborhoodOperator, RegionSpec};
use crate::optimizer::Schedule;

/// Benchmark problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Half of a simply supported beam with a central load, 3L x L.
    Mbb2d,
    /// Half of a compliant force inverter, 2L x L.
    Inverter,
    /// Quarter of a three-dimensional beam.
    Mbb3d,
}

impl Preset {
    pub fn default_dims(self) -> [usize; 3] {
        match self {
            Preset::Mbb2d => [300, 100, 1],
            Preset::Inverter => [240, 140, 1],
            Preset::Mbb3d => [96, 16, 32],
        }
    }

    pub fn default_volume_fraction(self) -> f64 {
        match self {
            Preset::Mbb2d | Preset::Mbb3d => 0.4,
            Preset::Inverter => 0.25,
        }
    }

    pub fn ndim(self) -> usize {
        match self {
            Preset::Mbb3d => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Mbb2d => "mbb2d",
            Preset::Inverter => "inverter",
            Preset::Mbb3d => "mbb3d",
        }
    }
}

impl core::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mbb2d" => Ok(Preset::Mbb2d),
            "inverter" => Ok(Preset::Inverter),
            "mbb3d" => Ok(Preset::Mbb3d),
            other => Err(Error::InvalidConfig(format!("unknown problem `{other}` (mbb2d, inverter, mbb3d)"))),
        }
    }
}

/// Springs of the inverter preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Springs {
    pub input: f64,
    pub output: f64,
}

impl Default for Springs {
    fn default() -> Self {
        Self { input: 1.0, output: 1e-3 }
    }
}

/// Everything needed to set up a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub dims: Option<[usize; 3]>,
    pub volume_fraction: Option<f64>,
    pub r_min_solid: f64,
    pub void_ratio: u32,
    /// Explicit thresholds; requires `r_fil`. Offsets are then measured.
    pub thresholds: Option<ThresholdSet>,
    pub r_fil: Option<f64>,
    pub r_max: Option<f64>,
    pub gap: Option<f64>,
    pub material: Material,
    pub solver: Option<SolverKind>,
    pub boundary: BoundaryTreatment,
    /// Designs carrying a maximum-size constraint; `None` picks automatically.
    pub max_size_designs: Option<Vec<Design>>,
    /// Designs carrying a minimum-gap constraint; `None` picks automatically.
    pub gap_designs: Option<Vec<Design>>,
    pub strict_feasibility: bool,
    pub schedule: Schedule,
    pub max_size_epsilon: f64,
    pub max_size_exponent: f64,
    pub gap_exponent: f64,
    pub springs: Springs,
    pub seed: u64,
    pub initial_noise: f64,
    pub volume_update_interval: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::for_preset(Preset::Mbb2d)
    }
}

impl RunConfig {
    pub fn for_preset(preset: Preset) -> Self {
        Self {
            preset,
            dims: None,
            volume_fraction: None,
            r_min_solid: 3.0,
            void_ratio: 1,
            thresholds: None,
            r_fil: None,
            r_max: None,
            gap: None,
            material: Material::default(),
            solver: None,
            boundary: BoundaryTreatment::Corrected,
            max_size_designs: None,
            gap_designs: None,
            strict_feasibility: false,
            schedule: Schedule::default(),
            max_size_epsilon: 0.05,
            max_size_exponent: 100.0,
            gap_exponent: 60.0,
            springs: Springs::default(),
            seed: 0,
            initial_noise: 0.0,
            volume_update_interval: 10,
        }
    }

    pub fn resolved_dims(&self) -> [usize; 3] {
        self.dims.unwrap_or_else(|| self.preset.default_dims())
    }

    pub fn resolved_volume_fraction(&self) -> f64 {
        self.volume_fraction.unwrap_or_else(|| self.preset.default_volume_fraction())
    }
}

/// Edge length of the solid pads at loads and supports. The eroded design
/// loses about half a filter radius along free edges, so pads grow with it.
pub fn pad_size(preset: Preset, dims: [usize; 3], r_fil: f64) -> usize {
    let from_filter = math::ceil(r_fil / 2.0) as usize;
    let from_grid = match preset {
        Preset::Mbb2d => dims[1] / 25,
        Preset::Inverter => dims[1] / 35,
        Preset::Mbb3d => dims[2] / 25,
    };
    from_filter.max(from_grid).max(1)
}

/// Builds the grid and load case of a preset with solid pads of edge `pad`.
pub fn preset(preset: Preset, dims: [usize; 3], springs: Springs, pad: usize) -> Result<(GridSpec, LoadCase)> {
    let [nx, ny, nz] = dims;
    match preset {
        Preset::Mbb2d => {
            // Solid pads under the load and over the roller.
            let pad = pad.max(1).min(nx).min(ny);
            let mut solid = Vec::new();
            for iy in 0..pad {
                for ix in 0..pad {
                    solid.push(ix + nx * (ny - 1 - iy));
                    solid.push((nx - 1 - ix) + nx * iy);
                }
            }
            solid.sort_unstable();
            solid.dedup();
            let grid = GridSpec::new_2d(nx, ny)?
                .with_symmetry(SymmetryPlane::new(Axis::X, Face::Low))?
                .with_fixed(solid, Vec::new())?;
            let mesh = Mesh::new(&grid)?;
            let mut lc = LoadCase::new(mesh.dof_count());
            for iy in 0..=ny {
                lc.fixed.push(mesh.dof(mesh.node(0, iy, 0), 0));
            }
            lc.fixed.push(mesh.dof(mesh.node(nx, 0, 0), 1));
            lc.forces[mesh.dof(mesh.node(0, ny, 0), 1)] = -1.0;
            Ok((grid, lc))
        }
        Preset::Inverter => {
            let pad = pad.max(1);
            let mut solid = Vec::new();
            for iy in 0..pad.min(ny) {
                for ix in 0..pad.min(nx) {
                    solid.push(ix + nx * iy);
                    solid.push((nx - 1 - ix) + nx * iy);
                }
            }
            solid.sort_unstable();
            solid.dedup();
            let grid = GridSpec::new_2d(nx, ny)?
                .with_symmetry(SymmetryPlane::new(Axis::Y, Face::Low))?
                .with_fixed(solid, Vec::new())?;
            let mesh = Mesh::new(&grid)?;
            let mut lc = LoadCase::new(mesh.dof_count());
            for ix in 0..=nx {
                lc.fixed.push(mesh.dof(mesh.node(ix, 0, 0), 1));
            }
            let support = (ny / 14).max(1);
            for iy in ny.saturating_sub(support)..=ny {
                let n = mesh.node(0, iy, 0);
                lc.fixed.push(mesh.dof(n, 0));
                lc.fixed.push(mesh.dof(n, 1));
            }
            lc.fixed.sort_unstable();
            lc.fixed.dedup();
            let input = mesh.dof(mesh.node(0, 0, 0), 0);
            let output = mesh.dof(mesh.node(nx, 0, 0), 0);
            lc.forces[input] = 1.0;
            lc.springs.push((input, springs.input));
            lc.springs.push((output, springs.output));
            let mut t = vec![0.0; mesh.dof_count()];
            t[output] = 1.0;
            lc.objective = ObjectiveKind::Output(t);
            Ok((grid, lc))
        }
        Preset::Mbb3d => {
            let pad = pad.max(1).min(nx).min(nz);
            let mut solid = Vec::new();
            for iy in 0..ny {
                for k in 0..pad {
                    for ix in 0..pad {
                        solid.push(ix + nx * (iy + ny * (nz - 1 - k)));
                        solid.push((nx - 1 - ix) + nx * (iy + ny * k));
                    }
                }
            }
            solid.sort_unstable();
            solid.dedup();
            let grid = GridSpec::new_3d(nx, ny, nz)?
                .with_symmetry(SymmetryPlane::new(Axis::X, Face::Low))?
                .with_symmetry(SymmetryPlane::new(Axis::Y, Face::Low))?
                .with_fixed(solid, Vec::new())?;
            let mesh = Mesh::new(&grid)?;
            let mut lc = LoadCase::new(mesh.dof_count());
            for iz in 0..=nz {
                for iy in 0..=ny {
                    lc.fixed.push(mesh.dof(mesh.node(0, iy, iz), 0));
                }
                for ix in 0..=nx {
                    lc.fixed.push(mesh.dof(mesh.node(ix, 0, iz), 1));
                }
            }
            for iy in 0..=ny {
                lc.fixed.push(mesh.dof(mesh.node(nx, iy, 0), 2));
                lc.forces[mesh.dof(mesh.node(0, iy, nz), 2)] = -1.0 / (ny + 1) as f64;
            }
            lc.fixed.sort_unstable();
            lc.fixed.dedup();
            Ok((grid, lc))
        }
    }
}

/// An aggregated local-volume constraint on one design.
#[derive(Debug, Clone)]
pub struct RegionConstraint {
    pub design: Design,
    pub region: RegionSpec,
    pub operator: NeighborhoodOperator,
    pub epsilon: f64,
    pub exponent: f64,
    /// Extra target value carried for reporting (the gap for gap regions).
    pub gap: Option<f64>,
}

/// Length scales after resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthScales {
    pub thresholds: ThresholdSet,
    pub r_fil: f64,
    pub r_min_solid: f64,
    pub r_min_void: f64,
    pub offsets: DesignOffsets,
    pub r_max: Option<f64>,
    pub gap: Option<f64>,
    /// Margin of the size compatibility condition, when a maximum is set.
    pub feasibility_margin: Option<f64>,
}

impl LengthScales {
    /// Inner radius of the maximum-size and gap rings. It is the void
    /// minimum size, capped by the solid one so the ring stays non-empty
    /// when cavities are required to be larger than the maximum member.
    pub fn ring_inner(&self) -> f64 {
        self.r_min_void.min(self.r_min_solid)
    }
}

/// A fully assembled robust problem.
#[derive(Debug, Clone)]
pub struct OptProblem {
    pub preset: Preset,
    pub grid: GridSpec,
    pub filter: NeighborhoodOperator,
    pub fem: FemModel,
    pub material: Material,
    pub objectives: Vec<Design>,
    pub volume_fraction: f64,
    pub scales: LengthScales,
    pub max_size: Vec<RegionConstraint>,
    pub min_gap: Vec<RegionConstraint>,
    pub schedule: Schedule,
    pub seed: u64,
    pub initial_noise: f64,
    pub volume_update_interval: usize,
}

impl OptProblem {
    /// Number of inequality constraints when every constraint is active.
    pub fn constraint_count(&self) -> usize {
        1 + self.max_size.len() + self.min_gap.len()
    }
}

fn default_designs(scales: &LengthScales) -> Vec<Design> {
    // The eroded restriction is dropped when the eroded offset is below one
    // element or the thresholds are not evenly spaced.
    if scales.offsets.eroded >= 1.0 && scales.thresholds.is_symmetric() {
        Design::ALL.to_vec()
    } else {
        vec![Design::Intermediate, Design::Dilated]
    }
}

fn resolve_scales(config: &RunConfig) -> Result<LengthScales> {
    let (thresholds, r_fil, r_min_solid, r_min_void, offsets) = match (config.thresholds, config.r_fil) {
        (Some(t), Some(r_fil)) => {
            let rep = measure_1d(&t, r_fil, MEASURE_BETA)?;
            let offsets = DesignOffsets { eroded: rep.t_ero().max(0.0), dilated: rep.t_dil().max(0.0) };
            (t, r_fil, rep.r_min_solid(), rep.r_min_void(), offsets)
        }
        (None, None) => {
            let t = resolve_targets(config.r_min_solid, config.void_ratio)?;
            (t.thresholds, t.r_fil, t.r_min_solid, t.r_min_void, t.offsets)
        }
        _ => {
            return Err(Error::InvalidConfig("explicit thresholds and filter radius must be given together".into()));
        }
    };
    let margin = match config.r_max {
        Some(r_max) => {
            if config.strict_feasibility {
                check_feasibility(r_max, r_min_void, r_min_solid)?;
            }
            Some(feasibility_margin(r_max, r_min_void, r_min_solid))
        }
        None => None,
    };
    if config.gap.is_some() && config.r_max.is_none() {
        return Err(Error::InvalidConfig("a minimum gap needs a maximum size".into()));
    }
    Ok(LengthScales {
        thresholds,
        r_fil,
        r_min_solid,
        r_min_void,
        offsets,
        r_max: config.r_max,
        gap: config.gap,
        feasibility_margin: margin,
    })
}

/// Resolves a configuration into operators, FEM model and constraints.
pub fn assemble_problem(config: &RunConfig) -> Result<OptProblem> {
    let vf = config.resolved_volume_fraction();
    if !(vf > 0.0 && vf < 1.0) {
        return Err(Error::InvalidConfig(format!("volume fraction {vf} outside (0, 1)")));
    }
    if config.preset.ndim() == 2 && config.dims.is_some_and(|d| d[2] != 1) {
        return Err(Error::InvalidConfig("2D problems take nz = 1".into()));
    }
    let dims = config.resolved_dims();
    let scales = resolve_scales(config)?;
    let pad = pad_size(config.preset, dims, scales.r_fil);
    let (grid, load) = preset(config.preset, dims, config.springs, pad)?;
    let filter = build_filter(&grid, scales.r_fil, config.boundary)?;
    let solver = config.solver.unwrap_or_else(|| SolverKind::default_for(grid.ndim()));
    let fem = FemModel::new(&grid, load, solver, config.material.nu)?;

    let mut max_size = Vec::new();
    if let Some(r_max) = scales.r_max {
        let designs = config.max_size_designs.clone().unwrap_or_else(|| default_designs(&scales));
        for d in designs {
            let region = scale_max_size(r_max, scales.ring_inner(), scales.offsets, d)?;
            max_size.push(RegionConstraint {
                design: d,
                region,
                operator: build_region(&grid, region, config.boundary)?,
                epsilon: config.max_size_epsilon,
                exponent: config.max_size_exponent,
                gap: None,
            });
        }
    }
    let mut min_gap = Vec::new();
    if let (Some(gap), Some(r_max)) = (scales.gap, scales.r_max) {
        let designs = config.gap_designs.clone().unwrap_or_else(|| default_designs(&scales));
        for d in designs {
            let g = scale_min_gap(gap, scales.ring_inner(), r_max, scales.offsets, d, grid.ndim())?;
            min_gap.push(RegionConstraint {
                design: d,
                region: g.region,
                operator: build_region(&grid, g.region, config.boundary)?,
                epsilon: g.epsilon,
                exponent: config.gap_exponent,
                gap: Some(g.gap),
            });
        }
    }
    let objectives = match config.preset {
        Preset::Mbb2d | Preset::Mbb3d => vec![Design::Eroded],
        Preset::Inverter => vec![Design::Eroded, Design::Dilated],
    };
    Ok(OptProblem {
        preset: config.preset,
        grid,
        filter,
        fem,
        material: config.material,
        objectives,
        volume_fraction: vf,
        scales,
        max_size,
        min_gap,
        schedule: config.schedule,
        seed: config.seed,
        initial_noise: config.initial_noise,
        volume_update_interval: config.volume_update_interval.max(1),
    })
}
