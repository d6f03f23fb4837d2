//! Machine-readable run summary.

use serde::Serialize;

use lenscale_core::optimizer::{IterationRecord, RunOutcome, Termination};
use lenscale_core::verifier::{Tolerances, VerificationReport, VerifyTargets};
use lenscale_core::{Design, OptProblem};

/// One value per design, absent where the design carries no such quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerDesign<T> {
    pub ero: T,
    pub int: T,
    pub dil: T,
}

impl<T: Copy> PerDesign<T> {
    pub fn from_slots(s: [T; 3]) -> Self {
        Self { ero: s[0], int: s[1], dil: s[2] }
    }

    pub fn get(&self, d: Design) -> T {
        match d {
            Design::Eroded => self.ero,
            Design::Intermediate => self.int,
            Design::Dilated => self.dil,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalesSummary {
    pub thresholds: [f64; 3],
    pub r_fil: f64,
    pub r_min_solid: f64,
    pub r_min_void: f64,
    pub t_ero: f64,
    pub t_dil: f64,
    pub r_max: Option<f64>,
    pub gap: Option<f64>,
    pub feasibility_margin: Option<f64>,
    /// Present when a maximum size is set and the minimum sizes rule it out.
    pub infeasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSwitch {
    pub iteration: usize,
    pub move_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxSizeSummary {
    pub aggregate: f64,
    pub worst_local: f64,
    pub worst_boundary: f64,
    pub worst_interior: f64,
    pub violating_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    pub gap: f64,
    pub cells: [usize; 2],
}

/// Verifier results for one design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub cells: usize,
    pub solid_fraction: f64,
    pub gray_level: f64,
    pub min_solid_violation: f64,
    pub min_void_violation: f64,
    pub max_size: Option<MaxSizeSummary>,
    pub min_gap: Option<GapSummary>,
    pub solid_components: usize,
    pub closed_cavities: usize,
    pub thickness_boundary: f64,
    pub thickness_interior: f64,
    pub violations: Vec<String>,
}

impl ReportSummary {
    pub fn new(r: &VerificationReport, targets: &VerifyTargets, tol: &Tolerances) -> Self {
        Self {
            cells: r.cells,
            solid_fraction: r.solid_fraction,
            gray_level: r.gray_level,
            min_solid_violation: r.solid_violation,
            min_void_violation: r.void_violation,
            max_size: r.max_size.map(|m| MaxSizeSummary {
                aggregate: m.aggregate,
                worst_local: m.worst_local,
                worst_boundary: m.worst_boundary,
                worst_interior: m.worst_interior,
                violating_cells: m.violating_cells,
            }),
            min_gap: r.gap.map(|g| GapSummary { gap: g.gap, cells: [g.cells.0, g.cells.1] }),
            solid_components: r.solid_components,
            closed_cavities: r.closed_cavities,
            thickness_boundary: r.thickness.boundary_max,
            thickness_interior: r.thickness.interior_max,
            violations: r.violations(targets, tol).iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub problem: String,
    pub dims: [usize; 3],
    pub elements: usize,
    pub boundary: String,
    pub seed: u64,
    pub scales: ScalesSummary,
    pub objectives: Vec<String>,
    pub termination: String,
    pub iterations: usize,
    pub final_objective: PerDesign<Option<f64>>,
    pub volume_intermediate: f64,
    pub volume_dilated: f64,
    pub dilated_bound: f64,
    pub volume_constraint: f64,
    pub max_size: PerDesign<Option<f64>>,
    pub min_gap: PerDesign<Option<f64>>,
    pub gap_deactivated: Option<GapSwitch>,
    pub gray_level: PerDesign<f64>,
    /// Verifier report on the intermediate design.
    pub verification: ReportSummary,
    pub files: Vec<String>,
}

impl RunSummary {
    pub fn new(
        problem: &OptProblem,
        config: &lenscale_core::RunConfig,
        outcome: &RunOutcome,
        report: ReportSummary,
        files: Vec<String>,
    ) -> Self {
        let s = &problem.scales;
        let f: &IterationRecord = &outcome.final_record;
        let gray = |d: Design| lenscale_core::fields::gray_level(outcome.designs.get(d));
        Self {
            problem: problem.preset.name().to_string(),
            dims: problem.grid.dims(),
            elements: problem.grid.element_count(),
            boundary: format!("{:?}", problem.filter.treatment()).to_lowercase(),
            seed: config.seed,
            scales: ScalesSummary {
                thresholds: s.thresholds.as_array(),
                r_fil: s.r_fil,
                r_min_solid: s.r_min_solid,
                r_min_void: s.r_min_void,
                t_ero: s.offsets.eroded,
                t_dil: s.offsets.dilated,
                r_max: s.r_max,
                gap: s.gap,
                feasibility_margin: s.feasibility_margin,
                infeasible: s.feasibility_margin.is_some_and(|m| m < 0.0),
            },
            objectives: problem.objectives.iter().map(|d| d.name().to_string()).collect(),
            termination: match outcome.termination {
                Termination::Converged => "converged",
                Termination::IterationCap => "iteration_cap",
            }
            .to_string(),
            iterations: outcome.history.len(),
            final_objective: PerDesign::from_slots(f.objectives),
            volume_intermediate: f.volume_intermediate,
            volume_dilated: f.volume_dilated,
            dilated_bound: f.dilated_bound,
            volume_constraint: f.volume_dilated / f.dilated_bound - 1.0,
            max_size: PerDesign::from_slots(f.max_size),
            min_gap: PerDesign::from_slots(f.min_gap),
            gap_deactivated: outcome.gap_deactivated.map(|(iteration, move_limit)| GapSwitch { iteration, move_limit }),
            gray_level: PerDesign {
                ero: gray(Design::Eroded),
                int: gray(Design::Intermediate),
                dil: gray(Design::Dilated),
            },
            verification: report,
            files,
        }
    }
}
