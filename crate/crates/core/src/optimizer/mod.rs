//! Robust optimization loop: continuation, move limits, min-max objectives
//! and the length-scale constraints.

pub mod mma;
mod schedule;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{aggregate_with_gradient, dilated_volume_bound};
use crate::error::{Error, Result};
use crate::fields::{chain_to_design, project_triple, Design, DesignTriple};
use crate::problem::{OptProblem, RegionConstraint};
pub use mma::{Evaluation, Mma, MmaSettings};
pub use schedule::{Schedule, Stage};

/// Gap restrictions with tolerances this large are switched off once the
/// continuation reaches the point below.
const GAP_EPSILON_LIMIT: f64 = 0.2;
const GAP_OFF_ETA: f64 = 2.0;
const GAP_OFF_BETA: f64 = 8.0;

/// One line of the convergence history.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub stage: usize,
    pub eta: f64,
    pub beta: f64,
    pub move_limit: f64,
    /// Objective value per design, where that design is an objective.
    pub objectives: [Option<f64>; 3],
    pub volume_intermediate: f64,
    pub volume_dilated: f64,
    pub dilated_bound: f64,
    pub max_size: [Option<f64>; 3],
    pub min_gap: [Option<f64>; 3],
    /// Largest design-variable change produced by this iteration's update.
    pub max_change: f64,
    pub gap_active: bool,
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Change fell below the tolerance in the final stage.
    Converged,
    /// Every stage used its full iteration budget.
    IterationCap,
}

/// Result of a complete run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub history: Vec<IterationRecord>,
    pub rho: Vec<f64>,
    pub filtered: Vec<f64>,
    pub designs: DesignTriple,
    /// Evaluation of the final design (no update applied).
    pub final_record: IterationRecord,
    pub termination: Termination,
    /// Iteration and move limit at which gap constraints were switched off.
    pub gap_deactivated: Option<(usize, f64)>,
}

/// Which inequality a constraint row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Volume,
    MaxSize(Design),
    MinGap(Design),
}

/// Responses and design-variable gradients at one point.
#[derive(Debug, Clone)]
pub struct Responses {
    pub record: IterationRecord,
    pub designs: DesignTriple,
    pub filtered: Vec<f64>,
    /// Unscaled objective value and gradient per objective design.
    pub objective_values: Vec<f64>,
    pub objective_grads: Vec<Vec<f64>>,
    pub constraint_kinds: Vec<ConstraintKind>,
    pub constraint_values: Vec<f64>,
    pub constraint_grads: Vec<Vec<f64>>,
}

fn slot_of(list: &[Design], d: Design) -> bool {
    list.contains(&d)
}

fn initial_density(problem: &OptProblem) -> Vec<f64> {
    let n = problem.grid.element_count();
    let vf = problem.volume_fraction;
    let mut rho = vec![vf; n];
    if problem.initial_noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
        for r in &mut rho {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            *r = (vf + problem.initial_noise * (u - 0.5)).clamp(0.0, 1.0);
        }
    }
    for &e in problem.grid.fixed_solid() {
        rho[e] = 1.0;
    }
    for &e in problem.grid.fixed_void() {
        rho[e] = 0.0;
    }
    rho
}

/// Fixed elements keep their phase in every projected design, so loads and
/// supports stay attached even where the filter sees void beyond the edge.
fn pin_designs(problem: &OptProblem, designs: &mut DesignTriple) {
    for field in [&mut designs.eroded, &mut designs.intermediate, &mut designs.dilated] {
        for &e in problem.grid.fixed_solid() {
            field[e] = 1.0;
        }
        for &e in problem.grid.fixed_void() {
            field[e] = 0.0;
        }
    }
}

fn clear_fixed(problem: &OptProblem, grad: &mut [f64]) {
    for &e in problem.grid.fixed_solid().iter().chain(problem.grid.fixed_void()) {
        grad[e] = 0.0;
    }
}

/// Evaluates objectives and constraints at `rho` under `stage`. With
/// `dilated_bound` unset, the bound is recomputed from the current volumes.
pub fn evaluate(
    p: &OptProblem,
    rho: &[f64],
    stage: &Stage,
    dilated_bound: Option<f64>,
    gap_active: bool,
    iteration: usize,
) -> Result<Responses> {
    let t = p.scales.thresholds;
    let (filtered, mut designs) = project_triple(rho, &p.filter, &t, stage.beta)?;
    pin_designs(p, &mut designs);
    let n = rho.len() as f64;
    let vol_int = designs.intermediate.iter().sum::<f64>() / n;
    let vol_dil = designs.dilated.iter().sum::<f64>() / n;
    let bound = match dilated_bound {
        Some(b) => b,
        None => dilated_volume_bound(p.volume_fraction, vol_dil, vol_int)?,
    };
    let material = p.material.with_penal(stage.eta);
    let mut record = IterationRecord {
        iteration,
        stage: stage.index,
        eta: stage.eta,
        beta: stage.beta,
        move_limit: stage.move_limit,
        objectives: [None; 3],
        volume_intermediate: vol_int,
        volume_dilated: vol_dil,
        dilated_bound: bound,
        max_size: [None; 3],
        min_gap: [None; 3],
        max_change: 0.0,
        gap_active,
    };

    let mut objective_values = Vec::new();
    let mut objective_grads = Vec::new();
    for &d in &p.objectives {
        let field = designs.get(d);
        let state = p.fem.solve_state(field, &material)?;
        if !state.objective.is_finite() {
            return Err(Error::OutOfRange(format!("objective of the {} design is not finite", d.name())));
        }
        let mut sens = p.fem.objective_sensitivity(&state, field, &material)?;
        clear_fixed(p, &mut sens);
        objective_grads.push(chain_to_design(&sens, &filtered, stage.beta, t.get(d), &p.filter)?);
        objective_values.push(state.objective);
        record.objectives[d.slot()] = Some(state.objective);
    }

    let mut constraint_kinds = vec![ConstraintKind::Volume];
    let mut constraint_values = vec![vol_dil / bound - 1.0];
    let mut unit = vec![1.0 / (n * bound); rho.len()];
    clear_fixed(p, &mut unit);
    let mut constraint_grads = vec![chain_to_design(&unit, &filtered, stage.beta, t.get(Design::Dilated), &p.filter)?];

    let mut add = |c: &RegionConstraint, q: f64, slot: &mut [Option<f64>; 3], kind: ConstraintKind| -> Result<()> {
        constraint_kinds.push(kind);
        let mut agg = aggregate_with_gradient(designs.get(c.design), &c.operator, c.epsilon, q, c.exponent)?;
        clear_fixed(p, &mut agg.gradient);
        slot[c.design.slot()] = Some(agg.value);
        constraint_values.push(agg.value);
        constraint_grads.push(chain_to_design(&agg.gradient, &filtered, stage.beta, t.get(c.design), &p.filter)?);
        Ok(())
    };
    for c in &p.max_size {
        add(c, stage.eta, &mut record.max_size, ConstraintKind::MaxSize(c.design))?;
    }
    if gap_active {
        for c in &p.min_gap {
            add(c, 1.0, &mut record.min_gap, ConstraintKind::MinGap(c.design))?;
        }
    }
    Ok(Responses {
        record,
        designs,
        filtered,
        objective_values,
        objective_grads,
        constraint_kinds,
        constraint_values,
        constraint_grads,
    })
}

/// Runs the full continuation. `observer` sees every iteration record and
/// the designs it was computed from.
pub fn run(problem: &OptProblem, observer: &mut dyn FnMut(&IterationRecord, &DesignTriple)) -> Result<RunOutcome> {
    let n = problem.grid.element_count();
    let mut fixed = vec![false; n];
    for &e in problem.grid.fixed_solid().iter().chain(problem.grid.fixed_void()) {
        fixed[e] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&e| !fixed[e]).collect();
    let mut rho = initial_density(problem);
    let mut x: Vec<f64> = free.iter().map(|&e| rho[e]).collect();
    let mut mma = Mma::new(free.len(), MmaSettings::default());
    let mut bound = problem.volume_fraction;
    let stages = problem.schedule.stages();
    let gap_switchable = problem.min_gap.iter().any(|c| c.epsilon >= GAP_EPSILON_LIMIT);
    let mut gap_active = !problem.min_gap.is_empty();
    let mut gap_deactivated = None;
    let mut history = Vec::new();
    let mut iteration = 0usize;
    let mut scale: Option<f64> = None;
    let mut termination = Termination::IterationCap;
    let multi = problem.objectives.len() > 1;
    let last_stage = stages.len().saturating_sub(1);

    'stages: for stage in &stages {
        if gap_active && gap_switchable && stage.eta >= GAP_OFF_ETA && stage.beta >= GAP_OFF_BETA {
            gap_active = false;
            gap_deactivated = Some((iteration, stage.move_limit));
        }
        for k in 0..problem.schedule.iterations_per_stage {
            // Sharper projection changes how dilated and intermediate volumes
            // relate, so the bound is also refreshed when a stage starts.
            let refresh = k == 0 || iteration.is_multiple_of(problem.volume_update_interval);
            let ev = evaluate(problem, &rho, stage, (!refresh).then_some(bound), gap_active, iteration)?;
            bound = ev.record.dilated_bound;
            let s = *scale.get_or_insert_with(|| {
                let m = ev.objective_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if m > 0.0 && m.is_finite() {
                    m
                } else {
                    1.0
                }
            });
            let restrict = |g: &[f64]| -> Vec<f64> { free.iter().map(|&e| g[e]).collect() };

            let mut values = Vec::new();
            let mut grads = Vec::new();
            let mut z_weights = Vec::new();
            let df0 = if multi {
                let scaled: Vec<f64> = ev.objective_values.iter().map(|v| v / s).collect();
                let shift = 1.0 + scaled.iter().fold(0.0f64, |a, &v| a.max(-v));
                for (v, g) in scaled.iter().zip(&ev.objective_grads) {
                    values.push(v + shift);
                    grads.push(restrict(g).iter().map(|d| d / s).collect::<Vec<f64>>());
                    z_weights.push(1.0);
                }
                vec![0.0; free.len()]
            } else {
                restrict(&ev.objective_grads[0]).iter().map(|d| d / s).collect()
            };
            for (v, g) in ev.constraint_values.iter().zip(&ev.constraint_grads) {
                values.push(*v);
                grads.push(restrict(g));
                z_weights.push(0.0);
            }
            let ml = stage.move_limit;
            let xmin: Vec<f64> = x.iter().map(|v| (v - ml).max(0.0)).collect();
            let xmax: Vec<f64> = x.iter().map(|v| (v + ml).min(1.0)).collect();
            let eval = Evaluation {
                objective_gradient: &df0,
                constraints: &values,
                constraint_gradients: &grads,
                z_weights: &z_weights,
            };
            let xnew = mma.update(&x, &xmin, &xmax, &eval)?;
            // Clamp away round-off at the box faces so the move limit holds exactly.
            let xnew: Vec<f64> =
                xnew.iter().zip(xmin.iter().zip(&xmax)).map(|(v, (lo, hi))| v.clamp(*lo, *hi)).collect();
            let change = x.iter().zip(&xnew).fold(0.0f64, |a, (o, n)| a.max((o - n).abs()));
            x = xnew;
            for (k, &e) in free.iter().enumerate() {
                rho[e] = x[k];
            }
            let mut record = ev.record;
            record.max_change = change;
            observer(&record, &ev.designs);
            history.push(record);
            iteration += 1;
            if change < problem.schedule.tolerance {
                if stage.index == last_stage {
                    termination = Termination::Converged;
                    break 'stages;
                }
                break;
            }
        }
    }

    let final_stage = stages.last().copied().ok_or_else(|| Error::InvalidConfig("empty schedule".into()))?;
    let stage = history.last().and_then(|r| stages.get(r.stage)).copied().unwrap_or(final_stage);
    let ev = evaluate(problem, &rho, &stage, Some(bound), gap_active, iteration)?;
    Ok(RunOutcome {
        history,
        rho,
        filtered: ev.filtered,
        designs: ev.designs,
        final_record: ev.record,
        termination,
        gap_deactivated,
    })
}

/// Whether a design carries an objective in this problem.
pub fn is_objective(problem: &OptProblem, d: Design) -> bool {
    slot_of(&problem.objectives, d)
}
