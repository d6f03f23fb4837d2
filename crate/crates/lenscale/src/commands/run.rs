//! Full robust optimization with file output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use lenscale_core::optimizer::{self, RunOutcome};
use lenscale_core::verifier::{self, Tolerances};
use lenscale_core::{assemble_problem, Design, DesignTriple, OptProblem};

use super::verify::targets_for_problem;
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::io::history::HistoryWriter;
use crate::io::{write_field, Field};
use crate::summary::{ReportSummary, RunSummary};

pub const HISTORY_FILE: &str = "history.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Everything a finished run produced.
pub struct RunResult {
    pub problem: OptProblem,
    pub outcome: RunOutcome,
    pub summary: RunSummary,
}

fn write_designs(dir: &Path, suffix: &str, dims: [usize; 3], designs: &DesignTriple) -> Result<Vec<PathBuf>> {
    Design::ALL
        .iter()
        .map(|&d| {
            let field = Field::new(dims, designs.get(d).to_vec())?;
            write_field(&dir.join(format!("{}{suffix}", d.name())), &field)
        })
        .collect()
}

/// Runs the optimization described by `settings` and writes every output
/// into `settings.out`. Progress goes to `log`.
pub fn execute(settings: &Settings, log: &mut dyn Write) -> Result<RunResult> {
    let config = settings.resolve()?;
    let problem = assemble_problem(&config)?;
    let s = &problem.scales;
    let _ = writeln!(
        log,
        "{} {:?}: r_fil {:.3}, thresholds {:?}, r_min solid {:.3} void {:.3}, {} constraint(s)",
        problem.preset.name(),
        problem.grid.dims(),
        s.r_fil,
        s.thresholds.as_array(),
        s.r_min_solid,
        s.r_min_void,
        problem.constraint_count()
    );
    if let Some(m) = s.feasibility_margin.filter(|m| *m < 0.0) {
        let _ =
            writeln!(log, "warning: maximum size is incompatible with the minimum sizes (margin {m:.3}); continuing");
    }

    let out = &settings.out;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let snapshots = out.join("snapshots");
    if settings.snapshot_every > 0 {
        std::fs::create_dir_all(&snapshots).map_err(|e| Error::io(&snapshots, e))?;
    }
    let history_path = out.join(HISTORY_FILE);
    let file = File::create(&history_path).map_err(|e| Error::io(&history_path, e))?;
    let mut history = HistoryWriter::new(BufWriter::new(file)).map_err(|e| Error::io(&history_path, e))?;

    let dims = problem.grid.dims();
    let mut failure: Option<Error> = None;
    let mut stage = usize::MAX;
    let mut gap_on = !problem.min_gap.is_empty();
    let mut observer = |r: &optimizer::IterationRecord, designs: &DesignTriple| {
        if failure.is_some() {
            return;
        }
        if r.stage != stage {
            stage = r.stage;
            let _ = writeln!(
                log,
                "stage {}: eta {:.2}, beta {:.3}, move limit {:.4}",
                r.stage, r.eta, r.beta, r.move_limit
            );
        }
        if gap_on && !r.gap_active {
            gap_on = false;
            let _ = writeln!(log, "gap constraints off at iteration {} (move limit {:.5})", r.iteration, r.move_limit);
        }
        if let Err(e) = history.push(r) {
            failure = Some(Error::io(&history_path, e));
            return;
        }
        if settings.snapshot_every > 0 && r.iteration.is_multiple_of(settings.snapshot_every) {
            if let Err(e) = write_designs(&snapshots, &format!("_{:05}", r.iteration), dims, designs) {
                failure = Some(e);
            }
        }
    };
    let outcome = optimizer::run(&problem, &mut observer)?;
    if let Some(e) = failure {
        return Err(e);
    }
    history.finish().map_err(|e| Error::io(&history_path, e))?;

    let mut files: Vec<String> = vec![HISTORY_FILE.to_string()];
    for p in write_designs(out, "", dims, &outcome.designs)? {
        files.push(p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
    }
    files.push(SUMMARY_FILE.to_string());

    let targets = targets_for_problem(&problem)?;
    let tol = Tolerances::default();
    let report = verifier::measure(&problem.grid, &outcome.designs.intermediate, &targets)?;
    let summary = RunSummary::new(&problem, &config, &outcome, ReportSummary::new(&report, &targets, &tol), files);
    let summary_path = out.join(SUMMARY_FILE);
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::format(&summary_path, e.to_string()))?;
    std::fs::write(&summary_path, json + "\n").map_err(|e| Error::io(&summary_path, e))?;

    let _ = writeln!(
        log,
        "done after {} iterations ({}); gray level {:.4}; {} verifier finding(s)",
        summary.iterations,
        summary.termination,
        summary.verification.gray_level,
        summary.verification.violations.len()
    );
    for v in &summary.verification.violations {
        let _ = writeln!(log, "  {v}");
    }
    Ok(RunResult { problem, outcome, summary })
}
