//! Convergence log, one CSV row per iteration. Every number is printed in
//! fixed scientific notation so identical runs give identical bytes.

use std::io::Write;

use lenscale_core::optimizer::IterationRecord;
use lenscale_core::Design;

/// Constraint values above `-ACTIVE_BAND` count as active.
pub const ACTIVE_BAND: f64 = 1e-3;

pub const HEADER: &str = "iter,stage,eta,beta,move_limit,obj_ero,obj_int,obj_dil,vol_int,vol_dil,vdil_bound,\
ms_ero,ms_int,ms_dil,gap_ero,gap_int,gap_dil,max_change,gap_on,active";

fn num(v: f64) -> String {
    format!("{v:.10e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Names of the constraints that are within `ACTIVE_BAND` of their limit.
pub fn active_constraints(r: &IterationRecord) -> Vec<String> {
    let mut out = Vec::new();
    if r.volume_dilated / r.dilated_bound - 1.0 > -ACTIVE_BAND {
        out.push("vol".to_string());
    }
    for d in Design::ALL {
        if r.max_size[d.slot()].is_some_and(|g| g > -ACTIVE_BAND) {
            out.push(format!("ms_{}", d.name()));
        }
    }
    for d in Design::ALL {
        if r.min_gap[d.slot()].is_some_and(|g| g > -ACTIVE_BAND) {
            out.push(format!("gap_{}", d.name()));
        }
    }
    out
}

pub fn row(r: &IterationRecord) -> String {
    let mut f = vec![r.iteration.to_string(), r.stage.to_string(), num(r.eta), num(r.beta), num(r.move_limit)];
    f.extend(r.objectives.iter().map(|v| opt(*v)));
    f.extend([num(r.volume_intermediate), num(r.volume_dilated), num(r.dilated_bound)]);
    f.extend(r.max_size.iter().map(|v| opt(*v)));
    f.extend(r.min_gap.iter().map(|v| opt(*v)));
    f.push(num(r.max_change));
    f.push(u8::from(r.gap_active).to_string());
    f.push(active_constraints(r).join(";"));
    f.join(",")
}

/// Streams rows to any writer.
pub struct HistoryWriter<W: Write> {
    out: W,
}

impl<W: Write> HistoryWriter<W> {
    pub fn new(mut out: W) -> std::io::Result<Self> {
        writeln!(out, "{HEADER}")?;
        Ok(Self { out })
    }

    pub fn push(&mut self, r: &IterationRecord) -> std::io::Result<()> {
        writeln!(self.out, "{}", row(r))
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> IterationRecord {
        IterationRecord {
            iteration: 3,
            stage: 0,
            eta: 1.0,
            beta: 1.5,
            move_limit: 0.5,
            objectives: [Some(12.5), None, None],
            volume_intermediate: 0.4,
            volume_dilated: 0.5,
            dilated_bound: 0.5,
            max_size: [None, Some(-0.5), Some(0.01)],
            min_gap: [None; 3],
            max_change: 0.125,
            gap_active: false,
        }
    }

    #[test]
    fn row_matches_header() {
        let r = row(&record());
        assert_eq!(r.split(',').count(), HEADER.split(',').count());
        assert!(r.starts_with("3,0,1.0000000000e0,1.5000000000e0,5.0000000000e-1,1.2500000000e1,,,"));
        assert!(r.ends_with(",1.2500000000e-1,0,vol;ms_dil"));
    }

    #[test]
    fn writer_emits_header_first() {
        let mut w = HistoryWriter::new(Vec::new()).unwrap();
        w.push(&record()).unwrap();
        let bytes = w.finish().unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(HEADER));
        assert_eq!(lines.count(), 1);
    }
}
