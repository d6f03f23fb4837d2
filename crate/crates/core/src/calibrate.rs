//! Length scales imposed by a filter radius and threshold set.
//!
//! A one-dimensional domain receives a centred solid block (or void gap) of
//! continuous width, with fractional densities at its two edge elements. The
//! width is bisected down to the point where the eroded member (or the
//! dilated gap) is about to vanish. At that seed, the member and gap widths
//! of the three projected designs are read off at the 0.5 level, using
//! linear interpolation between element centres. Half-widths are reported.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::{project, Design, ThresholdSet};
use crate::grid::GridSpec;
use crate::neighborhoods::{build_filter, BoundaryTreatment, NeighborhoodOperator};

/// Sharpness at which widths are measured.
pub const MEASURE_BETA: f64 = 38.0;
const BISECTION_STEPS: usize = 60;

/// Which phase the seed block is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    Solid,
    Void,
}

/// Half-widths of the three designs grown from one seed, ordered
/// eroded, intermediate, dilated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedMeasurement {
    pub seed_width: f64,
    pub radii: [f64; 3],
}

/// Minimum sizes and design offsets produced by a filter radius and a
/// threshold set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthScaleReport {
    pub r_fil: f64,
    pub thresholds: ThresholdSet,
    pub solid: SeedMeasurement,
    pub void: SeedMeasurement,
}

impl LengthScaleReport {
    pub fn r_min_solid(&self) -> f64 {
        self.solid.radii[Design::Intermediate.slot()]
    }

    pub fn r_min_void(&self) -> f64 {
        self.void.radii[Design::Intermediate.slot()]
    }

    /// How much thinner eroded members are than intermediate ones.
    pub fn t_ero(&self) -> f64 {
        self.void.radii[Design::Eroded.slot()] - self.void.radii[Design::Intermediate.slot()]
    }

    /// How much thicker dilated members are than intermediate ones.
    pub fn t_dil(&self) -> f64 {
        self.solid.radii[Design::Dilated.slot()] - self.solid.radii[Design::Intermediate.slot()]
    }
}

fn seed_field(n: usize, width: f64, seed: Seed) -> Vec<f64> {
    let c = n as f64 / 2.0;
    let (lo, hi) = (c - width / 2.0, c + width / 2.0);
    (0..n)
        .map(|i| {
            let (x0, x1) = (i as f64, i as f64 + 1.0);
            let overlap = (x1.min(hi) - x0.max(lo)).clamp(0.0, 1.0);
            match seed {
                Seed::Solid => overlap,
                Seed::Void => 1.0 - overlap,
            }
        })
        .collect()
}

/// Length of the run around the domain centre where the field is on the
/// `phase` side of 0.5, with crossings interpolated between centres.
fn centred_width(d: &[f64], seed: Seed) -> f64 {
    let n = d.len();
    let c = n / 2;
    let s: Vec<f64> = d
        .iter()
        .map(|&v| match seed {
            Seed::Solid => v - 0.5,
            Seed::Void => 0.5 - v,
        })
        .collect();
    if c == 0 || (s[c] < 0.0 && s[c - 1] < 0.0) {
        return 0.0;
    }
    let mut i = if s[c] < 0.0 { c - 1 } else { c };
    while i + 1 < n && s[i + 1] >= 0.0 {
        i += 1;
    }
    let right = if i + 1 < n { i as f64 + 0.5 + s[i] / (s[i] - s[i + 1]) } else { n as f64 };
    let mut j = if s[c] < 0.0 { c - 1 } else { c };
    while j > 0 && s[j - 1] >= 0.0 {
        j -= 1;
    }
    let left = if j > 0 { j as f64 + 0.5 - s[j] / (s[j] - s[j - 1]) } else { 0.0 };
    right - left
}

fn measure_seed(
    filter: &NeighborhoodOperator,
    thresholds: &ThresholdSet,
    r_fil: f64,
    seed: Seed,
    beta: f64,
) -> Result<SeedMeasurement> {
    let n = filter.len();
    let reaches = |w: f64| -> Result<bool> {
        let f = filter.apply(&seed_field(n, w, seed))?;
        Ok(match seed {
            Seed::Solid => f.iter().cloned().fold(f64::MIN, f64::max) >= thresholds.get(Design::Eroded),
            Seed::Void => f.iter().cloned().fold(f64::MAX, f64::min) <= thresholds.get(Design::Dilated),
        })
    };
    let (mut lo, mut hi) = (0.0, 4.0 * r_fil);
    if !reaches(hi)? {
        return Err(Error::Calibration(format!("no seed up to width {hi} survives all three projections")));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let filtered = filter.apply(&seed_field(n, hi, seed))?;
    let mut radii = [0.0; 3];
    for d in Design::ALL {
        radii[d.slot()] = centred_width(&project(&filtered, beta, thresholds.get(d)), seed) / 2.0;
    }
    Ok(SeedMeasurement { seed_width: hi, radii })
}

/// Measures minimum sizes and offsets for a filter radius and thresholds.
pub fn measure_1d(thresholds: &ThresholdSet, r_fil: f64, beta: f64) -> Result<LengthScaleReport> {
    if !(r_fil >= 0.5 && r_fil.is_finite()) {
        return Err(Error::InvalidRadius(format!("filter radius {r_fil} too small to calibrate")));
    }
    let n = (20.0 * r_fil) as usize + 1;
    let grid = GridSpec::new_1d(n)?;
    let filter = build_filter(&grid, r_fil, BoundaryTreatment::Corrected)?;
    Ok(LengthScaleReport {
        r_fil,
        thresholds: *thresholds,
        solid: measure_seed(&filter, thresholds, r_fil, Seed::Solid, beta)?,
        void: measure_seed(&filter, thresholds, r_fil, Seed::Void, beta)?,
    })
}

/// Thresholds, filter radius and offsets that realize a solid minimum size
/// with a given void-to-solid ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedTargets {
    pub thresholds: ThresholdSet,
    pub r_fil: f64,
    pub r_min_solid: f64,
    pub r_min_void: f64,
    pub offsets: crate::constraints::DesignOffsets,
}

/// Looks up a tabulated parameter set. Ratios 1, 2 and 3 are supported.
pub fn resolve_targets(r_min_solid: f64, void_ratio: u32) -> Result<ResolvedTargets> {
    if !(r_min_solid > 0.0) {
        return Err(Error::InvalidRadius(format!("minimum solid size {r_min_solid} must be positive")));
    }
    let (mu_int, fil, void, ero, dil) = match void_ratio {
        1 => (0.5, 2.0, 1.0, 0.6, 0.6),
        2 => (0.65, 3.2, 2.1, 0.4, 1.5),
        3 => (0.70, 4.4, 3.2, 0.3, 2.5),
        other => {
            return Err(Error::OutOfRange(format!(
                "void-to-solid ratio {other} is not tabulated (use 1, 2 or 3, or give thresholds)"
            )))
        }
    };
    let r = r_min_solid;
    Ok(ResolvedTargets {
        thresholds: ThresholdSet::new(0.75, mu_int, 0.25)?,
        r_fil: fil * r,
        r_min_solid: r,
        r_min_void: void * r,
        offsets: crate::constraints::DesignOffsets { eroded: ero * r, dilated: dil * r },
    })
}

/// One row of a calibration sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub thresholds: ThresholdSet,
    pub report: LengthScaleReport,
}

/// Sweeps symmetric threshold sets `[0.5 + d, 0.5, 0.5 - d]`.
pub fn sweep_symmetric(deltas: &[f64], r_fil: f64) -> Result<Vec<SweepRow>> {
    deltas
        .iter()
        .map(|&d| {
            let t = ThresholdSet::symmetric(d)?;
            Ok(SweepRow { thresholds: t, report: measure_1d(&t, r_fil, MEASURE_BETA)? })
        })
        .collect()
}

/// Sweeps the intermediate threshold between fixed eroded and dilated ones.
pub fn sweep_intermediate(mu_int: &[f64], eroded: f64, dilated: f64, r_fil: f64) -> Result<Vec<SweepRow>> {
    mu_int
        .iter()
        .map(|&m| {
            let t = ThresholdSet::new(eroded, m, dilated)?;
            Ok(SweepRow { thresholds: t, report: measure_1d(&t, r_fil, MEASURE_BETA)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn seed_field_has_fractional_edges() {
        let f = seed_field(10, 3.0, Seed::Solid);
        assert_eq!(f.iter().sum::<f64>(), 3.0);
        assert_relative_eq!(f[3], 0.5);
        assert_relative_eq!(f[6], 0.5);
        let v = seed_field(10, 3.0, Seed::Void);
        assert_relative_eq!(v.iter().sum::<f64>(), 7.0);
    }

    #[test]
    fn centred_width_interpolates_crossings() {
        // Centres sit at i + 0.5; 0.5 is crossed at x = 2 and x = 5.
        let d = [0.0, 0.25, 0.75, 1.0, 0.75, 0.25, 0.0];
        assert_relative_eq!(centred_width(&d, Seed::Solid), 3.0);
        let inv: Vec<f64> = d.iter().map(|v| 1.0 - v).collect();
        assert_relative_eq!(centred_width(&inv, Seed::Void), 3.0);
        assert_eq!(centred_width(&[0.0; 6], Seed::Solid), 0.0);
    }

    #[test]
    fn symmetric_thresholds_give_equal_offsets() {
        let t = ThresholdSet::new(0.75, 0.5, 0.25).unwrap();
        let r = measure_1d(&t, 20.0, MEASURE_BETA).unwrap();
        // Eroded member vanishes at the calibration point.
        assert!(r.solid.radii[0] < 0.5);
        assert_relative_eq!(r.r_min_solid() / 10.0, 1.0, epsilon = 0.05);
        assert_relative_eq!(r.r_min_void() / 10.0, 1.0, epsilon = 0.05);
        assert_relative_eq!(r.t_ero(), r.t_dil(), epsilon = 0.1);
    }

    #[test]
    fn resolve_known_ratios() {
        let t = resolve_targets(3.0, 2).unwrap();
        assert_eq!(t.thresholds.as_array(), [0.75, 0.65, 0.25]);
        assert_relative_eq!(t.r_fil, 9.6, epsilon = 1e-12);
        assert_relative_eq!(t.offsets.eroded, 1.2, epsilon = 1e-12);
        assert_relative_eq!(t.offsets.dilated, 4.5);
        assert!(resolve_targets(3.0, 4).is_err());
        assert!(resolve_targets(0.0, 1).is_err());
    }

    #[test]
    fn tiny_filter_is_rejected() {
        let t = ThresholdSet::new(0.75, 0.5, 0.25).unwrap();
        assert!(measure_1d(&t, 0.1, MEASURE_BETA).is_err());
    }
}
