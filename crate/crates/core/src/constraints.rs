//! Local volume restrictions and their aggregation.
//!
//! A region operator `D` gives, for each element, the share of its
//! neighborhood that is void. The local constraint asks that share to be at
//! least `epsilon`:
//!
//! `g_i = epsilon - c_i - (D delta)_i <= 0` with `delta = (1 - rho)^q`,
//!
//! where `c_i` is the part of the neighborhood outside the domain. The
//! p-mean of `g + 1 - epsilon` turns all of them into one smooth constraint.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::{chain_to_design, Design};
use crate::math;
use crate::neighborhoods::{NeighborhoodOperator, RegionSpec};

/// Per-element constraint values `g_i`.
pub fn local_constraints(rho: &[f64], region: &NeighborhoodOperator, epsilon: f64, q: f64) -> Result<Vec<f64>> {
    let delta: Vec<f64> = rho.iter().map(|&r| math::powf((1.0 - r).max(0.0), q)).collect();
    let void_share = region.apply(&delta)?;
    Ok(void_share.iter().zip(region.outside_fraction()).map(|(v, c)| epsilon - c - v).collect())
}

/// Shifted values `g + 1 - epsilon`, clamped at zero after checking that no
/// value is meaningfully negative.
fn shifted(locals: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    locals
        .iter()
        .map(|&g| {
            let s = g + 1.0 - epsilon;
            if s < -1e-9 || !s.is_finite() {
                Err(Error::OutOfRange(format!("aggregation base {s} is negative")))
            } else {
                Ok(s.max(0.0))
            }
        })
        .collect()
}

/// Value of the p-mean aggregate and the weights `dG/dg_i`.
fn p_mean(locals: &[f64], epsilon: f64, p: f64) -> Result<(f64, Vec<f64>)> {
    if locals.is_empty() {
        return Err(Error::LengthMismatch { expected: 1, got: 0 });
    }
    if !(p >= 1.0) {
        return Err(Error::OutOfRange(format!("aggregation exponent {p} below 1")));
    }
    let s = shifted(locals, epsilon)?;
    let n = s.len() as f64;
    let m = s.iter().cloned().fold(0.0, f64::max);
    if m == 0.0 {
        return Ok((epsilon - 1.0, alloc::vec![0.0; s.len()]));
    }
    let mean = s.iter().map(|&v| math::powf(v / m, p)).sum::<f64>() / n;
    let value = epsilon - 1.0 + m * math::powf(mean, 1.0 / p);
    let outer = math::powf(mean, 1.0 / p - 1.0) / n;
    let weights = s.iter().map(|&v| outer * math::powf(v / m, p - 1.0)).collect();
    Ok((value, weights))
}

/// Aggregated constraint `G = epsilon - 1 + mean((g + 1 - epsilon)^p)^(1/p)`.
pub fn aggregate(locals: &[f64], epsilon: f64, p: f64) -> Result<f64> {
    p_mean(locals, epsilon, p).map(|r| r.0)
}

/// Aggregated constraint with its gradient with respect to the projected
/// design `rho`.
#[derive(Debug, Clone)]
pub struct AggregatedConstraint {
    pub value: f64,
    pub locals: Vec<f64>,
    pub gradient: Vec<f64>,
}

pub fn aggregate_with_gradient(
    rho: &[f64],
    region: &NeighborhoodOperator,
    epsilon: f64,
    q: f64,
    p: f64,
) -> Result<AggregatedConstraint> {
    let locals = local_constraints(rho, region, epsilon, q)?;
    let (value, weights) = p_mean(&locals, epsilon, p)?;
    let back = region.apply_transpose(&weights)?;
    // dg/d(delta) = -D, d(delta)/d(rho) = -q (1 - rho)^(q - 1).
    let gradient = back
        .iter()
        .zip(rho)
        .map(|(&b, &r)| {
            let base = (1.0 - r).max(0.0);
            let dd = if q == 1.0 { 1.0 } else { q * math::powf(base, q - 1.0) };
            b * dd
        })
        .collect();
    Ok(AggregatedConstraint { value, locals, gradient })
}

/// Same as [`aggregate_with_gradient`] but pulled back to the design
/// variables through projection and filter.
#[allow(clippy::too_many_arguments)]
pub fn aggregate_design_gradient(
    rho_projected: &[f64],
    filtered: &[f64],
    region: &NeighborhoodOperator,
    filter: &NeighborhoodOperator,
    epsilon: f64,
    q: f64,
    p: f64,
    beta: f64,
    mu: f64,
) -> Result<AggregatedConstraint> {
    let mut c = aggregate_with_gradient(rho_projected, region, epsilon, q, p)?;
    c.gradient = chain_to_design(&c.gradient, filtered, beta, mu, filter)?;
    Ok(c)
}

/// Margin of the compatibility condition between maximum size and the two
/// minimum sizes. Negative means no design can satisfy all three.
pub fn feasibility_margin(r_max: f64, r_min_void: f64, r_min_solid: f64) -> f64 {
    r_max - feasibility_bound(r_min_void, r_min_solid)
}

/// Smallest maximum size compatible with the given minimum sizes.
pub fn feasibility_bound(r_min_void: f64, r_min_solid: f64) -> f64 {
    let k = 2.0 / math::sqrt(3.0);
    (k - 1.0) * r_min_void + k * r_min_solid
}

pub fn check_feasibility(r_max: f64, r_min_void: f64, r_min_solid: f64) -> Result<f64> {
    let margin = feasibility_margin(r_max, r_min_void, r_min_solid);
    if margin < 0.0 {
        return Err(Error::Infeasible { r_max, bound: feasibility_bound(r_min_void, r_min_solid) });
    }
    Ok(margin)
}

/// Updated volume bound for the dilated design that keeps the intermediate
/// design at its target.
pub fn dilated_volume_bound(target_intermediate: f64, volume_dilated: f64, volume_intermediate: f64) -> Result<f64> {
    if !(volume_intermediate > 0.0) {
        return Err(Error::OutOfRange(format!("intermediate volume {volume_intermediate} must be positive")));
    }
    Ok(target_intermediate * volume_dilated / volume_intermediate)
}

/// Offsets between the intermediate design and the eroded / dilated ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOffsets {
    pub eroded: f64,
    pub dilated: f64,
}

impl DesignOffsets {
    /// Signed shift applied to sizes of `design`: `-eroded`, `0`, `+dilated`.
    pub fn shift(&self, design: Design) -> f64 {
        match design {
            Design::Eroded => -self.eroded,
            Design::Intermediate => 0.0,
            Design::Dilated => self.dilated,
        }
    }
}

/// Maximum-size region of one design: the solid radius and the void radius
/// that define the ring both move with the design.
pub fn scale_max_size(r_max: f64, r_min_void: f64, offsets: DesignOffsets, design: Design) -> Result<RegionSpec> {
    let shift = offsets.shift(design);
    let outer = r_max + shift;
    let inner = (r_min_void + shift).max(0.0);
    if !(outer > 0.0) {
        return Err(Error::InvalidRadius(format!("maximum size of the {} design collapses to {outer}", design.name())));
    }
    RegionSpec::new(inner, outer)
}

/// Gap region of one design together with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRegion {
    pub region: RegionSpec,
    pub gap: f64,
    pub epsilon: f64,
}

/// Gap region for `design`. Eroded designs see a wider gap and dilated ones
/// a narrower gap, by twice the corresponding offset.
pub fn scale_min_gap(
    gap: f64,
    r_min: f64,
    r_max: f64,
    offsets: DesignOffsets,
    design: Design,
    ndim: usize,
) -> Result<GapRegion> {
    let shift = offsets.shift(design);
    let h = gap - 2.0 * shift;
    let r_min_d = (r_min + shift).max(0.0);
    let r_max_d = r_max + shift;
    if !(h > 0.0) {
        return Err(Error::InvalidRadius(format!("gap of the {} design collapses to {h}", design.name())));
    }
    if !(r_max_d > 0.0) {
        return Err(Error::InvalidRadius(format!(
            "maximum size of the {} design collapses to {r_max_d}",
            design.name()
        )));
    }
    let epsilon = match ndim {
        2 => crate::geometry::gap_epsilon_2d(r_min_d, r_max_d, h)?,
        3 => crate::geometry::gap_epsilon_3d(r_min_d, r_max_d, h)?,
        _ => return Err(Error::InvalidGrid(format!("gap regions need 2 or 3 dimensions, got {ndim}"))),
    };
    let outer = crate::geometry::gap_outer_radius(r_min_d, r_max_d, h);
    Ok(GapRegion { region: RegionSpec::new(r_min_d, outer)?, gap: h, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::neighborhoods::{build_filter, build_region, BoundaryTreatment};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::vec;
    use std::vec::Vec;

    fn sample(n: usize) -> Vec<f64> {
        (0..n).map(|i| 0.05 + 0.9 * (((i * 7919) % 97) as f64 / 97.0)).collect()
    }

    #[test]
    fn uniform_field_gives_uniform_constraint() {
        let g = GridSpec::new_2d(20, 20).unwrap();
        let r = build_region(&g, RegionSpec::new(1.0, 3.0).unwrap(), BoundaryTreatment::Corrected).unwrap();
        let locals = local_constraints(&vec![0.4; 400], &r, 0.05, 1.0).unwrap();
        assert_relative_eq!(locals[g.index(10, 10, 0)], 0.05 - 0.6, epsilon = 1e-12);
        // Boundary elements count the outside as void.
        assert_relative_eq!(
            locals[0],
            0.05 - r.outside_fraction()[0] - 0.6 * (1.0 - r.outside_fraction()[0]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn p_mean_of_equal_values_is_that_value() {
        let locals = vec![-0.3; 17];
        for &p in &[1.0, 4.0, 16.0, 100.0] {
            assert_relative_eq!(aggregate(&locals, 0.05, p).unwrap(), -0.3, epsilon = 1e-12);
        }
    }

    #[test]
    fn large_exponent_approaches_max() {
        let locals = vec![-0.9, -0.5, 0.02, -0.1];
        let g = aggregate(&locals, 0.05, 400.0).unwrap();
        assert!(g <= 0.02 + 1e-12);
        assert!(g > 0.02 - 0.01);
    }

    #[test]
    fn negative_base_rejected() {
        assert!(aggregate(&[-2.0], 0.05, 16.0).is_err());
        assert!(aggregate(&[], 0.05, 16.0).is_err());
    }

    #[test]
    fn all_solid_gives_constant_value() {
        let locals = vec![-0.95; 5];
        // Shifted values are zero: G = epsilon - 1.
        assert_relative_eq!(aggregate(&locals, 0.05, 16.0).unwrap(), -0.95);
    }

    #[test]
    fn design_gradient_matches_finite_differences() {
        let g = GridSpec::new_2d(10, 8).unwrap();
        let f = build_filter(&g, 1.6, BoundaryTreatment::Corrected).unwrap();
        let region = build_region(&g, RegionSpec::new(1.0, 2.6).unwrap(), BoundaryTreatment::Corrected).unwrap();
        let rho = sample(80);
        let (beta, mu, eps, q, p) = (4.0, 0.4, 0.05, 2.0, 16.0);
        let eval = |x: &[f64]| -> f64 {
            let fil = f.apply(x).unwrap();
            let proj = crate::fields::project(&fil, beta, mu);
            aggregate(&local_constraints(&proj, &region, eps, q).unwrap(), eps, p).unwrap()
        };
        let fil = f.apply(&rho).unwrap();
        let proj = crate::fields::project(&fil, beta, mu);
        let c = aggregate_design_gradient(&proj, &fil, &region, &f, eps, q, p, beta, mu).unwrap();
        assert_relative_eq!(c.value, eval(&rho), epsilon = 1e-14);
        let h = 1e-6;
        for i in [0, 13, 44, 79] {
            let mut a = rho.clone();
            let mut b = rho.clone();
            a[i] += h;
            b[i] -= h;
            let fd = (eval(&a) - eval(&b)) / (2.0 * h);
            assert_relative_eq!(c.gradient[i], fd, epsilon = 1e-8, max_relative = 1e-5);
        }
    }

    #[test]
    fn feasibility_examples() {
        assert_relative_eq!(feasibility_bound(3.0, 3.0), 1.3094 * 3.0, epsilon = 1e-3);
        assert!(check_feasibility(3.0 * 1.31, 3.0, 3.0).is_ok());
        // Void radius 15 against solid 3 needs about 5.785.
        assert!(matches!(check_feasibility(5.0, 15.0, 3.0), Err(Error::Infeasible { .. })));
        assert_relative_eq!(feasibility_bound(15.0, 3.0), 5.7846, epsilon = 1e-3);
    }

    #[test]
    fn dilated_bound_scales_with_volume_ratio() {
        assert_relative_eq!(dilated_volume_bound(0.5, 0.6, 0.5).unwrap(), 0.6);
        assert!(dilated_volume_bound(0.5, 0.6, 0.0).is_err());
    }

    #[test]
    fn max_size_regions_follow_offsets() {
        let off = DesignOffsets { eroded: 1.8, dilated: 1.8 };
        let ero = scale_max_size(5.0, 3.0, off, Design::Eroded).unwrap();
        let int = scale_max_size(5.0, 3.0, off, Design::Intermediate).unwrap();
        let dil = scale_max_size(5.0, 3.0, off, Design::Dilated).unwrap();
        assert_relative_eq!(ero.r_outer, 3.2);
        assert_relative_eq!(ero.r_inner, 1.2);
        assert_relative_eq!(int.r_outer, 5.0);
        assert_relative_eq!(int.r_inner, 3.0);
        assert_relative_eq!(dil.r_outer, 6.8);
        assert_relative_eq!(dil.r_inner, 4.8);
        let big = DesignOffsets { eroded: 6.0, dilated: 1.0 };
        assert!(scale_max_size(5.0, 3.0, big, Design::Eroded).is_err());
    }

    #[test]
    fn gap_regions_widen_for_eroded_and_narrow_for_dilated() {
        let off = DesignOffsets { eroded: 1.0, dilated: 1.0 };
        let e = scale_min_gap(8.0, 2.0, 4.0, off, Design::Eroded, 2).unwrap();
        let i = scale_min_gap(8.0, 2.0, 4.0, off, Design::Intermediate, 2).unwrap();
        let d = scale_min_gap(8.0, 2.0, 4.0, off, Design::Dilated, 2).unwrap();
        assert_relative_eq!(e.gap, 10.0);
        assert_relative_eq!(i.gap, 8.0);
        assert_relative_eq!(d.gap, 6.0);
        assert_relative_eq!(i.region.r_outer, 2.0 + 4.0 + 4.0);
        assert!(scale_min_gap(2.0, 2.0, 4.0, off, Design::Dilated, 2).is_err());
    }

    proptest! {
        #[test]
        fn aggregate_bounded_by_mean_and_max(vals in proptest::collection::vec(-0.95f64..0.05, 1..40), p in 1.0f64..64.0) {
            let g = aggregate(&vals, 0.05, p).unwrap();
            let max = vals.iter().cloned().fold(f64::MIN, f64::max);
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            prop_assert!(g <= max + 1e-12);
            prop_assert!(g >= mean - 1e-12);
        }

        #[test]
        fn aggregate_is_monotone_in_each_entry(vals in proptest::collection::vec(-0.9f64..0.0, 2..20), k in 0usize..20, bump in 0.0f64..0.05) {
            let k = k % vals.len();
            let mut up = vals.clone();
            up[k] += bump;
            prop_assert!(aggregate(&up, 0.05, 8.0).unwrap() >= aggregate(&vals, 0.05, 8.0).unwrap() - 1e-14);
        }
    }
}
