//! Density filter and region operators.
//!
//! Both are stored as a stencil of `(offset, weight)` pairs shared by every
//! row, plus a per-row scale and a per-row outside fraction. Rows whose
//! stencil crosses a symmetry plane fold the offending entries back into the
//! grid; entries crossing a free face fall outside and are treated as void.
//! Applying an operator therefore costs `O(N * stencil)` time and `O(N)`
//! memory, which keeps large outer radii affordable.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::math;

const RADIUS_SLACK: f64 = 1e-12;

/// How rows touching the domain boundary are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryTreatment {
    /// Normalize by the full interior stencil volume. Mirror images count
    /// across symmetry planes and the rest of the exterior is void.
    #[default]
    Corrected,
    /// Normalize every row by its own in-domain weight. No mirroring and no
    /// outside fraction. Kept for comparison runs.
    Raw,
}

/// Annulus `r_inner <= d <= r_outer` around each element centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    pub r_inner: f64,
    pub r_outer: f64,
}

impl RegionSpec {
    pub fn new(r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner >= 0.0 && r_outer > r_inner && r_outer.is_finite()) {
            return Err(Error::InvalidRadius(format!(
                "region needs 0 <= r_inner < r_outer, got {r_inner} and {r_outer}"
            )));
        }
        Ok(Self { r_inner, r_outer })
    }

    fn contains(&self, d: f64) -> bool {
        d >= self.r_inner - RADIUS_SLACK && d <= self.r_outer + RADIUS_SLACK
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Filter { radius: f64 },
    Region(RegionSpec),
}

/// A sparse, row-normalized neighborhood operator over a grid.
#[derive(Debug, Clone)]
pub struct NeighborhoodOperator {
    grid: GridSpec,
    kind: OperatorKind,
    treatment: BoundaryTreatment,
    offsets: Vec<[isize; 3]>,
    weights: Vec<f64>,
    linear: Vec<isize>,
    reach: [usize; 3],
    volume: f64,
    row_scale: Vec<f64>,
    outside: Vec<f64>,
}

/// Bytes needed to hold an operator with `stencil` entries on `elements`
/// rows.
pub fn estimate_memory_bytes(elements: usize, stencil: usize) -> usize {
    elements * 2 * core::mem::size_of::<f64>()
        + stencil * (4 * core::mem::size_of::<isize>() + core::mem::size_of::<f64>())
}

/// Builds the density filter with cone weights `max(0, 1 - d / radius)`.
pub fn build_filter(grid: &GridSpec, radius: f64, treatment: BoundaryTreatment) -> Result<NeighborhoodOperator> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius(format!("filter radius must be positive, got {radius}")));
    }
    NeighborhoodOperator::build(grid, OperatorKind::Filter { radius }, treatment, None)
}

/// Builds an indicator region operator for an annulus.
pub fn build_region(grid: &GridSpec, region: RegionSpec, treatment: BoundaryTreatment) -> Result<NeighborhoodOperator> {
    NeighborhoodOperator::build(grid, OperatorKind::Region(region), treatment, None)
}

impl NeighborhoodOperator {
    /// Builds an operator, failing before any per-row allocation when a
    /// memory budget is given and would be exceeded.
    pub fn build(
        grid: &GridSpec,
        kind: OperatorKind,
        treatment: BoundaryTreatment,
        memory_budget: Option<usize>,
    ) -> Result<Self> {
        let ndim = grid.ndim();
        let dims = grid.dims();
        let outer = match kind {
            OperatorKind::Filter { radius } => radius,
            OperatorKind::Region(r) => {
                RegionSpec::new(r.r_inner, r.r_outer)?;
                let diag = math::sqrt(dims[..ndim].iter().map(|&n| (n * n) as f64).sum::<f64>());
                if r.r_outer >= diag {
                    return Err(Error::InvalidRadius(format!(
                        "outer radius {} not below the domain diagonal {diag}",
                        r.r_outer
                    )));
                }
                r.r_outer
            }
        };
        let span = math::ceil(outer) as isize;
        let mut offsets = Vec::new();
        let mut weights = Vec::new();
        let range = |a: usize| if a < ndim { -span..=span } else { 0..=0 };
        for dz in range(2) {
            for dy in range(1) {
                for dx in range(0) {
                    let d = math::sqrt((dx * dx + dy * dy + dz * dz) as f64);
                    let w = match kind {
                        OperatorKind::Filter { radius } => (1.0 - d / radius).max(0.0),
                        OperatorKind::Region(r) => {
                            if r.contains(d) {
                                1.0
                            } else {
                                0.0
                            }
                        }
                    };
                    if w > 0.0 {
                        offsets.push([dx, dy, dz]);
                        weights.push(w);
                    }
                }
            }
        }
        if offsets.is_empty() {
            return Err(Error::InvalidRadius(format!("stencil for {kind:?} contains no element")));
        }
        if let Some(budget) = memory_budget {
            let needed = estimate_memory_bytes(grid.element_count(), offsets.len());
            if needed > budget {
                return Err(Error::MemoryBudget { needed, budget });
            }
        }
        let mut reach = [0usize; 3];
        for o in &offsets {
            for a in 0..3 {
                reach[a] = reach[a].max(o[a].unsigned_abs());
            }
        }
        if treatment == BoundaryTreatment::Corrected {
            for p in grid.symmetry() {
                let a = p.axis.index();
                if reach[a] > dims[a] {
                    return Err(Error::StencilExceedsDomain { reach: reach[a], extent: dims[a] });
                }
            }
        }
        let (nx, ny) = (dims[0] as isize, dims[1] as isize);
        let linear = offsets.iter().map(|o| o[0] + nx * (o[1] + ny * o[2])).collect();
        let volume: f64 = weights.iter().sum();
        let n = grid.element_count();
        let mut op = Self {
            grid: grid.clone(),
            kind,
            treatment,
            offsets,
            weights,
            linear,
            reach,
            volume,
            row_scale: vec![1.0 / volume; n],
            outside: vec![0.0; n],
        };
        for i in 0..n {
            let mut inside = 0.0;
            op.visit_row(i, |_, w| inside += w);
            match (treatment, kind) {
                (BoundaryTreatment::Raw, _) => op.row_scale[i] = 1.0 / inside,
                (BoundaryTreatment::Corrected, OperatorKind::Region(_)) => {
                    op.outside[i] = (1.0 - inside / volume).max(0.0)
                }
                (BoundaryTreatment::Corrected, OperatorKind::Filter { .. }) => {}
            }
        }
        Ok(op)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn treatment(&self) -> BoundaryTreatment {
        self.treatment
    }

    pub fn len(&self) -> usize {
        self.row_scale.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_scale.is_empty()
    }

    /// Number of stencil entries per interior row.
    pub fn stencil_len(&self) -> usize {
        self.offsets.len()
    }

    /// Sum of stencil weights for a row far from any boundary.
    pub fn interior_volume(&self) -> f64 {
        self.volume
    }

    /// Per-row fraction of the region lying outside the domain (zero for
    /// filters and for raw treatment).
    pub fn outside_fraction(&self) -> &[f64] {
        &self.outside
    }

    fn is_interior(&self, c: &[usize; 3]) -> bool {
        let dims = self.grid.dims();
        (0..self.grid.ndim()).all(|a| c[a] >= self.reach[a] && c[a] + self.reach[a] < dims[a])
    }

    /// Calls `f(column, weight)` for every unscaled entry of row `i`.
    /// Columns can repeat when several mirror images fold onto one element.
    fn visit_row(&self, i: usize, mut f: impl FnMut(usize, f64)) {
        let c = self.grid.coords(i);
        if self.is_interior(&c) {
            for (l, w) in self.linear.iter().zip(&self.weights) {
                f((i as isize + l) as usize, *w);
            }
            return;
        }
        let mirror = self.treatment == BoundaryTreatment::Corrected;
        'entries: for (o, w) in self.offsets.iter().zip(&self.weights) {
            let mut t = [0usize; 3];
            for a in 0..3 {
                match self.grid.fold(a, c[a] as isize + o[a], mirror) {
                    Ok(Some(v)) => t[a] = v,
                    _ => continue 'entries,
                }
            }
            f(self.grid.index(t[0], t[1], t[2]), *w);
        }
    }

    /// `y = D x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let mut y = vec![0.0; x.len()];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            self.visit_row(i, |j, w| s += w * x[j]);
            *yi = s * self.row_scale[i];
        }
        Ok(y)
    }

    /// `y = D^T x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let mut y = vec![0.0; x.len()];
        for (i, &xi) in x.iter().enumerate() {
            let s = xi * self.row_scale[i];
            if s == 0.0 {
                continue;
            }
            self.visit_row(i, |j, w| y[j] += w * s);
        }
        Ok(y)
    }

    /// Scaled, merged entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> Result<Vec<(usize, f64)>> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, count: self.len() });
        }
        let mut entries = Vec::new();
        self.visit_row(i, |j, w| entries.push((j, w)));
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (j, w) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += w,
                _ => merged.push((j, w)),
            }
        }
        for e in &mut merged {
            e.1 *= self.row_scale[i];
        }
        Ok(merged)
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Axis, Face, SymmetryPlane};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::vec::Vec;

    fn dense(op: &NeighborhoodOperator) -> Vec<Vec<f64>> {
        let n = op.len();
        (0..n)
            .map(|i| {
                let mut r = vec![0.0; n];
                for (j, w) in op.row(i).unwrap() {
                    r[j] = w;
                }
                r
            })
            .collect()
    }

    /// Reference weights computed pairwise from centroids and mirror images.
    fn brute_force(grid: &GridSpec, weight: impl Fn(f64) -> f64) -> (Vec<Vec<f64>>, f64) {
        let n = grid.element_count();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            let ci = grid.element_centroid(i).unwrap();
            for j in 0..n {
                let cj = grid.element_centroid(j).unwrap();
                let mut w = weight(ci.distance(&cj));
                for img in grid.mirror_images(j).unwrap() {
                    w += weight(ci.distance(&img));
                }
                m[i][j] = w;
            }
        }
        // Interior volume from a lattice sum around the origin.
        let mut v = 0.0;
        for dy in -20i32..=20 {
            for dx in -20i32..=20 {
                v += weight(((dx * dx + dy * dy) as f64).sqrt());
            }
        }
        (m, v)
    }

    #[test]
    fn edge_row_of_1d_filter_sums_to_three_quarters() {
        let g = GridSpec::new_1d(10).unwrap();
        let f = build_filter(&g, 2.0, BoundaryTreatment::Corrected).unwrap();
        let row: f64 = f.row(0).unwrap().iter().map(|e| e.1).sum();
        assert_relative_eq!(row, 0.75, epsilon = 1e-14);
        let mid: f64 = f.row(5).unwrap().iter().map(|e| e.1).sum();
        assert_relative_eq!(mid, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn raw_filter_rows_sum_to_one() {
        let g = GridSpec::new_2d(7, 5).unwrap();
        let f = build_filter(&g, 2.5, BoundaryTreatment::Raw).unwrap();
        for i in 0..f.len() {
            let s: f64 = f.row(i).unwrap().iter().map(|e| e.1).sum();
            assert_relative_eq!(s, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn filter_matches_pairwise_reference_with_mirrors() {
        let g = GridSpec::new_2d(9, 6)
            .unwrap()
            .with_symmetry(SymmetryPlane::new(Axis::X, Face::Low))
            .unwrap()
            .with_symmetry(SymmetryPlane::new(Axis::Y, Face::High))
            .unwrap();
        let r = 2.7;
        let op = build_filter(&g, r, BoundaryTreatment::Corrected).unwrap();
        let (reference, v) = brute_force(&g, |d| (1.0 - d / r).max(0.0));
        assert_relative_eq!(op.interior_volume(), v, epsilon = 1e-12);
        let got = dense(&op);
        for i in 0..op.len() {
            for j in 0..op.len() {
                assert_relative_eq!(got[i][j], reference[i][j] / v, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn region_outside_fraction_matches_lattice_count() {
        let g = GridSpec::new_2d(30, 30).unwrap();
        let spec = RegionSpec::new(3.0, 8.0).unwrap();
        let op = build_region(&g, spec, BoundaryTreatment::Corrected).unwrap();
        let (reference, v) = brute_force(&g, |d| if (3.0..=8.0).contains(&d) { 1.0 } else { 0.0 });
        for &i in &[0usize, 4, 31, 465] {
            let inside: f64 = reference[i].iter().sum();
            assert_relative_eq!(op.outside_fraction()[i], 1.0 - inside / v, epsilon = 1e-13);
        }
        // The corner element sees roughly a quarter of its annulus.
        let c0 = op.outside_fraction()[0];
        assert!((c0 - 0.75).abs() < 0.08, "corner outside fraction {c0}");
        assert_eq!(op.outside_fraction()[g.index(15, 15, 0)], 0.0);
    }

    #[test]
    fn mirrored_region_has_no_outside_fraction_at_the_plane() {
        let g = GridSpec::new_2d(20, 20).unwrap().with_symmetry(SymmetryPlane::new(Axis::X, Face::Low)).unwrap();
        let op = build_region(&g, RegionSpec::new(1.0, 4.0).unwrap(), BoundaryTreatment::Corrected).unwrap();
        assert_eq!(op.outside_fraction()[g.index(0, 10, 0)], 0.0);
        assert!(op.outside_fraction()[g.index(19, 10, 0)] > 0.3);
    }

    #[test]
    fn region_excludes_self_when_inner_radius_positive() {
        let g = GridSpec::new_2d(12, 12).unwrap();
        let op = build_region(&g, RegionSpec::new(1.5, 3.0).unwrap(), BoundaryTreatment::Corrected).unwrap();
        let i = g.index(6, 6, 0);
        assert!(op.row(i).unwrap().iter().all(|e| e.0 != i));
    }

    #[test]
    fn stencil_larger_than_mirrored_axis_is_rejected() {
        let g = GridSpec::new_2d(3, 20).unwrap().with_symmetry(SymmetryPlane::new(Axis::X, Face::Low)).unwrap();
        let err = build_filter(&g, 4.5, BoundaryTreatment::Corrected).unwrap_err();
        assert!(matches!(err, Error::StencilExceedsDomain { .. }));
    }

    #[test]
    fn degenerate_regions_are_rejected() {
        let g = GridSpec::new_2d(10, 10).unwrap();
        assert!(RegionSpec::new(3.0, 2.0).is_err());
        assert!(build_region(&g, RegionSpec { r_inner: 1.1, r_outer: 1.2 }, BoundaryTreatment::Corrected).is_err());
        assert!(build_region(&g, RegionSpec { r_inner: 1.0, r_outer: 40.0 }, BoundaryTreatment::Corrected).is_err());
    }

    #[test]
    fn memory_budget_fails_fast() {
        let g = GridSpec::new_2d(50, 50).unwrap();
        let err = NeighborhoodOperator::build(
            &g,
            OperatorKind::Filter { radius: 3.0 },
            BoundaryTreatment::Corrected,
            Some(1000),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MemoryBudget { .. }));
    }

    #[test]
    fn three_d_filter_interior_rows_are_normalized() {
        let g = GridSpec::new_3d(8, 8, 8).unwrap();
        let f = build_filter(&g, 1.8, BoundaryTreatment::Corrected).unwrap();
        let s: f64 = f.row(g.index(4, 4, 4)).unwrap().iter().map(|e| e.1).sum();
        assert_relative_eq!(s, 1.0, epsilon = 1e-13);
    }

    proptest! {
        #[test]
        fn transpose_is_adjoint(
            nx in 3usize..9, ny in 3usize..9, r in 1.0f64..3.0,
            mirror in any::<bool>(), raw in any::<bool>(),
            seed in any::<u64>(),
        ) {
            let mut g = GridSpec::new_2d(nx, ny).unwrap();
            if mirror && !raw {
                g = g.with_symmetry(SymmetryPlane::new(Axis::Y, Face::Low)).unwrap();
            }
            let t = if raw { BoundaryTreatment::Raw } else { BoundaryTreatment::Corrected };
            let op = match build_filter(&g, r, t) {
                Ok(op) => op,
                Err(Error::StencilExceedsDomain { .. }) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            let n = g.element_count();
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 11) as f64 / (1u64 << 53) as f64 };
            let x: Vec<f64> = (0..n).map(|_| next()).collect();
            let y: Vec<f64> = (0..n).map(|_| next()).collect();
            let dx = op.apply(&x).unwrap();
            let dty = op.apply_transpose(&y).unwrap();
            let lhs: f64 = dx.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = x.iter().zip(&dty).map(|(a, b)| a * b).sum();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }

        #[test]
        fn corrected_rows_are_substochastic(nx in 2usize..10, ny in 2usize..10, r in 0.5f64..4.0) {
            let g = GridSpec::new_2d(nx, ny).unwrap();
            let op = build_filter(&g, r, BoundaryTreatment::Corrected).unwrap();
            for i in 0..op.len() {
                let row = op.row(i).unwrap();
                let s: f64 = row.iter().map(|e| e.1).sum();
                prop_assert!(row.iter().all(|e| e.1 >= 0.0));
                prop_assert!(s <= 1.0 + 1e-12);
            }
        }
    }
}
