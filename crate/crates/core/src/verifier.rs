//! Post-hoc checks of a finished design on its binarized, unfolded field.
//!
//! Minimum sizes are checked with morphological openings, the maximum size
//! with the local void-share measure, and gaps with the distance between
//! distinct solid components. Everything outside the domain counts as void.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::constraints::{aggregate, local_constraints};
use crate::error::{Error, Result};
use crate::fields::gray_level;
use crate::grid::GridSpec;
use crate::math;
use crate::neighborhoods::{build_region, BoundaryTreatment, RegionSpec};

/// Void share demanded inside every maximum-size ring.
pub const MAX_SIZE_EPSILON: f64 = 0.05;
const MAX_SIZE_EXPONENT: f64 = 100.0;

/// Solid where the density is at least one half.
pub fn binarize(rho: &[f64]) -> Vec<bool> {
    rho.iter().map(|&r| r >= 0.5).collect()
}

/// Disk or ball of lattice offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuringElement {
    offsets: Vec<[isize; 3]>,
    reach: usize,
}

impl StructuringElement {
    /// All offsets with Euclidean length at most `radius`. A negative radius
    /// gives the origin alone.
    pub fn ball(radius: f64, ndim: usize) -> Result<Self> {
        if !radius.is_finite() || !(1..=3).contains(&ndim) {
            return Err(Error::InvalidRadius(format!("structuring element radius {radius} in {ndim}D")));
        }
        let r = radius.max(0.0);
        let reach = math::floor(r + 1e-9) as usize;
        let k = reach as isize;
        let span = |a: usize| if a < ndim { -k..=k } else { 0..=0 };
        let mut offsets = Vec::new();
        for dz in span(2) {
            for dy in span(1) {
                for dx in span(0) {
                    if ((dx * dx + dy * dy + dz * dz) as f64) <= r * r + 1e-9 {
                        offsets.push([dx, dy, dz]);
                    }
                }
            }
        }
        Ok(Self { offsets, reach })
    }

    pub fn offsets(&self) -> &[[isize; 3]] {
        &self.offsets
    }

    pub fn reach(&self) -> usize {
        self.reach
    }
}

#[derive(Debug, Clone, Copy)]
struct Lattice {
    dims: [usize; 3],
}

impl Lattice {
    fn of(grid: &GridSpec) -> Self {
        Self { dims: grid.dims() }
    }

    fn len(&self) -> usize {
        self.dims.iter().product()
    }

    fn coords(&self, e: usize) -> [isize; 3] {
        let [nx, ny, _] = self.dims;
        [(e % nx) as isize, ((e / nx) % ny) as isize, (e / (nx * ny)) as isize]
    }

    fn at(&self, c: [isize; 3]) -> Option<usize> {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for a in 0..3 {
            if c[a] < 0 || c[a] as usize >= self.dims[a] {
                return None;
            }
            idx += c[a] as usize * stride;
            stride *= self.dims[a];
        }
        Some(idx)
    }

    fn shifted(&self, e: usize, o: [isize; 3]) -> Option<usize> {
        let c = self.coords(e);
        self.at([c[0] + o[0], c[1] + o[1], c[2] + o[2]])
    }
}

fn check_len(grid: &GridSpec, mask: &[bool]) -> Result<()> {
    if mask.len() != grid.element_count() {
        return Err(Error::LengthMismatch { expected: grid.element_count(), got: mask.len() });
    }
    Ok(())
}

fn sweep(grid: &GridSpec, mask: &[bool], se: &StructuringElement, pad: bool, all: bool) -> Result<Vec<bool>> {
    check_len(grid, mask)?;
    let lat = Lattice::of(grid);
    Ok((0..lat.len())
        .map(|e| {
            let mut hits = se.offsets.iter().map(|&o| lat.shifted(e, o).map_or(pad, |n| mask[n]));
            if all {
                hits.all(|v| v)
            } else {
                hits.any(|v| v)
            }
        })
        .collect())
}

/// Erosion; cells outside the grid take the value `pad`.
pub fn erode(grid: &GridSpec, mask: &[bool], se: &StructuringElement, pad: bool) -> Result<Vec<bool>> {
    sweep(grid, mask, se, pad, true)
}

/// Dilation; cells outside the grid take the value `pad`.
pub fn dilate(grid: &GridSpec, mask: &[bool], se: &StructuringElement, pad: bool) -> Result<Vec<bool>> {
    sweep(grid, mask, se, pad, false)
}

fn grid_with_dims(ndim: usize, d: [usize; 3]) -> Result<GridSpec> {
    match ndim {
        1 => GridSpec::new_1d(d[0]),
        2 => GridSpec::new_2d(d[0], d[1]),
        _ => GridSpec::new_3d(d[0], d[1], d[2]),
    }
}

/// Embeds the mask in a margin of `pad` cells wide enough for one erosion
/// followed by one dilation, applies both, and crops back.
fn padded_pair(
    grid: &GridSpec,
    mask: &[bool],
    se: &StructuringElement,
    pad: bool,
    erode_first: bool,
) -> Result<Vec<bool>> {
    check_len(grid, mask)?;
    let ndim = grid.ndim();
    let m = 2 * se.reach + 1;
    let dims = grid.dims();
    let mut pdims = dims;
    for d in pdims.iter_mut().take(ndim) {
        *d += 2 * m;
    }
    let pgrid = grid_with_dims(ndim, pdims)?;
    let (inner, outer) = (Lattice::of(grid), Lattice::of(&pgrid));
    let shift = |c: [isize; 3]| -> [isize; 3] {
        let mut s = c;
        for v in s.iter_mut().take(ndim) {
            *v += m as isize;
        }
        s
    };
    let mut big = vec![pad; outer.len()];
    for (e, &v) in mask.iter().enumerate() {
        if let Some(p) = outer.at(shift(inner.coords(e))) {
            big[p] = v;
        }
    }
    let (first, second) = if erode_first { (true, false) } else { (false, true) };
    let a = sweep(&pgrid, &big, se, pad, first)?;
    let b = sweep(&pgrid, &a, se, pad, second)?;
    Ok((0..inner.len()).map(|e| outer.at(shift(inner.coords(e))).map_or(pad, |p| b[p])).collect())
}

/// Opening of `mask`, with the space outside the grid filled with `pad`.
pub fn opening(grid: &GridSpec, mask: &[bool], se: &StructuringElement, pad: bool) -> Result<Vec<bool>> {
    padded_pair(grid, mask, se, pad, true)
}

/// Closing of `mask`, with the space outside the grid filled with `pad`.
pub fn closing(grid: &GridSpec, mask: &[bool], se: &StructuringElement, pad: bool) -> Result<Vec<bool>> {
    padded_pair(grid, mask, se, pad, false)
}

/// Connectivity used when labelling components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// Shared faces only.
    Face,
    /// Faces, edges and corners.
    Full,
}

fn neighbor_offsets(ndim: usize, conn: Connectivity) -> Vec<[isize; 3]> {
    let r = |a: usize| if a < ndim { -1..=1 } else { 0..=0 };
    let mut out = Vec::new();
    for dz in r(2) {
        for dy in r(1) {
            for dx in r(0) {
                let nz = (dx != 0) as u8 + (dy != 0) as u8 + (dz != 0) as u8;
                let keep = match conn {
                    Connectivity::Face => nz == 1,
                    Connectivity::Full => nz >= 1,
                };
                if keep {
                    out.push([dx, dy, dz]);
                }
            }
        }
    }
    out
}

/// Component label per cell (`None` outside the mask) and the count.
pub fn label_components(grid: &GridSpec, mask: &[bool], conn: Connectivity) -> Result<(Vec<Option<usize>>, usize)> {
    check_len(grid, mask)?;
    let lat = Lattice::of(grid);
    let nbrs = neighbor_offsets(grid.ndim(), conn);
    let mut labels = vec![None; mask.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(count);
        stack.push(start);
        while let Some(e) = stack.pop() {
            for &o in &nbrs {
                if let Some(n) = lat.shifted(e, o) {
                    if mask[n] && labels[n].is_none() {
                        labels[n] = Some(count);
                        stack.push(n);
                    }
                }
            }
        }
        count += 1;
    }
    Ok((labels, count))
}

/// Face-connected void regions that do not reach the grid boundary.
pub fn closed_cavities(grid: &GridSpec, solid: &[bool]) -> Result<usize> {
    let void: Vec<bool> = solid.iter().map(|s| !s).collect();
    let (labels, count) = label_components(grid, &void, Connectivity::Face)?;
    let lat = Lattice::of(grid);
    let ndim = grid.ndim();
    let mut open = vec![false; count];
    for (e, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            let c = lat.coords(e);
            if (0..ndim).any(|a| c[a] == 0 || c[a] as usize + 1 == lat.dims[a]) {
                open[*l] = true;
            }
        }
    }
    Ok(open.iter().filter(|o| !**o).count())
}

/// Smallest gap between two distinct solid components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapWitness {
    /// Centroid distance minus one element.
    pub gap: f64,
    pub cells: (usize, usize),
}

/// Smallest gap between distinct components (full connectivity), searched
/// up to `search_radius`. `None` when no two components are that close.
pub fn min_gap(grid: &GridSpec, solid: &[bool], search_radius: f64) -> Result<(Option<GapWitness>, usize)> {
    let (labels, count) = label_components(grid, solid, Connectivity::Full)?;
    if count < 2 {
        return Ok((None, count));
    }
    let lat = Lattice::of(grid);
    let se = StructuringElement::ball(search_radius, grid.ndim())?;
    let mut offsets: Vec<([isize; 3], f64)> = se
        .offsets
        .iter()
        .map(|&o| (o, math::sqrt((o[0] * o[0] + o[1] * o[1] + o[2] * o[2]) as f64)))
        .filter(|(_, d)| *d > 0.0)
        .collect();
    offsets.sort_by(|a, b| a.1.total_cmp(&b.1));
    let faces = neighbor_offsets(grid.ndim(), Connectivity::Face);
    let mut best: Option<GapWitness> = None;
    for e in 0..solid.len() {
        let Some(la) = labels[e] else { continue };
        let on_edge = faces.iter().any(|&o| lat.shifted(e, o).is_some_and(|n| !solid[n]));
        if !on_edge {
            continue;
        }
        for &(o, d) in &offsets {
            if best.is_some_and(|b| d - 1.0 >= b.gap) {
                break;
            }
            if let Some(n) = lat.shifted(e, o) {
                if labels[n].is_some_and(|lb| lb != la) {
                    best = Some(GapWitness { gap: d - 1.0, cells: (e.min(n), e.max(n)) });
                    break;
                }
            }
        }
    }
    Ok((best, count))
}

/// Exact squared Euclidean distance in one dimension (lower envelope of
/// parabolas).
fn edt_1d(f: &[f64], out: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    let inf = f64::INFINITY;
    let mut first = None;
    for q in 0..n {
        if f[q] == inf {
            continue;
        }
        match first {
            None => {
                first = Some(q);
                v[0] = q;
                k = 0;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
            }
            Some(_) => loop {
                let p = v[k];
                let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
                if s <= z[k] && k > 0 {
                    k -= 1;
                    continue;
                }
                if s <= z[k] {
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            },
        }
    }
    if first.is_none() {
        out.iter_mut().for_each(|o| *o = inf);
        return;
    }
    let mut j = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[j + 1] < q as f64 {
            j += 1;
        }
        let p = v[j];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
}

/// Distance from each solid cell centre to the nearest void cell centre,
/// with one layer of void around the grid. Void cells get zero.
pub fn solid_distance(grid: &GridSpec, solid: &[bool]) -> Result<Vec<f64>> {
    check_len(grid, solid)?;
    let ndim = grid.ndim();
    let dims = grid.dims();
    let mut pd = dims;
    for d in pd.iter_mut().take(ndim) {
        *d += 2;
    }
    let outer = Lattice { dims: pd };
    let inner = Lattice::of(grid);
    let lift = |c: [isize; 3]| {
        let mut s = c;
        for v in s.iter_mut().take(ndim) {
            *v += 1;
        }
        s
    };
    let mut f = vec![0.0; outer.len()];
    for (e, &s) in solid.iter().enumerate() {
        if s {
            if let Some(p) = outer.at(lift(inner.coords(e))) {
                f[p] = f64::INFINITY;
            }
        }
    }
    let mut line = Vec::new();
    let mut res = Vec::new();
    for axis in 0..ndim {
        let n = pd[axis];
        let stride: usize = pd[..axis].iter().product();
        for start in 0..outer.len() {
            if outer.coords(start)[axis] != 0 {
                continue;
            }
            line.clear();
            line.extend((0..n).map(|i| f[start + i * stride]));
            res.resize(n, 0.0);
            edt_1d(&line, &mut res);
            for i in 0..n {
                f[start + i * stride] = res[i];
            }
        }
    }
    Ok((0..inner.len()).map(|e| outer.at(lift(inner.coords(e))).map_or(0.0, |p| math::sqrt(f[p]))).collect())
}

/// Cells between `e` and the nearest grid face.
fn edge_distance(lat: &Lattice, ndim: usize, e: usize) -> f64 {
    let c = lat.coords(e);
    (0..ndim).map(|a| c[a].min(lat.dims[a] as isize - 1 - c[a]) as f64).fold(f64::INFINITY, f64::min)
}

/// Largest member width in a band along the grid boundary and in the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessSplit {
    pub boundary_max: f64,
    pub interior_max: f64,
}

/// Member width `2 d - 1` from the distance field, split by whether the cell
/// lies within `band` cells of the grid boundary.
pub fn thickness_split(grid: &GridSpec, solid: &[bool], band: f64) -> Result<ThicknessSplit> {
    let d = solid_distance(grid, solid)?;
    let lat = Lattice::of(grid);
    let ndim = grid.ndim();
    let mut out = ThicknessSplit { boundary_max: 0.0, interior_max: 0.0 };
    for (e, &de) in d.iter().enumerate() {
        if !solid[e] {
            continue;
        }
        let c = lat.coords(e);
        let edge = (0..ndim).map(|a| c[a].min(lat.dims[a] as isize - 1 - c[a]) as f64).fold(f64::INFINITY, f64::min);
        let w = 2.0 * de - 1.0;
        let slot = if edge < band { &mut out.boundary_max } else { &mut out.interior_max };
        *slot = slot.max(w);
    }
    Ok(out)
}

/// Targets a finished design is checked against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyTargets {
    pub r_min_solid: f64,
    pub r_min_void: f64,
    /// Maximum-size ring.
    pub max_size: Option<RegionSpec>,
    pub gap: Option<f64>,
    /// Width of the boundary band used for the thickness split.
    pub boundary_band: f64,
}

/// Allowed slack for each check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Share of a phase the opening may remove.
    pub morphology: f64,
    /// Largest allowed local maximum-size value.
    pub max_size_local: f64,
    /// Elements by which the measured gap may fall short.
    pub gap_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { morphology: 0.02, max_size_local: 0.02, gap_slack: 1.0 }
    }
}

/// Maximum-size measure on the binary field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxSizeCheck {
    pub aggregate: f64,
    pub worst_local: f64,
    pub violating_cells: usize,
    /// Worst local value within the boundary band and outside it.
    pub worst_boundary: f64,
    pub worst_interior: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub cells: usize,
    pub solid_fraction: f64,
    pub gray_level: f64,
    /// Share of solid removed by an opening at the solid minimum size.
    pub solid_violation: f64,
    /// Share of void removed by an opening at the void minimum size.
    pub void_violation: f64,
    pub max_size: Option<MaxSizeCheck>,
    pub gap: Option<GapWitness>,
    pub solid_components: usize,
    pub closed_cavities: usize,
    pub thickness: ThicknessSplit,
}

/// One failed check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    MinSolid { removed: f64 },
    MinVoid { removed: f64 },
    MaxSize { worst_local: f64 },
    Gap { measured: f64, target: f64 },
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Violation::MinSolid { removed } => {
                write!(f, "solid minimum size: opening removes {removed:.4} of the solid")
            }
            Violation::MinVoid { removed } => write!(f, "void minimum size: opening removes {removed:.4} of the void"),
            Violation::MaxSize { worst_local } => write!(f, "maximum size: worst local value {worst_local:.4}"),
            Violation::Gap { measured, target } => write!(f, "minimum gap: {measured:.3} below {target:.3}"),
        }
    }
}

impl VerificationReport {
    pub fn violations(&self, targets: &VerifyTargets, tol: &Tolerances) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.solid_violation > tol.morphology {
            out.push(Violation::MinSolid { removed: self.solid_violation });
        }
        if self.void_violation > tol.morphology {
            out.push(Violation::MinVoid { removed: self.void_violation });
        }
        if let Some(m) = self.max_size {
            if m.worst_local > tol.max_size_local {
                out.push(Violation::MaxSize { worst_local: m.worst_local });
            }
        }
        if let (Some(target), Some(g)) = (targets.gap, self.gap) {
            if g.gap < target - tol.gap_slack {
                out.push(Violation::Gap { measured: g.gap, target });
            }
        }
        out
    }
}

fn removed_share(mask: &[bool], opened: &[bool]) -> f64 {
    let total = mask.iter().filter(|v| **v).count();
    if total == 0 {
        return 0.0;
    }
    let diff = mask.iter().zip(opened).filter(|(a, b)| a != b).count();
    diff as f64 / total as f64
}

/// Checks a density field given on `grid` (symmetry planes are unfolded
/// first).
pub fn measure(grid: &GridSpec, rho: &[f64], targets: &VerifyTargets) -> Result<VerificationReport> {
    if rho.len() != grid.element_count() {
        return Err(Error::LengthMismatch { expected: grid.element_count(), got: rho.len() });
    }
    let (full, map) = grid.unfolded();
    let rho_full: Vec<f64> = map.iter().map(|&s| rho[s]).collect();
    let solid = binarize(&rho_full);
    let void: Vec<bool> = solid.iter().map(|s| !s).collect();
    let ndim = full.ndim();

    let se_solid = StructuringElement::ball(targets.r_min_solid - 0.5, ndim)?;
    let se_void = StructuringElement::ball(targets.r_min_void - 0.5, ndim)?;
    let solid_violation = removed_share(&solid, &opening(&full, &solid, &se_solid, false)?);
    let void_violation = removed_share(&void, &opening(&full, &void, &se_void, true)?);

    let max_size = match targets.max_size {
        Some(region) => {
            let op = build_region(&full, region, BoundaryTreatment::Corrected)?;
            let binary: Vec<f64> = solid.iter().map(|&s| if s { 1.0 } else { 0.0 }).collect();
            let locals = local_constraints(&binary, &op, MAX_SIZE_EPSILON, 1.0)?;
            let lat = Lattice::of(&full);
            let (mut worst_boundary, mut worst_interior) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for (e, &g) in locals.iter().enumerate() {
                if edge_distance(&lat, ndim, e) < targets.boundary_band {
                    worst_boundary = worst_boundary.max(g);
                } else {
                    worst_interior = worst_interior.max(g);
                }
            }
            Some(MaxSizeCheck {
                aggregate: aggregate(&locals, MAX_SIZE_EPSILON, MAX_SIZE_EXPONENT)?,
                worst_local: worst_boundary.max(worst_interior),
                violating_cells: locals.iter().filter(|g| **g > 1e-12).count(),
                worst_boundary,
                worst_interior,
            })
        }
        None => None,
    };
    let search = targets.gap.map_or(0.0, |g| g + 2.0);
    let (gap, solid_components) = min_gap(&full, &solid, search)?;
    let solid_count = solid.iter().filter(|s| **s).count();
    Ok(VerificationReport {
        cells: solid.len(),
        solid_fraction: solid_count as f64 / solid.len().max(1) as f64,
        gray_level: gray_level(&rho_full),
        solid_violation,
        void_violation,
        max_size,
        gap,
        solid_components,
        closed_cavities: closed_cavities(&full, &solid)?,
        thickness: thickness_split(&full, &solid, targets.boundary_band)?,
    })
}
