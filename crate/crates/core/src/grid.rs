//! Regular element grids with optional symmetry planes on boundary faces.
//!
//! Elements are unit cells indexed with x fastest: `e = ix + nx * (iy + ny * iz)`.
//! Centroids sit at half-integer coordinates.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Which boundary face a symmetry plane lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    /// The face at coordinate 0.
    Low,
    /// The face at coordinate `n`.
    High,
}

/// A mirror plane through a boundary face of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryPlane {
    pub axis: Axis,
    pub face: Face,
}

impl SymmetryPlane {
    pub fn new(axis: Axis, face: Face) -> Self {
        Self { axis, face }
    }

    fn position(&self, extent: usize) -> f64 {
        match self.face {
            Face::Low => 0.0,
            Face::High => extent as f64,
        }
    }
}

/// Element centroid. Unused trailing coordinates are 0.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centroid(pub [f64; 3]);

impl Centroid {
    pub fn distance(&self, other: &Centroid) -> f64 {
        let mut s = 0.0;
        for k in 0..3 {
            let d = self.0[k] - other.0[k];
            s += d * d;
        }
        crate::math::sqrt(s)
    }
}

/// Design domain: element counts per axis, symmetry planes and elements
/// whose density is pinned.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    dims: [usize; 3],
    ndim: usize,
    symmetry: Vec<SymmetryPlane>,
    fixed_solid: Vec<usize>,
    fixed_void: Vec<usize>,
}

impl GridSpec {
    pub fn new_1d(nx: usize) -> Result<Self> {
        Self::with_dims(1, [nx, 1, 1])
    }

    pub fn new_2d(nx: usize, ny: usize) -> Result<Self> {
        Self::with_dims(2, [nx, ny, 1])
    }

    pub fn new_3d(nx: usize, ny: usize, nz: usize) -> Result<Self> {
        Self::with_dims(3, [nx, ny, nz])
    }

    fn with_dims(ndim: usize, dims: [usize; 3]) -> Result<Self> {
        if dims[..ndim].contains(&0) {
            return Err(Error::InvalidGrid(format!("zero extent in {dims:?}")));
        }
        Ok(Self { dims, ndim, symmetry: Vec::new(), fixed_solid: Vec::new(), fixed_void: Vec::new() })
    }

    /// Adds a symmetry plane. The axis must be active and the plane may not
    /// be declared twice.
    pub fn with_symmetry(mut self, plane: SymmetryPlane) -> Result<Self> {
        if plane.axis.index() >= self.ndim {
            return Err(Error::InvalidGrid(format!(
                "symmetry axis {:?} inactive in a {}-d grid",
                plane.axis, self.ndim
            )));
        }
        if self.symmetry.contains(&plane) {
            return Err(Error::InvalidGrid(format!("duplicate symmetry plane {plane:?}")));
        }
        self.symmetry.push(plane);
        Ok(self)
    }

    /// Pins elements to solid or void. The two sets must be disjoint.
    pub fn with_fixed(mut self, solid: Vec<usize>, void: Vec<usize>) -> Result<Self> {
        let n = self.element_count();
        for &e in solid.iter().chain(void.iter()) {
            if e >= n {
                return Err(Error::IndexOutOfRange { index: e, count: n });
            }
        }
        let mut solid = solid;
        let mut void = void;
        solid.sort_unstable();
        solid.dedup();
        void.sort_unstable();
        void.dedup();
        if let Some(e) = solid.iter().find(|e| void.binary_search(e).is_ok()) {
            return Err(Error::InvalidGrid(format!("element {e} fixed both solid and void")));
        }
        self.fixed_solid = solid;
        self.fixed_void = void;
        Ok(self)
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    /// Element counts `[nx, ny, nz]`; inactive axes are 1.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn element_count(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn symmetry(&self) -> &[SymmetryPlane] {
        &self.symmetry
    }

    pub fn fixed_solid(&self) -> &[usize] {
        &self.fixed_solid
    }

    pub fn fixed_void(&self) -> &[usize] {
        &self.fixed_void
    }

    /// Mirror plane on the given side of an axis, if any.
    pub fn has_plane(&self, axis: usize, face: Face) -> bool {
        self.symmetry.iter().any(|p| p.axis.index() == axis && p.face == face)
    }

    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.dims[0] * (iy + self.dims[1] * iz)
    }

    pub fn coords(&self, e: usize) -> [usize; 3] {
        let nx = self.dims[0];
        let ny = self.dims[1];
        [e % nx, (e / nx) % ny, e / (nx * ny)]
    }

    pub fn element_centroid(&self, e: usize) -> Result<Centroid> {
        let n = self.element_count();
        if e >= n {
            return Err(Error::IndexOutOfRange { index: e, count: n });
        }
        let c = self.coords(e);
        Ok(Centroid([c[0] as f64 + 0.5, c[1] as f64 + 0.5, c[2] as f64 + 0.5]))
    }

    /// Reflections of an element centroid across every non-empty subset of
    /// the symmetry planes.
    pub fn mirror_images(&self, e: usize) -> Result<Vec<Centroid>> {
        let base = self.element_centroid(e)?;
        let k = self.symmetry.len();
        let mut out = Vec::with_capacity((1usize << k) - 1);
        for mask in 1u32..(1u32 << k) {
            let mut c = base;
            for (bit, plane) in self.symmetry.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    let a = plane.axis.index();
                    let p = plane.position(self.dims[a]);
                    c.0[a] = 2.0 * p - c.0[a];
                }
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Maps a possibly out-of-range cell coordinate along `axis` back into
    /// the grid through a mirror plane. `Ok(None)` means the cell is outside
    /// a free face.
    pub(crate) fn fold(&self, axis: usize, t: isize, mirror: bool) -> Result<Option<usize>> {
        let n = self.dims[axis] as isize;
        if (0..n).contains(&t) {
            return Ok(Some(t as usize));
        }
        if !mirror {
            return Ok(None);
        }
        let (face, r) = if t < 0 { (Face::Low, -t - 1) } else { (Face::High, 2 * n - 1 - t) };
        if !self.has_plane(axis, face) {
            return Ok(None);
        }
        if (0..n).contains(&r) {
            Ok(Some(r as usize))
        } else {
            Err(Error::StencilExceedsDomain { reach: t.unsigned_abs(), extent: n as usize })
        }
    }

    /// Grid with every symmetry plane unfolded into an explicit copy.
    /// Returns the new grid and, for each new element, its source element.
    pub fn unfolded(&self) -> (GridSpec, Vec<usize>) {
        let mut dims = self.dims;
        for p in &self.symmetry {
            dims[p.axis.index()] *= 2;
        }
        let g =
            GridSpec { dims, ndim: self.ndim, symmetry: Vec::new(), fixed_solid: Vec::new(), fixed_void: Vec::new() };
        let mut map = Vec::with_capacity(g.element_count());
        for e in 0..g.element_count() {
            let c = g.coords(e);
            let mut src = [0usize; 3];
            for a in 0..3 {
                let n = self.dims[a];
                let low = self.has_plane(a, Face::Low);
                let high = self.has_plane(a, Face::High);
                src[a] = if low && high {
                    // Unfolded only once per axis in practice; treat as low.
                    if c[a] < n {
                        n - 1 - c[a]
                    } else {
                        c[a] - n
                    }
                } else if low {
                    if c[a] < n {
                        n - 1 - c[a]
                    } else {
                        c[a] - n
                    }
                } else if high {
                    if c[a] < n {
                        c[a]
                    } else {
                        2 * n - 1 - c[a]
                    }
                } else {
                    c[a]
                };
            }
            map.push(self.index(src[0], src[1], src[2]));
        }
        (g, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn centroid_of_first_element() {
        let g = GridSpec::new_2d(4, 3).unwrap();
        assert_eq!(g.element_centroid(0).unwrap(), Centroid([0.5, 0.5, 0.5]));
        assert_eq!(g.element_centroid(5).unwrap(), Centroid([1.5, 1.5, 0.5]));
        assert!(matches!(g.element_centroid(12), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn mirror_images_match_reflections() {
        let g = GridSpec::new_2d(4, 3)
            .unwrap()
            .with_symmetry(SymmetryPlane::new(Axis::X, Face::Low))
            .unwrap()
            .with_symmetry(SymmetryPlane::new(Axis::Y, Face::High))
            .unwrap();
        let imgs = g.mirror_images(g.index(1, 0, 0)).unwrap();
        assert_eq!(imgs.len(), 3);
        assert_relative_eq!(imgs[0].0[0], -1.5);
        assert_relative_eq!(imgs[1].0[1], 5.5);
        assert_relative_eq!(imgs[2].0[0], -1.5);
        assert_relative_eq!(imgs[2].0[1], 5.5);
    }

    #[test]
    fn symmetry_axis_must_be_active() {
        let g = GridSpec::new_2d(4, 3).unwrap();
        assert!(g.with_symmetry(SymmetryPlane::new(Axis::Z, Face::Low)).is_err());
    }

    #[test]
    fn fixed_sets_must_be_disjoint() {
        let g = GridSpec::new_2d(4, 3).unwrap();
        assert!(g.clone().with_fixed(vec![1, 2], vec![2]).is_err());
        assert!(g.clone().with_fixed(vec![99], vec![]).is_err());
        assert!(g.with_fixed(vec![1], vec![2]).is_ok());
    }

    #[test]
    fn fold_reflects_once() {
        let g = GridSpec::new_1d(5).unwrap().with_symmetry(SymmetryPlane::new(Axis::X, Face::Low)).unwrap();
        assert_eq!(g.fold(0, -1, true).unwrap(), Some(0));
        assert_eq!(g.fold(0, -5, true).unwrap(), Some(4));
        assert!(g.fold(0, -6, true).is_err());
        assert_eq!(g.fold(0, 5, true).unwrap(), None);
        assert_eq!(g.fold(0, -1, false).unwrap(), None);
    }

    #[test]
    fn unfolding_doubles_mirrored_axes() {
        let g = GridSpec::new_2d(3, 2).unwrap().with_symmetry(SymmetryPlane::new(Axis::X, Face::Low)).unwrap();
        let (u, map) = g.unfolded();
        assert_eq!(u.dims(), [6, 2, 1]);
        // Row y = 0: 2 1 0 | 0 1 2
        assert_eq!(&map[0..6], &[2, 1, 0, 0, 1, 2]);
    }

    #[test]
    fn zero_extent_rejected() {
        assert!(GridSpec::new_2d(0, 3).is_err());
    }
}
