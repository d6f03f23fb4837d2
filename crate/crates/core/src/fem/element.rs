//! Unit-modulus element stiffness matrices.

use alloc::vec;
use alloc::vec::Vec;

/// Element type of the structured mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    /// Bilinear square, plane stress, 8 DOFs.
    Quad4,
    /// Trilinear cube, 24 DOFs.
    Hex8,
}

impl ElementKind {
    pub fn for_ndim(ndim: usize) -> Option<Self> {
        match ndim {
            2 => Some(ElementKind::Quad4),
            3 => Some(ElementKind::Hex8),
            _ => None,
        }
    }

    pub fn dofs(self) -> usize {
        match self {
            ElementKind::Quad4 => 8,
            ElementKind::Hex8 => 24,
        }
    }
}

/// Row-major stiffness matrix of a unit element with `E = 1`.
///
/// Node order is counter-clockwise from the lower-left corner; for the hex
/// the bottom face comes first.
pub fn unit_stiffness(kind: ElementKind, nu: f64) -> Vec<f64> {
    match kind {
        ElementKind::Quad4 => quad4(nu),
        ElementKind::Hex8 => hex8(nu),
    }
}

fn quad4(nu: f64) -> Vec<f64> {
    let k = [
        1.0 / 2.0 - nu / 6.0,
        1.0 / 8.0 + nu / 8.0,
        -1.0 / 4.0 - nu / 12.0,
        -1.0 / 8.0 + 3.0 * nu / 8.0,
        -1.0 / 4.0 + nu / 12.0,
        -1.0 / 8.0 - nu / 8.0,
        nu / 6.0,
        1.0 / 8.0 - 3.0 * nu / 8.0,
    ];
    let idx: [[usize; 8]; 8] = [
        [0, 1, 2, 3, 4, 5, 6, 7],
        [1, 0, 7, 6, 5, 4, 3, 2],
        [2, 7, 0, 5, 6, 3, 4, 1],
        [3, 6, 5, 0, 7, 2, 1, 4],
        [4, 5, 6, 7, 0, 1, 2, 3],
        [5, 4, 3, 2, 1, 0, 7, 6],
        [6, 3, 4, 1, 2, 7, 0, 5],
        [7, 2, 1, 4, 3, 6, 5, 0],
    ];
    let scale = 1.0 / (1.0 - nu * nu);
    idx.iter().flat_map(|row| row.iter().map(move |&i| scale * k[i])).collect()
}

fn hex8(nu: f64) -> Vec<f64> {
    const SIGNS: [[f64; 3]; 8] = [
        [-1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0],
        [1.0, 1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0],
        [-1.0, 1.0, 1.0],
    ];
    let lambda = nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    let mu = 1.0 / (2.0 * (1.0 + nu));
    let mut d = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            d[i][j] = lambda;
        }
        d[i][i] = lambda + 2.0 * mu;
        d[i + 3][i + 3] = mu;
    }
    let g = 1.0 / crate::math::sqrt(3.0);
    let mut ke = vec![0.0; 24 * 24];
    for &gx in &[-g, g] {
        for &gy in &[-g, g] {
            for &gz in &[-g, g] {
                // Derivatives with respect to physical coordinates on a unit cube.
                let mut b = [[0.0; 24]; 6];
                for (a, s) in SIGNS.iter().enumerate() {
                    let dx = s[0] * (1.0 + s[1] * gy) * (1.0 + s[2] * gz) / 4.0;
                    let dy = s[1] * (1.0 + s[0] * gx) * (1.0 + s[2] * gz) / 4.0;
                    let dz = s[2] * (1.0 + s[0] * gx) * (1.0 + s[1] * gy) / 4.0;
                    let c = 3 * a;
                    b[0][c] = dx;
                    b[1][c + 1] = dy;
                    b[2][c + 2] = dz;
                    b[3][c] = dy;
                    b[3][c + 1] = dx;
                    b[4][c + 1] = dz;
                    b[4][c + 2] = dy;
                    b[5][c] = dz;
                    b[5][c + 2] = dx;
                }
                let weight = 1.0 / 8.0;
                let mut db = [[0.0; 24]; 6];
                for i in 0..6 {
                    for j in 0..24 {
                        db[i][j] = (0..6).map(|k| d[i][k] * b[k][j]).sum();
                    }
                }
                for i in 0..24 {
                    for j in 0..24 {
                        let s: f64 = (0..6).map(|k| b[k][i] * db[k][j]).sum();
                        ke[i * 24 + j] += weight * s;
                    }
                }
            }
        }
    }
    ke
}
