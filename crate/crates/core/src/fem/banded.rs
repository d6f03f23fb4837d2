//! Symmetric positive definite banded Cholesky factorization.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Pivots below this fraction of the original diagonal mean a singular matrix.
const PIVOT_TOLERANCE: f64 = 1e-11;

/// Lower band storage: row `i` keeps columns `i - bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Adds `v` to entry `(i, j)`; only the lower triangle (`j <= i`) is
    /// stored, so callers pass each symmetric pair once.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(j <= i && i - j <= self.bw);
        let k = self.at(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.at(i, j)]
        }
    }

    /// Factorizes in place into `L L^T`.
    pub fn factorize(mut self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let (s, orig) = {
                    let (head, tail) = self.data.split_at(i * w);
                    let row_i = &tail[..w];
                    let row_j = if j == i { row_i } else { &head[j * w..(j + 1) * w] };
                    let a = &row_i[k0 + bw - i..j + bw - i];
                    let b = &row_j[k0 + bw - j..bw];
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    (row_i[j + bw - i] - dot, row_j[bw])
                };
                let value = if i == j {
                    if !(s > PIVOT_TOLERANCE * orig.abs()) || !s.is_finite() {
                        return Err(Error::Singular);
                    }
                    math::sqrt(s)
                } else {
                    s / orig
                };
                self.data[i * w + j + bw - i] = value;
            }
        }
        Ok(BandCholesky { l: self })
    }
}

/// A factorized band matrix.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    l: BandMatrix,
}

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.l.n, self.l.bw);
        let w = bw + 1;
        let d = &self.l.data;
        let mut y = b.to_vec();
        for i in 0..n {
            let k0 = i.saturating_sub(bw);
            let row = &d[i * w..(i + 1) * w];
            let s: f64 = row[k0 + bw - i..bw].iter().zip(&y[k0..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / row[bw];
        }
        for i in (0..n).rev() {
            let row = &d[i * w..(i + 1) * w];
            y[i] /= row[bw];
            let xi = y[i];
            let k0 = i.saturating_sub(bw);
            for (yk, l) in y[k0..i].iter_mut().zip(&row[k0 + bw - i..bw]) {
                *yk -= l * xi;
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_tridiagonal_system() {
        let n = 50;
        let mut a = BandMatrix::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
        }
        let dense = a.clone();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = a.factorize().unwrap().solve(&b);
        for i in 0..n {
            let mut s = 0.0;
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                s += dense.get(i, j) * x[j];
            }
            assert_relative_eq!(s, b[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn wider_band_matches_dense_reference() {
        let n = 30;
        let bw = 4;
        let mut a = BandMatrix::zeros(n, bw);
        for i in 0..n {
            a.add(i, i, 10.0 + i as f64 * 0.1);
            for j in i.saturating_sub(bw)..i {
                a.add(i, j, 1.0 / (1.0 + (i - j) as f64 + (i % 3) as f64));
            }
        }
        let dense = a.clone();
        let b: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let x = a.factorize().unwrap().solve(&b);
        for i in 0..n {
            let s: f64 = (0..n).map(|j| dense.get(i, j) * x[j]).sum();
            assert_relative_eq!(s, b[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        // Free-free spring chain: a rigid translation.
        let n = 4;
        let mut a = BandMatrix::zeros(n, 1);
        for i in 0..n - 1 {
            a.add(i, i, 1.0);
            a.add(i + 1, i + 1, 1.0);
            a.add(i + 1, i, -1.0);
        }
        assert!(matches!(a.factorize(), Err(Error::Singular)));
    }
}
