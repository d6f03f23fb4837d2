//! Linear elasticity on the structured element grid.
//!
//! Nodes are numbered x fastest like elements; DOF `d * node + c` holds
//! component `c`. Dirichlet DOFs are eliminated, springs add to the diagonal.

mod banded;
pub mod element;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::math;
pub use banded::{BandCholesky, BandMatrix};
pub use element::{unit_stiffness, ElementKind};

/// Modified SIMP interpolation `E = E_min + rho^penal (E0 - E_min)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub e0: f64,
    pub e_min: f64,
    pub nu: f64,
    pub penal: f64,
}

impl Default for Material {
    fn default() -> Self {
        Self { e0: 1.0, e_min: 1e-6, nu: 0.3, penal: 3.0 }
    }
}

impl Material {
    pub fn new(e0: f64, e_min: f64, nu: f64, penal: f64) -> Result<Self> {
        if !(e0 > 0.0 && e_min > 0.0 && e_min < e0) {
            return Err(Error::InvalidMaterial(format!("need 0 < E_min < E0, got {e_min} and {e0}")));
        }
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::InvalidMaterial(format!("Poisson ratio {nu} outside (-1, 0.5)")));
        }
        if !(penal >= 1.0) {
            return Err(Error::InvalidMaterial(format!("penalization {penal} below 1")));
        }
        Ok(Self { e0, e_min, nu, penal })
    }

    pub fn with_penal(self, penal: f64) -> Self {
        Self { penal, ..self }
    }

    pub fn modulus(&self, rho: f64) -> f64 {
        self.e_min + math::powf(rho, self.penal) * (self.e0 - self.e_min)
    }

    pub fn modulus_derivative(&self, rho: f64) -> f64 {
        self.penal * math::powf(rho, self.penal - 1.0) * (self.e0 - self.e_min)
    }
}

/// Node and DOF numbering of the structured mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    ndim: usize,
    dims: [usize; 3],
    kind: ElementKind,
}

impl Mesh {
    pub fn new(grid: &GridSpec) -> Result<Self> {
        let kind = ElementKind::for_ndim(grid.ndim()).ok_or_else(|| {
            Error::InvalidGrid(format!("finite elements need 2 or 3 dimensions, got {}", grid.ndim()))
        })?;
        Ok(Self { ndim: grid.ndim(), dims: grid.dims(), kind })
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn element_count(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn node_dims(&self) -> [usize; 3] {
        let mut n = [1; 3];
        for a in 0..self.ndim {
            n[a] = self.dims[a] + 1;
        }
        n
    }

    pub fn node_count(&self) -> usize {
        self.node_dims().iter().product()
    }

    pub fn dof_count(&self) -> usize {
        self.ndim * self.node_count()
    }

    pub fn node(&self, ix: usize, iy: usize, iz: usize) -> usize {
        let n = self.node_dims();
        ix + n[0] * (iy + n[1] * iz)
    }

    pub fn node_coords(&self, node: usize) -> [usize; 3] {
        let n = self.node_dims();
        [node % n[0], (node / n[0]) % n[1], node / (n[0] * n[1])]
    }

    pub fn dof(&self, node: usize, component: usize) -> usize {
        self.ndim * node + component
    }

    /// DOFs of element `e` in the local order of [`unit_stiffness`].
    pub fn element_dofs(&self, e: usize, out: &mut Vec<usize>) {
        out.clear();
        let nx = self.dims[0];
        let ny = self.dims[1];
        let (ix, iy, iz) = (e % nx, (e / nx) % ny, e / (nx * ny));
        let corners: &[(usize, usize, usize)] = match self.kind {
            ElementKind::Quad4 => &[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)],
            ElementKind::Hex8 => {
                &[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
            }
        };
        for &(dx, dy, dz) in corners {
            let node = self.node(ix + dx, iy + dy, iz + dz);
            for c in 0..self.ndim {
                out.push(self.dof(node, c));
            }
        }
    }
}

/// What the state solve is evaluated for.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveKind {
    /// `f^T u`.
    Compliance,
    /// `t^T u` for a selection vector `t`.
    Output(Vec<f64>),
}

/// Loads, supports and springs of one analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadCase {
    pub forces: Vec<f64>,
    pub fixed: Vec<usize>,
    pub springs: Vec<(usize, f64)>,
    pub objective: ObjectiveKind,
}

impl LoadCase {
    pub fn new(dof_count: usize) -> Self {
        Self {
            forces: vec![0.0; dof_count],
            fixed: Vec::new(),
            springs: Vec::new(),
            objective: ObjectiveKind::Compliance,
        }
    }

    fn target(&self) -> &[f64] {
        match &self.objective {
            ObjectiveKind::Compliance => &self.forces,
            ObjectiveKind::Output(t) => t,
        }
    }
}

/// Linear solver choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    /// Direct banded Cholesky, the default in 2D.
    Banded,
    /// Matrix-free Jacobi-preconditioned conjugate gradients.
    Cg { tolerance: f64, max_iterations: usize },
}

impl SolverKind {
    pub fn default_for(ndim: usize) -> Self {
        if ndim >= 3 {
            SolverKind::Cg { tolerance: 1e-8, max_iterations: 20_000 }
        } else {
            SolverKind::Banded
        }
    }
}

/// Displacements of one state solve plus what the adjoint needs.
#[derive(Debug, Clone)]
pub struct StateSolution {
    pub displacement: Vec<f64>,
    pub objective: f64,
    moduli: Vec<f64>,
    factor: Option<BandCholesky>,
}

/// Precomputed mesh data for repeated analyses.
#[derive(Debug, Clone)]
pub struct FemModel {
    mesh: Mesh,
    load: LoadCase,
    solver: SolverKind,
    k0: Vec<f64>,
    edofs: Vec<usize>,
    equation: Vec<Option<usize>>,
    equations: usize,
    bandwidth: usize,
}

impl FemModel {
    pub fn new(grid: &GridSpec, load: LoadCase, solver: SolverKind, nu: f64) -> Result<Self> {
        let mesh = Mesh::new(grid)?;
        let ndof = mesh.dof_count();
        if load.forces.len() != ndof {
            return Err(Error::LengthMismatch { expected: ndof, got: load.forces.len() });
        }
        if let ObjectiveKind::Output(t) = &load.objective {
            if t.len() != ndof {
                return Err(Error::LengthMismatch { expected: ndof, got: t.len() });
            }
        }
        for &d in load.fixed.iter().chain(load.springs.iter().map(|s| &s.0)) {
            if d >= ndof {
                return Err(Error::IndexOutOfRange { index: d, count: ndof });
            }
        }
        let k0 = unit_stiffness(mesh.kind(), nu);
        let nd = mesh.kind().dofs();
        let mut edofs = Vec::with_capacity(mesh.element_count() * nd);
        let mut buf = Vec::with_capacity(nd);
        for e in 0..mesh.element_count() {
            mesh.element_dofs(e, &mut buf);
            edofs.extend_from_slice(&buf);
        }

        // Number equations along the shorter axis first to keep the band narrow.
        let mut fixed = vec![false; ndof];
        for &d in &load.fixed {
            fixed[d] = true;
        }
        let nn = mesh.node_dims();
        let mut axes = [0usize, 1, 2];
        axes[..mesh.ndim()].sort_by_key(|&a| nn[a]);
        let mut equation = vec![None; ndof];
        let mut next = 0;
        let mut idx = [0usize; 3];
        let total = mesh.node_count();
        for _ in 0..total {
            let node = mesh.node(idx[0], idx[1], idx[2]);
            for c in 0..mesh.ndim() {
                let d = mesh.dof(node, c);
                if !fixed[d] {
                    equation[d] = Some(next);
                    next += 1;
                }
            }
            for &a in &axes {
                idx[a] += 1;
                if idx[a] < nn[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        let mut bandwidth = 0;
        for el in edofs.chunks(nd) {
            let eqs = el.iter().filter_map(|&d| equation[d]);
            let (lo, hi) = eqs.fold((usize::MAX, 0), |(lo, hi), q| (lo.min(q), hi.max(q)));
            if hi >= lo {
                bandwidth = bandwidth.max(hi - lo);
            }
        }
        Ok(Self { mesh, load, solver, k0, edofs, equation, equations: next, bandwidth })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn load(&self) -> &LoadCase {
        &self.load
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn element_stiffness(&self) -> &[f64] {
        &self.k0
    }

    fn reduce(&self, full: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.equations];
        for (d, q) in self.equation.iter().enumerate() {
            if let Some(q) = q {
                r[*q] = full[d];
            }
        }
        r
    }

    fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        self.equation.iter().map(|q| q.map_or(0.0, |q| reduced[q])).collect()
    }

    fn assemble(&self, moduli: &[f64]) -> BandMatrix {
        let nd = self.mesh.kind().dofs();
        let mut k = BandMatrix::zeros(self.equations, self.bandwidth);
        for (el, &e) in self.edofs.chunks(nd).zip(moduli) {
            for a in 0..nd {
                let Some(qa) = self.equation[el[a]] else { continue };
                for b in 0..nd {
                    let Some(qb) = self.equation[el[b]] else { continue };
                    if qb <= qa {
                        k.add(qa, qb, e * self.k0[a * nd + b]);
                    }
                }
            }
        }
        for &(d, s) in &self.load.springs {
            if let Some(q) = self.equation[d] {
                k.add(q, q, s);
            }
        }
        k
    }

    /// Reduced matrix-vector product `K x`.
    fn multiply(&self, moduli: &[f64], x: &[f64], y: &mut [f64]) {
        let nd = self.mesh.kind().dofs();
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut xe = [0.0; 24];
        let mut qs = [usize::MAX; 24];
        for (el, &e) in self.edofs.chunks(nd).zip(moduli) {
            for a in 0..nd {
                match self.equation[el[a]] {
                    Some(q) => {
                        qs[a] = q;
                        xe[a] = x[q];
                    }
                    None => {
                        qs[a] = usize::MAX;
                        xe[a] = 0.0;
                    }
                }
            }
            for a in 0..nd {
                if qs[a] == usize::MAX {
                    continue;
                }
                let row = &self.k0[a * nd..(a + 1) * nd];
                let s: f64 = row.iter().zip(&xe[..nd]).map(|(k, v)| k * v).sum();
                y[qs[a]] += e * s;
            }
        }
        for &(d, s) in &self.load.springs {
            if let Some(q) = self.equation[d] {
                y[q] += s * x[q];
            }
        }
    }

    fn diagonal(&self, moduli: &[f64]) -> Vec<f64> {
        let nd = self.mesh.kind().dofs();
        let mut diag = vec![0.0; self.equations];
        for (el, &e) in self.edofs.chunks(nd).zip(moduli) {
            for a in 0..nd {
                if let Some(q) = self.equation[el[a]] {
                    diag[q] += e * self.k0[a * nd + a];
                }
            }
        }
        for &(d, s) in &self.load.springs {
            if let Some(q) = self.equation[d] {
                diag[q] += s;
            }
        }
        diag
    }

    fn cg(&self, moduli: &[f64], b: &[f64], tolerance: f64, max_iterations: usize) -> Result<Vec<f64>> {
        let n = b.len();
        let diag = self.diagonal(moduli);
        if diag.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::Singular);
        }
        let bnorm = math::sqrt(b.iter().map(|v| v * v).sum());
        let mut x = vec![0.0; n];
        if bnorm == 0.0 {
            return Ok(x);
        }
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut q = vec![0.0; n];
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut rnorm = bnorm;
        for _ in 0..max_iterations {
            self.multiply(moduli, &p, &mut q);
            let pq: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
            if !(pq > 0.0) {
                return Err(Error::Singular);
            }
            let alpha = rz / pq;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            rnorm = math::sqrt(r.iter().map(|v| v * v).sum());
            if rnorm <= tolerance * bnorm {
                return Ok(x);
            }
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(Error::SolverNonConvergence { iterations: max_iterations, residual: rnorm / bnorm })
    }

    fn moduli(&self, rho: &[f64], material: &Material) -> Result<Vec<f64>> {
        let n = self.mesh.element_count();
        if rho.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: rho.len() });
        }
        Ok(rho.iter().map(|&r| material.modulus(r)).collect())
    }

    fn solve_reduced(&self, moduli: &[f64], factor: Option<&BandCholesky>, rhs: &[f64]) -> Result<Vec<f64>> {
        match (self.solver, factor) {
            (_, Some(f)) => Ok(f.solve(rhs)),
            (SolverKind::Cg { tolerance, max_iterations }, None) => self.cg(moduli, rhs, tolerance, max_iterations),
            (SolverKind::Banded, None) => Ok(self.assemble(moduli).factorize()?.solve(rhs)),
        }
    }

    /// Solves `K(rho) u = f` and evaluates the objective.
    pub fn solve_state(&self, rho: &[f64], material: &Material) -> Result<StateSolution> {
        let moduli = self.moduli(rho, material)?;
        if self.equations == 0 {
            return Err(Error::Singular);
        }
        let factor = match self.solver {
            SolverKind::Banded => Some(self.assemble(&moduli).factorize()?),
            SolverKind::Cg { .. } => None,
        };
        let f = self.reduce(&self.load.forces);
        let u = self.expand(&self.solve_reduced(&moduli, factor.as_ref(), &f)?);
        let objective = self.load.target().iter().zip(&u).map(|(t, u)| t * u).sum();
        Ok(StateSolution { displacement: u, objective, moduli, factor })
    }

    /// Gradient of the objective with respect to each element density.
    pub fn objective_sensitivity(&self, state: &StateSolution, rho: &[f64], material: &Material) -> Result<Vec<f64>> {
        let n = self.mesh.element_count();
        if rho.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: rho.len() });
        }
        let u = &state.displacement;
        let adjoint = match &self.load.objective {
            ObjectiveKind::Compliance => u.iter().map(|v| -v).collect::<Vec<f64>>(),
            ObjectiveKind::Output(t) => {
                let rhs: Vec<f64> = self.reduce(t).iter().map(|v| -v).collect();
                self.expand(&self.solve_reduced(&state.moduli, state.factor.as_ref(), &rhs)?)
            }
        };
        let nd = self.mesh.kind().dofs();
        let mut grad = Vec::with_capacity(n);
        for (el, &r) in self.edofs.chunks(nd).zip(rho) {
            let mut s = 0.0;
            for a in 0..nd {
                let la = adjoint[el[a]];
                if la == 0.0 {
                    continue;
                }
                let row = &self.k0[a * nd..(a + 1) * nd];
                s += la * el.iter().zip(row).map(|(&d, k)| k * u[d]).sum::<f64>();
            }
            grad.push(material.modulus_derivative(r) * s);
        }
        Ok(grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Cantilever: left edge clamped, downward load at the right-bottom node.
    fn cantilever(nx: usize, ny: usize) -> (GridSpec, LoadCase) {
        let g = GridSpec::new_2d(nx, ny).unwrap();
        let mesh = Mesh::new(&g).unwrap();
        let mut lc = LoadCase::new(mesh.dof_count());
        for iy in 0..=ny {
            let n = mesh.node(0, iy, 0);
            lc.fixed.push(mesh.dof(n, 0));
            lc.fixed.push(mesh.dof(n, 1));
        }
        lc.forces[mesh.dof(mesh.node(nx, 0, 0), 1)] = -1.0;
        (g, lc)
    }

    fn sample_density(n: usize) -> Vec<f64> {
        (0..n).map(|i| 0.3 + 0.6 * (((i * 7919) % 101) as f64 / 101.0)).collect()
    }

    #[test]
    fn energy_identity_holds() {
        let (g, lc) = cantilever(12, 5);
        let m = FemModel::new(&g, lc, SolverKind::Banded, 0.3).unwrap();
        let rho = sample_density(60);
        let mat = Material::default();
        let s = m.solve_state(&rho, &mat).unwrap();
        // u^T K u summed element by element equals f^T u.
        let nd = 8;
        let mut energy = 0.0;
        let mut dofs = Vec::new();
        for e in 0..60 {
            m.mesh().element_dofs(e, &mut dofs);
            let k = m.element_stiffness();
            let mut s_e = 0.0;
            for a in 0..nd {
                for b in 0..nd {
                    s_e += s.displacement[dofs[a]] * k[a * nd + b] * s.displacement[dofs[b]];
                }
            }
            energy += mat.modulus(rho[e]) * s_e;
        }
        assert_relative_eq!(energy, s.objective, max_relative = 1e-10);
        assert!(s.objective > 0.0);
    }

    #[test]
    fn solid_cantilever_matches_beam_theory_trend() {
        // Slender beam: deflection grows roughly with length cubed.
        let mat = Material { penal: 1.0, ..Material::default() };
        let mut tips = Vec::new();
        for &nx in &[20usize, 40] {
            let (g, lc) = cantilever(nx, 4);
            let m = FemModel::new(&g, lc, SolverKind::Banded, 0.3).unwrap();
            let s = m.solve_state(&vec![1.0; nx * 4], &mat).unwrap();
            tips.push(s.objective);
        }
        let ratio = tips[1] / tips[0];
        assert!(ratio > 7.0 && ratio < 8.5, "compliance ratio {ratio}");
    }

    #[test]
    fn compliance_sensitivity_matches_finite_differences() {
        let (g, lc) = cantilever(8, 4);
        let m = FemModel::new(&g, lc, SolverKind::Banded, 0.3).unwrap();
        let rho = sample_density(32);
        let mat = Material { penal: 3.0, ..Material::default() };
        let s = m.solve_state(&rho, &mat).unwrap();
        let grad = m.objective_sensitivity(&s, &rho, &mat).unwrap();
        let h = 1e-6;
        for e in [0, 9, 31] {
            let mut p = rho.clone();
            let mut q = rho.clone();
            p[e] += h;
            q[e] -= h;
            let fd =
                (m.solve_state(&p, &mat).unwrap().objective - m.solve_state(&q, &mat).unwrap().objective) / (2.0 * h);
            assert_relative_eq!(grad[e], fd, max_relative = 1e-5);
            assert!(grad[e] < 0.0);
        }
    }

    #[test]
    fn output_sensitivity_matches_finite_differences() {
        let (g, mut lc) = cantilever(8, 4);
        let mesh = Mesh::new(&g).unwrap();
        let mut t = vec![0.0; mesh.dof_count()];
        t[mesh.dof(mesh.node(8, 4, 0), 0)] = 1.0;
        lc.objective = ObjectiveKind::Output(t);
        lc.springs.push((mesh.dof(mesh.node(8, 4, 0), 0), 0.1));
        let m = FemModel::new(&g, lc, SolverKind::Banded, 0.3).unwrap();
        let rho = sample_density(32);
        let mat = Material { penal: 2.5, ..Material::default() };
        let s = m.solve_state(&rho, &mat).unwrap();
        let grad = m.objective_sensitivity(&s, &rho, &mat).unwrap();
        let h = 1e-6;
        for e in [3, 17, 30] {
            let mut p = rho.clone();
            let mut q = rho.clone();
            p[e] += h;
            q[e] -= h;
            let fd =
                (m.solve_state(&p, &mat).unwrap().objective - m.solve_state(&q, &mat).unwrap().objective) / (2.0 * h);
            assert_relative_eq!(grad[e], fd, epsilon = 1e-9, max_relative = 1e-5);
        }
    }

    #[test]
    fn cg_agrees_with_banded() {
        let (g, lc) = cantilever(10, 6);
        let rho = sample_density(60);
        let mat = Material::default();
        let direct = FemModel::new(&g, lc.clone(), SolverKind::Banded, 0.3).unwrap().solve_state(&rho, &mat).unwrap();
        let iterative = FemModel::new(&g, lc, SolverKind::Cg { tolerance: 1e-12, max_iterations: 10_000 }, 0.3)
            .unwrap()
            .solve_state(&rho, &mat)
            .unwrap();
        assert_relative_eq!(direct.objective, iterative.objective, max_relative = 1e-8);
    }

    #[test]
    fn three_d_compliance_is_positive_and_sensitivities_match() {
        let g = GridSpec::new_3d(4, 2, 3).unwrap();
        let mesh = Mesh::new(&g).unwrap();
        let mut lc = LoadCase::new(mesh.dof_count());
        for iy in 0..=2 {
            for iz in 0..=3 {
                let n = mesh.node(0, iy, iz);
                for c in 0..3 {
                    lc.fixed.push(mesh.dof(n, c));
                }
            }
        }
        lc.forces[mesh.dof(mesh.node(4, 1, 3), 2)] = -1.0;
        let m = FemModel::new(&g, lc, SolverKind::Cg { tolerance: 1e-12, max_iterations: 10_000 }, 0.3).unwrap();
        let rho = sample_density(24);
        let mat = Material::default();
        let s = m.solve_state(&rho, &mat).unwrap();
        assert!(s.objective > 0.0);
        let grad = m.objective_sensitivity(&s, &rho, &mat).unwrap();
        let h = 1e-6;
        let mut p = rho.clone();
        let mut q = rho.clone();
        p[5] += h;
        q[5] -= h;
        let fd = (m.solve_state(&p, &mat).unwrap().objective - m.solve_state(&q, &mat).unwrap().objective) / (2.0 * h);
        assert_relative_eq!(grad[5], fd, max_relative = 1e-5);
    }

    #[test]
    fn unsupported_structure_is_singular() {
        let g = GridSpec::new_2d(4, 2).unwrap();
        let mesh = Mesh::new(&g).unwrap();
        let mut lc = LoadCase::new(mesh.dof_count());
        lc.forces[0] = 1.0;
        let m = FemModel::new(&g, lc, SolverKind::Banded, 0.3).unwrap();
        let err = m.solve_state(&[1.0; 8], &Material::default()).unwrap_err();
        assert_eq!(err, Error::Singular);
    }

    #[test]
    fn zero_load_gives_zero_objective() {
        let (g, mut lc) = cantilever(6, 3);
        lc.forces.iter_mut().for_each(|f| *f = 0.0);
        let m = FemModel::new(&g, lc, SolverKind::Banded, 0.3).unwrap();
        let s = m.solve_state(&[0.5; 18], &Material::default()).unwrap();
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn invalid_material_rejected() {
        assert!(Material::new(1.0, 2.0, 0.3, 3.0).is_err());
        assert!(Material::new(1.0, 1e-6, 0.5, 3.0).is_err());
        assert!(Material::new(1.0, 1e-6, 0.3, 0.5).is_err());
    }
}
