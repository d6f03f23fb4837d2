//! Method of moving asymptotes with a primal-dual interior point subsolver.
//!
//! Solves `min f0(x) + a0 z + sum(c y + d y^2 / 2)` subject to
//! `f_i(x) - a_i z - y_i <= 0`, `xmin <= x <= xmax`, `y, z >= 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmaSettings {
    pub a0: f64,
    pub c: f64,
    pub d: f64,
    pub asymptote_init: f64,
    pub asymptote_increase: f64,
    pub asymptote_decrease: f64,
}

impl Default for MmaSettings {
    fn default() -> Self {
        Self { a0: 1.0, c: 1000.0, d: 1.0, asymptote_init: 0.5, asymptote_increase: 1.2, asymptote_decrease: 0.7 }
    }
}

const ALBEFA: f64 = 0.1;
const RAA0: f64 = 1e-5;
const EPSIMIN: f64 = 1e-7;

/// Function values and gradients at the current point.
#[derive(Debug, Clone)]
pub struct Evaluation<'a> {
    pub objective_gradient: &'a [f64],
    pub constraints: &'a [f64],
    pub constraint_gradients: &'a [Vec<f64>],
    /// Coefficient of `z` in each constraint.
    pub z_weights: &'a [f64],
}

/// MMA optimizer state carried between iterations.
#[derive(Debug, Clone)]
pub struct Mma {
    settings: MmaSettings,
    iteration: usize,
    xold1: Vec<f64>,
    xold2: Vec<f64>,
    low: Vec<f64>,
    upp: Vec<f64>,
}

impl Mma {
    pub fn new(n: usize, settings: MmaSettings) -> Self {
        Self { settings, iteration: 0, xold1: vec![0.0; n], xold2: vec![0.0; n], low: vec![0.0; n], upp: vec![1.0; n] }
    }

    /// One MMA step. Returns the new point, which lies inside
    /// `[xmin, xmax]` componentwise.
    pub fn update(&mut self, x: &[f64], xmin: &[f64], xmax: &[f64], eval: &Evaluation<'_>) -> Result<Vec<f64>> {
        let n = x.len();
        let m = eval.constraints.len();
        if xmin.len() != n || xmax.len() != n || eval.objective_gradient.len() != n || self.low.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: xmin.len().min(xmax.len()) });
        }
        if eval.constraint_gradients.len() != m || eval.z_weights.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: eval.constraint_gradients.len() });
        }
        if eval.constraint_gradients.iter().any(|g| g.len() != n) {
            return Err(Error::Mma(format!("constraint gradient length differs from {n}")));
        }
        self.iteration += 1;
        let s = self.settings;

        // Asymptotes.
        for j in 0..n {
            let span = xmax[j] - xmin[j];
            if self.iteration < 3 {
                self.low[j] = x[j] - s.asymptote_init * span;
                self.upp[j] = x[j] + s.asymptote_init * span;
            } else {
                let trend = (x[j] - self.xold1[j]) * (self.xold1[j] - self.xold2[j]);
                let factor = if trend > 0.0 {
                    s.asymptote_increase
                } else if trend < 0.0 {
                    s.asymptote_decrease
                } else {
                    1.0
                };
                let low = x[j] - factor * (self.xold1[j] - self.low[j]);
                let upp = x[j] + factor * (self.upp[j] - self.xold1[j]);
                self.low[j] = low.clamp(x[j] - 10.0 * span, x[j] - 0.01 * span);
                self.upp[j] = upp.clamp(x[j] + 0.01 * span, x[j] + 10.0 * span);
            }
        }

        let mut alfa = vec![0.0; n];
        let mut beta = vec![0.0; n];
        let mut p0 = vec![0.0; n];
        let mut q0 = vec![0.0; n];
        let mut pm = vec![vec![0.0; n]; m];
        let mut qm = vec![vec![0.0; n]; m];
        let mut b = vec![0.0; m];
        for j in 0..n {
            alfa[j] = (self.low[j] + ALBEFA * (x[j] - self.low[j])).max(xmin[j]);
            beta[j] = (self.upp[j] - ALBEFA * (self.upp[j] - x[j])).min(xmax[j]);
            let span_inv = 1.0 / (xmax[j] - xmin[j]).max(1e-5);
            let ux1 = self.upp[j] - x[j];
            let xl1 = x[j] - self.low[j];
            let (ux2, xl2) = (ux1 * ux1, xl1 * xl1);
            let g = eval.objective_gradient[j];
            let (gp, gn) = (g.max(0.0), (-g).max(0.0));
            let reg = 0.001 * (gp + gn) + RAA0 * span_inv;
            p0[j] = (gp + reg) * ux2;
            q0[j] = (gn + reg) * xl2;
            for i in 0..m {
                let g = eval.constraint_gradients[i][j];
                let (gp, gn) = (g.max(0.0), (-g).max(0.0));
                let reg = 0.001 * (gp + gn) + RAA0 * span_inv;
                pm[i][j] = (gp + reg) * ux2;
                qm[i][j] = (gn + reg) * xl2;
                b[i] += pm[i][j] / ux1 + qm[i][j] / xl1;
            }
        }
        for i in 0..m {
            b[i] -= eval.constraints[i];
        }

        let sub = Subproblem {
            low: &self.low,
            upp: &self.upp,
            alfa: &alfa,
            beta: &beta,
            p0: &p0,
            q0: &q0,
            p: &pm,
            q: &qm,
            a0: s.a0,
            a: eval.z_weights,
            b: &b,
            c: s.c,
            d: s.d,
        };
        let xnew = sub.solve()?;
        self.xold2 = core::mem::replace(&mut self.xold1, x.to_vec());
        Ok(xnew)
    }
}

struct Subproblem<'a> {
    low: &'a [f64],
    upp: &'a [f64],
    alfa: &'a [f64],
    beta: &'a [f64],
    p0: &'a [f64],
    q0: &'a [f64],
    p: &'a [Vec<f64>],
    q: &'a [Vec<f64>],
    a0: f64,
    a: &'a [f64],
    b: &'a [f64],
    c: f64,
    d: f64,
}

#[derive(Clone)]
struct State {
    x: Vec<f64>,
    y: Vec<f64>,
    z: f64,
    lam: Vec<f64>,
    xsi: Vec<f64>,
    eta: Vec<f64>,
    mu: Vec<f64>,
    zet: f64,
    s: Vec<f64>,
}

impl Subproblem<'_> {
    fn residual(&self, st: &State, epsi: f64) -> (f64, f64) {
        let (n, m) = (st.x.len(), st.y.len());
        let mut sq = 0.0;
        let mut mx: f64 = 0.0;
        let mut push = |r: f64| {
            sq += r * r;
            mx = mx.max(r.abs());
        };
        let mut gvec = vec![0.0; m];
        for j in 0..n {
            let ux1 = self.upp[j] - st.x[j];
            let xl1 = st.x[j] - self.low[j];
            let mut plam = self.p0[j];
            let mut qlam = self.q0[j];
            for i in 0..m {
                plam += self.p[i][j] * st.lam[i];
                qlam += self.q[i][j] * st.lam[i];
                gvec[i] += self.p[i][j] / ux1 + self.q[i][j] / xl1;
            }
            let dpsidx = plam / (ux1 * ux1) - qlam / (xl1 * xl1);
            push(dpsidx - st.xsi[j] + st.eta[j]);
            push(st.xsi[j] * (st.x[j] - self.alfa[j]) - epsi);
            push(st.eta[j] * (self.beta[j] - st.x[j]) - epsi);
        }
        let mut alam = 0.0;
        for i in 0..m {
            push(self.c + self.d * st.y[i] - st.mu[i] - st.lam[i]);
            push(gvec[i] - self.a[i] * st.z - st.y[i] + st.s[i] - self.b[i]);
            push(st.mu[i] * st.y[i] - epsi);
            push(st.lam[i] * st.s[i] - epsi);
            alam += self.a[i] * st.lam[i];
        }
        push(self.a0 - st.zet - alam);
        push(st.zet * st.z - epsi);
        (math::sqrt(sq), mx)
    }

    fn solve(&self) -> Result<Vec<f64>> {
        let n = self.alfa.len();
        let m = self.b.len();
        let mut st = State {
            x: (0..n).map(|j| 0.5 * (self.alfa[j] + self.beta[j])).collect(),
            y: vec![1.0; m],
            z: 1.0,
            lam: vec![1.0; m],
            xsi: vec![0.0; n],
            eta: vec![0.0; n],
            mu: vec![(0.5 * self.c).max(1.0); m],
            zet: 1.0,
            s: vec![1.0; m],
        };
        for j in 0..n {
            st.xsi[j] = (1.0 / (st.x[j] - self.alfa[j])).max(1.0);
            st.eta[j] = (1.0 / (self.beta[j] - st.x[j])).max(1.0);
        }
        if (0..n).any(|j| !(self.beta[j] > self.alfa[j])) {
            return Err(Error::Mma("empty variable interval".into()));
        }
        let mut epsi = 1.0;
        while epsi > EPSIMIN {
            let (mut norm, mut max) = self.residual(&st, epsi);
            let mut inner = 0;
            while max > 0.9 * epsi && inner < 200 {
                inner += 1;
                let dir = self.newton_direction(&st, epsi)?;
                let step = self.max_step(&st, &dir);
                let base = st.clone();
                let mut steg = step;
                let mut tries = 0;
                loop {
                    tries += 1;
                    st = base.clone();
                    st.apply(&dir, steg);
                    let (nn, nm) = self.residual(&st, epsi);
                    if nn <= norm || tries >= 50 {
                        norm = nn;
                        max = nm;
                        break;
                    }
                    steg /= 2.0;
                }
            }
            epsi *= 0.1;
        }
        if st.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Mma("non-finite iterate".into()));
        }
        Ok(st.x)
    }

    fn newton_direction(&self, st: &State, epsi: f64) -> Result<State> {
        let n = st.x.len();
        let m = st.y.len();
        let mut delx = vec![0.0; n];
        let mut diagx = vec![0.0; n];
        let mut gg = vec![vec![0.0; n]; m];
        let mut gvec = vec![0.0; m];
        for j in 0..n {
            let ux1 = self.upp[j] - st.x[j];
            let xl1 = st.x[j] - self.low[j];
            let (ux2, xl2) = (ux1 * ux1, xl1 * xl1);
            let mut plam = self.p0[j];
            let mut qlam = self.q0[j];
            for i in 0..m {
                plam += self.p[i][j] * st.lam[i];
                qlam += self.q[i][j] * st.lam[i];
                gvec[i] += self.p[i][j] / ux1 + self.q[i][j] / xl1;
                gg[i][j] = self.p[i][j] / ux2 - self.q[i][j] / xl2;
            }
            let dpsidx = plam / ux2 - qlam / xl2;
            delx[j] = dpsidx - epsi / (st.x[j] - self.alfa[j]) + epsi / (self.beta[j] - st.x[j]);
            diagx[j] = 2.0 * (plam / (ux2 * ux1) + qlam / (xl2 * xl1))
                + st.xsi[j] / (st.x[j] - self.alfa[j])
                + st.eta[j] / (self.beta[j] - st.x[j]);
        }
        let mut dely = vec![0.0; m];
        let mut dellam = vec![0.0; m];
        let mut diagy = vec![0.0; m];
        let mut diaglamyi = vec![0.0; m];
        let mut alam = 0.0;
        for i in 0..m {
            dely[i] = self.c + self.d * st.y[i] - st.lam[i] - epsi / st.y[i];
            dellam[i] = gvec[i] - self.a[i] * st.z - st.y[i] - self.b[i] + epsi / st.lam[i];
            diagy[i] = self.d + st.mu[i] / st.y[i];
            diaglamyi[i] = st.s[i] / st.lam[i] + 1.0 / diagy[i];
            alam += self.a[i] * st.lam[i];
        }
        let delz = self.a0 - alam - epsi / st.z;

        // Reduced (m + 1) system in (dlam, dz).
        let k = m + 1;
        let mut mat = vec![0.0; k * k];
        let mut rhs = vec![0.0; k];
        for i in 0..m {
            for l in 0..m {
                let s: f64 = (0..n).map(|j| gg[i][j] * gg[l][j] / diagx[j]).sum();
                mat[i * k + l] = s;
            }
            mat[i * k + i] += diaglamyi[i];
            mat[i * k + m] = self.a[i];
            mat[m * k + i] = self.a[i];
            rhs[i] = dellam[i] + dely[i] / diagy[i] - (0..n).map(|j| gg[i][j] * delx[j] / diagx[j]).sum::<f64>();
        }
        mat[m * k + m] = -st.zet / st.z;
        rhs[m] = delz;
        let sol = solve_dense(&mut mat, &mut rhs, k)?;
        let dlam: Vec<f64> = sol[..m].to_vec();
        let dz = sol[m];
        let dx: Vec<f64> = (0..n)
            .map(|j| {
                let gl: f64 = (0..m).map(|i| gg[i][j] * dlam[i]).sum();
                -delx[j] / diagx[j] - gl / diagx[j]
            })
            .collect();
        let dy: Vec<f64> = (0..m).map(|i| -dely[i] / diagy[i] + dlam[i] / diagy[i]).collect();
        let dxsi = (0..n)
            .map(|j| -st.xsi[j] + epsi / (st.x[j] - self.alfa[j]) - st.xsi[j] * dx[j] / (st.x[j] - self.alfa[j]))
            .collect();
        let deta = (0..n)
            .map(|j| -st.eta[j] + epsi / (self.beta[j] - st.x[j]) + st.eta[j] * dx[j] / (self.beta[j] - st.x[j]))
            .collect();
        let dmu = (0..m).map(|i| -st.mu[i] + epsi / st.y[i] - st.mu[i] * dy[i] / st.y[i]).collect();
        let dzet = -st.zet + epsi / st.z - st.zet * dz / st.z;
        let ds = (0..m).map(|i| -st.s[i] + epsi / st.lam[i] - st.s[i] * dlam[i] / st.lam[i]).collect();
        Ok(State { x: dx, y: dy, z: dz, lam: dlam, xsi: dxsi, eta: deta, mu: dmu, zet: dzet, s: ds })
    }

    /// Largest step keeping every positive variable positive, damped by 1.01.
    fn max_step(&self, st: &State, d: &State) -> f64 {
        let mut worst: f64 = 1.0;
        let mut check = |v: f64, dv: f64| worst = worst.max(-1.01 * dv / v);
        for i in 0..st.y.len() {
            check(st.y[i], d.y[i]);
            check(st.lam[i], d.lam[i]);
            check(st.mu[i], d.mu[i]);
            check(st.s[i], d.s[i]);
        }
        check(st.z, d.z);
        check(st.zet, d.zet);
        for j in 0..st.x.len() {
            check(st.xsi[j], d.xsi[j]);
            check(st.eta[j], d.eta[j]);
            check(st.x[j] - self.alfa[j], d.x[j]);
            check(self.beta[j] - st.x[j], -d.x[j]);
        }
        1.0 / worst
    }
}

impl State {
    fn apply(&mut self, d: &State, t: f64) {
        let axpy = |a: &mut Vec<f64>, b: &Vec<f64>| a.iter_mut().zip(b).for_each(|(x, y)| *x += t * y);
        axpy(&mut self.x, &d.x);
        axpy(&mut self.y, &d.y);
        axpy(&mut self.lam, &d.lam);
        axpy(&mut self.xsi, &d.xsi);
        axpy(&mut self.eta, &d.eta);
        axpy(&mut self.mu, &d.mu);
        axpy(&mut self.s, &d.s);
        self.z += t * d.z;
        self.zet += t * d.zet;
    }
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs())).unwrap_or(col);
        if a[piv * n + col].abs() < 1e-300 {
            return Err(Error::Mma("singular Newton system".into()));
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        for r in col + 1..n {
            let f = a[r * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= f * a[col * n + k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r * n + k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r * n + r];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Minimize sum (x - target)^2 subject to sum x <= budget.
    fn run_quadratic(target: &[f64], budget: f64, iters: usize) -> Vec<f64> {
        let n = target.len();
        let mut x = vec![0.5; n];
        let mut mma = Mma::new(n, MmaSettings::default());
        for _ in 0..iters {
            let grad: Vec<f64> = x.iter().zip(target).map(|(x, t)| 2.0 * (x - t)).collect();
            let g = [x.iter().sum::<f64>() / budget - 1.0];
            let dg = [vec![1.0 / budget; n]];
            let eval =
                Evaluation { objective_gradient: &grad, constraints: &g, constraint_gradients: &dg, z_weights: &[0.0] };
            let xmin: Vec<f64> = x.iter().map(|v| (v - 0.2f64).max(0.0)).collect();
            let xmax: Vec<f64> = x.iter().map(|v| (v + 0.2f64).min(1.0)).collect();
            let xn = mma.update(&x, &xmin, &xmax, &eval).unwrap();
            for j in 0..n {
                assert!(xn[j] >= xmin[j] - 1e-12 && xn[j] <= xmax[j] + 1e-12);
            }
            x = xn;
        }
        x
    }

    #[test]
    fn unconstrained_optimum_is_reached() {
        // Plain MMA ends in a small two-cycle whose size is set by the
        // closest allowed asymptote distance (1% of the box).
        let x = run_quadratic(&[0.2, 0.7, 0.9], 10.0, 40);
        assert_relative_eq!(x[0], 0.2, epsilon = 4e-3);
        assert_relative_eq!(x[1], 0.7, epsilon = 4e-3);
        assert_relative_eq!(x[2], 0.9, epsilon = 4e-3);
    }

    #[test]
    fn active_constraint_gives_kkt_point() {
        // Optimum of sum (x - 0.8)^2 with sum x <= 1.2 over 3 variables is 0.4 each.
        let x = run_quadratic(&[0.8, 0.8, 0.8], 1.2, 60);
        for v in &x {
            assert_relative_eq!(*v, 0.4, epsilon = 2e-3);
        }
    }

    #[test]
    fn epigraph_minimizes_the_larger_of_two_functions() {
        // min max((x - 0.2)^2, (x - 0.8)^2) has its optimum at 0.5.
        let mut x = vec![0.9];
        let mut mma = Mma::new(1, MmaSettings::default());
        for _ in 0..60 {
            let f = [(x[0] - 0.2f64).powi(2), (x[0] - 0.8f64).powi(2)];
            let df = [vec![2.0 * (x[0] - 0.2)], vec![2.0 * (x[0] - 0.8)]];
            let eval = Evaluation {
                objective_gradient: &[0.0],
                constraints: &f,
                constraint_gradients: &df,
                z_weights: &[1.0, 1.0],
            };
            let xmin = [(x[0] - 0.1f64).max(0.0)];
            let xmax = [(x[0] + 0.1f64).min(1.0)];
            x = mma.update(&x, &xmin, &xmax, &eval).unwrap();
        }
        assert_relative_eq!(x[0], 0.5, epsilon = 2e-3);
    }

    #[test]
    fn dense_solver_handles_pivoting() {
        let mut a = vec![0.0, 1.0, 2.0, 1.0];
        let mut b = vec![3.0, 4.0];
        let x = solve_dense(&mut a, &mut b, 2).unwrap();
        assert_relative_eq!(x[0], 0.5);
        assert_relative_eq!(x[1], 3.0);
    }
}
