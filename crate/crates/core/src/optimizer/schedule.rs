//! Continuation on penalization and projection sharpness.

use alloc::vec::Vec;

use crate::math;

/// Joint continuation: penalization and sharpness advance together at every
/// stage until both reach their caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub eta_start: f64,
    pub eta_step: f64,
    pub eta_max: f64,
    pub beta_start: f64,
    pub beta_factor: f64,
    pub beta_max: f64,
    pub iterations_per_stage: usize,
    pub tolerance: f64,
    pub move_limit_start: f64,
    pub move_limit_end: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            eta_start: 1.0,
            eta_step: 0.25,
            eta_max: 3.0,
            beta_start: 1.5,
            beta_factor: 1.5,
            beta_max: 38.0,
            iterations_per_stage: 40,
            tolerance: 1e-3,
            move_limit_start: 0.5,
            move_limit_end: 0.05,
        }
    }
}

/// Parameters of one continuation stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub index: usize,
    pub eta: f64,
    pub beta: f64,
    pub move_limit: f64,
}

impl Schedule {
    /// Linear in penalization: the start value at `eta_start`, the end value
    /// at `eta_max`.
    pub fn move_limit(&self, eta: f64) -> f64 {
        let span = self.eta_max - self.eta_start;
        if span <= 0.0 {
            return self.move_limit_end;
        }
        let slope = (self.move_limit_start - self.move_limit_end) / span;
        (slope * (self.eta_max - eta) + self.move_limit_end).clamp(self.move_limit_end, self.move_limit_start)
    }

    pub fn stages(&self) -> Vec<Stage> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let eta = (self.eta_start + self.eta_step * k as f64).min(self.eta_max);
            let beta = (self.beta_start * math::powf(self.beta_factor, k as f64)).min(self.beta_max);
            out.push(Stage { index: k, eta, beta, move_limit: self.move_limit(eta) });
            let eta_done = eta >= self.eta_max || self.eta_step <= 0.0;
            let beta_done = beta >= self.beta_max || self.beta_factor <= 1.0;
            if eta_done && beta_done {
                break;
            }
            k += 1;
        }
        out
    }

    pub fn max_iterations(&self) -> usize {
        self.stages().len() * self.iterations_per_stage
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_schedule_has_nine_stages() {
        let s = Schedule::default();
        let st = s.stages();
        assert_eq!(st.len(), 9);
        assert_eq!(s.max_iterations(), 360);
        assert_relative_eq!(st[0].eta, 1.0);
        assert_relative_eq!(st[8].eta, 3.0);
        assert_relative_eq!(st[0].beta, 1.5);
        assert_relative_eq!(st[4].beta, 7.59375);
        assert_relative_eq!(st[8].beta, 38.0);
        for w in st.windows(2) {
            assert!(w[1].eta >= w[0].eta && w[1].beta >= w[0].beta);
        }
    }

    #[test]
    fn move_limit_endpoints() {
        let s = Schedule::default();
        assert_relative_eq!(s.move_limit(1.0), 0.5);
        assert_relative_eq!(s.move_limit(3.0), 0.05);
        assert_relative_eq!(s.move_limit(2.0), 0.275);
        assert_relative_eq!(s.move_limit(2.25), 0.21875);
    }

    #[test]
    fn fixed_parameters_give_one_stage() {
        let s = Schedule { eta_step: 0.0, beta_factor: 1.0, ..Schedule::default() };
        assert_eq!(s.stages().len(), 1);
    }
}
