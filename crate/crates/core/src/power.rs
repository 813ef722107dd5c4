//! Max-min uplink power control.
//!
//! For a fixed target `t`, the constraints `t <= SINR_k` with `η >= 0`
//! rearrange to `η >= t (F η + u)` with
//! `F_kk' = (a_kk' [k' ∈ U_k \ {k}] + b_kk') / G_k²` and `u_k = c_k / G_k²`,
//! both nonnegative. The smallest solution is the limit of the monotone
//! iteration `η ← t (F η + u)` started from below; the target is feasible
//! iff that limit stays within `η <= 1`. Bisection on `t` then finds the
//! largest common SINR.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::perf::SinrCoeffs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerControl {
    /// Bisection stops once `t_hi − t_lo <= tol_bisect · t_hi`.
    pub tol_bisect: f64,
    /// Fixed point accepted once no component grew by more than this
    /// fraction of its value in the last step.
    pub fp_tol: f64,
    /// Iterations before the fixed point is solved for directly.
    pub fp_max_iter: usize,
}

impl Default for PowerControl {
    fn default() -> Self {
        PowerControl {
            tol_bisect: 1e-4,
            fp_tol: 1e-10,
            fp_max_iter: 10_000,
        }
    }
}

impl PowerControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_bisect > 0.0 && self.tol_bisect < 1.0) {
            return Err(Error::config("tol_bisect", "must be in (0, 1)"));
        }
        if !(self.fp_tol > 0.0 && self.fp_tol < 1.0) {
            return Err(Error::config("fp_tol", "must be in (0, 1)"));
        }
        if self.fp_max_iter == 0 {
            return Err(Error::config("fp_max_iter", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MaxMinSolution {
    /// Common SINR reached by every user (linear).
    pub t_star: f64,
    pub eta: Vec<f64>,
    /// Bisection steps taken.
    pub iterations: usize,
    /// Set when no positive target was feasible and `t_star` is 0.
    pub feasible_floor: bool,
}

/// The affine map `η ↦ t (F η + u)` for a set of SINR coefficients.
#[derive(Debug, Clone)]
pub struct FeasibilityMap {
    f: Matrix,
    u: Vec<f64>,
}

impl FeasibilityMap {
    /// Fails when a user has no channel estimate at all (`G_k = 0`).
    pub fn new(coef: &SinrCoeffs) -> Option<Self> {
        let users = coef.num_users();
        if coef.g.iter().any(|&g| g <= 0.0) {
            return None;
        }
        let f = Matrix::from_fn(users, users, |k, other| {
            let mut v = coef.b[(k, other)];
            if coef.shares_pilot(k, other) {
                v += coef.a[(k, other)];
            }
            v / (coef.g[k] * coef.g[k])
        });
        let u = (0..users).map(|k| coef.c[k] / (coef.g[k] * coef.g[k])).collect();
        Some(FeasibilityMap { f, u })
    }

    pub fn users(&self) -> usize {
        self.u.len()
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `t (F η + u)` written into `out`.
    pub fn apply_into(&self, t: f64, eta: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            let row = self.f.row(k);
            let dot: f64 = row.iter().zip(eta).map(|(f, e)| f * e).sum();
            *o = t * (dot + self.u[k]);
        }
    }

    pub fn apply(&self, t: f64, eta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.users()];
        self.apply_into(t, eta, &mut out);
        out
    }

    /// Smallest `η` with `η >= t (F η + u)`, or `None` if it exceeds 1
    /// anywhere. Near the feasibility boundary the iteration contracts
    /// slowly; if the cap is hit first, the limit is solved for directly.
    ///
    /// `start` must satisfy `start <= t (F start + u)` and lie below the
    /// answer; zero always does, as does the result for any smaller `t`.
    pub fn minimal_fixed_point(&self, t: f64, start: &[f64], pc: &PowerControl) -> Option<Vec<f64>> {
        if t == 0.0 {
            return Some(vec![0.0; self.users()]);
        }
        let mut eta = start.to_vec();
        let mut next = vec![0.0; self.users()];
        for _ in 0..pc.fp_max_iter {
            self.apply_into(t, &eta, &mut next);
            if next.iter().any(|&x| x > 1.0) {
                return None;
            }
            let settled = next
                .iter()
                .zip(&eta)
                .all(|(&n, &e)| n - e <= pc.fp_tol * n);
            std::mem::swap(&mut eta, &mut next);
            if settled {
                return Some(eta);
            }
        }
        self.solve_limit(t)
    }

    /// Solves `(I − tF) η = t u` by Gaussian elimination with partial
    /// pivoting. With `F, u >= 0` and `u > 0`, a positive solution exists
    /// iff the spectral radius of `tF` is below 1, and it is then the
    /// limit of the monotone iteration.
    fn solve_limit(&self, t: f64) -> Option<Vec<f64>> {
        let n = self.users();
        let mut m = Matrix::from_fn(n, n + 1, |r, c| match c {
            c if c == n => t * self.u[r],
            c if c == r => 1.0 - t * self.f[(r, c)],
            c => -t * self.f[(r, c)],
        });
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| m[(x, col)].abs().total_cmp(&m[(y, col)].abs()))?;
            if m[(pivot, col)] == 0.0 {
                return None;
            }
            if pivot != col {
                for c in col..=n {
                    let tmp = m[(col, c)];
                    m[(col, c)] = m[(pivot, c)];
                    m[(pivot, c)] = tmp;
                }
            }
            for r in col + 1..n {
                let factor = m[(r, col)] / m[(col, col)];
                if factor != 0.0 {
                    for c in col..=n {
                        m[(r, c)] -= factor * m[(col, c)];
                    }
                }
            }
        }
        let mut eta = vec![0.0; n];
        for r in (0..n).rev() {
            let tail: f64 = (r + 1..n).map(|c| m[(r, c)] * eta[c]).sum();
            eta[r] = (m[(r, n)] - tail) / m[(r, r)];
        }
        eta.iter().all(|&e| e > 0.0 && e <= 1.0).then_some(eta)
    }
}

/// Minimal power vector meeting SINR target `t` for every user, if one
/// exists within `0 <= η <= 1`.
pub fn check_feasible(t: f64, coef: &SinrCoeffs, pc: &PowerControl) -> Option<Vec<f64>> {
    assert!(t >= 0.0, "SINR target must be nonnegative");
    if t == 0.0 {
        return Some(vec![0.0; coef.num_users()]);
    }
    let map = FeasibilityMap::new(coef)?;
    map.minimal_fixed_point(t, &vec![0.0; map.users()], pc)
}

/// Upper end of the bisection bracket, `min_k G_k² / c_k`: even with no
/// interference and full power no user can exceed it.
pub fn sinr_upper_bound(coef: &SinrCoeffs) -> f64 {
    (0..coef.num_users())
        .map(|k| coef.g[k] * coef.g[k] / coef.c[k])
        .fold(f64::INFINITY, f64::min)
}

/// Largest common SINR by bisection over feasibility checks.
pub fn maxmin_bisection(coef: &SinrCoeffs, pc: &PowerControl) -> MaxMinSolution {
    let users = coef.num_users();
    let floor = || MaxMinSolution {
        t_star: 0.0,
        eta: vec![0.0; users],
        iterations: 0,
        feasible_floor: true,
    };
    let Some(map) = FeasibilityMap::new(coef) else {
        return floor();
    };
    let mut hi = sinr_upper_bound(coef);
    if !(hi.is_finite() && hi > 0.0) {
        return floor();
    }
    let zero = vec![0.0; users];
    if let Some(eta) = map.minimal_fixed_point(hi, &zero, pc) {
        return MaxMinSolution {
            t_star: hi,
            eta: clamp_unit(eta),
            iterations: 0,
            feasible_floor: false,
        };
    }
    let mut lo = 0.0;
    let mut eta_lo = zero;
    let mut iterations = 0;
    while hi - lo > pc.tol_bisect * hi {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        match map.minimal_fixed_point(mid, &eta_lo, pc) {
            Some(eta) => {
                lo = mid;
                eta_lo = eta;
            }
            None => hi = mid,
        }
    }
    MaxMinSolution {
        t_star: lo,
        eta: clamp_unit(eta_lo),
        iterations,
        feasible_floor: lo == 0.0,
    }
}

fn clamp_unit(mut eta: Vec<f64>) -> Vec<f64> {
    for e in &mut eta {
        *e = e.clamp(0.0, 1.0);
    }
    eta
}
