//! Uplink performance model: MMSE estimate gains, SINR coefficients,
//! throughput and spectral efficiency.

use serde::Serialize;

use crate::assign::Assignment;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scenario::Scenario;

/// Coefficients of the uplink SINR for one scenario and assignment.
///
/// `SINR_k = η_k G_k² / (Σ_{k'∈U_k\{k}} η_k' a_kk' + Σ_k' η_k' b_kk' + c_k)`
#[derive(Debug, Clone)]
pub struct SinrCoeffs {
    /// Expected estimated-channel gain, `gamma[(m, k)]`.
    pub gamma: Matrix,
    /// `G_k = Σ_m γ_mk`.
    pub g: Vec<f64>,
    /// `a_kk' = (Σ_m γ_mk β_mk' / β_mk)²`, dense.
    pub a: Matrix,
    /// `b_kk' = Σ_m γ_mk β_mk'`, dense (diagonal included).
    pub b: Matrix,
    /// `c_k = G_k / ρ_u`.
    pub c: Vec<f64>,
    pub pilot_of: Vec<usize>,
}

impl SinrCoeffs {
    pub fn num_users(&self) -> usize {
        self.g.len()
    }

    pub fn shares_pilot(&self, k: usize, other: usize) -> bool {
        k != other && self.pilot_of[k] == self.pilot_of[other]
    }

    /// Interference-plus-noise term of user `k` at powers `eta`.
    pub fn denominator(&self, k: usize, eta: &[f64]) -> f64 {
        let mut acc = self.c[k];
        let a = self.a.row(k);
        let b = self.b.row(k);
        for other in 0..self.num_users() {
            acc += eta[other] * b[other];
            if self.shares_pilot(k, other) {
                acc += eta[other] * a[other];
            }
        }
        acc
    }

    /// Debug dump as JSON (matrices row-major).
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            users: usize,
            aps: usize,
            gamma: &'a [f64],
            g: &'a [f64],
            a: &'a [f64],
            b: &'a [f64],
            c: &'a [f64],
            pilot_of: &'a [usize],
        }
        serde_json::to_string(&Dump {
            users: self.num_users(),
            aps: self.gamma.rows(),
            gamma: self.gamma.as_slice(),
            g: &self.g,
            a: self.a.as_slice(),
            b: self.b.as_slice(),
            c: &self.c,
            pilot_of: &self.pilot_of,
        })
        .expect("plain numeric data serializes")
    }
}

/// `γ_mk = τ_p ρ_p β_mk² / (τ_p ρ_p Σ_{k'∈U_k\{k}} β_mk' + 1)`.
pub fn estimate_gains(scn: &Scenario, asg: &Assignment, tau_p: f64, rho_p: f64) -> Matrix {
    let (aps, users) = (scn.num_aps(), scn.num_users());
    assert_eq!(asg.num_users(), users);
    let sets = asg.sets();
    let snr = tau_p * rho_p;
    let mut gamma = Matrix::zeros(aps, users);
    for m in 0..aps {
        let row = scn.beta.row(m);
        for set in &sets {
            let total: f64 = set.iter().map(|&k| row[k]).sum();
            for &k in set {
                let others = if set.len() == 1 { 0.0 } else { total - row[k] };
                gamma[(m, k)] = snr * row[k] * row[k] / (snr * others + 1.0);
            }
        }
    }
    gamma
}

/// Builds every SINR coefficient with `τ_p = P` pilot samples.
pub fn build_coeffs(scn: &Scenario, asg: &Assignment, cfg: &SimConfig) -> SinrCoeffs {
    let tau_p = asg.pilots() as f64;
    let gamma = estimate_gains(scn, asg, tau_p, cfg.rho_p);
    let (aps, users) = (scn.num_aps(), scn.num_users());
    let g = gamma.col_sums();
    let mut a = Matrix::zeros(users, users);
    let mut b = Matrix::zeros(users, users);
    for m in 0..aps {
        let beta = scn.beta.row(m);
        let gam = gamma.row(m);
        for k in 0..users {
            if gam[k] == 0.0 {
                continue;
            }
            let ratio = gam[k] / beta[k];
            for other in 0..users {
                a[(k, other)] += ratio * beta[other];
                b[(k, other)] += gam[k] * beta[other];
            }
        }
    }
    for k in 0..users {
        for other in 0..users {
            let s = a[(k, other)];
            a[(k, other)] = s * s;
        }
    }
    let c = g.iter().map(|gk| gk / cfg.rho_u).collect();
    SinrCoeffs {
        gamma,
        g,
        a,
        b,
        c,
        pilot_of: asg.pilot_of().to_vec(),
    }
}

/// Uplink SINR of every user at power coefficients `eta`.
pub fn sinr_uplink(coef: &SinrCoeffs, eta: &[f64]) -> Vec<f64> {
    assert_eq!(eta.len(), coef.num_users());
    (0..coef.num_users())
        .map(|k| eta[k] * coef.g[k] * coef.g[k] / coef.denominator(k, eta))
        .collect()
}

/// Uplink throughput `(B/2)(1 − τ_p/τ_c) log2(1 + SINR)` in bit/s.
pub fn throughput(sinr: f64, bandwidth: f64, tau_p: f64, tau_c: f64) -> Result<f64> {
    if !(0.0..tau_c).contains(&tau_p) {
        return Err(Error::param(format!(
            "pilot length {tau_p} must be in [0, tau_c = {tau_c})"
        )));
    }
    Ok(bandwidth / 2.0 * (1.0 - tau_p / tau_c) * (1.0 + sinr).log2())
}

/// Spectral efficiency `2R/B` in bit/s/Hz.
pub fn spectral_efficiency(rate: f64, bandwidth: f64) -> f64 {
    2.0 * rate / bandwidth
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_users_one_ap() -> (Scenario, Assignment) {
        let beta = Matrix::from_fn(1, 2, |_, k| [2.0, 1.0][k]);
        (Scenario::from_beta(beta), Assignment::new(vec![0, 0], 1).unwrap())
    }

    #[test]
    fn gains_hand_example() {
        let (s, a) = two_users_one_ap();
        let gamma = estimate_gains(&s, &a, 1.0, 1.0);
        assert_relative_eq!(gamma[(0, 0)], 2.0, max_relative = 1e-15);
        assert_relative_eq!(gamma[(0, 1)], 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn lone_user_gain_has_no_contamination() {
        let (s, _) = two_users_one_ap();
        let a = Assignment::identity(2, 2);
        let gamma = estimate_gains(&s, &a, 3.0, 0.5);
        assert_eq!(gamma[(0, 0)], 1.5 * 4.0);
        assert_eq!(gamma[(0, 1)], 1.5);
    }

    #[test]
    fn zero_fading_zero_gain() {
        let beta = Matrix::from_fn(2, 2, |m, k| if m == 0 && k == 1 { 0.0 } else { 1.0 });
        let s = Scenario::from_beta(beta);
        let gamma = estimate_gains(&s, &Assignment::new(vec![0, 0], 1).unwrap(), 1.0, 1.0);
        assert_eq!(gamma[(0, 1)], 0.0);
    }

    #[test]
    fn coefficient_hand_example() {
        let (s, a) = two_users_one_ap();
        let cfg = SimConfig {
            rho_p: 1.0,
            rho_u: 4.0,
            ..SimConfig::default()
        };
        let coef = build_coeffs(&s, &a, &cfg);
        assert_relative_eq!(coef.b[(0, 0)], 4.0, max_relative = 1e-15);
        assert_relative_eq!(coef.b[(0, 1)], 2.0, max_relative = 1e-15);
        assert_relative_eq!(coef.a[(0, 1)], 1.0, max_relative = 1e-15);
        assert_relative_eq!(coef.c[0], 0.5, max_relative = 1e-15);
        assert_eq!(coef.g, coef.gamma.col_sums());
    }

    #[test]
    fn sinr_basics() {
        let (s, a) = two_users_one_ap();
        let coef = build_coeffs(&s, &a, &SimConfig::default());
        assert_eq!(sinr_uplink(&coef, &[0.0, 0.0]), vec![0.0, 0.0]);
        let lo = sinr_uplink(&coef, &[0.3, 0.5])[0];
        let hi = sinr_uplink(&coef, &[0.6, 0.5])[0];
        assert!(hi > lo);
    }

    #[test]
    fn single_user_closed_form() {
        let beta = Matrix::from_fn(3, 1, |m, _| [1e-9, 4e-10, 2e-11][m]);
        let s = Scenario::from_beta(beta);
        let cfg = SimConfig::default();
        let coef = build_coeffs(&s, &Assignment::identity(1, 1), &cfg);
        let eta = 0.7;
        let expect = eta * coef.g[0].powi(2) / (eta * coef.b[(0, 0)] + coef.c[0]);
        assert_relative_eq!(sinr_uplink(&coef, &[eta])[0], expect, max_relative = 1e-15);
    }

    #[test]
    fn throughput_examples() {
        assert_eq!(throughput(0.0, 2e7, 100.0, 1000.0).unwrap(), 0.0);
        assert_relative_eq!(throughput(1.0, 2e7, 100.0, 1000.0).unwrap(), 9e6, max_relative = 1e-15);
        let r750 = throughput(3.0, 2e7, 20.0, 750.0).unwrap();
        let r1000 = throughput(3.0, 2e7, 20.0, 1000.0).unwrap();
        assert!(r750 < r1000);
        assert!(throughput(1.0, 2e7, 1000.0, 1000.0).is_err());
    }

    #[test]
    fn spectral_efficiency_examples() {
        assert_eq!(spectral_efficiency(0.0, 2e7), 0.0);
        assert_relative_eq!(spectral_efficiency(9e6, 2e7), 0.9, max_relative = 1e-15);
        assert_relative_eq!(
            spectral_efficiency(9e6, 4e7),
            spectral_efficiency(9e6, 2e7) / 2.0,
            max_relative = 1e-15
        );
    }
}
