//! Property checks run by the `verify` command: the GEC approximation
//! guarantee against the exhaustive oracle, the contracted-weight bound,
//! contamination freedom at `P = K` and equal SINRs after power control.

use rand::Rng;

use crate::assign::{
    approximation_ratio, assign, brute_force_opt_cut, gec, Algorithm, ORACLE_MAX_USERS,
};
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::experiment::{evaluate, LEMMA_TOL};
use crate::rng::{substream, Purpose};
use crate::scenario::generate_scenario;

/// Relative slack on the approximation-ratio comparison.
pub const RATIO_TOL: f64 = 1e-9;
/// Largest accepted `max SINR / min SINR` after max-min power control.
pub const MAX_SINR_SPREAD: f64 = 1.001;
/// Relative SINR agreement required between algorithms at `P = K`.
pub const EQUAL_SINR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            checked: 0,
            failed: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyPlan {
    /// Random cut instances compared against the oracle.
    pub instances: usize,
    pub min_users: usize,
    pub max_users: usize,
    pub pilots: Vec<usize>,
    /// Simulated trials for the `P = K` and power-control checks.
    pub trials: u64,
    pub seed: u64,
}

impl Default for VerifyPlan {
    fn default() -> Self {
        VerifyPlan {
            instances: 500,
            min_users: 4,
            max_users: 9,
            pilots: vec![2, 3, 4],
            trials: 20,
            seed: 1,
        }
    }
}

/// `β_k` drawn log-uniformly over `[1e-3, 1]`, with `K` uniform in
/// `min_users..=max_users` and `P` uniform over `pilots`.
pub fn random_cut_instance<R: Rng>(rng: &mut R, min_users: usize, max_users: usize, pilots: &[usize]) -> (Vec<f64>, usize) {
    let users = rng.random_range(min_users..=max_users);
    let p = pilots[rng.random_range(0..pilots.len())];
    let beta = (0..users)
        .map(|_| 10f64.powf(rng.random_range(-3.0..=0.0)))
        .collect();
    (beta, p)
}

/// Approximation ratio, contraction bound and weight conservation of GEC on
/// random instances.
pub fn cut_checks(plan: &VerifyPlan) -> Result<[CheckOutcome; 3]> {
    if plan.max_users > ORACLE_MAX_USERS {
        return Err(Error::OracleTooLarge {
            users: plan.max_users,
            limit: ORACLE_MAX_USERS,
        });
    }
    if plan.min_users < 1 || plan.min_users > plan.max_users || plan.pilots.is_empty() {
        return Err(Error::param("empty range of instance sizes or pilot counts"));
    }
    let mut ratio = CheckOutcome::new("gec cut >= (P-1)/(P+1) * optimum");
    let mut lemma = CheckOutcome::new("contracted weight <= 2(K-P)/((K-1)(P+1)) * W_K");
    let mut conservation = CheckOutcome::new("cut + contracted = total weight");
    for i in 0..plan.instances {
        let mut rng = substream(plan.seed, i as u64, Purpose::Instance);
        let (beta, p) = random_cut_instance(&mut rng, plan.min_users, plan.max_users, &plan.pilots);
        let (_, report) = gec(&beta, p)?;
        let opt = brute_force_opt_cut(&beta, p)?;
        let floor = approximation_ratio(p) * opt.w_opt;
        ratio.record(report.w_cut >= floor * (1.0 - RATIO_TOL));
        lemma.record(report.satisfies_lemma(LEMMA_TOL));
        conservation.record(report.conservation_error() <= 1e-9);
    }
    Ok([ratio, lemma, conservation])
}

/// Contamination freedom and equal SINR of GEC, IWGF and IBASIC at
/// `P = K`, plus equal per-user SINRs after power control at fewer pilots.
pub fn scenario_checks(cfg: &SimConfig, plan: &VerifyPlan) -> Result<[CheckOutcome; 3]> {
    cfg.validate()?;
    let users = cfg.num_users;
    let mut clean = CheckOutcome::new("P = K leaves every v_k = 0");
    let mut equal = CheckOutcome::new("P = K gives equal SINR across gec/iwgf/ibasic");
    let mut spread = CheckOutcome::new("max-min SINRs equal within 0.1%");
    let contention = [(users / 4).max(1), (users / 2).max(1)];
    for trial in 0..plan.trials {
        let scn = generate_scenario(cfg, trial);
        let mut sinrs = Vec::new();
        for algo in [Algorithm::Gec, Algorithm::Iwgf, Algorithm::Ibasic] {
            let mut rng = substream(cfg.master_seed, trial, Purpose::Assignment { pilots: users });
            let a = assign(algo, &scn, users, cfg, &mut rng)?;
            clean.record(a.assignment.is_contamination_free());
            let o = evaluate(cfg, &scn, algo, users, trial)?;
            spread.record(o.sinr_spread <= MAX_SINR_SPREAD);
            sinrs.push(o.sinr);
        }
        let reference = sinrs[0];
        equal.record(
            sinrs
                .iter()
                .all(|s| (s - reference).abs() <= EQUAL_SINR_TOL * reference.abs()),
        );
        for p in contention {
            let o = evaluate(cfg, &scn, Algorithm::Gec, p, trial)?;
            spread.record(o.sinr_spread <= MAX_SINR_SPREAD);
        }
    }
    Ok([clean, equal, spread])
}

pub fn run(cfg: &SimConfig, plan: &VerifyPlan) -> Result<VerifyReport> {
    let mut checks: Vec<CheckOutcome> = cut_checks(plan)?.into();
    checks.extend(scenario_checks(cfg, plan)?);
    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = SimConfig {
            num_aps: 40,
            num_users: 10,
            ..SimConfig::default()
        };
        let plan = VerifyPlan {
            instances: 60,
            trials: 3,
            ..VerifyPlan::default()
        };
        let report = run(&cfg, &plan).unwrap();
        for c in &report.checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn oversized_oracle_refused() {
        let plan = VerifyPlan {
            max_users: 13,
            ..VerifyPlan::default()
        };
        assert!(matches!(cut_checks(&plan), Err(Error::OracleTooLarge { .. })));
    }
}
