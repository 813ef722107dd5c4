//! Monte Carlo harness: paired trials over algorithms and pilot counts,
//! aggregated into per-configuration means with 95% confidence intervals.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assign::{assign, contamination_variance, Algorithm, CutReport};
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::perf::{build_coeffs, sinr_uplink, spectral_efficiency, throughput};
use crate::power::maxmin_bisection;
use crate::rng::{substream, Purpose};
use crate::scenario::{generate_scenario, Scenario};

/// Normal quantile for a two-sided 95% interval.
pub const Z_95: f64 = 1.96;

/// Relative tolerance for the contraction-bound check on GEC runs.
pub const LEMMA_TOL: f64 = 1e-9;

/// One `(algorithm, P, τ_c, trial)` outcome; a row of the trials CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub algorithm: Algorithm,
    #[serde(rename = "P")]
    pub pilots: usize,
    pub tau_c: u32,
    pub trial: u64,
    /// Common max-min SINR (linear).
    pub sinr_linear: f64,
    pub rate_bps: f64,
    pub se_bpshz: f64,
    /// Mean contamination variance over users.
    pub mean_vk: f64,
}

/// Aggregate over trials for one `(algorithm, P, τ_c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: Algorithm,
    pub pilots: usize,
    pub tau_c: u32,
    pub n_trials: usize,
    pub sinr_mean: f64,
    pub sinr_ci95: f64,
    pub sinr_mean_db: f64,
    /// Half-width of the SINR interval mapped to dB around the mean.
    pub sinr_ci95_db: f64,
    pub rate_mean: f64,
    pub rate_ci95: f64,
    pub se_mean: f64,
    pub se_ci95: f64,
}

impl ResultRow {
    pub fn sinr_interval(&self) -> (f64, f64) {
        (self.sinr_mean - self.sinr_ci95, self.sinr_mean + self.sinr_ci95)
    }
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    algorithm: &'a str,
    #[serde(rename = "P")]
    pilots: usize,
    tau_c: u32,
    n: usize,
    sinr_mean_linear: f64,
    sinr_mean_db: f64,
    sinr_ci95: f64,
    rate_mean_bps: f64,
    rate_ci95: f64,
    se_mean: f64,
}

/// Everything one algorithm produced on one trial, before `τ_c` enters.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub sinr: f64,
    pub mean_vk: f64,
    /// `max_k SINR_k / min_k SINR_k` at the returned powers (1 when all are zero).
    pub sinr_spread: f64,
    pub cut: Option<CutReport>,
}

/// Mean and 95% normal-approximation half-width (sample variance, `n − 1`).
pub fn confidence_interval(samples: &[f64]) -> Result<(f64, f64)> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::param(format!(
            "confidence interval needs at least 2 samples, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    Ok((mean, Z_95 * var.sqrt() / nf.sqrt()))
}

fn spread(sinr: &[f64]) -> f64 {
    let max = sinr.iter().cloned().fold(f64::MIN, f64::max);
    let min = sinr.iter().cloned().fold(f64::MAX, f64::min);
    if max <= 0.0 {
        1.0
    } else {
        max / min
    }
}

/// Assigns pilots with `algo` on an existing scenario and solves max-min
/// power control.
pub fn evaluate(
    cfg: &SimConfig,
    scn: &Scenario,
    algo: Algorithm,
    pilots: usize,
    trial_index: u64,
) -> Result<TrialOutcome> {
    let mut rng = substream(cfg.master_seed, trial_index, Purpose::Assignment { pilots });
    let assigned = assign(algo, scn, pilots, cfg, &mut rng)?;
    let coef = build_coeffs(scn, &assigned.assignment, cfg);
    let sol = maxmin_bisection(&coef, &cfg.power);
    let vk = contamination_variance(&assigned.assignment, &scn.beta_k);
    Ok(TrialOutcome {
        sinr: sol.t_star,
        mean_vk: vk.iter().sum::<f64>() / vk.len() as f64,
        sinr_spread: spread(&sinr_uplink(&coef, &sol.eta)),
        cut: assigned.cut,
    })
}

fn finish(cfg: &SimConfig, algo: Algorithm, pilots: usize, tau_c: u32, trial: u64, o: &TrialOutcome) -> Result<TrialResult> {
    let rate = throughput(o.sinr, cfg.bandwidth, pilots as f64, tau_c as f64)?;
    Ok(TrialResult {
        algorithm: algo,
        pilots,
        tau_c,
        trial,
        sinr_linear: o.sinr,
        rate_bps: rate,
        se_bpshz: spectral_efficiency(rate, cfg.bandwidth),
        mean_vk: o.mean_vk,
    })
}

/// One full trial at `cfg.tau_c`.
pub fn run_trial(cfg: &SimConfig, algo: Algorithm, pilots: usize, trial_index: u64) -> Result<TrialResult> {
    check_pilots(cfg, pilots, &[cfg.tau_c])?;
    let scn = generate_scenario(cfg, trial_index);
    let outcome = evaluate(cfg, &scn, algo, pilots, trial_index)?;
    finish(cfg, algo, pilots, cfg.tau_c, trial_index, &outcome)
}

fn check_pilots(cfg: &SimConfig, pilots: usize, tau_c: &[u32]) -> Result<()> {
    if pilots == 0 {
        return Err(Error::param("P must be >= 1"));
    }
    if pilots > cfg.num_users {
        return Err(Error::param(format!(
            "P = {pilots} exceeds K = {} (P <= K required)",
            cfg.num_users
        )));
    }
    if let Some(t) = tau_c.iter().find(|&&t| pilots as u32 >= t) {
        return Err(Error::param(format!("P = {pilots} must be below tau_c = {t}")));
    }
    Ok(())
}

/// What a sweep runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub algorithms: Vec<Algorithm>,
    pub pilots: Vec<usize>,
    pub tau_c: Vec<u32>,
    pub trials: u64,
}

impl SweepPlan {
    pub fn validate(&self, cfg: &SimConfig) -> Result<()> {
        if self.algorithms.is_empty() || self.pilots.is_empty() || self.tau_c.is_empty() {
            return Err(Error::param("algorithm, pilot and tau_c lists must be non-empty"));
        }
        if self.trials < 2 {
            return Err(Error::param("at least 2 trials are needed for intervals"));
        }
        for &p in &self.pilots {
            check_pilots(cfg, p, &self.tau_c)?;
        }
        Ok(())
    }
}

/// Side checks collected while sweeping.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepChecks {
    pub gec_runs: usize,
    pub lemma_violations: usize,
    pub max_conservation_error: f64,
    pub solved: usize,
    /// Largest `max_k SINR_k / min_k SINR_k` over all solved trials.
    pub max_sinr_spread: f64,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    /// Ordered by algorithm, P, τ_c (plan order), then trial.
    pub trials: Vec<TrialResult>,
    pub rows: Vec<ResultRow>,
    pub checks: SweepChecks,
}

impl Sweep {
    pub fn row(&self, algo: Algorithm, pilots: usize, tau_c: u32) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algo && r.pilots == pilots && r.tau_c == tau_c)
    }
}

/// Runs every `(algorithm, P)` on the same scenario per trial index, then
/// expands each outcome over the `τ_c` list.
///
/// Trials run in parallel; results are merged by trial index so the output
/// does not depend on scheduling.
pub fn run_sweep(cfg: &SimConfig, plan: &SweepPlan) -> Result<Sweep> {
    cfg.validate()?;
    plan.validate(cfg)?;
    let combos: Vec<(Algorithm, usize)> = plan
        .algorithms
        .iter()
        .flat_map(|&a| plan.pilots.iter().map(move |&p| (a, p)))
        .collect();

    let per_trial: Vec<Vec<TrialOutcome>> = (0..plan.trials)
        .into_par_iter()
        .map(|trial| {
            let scn = generate_scenario(cfg, trial);
            combos
                .iter()
                .map(|&(algo, p)| evaluate(cfg, &scn, algo, p, trial))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut checks = SweepChecks {
        max_sinr_spread: 1.0,
        ..SweepChecks::default()
    };
    for outcome in per_trial.iter().flatten() {
        checks.solved += 1;
        checks.max_sinr_spread = checks.max_sinr_spread.max(outcome.sinr_spread);
        if let Some(cut) = &outcome.cut {
            checks.gec_runs += 1;
            if !cut.satisfies_lemma(LEMMA_TOL) {
                checks.lemma_violations += 1;
            }
            checks.max_conservation_error = checks.max_conservation_error.max(cut.conservation_error());
        }
    }

    let mut trials = Vec::with_capacity(combos.len() * plan.tau_c.len() * plan.trials as usize);
    for (c, &(algo, p)) in combos.iter().enumerate() {
        for &tau_c in &plan.tau_c {
            for (t, outcomes) in per_trial.iter().enumerate() {
                trials.push(finish(cfg, algo, p, tau_c, t as u64, &outcomes[c])?);
            }
        }
    }
    let rows = aggregate(&trials)?;
    Ok(Sweep { trials, rows, checks })
}

/// Groups trial results by `(algorithm, P, τ_c)` in first-seen order and
/// summarizes each group, accumulating in the given order.
pub fn aggregate(trials: &[TrialResult]) -> Result<Vec<ResultRow>> {
    let mut keys: Vec<(Algorithm, usize, u32)> = Vec::new();
    for t in trials {
        let key = (t.algorithm, t.pilots, t.tau_c);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(algorithm, pilots, tau_c)| {
            let group: Vec<&TrialResult> = trials
                .iter()
                .filter(|t| t.algorithm == algorithm && t.pilots == pilots && t.tau_c == tau_c)
                .collect();
            let column = |f: fn(&TrialResult) -> f64| group.iter().map(|t| f(t)).collect::<Vec<_>>();
            let (sinr_mean, sinr_ci95) = confidence_interval(&column(|t| t.sinr_linear))?;
            let (rate_mean, rate_ci95) = confidence_interval(&column(|t| t.rate_bps))?;
            let (se_mean, se_ci95) = confidence_interval(&column(|t| t.se_bpshz))?;
            let sinr_mean_db = 10.0 * sinr_mean.log10();
            let sinr_ci95_db = 10.0 * (sinr_mean + sinr_ci95).log10() - sinr_mean_db;
            Ok(ResultRow {
                algorithm,
                pilots,
                tau_c,
                n_trials: group.len(),
                sinr_mean,
                sinr_ci95,
                sinr_mean_db,
                sinr_ci95_db,
                rate_mean,
                rate_ci95,
                se_mean,
                se_ci95,
            })
        })
        .collect()
}

pub fn write_trials_csv<W: Write>(out: W, trials: &[TrialResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for t in trials {
        w.serialize(t)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trials_csv<R: Read>(input: R) -> Result<Vec<TrialResult>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<TrialResult>, _>>()?;
    Ok(rows)
}

pub fn write_summary_csv<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(SummaryRecord {
            algorithm: r.algorithm.name(),
            pilots: r.pilots,
            tau_c: r.tau_c,
            n: r.n_trials,
            sinr_mean_linear: r.sinr_mean,
            sinr_mean_db: r.sinr_mean_db,
            sinr_ci95: r.sinr_ci95,
            rate_mean_bps: r.rate_mean,
            rate_ci95: r.rate_ci95,
            se_mean: r.se_mean,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny() -> SimConfig {
        SimConfig {
            num_aps: 24,
            num_users: 6,
            tau_c: 200,
            master_seed: 5,
            ..SimConfig::default()
        }
    }

    #[test]
    fn interval_examples() {
        assert_eq!(confidence_interval(&[3.0, 3.0, 3.0]).unwrap(), (3.0, 0.0));
        let (m, h) = confidence_interval(&[0.0, 2.0]).unwrap();
        assert_eq!(m, 1.0);
        assert_relative_eq!(h, 1.96, max_relative = 1e-15);
        let (m2, h2) = confidence_interval(&[5.0, 7.0]).unwrap();
        assert_eq!(m2, 6.0);
        assert_relative_eq!(h2, h, max_relative = 1e-15);
        assert!(confidence_interval(&[1.0]).is_err());
    }

    #[test]
    fn trial_is_deterministic() {
        let cfg = tiny();
        for algo in Algorithm::ALL {
            assert_eq!(run_trial(&cfg, algo, 3, 4).unwrap(), run_trial(&cfg, algo, 3, 4).unwrap());
        }
    }

    #[test]
    fn p_equals_k_is_contamination_free() {
        let cfg = tiny();
        let gec = run_trial(&cfg, Algorithm::Gec, 6, 0).unwrap();
        assert_eq!(gec.mean_vk, 0.0);
        for algo in [Algorithm::Iwgf, Algorithm::Ibasic] {
            let other = run_trial(&cfg, algo, 6, 0).unwrap();
            assert_eq!(other.mean_vk, 0.0);
            assert_relative_eq!(other.sinr_linear, gec.sinr_linear, max_relative = 1e-6);
        }
    }

    #[test]
    fn trial_fields_are_consistent() {
        let cfg = tiny();
        let t = run_trial(&cfg, Algorithm::Gec, 3, 1).unwrap();
        let rate = cfg.bandwidth / 2.0 * (1.0 - 3.0 / 200.0) * (1.0 + t.sinr_linear).log2();
        assert_eq!(t.rate_bps, rate);
        assert_eq!(t.se_bpshz, 2.0 * t.rate_bps / cfg.bandwidth);
    }

    #[test]
    fn rejects_bad_plans() {
        let cfg = tiny();
        let plan = SweepPlan {
            algorithms: vec![Algorithm::Gec],
            pilots: vec![2],
            tau_c: vec![200],
            trials: 2,
        };
        assert!(plan.validate(&cfg).is_ok());
        for bad in [
            SweepPlan { pilots: vec![7], ..plan.clone() },
            SweepPlan { pilots: vec![], ..plan.clone() },
            SweepPlan { trials: 1, ..plan.clone() },
            SweepPlan { algorithms: vec![], ..plan.clone() },
        ] {
            assert!(bad.validate(&cfg).is_err());
        }
        assert!(run_trial(&cfg, Algorithm::Gec, 7, 0).is_err());
    }

    #[test]
    fn sweep_shapes_and_reaggregation() {
        let cfg = tiny();
        let plan = SweepPlan {
            algorithms: vec![Algorithm::Gec, Algorithm::Random],
            pilots: vec![1, 3],
            tau_c: vec![100, 200],
            trials: 4,
        };
        let sweep = run_sweep(&cfg, &plan).unwrap();
        assert_eq!(sweep.rows.len(), 8);
        assert_eq!(sweep.trials.len(), 32);
        assert_eq!(sweep.checks.lemma_violations, 0);
        assert_eq!(sweep.checks.gec_runs, 8);

        // Single pilot: everyone shares it, every trial.
        let random_p1: Vec<&TrialResult> = sweep
            .trials
            .iter()
            .filter(|t| t.algorithm == Algorithm::Random && t.pilots == 1)
            .collect();
        assert!(random_p1.iter().all(|t| t.mean_vk > 0.0));

        let short = sweep.row(Algorithm::Gec, 3, 100).unwrap();
        let long = sweep.row(Algorithm::Gec, 3, 200).unwrap();
        assert!(short.rate_mean < long.rate_mean);
        assert_eq!(short.sinr_mean, long.sinr_mean);

        let mut buf = Vec::new();
        write_trials_csv(&mut buf, &sweep.trials).unwrap();
        let header = std::str::from_utf8(&buf).unwrap().lines().next().unwrap();
        assert_eq!(header, "algorithm,P,tau_c,trial,sinr_linear,rate_bps,se_bpshz,mean_vk");
        let back = read_trials_csv(buf.as_slice()).unwrap();
        assert_eq!(back, sweep.trials);
        assert_eq!(aggregate(&back).unwrap(), sweep.rows);

        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &sweep.rows).unwrap();
        let header = std::str::from_utf8(&buf).unwrap().lines().next().unwrap();
        assert_eq!(
            header,
            "algorithm,P,tau_c,n,sinr_mean_linear,sinr_mean_db,sinr_ci95,rate_mean_bps,rate_ci95,se_mean"
        );
    }
}
