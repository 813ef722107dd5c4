use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::Value;
use tempfile::NamedTempFile;

use cellfree::assign::assign as run_assignment;
use cellfree::config::normalized_snr;
use cellfree::experiment::{run_sweep, write_summary_csv, write_trials_csv};
use cellfree::rng::{substream, Purpose};
use cellfree::scenario::generate_scenario;
use cellfree::verify::{self, VerifyPlan};
use cellfree::{SimConfig, SweepPlan};

use crate::{AssignArgs, ConfigArgs, SnrArgs, SweepArgs, VerifyArgs};

pub const EXIT_INVALID: ExitCode = ExitCode::FAILURE;
pub fn exit_check_failed() -> ExitCode {
    ExitCode::from(2)
}

/// Allowed relative mismatch between configured and computed SNR.
const SNR_TOLERANCE: f64 = 0.01;

/// Defaults, then the config file, then `--set` and `--seed`.
fn load_config(args: &ConfigArgs) -> Result<SimConfig> {
    let mut cfg = match &args.config {
        Some(path) => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .parse::<SimConfig>()
            .with_context(|| format!("in {}", path.display()))?,
        None => SimConfig::default(),
    };
    for item in &args.overrides {
        let Some((key, value)) = item.split_once('=') else {
            bail!("--set expects KEY=VALUE, got `{item}`");
        };
        cfg.apply(key.trim(), &Value::String(value.trim().to_string()))?;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_atomically(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name))
        .with_context(|| format!("writing {name}"))?;
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let tau_c = if args.tau_c.is_empty() {
        vec![cfg.tau_c]
    } else {
        args.tau_c.clone()
    };
    let plan = SweepPlan {
        algorithms: args.algos.clone(),
        pilots: args.pilots.clone(),
        tau_c,
        trials: args.trials,
    };
    plan.validate(&cfg)?;
    let result = run_sweep(&cfg, &plan)?;

    // Both files are rendered in memory so a failure never leaves a partial CSV.
    let mut trials_csv = Vec::new();
    write_trials_csv(&mut trials_csv, &result.trials)?;
    let mut summary_csv = Vec::new();
    write_summary_csv(&mut summary_csv, &result.rows)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    write_atomically(&args.out, "trials.csv", &trials_csv)?;
    write_atomically(&args.out, "summary.csv", &summary_csv)?;

    for r in &result.rows {
        println!(
            "{:<7} P={:<4} tau_c={:<5} n={:<6} SINR={:>9.3} dB ({:.4e} ± {:.2e})  R={:.4e} ± {:.2e} bit/s  SE={:.4}",
            r.algorithm,
            r.pilots,
            r.tau_c,
            r.n_trials,
            r.sinr_mean_db,
            r.sinr_mean,
            r.sinr_ci95,
            r.rate_mean,
            r.rate_ci95,
            r.se_mean
        );
    }
    let checks = &result.checks;
    if checks.lemma_violations > 0 {
        eprintln!(
            "contracted-weight bound violated in {} of {} GEC runs",
            checks.lemma_violations, checks.gec_runs
        );
        return Ok(exit_check_failed());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let plan = VerifyPlan {
        instances: args.instances,
        min_users: args.min_users,
        max_users: args.max_users,
        pilots: args.pilots.clone(),
        trials: args.trials,
        seed: cfg.master_seed,
    };
    let report = verify::run(&cfg, &plan)?;
    for c in &report.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{status} {:<55} {} checked, {} failed", c.name, c.checked, c.failed);
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        exit_check_failed()
    })
}

pub fn snr_check(args: &SnrArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let expected = normalized_snr(args.power, args.temperature, cfg.bandwidth, args.noise_figure);
    println!("computed normalized SNR: {expected:.4e}");
    let mut ok = true;
    for (name, value) in [("rho_p", cfg.rho_p), ("rho_u", cfg.rho_u)] {
        let rel = (value - expected).abs() / expected;
        let within = rel <= SNR_TOLERANCE;
        ok &= within;
        println!(
            "{} {name} = {value:.4e} (relative difference {rel:.3e})",
            if within { "PASS" } else { "FAIL" }
        );
    }
    Ok(if ok { ExitCode::SUCCESS } else { exit_check_failed() })
}

pub fn assign(args: &AssignArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.config)?;
    let scn = generate_scenario(&cfg, args.trial);
    let mut rng = substream(cfg.master_seed, args.trial, Purpose::Assignment { pilots: args.pilots });
    let assigned = run_assignment(args.algo, &scn, args.pilots, &cfg, &mut rng)?;
    if args.lines {
        print!("{}", assigned.assignment.to_lines());
    } else {
        println!("{}", assigned.assignment.to_json());
    }
    Ok(ExitCode::SUCCESS)
}
