//! Simulation parameters and their file formats.
//!
//! A config file is either a JSON object or flat `key = value` lines (`#`
//! starts a comment). Keys are the field names listed on [`SimConfig::KEYS`];
//! anything not given keeps its default, which is the full-scale system
//! model (M = 400 APs, K = 100 users in a 1 km square).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::power::PowerControl;

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Unit in which distances enter the logarithms of the path-loss model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceUnit {
    Meters,
    Kilometers,
}

impl DistanceUnit {
    /// Meters per unit.
    pub fn scale(self) -> f64 {
        match self {
            DistanceUnit::Meters => 1.0,
            DistanceUnit::Kilometers => 1000.0,
        }
    }
}

impl FromStr for DistanceUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(DistanceUnit::Meters),
            "km" => Ok(DistanceUnit::Kilometers),
            other => Err(Error::config(
                "pl_distance_unit",
                format!("expected `m` or `km`, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for DistanceUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceUnit::Meters => "m",
            DistanceUnit::Kilometers => "km",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Side `D` of the square, wrapped region (m).
    pub side: f64,
    /// Path-loss reference distances (m).
    pub d0: f64,
    pub d1: f64,
    /// Carrier frequency (MHz).
    pub freq_mhz: f64,
    /// Antenna heights (m).
    pub h_ap: f64,
    pub h_user: f64,
    /// Shadow-fading standard deviation (dB).
    pub sigma_sf: f64,
    /// Normalized SNR for training and for uplink data.
    pub rho_p: f64,
    pub rho_u: f64,
    /// Bandwidth (Hz).
    pub bandwidth: f64,
    /// Coherence interval (samples).
    pub tau_c: u32,
    pub num_aps: usize,
    pub num_users: usize,
    pub master_seed: u64,
    pub pl_distance_unit: DistanceUnit,
    /// Seed IWGF with random users instead of the `P` strongest.
    pub iwgf_random_seeds: bool,
    /// Give IBASIC's first `P` users uniformly random pilots instead of
    /// distinct ones.
    pub ibasic_literal_random_init: bool,
    pub power: PowerControl,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            side: 1000.0,
            d0: 10.0,
            d1: 50.0,
            freq_mhz: 1900.0,
            h_ap: 15.0,
            h_user: 1.65,
            sigma_sf: 8.0,
            rho_p: 1.57e11,
            rho_u: 1.57e11,
            bandwidth: 2e7,
            tau_c: 1000,
            num_aps: 400,
            num_users: 100,
            master_seed: 0,
            pl_distance_unit: DistanceUnit::Kilometers,
            iwgf_random_seeds: false,
            ibasic_literal_random_init: false,
            power: PowerControl::default(),
        }
    }
}

impl SimConfig {
    pub const KEYS: &'static [&'static str] = &[
        "D",
        "d0",
        "d1",
        "f",
        "h_ap",
        "h_user",
        "sigma_sf",
        "rho_p",
        "rho_u",
        "B",
        "tau_c",
        "M",
        "K",
        "master_seed",
        "pl_distance_unit",
        "iwgf_random_seeds",
        "ibasic_literal_random_init",
        "tol_bisect",
        "fp_tol",
        "fp_max_iter",
    ];

    /// Smaller profile that runs a few hundred trials in seconds.
    pub fn desk_scale() -> Self {
        SimConfig {
            num_aps: 100,
            num_users: 25,
            ..SimConfig::default()
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    /// Sets one key. Numbers may be given as JSON numbers or strings.
    pub fn apply(&mut self, key: &str, value: &Value) -> Result<()> {
        match key {
            "D" => self.side = number(key, value)?,
            "d0" => self.d0 = number(key, value)?,
            "d1" => self.d1 = number(key, value)?,
            "f" => self.freq_mhz = number(key, value)?,
            "h_ap" => self.h_ap = number(key, value)?,
            "h_user" => self.h_user = number(key, value)?,
            "sigma_sf" => self.sigma_sf = number(key, value)?,
            "rho_p" => self.rho_p = number(key, value)?,
            "rho_u" => self.rho_u = number(key, value)?,
            "B" => self.bandwidth = number(key, value)?,
            "tau_c" => self.tau_c = integer(key, value)?,
            "M" => self.num_aps = integer(key, value)?,
            "K" => self.num_users = integer(key, value)?,
            "master_seed" => self.master_seed = integer(key, value)?,
            "pl_distance_unit" => self.pl_distance_unit = text(key, value)?.parse()?,
            "iwgf_random_seeds" => self.iwgf_random_seeds = boolean(key, value)?,
            "ibasic_literal_random_init" => self.ibasic_literal_random_init = boolean(key, value)?,
            "tol_bisect" => self.power.tol_bisect = number(key, value)?,
            "fp_tol" => self.power.fp_tol = number(key, value)?,
            "fp_max_iter" => self.power.fp_max_iter = integer(key, value)?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, key: &str, why: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::config(key, why))
            }
        };
        check(self.side.is_finite() && self.side > 0.0, "D", "must be > 0")?;
        check(self.d0 > 0.0, "d0", "must be > 0")?;
        check(self.d1 > self.d0, "d1", "must exceed d0")?;
        check(self.side > self.d1, "D", "must exceed d1")?;
        check(self.freq_mhz > 0.0, "f", "must be > 0")?;
        check(self.h_ap > 0.0, "h_ap", "must be > 0")?;
        check(self.h_user > 0.0, "h_user", "must be > 0")?;
        check(self.sigma_sf >= 0.0, "sigma_sf", "must be >= 0")?;
        check(self.rho_p > 0.0, "rho_p", "must be > 0")?;
        check(self.rho_u > 0.0, "rho_u", "must be > 0")?;
        check(self.bandwidth > 0.0, "B", "must be > 0")?;
        check(self.num_users >= 1, "K", "must be >= 1")?;
        check(self.num_aps >= self.num_users, "M", "must be >= K")?;
        check(
            self.tau_c as usize > self.num_users,
            "tau_c",
            "must exceed K",
        )?;
        self.power.validate()
    }
}

impl FromStr for SimConfig {
    type Err = Error;

    /// Parses JSON when the text starts with `{`, flat `key = value` otherwise.
    fn from_str(s: &str) -> Result<Self> {
        let entries = if s.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(s)?;
            match v {
                Value::Object(map) => map,
                _ => return Err(Error::Parse("config JSON must be an object".into())),
            }
        } else {
            parse_key_values(s)?
        };
        let mut cfg = SimConfig::default();
        for (key, value) in &entries {
            cfg.apply(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_key_values(s: &str) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    for (lineno, raw) in s.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let value = value.trim();
        let value = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.into()));
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

fn number(key: &str, value: &Value) -> Result<f64> {
    let x = match value {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    };
    x.filter(|x: &f64| x.is_finite())
        .ok_or_else(|| Error::config(key, format!("expected a number, got {value}")))
}

fn integer<T: TryFrom<u64>>(key: &str, value: &Value) -> Result<T> {
    let x = match value {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    };
    x.and_then(|x| T::try_from(x).ok())
        .ok_or_else(|| Error::config(key, format!("expected a non-negative integer, got {value}")))
}

fn boolean(key: &str, value: &Value) -> Result<bool> {
    match value {
        Value::Bool(b) => Ok(*b),
        Value::String(s) if s == "true" => Ok(true),
        Value::String(s) if s == "false" => Ok(false),
        _ => Err(Error::config(key, format!("expected true or false, got {value}"))),
    }
}

fn text<'a>(key: &str, value: &'a Value) -> Result<&'a str> {
    value
        .as_str()
        .ok_or_else(|| Error::config(key, format!("expected a string, got {value}")))
}

/// Transmit SNR normalized by thermal noise: `power / (k_B · T · B · NF)`.
pub fn normalized_snr(power_w: f64, temperature_k: f64, bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    let noise = BOLTZMANN * temperature_k * bandwidth_hz * 10f64.powf(noise_figure_db / 10.0);
    power_w / noise
}
