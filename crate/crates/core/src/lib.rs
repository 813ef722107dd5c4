//! Monte Carlo simulator for pilot assignment in cell-free massive MIMO.
//!
//! A trial samples AP/user placements and shadow fading ([`scenario`]),
//! assigns the available orthogonal pilots to users ([`assign`]), evaluates
//! uplink SINR under max-min power control ([`perf`], [`power`]) and
//! aggregates throughput statistics over many seeded trials
//! ([`experiment`]).
//!
//! The main pilot-assignment algorithm is greedy edge contraction (GEC): it
//! treats assignment as MAX P-CUT on a complete graph whose edge weights are
//! the pilot-contamination variance two users would inflict on each other,
//! and repeatedly contracts the lightest edge until `P` vertices remain.

pub mod assign;
pub mod config;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod perf;
pub mod power;
pub mod rng;
pub mod scenario;
pub mod verify;

pub use assign::{Algorithm, Assignment, ContractGraph, CutReport};
pub use config::{DistanceUnit, SimConfig};
pub use error::{Error, Result};
pub use experiment::{ResultRow, Sweep, SweepPlan, TrialResult};
pub use matrix::Matrix;
pub use perf::SinrCoeffs;
pub use power::{MaxMinSolution, PowerControl};
pub use scenario::{Point, Scenario};
