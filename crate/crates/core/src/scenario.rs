//! Random network instances: placements on a wrapped square, three-slope
//! path loss and log-normal shadowing.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::SimConfig;
use crate::matrix::Matrix;
use crate::rng::{substream, Purpose};

/// Distances below this are clamped before taking logarithms (m).
pub const MIN_DISTANCE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub ap_pos: Vec<Point>,
    pub user_pos: Vec<Point>,
    /// Large-scale fading, `beta[(m, k)]` for AP `m` and user `k` (linear).
    pub beta: Matrix,
    /// Column sums `beta_k[k] = Σ_m beta[(m, k)]`.
    pub beta_k: Vec<f64>,
}

impl Scenario {
    /// Builds a scenario around a given fading matrix. Positions are left
    /// empty; used for hand-built instances.
    pub fn from_beta(beta: Matrix) -> Self {
        let beta_k = beta.col_sums();
        Scenario {
            ap_pos: Vec::new(),
            user_pos: Vec::new(),
            beta,
            beta_k,
        }
    }

    pub fn num_aps(&self) -> usize {
        self.beta.rows()
    }

    pub fn num_users(&self) -> usize {
        self.beta.cols()
    }
}

/// Distance on the torus obtained by wrapping a `side × side` square.
pub fn wrap_distance(p: Point, q: Point, side: f64) -> f64 {
    let dx = (p.x - q.x).abs();
    let dy = (p.y - q.y).abs();
    let dx = dx.min(side - dx);
    let dy = dy.min(side - dy);
    (dx * dx + dy * dy).sqrt()
}

/// Constant term `L` of the three-slope model (dB).
pub fn path_loss_constant(cfg: &SimConfig) -> f64 {
    let lf = cfg.freq_mhz.log10();
    46.3 + 33.9 * lf - 13.82 * cfg.h_ap.log10() - (1.1 * lf - 0.7) * cfg.h_user + 1.56 * lf - 0.8
}

/// Three-slope path loss (dB, negative) at distance `d` meters.
///
/// The branches are evaluated literally; the model is not continuous at
/// `d1`. Logarithms take distances in `cfg.pl_distance_unit`.
pub fn path_loss_db(d: f64, cfg: &SimConfig) -> f64 {
    let scale = cfg.pl_distance_unit.scale();
    let d = d.max(MIN_DISTANCE);
    let l = path_loss_constant(cfg);
    let log0 = (cfg.d0 / scale).log10();
    let log1 = (cfg.d1 / scale).log10();
    if d <= cfg.d0 {
        -l - 15.0 * log1 - 20.0 * log0
    } else if d <= cfg.d1 {
        -l - 15.0 * log1 - 20.0 * (d / scale).log10()
    } else {
        -l - 35.0 * (d / scale).log10()
    }
}

/// Linear large-scale fading from path loss plus `sigma_sf · z` shadowing.
pub fn large_scale_fading(pl_db: f64, z: f64, sigma_sf: f64) -> f64 {
    10f64.powf((pl_db + sigma_sf * z) / 10.0)
}

/// Samples trial `trial_index` of the experiment seeded by `cfg.master_seed`.
///
/// Draw order: AP coordinates (x then y per AP), user coordinates, then
/// shadowing samples with APs outer and users inner.
pub fn generate_scenario(cfg: &SimConfig, trial_index: u64) -> Scenario {
    let mut rng = substream(cfg.master_seed, trial_index, Purpose::Scenario);
    let side = cfg.side;
    let mut place = |n: usize| -> Vec<Point> {
        (0..n)
            .map(|_| {
                let x = rng.random_range(0.0..side);
                let y = rng.random_range(0.0..side);
                Point::new(x, y)
            })
            .collect()
    };
    let ap_pos = place(cfg.num_aps);
    let user_pos = place(cfg.num_users);

    let beta = Matrix::from_fn(cfg.num_aps, cfg.num_users, |m, k| {
        let z: f64 = rng.sample(StandardNormal);
        let d = wrap_distance(ap_pos[m], user_pos[k], side);
        large_scale_fading(path_loss_db(d, cfg), z, cfg.sigma_sf)
    });
    let beta_k = beta.col_sums();
    Scenario {
        ap_pos,
        user_pos,
        beta,
        beta_k,
    }
}
