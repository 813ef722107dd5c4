use rand::seq::index;
use rand::RngCore;

use super::Assignment;
use crate::error::{Error, Result};

/// How the set-growing heuristic picks its `P` seed users.
pub enum SeedRule<'a> {
    /// The `P` users with the largest `β_k` (ties to the lower index),
    /// seeding sets in decreasing `β_k` order.
    LargestBeta,
    /// `P` distinct users drawn uniformly.
    Random(&'a mut dyn RngCore),
}

/// Sahni-Gonzalez set growing with the contamination edge weights (IWGF).
pub fn sg_grow(beta_k: &[f64], pilots: usize, seeds: SeedRule<'_>) -> Result<Assignment> {
    let users = beta_k.len();
    if pilots == 0 || pilots > users {
        return Err(Error::param(format!(
            "set growing needs 1 <= P <= K, got P = {pilots}, K = {users}"
        )));
    }
    let seeds: Vec<usize> = match seeds {
        SeedRule::LargestBeta => {
            let mut order: Vec<usize> = (0..users).collect();
            order.sort_by(|&a, &b| beta_k[b].total_cmp(&beta_k[a]).then(a.cmp(&b)));
            order.truncate(pilots);
            order
        }
        SeedRule::Random(rng) => index::sample(rng, users, pilots).into_vec(),
    };
    sg_grow_with_seeds(beta_k, &seeds)
}

/// Set growing from explicit seeds: seed `i` starts set `i`, then every
/// other user, by increasing index, joins the set whose total internal edge
/// weight after the insertion is smallest (ties to the lower set).
///
/// With `w_ij = β_i + β_j` the internal weight of a set `S` is
/// `(|S| − 1) Σ_{k∈S} β_k`.
pub fn sg_grow_with_seeds(beta_k: &[f64], seeds: &[usize]) -> Result<Assignment> {
    let users = beta_k.len();
    let pilots = seeds.len();
    if pilots == 0 {
        return Err(Error::param("at least one seed is required"));
    }
    let mut pilot_of = vec![usize::MAX; users];
    let mut size = vec![0usize; pilots];
    let mut sum = vec![0.0; pilots];
    for (s, &k) in seeds.iter().enumerate() {
        if k >= users || pilot_of[k] != usize::MAX {
            return Err(Error::param(format!("bad or repeated seed user {k}")));
        }
        pilot_of[k] = s;
        size[s] = 1;
        sum[s] = beta_k[k];
    }
    for k in 0..users {
        if pilot_of[k] != usize::MAX {
            continue;
        }
        let mut best = 0;
        let mut best_w = f64::INFINITY;
        for s in 0..pilots {
            let w = size[s] as f64 * (sum[s] + beta_k[k]);
            if w < best_w {
                best = s;
                best_w = w;
            }
        }
        pilot_of[k] = best;
        size[best] += 1;
        sum[best] += beta_k[k];
    }
    Assignment::new(pilot_of, pilots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    #[test]
    fn explicit_seed_example() {
        let a = sg_grow_with_seeds(&[1.0, 2.0, 3.0], &[0, 1]).unwrap();
        assert_eq!(a.sets(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn default_seeds_are_strongest_users() {
        // Seeds are users 2 (set 0) and 1 (set 1); user 0 then prefers set 1: 1·(2+1) < 1·(3+1).
        let a = sg_grow(&[1.0, 2.0, 3.0], 2, SeedRule::LargestBeta).unwrap();
        assert_eq!(a.pilot_of(), &[1, 1, 0]);
    }

    #[test]
    fn identity_when_p_equals_k() {
        let beta = [0.4, 0.1, 0.3];
        let a = sg_grow(&beta, 3, SeedRule::LargestBeta).unwrap();
        assert!(a.is_contamination_free());
    }

    #[test]
    fn every_set_nonempty() {
        let beta: Vec<f64> = (1..=20).map(|i| 1.0 / i as f64).collect();
        let mut rng = substream(3, 0, Purpose::Assignment { pilots: 6 });
        for rule in [SeedRule::LargestBeta, SeedRule::Random(&mut rng)] {
            let a = sg_grow(&beta, 6, rule).unwrap();
            assert!(a.sets().iter().all(|s| !s.is_empty()));
        }
    }

    #[test]
    fn rejects_too_many_pilots() {
        assert!(sg_grow(&[1.0, 2.0], 3, SeedRule::LargestBeta).is_err());
        assert!(sg_grow_with_seeds(&[1.0, 2.0], &[0, 0]).is_err());
    }
}
