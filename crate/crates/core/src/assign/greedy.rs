use rand::Rng;

use super::{random_assign, Assignment};
use crate::config::SimConfig;
use crate::error::Result;
use crate::perf::{build_coeffs, sinr_uplink};
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub assignment: Assignment,
    /// Worst-user evaluations performed.
    pub iterations: usize,
    /// False when the iteration cap stopped the search.
    pub converged: bool,
}

/// Iteration cap for [`greedy_assign`] with `users` users.
pub fn greedy_cap(users: usize) -> usize {
    2 * users
}

/// GREEDY: start from a random assignment, then repeatedly move the user
/// with the lowest full-power SINR to the pilot minimizing its `v_k`,
/// stopping once that user stays put or after `2K` evaluations.
///
/// The worst user is the lowest index among ties; its current pilot wins
/// ties, otherwise the lowest pilot index does.
pub fn greedy_assign<R: Rng + ?Sized>(
    scn: &Scenario,
    pilots: usize,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<GreedyOutcome> {
    let users = scn.num_users();
    let mut asg = random_assign(users, pilots, rng)?;
    let full_power = vec![1.0; users];
    let cap = greedy_cap(users);
    for iteration in 1..=cap {
        let coeffs = build_coeffs(scn, &asg, cfg);
        let sinr = sinr_uplink(&coeffs, &full_power);
        let worst = (0..users).fold(0, |w, k| if sinr[k] < sinr[w] { k } else { w });

        let mut load = vec![0.0; pilots];
        for (k, &p) in asg.pilot_of().iter().enumerate() {
            if k != worst {
                load[p] += scn.beta_k[k];
            }
        }
        let current = asg.pilot(worst);
        let mut best = current;
        for (p, &l) in load.iter().enumerate() {
            if l < load[best] {
                best = p;
            }
        }
        if best == current {
            return Ok(GreedyOutcome {
                assignment: asg,
                iterations: iteration,
                converged: true,
            });
        }
        let mut pilot_of = asg.pilot_of().to_vec();
        pilot_of[worst] = best;
        asg = Assignment::new(pilot_of, pilots)?;
    }
    Ok(GreedyOutcome {
        assignment: asg,
        iterations: cap,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};
    use crate::scenario::generate_scenario;

    fn small_cfg(users: usize) -> SimConfig {
        SimConfig {
            num_aps: 4 * users,
            num_users: users,
            master_seed: 21,
            ..SimConfig::default()
        }
    }

    #[test]
    fn single_pilot_stops_after_one_evaluation() {
        let cfg = small_cfg(2);
        let scn = generate_scenario(&cfg, 0);
        let mut rng = substream(cfg.master_seed, 0, Purpose::Assignment { pilots: 1 });
        let out = greedy_assign(&scn, 1, &cfg, &mut rng).unwrap();
        assert_eq!(out.assignment.pilot_of(), &[0, 0]);
        assert_eq!(out.iterations, 1);
        assert!(out.converged);
    }

    #[test]
    fn collision_free_start_stops_immediately() {
        let cfg = small_cfg(3);
        let scn = generate_scenario(&cfg, 0);
        // Find a stream whose initial draw is collision free.
        let pilots = 50;
        let (seed, start) = (0..)
            .map(|t| {
                let mut rng = substream(1, t, Purpose::Assignment { pilots });
                (t, random_assign(3, pilots, &mut rng).unwrap())
            })
            .find(|(_, a)| a.is_contamination_free())
            .unwrap();
        let mut rng = substream(1, seed, Purpose::Assignment { pilots });
        let out = greedy_assign(&scn, pilots, &cfg, &mut rng).unwrap();
        assert_eq!(out.assignment, start);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn terminates_within_cap() {
        let cfg = small_cfg(12);
        for trial in 0..10 {
            let scn = generate_scenario(&cfg, trial);
            let mut rng = substream(cfg.master_seed, trial, Purpose::Assignment { pilots: 4 });
            let out = greedy_assign(&scn, 4, &cfg, &mut rng).unwrap();
            assert!(out.iterations <= greedy_cap(12));
            assert!(out.assignment.pilot_of().iter().all(|&p| p < 4));
        }
    }
}
