//! Pilot assignment.
//!
//! Assigning `P` orthogonal pilots to `K` users is a partition of the users
//! into at most `P` co-pilot sets. The quantity every algorithm here tries
//! to keep small is the contamination variance
//! `v_k = Σ_{k' ∈ U_k \ {k}} β_k'`, summed over all users.

mod gec;
mod graph;
mod greedy;
mod ibasic;
mod oracle;
mod random;
mod sg;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::scenario::Scenario;

pub use gec::{approximation_ratio, gec, lemma_bound, CutReport};
pub use graph::{Contraction, ContractGraph};
pub use greedy::{greedy_assign, GreedyOutcome};
pub use ibasic::{ibasic, ibasic_capacity};
pub use oracle::{brute_force_opt_cut, OptimalCut, ORACLE_MAX_USERS};
pub use random::random_assign;
pub use sg::{sg_grow, sg_grow_with_seeds, SeedRule};

/// Pilot index of every user.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pilot_of: Vec<usize>,
    pilots: usize,
}

impl Assignment {
    pub fn new(pilot_of: Vec<usize>, pilots: usize) -> Result<Self> {
        if pilots == 0 {
            return Err(Error::param("pilot count must be >= 1"));
        }
        if let Some((k, &p)) = pilot_of.iter().enumerate().find(|(_, &p)| p >= pilots) {
            return Err(Error::param(format!(
                "user {k} has pilot {p}, outside 0..{pilots}"
            )));
        }
        Ok(Assignment { pilot_of, pilots })
    }

    /// Every user on its own pilot.
    pub fn identity(users: usize, pilots: usize) -> Self {
        debug_assert!(pilots >= users && pilots >= 1);
        Assignment {
            pilot_of: (0..users).collect(),
            pilots,
        }
    }

    /// Numbers groups of users with consecutive pilots in the given order.
    pub fn from_groups<'a>(
        users: usize,
        pilots: usize,
        groups: impl IntoIterator<Item = &'a [usize]>,
    ) -> Self {
        let mut pilot_of = vec![usize::MAX; users];
        for (p, group) in groups.into_iter().enumerate() {
            for &k in group {
                pilot_of[k] = p;
            }
        }
        debug_assert!(pilot_of.iter().all(|&p| p < pilots));
        Assignment { pilot_of, pilots }
    }

    pub fn pilot_of(&self) -> &[usize] {
        &self.pilot_of
    }

    pub fn pilot(&self, user: usize) -> usize {
        self.pilot_of[user]
    }

    pub fn pilots(&self) -> usize {
        self.pilots
    }

    pub fn num_users(&self) -> usize {
        self.pilot_of.len()
    }

    /// Users on each pilot, in increasing user order.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.pilots];
        for (k, &p) in self.pilot_of.iter().enumerate() {
            sets[p].push(k);
        }
        sets
    }

    /// `U_k`: users sharing the pilot of `user`, itself included.
    pub fn copilots(&self, user: usize) -> Vec<usize> {
        let p = self.pilot_of[user];
        (0..self.pilot_of.len())
            .filter(|&k| self.pilot_of[k] == p)
            .collect()
    }

    pub fn shares_pilot(&self, a: usize, b: usize) -> bool {
        self.pilot_of[a] == self.pilot_of[b]
    }

    pub fn is_contamination_free(&self) -> bool {
        self.sets().iter().all(|s| s.len() <= 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.pilot_of).expect("integer array serializes")
    }

    pub fn from_json(s: &str, pilots: usize) -> Result<Self> {
        let pilot_of: Vec<usize> = serde_json::from_str(s)?;
        Assignment::new(pilot_of, pilots)
    }

    /// One pilot index per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for p in &self.pilot_of {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_lines(s: &str, pilots: usize) -> Result<Self> {
        let pilot_of = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse()
                    .map_err(|_| Error::Parse(format!("not a pilot index: `{l}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        Assignment::new(pilot_of, pilots)
    }
}

/// Contamination variance `v_k` of every user.
pub fn contamination_variance(asg: &Assignment, beta_k: &[f64]) -> Vec<f64> {
    assert_eq!(asg.num_users(), beta_k.len());
    let mut pilot_sum = vec![0.0; asg.pilots()];
    let mut pilot_count = vec![0usize; asg.pilots()];
    for (k, &p) in asg.pilot_of().iter().enumerate() {
        pilot_sum[p] += beta_k[k];
        pilot_count[p] += 1;
    }
    asg.pilot_of()
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            // A lone user gets an exact zero rather than a rounding residue.
            if pilot_count[p] == 1 {
                0.0
            } else {
                pilot_sum[p] - beta_k[k]
            }
        })
        .collect()
}

/// Total intra-set weight `Σ_S (|S| − 1) Σ_{k∈S} β_k`, i.e. `Σ_k v_k`.
pub fn intra_set_weight(asg: &Assignment, beta_k: &[f64]) -> f64 {
    asg.sets()
        .iter()
        .map(|s| (s.len().saturating_sub(1)) as f64 * s.iter().map(|&k| beta_k[k]).sum::<f64>())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gec,
    Iwgf,
    Ibasic,
    Greedy,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Gec,
        Algorithm::Iwgf,
        Algorithm::Ibasic,
        Algorithm::Greedy,
        Algorithm::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gec => "gec",
            Algorithm::Iwgf => "iwgf",
            Algorithm::Ibasic => "ibasic",
            Algorithm::Greedy => "greedy",
            Algorithm::Random => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::param(format!(
                    "unknown algorithm `{s}` (expected gec, iwgf, ibasic, greedy or random)"
                ))
            })
    }
}

/// Result of running one algorithm, with the GEC cut report when available.
#[derive(Debug, Clone)]
pub struct Assigned {
    pub assignment: Assignment,
    pub cut: Option<CutReport>,
}

/// Runs `algo` on `scn` with `pilots` pilots. `rng` feeds the algorithms
/// that make random choices.
pub fn assign<R: Rng>(
    algo: Algorithm,
    scn: &Scenario,
    pilots: usize,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<Assigned> {
    let users = scn.num_users();
    if pilots == 0 {
        return Err(Error::param("pilot count must be >= 1"));
    }
    if pilots > users && matches!(algo, Algorithm::Iwgf | Algorithm::Ibasic) {
        return Err(Error::param(format!("P = {pilots} exceeds K = {users}")));
    }
    let (assignment, cut) = match algo {
        Algorithm::Gec => {
            let (a, report) = gec(&scn.beta_k, pilots)?;
            (a, Some(report))
        }
        Algorithm::Iwgf => {
            let rule = if cfg.iwgf_random_seeds {
                SeedRule::Random(rng)
            } else {
                SeedRule::LargestBeta
            };
            (sg_grow(&scn.beta_k, pilots, rule)?, None)
        }
        Algorithm::Ibasic => {
            let init: Option<&mut dyn RngCore> = if cfg.ibasic_literal_random_init {
                Some(rng)
            } else {
                None
            };
            (ibasic(scn, pilots, init)?, None)
        }
        Algorithm::Greedy => (greedy_assign(scn, pilots, cfg, rng)?.assignment, None),
        Algorithm::Random => (random_assign(users, pilots, rng)?, None),
    };
    Ok(Assigned { assignment, cut })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn contamination_examples() {
        let beta = [1.0, 2.0, 3.0];
        let alone = Assignment::identity(3, 3);
        assert_eq!(contamination_variance(&alone, &beta), vec![0.0; 3]);
        let shared = Assignment::new(vec![0, 0, 0], 1).unwrap();
        let v = contamination_variance(&shared, &beta);
        assert_eq!(v, vec![5.0, 4.0, 3.0]);
        assert_eq!(v.iter().sum::<f64>(), 12.0);
        assert_eq!(intra_set_weight(&shared, &beta), 12.0);
    }

    #[test]
    fn rejects_out_of_range_pilots() {
        assert!(Assignment::new(vec![0, 2], 2).is_err());
        assert!(Assignment::new(vec![], 0).is_err());
    }

    #[test]
    fn copilot_sets_contain_self() {
        let a = Assignment::new(vec![1, 0, 1, 2], 3).unwrap();
        assert_eq!(a.copilots(0), vec![0, 2]);
        assert_eq!(a.copilots(3), vec![3]);
        assert_eq!(a.sets(), vec![vec![1], vec![0, 2], vec![3]]);
    }

    #[test]
    fn text_formats() {
        let a = Assignment::new(vec![1, 0, 1, 2], 3).unwrap();
        assert_eq!(a.to_json(), "[1,0,1,2]");
        assert_eq!(a.to_lines(), "1\n0\n1\n2\n");
        assert_eq!(Assignment::from_lines("1\n0\n\n1\n2", 3).unwrap(), a);
        assert!(Assignment::from_lines("1\nx\n", 3).is_err());
        assert!(Assignment::from_json("[0,3]", 3).is_err());
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("wgf".parse::<Algorithm>().is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(pilot_of in proptest::collection::vec(0usize..6, 1..20)) {
            let a = Assignment::new(pilot_of, 6).unwrap();
            prop_assert_eq!(Assignment::from_json(&a.to_json(), 6).unwrap(), a.clone());
            prop_assert_eq!(Assignment::from_lines(&a.to_lines(), 6).unwrap(), a);
        }

        #[test]
        fn per_set_identity(
            pilot_of in proptest::collection::vec(0usize..4, 1..16),
            seed in proptest::collection::vec(0.001..1.0f64, 16),
        ) {
            let beta = &seed[..pilot_of.len()];
            let a = Assignment::new(pilot_of, 4).unwrap();
            let v = contamination_variance(&a, beta);
            for set in a.sets() {
                let lhs: f64 = set.iter().map(|&k| v[k]).sum();
                let rhs = set.len().saturating_sub(1) as f64 * set.iter().map(|&k| beta[k]).sum::<f64>();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
            }
        }
    }
}
