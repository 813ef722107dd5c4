use super::Assignment;
use crate::error::{Error, Result};

/// Largest instance the exhaustive search accepts.
pub const ORACLE_MAX_USERS: usize = 12;

#[derive(Debug, Clone)]
pub struct OptimalCut {
    pub assignment: Assignment,
    /// Maximum cut weight `W_opt`.
    pub w_opt: f64,
    /// Minimum total intra-set weight; `w_opt + min_intra = w_total`.
    pub min_intra: f64,
    pub w_total: f64,
}

/// Exact MAX P-CUT under `w_ij = β_i + β_j` by enumerating every partition
/// of the users into at most `pilots` blocks as a restricted growth string.
pub fn brute_force_opt_cut(beta_k: &[f64], pilots: usize) -> Result<OptimalCut> {
    let users = beta_k.len();
    if users > ORACLE_MAX_USERS {
        return Err(Error::OracleTooLarge {
            users,
            limit: ORACLE_MAX_USERS,
        });
    }
    if pilots == 0 {
        return Err(Error::param("pilot count must be >= 1"));
    }
    // Every pair is an edge of weight β_i + β_j, so each β_k appears K − 1 times.
    let w_total = users.saturating_sub(1) as f64 * beta_k.iter().sum::<f64>();

    let mut search = Search {
        beta_k,
        max_blocks: pilots.min(users.max(1)),
        rgs: vec![0; users],
        size: vec![0; users.max(1)],
        sum: vec![0.0; users.max(1)],
        best: f64::INFINITY,
        best_rgs: vec![0; users],
    };
    search.descend(0, 0, 0.0);

    let min_intra = if users == 0 { 0.0 } else { search.best };
    Ok(OptimalCut {
        assignment: Assignment::new(search.best_rgs, pilots)?,
        w_opt: w_total - min_intra,
        min_intra,
        w_total,
    })
}

struct Search<'a> {
    beta_k: &'a [f64],
    max_blocks: usize,
    rgs: Vec<usize>,
    size: Vec<usize>,
    sum: Vec<f64>,
    best: f64,
    best_rgs: Vec<usize>,
}

impl Search<'_> {
    /// `used` blocks so far; `cost` is the intra-set weight of users `0..k`.
    fn descend(&mut self, k: usize, used: usize, cost: f64) {
        if cost >= self.best {
            return;
        }
        if k == self.beta_k.len() {
            self.best = cost;
            self.best_rgs.copy_from_slice(&self.rgs);
            return;
        }
        let beta = self.beta_k[k];
        let open = if used < self.max_blocks { used + 1 } else { used };
        for b in 0..open {
            // Joining a block of n users with sum s adds s + n·β.
            let before = self.sum[b];
            let added = before + self.size[b] as f64 * beta;
            self.rgs[k] = b;
            self.size[b] += 1;
            self.sum[b] += beta;
            self.descend(k + 1, used.max(b + 1), cost + added);
            self.size[b] -= 1;
            self.sum[b] = before;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::intra_set_weight;

    #[test]
    fn three_user_example() {
        let opt = brute_force_opt_cut(&[1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(opt.w_opt, 9.0);
        assert_eq!(opt.w_total, 12.0);
        assert_eq!(opt.assignment.sets(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn enough_pilots_cut_everything() {
        let beta = [0.2, 0.7, 0.1, 0.5];
        for p in [4, 6] {
            let opt = brute_force_opt_cut(&beta, p).unwrap();
            assert!((opt.w_opt - opt.w_total).abs() < 1e-15);
            assert_eq!(opt.min_intra, 0.0);
        }
    }

    #[test]
    fn refuses_large_instances() {
        let beta = vec![1.0; ORACLE_MAX_USERS + 1];
        assert!(matches!(
            brute_force_opt_cut(&beta, 3),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn matches_plain_enumeration() {
        // Every map users -> 0..P, no pruning, no canonical form.
        let beta = [0.9, 0.05, 0.3, 0.31, 0.6, 0.02, 0.44];
        for pilots in 1..=4usize {
            let mut best = f64::INFINITY;
            let total = pilots.pow(beta.len() as u32);
            for code in 0..total {
                let mut c = code;
                let pilot_of: Vec<usize> = (0..beta.len())
                    .map(|_| {
                        let p = c % pilots;
                        c /= pilots;
                        p
                    })
                    .collect();
                let a = Assignment::new(pilot_of, pilots).unwrap();
                best = best.min(intra_set_weight(&a, &beta));
            }
            let opt = brute_force_opt_cut(&beta, pilots).unwrap();
            assert!((opt.min_intra - best).abs() < 1e-12, "P = {pilots}");
            assert!((intra_set_weight(&opt.assignment, &beta) - best).abs() < 1e-12);
            assert!((opt.w_opt + opt.min_intra - opt.w_total).abs() < 1e-12);
        }
    }
}
