use rand::{Rng, RngCore};

use super::Assignment;
use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Per-pilot user cap `δ = max{5, ⌈K/P⌉}`.
pub fn ibasic_capacity(users: usize, pilots: usize) -> usize {
    5.max(users.div_ceil(pilots))
}

/// IBASIC: users sorted by decreasing `β_k`; the first `P` get pilots
/// `0..P` in that order (or uniformly random pilots when `random_init` is
/// given), and each later user takes the pilot with the least contamination
/// at its strongest AP among pilots below the cap `δ`.
///
/// Ties (strongest AP, cheapest pilot, equal `β_k`) go to the lowest index.
pub fn ibasic(scn: &Scenario, pilots: usize, random_init: Option<&mut dyn RngCore>) -> Result<Assignment> {
    let users = scn.num_users();
    if pilots == 0 || pilots > users {
        return Err(Error::param(format!(
            "IBASIC needs 1 <= P <= K, got P = {pilots}, K = {users}"
        )));
    }
    let cap = ibasic_capacity(users, pilots);
    let beta_k = &scn.beta_k;
    let mut order: Vec<usize> = (0..users).collect();
    order.sort_by(|&a, &b| beta_k[b].total_cmp(&beta_k[a]).then(a.cmp(&b)));

    let mut pilot_of = vec![usize::MAX; users];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); pilots];
    match random_init {
        None => {
            for (p, &k) in order[..pilots].iter().enumerate() {
                pilot_of[k] = p;
                members[p].push(k);
            }
        }
        Some(rng) => {
            for &k in &order[..pilots] {
                let p = rng.random_range(0..pilots);
                pilot_of[k] = p;
                members[p].push(k);
            }
        }
    }

    for &k in &order[pilots..] {
        let strongest_ap = (0..scn.num_aps())
            .fold(0, |best, m| if scn.beta[(m, k)] > scn.beta[(best, k)] { m } else { best });
        let mut best: Option<(usize, f64)> = None;
        for (p, group) in members.iter().enumerate() {
            if group.len() >= cap {
                continue;
            }
            let cost: f64 = group.iter().map(|&other| scn.beta[(strongest_ap, other)]).sum();
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((p, cost));
            }
        }
        let (p, _) = best.expect("δ·P >= K leaves a pilot below the cap");
        pilot_of[k] = p;
        members[p].push(k);
    }
    Assignment::new(pilot_of, pilots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::rng::{substream, Purpose};

    fn scenario(aps: usize, users: usize) -> Scenario {
        let beta = Matrix::from_fn(aps, users, |m, k| 1.0 / (1.0 + ((m * 7 + k * 13) % 17) as f64));
        Scenario::from_beta(beta)
    }

    #[test]
    fn capacity_rule() {
        assert_eq!(ibasic_capacity(100, 10), 10);
        assert_eq!(ibasic_capacity(100, 30), 5);
        assert_eq!(ibasic_capacity(100, 20), 5);
        assert_eq!(ibasic_capacity(100, 19), 6);
    }

    #[test]
    fn p_equals_k_is_contamination_free() {
        let s = scenario(12, 7);
        assert!(ibasic(&s, 7, None).unwrap().is_contamination_free());
    }

    #[test]
    fn respects_cap_even_with_random_init() {
        let s = scenario(30, 23);
        let mut rng = substream(9, 1, Purpose::Assignment { pilots: 2 });
        for a in [ibasic(&s, 2, None).unwrap(), ibasic(&s, 2, Some(&mut rng)).unwrap()] {
            let counts: Vec<usize> = a.sets().iter().map(Vec::len).collect();
            assert_eq!(counts.iter().sum::<usize>(), 23);
            assert!(counts.iter().all(|&c| c <= ibasic_capacity(23, 2)));
        }
    }

    #[test]
    fn later_user_avoids_strong_interferer() {
        // Two APs; users 0,1 are strongest and seed pilots 0,1.
        // User 2 is heard best at AP 1, where user 0 is loud and user 1 quiet.
        let beta = Matrix::from_fn(2, 3, |m, k| match (m, k) {
            (0, 0) => 0.2,
            (1, 0) => 0.9,
            (0, 1) => 1.0,
            (1, 1) => 0.01,
            (0, 2) => 0.01,
            (1, 2) => 0.5,
            _ => unreachable!(),
        });
        let s = Scenario::from_beta(beta);
        let a = ibasic(&s, 2, None).unwrap();
        assert_eq!(a.pilot_of(), &[0, 1, 1]);
    }
}
