use super::graph::ContractGraph;
use super::Assignment;
use crate::error::{Error, Result};

/// Weights involved in one GEC run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutReport {
    /// Total edge weight of the initial graph, `W_K`.
    pub w_total: f64,
    /// Weight of the edges left between the final groups.
    pub w_cut: f64,
    /// Sum of the weights of the contracted edges.
    pub w_contracted: f64,
    pub users: usize,
    pub pilots: usize,
}

impl CutReport {
    /// `|w_cut + w_contracted − w_total| / w_total`.
    pub fn conservation_error(&self) -> f64 {
        if self.w_total == 0.0 {
            return (self.w_cut + self.w_contracted).abs();
        }
        ((self.w_cut + self.w_contracted - self.w_total) / self.w_total).abs()
    }

    /// Whether the contracted weight respects `lemma_bound · W_K`, up to a
    /// relative tolerance on `W_K`.
    pub fn satisfies_lemma(&self, rel_tol: f64) -> bool {
        let bound = lemma_bound(self.users, self.pilots) * self.w_total;
        self.w_contracted <= bound + rel_tol * self.w_total
    }
}

/// Upper bound on `W_ctr / W_K` after contracting `K` vertices down to `P`:
/// `2(K − P) / ((K − 1)(P + 1))`.
pub fn lemma_bound(users: usize, pilots: usize) -> f64 {
    if pilots >= users {
        return 0.0;
    }
    let (k, p) = (users as f64, pilots as f64);
    2.0 * (k - p) / ((k - 1.0) * (p + 1.0))
}

/// Guaranteed fraction `(P − 1)/(P + 1)` of the optimal cut.
pub fn approximation_ratio(pilots: usize) -> f64 {
    let p = pilots as f64;
    (p - 1.0) / (p + 1.0)
}

/// Greedy edge contraction: contract the lightest edge until `pilots`
/// groups remain, then give each group its own pilot in slot order.
pub fn gec(beta_k: &[f64], pilots: usize) -> Result<(Assignment, CutReport)> {
    if pilots == 0 {
        return Err(Error::param("pilot count must be >= 1"));
    }
    let users = beta_k.len();
    let mut graph = ContractGraph::new(beta_k);
    let w_total = graph.total_weight();
    let mut w_contracted = 0.0;
    while graph.len() > pilots {
        w_contracted += graph.contract_min_edge()?.weight;
    }
    let report = CutReport {
        w_total,
        w_cut: graph.total_weight(),
        w_contracted,
        users,
        pilots,
    };
    let assignment = Assignment::from_groups(users, pilots, graph.groups());
    Ok((assignment, report))
}
