use crate::error::{Error, Result};

/// Edge-weighted complete graph over disjoint groups of users.
///
/// The weight between groups `i` and `j` is
/// `n_j · Σ_{k∈S_i} β_k + n_i · Σ_{k∈S_j} β_k`, the contamination variance
/// the two groups would add if merged onto one pilot. Contracting an edge
/// keeps that form by summing the two edges each remaining group had to the
/// merged endpoints.
///
/// Groups live in fixed slots; a contraction keeps the lower slot and
/// retires the higher one, so slot order is stable across contractions.
#[derive(Debug, Clone)]
pub struct ContractGraph {
    slots: usize,
    groups: Vec<Option<Vec<usize>>>,
    /// Upper triangle used; `w[i * slots + j]` for `i < j`.
    w: Vec<f64>,
    live: usize,
}

/// One contraction: slots `kept < removed` merged into `kept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction {
    pub kept: usize,
    pub removed: usize,
    pub weight: f64,
}

impl ContractGraph {
    /// Singleton groups with `w_ij = β_i + β_j`.
    pub fn new(beta_k: &[f64]) -> Self {
        let n = beta_k.len();
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                w[i * n + j] = beta_k[i] + beta_k[j];
            }
        }
        ContractGraph {
            slots: n,
            groups: (0..n).map(|k| Some(vec![k])).collect(),
            w,
            live: n,
        }
    }

    /// Number of groups still in the graph.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Live groups in slot order.
    pub fn groups(&self) -> impl Iterator<Item = &[usize]> {
        self.groups.iter().flatten().map(Vec::as_slice)
    }

    fn live_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots).filter(|&i| self.groups[i].is_some())
    }

    /// Weight between live slots `i != j`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.w[a * self.slots + b]
    }

    fn set_weight(&mut self, i: usize, j: usize, value: f64) {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.w[a * self.slots + b] = value;
    }

    /// Live edges `(i, j, w_ij)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let live: Vec<usize> = self.live_slots().collect();
        let mut out = Vec::with_capacity(live.len() * live.len().saturating_sub(1) / 2);
        for (a, &i) in live.iter().enumerate() {
            for &j in &live[a + 1..] {
                out.push((i, j, self.weight(i, j)));
            }
        }
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|e| e.2).sum()
    }

    /// Lightest live edge; ties go to the lexicographically smallest pair.
    pub fn min_edge(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        let live: Vec<usize> = self.live_slots().collect();
        for (a, &i) in live.iter().enumerate() {
            let row = &self.w[i * self.slots..(i + 1) * self.slots];
            for &j in &live[a + 1..] {
                if best.is_none_or(|(_, _, w)| row[j] < w) {
                    best = Some((i, j, row[j]));
                }
            }
        }
        best
    }

    /// Contracts the lightest edge.
    pub fn contract_min_edge(&mut self) -> Result<Contraction> {
        let (i, j, weight) = self
            .min_edge()
            .ok_or_else(|| Error::param("contraction needs at least two groups"))?;
        let live: Vec<usize> = self.live_slots().collect();
        for &other in &live {
            if other != i && other != j {
                let merged = self.weight(other, i) + self.weight(other, j);
                self.set_weight(other, i, merged);
            }
        }
        let removed = self.groups[j].take().expect("live slot");
        self.groups[i].as_mut().expect("live slot").extend(removed);
        self.live -= 1;
        Ok(Contraction {
            kept: i,
            removed: j,
            weight,
        })
    }

    /// Recomputes `w_ij` of live slots directly from the groups.
    pub fn weight_from_groups(&self, i: usize, j: usize, beta_k: &[f64]) -> f64 {
        let gi = self.groups[i].as_deref().expect("live slot");
        let gj = self.groups[j].as_deref().expect("live slot");
        let si: f64 = gi.iter().map(|&k| beta_k[k]).sum();
        let sj: f64 = gj.iter().map(|&k| beta_k[k]).sum();
        gj.len() as f64 * si + gi.len() as f64 * sj
    }
}
