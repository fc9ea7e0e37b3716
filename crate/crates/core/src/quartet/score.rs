//! Normalized quartet score.
//!
//! Every quartet `{u, v, w, x}` has three pairings with costs such as
//! `d(u,v) + d(w,x)`. A tree embeds exactly one of them. Summing over all
//! quartets the embedded cost `C_T`, the minimal cost `m` and the maximal
//! cost `M`, the score is `S(T) = (M - C_T) / (M - m)`, and 1 when `M = m`.

use super::tree::UnrootedTernaryTree;
use super::QuartetError;
use crate::matrix::DistanceMatrix;

/// Per-quartet pairing costs for a fixed matrix, precomputed once and
/// reused across every tree scored during a search.
#[derive(Debug, Clone)]
pub struct QuartetCosts {
    n: usize,
    labels: Vec<String>,
    /// (i<j<k<l, [cost ij|kl, cost ik|jl, cost il|jk])
    quartets: Vec<([u16; 4], [f64; 3])>,
    spread: f64,
}

impl QuartetCosts {
    pub fn new(d: &DistanceMatrix) -> Result<Self, QuartetError> {
        let n = d.len();
        if n < 4 {
            return Err(QuartetError::TooFewLeaves(n));
        }
        if n > u16::MAX as usize {
            return Err(QuartetError::TooManyLeaves(n));
        }
        if let Some((i, j)) = d.first_infinite() {
            return Err(QuartetError::NonFinite {
                a: d.labels()[i].clone(),
                b: d.labels()[j].clone(),
            });
        }
        let mut quartets = Vec::with_capacity(n * (n - 1) * (n - 2) * (n - 3) / 24);
        let mut spread = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let costs = [
                            d.get(i, j) + d.get(k, l),
                            d.get(i, k) + d.get(j, l),
                            d.get(i, l) + d.get(j, k),
                        ];
                        let hi = costs[0].max(costs[1]).max(costs[2]);
                        let lo = costs[0].min(costs[1]).min(costs[2]);
                        spread += hi - lo;
                        quartets.push(([i, j, k, l].map(|v| v as u16), costs));
                    }
                }
            }
        }
        Ok(Self {
            n,
            labels: d.labels().to_vec(),
            quartets,
            spread,
        })
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `M - m`, summed over all quartets.
    pub fn spread(&self) -> f64 {
        self.spread
    }

    /// `(C_T, m, M)`.
    pub fn totals(&self, tree: &UnrootedTernaryTree) -> Result<(f64, f64, f64), QuartetError> {
        let perm = self.alignment(tree)?;
        let dist = tree.leaf_distances();
        let tn = tree.leaf_count();
        let (mut ct, mut lo, mut hi) = (0.0, 0.0, 0.0);
        for (q, costs) in &self.quartets {
            ct += costs[embedded_pairing(&dist, tn, q.map(|v| perm[v as usize]))];
            lo += costs[0].min(costs[1]).min(costs[2]);
            hi += costs[0].max(costs[1]).max(costs[2]);
        }
        Ok((ct, lo, hi))
    }

    /// Tree leaf index for each matrix index.
    fn alignment(&self, tree: &UnrootedTernaryTree) -> Result<Vec<usize>, QuartetError> {
        if tree.labels() == self.labels.as_slice() {
            return Ok((0..self.n).collect());
        }
        if tree.leaf_count() != self.n {
            return Err(QuartetError::LabelMismatch);
        }
        self.labels
            .iter()
            .map(|l| tree.labels().iter().position(|t| t == l).ok_or(QuartetError::LabelMismatch))
            .collect()
    }

    pub fn score(&self, tree: &UnrootedTernaryTree) -> Result<f64, QuartetError> {
        let perm = self.alignment(tree)?;
        Ok(self.score_aligned(tree, &perm))
    }

    /// Score of a tree whose leaf `perm[i]` is matrix entry `i`.
    pub(crate) fn score_aligned(&self, tree: &UnrootedTernaryTree, perm: &[usize]) -> f64 {
        if self.spread == 0.0 {
            return 1.0;
        }
        let dist = tree.leaf_distances();
        let tn = tree.leaf_count();
        let mut gain = 0.0;
        for (q, costs) in &self.quartets {
            let hi = costs[0].max(costs[1]).max(costs[2]);
            gain += hi - costs[embedded_pairing(&dist, tn, q.map(|v| perm[v as usize]))];
        }
        (gain / self.spread).clamp(0.0, 1.0)
    }
}

/// Index of the embedded pairing (0: ab|cd, 1: ac|bd, 2: ad|bc). In a
/// ternary tree the embedded pairing is the one with the strictly smallest
/// sum of path lengths.
#[inline]
fn embedded_pairing(dist: &[u32], n: usize, [a, b, c, d]: [usize; 4]) -> usize {
    let s0 = dist[a * n + b] + dist[c * n + d];
    let s1 = dist[a * n + c] + dist[b * n + d];
    let s2 = dist[a * n + d] + dist[b * n + c];
    if s0 < s1 && s0 < s2 {
        0
    } else if s1 < s2 {
        1
    } else {
        2
    }
}

/// `S(T)` for `tree` under `d`.
pub fn tree_score(tree: &UnrootedTernaryTree, d: &DistanceMatrix) -> Result<f64, QuartetError> {
    QuartetCosts::new(d)?.score(tree)
}
