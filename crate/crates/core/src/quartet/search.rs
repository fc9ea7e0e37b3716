use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::score::QuartetCosts;
use super::tree::UnrootedTernaryTree;
use super::QuartetError;
use crate::matrix::DistanceMatrix;

/// Largest leaf count [`exhaustive_best`] accepts (945 trees).
pub const EXHAUSTIVE_MAX_LEAVES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Consecutive rejected mutations that end a restart.
    pub budget: usize,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 2000,
            restarts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub seed: u64,
    pub score: f64,
    pub steps: usize,
    /// Score of the starting tree followed by every accepted improvement.
    pub trace: Vec<f64>,
    pub newick: String,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub tree: UnrootedTernaryTree,
    pub score: f64,
    /// Mutations tried, summed over restarts.
    pub steps_used: usize,
    pub restarts: Vec<RestartOutcome>,
}

/// One restart's climb.
struct SearchState<'a> {
    costs: &'a QuartetCosts,
    identity: Vec<usize>,
    tree: UnrootedTernaryTree,
    score: f64,
    rng: ChaCha8Rng,
    steps: usize,
    budget: usize,
    trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Mutation {
    LeafSwap,
    SubtreeSwap,
    SubtreeTransfer,
}

const PICK_ATTEMPTS: usize = 32;

impl<'a> SearchState<'a> {
    fn new(costs: &'a QuartetCosts, seed: u64, budget: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = UnrootedTernaryTree::random(costs.labels().to_vec(), &mut rng)
            .expect("leaf count checked by QuartetCosts");
        let identity: Vec<usize> = (0..costs.leaf_count()).collect();
        let score = costs.score_aligned(&tree, &identity);
        Self {
            costs,
            identity,
            tree,
            score,
            rng,
            steps: 0,
            budget,
            trace: vec![score],
        }
    }

    fn random_directed_edge(&mut self, tree: &UnrootedTernaryTree) -> (usize, usize) {
        let child = self.rng.random_range(0..tree.node_count());
        let nbrs = tree.neighbors(child);
        (nbrs[self.rng.random_range(0..nbrs.len())], child)
    }

    /// A mutated copy of the current tree; may equal it when the drawn move
    /// is degenerate.
    fn propose(&mut self) -> UnrootedTernaryTree {
        let mut next = self.tree.clone();
        let kind = match self.rng.random_range(0..3) {
            0 => Mutation::LeafSwap,
            1 => Mutation::SubtreeSwap,
            _ => Mutation::SubtreeTransfer,
        };
        match kind {
            Mutation::LeafSwap => {
                let n = next.leaf_count();
                let a = self.rng.random_range(0..n);
                let b = (a + self.rng.random_range(1..n)) % n;
                next.swap_leaves(a, b);
            }
            Mutation::SubtreeSwap => {
                for _ in 0..PICK_ATTEMPTS {
                    let e1 = self.random_directed_edge(&next);
                    let e2 = self.random_directed_edge(&next);
                    if next.swap_subtrees(e1, e2) {
                        break;
                    }
                }
            }
            Mutation::SubtreeTransfer => {
                for _ in 0..PICK_ATTEMPTS {
                    let e = self.random_directed_edge(&next);
                    let rng = &mut self.rng;
                    if next.transfer_subtree(e, |k| rng.random_range(0..k)) {
                        break;
                    }
                }
            }
        }
        debug_assert!(next.validate().is_ok());
        next
    }

    fn run(mut self, seed: u64) -> (UnrootedTernaryTree, RestartOutcome) {
        let mut rejected = 0;
        while rejected < self.budget {
            let candidate = self.propose();
            self.steps += 1;
            let s = self.costs.score_aligned(&candidate, &self.identity);
            if s > self.score {
                self.tree = candidate;
                self.score = s;
                self.trace.push(s);
                rejected = 0;
            } else {
                rejected += 1;
            }
        }
        let newick = self.tree.to_newick();
        let outcome = RestartOutcome {
            seed,
            score: self.score,
            steps: self.steps,
            trace: self.trace,
            newick,
        };
        (self.tree, outcome)
    }
}

fn run_restart(costs: &QuartetCosts, config: &SearchConfig, index: usize) -> (UnrootedTernaryTree, RestartOutcome) {
    let seed = config.seed.wrapping_add(index as u64);
    SearchState::new(costs, seed, config.budget).run(seed)
}

fn check_config(config: &SearchConfig) -> Result<(), QuartetError> {
    if config.restarts == 0 {
        return Err(QuartetError::InvalidSearch("restarts must be at least 1".into()));
    }
    Ok(())
}

/// Higher score wins; equal scores go to the smaller canonical Newick.
fn better(score: f64, newick: &str, best_score: f64, best_newick: &str) -> bool {
    score > best_score || (score == best_score && newick < best_newick)
}

fn merge(results: Vec<(UnrootedTernaryTree, RestartOutcome)>) -> SearchOutcome {
    let mut best: Option<usize> = None;
    for (k, (_, r)) in results.iter().enumerate() {
        let replace = match best {
            None => true,
            Some(b) => better(r.score, &r.newick, results[b].1.score, &results[b].1.newick),
        };
        if replace {
            best = Some(k);
        }
    }
    let best = best.expect("at least one restart");
    let steps_used = results.iter().map(|(_, r)| r.steps).sum();
    let tree = results[best].0.clone();
    let score = results[best].1.score;
    SearchOutcome {
        tree,
        score,
        steps_used,
        restarts: results.into_iter().map(|(_, r)| r).collect(),
    }
}

/// Randomized hill climbing on `S(T)` with restarts.
///
/// Restart `r` is seeded with `seed + r`, starts from a uniformly random
/// tree, and applies uniformly chosen leaf swaps, subtree swaps and subtree
/// transfers, keeping a mutation only if it strictly raises the score. It
/// ends after `budget` consecutive rejections. Restarts run in parallel;
/// the result is identical to [`hill_climb_sequential`].
pub fn hill_climb(d: &DistanceMatrix, config: &SearchConfig) -> Result<SearchOutcome, QuartetError> {
    check_config(config)?;
    let costs = QuartetCosts::new(d)?;
    let results = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&costs, config, r))
        .collect();
    Ok(merge(results))
}

pub fn hill_climb_sequential(
    d: &DistanceMatrix,
    config: &SearchConfig,
) -> Result<SearchOutcome, QuartetError> {
    check_config(config)?;
    let costs = QuartetCosts::new(d)?;
    let results = (0..config.restarts).map(|r| run_restart(&costs, config, r)).collect();
    Ok(merge(results))
}

/// Global optimum of `S(T)` by enumerating every tree, for 4 to 7 leaves.
pub fn exhaustive_best(d: &DistanceMatrix) -> Result<(UnrootedTernaryTree, f64), QuartetError> {
    let n = d.len();
    if !(4..=EXHAUSTIVE_MAX_LEAVES).contains(&n) {
        return Err(QuartetError::ExhaustiveSize(n));
    }
    let costs = QuartetCosts::new(d)?;
    let identity: Vec<usize> = (0..n).collect();
    let mut best: Option<(UnrootedTernaryTree, f64, String)> = None;
    for tree in UnrootedTernaryTree::enumerate(d.labels().to_vec())? {
        let score = costs.score_aligned(&tree, &identity);
        let newick = tree.to_newick();
        let replace = match &best {
            None => true,
            Some((_, s, w)) => better(score, &newick, *s, w),
        };
        if replace {
            best = Some((tree, score, newick));
        }
    }
    let (tree, score, _) = best.expect("at least three trees");
    Ok((tree, score))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> DistanceMatrix {
        DistanceMatrix::from_fn(labels(n), |i, j| if i == j { 0.0 } else { rng.random() }).unwrap()
    }

    #[test]
    fn exhaustive_hand_case() {
        let d = DistanceMatrix::from_fn(labels(4), |i, j| match (i, j) {
            _ if i == j => 0.0,
            (0, 1) | (2, 3) => 1.0,
            _ => 2.0,
        })
        .unwrap();
        let (tree, score) = exhaustive_best(&d).unwrap();
        assert_eq!(score, 1.0);
        assert_eq!(tree.to_newick(), "(a,b,(c,d));");
    }

    #[test]
    fn exhaustive_constant_matrix() {
        let d = DistanceMatrix::from_fn(labels(5), |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        let (tree, score) = exhaustive_best(&d).unwrap();
        assert_eq!(score, 1.0);
        // Every tree ties; the tie-break picks the smallest canonical string.
        let smallest = UnrootedTernaryTree::enumerate(labels(5))
            .unwrap()
            .iter()
            .map(|t| t.to_newick())
            .min()
            .unwrap();
        assert_eq!(tree.to_newick(), smallest);
    }

    #[test]
    fn exhaustive_size_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(exhaustive_best(&random_matrix(8, &mut rng)), Err(QuartetError::ExhaustiveSize(8))));
        assert!(matches!(exhaustive_best(&random_matrix(3, &mut rng)), Err(QuartetError::ExhaustiveSize(3))));
    }

    #[test]
    fn four_leaves_reach_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..10 {
            let d = random_matrix(4, &mut rng);
            let (_, best) = exhaustive_best(&d).unwrap();
            let out = hill_climb(&d, &SearchConfig { seed, budget: 100, restarts: 1 }).unwrap();
            assert_eq!(out.score, best);
        }
    }

    #[test]
    fn deterministic_and_parallel_safe() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = random_matrix(9, &mut rng);
        let config = SearchConfig { seed: 42, budget: 300, restarts: 4 };
        let a = hill_climb(&d, &config).unwrap();
        let b = hill_climb(&d, &config).unwrap();
        let c = hill_climb_sequential(&d, &config).unwrap();
        assert_eq!(a.tree.to_newick(), b.tree.to_newick());
        assert_eq!(a.tree.to_newick(), c.tree.to_newick());
        assert_eq!(a.restarts, c.restarts);
        assert_eq!(a.steps_used, c.steps_used);
    }

    #[test]
    fn traces_increase_and_budget_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random_matrix(8, &mut rng);
        let out = hill_climb(&d, &SearchConfig { seed: 7, budget: 150, restarts: 3 }).unwrap();
        for r in &out.restarts {
            assert!(r.trace.windows(2).all(|w| w[1] > w[0]));
            assert_eq!(*r.trace.last().unwrap(), r.score);
            assert!(r.steps >= 150);
        }
        assert_eq!(out.steps_used, out.restarts.iter().map(|r| r.steps).sum::<usize>());
        assert_eq!(out.score, out.restarts.iter().map(|r| r.score).fold(0.0, f64::max));
        out.tree.validate().unwrap();
    }

    #[test]
    fn zero_restarts_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = random_matrix(5, &mut rng);
        assert!(hill_climb(&d, &SearchConfig { seed: 0, budget: 10, restarts: 0 }).is_err());
    }

    #[test]
    fn zero_budget_returns_start_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random_matrix(6, &mut rng);
        let out = hill_climb(&d, &SearchConfig { seed: 0, budget: 0, restarts: 2 }).unwrap();
        assert_eq!(out.steps_used, 0);
        assert!(out.restarts.iter().all(|r| r.trace.len() == 1));
    }
}
