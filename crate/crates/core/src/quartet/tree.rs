use std::collections::VecDeque;

use rand::Rng;

use super::QuartetError;

/// Unrooted tree whose leaves are nodes `0..n` (leaf `i` carries
/// `labels[i]`) and whose `n - 2` internal nodes `n..2n-2` all have
/// degree 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrootedTernaryTree {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
}

/// One of the three ways to split four leaves into two pairs. Each pair is
/// sorted and the pairs are ordered, so equal splits compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuartetTopology {
    pub pairs: [[String; 2]; 2],
}

impl QuartetTopology {
    pub fn new(a: &str, b: &str, c: &str, d: &str) -> Self {
        let pair = |x: &str, y: &str| {
            if x <= y {
                [x.to_owned(), y.to_owned()]
            } else {
                [y.to_owned(), x.to_owned()]
            }
        };
        let (p, q) = (pair(a, b), pair(c, d));
        Self {
            pairs: if p <= q { [p, q] } else { [q, p] },
        }
    }
}

impl std::fmt::Display for QuartetTopology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [[a, b], [c, d]] = &self.pairs;
        write!(f, "{a}{b}|{c}{d}")
    }
}

impl UnrootedTernaryTree {
    /// The three-leaf star plus stepwise insertion of each further leaf on
    /// the edge chosen by `pick(edge_count)`.
    fn grow(labels: Vec<String>, mut pick: impl FnMut(usize) -> usize) -> Self {
        let n = labels.len();
        let mut adj = vec![Vec::with_capacity(3); 2 * n - 2];
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(2 * n - 3);
        for leaf in 0..3 {
            adj[leaf].push(n);
            adj[n].push(leaf);
            edges.push((n, leaf));
        }
        for leaf in 3..n {
            let e = pick(edges.len());
            let (u, v) = edges[e];
            let w = n + leaf - 2;
            replace(&mut adj[u], v, w);
            replace(&mut adj[v], u, w);
            adj[w].extend([u, v, leaf]);
            adj[leaf].push(w);
            edges[e] = (u, w);
            edges.push((w, v));
            edges.push((w, leaf));
        }
        Self { labels, adj }
    }

    fn check_size(labels: &[String]) -> Result<(), QuartetError> {
        if labels.len() < 4 {
            return Err(QuartetError::TooFewLeaves(labels.len()));
        }
        Ok(())
    }

    /// Uniformly random topology on `labels`.
    pub fn random<R: Rng + ?Sized>(labels: Vec<String>, rng: &mut R) -> Result<Self, QuartetError> {
        Self::check_size(&labels)?;
        Ok(Self::grow(labels, |edges| rng.random_range(0..edges)))
    }

    /// Leaves hung in order along a path: `((l0,l1),l2,...,(l_{n-2},l_{n-1}))`.
    pub fn caterpillar(labels: Vec<String>) -> Result<Self, QuartetError> {
        Self::check_size(&labels)?;
        // The last edge pushed always leads to the newest leaf; hanging the
        // next leaf there extends the spine by one cherry.
        Ok(Self::grow(labels, |edges| edges - 1))
    }

    /// Every distinct topology on `labels`, `(2n-5)!!` of them.
    pub fn enumerate(labels: Vec<String>) -> Result<Vec<Self>, QuartetError> {
        Self::check_size(&labels)?;
        let n = labels.len();
        let mut choices = vec![0usize; n - 3];
        let mut trees = Vec::new();
        loop {
            let mut step = 0;
            trees.push(Self::grow(labels.clone(), |_| {
                step += 1;
                choices[step - 1]
            }));
            // Odometer over per-step edge choices: step k has 2k+3 edges.
            let mut k = 0;
            loop {
                if k == choices.len() {
                    return Ok(trees);
                }
                choices[k] += 1;
                if choices[k] < 2 * k + 3 {
                    break;
                }
                choices[k] = 0;
                k += 1;
            }
        }
    }

    /// Builds a tree from undirected edges over nodes `0..2n-2`, leaves first.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, QuartetError> {
        Self::check_size(&labels)?;
        let nodes = 2 * labels.len() - 2;
        let mut adj = vec![Vec::new(); nodes];
        for &(u, v) in edges {
            if u >= nodes || v >= nodes || u == v {
                return Err(QuartetError::InvalidTree(format!("bad edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let tree = Self { labels, adj };
        tree.validate()?;
        Ok(tree)
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.labels.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.adj.len() - 1);
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    /// Checks degrees, edge count, and connectivity.
    pub fn validate(&self) -> Result<(), QuartetError> {
        let n = self.labels.len();
        let bad = |m: String| Err(QuartetError::InvalidTree(m));
        if n < 4 {
            return Err(QuartetError::TooFewLeaves(n));
        }
        if self.adj.len() != 2 * n - 2 {
            return bad(format!("{} nodes for {n} leaves", self.adj.len()));
        }
        for (v, nbrs) in self.adj.iter().enumerate() {
            let want = if v < n { 1 } else { 3 };
            if nbrs.len() != want {
                return bad(format!("node {v} has degree {}", nbrs.len()));
            }
            if nbrs.iter().any(|&u| u >= self.adj.len() || !self.adj[u].contains(&v)) {
                return bad(format!("node {v} has a one-sided edge"));
            }
        }
        let edges: usize = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        if edges != 2 * n - 3 {
            return bad(format!("{edges} edges, expected {}", 2 * n - 3));
        }
        let reached = self.bfs(0, usize::MAX).iter().filter(|d| **d != u32::MAX).count();
        if reached != self.adj.len() {
            return bad("tree is disconnected".into());
        }
        Ok(())
    }

    /// Hop distances from `src`; `blocked` is never entered.
    fn bfs(&self, src: usize, blocked: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if v != blocked && dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// n×n matrix of leaf-to-leaf edge counts, row-major.
    pub fn leaf_distances(&self) -> Vec<u32> {
        let n = self.labels.len();
        let mut out = Vec::with_capacity(n * n);
        for leaf in 0..n {
            let d = self.bfs(leaf, usize::MAX);
            out.extend_from_slice(&d[..n]);
        }
        out
    }

    /// Nodes on the side of `child` once the edge `parent`–`child` is cut.
    fn side(&self, parent: usize, child: usize) -> Vec<bool> {
        self.bfs(child, parent).into_iter().map(|d| d != u32::MAX).collect()
    }

    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.adj.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &self.adj[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            out.push(cur);
        }
        out
    }

    fn leaf_index(&self, label: &str) -> Result<usize, QuartetError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| QuartetError::UnknownLeaf(label.to_owned()))
    }

    /// The pairing `ab|cd` of the four leaves whose connecting paths are
    /// vertex-disjoint.
    pub fn embedded_topology(&self, quartet: [&str; 4]) -> Result<QuartetTopology, QuartetError> {
        let ids = quartet
            .iter()
            .map(|l| self.leaf_index(l))
            .collect::<Result<Vec<_>, _>>()?;
        let (a, b, c, d) = (ids[0], ids[1], ids[2], ids[3]);
        if (0..4).any(|i| (i + 1..4).any(|j| ids[i] == ids[j])) {
            return Err(QuartetError::InvalidTree("quartet repeats a leaf".into()));
        }
        let disjoint = |p: (usize, usize), q: (usize, usize)| {
            let first = self.path(p.0, p.1);
            self.path(q.0, q.1).iter().all(|v| !first.contains(v))
        };
        let [qa, qb, qc, qd] = quartet;
        let split = [
            ((a, b), (c, d), [qa, qb, qc, qd]),
            ((a, c), (b, d), [qa, qc, qb, qd]),
            ((a, d), (b, c), [qa, qd, qb, qc]),
        ]
        .into_iter()
        .find(|(p, q, _)| disjoint(*p, *q))
        .expect("a ternary tree resolves every quartet");
        let [w, x, y, z] = split.2;
        Ok(QuartetTopology::new(w, x, y, z))
    }

    /// Exchanges leaves `a` and `b`.
    pub(crate) fn swap_leaves(&mut self, a: usize, b: usize) {
        let (pa, pb) = (self.adj[a][0], self.adj[b][0]);
        if pa == pb {
            return;
        }
        replace(&mut self.adj[pa], a, b);
        replace(&mut self.adj[pb], b, a);
        self.adj[a][0] = pb;
        self.adj[b][0] = pa;
    }

    /// Exchanges the subtree hanging below `p1 -> c1` with the one below
    /// `p2 -> c2`. Returns false (tree untouched) unless the two subtrees
    /// are disjoint and neither edge lies inside the other subtree.
    pub(crate) fn swap_subtrees(&mut self, (p1, c1): (usize, usize), (p2, c2): (usize, usize)) -> bool {
        if p1 == p2 || (p1, c1) == (c2, p2) {
            return false;
        }
        let s1 = self.side(p1, c1);
        let s2 = self.side(p2, c2);
        if s1[p2] || s1[c2] || s2[p1] || s2[c1] {
            return false;
        }
        replace(&mut self.adj[p1], c1, c2);
        replace(&mut self.adj[c1], p1, p2);
        replace(&mut self.adj[p2], c2, c1);
        replace(&mut self.adj[c2], p2, p1);
        true
    }

    /// Prunes the subtree below `p -> c` (with `p` internal) and regrafts it
    /// onto the `target`-th edge of the remainder, in [`Self::edges`] order
    /// of the pruned tree. Returns false if the move is impossible.
    pub(crate) fn transfer_subtree(
        &mut self,
        (p, c): (usize, usize),
        mut choose_target: impl FnMut(usize) -> usize,
    ) -> bool {
        if self.is_leaf(p) {
            return false;
        }
        let moved = self.side(p, c);
        let others: Vec<usize> = self.adj[p].iter().copied().filter(|&v| v != c).collect();
        let (q1, q2) = (others[0], others[1]);
        let candidates: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| !moved[u] && !moved[v] && u != p && v != p)
            .chain(std::iter::once((q1.min(q2), q1.max(q2))))
            .collect();
        // Regrafting onto q1–q2 reproduces the original tree.
        if candidates.len() < 2 {
            return false;
        }
        let (x, y) = candidates[choose_target(candidates.len() - 1)];
        replace(&mut self.adj[q1], p, q2);
        replace(&mut self.adj[q2], p, q1);
        replace(&mut self.adj[x], y, p);
        replace(&mut self.adj[y], x, p);
        self.adj[p] = vec![c, x, y];
        true
    }
}

fn replace(list: &mut [usize], old: usize, new: usize) {
    let slot = list
        .iter_mut()
        .find(|v| **v == old)
        .expect("edge endpoint present");
    *slot = new;
}
