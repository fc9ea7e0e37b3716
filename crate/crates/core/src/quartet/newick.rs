//! Canonical Newick and Graphviz output, plus a Newick reader.
//!
//! The canonical form roots the unrooted tree at the internal node next to
//! the smallest leaf label and orders every node's children by the
//! smallest label they contain. No branch lengths are written.

use std::fmt::Write as _;

use super::tree::UnrootedTernaryTree;
use super::QuartetError;

fn needs_quotes(label: &str) -> bool {
    label
        .chars()
        .any(|c| c.is_whitespace() || "()[]':;,".contains(c))
}

fn push_label(out: &mut String, label: &str) {
    if needs_quotes(label) {
        out.push('\'');
        out.push_str(&label.replace('\'', "''"));
        out.push('\'');
    } else {
        out.push_str(label);
    }
}

impl UnrootedTernaryTree {
    /// Smallest leaf index (by label) below `parent -> node`, for every node.
    fn ordered_children(&self, parent: usize, node: usize, min_leaf: &mut [usize]) -> usize {
        let mut best = if self.is_leaf(node) { node } else { usize::MAX };
        for &next in self.neighbors(node) {
            if next != parent {
                let m = self.ordered_children(node, next, min_leaf);
                if best == usize::MAX || self.labels()[m] < self.labels()[best] {
                    best = m;
                }
            }
        }
        min_leaf[node] = best;
        best
    }

    /// Root and, for each node, its children in canonical order.
    fn canonical_layout(&self) -> (usize, Vec<Vec<usize>>) {
        let first = (0..self.leaf_count())
            .min_by(|&a, &b| self.labels()[a].cmp(&self.labels()[b]))
            .expect("tree has leaves");
        let root = self.neighbors(first)[0];
        let mut min_leaf = vec![usize::MAX; self.node_count()];
        for &child in self.neighbors(root) {
            self.ordered_children(root, child, &mut min_leaf);
        }
        let mut children = vec![Vec::new(); self.node_count()];
        let mut stack = vec![(usize::MAX, root)];
        while let Some((parent, node)) = stack.pop() {
            let mut kids: Vec<usize> = self
                .neighbors(node)
                .iter()
                .copied()
                .filter(|&v| v != parent)
                .collect();
            kids.sort_by(|&a, &b| self.labels()[min_leaf[a]].cmp(&self.labels()[min_leaf[b]]));
            for &k in &kids {
                stack.push((node, k));
            }
            children[node] = kids;
        }
        (root, children)
    }

    pub fn to_newick(&self) -> String {
        fn write(tree: &UnrootedTernaryTree, node: usize, children: &[Vec<usize>], out: &mut String) {
            if tree.is_leaf(node) {
                push_label(out, &tree.labels()[node]);
                return;
            }
            out.push('(');
            for (k, &child) in children[node].iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write(tree, child, children, out);
            }
            out.push(')');
        }
        let (root, children) = self.canonical_layout();
        let mut out = String::new();
        write(self, root, &children, &mut out);
        out.push(';');
        out
    }

    /// Undirected Graphviz graph; leaves are labeled boxes, internal nodes
    /// points. Node numbering follows the canonical Newick order.
    pub fn to_dot(&self) -> String {
        let (root, children) = self.canonical_layout();
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            order.push(node);
            stack.extend(children[node].iter().rev());
        }
        let mut id = vec![0; self.node_count()];
        for (k, &node) in order.iter().enumerate() {
            id[node] = k;
        }
        let mut out = String::from("graph dendrogram {\n  node [shape=point];\n");
        for &node in &order {
            if self.is_leaf(node) {
                let label = self.labels()[node].replace('\\', "\\\\").replace('"', "\\\"");
                let _ = writeln!(out, "  n{} [shape=box, label=\"{label}\"];", id[node]);
            } else {
                let _ = writeln!(out, "  n{};", id[node]);
            }
        }
        for &node in &order {
            for &child in &children[node] {
                let _ = writeln!(out, "  n{} -- n{};", id[node], id[child]);
            }
        }
        out.push_str("}\n");
        out
    }

    /// Reads a Newick tree. A root with three children is an internal node;
    /// a root with two children is suppressed. Branch lengths and internal
    /// node labels are ignored. Leaves are numbered in label order.
    pub fn parse_newick(text: &str) -> Result<Self, QuartetError> {
        let mut parser = Parser {
            chars: text.char_indices().peekable(),
            text,
            nodes: Vec::new(),
        };
        let root = parser.subtree()?;
        parser.skip_ws();
        parser.expect(';')?;
        parser.skip_ws();
        if let Some((pos, _)) = parser.chars.next() {
            return Err(QuartetError::Newick { pos, message: "trailing input".into() });
        }
        build(parser.nodes, root)
    }
}

enum Node {
    Leaf(String),
    Inner(Vec<usize>),
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn pos(&mut self) -> usize {
        self.chars.peek().map_or(self.text.len(), |(p, _)| *p)
    }

    fn err(&mut self, message: &str) -> QuartetError {
        QuartetError::Newick {
            pos: self.pos(),
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), QuartetError> {
        match self.chars.peek() {
            Some(&(_, c)) if c == want => {
                self.chars.next();
                Ok(())
            }
            _ => Err(self.err(&format!("expected `{want}`"))),
        }
    }

    fn label(&mut self) -> Result<String, QuartetError> {
        self.skip_ws();
        let mut out = String::new();
        if self.chars.peek().is_some_and(|(_, c)| *c == '\'') {
            self.chars.next();
            loop {
                match self.chars.next() {
                    Some((_, '\'')) => {
                        if self.chars.peek().is_some_and(|(_, c)| *c == '\'') {
                            self.chars.next();
                            out.push('\'');
                        } else {
                            break;
                        }
                    }
                    Some((_, c)) => out.push(c),
                    None => return Err(self.err("unterminated quoted label")),
                }
            }
        } else {
            while let Some(&(_, c)) = self.chars.peek() {
                if c.is_whitespace() || "()[]':;,".contains(c) {
                    break;
                }
                out.push(c);
                self.chars.next();
            }
        }
        Ok(out)
    }

    fn branch_length(&mut self) -> Result<(), QuartetError> {
        self.skip_ws();
        if self.chars.peek().is_some_and(|(_, c)| *c == ':') {
            self.chars.next();
            let len = self.label()?;
            if len.parse::<f64>().is_err() {
                return Err(self.err("bad branch length"));
            }
        }
        self.skip_ws();
        Ok(())
    }

    fn subtree(&mut self) -> Result<usize, QuartetError> {
        self.skip_ws();
        let node = if self.chars.peek().is_some_and(|(_, c)| *c == '(') {
            self.chars.next();
            let mut kids = vec![self.subtree()?];
            loop {
                self.skip_ws();
                match self.chars.peek() {
                    Some((_, ',')) => {
                        self.chars.next();
                        kids.push(self.subtree()?);
                    }
                    Some((_, ')')) => {
                        self.chars.next();
                        break;
                    }
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
            self.label()?;
            Node::Inner(kids)
        } else {
            let label = self.label()?;
            if label.is_empty() {
                return Err(self.err("empty leaf label"));
            }
            Node::Leaf(label)
        };
        self.branch_length()?;
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }
}

fn build(nodes: Vec<Node>, root: usize) -> Result<UnrootedTernaryTree, QuartetError> {
    let shape = |m: &str| QuartetError::InvalidTree(m.to_owned());
    let mut labels: Vec<String> = nodes
        .iter()
        .filter_map(|n| match n {
            Node::Leaf(l) => Some(l.clone()),
            Node::Inner(_) => None,
        })
        .collect();
    labels.sort();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(shape("duplicate leaf label"));
    }
    let n = labels.len();
    if n < 4 {
        return Err(QuartetError::TooFewLeaves(n));
    }
    let mut id = vec![usize::MAX; nodes.len()];
    let mut next_inner = n;
    for (k, node) in nodes.iter().enumerate() {
        id[k] = match node {
            Node::Leaf(l) => labels.binary_search(l).expect("label collected above"),
            Node::Inner(_) if k == root => usize::MAX,
            Node::Inner(_) => {
                next_inner += 1;
                next_inner - 1
            }
        };
    }
    let mut edges = Vec::new();
    for (k, node) in nodes.iter().enumerate() {
        if let Node::Inner(kids) = node {
            if k != root {
                if kids.len() != 2 {
                    return Err(shape("every non-root internal node needs exactly 2 children"));
                }
                edges.extend(kids.iter().map(|&c| (id[k], id[c])));
            }
        }
    }
    match &nodes[root] {
        Node::Inner(kids) if kids.len() == 3 => {
            let r = next_inner;
            edges.extend(kids.iter().map(|&c| (r, id[c])));
        }
        Node::Inner(kids) if kids.len() == 2 => edges.push((id[kids[0]], id[kids[1]])),
        _ => return Err(shape("root must have 2 or 3 children")),
    }
    UnrootedTernaryTree::from_edges(labels, &edges)
}
