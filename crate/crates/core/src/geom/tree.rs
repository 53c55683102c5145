//! Spanning trees over sampled parameter points, rooted at node 0.

use alloc::collections::BinaryHeap;
use core::cmp::{Ordering, Reverse};

use crate::prelude::*;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    parent: Vec<Option<usize>>,
    order: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    node: usize,
    from: usize,
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.node.cmp(&other.node))
            .then(self.from.cmp(&other.from))
    }
}

impl SpanningTree {
    /// Minimum spanning tree of the complete graph on `nodes` (Prim), using
    /// only edges for which `admissible(i, j)` holds. Ties go to the lowest index.
    pub fn nearest_neighbor(nodes: &[Complex64], admissible: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = nodes.len();
        let mut tree = SpanningTree { parent: vec![None; n], order: Vec::with_capacity(n) };
        if n == 0 {
            return Ok(tree);
        }
        let mut in_tree = vec![false; n];
        let mut best = vec![f64::INFINITY; n];
        let mut from = vec![usize::MAX; n];
        let mut current = 0;
        in_tree[0] = true;
        tree.order.push(0);
        for _ in 1..n {
            for j in 0..n {
                if in_tree[j] || !admissible(current, j) {
                    continue;
                }
                let d = (nodes[j] - nodes[current]).norm();
                if d < best[j] {
                    best[j] = d;
                    from[j] = current;
                }
            }
            let mut next = usize::MAX;
            for j in 0..n {
                if !in_tree[j] && best[j].is_finite() && (next == usize::MAX || best[j] < best[next]) {
                    next = j;
                }
            }
            if next == usize::MAX {
                let stray = (0..n).find(|&j| !in_tree[j]).unwrap_or(0);
                return Err(unreachable_node(stray));
            }
            in_tree[next] = true;
            tree.parent[next] = Some(from[next]);
            tree.order.push(next);
            current = next;
        }
        Ok(tree)
    }

    /// Minimum spanning tree restricted to the edges listed by `neighbors`;
    /// falls back to a scan of all admissible edges if that graph is disconnected.
    pub fn with_neighbors(
        nodes: &[Complex64],
        neighbors: impl Fn(usize) -> Vec<usize>,
        admissible: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let n = nodes.len();
        let mut tree = SpanningTree { parent: vec![None; n], order: Vec::with_capacity(n) };
        if n == 0 {
            return Ok(tree);
        }
        let mut in_tree = vec![false; n];
        let mut heap = BinaryHeap::new();
        let push_from = |i: usize, heap: &mut BinaryHeap<Reverse<Candidate>>, in_tree: &[bool]| {
            for j in neighbors(i) {
                if j < n && !in_tree[j] && admissible(i, j) {
                    heap.push(Reverse(Candidate { dist: (nodes[j] - nodes[i]).norm(), node: j, from: i }));
                }
            }
        };
        in_tree[0] = true;
        tree.order.push(0);
        push_from(0, &mut heap, &in_tree);
        while tree.order.len() < n {
            let next = loop {
                match heap.pop() {
                    Some(Reverse(c)) if in_tree[c.node] => continue,
                    Some(Reverse(c)) => break Some(c),
                    None => break None,
                }
            };
            let c = match next {
                Some(c) => c,
                None => bridge(nodes, &in_tree, &admissible)?,
            };
            in_tree[c.node] = true;
            tree.parent[c.node] = Some(c.from);
            tree.order.push(c.node);
            push_from(c.node, &mut heap, &in_tree);
        }
        Ok(tree)
    }

    /// Builds a tree from explicit parent links (`parents[0]` must be `None`).
    pub fn from_parents(parents: Vec<Option<usize>>) -> Result<Self> {
        let n = parents.len();
        if n > 0 && parents[0].is_some() {
            return Err(Error::InvalidArgument("the root must have no parent".into()));
        }
        let mut children = vec![Vec::new(); n];
        for (j, p) in parents.iter().enumerate().skip(1) {
            match p {
                Some(p) if *p < n && *p != j => children[*p].push(j),
                _ => return Err(Error::InvalidArgument(format!("node {} has an invalid parent", j))),
            }
        }
        let mut order = Vec::with_capacity(n);
        if n > 0 {
            order.push(0);
        }
        let mut k = 0;
        while k < order.len() {
            let i = order[k];
            order.extend(children[i].iter().copied());
            k += 1;
        }
        if order.len() != n {
            return Err(Error::InvalidArgument("parent links do not form a tree rooted at 0".into()));
        }
        Ok(SpanningTree { parent: parents, order })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    /// Nodes with every parent listed before its children.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `(parent, child)` pairs in [`order`](Self::order).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order.iter().filter_map(move |&j| self.parent[j].map(|p| (p, j)))
    }
}

fn unreachable_node(node: usize) -> Error {
    Error::InvalidArgument(format!("node {} cannot be reached without passing a singularity", node))
}

fn bridge(nodes: &[Complex64], in_tree: &[bool], admissible: &impl Fn(usize, usize) -> bool) -> Result<Candidate> {
    let mut best: Option<Candidate> = None;
    for i in (0..nodes.len()).filter(|&i| in_tree[i]) {
        for j in (0..nodes.len()).filter(|&j| !in_tree[j]) {
            let c = Candidate { dist: (nodes[j] - nodes[i]).norm(), node: j, from: i };
            if best.map_or(true, |b| c < b) && admissible(i, j) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| unreachable_node(in_tree.iter().position(|t| !t).unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Vec<Complex64> {
        (0..n).map(|k| Complex64::new(k as f64, 0.0)).collect()
    }

    #[test]
    fn chain_on_a_line() {
        let tree = SpanningTree::nearest_neighbor(&line(5), |_, _| true).unwrap();
        for j in 1..5 {
            assert_eq!(tree.parent(j), Some(j - 1));
        }
        assert_eq!(tree.order(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn inadmissible_edges_are_avoided() {
        let nodes = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 3.0),
        ];
        let tree = SpanningTree::nearest_neighbor(&nodes, |i, j| !(i.min(j) == 0 && i.max(j) == 1)).unwrap();
        assert_eq!(tree.parent(1), Some(2));
        assert!(SpanningTree::nearest_neighbor(&nodes, |_, _| false).is_err());
    }

    #[test]
    fn neighbor_tree_bridges_components() {
        let nodes = line(4);
        let tree = SpanningTree::with_neighbors(&nodes, |i| if i == 0 { vec![1] } else { vec![] }, |_, _| true).unwrap();
        assert_eq!(tree.len(), 4);
        assert_eq!(tree.edges().count(), 3);
        assert_eq!(tree.parent(1), Some(0));
    }

    #[test]
    fn explicit_parents_validated() {
        assert!(SpanningTree::from_parents(vec![None, Some(0), Some(1)]).is_ok());
        assert!(SpanningTree::from_parents(vec![None, Some(2), Some(1)]).is_err());
        assert!(SpanningTree::from_parents(vec![Some(1), None]).is_err());
    }
}
