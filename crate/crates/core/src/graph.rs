//! Simple undirected graphs on dense `0..n` vertex indices.
//!
//! A [`Graph`] keeps its edge set sorted (canonical order for serialization)
//! together with per-vertex neighbor lists and adjacency bitsets, so both
//! ordered iteration and constant-time adjacency queries are available.
//! Values are immutable once built.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    adjacency: Vec<FixedBitSet>,
    names: Option<Vec<String>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    /// Builds a graph from an edge list. Pairs are unordered and repeated
    /// pairs collapse; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_sorted_edges(n, set.into_iter().collect()))
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            neighbors,
            adjacency,
            names: None,
        }
    }

    /// Attaches vertex names; one per vertex.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::invalid(format!(
                "{} names supplied for {} vertices",
                names.len(),
                self.n
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn adjacency(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Name of `v`, falling back to its index.
    pub fn name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| u < self.n && set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| u < self.n && set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted_edges(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)).filter(|&(u, v)| u != v))
            .expect("cycle edges are in range")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are in range")
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are in range")
    }

    /// Circulant graph: `i ~ j` iff `(i - j) mod n` or `(j - i) mod n` is a connection.
    pub fn circulant(n: usize, connections: &[usize]) -> Result<Self> {
        for &c in connections {
            if c == 0 || 2 * c > n {
                return Err(Error::invalid(format!(
                    "circulant connection {c} outside 1..={}",
                    n / 2
                )));
            }
        }
        let edges = (0..n).flat_map(|i| connections.iter().map(move |&c| (i, (i + c) % n)));
        Self::from_edges(n, edges)
    }

    /// Paley graph on a prime `q ≡ 1 (mod 4)`: `i ~ j` iff `i - j` is a nonzero square mod `q`.
    pub fn paley(q: usize) -> Result<Self> {
        let is_prime = q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d));
        if !is_prime || q % 4 != 1 {
            return Err(Error::invalid(format!(
                "Paley graph needs a prime q = 1 mod 4, got {q}"
            )));
        }
        let residues: BTreeSet<usize> = (1..q).map(|x| x * x % q).collect();
        let connections: Vec<usize> = residues.into_iter().filter(|&r| 2 * r <= q).collect();
        Self::circulant(q, &connections)
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).expect("petersen edges are in range")
    }

    /// Erdős–Rényi `G(n, p)` drawn from `rng`, pairs visited in lexicographic order.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Self::from_sorted_edges(n, edges)
    }

    pub fn complement(&self) -> Self {
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect();
        let mut g = Self::from_sorted_edges(self.n, edges);
        g.names = self.names.clone();
        g
    }

    /// Replaces each vertex `v` by a clique of `sizes[v]` vertices joined to the
    /// replacement cliques of all former neighbors. Replacement vertices are
    /// contiguous per origin and named `origin.j`.
    pub fn clique_replace(&self, sizes: &[usize]) -> Result<Self> {
        if sizes.len() != self.n {
            return Err(Error::invalid(format!(
                "{} clique sizes for {} vertices",
                sizes.len(),
                self.n
            )));
        }
        if let Some(v) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::invalid(format!("clique size 0 for vertex {v}")));
        }
        let mut offsets = Vec::with_capacity(self.n + 1);
        offsets.push(0);
        for &s in sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let total = offsets[self.n];
        let mut edges = Vec::new();
        for v in 0..self.n {
            let block = offsets[v]..offsets[v + 1];
            for a in block.clone() {
                for b in a + 1..offsets[v + 1] {
                    edges.push((a, b));
                }
            }
        }
        for &(u, v) in &self.edges {
            for a in offsets[u]..offsets[u + 1] {
                for b in offsets[v]..offsets[v + 1] {
                    edges.push((a, b));
                }
            }
        }
        let names = (0..self.n)
            .flat_map(|v| (0..sizes[v]).map(move |j| (v, j)))
            .map(|(v, j)| format!("{}.{j}", self.name(v)))
            .collect();
        Self::from_edges(total, edges)?.with_names(names)
    }

    /// True iff every vertex is reachable from vertex 0; graphs on at most one
    /// vertex count as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    /// Subgraph induced by `vertices`; the i-th smallest selected vertex becomes
    /// vertex i. Names carry over (unnamed graphs get the original indices).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        if let Some(&v) = set.iter().find(|&&v| v >= self.n) {
            return Err(Error::invalid(format!("vertex {v} outside 0..{}", self.n)));
        }
        let kept: Vec<usize> = set.into_iter().collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        let mut g = Self::from_sorted_edges(kept.len(), edges);
        if self.names.is_some() {
            g.names = Some(kept.iter().map(|&v| self.name(v)).collect());
        }
        Ok(g)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.names == other.names
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Nonnegative rational vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWeights(Vec<Rational>);

impl VertexWeights {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(v) = weights.iter().position(|w| w < &Rational::zero()) {
            return Err(Error::invalid(format!("negative weight on vertex {v}")));
        }
        Ok(VertexWeights(weights))
    }

    pub fn unit(n: usize) -> Self {
        VertexWeights(vec![Rational::one(); n])
    }

    pub fn from_integers(weights: &[u64]) -> Self {
        VertexWeights(weights.iter().map(|&w| Rational::from_integer(w.into())).collect())
    }

    /// Checks that the weight vector fits `g`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.vertex_count() {
            return Err(Error::invalid(format!(
                "{} weights for {} vertices",
                self.0.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.0[v]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self, set: &[usize]) -> Rational {
        set.iter().map(|&v| self.0[v].clone()).sum()
    }

    /// Parses the weights file format: one rational (`a/b` or integer) per line,
    /// line i holding the weight of vertex i-1. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim().trim_matches('"');
            if line.is_empty() {
                continue;
            }
            let w = crate::rational::parse(line).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            weights.push(w);
        }
        Self::new(weights)
    }
}
