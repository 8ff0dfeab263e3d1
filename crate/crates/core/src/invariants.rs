//! Exact graph invariants: independence number, clique number, chromatic
//! number, largest induced claw, and maximal-clique enumeration.
//!
//! Every routine is exact. Instances above the configured [`Limits`] are
//! refused with [`Error::Guard`] instead of being approximated. Witnesses are
//! deterministic: among optimal vertex sets the lexicographically smallest
//! (as a sorted list) is returned.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Size limits for the exponential solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Vertex limit for independence/clique/claw/MWIS search.
    pub vertices: usize,
    /// Vertex limit for the chromatic-number search.
    pub chromatic_vertices: usize,
    /// Output limit for maximal-clique enumeration.
    pub cliques: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertices: 64,
            chromatic_vertices: 40,
            cliques: 1_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_vertices(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.vertices {
            return Err(Error::Guard {
                what,
                limit: self.vertices,
                actual: n,
            });
        }
        Ok(())
    }
}

/// Center and leaves of an induced star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claw {
    pub center: usize,
    pub leaves: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxClaw {
    pub size: usize,
    /// `None` when the graph has no edges.
    pub witness: Option<Claw>,
}

pub fn independence_number(g: &Graph, limits: &Limits) -> Result<(usize, Vec<usize>)> {
    limits.check_vertices("independence number", g.vertex_count())?;
    let adj = complement_adjacency(g);
    let all = full_set(g.vertex_count());
    let witness = max_clique_in(&adj, &all);
    assert!(g.is_independent(&witness), "independence witness is not independent");
    Ok((witness.len(), witness))
}

pub fn clique_number(g: &Graph, limits: &Limits) -> Result<(usize, Vec<usize>)> {
    limits.check_vertices("clique number", g.vertex_count())?;
    let adj = adjacency(g);
    let all = full_set(g.vertex_count());
    let witness = max_clique_in(&adj, &all);
    assert!(g.is_clique(&witness), "clique witness is not a clique");
    Ok((witness.len(), witness))
}

/// Exact chromatic number with a proper coloring (`coloring[v]` in `0..chi`).
pub fn chromatic_number(g: &Graph, limits: &Limits) -> Result<(usize, Vec<usize>)> {
    let n = g.vertex_count();
    if n > limits.chromatic_vertices {
        return Err(Error::Guard {
            what: "chromatic number",
            limit: limits.chromatic_vertices,
            actual: n,
        });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let (_, clique) = clique_number(g, &Limits { vertices: n, ..*limits })?;
    let mut best = dsatur_greedy(g);
    let mut upper = color_count(&best);
    // Optimality is proven by the final exhaustive failure at upper - 1 colors.
    while upper > clique.len() {
        match Colorer::new(g, upper - 1, &clique).solve() {
            Some(coloring) => {
                upper = color_count(&coloring);
                best = coloring;
            }
            None => break,
        }
    }
    assert!(is_proper_coloring(g, &best), "coloring is not proper");
    Ok((upper, best))
}

/// Largest `r` such that `g` contains an induced `K_{1,r}`.
pub fn max_claw(g: &Graph, limits: &Limits) -> Result<MaxClaw> {
    let comp = complement_adjacency(g);
    let mut best = MaxClaw { size: 0, witness: None };
    for v in 0..g.vertex_count() {
        let nbhd = g.adjacency(v);
        let deg = nbhd.count_ones(..);
        if deg == 0 || deg <= best.size {
            continue;
        }
        limits.check_vertices("claw neighborhood", deg)?;
        let leaves = max_clique_in(&comp, nbhd);
        if leaves.len() > best.size {
            best = MaxClaw {
                size: leaves.len(),
                witness: Some(Claw { center: v, leaves }),
            };
        }
    }
    if let Some(claw) = &best.witness {
        assert!(is_induced_claw(g, claw), "claw witness is not an induced star");
    }
    Ok(best)
}

/// `Ok(None)` when `g` has no induced `K_{1,k}`, otherwise a witness with exactly `k` leaves.
pub fn find_claw(g: &Graph, k: usize, limits: &Limits) -> Result<Option<Claw>> {
    if k < 3 {
        return Err(Error::invalid(format!("claw size must be at least 3, got {k}")));
    }
    let claw = max_claw(g, limits)?;
    Ok(claw.witness.filter(|_| claw.size >= k).map(|mut c| {
        c.leaves.truncate(k);
        c
    }))
}

pub fn is_k_claw_free(g: &Graph, k: usize, limits: &Limits) -> Result<bool> {
    Ok(find_claw(g, k, limits)?.is_none())
}

/// All inclusion-maximal cliques (Bron–Kerbosch with Tomita pivoting), each
/// sorted, the list sorted lexicographically.
pub fn maximal_cliques(g: &Graph, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let adj = adjacency(g);
    let mut out = Vec::new();
    let mut current = Vec::new();
    bron_kerbosch(
        &adj,
        &mut current,
        full_set(g.vertex_count()),
        FixedBitSet::with_capacity(g.vertex_count()),
        &mut out,
        limits.cliques,
    )?;
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    adj: &[FixedBitSet],
    current: &mut Vec<usize>,
    mut candidates: FixedBitSet,
    mut excluded: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> Result<()> {
    if candidates.is_clear() {
        if excluded.is_clear() {
            if out.len() == limit {
                return Err(Error::Guard {
                    what: "maximal clique enumeration",
                    limit,
                    actual: limit + 1,
                });
            }
            out.push(current.clone());
        }
        return Ok(());
    }
    let pivot = candidates
        .ones()
        .chain(excluded.ones())
        .max_by_key(|&u| (adj[u].intersection_count(&candidates), std::cmp::Reverse(u)))
        .expect("candidate set is nonempty");
    let mut branch = candidates.clone();
    branch.difference_with(&adj[pivot]);
    for v in branch.ones() {
        current.push(v);
        bron_kerbosch(adj, current, &candidates & &adj[v], &excluded & &adj[v], out, limit)?;
        current.pop();
        candidates.set(v, false);
        excluded.insert(v);
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_coloring: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_claw: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_claw_witness: Option<Claw>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cliques: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportRequest {
    pub alpha: bool,
    pub omega: bool,
    pub chi: bool,
    pub max_claw: bool,
    pub cliques: bool,
}

impl ReportRequest {
    pub fn all() -> Self {
        ReportRequest {
            alpha: true,
            omega: true,
            chi: true,
            max_claw: true,
            cliques: true,
        }
    }
}

pub fn report(g: &Graph, request: ReportRequest, limits: &Limits) -> Result<InvariantReport> {
    let mut r = InvariantReport::default();
    if request.alpha {
        let (a, w) = independence_number(g, limits)?;
        r.alpha = Some(a);
        r.alpha_witness = Some(w);
    }
    if request.omega {
        let (o, w) = clique_number(g, limits)?;
        r.omega = Some(o);
        r.omega_witness = Some(w);
    }
    if request.chi {
        let (c, col) = chromatic_number(g, limits)?;
        r.chi = Some(c);
        r.chi_coloring = Some(col);
    }
    if request.max_claw {
        let claw = max_claw(g, limits)?;
        r.max_claw = Some(claw.size);
        r.max_claw_witness = claw.witness;
    }
    if request.cliques {
        r.cliques = Some(maximal_cliques(g, limits)?);
    }
    Ok(r)
}

pub fn is_proper_coloring(g: &Graph, coloring: &[usize]) -> bool {
    coloring.len() == g.vertex_count() && g.edges().iter().all(|&(u, v)| coloring[u] != coloring[v])
}

pub fn is_induced_claw(g: &Graph, claw: &Claw) -> bool {
    claw.leaves
        .iter()
        .all(|&l| l != claw.center && g.has_edge(claw.center, l))
        && g.is_independent(&claw.leaves)
}

fn color_count(coloring: &[usize]) -> usize {
    coloring.iter().max().map_or(0, |&c| c + 1)
}

pub(crate) fn adjacency(g: &Graph) -> Vec<FixedBitSet> {
    (0..g.vertex_count()).map(|v| g.adjacency(v).clone()).collect()
}

pub(crate) fn complement_adjacency(g: &Graph) -> Vec<FixedBitSet> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            let mut row = g.adjacency(v).clone();
            row.toggle_range(..);
            row.set(v, false);
            row
        })
        .collect()
}

pub(crate) fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

/// Maximum clique inside `candidates`, returned as the lexicographically
/// smallest optimal sorted vertex list.
pub(crate) fn max_clique_in(adj: &[FixedBitSet], candidates: &FixedBitSet) -> Vec<usize> {
    let mut order: Vec<usize> = candidates.ones().collect();
    // descending degree within the candidate set, lower index first on ties
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].intersection_count(candidates)), v));
    let mut search = CliqueSearch {
        adj,
        current: Vec::new(),
        best: 0,
    };
    search.expand(order);
    let target = search.best;
    let mut witness = Vec::with_capacity(target);
    let found = lex_first_clique(adj, &mut witness, candidates.clone(), target);
    debug_assert!(found);
    witness
}

struct CliqueSearch<'a> {
    adj: &'a [FixedBitSet],
    current: Vec<usize>,
    best: usize,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, candidates: Vec<usize>) {
        let (order, colors) = color_sort(self.adj, &candidates);
        for idx in (0..order.len()).rev() {
            if self.current.len() + colors[idx] <= self.best {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let next: Vec<usize> = order[..idx]
                .iter()
                .copied()
                .filter(|&u| self.adj[v].contains(u))
                .collect();
            if next.is_empty() {
                self.best = self.best.max(self.current.len());
            } else {
                self.expand(next);
            }
            self.current.pop();
        }
    }
}

/// Greedy sequential coloring; returns vertices grouped by color and the
/// (1-based) color of each position, nondecreasing.
fn color_sort(adj: &[FixedBitSet], vertices: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in vertices {
        match classes
            .iter_mut()
            .find(|class| class.iter().all(|&u| !adj[v].contains(u)))
        {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(vertices.len());
    let mut colors = Vec::with_capacity(vertices.len());
    for (c, class) in classes.into_iter().enumerate() {
        colors.extend(std::iter::repeat_n(c + 1, class.len()));
        order.extend(class);
    }
    (order, colors)
}

fn greedy_color_bound(adj: &[FixedBitSet], candidates: &FixedBitSet) -> usize {
    let vertices: Vec<usize> = candidates.ones().collect();
    color_sort(adj, &vertices).1.last().copied().unwrap_or(0)
}

/// Depth-first search in increasing vertex order for a clique of exactly
/// `target` vertices; the first hit is the lexicographically smallest.
fn lex_first_clique(adj: &[FixedBitSet], current: &mut Vec<usize>, candidates: FixedBitSet, target: usize) -> bool {
    if current.len() == target {
        return true;
    }
    if current.len() + greedy_color_bound(adj, &candidates) < target {
        return false;
    }
    let mut remaining = candidates.count_ones(..);
    for v in candidates.ones() {
        if current.len() + remaining < target {
            return false;
        }
        remaining -= 1;
        let mut next = &candidates & &adj[v];
        next.remove_range(..v + 1);
        current.push(v);
        if lex_first_clique(adj, current, next, target) {
            return true;
        }
        current.pop();
    }
    false
}

/// Greedy DSATUR coloring.
fn dsatur_greedy(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut state = ColorState::new(g, n);
    while let Some(v) = state.pick() {
        let c = (0..)
            .find(|&c| state.neighbor_count[v].get(c).copied().unwrap_or(0) == 0)
            .unwrap();
        state.assign(g, v, c);
    }
    state.coloring.into_iter().map(|c| c.unwrap()).collect()
}

struct ColorState {
    coloring: Vec<Option<usize>>,
    /// neighbor_count[v][c] = colored neighbors of v with color c
    neighbor_count: Vec<Vec<usize>>,
    saturation: Vec<usize>,
    uncolored_degree: Vec<usize>,
}

impl ColorState {
    fn new(g: &Graph, palette: usize) -> Self {
        let n = g.vertex_count();
        ColorState {
            coloring: vec![None; n],
            neighbor_count: vec![vec![0; palette.max(1)]; n],
            saturation: vec![0; n],
            uncolored_degree: (0..n).map(|v| g.degree(v)).collect(),
        }
    }

    /// Max saturation, then max uncolored degree, then lowest index.
    fn pick(&self) -> Option<usize> {
        (0..self.coloring.len())
            .filter(|&v| self.coloring[v].is_none())
            .max_by_key(|&v| (self.saturation[v], self.uncolored_degree[v], std::cmp::Reverse(v)))
    }

    fn assign(&mut self, g: &Graph, v: usize, c: usize) {
        self.coloring[v] = Some(c);
        for &u in g.neighbors(v) {
            let counts = &mut self.neighbor_count[u];
            if counts.len() <= c {
                counts.resize(c + 1, 0);
            }
            if counts[c] == 0 {
                self.saturation[u] += 1;
            }
            counts[c] += 1;
            self.uncolored_degree[u] -= 1;
        }
    }

    fn unassign(&mut self, g: &Graph, v: usize) {
        let c = self.coloring[v].take().expect("vertex is colored");
        for &u in g.neighbors(v) {
            let counts = &mut self.neighbor_count[u];
            counts[c] -= 1;
            if counts[c] == 0 {
                self.saturation[u] -= 1;
            }
            self.uncolored_degree[u] += 1;
        }
    }
}

/// Exhaustive k-colorability search with DSATUR branching order. The clique
/// is precolored `0..|clique|`, which breaks the palette symmetry on it.
struct Colorer<'a> {
    g: &'a Graph,
    k: usize,
    state: ColorState,
}

impl<'a> Colorer<'a> {
    fn new(g: &'a Graph, k: usize, clique: &[usize]) -> Self {
        let mut state = ColorState::new(g, k);
        for (c, &v) in clique.iter().enumerate() {
            state.assign(g, v, c);
        }
        Colorer { g, k, state }
    }

    fn solve(mut self) -> Option<Vec<usize>> {
        let used = self.state.coloring.iter().flatten().count();
        if self.search(used) {
            Some(self.state.coloring.into_iter().map(|c| c.unwrap()).collect())
        } else {
            None
        }
    }

    fn search(&mut self, used: usize) -> bool {
        let Some(v) = self.state.pick() else {
            return true;
        };
        if self.state.saturation[v] >= self.k {
            return false;
        }
        // a fresh color is interchangeable with any other unused one
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.state.neighbor_count[v][c] != 0 {
                continue;
            }
            self.state.assign(self.g, v, c);
            if self.search(used.max(c + 1)) {
                return true;
            }
            self.state.unassign(self.g, v);
        }
        false
    }
}
