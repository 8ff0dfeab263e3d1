//! Conflict graphs over scaffold edges, the bi-conflict composition, and the
//! block-ring construction of k-claw-free graphs from a Ramsey witness.
//!
//! The ring has `p` blocks. Block `i` holds two copies `H1_i`, `H2_i` of the
//! witness `H` and a clique `Q_i` on `τ - 1` vertices. Scaffold edges join
//! each vertex of `H1_i` to its twin in `H2_i`, vertex `j` of `H2_i` to vertex
//! `j` of `Q_i`, and vertex `j` of `Q_i` to vertex `(τ - 1 + j) mod |V(H)|` of
//! `H1_{i+1 mod p}`, for `j < τ - 1`. The output graph has one vertex per
//! scaffold edge of those three kinds, adjacent when the two edges do not form
//! an induced matching.
//!
//! The two `Q`-matchings use disjoint vertex sets of `H` whenever
//! `|V(H)| ≥ 2(τ - 1)`. If one `H` vertex met `Q_{i-1}` in `H1_i` and `Q_i` in
//! `H2_i`, its `H1H2` edge would see both cliques' far sides, and with `p ≥ 3`
//! that already yields a 4-claw for `H = C5`. Even with disjoint sets a leaf
//! can reach an `H2Q` edge through its `Q` vertex's partner in the next block,
//! so k-claw-freeness is checked, not assumed (see [`verify_lemma_bounds`]).

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::dimacs;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{clique_number, independence_number, max_claw, Limits};
use crate::ramsey::is_ramsey_witness;

/// One vertex per listed scaffold edge; two are adjacent when their edges
/// share an endpoint or some endpoint of one is adjacent to an endpoint of
/// the other.
pub fn conflict_graph(scaffold: &Graph, matching_edges: &[(usize, usize)]) -> Result<Graph> {
    let reach: Vec<FixedBitSet> = matching_edges
        .iter()
        .map(|&(a, b)| {
            if a >= scaffold.vertex_count() || b >= scaffold.vertex_count() || !scaffold.has_edge(a, b) {
                return Err(Error::invalid(format!("({a}, {b}) is not an edge of the scaffold")));
            }
            let mut set = scaffold.adjacency(a).clone();
            set.union_with(scaffold.adjacency(b));
            set.insert(a);
            set.insert(b);
            Ok(set)
        })
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for (i, near) in reach.iter().enumerate() {
        for (j, &(c, d)) in matching_edges.iter().enumerate().skip(i + 1) {
            if near.contains(c) || near.contains(d) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(matching_edges.len(), edges)
}

/// `bcc(h1, h2)`: the conflict graph over the perfect matching pairing vertex
/// `v` of `h1` with vertex `matching[v]` of `h2`, inside `h1 ⊎ h2` plus the
/// matching.
pub fn bcc(h1: &Graph, h2: &Graph, matching: &[usize]) -> Result<Graph> {
    let n = h1.vertex_count();
    if h2.vertex_count() != n {
        return Err(Error::invalid(format!(
            "bcc needs equal sizes, got {n} and {}",
            h2.vertex_count()
        )));
    }
    if matching.len() != n {
        return Err(Error::invalid(format!(
            "matching has {} entries for {n} vertices",
            matching.len()
        )));
    }
    let mut seen = vec![false; n];
    for &m in matching {
        if m >= n || std::mem::replace(&mut seen[m], true) {
            return Err(Error::invalid(format!("matching {matching:?} is not a permutation")));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).map(|v| (v, n + matching[v])).collect();
    let scaffold_edges = h1
        .edges()
        .iter()
        .copied()
        .chain(h2.edges().iter().map(|&(u, v)| (n + u, n + v)))
        .chain(pairs.iter().copied());
    let scaffold = Graph::from_edges(2 * n, scaffold_edges)?;
    conflict_graph(&scaffold, &pairs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub k: usize,
    pub p: usize,
    pub tau: usize,
    pub h: Graph,
}

impl ConstructionParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 4 {
            return Err(Error::invalid(format!("k must be at least 4, got {}", self.k)));
        }
        if self.p < 1 {
            return Err(Error::invalid("p must be at least 1"));
        }
        if self.tau < 3 {
            return Err(Error::invalid(format!("tau must be at least 3, got {}", self.tau)));
        }
        if self.h.vertex_count() < self.tau - 1 {
            return Err(Error::invalid(format!(
                "H has {} vertices but tau - 1 = {} are needed",
                self.h.vertex_count(),
                self.tau - 1
            )));
        }
        Ok(())
    }

    /// Whether `H` is a `(k-1, τ)`-Ramsey witness, the hypothesis the bounds rest on.
    pub fn is_intended_witness(&self, limits: &Limits) -> Result<bool> {
        is_ramsey_witness(&self.h, self.k - 1, self.tau, limits)
    }

    /// `p · (|V(H)| + 2(τ - 1))`
    pub fn vertex_count(&self) -> usize {
        self.p * (self.h.vertex_count() + 2 * (self.tau - 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    H1H2,
    H2Q,
    QH1next,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeClass::H1H2 => "H1H2",
            EdgeClass::H2Q => "H2Q",
            EdgeClass::QH1next => "QH1next",
        };
        f.write_str(s)
    }
}

/// A scaffold vertex: copy name (`H1_i`, `H2_i` or `Q_i`) and index inside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    pub copy: String,
    pub local: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub vertex: usize,
    pub block: usize,
    pub class: EdgeClass,
    pub end1: Endpoint,
    pub end2: Endpoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionLabels {
    pub blocks: usize,
    pub entries: Vec<LabelEntry>,
    /// The scaffold in DIMACS form.
    pub scaffold: String,
}

impl ConstructionLabels {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("labels serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn scaffold_graph(&self) -> Result<Graph> {
        dimacs::parse(&self.scaffold)
    }
}

/// Builds the block ring and its conflict graph. Vertices are numbered block
/// by block, and within a block `H1H2` edges (by `H` vertex), then `H2Q`, then
/// `QH1next` edges (by clique index).
pub fn build_lemma_graph(params: &ConstructionParams) -> Result<(Graph, ConstructionLabels)> {
    params.validate()?;
    let q = params.h.vertex_count();
    let c = params.tau - 1;
    let p = params.p;
    let block_size = 2 * q + c;
    let h1 = |i: usize, v: usize| i * block_size + v;
    let h2 = |i: usize, v: usize| i * block_size + q + v;
    let clique = |i: usize, j: usize| i * block_size + 2 * q + j;

    let mut scaffold_edges = Vec::new();
    for i in 0..p {
        for &(u, v) in params.h.edges() {
            scaffold_edges.push((h1(i, u), h1(i, v)));
            scaffold_edges.push((h2(i, u), h2(i, v)));
        }
        for a in 0..c {
            for b in a + 1..c {
                scaffold_edges.push((clique(i, a), clique(i, b)));
            }
        }
    }

    let endpoint = |copy: &str, i: usize, local: usize| Endpoint {
        copy: format!("{copy}_{i}"),
        local,
    };
    let mut matching = Vec::with_capacity(params.vertex_count());
    let mut entries = Vec::with_capacity(params.vertex_count());
    let mut push = |pair: (usize, usize), block, class, end1, end2| {
        entries.push(LabelEntry {
            vertex: matching.len(),
            block,
            class,
            end1,
            end2,
        });
        matching.push(pair);
    };
    for i in 0..p {
        let next = (i + 1) % p;
        for v in 0..q {
            push(
                (h1(i, v), h2(i, v)),
                i,
                EdgeClass::H1H2,
                endpoint("H1", i, v),
                endpoint("H2", i, v),
            );
        }
        for j in 0..c {
            push(
                (h2(i, j), clique(i, j)),
                i,
                EdgeClass::H2Q,
                endpoint("H2", i, j),
                endpoint("Q", i, j),
            );
        }
        for j in 0..c {
            let v = (c + j) % q;
            push(
                (clique(i, j), h1(next, v)),
                i,
                EdgeClass::QH1next,
                endpoint("Q", i, j),
                endpoint("H1", next, v),
            );
        }
    }
    scaffold_edges.extend(matching.iter().copied());
    let scaffold = Graph::from_edges(p * block_size, scaffold_edges)?;
    let g = conflict_graph(&scaffold, &matching)?;
    debug_assert_eq!(g.vertex_count(), params.vertex_count());
    let labels = ConstructionLabels {
        blocks: p,
        entries,
        scaffold: dimacs::write(&scaffold),
    };
    Ok((g, labels))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// A solver refused the instance; never counted as a pass.
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub status: ClaimStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub k: usize,
    pub p: usize,
    pub tau: usize,
    pub n: usize,
    /// Whether `H` is a `(k-1, τ)`-Ramsey witness; `None` if that check was refused.
    pub h_is_witness: Option<bool>,
    pub alpha_h: Option<usize>,
    pub alpha: Option<usize>,
    pub omega: Option<usize>,
    pub max_claw: Option<usize>,
    pub claims: Vec<Claim>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status == ClaimStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.claims.iter().any(|c| c.status == ClaimStatus::Fail)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// Guard refusals become `None`; other errors propagate.
fn guarded<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_guard() => Ok(None),
        Err(e) => Err(e),
    }
}

fn claim(name: &str, verdict: Option<bool>, detail: String) -> Claim {
    let status = match verdict {
        Some(true) => ClaimStatus::Pass,
        Some(false) => ClaimStatus::Fail,
        None => ClaimStatus::Unverified,
    };
    Claim {
        name: name.to_string(),
        status,
        detail,
    }
}

/// Checks the five bounds the construction promises: connectivity,
/// k-claw-freeness, `p·α(H) ≤ α(G)`, `α(G) < 3p·α(H)` and `ω(G) ≤ 3τ`, with
/// exact solvers. `g` and `labels` must be what [`build_lemma_graph`] returns
/// for `params`.
pub fn verify_lemma_bounds(
    g: &Graph,
    labels: &ConstructionLabels,
    params: &ConstructionParams,
    limits: &Limits,
) -> Result<LemmaReport> {
    let (expected, expected_labels) = build_lemma_graph(params)?;
    if *g != expected || *labels != expected_labels {
        return Err(Error::invalid(
            "graph and labels do not match the construction parameters",
        ));
    }
    let (k, p, tau) = (params.k, params.p, params.tau);
    let h_is_witness = guarded(params.is_intended_witness(limits))?;
    let alpha_h = guarded(independence_number(&params.h, limits))?.map(|(a, _)| a);
    let alpha = guarded(independence_number(g, limits))?.map(|(a, _)| a);
    let omega = guarded(clique_number(g, limits))?.map(|(w, _)| w);
    let claw = guarded(max_claw(g, limits))?.map(|c| c.size);
    let show = |v: Option<usize>| v.map_or_else(|| "refused".to_string(), |v| v.to_string());

    let claims = vec![
        claim(
            "connected",
            Some(g.is_connected()),
            format!("{} vertices", g.vertex_count()),
        ),
        claim(
            "k_claw_free",
            claw.map(|c| c < k),
            format!("largest induced claw {} vs k = {k}", show(claw)),
        ),
        claim(
            "alpha_lower",
            alpha.zip(alpha_h).map(|(a, ah)| p * ah <= a),
            format!("p·α(H) = {} vs α(G) = {}", show(alpha_h.map(|a| p * a)), show(alpha)),
        ),
        claim(
            "alpha_upper",
            alpha.zip(alpha_h).map(|(a, ah)| a < 3 * p * ah),
            format!(
                "α(G) = {} vs 3p·α(H) = {}",
                show(alpha),
                show(alpha_h.map(|a| 3 * p * a))
            ),
        ),
        claim(
            "omega_upper",
            omega.map(|w| w <= 3 * tau),
            format!("ω(G) = {} vs 3τ = {}", show(omega), 3 * tau),
        ),
    ];
    Ok(LemmaReport {
        k,
        p,
        tau,
        n: g.vertex_count(),
        h_is_witness,
        alpha_h,
        alpha,
        omega,
        max_claw: claw,
        claims,
    })
}
