//! (s,t)-Ramsey witnesses: graphs with no independent set of size `s` and no
//! clique of size `t`.
//!
//! Witnesses come from a small shipped catalog (DIMACS files under
//! `catalog/`) or from a seeded tabu local search over `n`-vertex graphs.
//! Every graph handed out is re-verified with the exact invariant solvers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dimacs;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{clique_number, independence_number, Limits};

const CATALOG: &[(usize, usize, &str)] = &[
    (3, 3, include_str!("../catalog/r3_3.dimacs")),
    (3, 4, include_str!("../catalog/r3_4.dimacs")),
    (3, 5, include_str!("../catalog/r3_5.dimacs")),
    (4, 4, include_str!("../catalog/r4_4.dimacs")),
];

/// Largest vertex count the local search accepts (adjacency is a `u64` mask).
pub const MAX_SEARCH_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamseyQuery {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub budget: u64,
}

impl RamseyQuery {
    pub fn validate(&self) -> Result<()> {
        if self.s < 3 || self.t < 3 {
            return Err(Error::invalid(format!(
                "Ramsey parameters must be at least 3, got ({}, {})",
                self.s, self.t
            )));
        }
        if self.n == 0 || self.n > MAX_SEARCH_VERTICES {
            return Err(Error::invalid(format!(
                "search vertex count must be in 1..={MAX_SEARCH_VERTICES}, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// True iff `α(g) < s` and `ω(g) < t`.
pub fn is_ramsey_witness(g: &Graph, s: usize, t: usize, limits: &Limits) -> Result<bool> {
    Ok(independence_number(g, limits)?.0 < s && clique_number(g, limits)?.0 < t)
}

/// Stored witness for `(s, t)`; `(t, s)` entries are served complemented.
pub fn catalog_witness(s: usize, t: usize) -> Option<Graph> {
    let lookup = |a, b| {
        CATALOG
            .iter()
            .find(|&&(cs, ct, _)| (cs, ct) == (a, b))
            .map(|&(_, _, text)| dimacs::parse(text).expect("catalog entry is valid DIMACS"))
    };
    let g = lookup(s, t).or_else(|| lookup(t, s).map(|g| g.complement()))?;
    let verified = is_ramsey_witness(&g, s, t, &Limits::default()).unwrap_or(false);
    assert!(verified, "catalog entry for ({s}, {t}) is not a Ramsey witness");
    Some(g)
}

/// Parameter pairs with a catalog entry (including complemented ones).
pub fn catalog_entries() -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = CATALOG.iter().flat_map(|&(s, t, _)| [(s, t), (t, s)]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Seeded tabu search minimizing the number of independent `s`-sets plus
/// `t`-cliques over edge flips. Returns a verified witness, or `None` once the
/// iteration budget is spent. Identical queries give identical results.
pub fn search_ramsey(q: &RamseyQuery) -> Result<Option<Graph>> {
    q.validate()?;
    let n = q.n;
    let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
    let mut state = SearchState::random(n, q.s, q.t, &mut rng);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let tenure = (pairs.len() / 8).clamp(1, 10).min(pairs.len().saturating_sub(1));
    let mut tabu_until = vec![0u64; pairs.len()];
    let restart_every = (q.budget / 10).max(1);
    let mut best = state.score;
    let mut since_improvement = 0u64;

    for iter in 0..q.budget {
        if state.score == 0 {
            break;
        }
        if pairs.is_empty() {
            break;
        }
        if since_improvement >= restart_every {
            state = SearchState::random(n, q.s, q.t, &mut rng);
            tabu_until.iter_mut().for_each(|t| *t = 0);
            best = state.score;
            since_improvement = 0;
            continue;
        }
        let mut best_delta = i64::MAX;
        let mut moves = Vec::new();
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            let delta = state.flip_delta(u, v);
            let aspirated = state.score as i64 + delta < best as i64;
            if tabu_until[idx] > iter && !aspirated {
                continue;
            }
            if delta < best_delta {
                best_delta = delta;
                moves.clear();
            }
            if delta == best_delta {
                moves.push(idx);
            }
        }
        let idx = match moves.choose(&mut rng) {
            Some(&idx) => idx,
            None => rng.gen_range(0..pairs.len()),
        };
        let (u, v) = pairs[idx];
        state.flip(u, v);
        tabu_until[idx] = iter + 1 + tenure as u64;
        if state.score < best {
            best = state.score;
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
    }

    if state.score != 0 {
        return Ok(None);
    }
    let g = state.to_graph();
    let limits = Limits {
        vertices: MAX_SEARCH_VERTICES,
        ..Limits::default()
    };
    if !is_ramsey_witness(&g, q.s, q.t, &limits)? {
        return Err(Error::invalid("local search produced an unverified witness"));
    }
    Ok(Some(g))
}

struct SearchState {
    n: usize,
    s: usize,
    t: usize,
    adj: Vec<u64>,
    comp: Vec<u64>,
    score: u64,
}

impl SearchState {
    fn random<R: Rng>(n: usize, s: usize, t: usize, rng: &mut R) -> Self {
        let mut adj = vec![0u64; n];
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
        }
        let mut state = SearchState {
            n,
            s,
            t,
            adj,
            comp: Vec::new(),
            score: 0,
        };
        state.comp = (0..n).map(|v| state.complement_row(v)).collect();
        state.score = state.full_score();
        state
    }

    fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn complement_row(&self, v: usize) -> u64 {
        !self.adj[v] & self.mask() & !(1 << v)
    }

    fn full_score(&self) -> u64 {
        count_cliques(&self.adj, self.mask(), self.t) + count_cliques(&self.comp, self.mask(), self.s)
    }

    /// Change in score if edge `{u, v}` is toggled.
    fn flip_delta(&self, u: usize, v: usize) -> i64 {
        let others = self.mask() & !(1 << u) & !(1 << v);
        let common = self.adj[u] & self.adj[v] & others;
        let common_non = self.comp[u] & self.comp[v] & others;
        let cliques = count_cliques(&self.adj, common, self.t - 2) as i64;
        let independents = count_cliques(&self.comp, common_non, self.s - 2) as i64;
        if self.adj[u] >> v & 1 == 1 {
            independents - cliques
        } else {
            cliques - independents
        }
    }

    fn flip(&mut self, u: usize, v: usize) {
        let delta = self.flip_delta(u, v);
        self.adj[u] ^= 1 << v;
        self.adj[v] ^= 1 << u;
        self.comp[u] ^= 1 << v;
        self.comp[v] ^= 1 << u;
        self.score = (self.score as i64 + delta) as u64;
        debug_assert_eq!(self.score, self.full_score());
    }

    fn to_graph(&self) -> Graph {
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.adj[u] >> v & 1 == 1);
        Graph::from_edges(self.n, edges).expect("search graph is simple")
    }
}

/// Number of `k`-cliques inside `within`.
fn count_cliques(adj: &[u64], within: u64, k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    if k == 1 {
        return within.count_ones() as u64;
    }
    let mut total = 0;
    let mut rest = within;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        // only higher-indexed neighbors, so each clique is counted once
        total += count_cliques(adj, adj[v] & rest, k - 1);
    }
    total
}
