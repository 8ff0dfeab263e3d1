//! Maximum-weight independent set baselines: the max-weight-first greedy
//! (a `(k-1)`-approximation on k-claw-free graphs) and an exact
//! branch-and-bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexWeights};
use crate::invariants::Limits;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Greedy,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MwisResult {
    pub method: Method,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
    /// Sorted vertex list.
    pub set: Vec<usize>,
}

/// Repeatedly takes the heaviest remaining vertex (lowest index on ties) and
/// deletes its closed neighbourhood.
pub fn greedy_mwis(g: &Graph, w: &VertexWeights) -> Result<MwisResult> {
    w.check(g)?;
    let mut alive = vec![true; g.vertex_count()];
    let mut set = Vec::new();
    loop {
        let mut pick: Option<usize> = None;
        for v in (0..g.vertex_count()).filter(|&v| alive[v]) {
            if pick.is_none_or(|p| w.get(v) > w.get(p)) {
                pick = Some(v);
            }
        }
        let Some(v) = pick else { break };
        set.push(v);
        alive[v] = false;
        for &u in g.neighbors(v) {
            alive[u] = false;
        }
    }
    set.sort_unstable();
    Ok(MwisResult {
        method: Method::Greedy,
        weight: w.total(&set),
        set,
    })
}

/// Exact maximum-weight independent set by branch and bound, pruning with a
/// greedy clique-cover bound. Weights are scaled to integers internally.
pub fn exact_mwis(g: &Graph, w: &VertexWeights, limits: &Limits) -> Result<MwisResult> {
    w.check(g)?;
    let n = g.vertex_count();
    limits.check_vertices("exact maximum-weight independent set", n)?;
    if n > 64 {
        return Err(Error::Guard {
            what: "exact maximum-weight independent set",
            limit: 64,
            actual: n,
        });
    }
    let denominator = w.as_slice().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let weights: Vec<BigInt> = w
        .as_slice()
        .iter()
        .map(|x| x.numer() * (&denominator / x.denom()))
        .collect();
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    let mut search = Search {
        adj: &adj,
        weights: &weights,
        // below every reachable weight, so the first leaf is recorded
        best: -BigInt::one(),
        best_set: 0,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.expand(all, BigInt::zero(), 0);
    let set: Vec<usize> = (0..n).filter(|&v| search.best_set >> v & 1 == 1).collect();
    debug_assert!(g.is_independent(&set));
    Ok(MwisResult {
        method: Method::Exact,
        weight: w.total(&set),
        set,
    })
}

struct Search<'a> {
    adj: &'a [u64],
    weights: &'a [BigInt],
    best: BigInt,
    best_set: u64,
}

impl Search<'_> {
    fn expand(&mut self, candidates: u64, weight: BigInt, chosen: u64) {
        if candidates == 0 {
            if weight > self.best {
                self.best = weight;
                self.best_set = chosen;
            }
            return;
        }
        if &weight + self.cover_bound(candidates) <= self.best {
            return;
        }
        // branch on the heaviest candidate, lowest index on ties
        let mut v = candidates.trailing_zeros() as usize;
        let mut rest = candidates & (candidates - 1);
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.weights[u] > self.weights[v] {
                v = u;
            }
        }
        self.expand(
            candidates & !self.adj[v] & !(1 << v),
            &weight + &self.weights[v],
            chosen | 1 << v,
        );
        self.expand(candidates & !(1 << v), weight, chosen);
    }

    /// Sum over a greedy clique cover of the heaviest weight in each clique.
    fn cover_bound(&self, candidates: u64) -> BigInt {
        let mut rest = candidates;
        let mut bound = BigInt::zero();
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let mut clique_common = self.adj[v] & rest;
            let mut heaviest = &self.weights[v];
            rest &= !(1 << v);
            while clique_common != 0 {
                let u = clique_common.trailing_zeros() as usize;
                clique_common &= self.adj[u];
                rest &= !(1 << u);
                if self.weights[u] > *heaviest {
                    heaviest = &self.weights[u];
                }
            }
            bound += heaviest;
        }
        bound
    }
}
