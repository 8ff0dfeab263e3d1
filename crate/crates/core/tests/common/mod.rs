//! Brute-force oracles, independent of the library's solvers.
#![allow(dead_code)]

use clawbench::{Graph, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn adjacency(g: &Graph) -> Vec<u32> {
    let n = g.vertex_count();
    assert!(n <= 24, "oracles enumerate subsets of at most 24 vertices");
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&v| mask >> v & 1 == 1)
}

fn is_independent(adj: &[u32], mask: u32) -> bool {
    members(mask).all(|v| adj[v] & mask == 0)
}

fn is_clique(adj: &[u32], mask: u32) -> bool {
    members(mask).all(|v| (adj[v] | 1 << v) & mask == mask)
}

fn all_masks(n: usize) -> std::ops::Range<u32> {
    0..1u32 << n
}

pub fn alpha(g: &Graph) -> usize {
    let adj = adjacency(g);
    all_masks(g.vertex_count())
        .filter(|&m| is_independent(&adj, m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn omega(g: &Graph) -> usize {
    let adj = adjacency(g);
    all_masks(g.vertex_count())
        .filter(|&m| is_clique(&adj, m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Chromatic number by dynamic programming over vertex subsets.
pub fn chi(g: &Graph) -> usize {
    let n = g.vertex_count();
    let adj = adjacency(g);
    let full = (1u32 << n) - 1;
    let independent: Vec<bool> = all_masks(n).map(|m| is_independent(&adj, m)).collect();
    let mut colors = vec![usize::MAX; 1 << n];
    colors[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // enumerate independent classes containing the lowest vertex
        let mut sub = rest;
        loop {
            let class = sub | low;
            if independent[class as usize] {
                let prev = colors[(mask & !class) as usize];
                colors[mask as usize] = colors[mask as usize].min(prev + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    colors[full as usize]
}

/// Largest independent subset of some vertex's neighbourhood.
pub fn max_claw(g: &Graph) -> usize {
    let adj = adjacency(g);
    (0..g.vertex_count())
        .map(|v| {
            let nbhd = adj[v];
            let mut best = 0;
            let mut sub = nbhd;
            while sub != 0 {
                if is_independent(&adj, sub) {
                    best = best.max(sub.count_ones() as usize);
                }
                sub = (sub - 1) & nbhd;
            }
            best
        })
        .max()
        .unwrap_or(0)
}

/// Inclusion-maximal cliques as sorted vertex lists, sorted. The empty graph
/// has the single maximal clique `∅`.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let adj = adjacency(g);
    let mut out: Vec<Vec<usize>> = all_masks(n)
        .filter(|&m| is_clique(&adj, m))
        .filter(|&m| (0..n).all(|v| m >> v & 1 == 1 || !is_clique(&adj, m | 1 << v)))
        .map(|m| members(m).collect())
        .collect();
    out.sort();
    out
}

pub fn mwis(g: &Graph, w: &[Rational]) -> Rational {
    let adj = adjacency(g);
    all_masks(g.vertex_count())
        .filter(|&m| is_independent(&adj, m))
        .map(|m| members(m).map(|v| w[v].clone()).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Maximum of `c·x` over `{x ≥ 0 : A x ≤ b}` by enumerating every basic
/// solution. Only for a handful of variables and rows; assumes the polytope
/// is bounded and nonempty.
pub fn lp_max_by_vertices(c: &[Rational], rows: &[(Vec<Rational>, Rational)]) -> Rational {
    let n = c.len();
    let mut all: Vec<(Vec<Rational>, Rational)> = rows.to_vec();
    for i in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[i] = -Rational::one();
        all.push((a, Rational::zero()));
    }
    let feasible = |x: &[Rational]| {
        all.iter()
            .all(|(a, b)| a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<Rational>() <= *b)
    };
    let mut best: Option<Rational> = None;
    let mut pick = Vec::with_capacity(n);
    choose(all.len(), n, 0, &mut pick, &mut |idx| {
        if let Some(x) = solve_square(idx.iter().map(|&i| all[i].clone()).collect()) {
            if feasible(&x) {
                let v: Rational = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
    });
    best.expect("polytope has a vertex")
}

fn choose(m: usize, k: usize, start: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..m {
        pick.push(i);
        choose(m, k, i + 1, pick, f);
        pick.pop();
    }
}

/// Unique solution of a square system, or `None` when singular.
#[allow(clippy::needless_range_loop)]
fn solve_square(mut rows: Vec<(Vec<Rational>, Rational)>) -> Option<Vec<Rational>> {
    let n = rows.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !rows[r].0[col].is_zero())?;
        rows.swap(col, p);
        let (pivot_row, pivot_rhs) = rows[col].clone();
        for r in 0..n {
            if r != col && !rows[r].0[col].is_zero() {
                let f = &rows[r].0[col] / &pivot_row[col];
                for j in 0..n {
                    let d = &f * &pivot_row[j];
                    rows[r].0[j] -= d;
                }
                rows[r].1 -= &f * &pivot_rhs;
            }
        }
    }
    Some(rows.iter().enumerate().map(|(i, (a, b))| b / &a[i]).collect())
}

/// QSTAB rows built from brute-force maximal cliques plus `x ≤ 1`.
pub fn qstab_rows(g: &Graph) -> Vec<(Vec<Rational>, Rational)> {
    let n = g.vertex_count();
    let mut rows = Vec::new();
    for q in maximal_cliques(g) {
        let mut a = vec![Rational::zero(); n];
        for v in q {
            a[v] = Rational::one();
        }
        rows.push((a, Rational::one()));
    }
    for v in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[v] = Rational::one();
        rows.push((a, Rational::one()));
    }
    rows
}

/// Random rational in `[0, max]` with denominator at most `den`.
pub fn random_weight<R: Rng>(rng: &mut R, max: i64, den: i64) -> Rational {
    let d = rng.gen_range(1..=den);
    Rational::new(rng.gen_range(0..=max * d).into(), d.into())
}

/// Random graph with `n` in `lo..=hi` and an edge probability in `[0.2, 0.8]`.
pub fn random_graph<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> Graph {
    let n = rng.gen_range(lo..=hi);
    let p = rng.gen_range(0.2..0.8);
    Graph::random(n, p, rng)
}
