//! The Sherali–Adams lift of the clique-constrained polytope.
//!
//! For every disjoint pair `(S, T)` with `|S ∪ T| ≤ ℓ` the lift requires, with
//! `J_{S,T}(y) = Σ_{T'⊆T} (-1)^{|T'|} y_{S∪T'}`:
//!
//! * `J_{S,T}(y) - Σ_{i∈Q} J_{S,T,i}(y) ≥ 0` for every clique `Q` (maximal
//!   cliques suffice given the per-vertex rows below),
//! * `J_{S,T}(y) ≥ 0`,
//! * `J_{S,T,i}(y) ≥ 0` for every vertex `i`, where `J_{S,T,i}` adds `i` to
//!   every index set,
//!
//! together with `y_∅ = 1`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{clique_number, maximal_cliques, Limits};
use crate::lp::{LinearProgram, Relation};
use crate::rational::{self, Rational};

use super::moments::{junta_expansion, junta_terms, subsets_up_to, PseudoMoment};

/// The explicit point that is 1 on `∅`, `1/(W + ℓ)` on singletons and 0 on
/// larger sets, where `W` is `omega_bound` or the exact clique number. Entries
/// are materialized for all subsets of size at most `ℓ + 1`.
pub fn uniform_pseudo_moment(
    g: &Graph,
    ell: usize,
    omega_bound: Option<usize>,
    limits: &Limits,
) -> Result<PseudoMoment> {
    let omega = match omega_bound {
        Some(w) => w,
        None => clique_number(g, limits)?.0,
    };
    if omega + ell == 0 && g.vertex_count() > 0 {
        return Err(Error::invalid(
            "omega bound + level must be positive on a nonempty graph",
        ));
    }
    // with no vertices there are no singletons to fill
    let singleton = Rational::new(1.into(), (omega + ell).max(1).into());
    let mut y = PseudoMoment::new(ell);
    for set in subsets_up_to(g.vertex_count(), ell + 1) {
        let value = match set.len() {
            0 => Rational::one(),
            1 => singleton.clone(),
            _ => Rational::zero(),
        };
        y.insert(&set, value);
    }
    Ok(y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SaConstraint {
    /// `y_∅ = 1`
    Normalization,
    /// `J_{S,T} - Σ_{i∈Q} J_{S,T,i} ≥ 0`
    Clique { clique: Vec<usize> },
    /// `J_{S,T} ≥ 0`
    Junta,
    /// `J_{S,T,i} ≥ 0`
    JuntaVertex { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaViolation {
    pub constraint: SaConstraint,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

impl fmt::Display for SaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at S={:?}, T={:?}: value {}",
            self.constraint, self.s, self.t, self.value
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaCheck {
    pub feasible: bool,
    pub violation: Option<SaViolation>,
    pub constraints_checked: usize,
}

/// Disjoint pairs `(S, T)` with `|S ∪ T| ≤ ell`: unions by size then
/// lexicographically, each split by the bitmask of its members sent to `T`.
pub fn disjoint_pairs(n: usize, ell: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for union in subsets_up_to(n, ell) {
        for mask in 0u64..1 << union.len() {
            let mut s = Vec::new();
            let mut t = Vec::new();
            for (b, &v) in union.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    t.push(v);
                } else {
                    s.push(v);
                }
            }
            out.push((s, t));
        }
    }
    out
}

/// Exact membership test for the level-`ell` lift. Checks `y_∅ = 1`, then per
/// pair the junta row, the per-vertex rows, and the maximal-clique rows, and
/// reports the first violation in that order.
pub fn sa_feasible(y: &PseudoMoment, ell: usize, g: &Graph, limits: &Limits) -> Result<SaCheck> {
    let n = g.vertex_count();
    let cliques = maximal_cliques(g, limits)?;
    let mut checked = 1;
    let empty = y.get(&[])?;
    if !empty.is_one() {
        return Ok(SaCheck {
            feasible: false,
            violation: Some(SaViolation {
                constraint: SaConstraint::Normalization,
                s: Vec::new(),
                t: Vec::new(),
                value: empty.clone(),
            }),
            constraints_checked: checked,
        });
    }
    for (s, t) in disjoint_pairs(n, ell) {
        let violation = |constraint, value| {
            Some(SaViolation {
                constraint,
                s: s.clone(),
                t: t.clone(),
                value,
            })
        };
        let junta = junta_terms(y, &s, &t, None)?;
        checked += 1;
        if junta.is_negative() {
            return Ok(SaCheck {
                feasible: false,
                violation: violation(SaConstraint::Junta, junta),
                constraints_checked: checked,
            });
        }
        let mut per_vertex = Vec::with_capacity(n);
        for i in 0..n {
            let value = junta_terms(y, &s, &t, Some(i))?;
            checked += 1;
            if value.is_negative() {
                return Ok(SaCheck {
                    feasible: false,
                    violation: violation(SaConstraint::JuntaVertex { vertex: i }, value),
                    constraints_checked: checked,
                });
            }
            per_vertex.push(value);
        }
        for q in &cliques {
            let value = q.iter().fold(junta.clone(), |acc, &i| acc - &per_vertex[i]);
            checked += 1;
            if value.is_negative() {
                return Ok(SaCheck {
                    feasible: false,
                    violation: violation(SaConstraint::Clique { clique: q.clone() }, value),
                    constraints_checked: checked,
                });
            }
        }
    }
    Ok(SaCheck {
        feasible: true,
        violation: None,
        constraints_checked: checked,
    })
}

/// The lift as an explicit LP over one variable per subset of size ≤ `ell + 1`.
#[derive(Clone, Debug)]
pub struct SaProgram {
    pub lp: LinearProgram,
    /// `subsets[j]` is the index set of variable `j`.
    pub subsets: Vec<Vec<usize>>,
}

impl SaProgram {
    /// Reads an LP point back as a pseudo-moment vector.
    pub fn to_moments(&self, ell: usize, x: &[Rational]) -> PseudoMoment {
        let mut y = PseudoMoment::new(ell);
        for (set, v) in self.subsets.iter().zip(x) {
            y.insert(set, v.clone());
        }
        y
    }

    /// Inverse of [`SaProgram::to_moments`]; fails on absent subsets.
    pub fn point(&self, y: &PseudoMoment) -> Result<Vec<Rational>> {
        self.subsets.iter().map(|s| y.get(s).cloned()).collect()
    }
}

pub fn sa_variable_count(n: usize, ell: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    for j in 0..=(ell + 1).min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul(n - j) / (j + 1);
    }
    total
}

/// Builds the LP `max Σ_i y_{i}` over the level-`ell` lift. Refuses when the
/// number of subset variables exceeds `max_vars`.
pub fn sa_lp(g: &Graph, ell: usize, max_vars: usize, limits: &Limits) -> Result<SaProgram> {
    let n = g.vertex_count();
    let count = sa_variable_count(n, ell);
    if count > max_vars {
        return Err(Error::Guard {
            what: "Sherali-Adams LP variables",
            limit: max_vars,
            actual: count,
        });
    }
    let subsets = subsets_up_to(n, ell + 1);
    let index: HashMap<&[usize], usize> = subsets.iter().enumerate().map(|(j, s)| (s.as_slice(), j)).collect();
    let cliques = maximal_cliques(g, limits)?;
    let mut lp = LinearProgram::new(subsets.len());
    for v in 0..n {
        lp.set_objective(index[&[v][..]], Rational::one());
    }

    let expand = |s: &[usize], t: &[usize], extra: Option<usize>, sign: i64| -> Vec<(usize, Rational)> {
        junta_expansion(s, t, extra)
            .into_iter()
            .map(|(set, plus)| {
                let coeff = if plus { sign } else { -sign };
                (index[set.as_slice()], rational::int(coeff))
            })
            .collect()
    };

    lp.add_row([(index[&[][..]], Rational::one())], Relation::Eq, Rational::one())?;
    for (s, t) in disjoint_pairs(n, ell) {
        lp.add_row(expand(&s, &t, None, 1), Relation::Ge, Rational::zero())?;
        for i in 0..n {
            lp.add_row(expand(&s, &t, Some(i), 1), Relation::Ge, Rational::zero())?;
        }
        for q in &cliques {
            let mut terms = expand(&s, &t, None, 1);
            for &i in q {
                terms.extend(expand(&s, &t, Some(i), -1));
            }
            lp.add_row(terms, Relation::Ge, Rational::zero())?;
        }
    }
    Ok(SaProgram { lp, subsets })
}
