//! Relaxations of maximum-weight independent set: the edge polytope `K_G`,
//! the clique-constrained polytope QSTAB, its Sherali–Adams lifts, and
//! sum-of-squares moment-matrix checks.

pub mod moments;
pub mod sherali_adams;
pub mod sos;

use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexWeights};
use crate::invariants::{clique_number, maximal_cliques, Limits};
use crate::lp::{self, LinearProgram, LpSolution, Relation};
use crate::rational::{self, Rational};

pub use moments::{junta_value, junta_with_vertex, moments_from_distribution, subsets_up_to, PseudoMoment};
pub use sherali_adams::{
    sa_feasible, sa_lp, sa_variable_count, uniform_pseudo_moment, SaCheck, SaConstraint, SaProgram, SaViolation,
};
pub use sos::{sos_check, MatrixDiagnostic, SosReport};

/// Default cap on the number of Sherali–Adams LP variables.
pub const DEFAULT_LP_VARS: usize = 20_000;

/// One value per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalPoint {
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
}

impl FractionalPoint {
    pub fn new(values: Vec<Rational>) -> Self {
        FractionalPoint { values }
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        FractionalPoint { values: vec![value; n] }
    }

    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut values = vec![Rational::zero(); n];
        for &v in set {
            values[v] = Rational::one();
        }
        FractionalPoint { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Objective value under `weights`, or the plain sum when `None`.
    pub fn objective(&self, weights: Option<&VertexWeights>) -> Rational {
        match weights {
            Some(w) => self.values.iter().zip(w.as_slice()).map(|(x, w)| x * w).sum(),
            None => self.values.iter().sum(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    fn check_len(&self, g: &Graph) -> Result<()> {
        if self.len() != g.vertex_count() {
            return Err(Error::invalid(format!(
                "point has {} values but the graph has {} vertices",
                self.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }

    fn box_violation(&self) -> Option<usize> {
        self.values.iter().position(|x| x.is_negative() || *x > Rational::one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointViolation {
    /// `x_v` outside `[0, 1]`.
    Box { vertex: usize },
    /// `x_u + x_v > 1` on an edge.
    Edge { u: usize, v: usize },
    /// Clique sum above 1.
    Clique { clique: Vec<usize> },
}

/// Membership in `K_G`: box constraints and `x_u + x_v ≤ 1` per edge.
pub fn kg_feasible(x: &FractionalPoint, g: &Graph) -> Result<Option<PointViolation>> {
    x.check_len(g)?;
    if let Some(vertex) = x.box_violation() {
        return Ok(Some(PointViolation::Box { vertex }));
    }
    let one = Rational::one();
    Ok(g.edges()
        .iter()
        .find(|&&(u, v)| &x.values[u] + &x.values[v] > one)
        .map(|&(u, v)| PointViolation::Edge { u, v }))
}

/// Membership in QSTAB: box constraints and clique sums at most 1, checked
/// over maximal cliques (enough for nonnegative points).
pub fn qstab_feasible(x: &FractionalPoint, g: &Graph, limits: &Limits) -> Result<Option<PointViolation>> {
    x.check_len(g)?;
    if let Some(vertex) = x.box_violation() {
        return Ok(Some(PointViolation::Box { vertex }));
    }
    let one = Rational::one();
    Ok(maximal_cliques(g, limits)?
        .into_iter()
        .find(|q| q.iter().map(|&v| &x.values[v]).sum::<Rational>() > one)
        .map(|clique| PointViolation::Clique { clique }))
}

/// The constant point `1/t`, which lies in QSTAB whenever `t > ω(g)`.
pub fn qstab_bad_point(g: &Graph, t: usize, limits: &Limits) -> Result<FractionalPoint> {
    let omega = clique_number(g, limits)?.0;
    if t <= omega {
        return Err(Error::invalid(format!("t = {t} must exceed the clique number {omega}")));
    }
    let x = FractionalPoint::constant(g.vertex_count(), Rational::new(1.into(), t.into()));
    debug_assert!(qstab_feasible(&x, g, limits)?.is_none());
    Ok(x)
}

/// Singleton moments `(y_{0}, ..., y_{n-1})`.
pub fn projection(y: &PseudoMoment, n: usize) -> Result<FractionalPoint> {
    (0..n)
        .map(|v| y.get(&[v]).cloned())
        .collect::<Result<Vec<_>>>()
        .map(FractionalPoint::new)
}

fn weight_vector(g: &Graph, w: Option<&VertexWeights>) -> Result<Vec<Rational>> {
    match w {
        Some(w) => {
            w.check(g)?;
            Ok(w.as_slice().to_vec())
        }
        None => Ok(vec![Rational::one(); g.vertex_count()]),
    }
}

/// `max w·x` over QSTAB: one row per maximal clique plus `x_v ≤ 1` rows.
pub fn qstab_lp(g: &Graph, w: Option<&VertexWeights>, limits: &Limits) -> Result<LinearProgram> {
    let weights = weight_vector(g, w)?;
    let mut lp = LinearProgram::new(g.vertex_count());
    for (v, c) in weights.into_iter().enumerate() {
        lp.set_objective(v, c);
    }
    for q in maximal_cliques(g, limits)? {
        lp.add_row(
            q.into_iter().map(|v| (v, Rational::one())),
            Relation::Le,
            Rational::one(),
        )?;
    }
    for v in 0..g.vertex_count() {
        lp.add_row([(v, Rational::one())], Relation::Le, Rational::one())?;
    }
    Ok(lp)
}

/// `max w·x` over `K_G`.
pub fn edge_lp(g: &Graph, w: Option<&VertexWeights>) -> Result<LinearProgram> {
    let weights = weight_vector(g, w)?;
    let mut lp = LinearProgram::new(g.vertex_count());
    for (v, c) in weights.into_iter().enumerate() {
        lp.set_objective(v, c);
    }
    for &(u, v) in g.edges() {
        lp.add_row(
            [(u, Rational::one()), (v, Rational::one())],
            Relation::Le,
            Rational::one(),
        )?;
    }
    for v in 0..g.vertex_count() {
        lp.add_row([(v, Rational::one())], Relation::Le, Rational::one())?;
    }
    Ok(lp)
}

/// Exact optimum of an LP.
pub fn lp_solve_exact(lp: &LinearProgram) -> LpSolution {
    lp::solve(lp)
}

/// Solves `lp` and insists on an optimum; relaxations here are bounded and
/// contain the origin.
pub(crate) fn solve_bounded(lp: &LinearProgram) -> Result<(Rational, Vec<Rational>)> {
    let sol = lp::solve(lp);
    match (sol.optimum, sol.solution) {
        (Some(opt), Some(x)) => Ok((opt, x)),
        _ => Err(Error::invalid(format!(
            "relaxation LP ended with status {:?}",
            sol.status
        ))),
    }
}

/// Optimum of the level-`ell` Sherali–Adams LP and the optimal moments.
pub fn sa_optimum(g: &Graph, ell: usize, max_vars: usize, limits: &Limits) -> Result<(Rational, PseudoMoment)> {
    let program = sa_lp(g, ell, max_vars, limits)?;
    let (opt, x) = solve_bounded(&program.lp)?;
    Ok((opt, program.to_moments(ell, &x)))
}

pub fn qstab_optimum(g: &Graph, w: Option<&VertexWeights>, limits: &Limits) -> Result<(Rational, FractionalPoint)> {
    let (opt, x) = solve_bounded(&qstab_lp(g, w, limits)?)?;
    Ok((opt, FractionalPoint::new(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpStatus;
    use crate::rational::{int, ratio};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn kg_membership() {
        let k4 = Graph::complete(4);
        assert_eq!(
            kg_feasible(&FractionalPoint::constant(4, ratio(1, 2)), &k4).unwrap(),
            None
        );
        assert_eq!(
            kg_feasible(&FractionalPoint::constant(4, int(1)), &k4).unwrap(),
            Some(PointViolation::Edge { u: 0, v: 1 })
        );
        let p = Graph::path(3);
        assert_eq!(kg_feasible(&FractionalPoint::indicator(3, &[0, 2]), &p).unwrap(), None);
        assert!(kg_feasible(&FractionalPoint::constant(2, int(0)), &p).is_err());
        assert_eq!(
            kg_feasible(&FractionalPoint::constant(3, ratio(-1, 2)), &p).unwrap(),
            Some(PointViolation::Box { vertex: 0 })
        );
    }

    #[test]
    fn qstab_membership() {
        let c5 = Graph::cycle(5);
        assert_eq!(
            qstab_feasible(&FractionalPoint::constant(5, int(0)), &c5, &lim()).unwrap(),
            None
        );
        assert_eq!(
            qstab_feasible(&FractionalPoint::indicator(5, &[0, 2]), &c5, &lim()).unwrap(),
            None
        );
        let k4 = Graph::complete(4);
        assert_eq!(
            qstab_feasible(&FractionalPoint::constant(4, ratio(1, 2)), &k4, &lim()).unwrap(),
            Some(PointViolation::Clique {
                clique: vec![0, 1, 2, 3]
            })
        );
    }

    #[test]
    fn bad_points() {
        let paley = Graph::paley(17).unwrap();
        let x = qstab_bad_point(&paley, 4, &lim()).unwrap();
        assert_eq!(x.objective(None), ratio(17, 4));
        assert_eq!(qstab_feasible(&x, &paley, &lim()).unwrap(), None);
        assert!(qstab_bad_point(&paley, 3, &lim()).is_err());
        assert_eq!(
            qstab_bad_point(&Graph::cycle(5), 3, &lim()).unwrap().objective(None),
            ratio(5, 3)
        );
        assert_eq!(
            qstab_bad_point(&Graph::empty(1), 2, &lim()).unwrap().objective(None),
            ratio(1, 2)
        );
    }

    #[test]
    fn projections() {
        let c5 = Graph::cycle(5);
        let y = uniform_pseudo_moment(&c5, 1, None, &lim()).unwrap();
        assert_eq!(projection(&y, 5).unwrap(), FractionalPoint::constant(5, ratio(1, 3)));
        let z = moments_from_distribution(&c5, &[(vec![1, 3], int(1))], 1).unwrap();
        assert_eq!(projection(&z, 5).unwrap(), FractionalPoint::indicator(5, &[1, 3]));
        assert!(projection(&PseudoMoment::new(0), 1).is_err());
    }

    #[test]
    fn lp_values() {
        let k3 = Graph::complete(3);
        let lp = qstab_lp(&k3, None, &lim()).unwrap();
        assert_eq!(lp.rows().len(), 1 + 3);
        assert_eq!(lp_solve_exact(&lp).optimum, Some(int(1)));
        assert_eq!(qstab_optimum(&Graph::cycle(5), None, &lim()).unwrap().0, ratio(5, 2));
        assert_eq!(qstab_optimum(&Graph::complete(4), None, &lim()).unwrap().0, int(1));
        let sol = lp_solve_exact(&edge_lp(&Graph::complete(4), None).unwrap());
        assert_eq!((sol.status, sol.optimum), (LpStatus::Optimal, Some(int(2))));
        let w = VertexWeights::from_integers(&[5, 1, 1, 1, 1]);
        assert_eq!(qstab_optimum(&Graph::cycle(5), Some(&w), &lim()).unwrap().0, int(6));
    }

    #[test]
    fn point_json() {
        let x = FractionalPoint::new(vec![ratio(2, 4), int(1)]);
        let text = x.to_json();
        assert!(text.contains("\"1/2\"") && text.contains("\"1\""));
        assert_eq!(FractionalPoint::from_json(&text).unwrap(), x);
    }

    #[test]
    fn sa_optimum_on_c5() {
        let (opt0, _) = sa_optimum(&Graph::cycle(5), 0, DEFAULT_LP_VARS, &lim()).unwrap();
        assert_eq!(opt0, ratio(5, 2));
        let (opt1, y) = sa_optimum(&Graph::cycle(5), 1, DEFAULT_LP_VARS, &lim()).unwrap();
        assert!(opt1 <= opt0 && opt1 >= ratio(5, 3));
        assert!(sa_feasible(&y, 1, &Graph::cycle(5), &lim()).unwrap().feasible);
    }
}
