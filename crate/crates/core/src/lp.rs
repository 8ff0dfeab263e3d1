//! Exact rational linear programming.
//!
//! Programs are `max c·x` subject to sparse rows `a·x {≤,=,≥} b` and `x ≥ 0`.
//! [`solve`] runs a two-phase dictionary simplex, first in floating point
//! (largest-coefficient pricing, two-pass ratio test) to find a candidate
//! basis, and then, unless that basis is certified optimal by exact primal and
//! dual checks, in exact arithmetic with Bland's rule.
//! Either way the reported optimum is exact, and returned optimal points are
//! re-checked against every original row.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// `max objective·x` over `x ≥ 0` and the listed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Constraint>,
    objective: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            objective: vec![Rational::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    /// Adds a row; repeated variables are summed and zero coefficients dropped.
    pub fn add_row(
        &mut self,
        coeffs: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        let mut sorted: Vec<(usize, Rational)> = coeffs.into_iter().collect();
        sorted.sort_by_key(|(j, _)| *j);
        for (j, a) in sorted {
            if j >= self.num_vars {
                return Err(Error::invalid(format!(
                    "row references variable {j} of {}",
                    self.num_vars
                )));
            }
            match merged.last_mut() {
                Some((last, acc)) if *last == j => *acc += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        self.rows.push(Constraint::new(merged, relation, rhs));
        Ok(())
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Index of the first violated row (or `Some(usize::MAX)` for a negative
    /// or missing coordinate); `None` when `x` is feasible.
    pub fn first_violation(&self, x: &[Rational]) -> Option<usize> {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return Some(usize::MAX);
        }
        self.rows.iter().position(|r| !r.is_satisfied(x))
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        self.first_violation(x).is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present iff `status` is optimal.
    pub optimum: Option<Rational>,
    pub solution: Option<Vec<Rational>>,
    pub pivots: usize,
}

/// Solves `lp` exactly.
///
/// A floating-point run of the same simplex proposes an optimal basis, which
/// is then certified in exact arithmetic: the basic solution must satisfy
/// every row and the matching dual solution must be feasible. When the
/// certificate fails the exact simplex runs from scratch.
pub fn solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars;
    let Some((rows, fixed)) = presolve(lp) else {
        return LpSolution::without_optimum(LpStatus::Infeasible, 0);
    };
    let mut objective = lp.objective.clone();
    let mut constant = Rational::zero();
    for (j, value) in fixed.iter().enumerate() {
        if let Some(value) = value {
            constant += &objective[j] * value;
            objective[j] = Rational::zero();
        }
    }

    let mut pivots = 0;
    let mut float = Dictionary::<f64>::new(n, &rows);
    float.limit = Some(20 * (n + rows.len()) + 1000);
    let certified = match float.solve(&objective, &mut pivots) {
        Some(LpStatus::Optimal) => certify(n, &rows, &objective, &float.nonbasic),
        _ => None,
    };
    let mut x = match certified {
        Some(x) => x,
        None => {
            let mut exact = Dictionary::<Rational>::new(n, &rows);
            let status = exact
                .solve(&objective, &mut pivots)
                .expect("exact simplex has no pivot limit");
            if status != LpStatus::Optimal {
                return LpSolution::without_optimum(status, pivots);
            }
            exact.primal(n)
        }
    };
    for (j, value) in fixed.into_iter().enumerate() {
        if let Some(value) = value {
            x[j] = value;
        }
    }
    let optimum = lp.value(&x);
    assert!(lp.is_feasible(&x), "simplex returned an infeasible point");
    debug_assert_eq!(
        optimum,
        objective.iter().zip(&x).map(|(c, v)| c * v).sum::<Rational>() + constant
    );
    LpSolution {
        status: LpStatus::Optimal,
        optimum: Some(optimum),
        solution: Some(x),
        pivots,
    }
}

impl LpSolution {
    fn without_optimum(status: LpStatus, pivots: usize) -> Self {
        LpSolution {
            status,
            optimum: None,
            solution: None,
            pivots,
        }
    }
}

type Row = (Vec<(usize, Rational)>, Rational);

/// Rows as `a·x ≤ b` with zero, dominated and duplicate rows removed, after
/// substituting variables pinned by single-variable equations. Returns `None`
/// if a row with no variables is violated.
fn presolve(lp: &LinearProgram) -> Option<(Vec<Row>, Vec<Option<Rational>>)> {
    let mut fixed: Vec<Option<Rational>> = vec![None; lp.num_vars];
    let mut rows: Vec<Constraint> = lp.rows.clone();
    while let Some(pos) = rows
        .iter()
        .position(|r| r.relation == Relation::Eq && r.coeffs.len() == 1)
    {
        let row = rows.swap_remove(pos);
        let (j, a) = &row.coeffs[0];
        let value = &row.rhs / a;
        if value.is_negative() {
            return None;
        }
        for r in &mut rows {
            if let Some(k) = r.coeffs.iter().position(|(i, _)| i == j) {
                let (_, b) = r.coeffs.remove(k);
                r.rhs -= b * &value;
            }
        }
        fixed[*j] = Some(value);
    }

    let mut leq: Vec<Row> = Vec::new();
    for row in &rows {
        let negated = || (row.coeffs.iter().map(|(j, a)| (*j, -a)).collect::<Vec<_>>(), -&row.rhs);
        match row.relation {
            Relation::Le => leq.push((row.coeffs.clone(), row.rhs.clone())),
            Relation::Ge => leq.push(negated()),
            Relation::Eq => {
                leq.push((row.coeffs.clone(), row.rhs.clone()));
                leq.push(negated());
            }
        }
    }
    let mut kept: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::new();
    let mut index: HashMap<Vec<(usize, Rational)>, usize> = HashMap::new();
    for (coeffs, rhs) in leq {
        if coeffs.is_empty() {
            if rhs.is_negative() {
                return None;
            }
            continue;
        }
        // nonpositive row with nonnegative bound holds for every x ≥ 0
        if !rhs.is_negative() && coeffs.iter().all(|(_, a)| !a.is_positive()) {
            continue;
        }
        let scale = coeffs[0].1.abs();
        let coeffs: Vec<(usize, Rational)> = coeffs.into_iter().map(|(j, a)| (j, a / &scale)).collect();
        let rhs = rhs / scale;
        match index.get(&coeffs) {
            Some(&i) => {
                if rhs < kept[i].1 {
                    kept[i].1 = rhs;
                }
            }
            None => {
                index.insert(coeffs.clone(), kept.len());
                kept.push((coeffs, rhs));
            }
        }
    }
    Some((kept, fixed))
}

/// Exact optimality check of the basis whose nonbasic variables are
/// `nonbasic` (ids as in [`Dictionary`]). Returns the basic solution when it is
/// primal feasible and its dual solution is feasible too.
fn certify(n: usize, rows: &[Row], c: &[Rational], nonbasic: &[usize]) -> Option<Vec<Rational>> {
    let mut is_nonbasic = vec![false; n + rows.len()];
    for &v in nonbasic {
        if v >= is_nonbasic.len() {
            return None;
        }
        is_nonbasic[v] = true;
    }
    let tight: Vec<usize> = (0..rows.len()).filter(|&i| is_nonbasic[n + i]).collect();
    let basic: Vec<usize> = (0..n).filter(|&j| !is_nonbasic[j]).collect();
    if tight.len() != basic.len() {
        return None;
    }
    let k = basic.len();
    let mut col_of = vec![None; n];
    for (p, &j) in basic.iter().enumerate() {
        col_of[j] = Some(p);
    }
    // M = A[tight, basic]
    let mut m = vec![vec![Rational::zero(); k]; k];
    for (r, &i) in tight.iter().enumerate() {
        for (j, a) in &rows[i].0 {
            if let Some(p) = col_of[*j] {
                m[r][p] = a.clone();
            }
        }
    }
    let b: Vec<Rational> = tight.iter().map(|&i| rows[i].1.clone()).collect();
    let xb = solve_square(m.clone(), b)?;
    let mut x = vec![Rational::zero(); n];
    for (p, &j) in basic.iter().enumerate() {
        if xb[p].is_negative() {
            return None;
        }
        x[j] = xb[p].clone();
    }
    for (coeffs, rhs) in rows {
        let lhs: Rational = coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
        if lhs > *rhs {
            return None;
        }
    }

    let mt: Vec<Vec<Rational>> = (0..k).map(|p| (0..k).map(|r| m[r][p].clone()).collect()).collect();
    let cb: Vec<Rational> = basic.iter().map(|&j| c[j].clone()).collect();
    let y = solve_square(mt, cb)?;
    if y.iter().any(|v| v.is_negative()) {
        return None;
    }
    let mut reduced = c.to_vec();
    for (r, &i) in tight.iter().enumerate() {
        if y[r].is_zero() {
            continue;
        }
        for (j, a) in &rows[i].0 {
            reduced[*j] -= &y[r] * a;
        }
    }
    if (0..n).any(|j| is_nonbasic[j] && reduced[j].is_positive()) {
        return None;
    }
    Some(x)
}

/// Gaussian elimination on a square system; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            let (pivot_row, row) = if r < col {
                let (lo, hi) = a.split_at_mut(col);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = a.split_at_mut(r);
                (&lo[col], &mut hi[0])
            };
            for (dst, src) in row.iter_mut().zip(pivot_row).skip(col) {
                if !src.is_zero() {
                    *dst -= &f * src;
                }
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..k).map(|i| &b[i] / &a[i][i]).collect())
}

/// Scalars the dictionary simplex runs over. Rationals are exact and pivot by
/// Bland's rule; `f64` uses tolerances and faster heuristic pivoting, since
/// its answer is only a candidate for exact certification.
trait Scalar: Clone + PartialOrd {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_nil(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    /// `-self / by`
    fn neg_div(&self, by: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self);
    fn same(&self, other: &Self) -> bool;
    /// Row of the leaving variable for entering column `e`; `None` if unbounded.
    /// Exact ratio ties go to the smallest basic id.
    fn leaving(rows: &[Vec<Self>], e: usize, basic: &[usize]) -> Option<usize> {
        let mut leave: Option<(usize, Self)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !row[e].is_neg() {
                continue;
            }
            let ratio = row[0].neg_div(&row[e]);
            let better = match &leave {
                None => true,
                Some((r, best)) => {
                    if ratio.same(best) {
                        basic[i] < basic[*r]
                    } else {
                        ratio < *best
                    }
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        leave.map(|(r, _)| r)
    }
    /// Column of the entering variable, if any improves the objective.
    fn entering(objective: &[Self], nonbasic: &[usize]) -> Option<usize> {
        (1..objective.len())
            .filter(|&j| objective[j].is_pos())
            .min_by_key(|&j| nonbasic[j - 1])
    }
}

impl Scalar for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg_div(&self, by: &Self) -> Self {
        -(self / by)
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
}

const EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r)
    }
    fn is_pos(&self) -> bool {
        *self > EPS
    }
    fn is_neg(&self) -> bool {
        *self < -EPS
    }
    fn neg_div(&self, by: &Self) -> Self {
        -self / by
    }
    fn inverse(&self) -> Self {
        1.0 / self
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
        if self.abs() <= EPS * 1e-3 {
            *self = 0.0;
        }
    }
    fn same(&self, other: &Self) -> bool {
        (self - other).abs() <= EPS
    }
    /// Two-pass ratio test: bound the step with slightly relaxed rows, then
    /// take the largest pivot among rows within that bound.
    fn leaving(rows: &[Vec<Self>], e: usize, _basic: &[usize]) -> Option<usize> {
        const PIVOT_TOL: f64 = 1e-7;
        let bound = rows
            .iter()
            .filter(|row| row[e] < -PIVOT_TOL)
            .map(|row| (row[0].max(0.0) + EPS) / -row[e])
            .fold(f64::INFINITY, f64::min);
        if bound.is_infinite() {
            return None;
        }
        let mut best: Option<usize> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[e] < -PIVOT_TOL && row[0].max(0.0) / -row[e] <= bound && best.is_none_or(|b| row[e] < rows[b][e]) {
                best = Some(i);
            }
        }
        best
    }
    fn entering(objective: &[Self], _nonbasic: &[usize]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 1..objective.len() {
            if objective[j].is_pos() && best.is_none_or(|b| objective[j] > objective[b]) {
                best = Some(j);
            }
        }
        best
    }
}

/// Dictionary `basic_i = rows[i][0] + Σ_j rows[i][j+1] · nonbasic_j` and
/// `z = objective[0] + Σ_j objective[j+1] · nonbasic_j`.
///
/// Variable ids: structural `0..n`, slacks `n..n+m`, the phase-one auxiliary `n+m`.
struct Dictionary<T> {
    rows: Vec<Vec<T>>,
    objective: Vec<T>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    /// Pivot budget; `None` runs to completion.
    limit: Option<usize>,
}

impl<T: Scalar> Dictionary<T> {
    fn new(n: usize, rows: &[Row]) -> Self {
        let m = rows.len();
        let dense = rows
            .iter()
            .map(|(coeffs, rhs)| {
                let mut row = vec![T::nil(); n + 1];
                row[0] = T::from_rational(rhs);
                for (j, a) in coeffs {
                    row[j + 1] = T::from_rational(&-a);
                }
                row
            })
            .collect();
        Dictionary {
            rows: dense,
            objective: vec![T::nil(); n + 1],
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            limit: None,
        }
    }

    /// Two-phase simplex maximizing `c·x`; `None` if the pivot budget ran out.
    fn solve(&mut self, c: &[Rational], pivots: &mut usize) -> Option<LpStatus> {
        if self.rows.iter().any(|r| r[0].is_neg()) && !self.phase_one(pivots)? {
            return Some(LpStatus::Infeasible);
        }
        let c: Vec<T> = c.iter().map(T::from_rational).collect();
        self.load_objective(&c);
        Some(if self.run(pivots)? {
            LpStatus::Optimal
        } else {
            LpStatus::Unbounded
        })
    }

    /// Drives the auxiliary variable out; returns false if infeasible.
    fn phase_one(&mut self, pivots: &mut usize) -> Option<bool> {
        let aux = self.nonbasic.len() + self.basic.len();
        for row in &mut self.rows {
            row.push(T::unit());
        }
        self.nonbasic.push(aux);
        let col = self.nonbasic.len();
        self.objective = vec![T::nil(); col + 1];
        self.objective[col] = T::unit().neg_div(&T::unit());

        let mut leave = 0;
        for i in 1..self.rows.len() {
            let (a, b) = (&self.rows[i][0], &self.rows[leave][0]);
            if a < b && !a.same(b) {
                leave = i;
            }
        }
        self.pivot(leave, col);
        *pivots += 1;
        let bounded = self.run(pivots)?;
        debug_assert!(bounded, "phase one objective is bounded by zero");
        if self.objective[0].is_neg() {
            return Some(false);
        }
        if let Some(r) = self.basic.iter().position(|&v| v == aux) {
            // degenerate: aux sits at zero; swap in any variable with a nonzero coefficient
            let e = (1..self.rows[r].len())
                .filter(|&j| !self.rows[r][j].is_nil())
                .min_by_key(|&j| self.nonbasic[j - 1]);
            match e {
                Some(e) => {
                    self.pivot(r, e);
                    *pivots += 1;
                }
                // aux is identically zero here, so its row carries no constraint
                None => {
                    self.rows.remove(r);
                    self.basic.remove(r);
                }
            }
        }
        let col = self.nonbasic.iter().position(|&v| v == aux).unwrap() + 1;
        self.nonbasic.remove(col - 1);
        for row in &mut self.rows {
            row.remove(col);
        }
        Some(true)
    }

    /// Expresses `Σ c_j x_j` in the current nonbasic variables.
    fn load_objective(&mut self, c: &[T]) {
        let width = self.nonbasic.len() + 1;
        let mut obj = vec![T::nil(); width];
        for (j, &var) in self.nonbasic.iter().enumerate() {
            if var < c.len() {
                obj[j + 1].add_product(&c[var], &T::unit());
            }
        }
        for (i, &var) in self.basic.iter().enumerate() {
            if var < c.len() && !c[var].is_nil() {
                for (k, v) in self.rows[i].iter().enumerate() {
                    if !v.is_nil() {
                        obj[k].add_product(&c[var], v);
                    }
                }
            }
        }
        self.objective = obj;
    }

    /// Simplex iterations; false if unbounded, `None` past the pivot budget.
    fn run(&mut self, pivots: &mut usize) -> Option<bool> {
        loop {
            if self.limit.is_some_and(|l| *pivots >= l) {
                return None;
            }
            let entering = T::entering(&self.objective, &self.nonbasic);
            let Some(e) = entering else {
                return Some(true);
            };
            let leave = T::leaving(&self.rows, e, &self.basic);
            let Some(r) = leave else {
                return Some(false);
            };
            self.pivot(r, e);
            *pivots += 1;
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e].clone();
        let mut new_row: Vec<T> = self.rows[r].iter().map(|v| v.neg_div(&piv)).collect();
        new_row[e] = piv.inverse();
        let support: Vec<usize> = (0..new_row.len()).filter(|&j| !new_row[j].is_nil()).collect();

        let substitute = |row: &mut Vec<T>| {
            let c = std::mem::replace(&mut row[e], T::nil());
            if c.is_nil() {
                return;
            }
            for &j in &support {
                row[j].add_product(&c, &new_row[j]);
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                substitute(row);
            }
        }
        substitute(&mut self.objective);

        self.rows[r] = new_row;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[e - 1]);
    }

    fn primal(&self, n: usize) -> Vec<T> {
        let mut x = vec![T::nil(); n];
        for (i, &var) in self.basic.iter().enumerate() {
            if var < n {
                x[var] = self.rows[i][0].clone();
            }
        }
        x
    }
}
