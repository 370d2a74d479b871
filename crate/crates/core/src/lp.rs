//! Typed linear programs over the crate scalar, solved by a sparse revised simplex.
//!
//! Problems are stated as `optimize c^T x` subject to rows `a_i^T x {<=,=,>=} b_i`.
//! Variables are nonnegative unless marked free. Data is solved in `f64`
//! and converted back; every returned optimum is re-checked against the rows.

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    /// `free[j]` lifts the sign restriction on variable `j`.
    pub free: Vec<bool>,
}

#[derive(Clone, Copy, Debug)]
pub struct LpOptions<T> {
    /// Largest accepted row violation of a returned optimum, relative to `max(1, |b_i|)`.
    pub feas_tol: T,
}

impl<T: Scalar> Default for LpOptions<T> {
    fn default() -> Self {
        Self { feas_tol: T::tol(1e-7) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients, objective has {expected}")]
    Dimension { row: usize, expected: usize, found: usize },
    #[error("non-finite data in linear program")]
    NonFinite,
    #[error("returned point violates row {row} by {violation:e}")]
    Violation { row: usize, violation: f64 },
    #[error("simplex backend failure: {0}")]
    Backend(String),
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        Self { sense, objective, constraints: Vec::new(), free: vec![false; n] }
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self, opts: &LpOptions<T>) -> Result<LpSolution<T>, LpError> {
        let n = self.num_vars();
        if self.free.len() != n {
            return Err(LpError::Dimension { row: usize::MAX, expected: n, found: self.free.len() });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Dimension { row, expected: n, found: c.coeffs.len() });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|x| !x.is_finite()) {
                return Err(LpError::NonFinite);
            }
        }
        if self.objective.iter().any(|x| !x.is_finite()) {
            return Err(LpError::NonFinite);
        }
        let direction = match self.sense {
            Sense::Maximize => OptimizationDirection::Maximize,
            Sense::Minimize => OptimizationDirection::Minimize,
        };
        let mut problem = Problem::new(direction);
        let vars: Vec<_> = (0..n)
            .map(|j| {
                let lower = if self.free[j] { f64::NEG_INFINITY } else { 0.0 };
                problem.add_var(self.objective[j].as_f64(), (lower, f64::INFINITY))
            })
            .collect();
        for c in &self.constraints {
            let op = match c.relation {
                Relation::Le => ComparisonOp::Le,
                Relation::Eq => ComparisonOp::Eq,
                Relation::Ge => ComparisonOp::Ge,
            };
            let terms: Vec<_> = vars.iter().zip(&c.coeffs).filter(|(_, a)| !a.is_zero()).map(|(&v, a)| (v, a.as_f64())).collect();
            problem.add_constraint(terms, op, c.rhs.as_f64());
        }
        let solution = match problem.solve() {
            Ok(SolveOutcome::Solution(sol)) => sol,
            Ok(SolveOutcome::Interrupted(_)) => return Err(LpError::Backend("solve interrupted".into())),
            Err(microlp::Error::Infeasible) => return Ok(LpSolution::Infeasible),
            Err(microlp::Error::Unbounded) => return Ok(LpSolution::Unbounded),
            Err(e) => return Err(LpError::Backend(e.to_string())),
        };
        let x: Vec<T> = vars
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let xj = T::of(solution.var_value_raw(v));
                if self.free[j] {
                    xj
                } else {
                    xj.max(T::zero())
                }
            })
            .collect();
        self.check_rows(&x, opts)?;
        let value = self.objective.iter().zip(&x).fold(T::zero(), |acc, (&c, &xj)| acc + c * xj);
        Ok(LpSolution::Optimal { x, value })
    }

    fn check_rows(&self, x: &[T], opts: &LpOptions<T>) -> Result<(), LpError> {
        for (row, c) in self.constraints.iter().enumerate() {
            let lhs = c.coeffs.iter().zip(x).fold(T::zero(), |acc, (&a, &xj)| acc + a * xj);
            let gap = lhs - c.rhs;
            let violation = match c.relation {
                Relation::Le => gap.max(T::zero()),
                Relation::Ge => (-gap).max(T::zero()),
                Relation::Eq => gap.abs(),
            };
            if violation > opts.feas_tol * T::one().max(c.rhs.abs()) {
                return Err(LpError::Violation { row, violation: violation.as_f64() });
            }
        }
        Ok(())
    }
}
