//! Exact two-phase simplex over the rationals.
//!
//! Problems are in equality standard form: maximize `objᵀx` subject to
//! `A x = b`, `x ≥ 0`. Pivoting follows Bland's rule (smallest eligible
//! entering index, ties in the ratio test broken by smallest basic index), so
//! every run terminates and identical inputs give identical outputs.
//!
//! Phase 1 is kept separate from phase 2 so that one feasible basis can be
//! reused for many objectives over the same constraints; the reachability
//! loop solves one LP per reaction against a fixed `M F = d - c`.

use crate::crn::{FluxVector, StoichMatrix};
use crate::rational::Rational;
use num::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    /// `point` is a feasible vertex; `ray` satisfies `A·ray = 0`, `ray ≥ 0`
    /// and `objᵀray > 0`, so `point + t·ray` is feasible for every `t ≥ 0`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

/// Dense simplex tableau in canonical form with respect to `basis`.
#[derive(Debug, Clone)]
pub struct LpTableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Number of structural (original) variables.
    num_vars: usize,
}

struct Objective {
    reduced: Vec<Rational>,
    value: Rational,
}

impl LpTableau {
    fn pivot(&mut self, row: usize, col: usize, objective: &mut Objective) {
        let pivot = self.rows[row][col].clone();
        if pivot != Rational::from_integer(1.into()) {
            for v in self.rows[row].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &pivot;
            }
            self.rhs[row] /= &pivot;
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let pivot_rhs = self.rhs[row].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for (i, other) in self.rows.iter_mut().enumerate() {
            if i == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                other[j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = objective.reduced[col].clone();
        if !factor.is_zero() {
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                objective.reduced[j] -= delta;
            }
            objective.value += &factor * &pivot_rhs;
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Runs Bland-rule iterations over columns `< limit` until optimal.
    /// Returns the entering column of an unbounded direction, if one is found.
    fn optimize(&mut self, objective: &mut Objective, limit: usize) -> Option<usize> {
        loop {
            let entering = (0..limit).find(|&j| objective.reduced[j].is_positive())?;
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, entering, objective),
                None => return Some(entering),
            }
        }
    }

    /// Phase 1: finds a feasible basis for `A x = b, x ≥ 0`, or `None` when
    /// the system is infeasible. Identically zero rows are dropped after
    /// checking that their right-hand side is zero.
    pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<Self>, LpError> {
        if a.len() != b.len() {
            return Err(LpError::DimensionMismatch(format!(
                "{} constraint rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        let num_vars = a.first().map_or(0, Vec::len);
        if let Some(i) = a.iter().position(|row| row.len() != num_vars) {
            return Err(LpError::DimensionMismatch(format!(
                "row {i} has {} columns, expected {num_vars}",
                a[i].len()
            )));
        }
        Ok(Self::phase_one(a, b, num_vars))
    }

    fn phase_one(a: &[Vec<Rational>], b: &[Rational], num_vars: usize) -> Option<Self> {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (row, value) in a.iter().zip(b) {
            if row.iter().all(Zero::is_zero) {
                if !value.is_zero() {
                    return None;
                }
                continue;
            }
            if value.is_negative() {
                rows.push(row.iter().map(|v| -v).collect::<Vec<_>>());
                rhs.push(-value);
            } else {
                rows.push(row.clone());
                rhs.push(value.clone());
            }
        }
        let m = rows.len();
        let width = num_vars + m;
        for (i, row) in rows.iter_mut().enumerate() {
            row.resize(width, Rational::zero());
            row[num_vars + i] = Rational::from_integer(1.into());
        }
        let mut reduced = vec![Rational::zero(); width];
        for row in &rows {
            for (j, v) in row.iter().take(num_vars).enumerate() {
                reduced[j] += v;
            }
        }
        let mut objective = Objective {
            reduced,
            value: -rhs.iter().fold(Rational::zero(), |acc, v| acc + v),
        };
        let mut tableau = LpTableau {
            rows,
            rhs,
            basis: (num_vars..width).collect(),
            num_vars,
        };
        let unbounded = tableau.optimize(&mut objective, width);
        debug_assert!(unbounded.is_none(), "phase 1 is bounded above by zero");
        if objective.value.is_negative() {
            return None;
        }
        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are linearly dependent and get removed.
        let mut row = 0;
        while row < tableau.rows.len() {
            if tableau.basis[row] < num_vars {
                row += 1;
                continue;
            }
            match (0..num_vars).find(|&j| !tableau.rows[row][j].is_zero()) {
                Some(col) => {
                    tableau.pivot(row, col, &mut objective);
                    row += 1;
                }
                None => {
                    tableau.rows.remove(row);
                    tableau.rhs.remove(row);
                    tableau.basis.remove(row);
                }
            }
        }
        for r in &mut tableau.rows {
            r.truncate(num_vars);
        }
        Some(tableau)
    }

    /// The basic feasible solution of the current basis.
    pub fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.num_vars];
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.rhs[i].clone();
        }
        x
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Phase 2 from this feasible basis; the tableau itself is left untouched.
    pub fn maximize(&self, objective: &[Rational]) -> Result<LpOutcome, LpError> {
        if objective.len() != self.num_vars {
            return Err(LpError::DimensionMismatch(format!(
                "objective has {} entries, expected {}",
                objective.len(),
                self.num_vars
            )));
        }
        let mut tableau = self.clone();
        let mut reduced = objective.to_vec();
        let mut value = Rational::zero();
        for (i, &j) in tableau.basis.iter().enumerate() {
            let cost = &objective[j];
            if cost.is_zero() {
                continue;
            }
            for (k, v) in tableau.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    reduced[k] -= cost * v;
                }
            }
            value += cost * &tableau.rhs[i];
        }
        let mut obj = Objective { reduced, value };
        let limit = tableau.num_vars;
        match tableau.optimize(&mut obj, limit) {
            None => Ok(LpOutcome::Optimal {
                value: obj.value,
                solution: tableau.point(),
            }),
            Some(entering) => {
                let mut ray = vec![Rational::zero(); tableau.num_vars];
                ray[entering] = Rational::from_integer(1.into());
                for (i, &j) in tableau.basis.iter().enumerate() {
                    ray[j] = -tableau.rows[i][entering].clone();
                }
                Ok(LpOutcome::Unbounded {
                    point: tableau.point(),
                    ray,
                })
            }
        }
    }
}

/// Exact optimum of `max objᵀx` s.t. `A x = b`, `x ≥ 0`.
pub fn solve_max(
    objective: &[Rational],
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Result<LpOutcome, LpError> {
    let num_vars = a.first().map_or(objective.len(), Vec::len);
    if objective.len() != num_vars {
        return Err(LpError::DimensionMismatch(format!(
            "objective has {} entries, constraints have {num_vars} columns",
            objective.len()
        )));
    }
    match LpTableau::feasible(a, b)? {
        None => Ok(LpOutcome::Infeasible),
        Some(tableau) => tableau.maximize(objective),
    }
}

/// Finds non-negative flux vectors `F` with `M F = delta` and `F(rho) > 0`.
///
/// Phase 1 runs once in [`FluxSolver::new`]; each [`FluxSolver::positive_on`]
/// call maximizes `F(rho)` from that basis.
#[derive(Debug, Clone)]
pub struct FluxSolver {
    tableau: Option<LpTableau>,
    num_reactions: usize,
}

impl FluxSolver {
    pub fn new(m: &StoichMatrix, delta: &[Rational]) -> Result<Self, LpError> {
        if delta.len() != m.rows() {
            return Err(LpError::DimensionMismatch(format!(
                "delta has {} entries, matrix has {} species rows",
                delta.len(),
                m.rows()
            )));
        }
        let rows = m.to_rational_rows();
        let tableau = if m.cols() == 0 {
            // zero columns: feasible only for delta = 0
            delta
                .iter()
                .all(Zero::is_zero)
                .then(|| LpTableau::phase_one(&[], &[], 0))
                .flatten()
        } else {
            LpTableau::phase_one(&rows, delta, m.cols())
        };
        Ok(Self {
            tableau,
            num_reactions: m.cols(),
        })
    }

    /// True iff some `F ≥ 0` satisfies `M F = delta`.
    pub fn is_feasible(&self) -> bool {
        self.tableau.is_some()
    }

    /// A feasible vertex, if any.
    pub fn any_solution(&self) -> Option<FluxVector> {
        self.tableau
            .as_ref()
            .map(|t| FluxVector::new(t.point()).expect("basic solutions are non-negative"))
    }

    pub fn positive_on(&self, rho: usize) -> Result<Option<FluxVector>, LpError> {
        if rho >= self.num_reactions {
            return Err(LpError::DimensionMismatch(format!(
                "reaction index {rho} out of range for {} reactions",
                self.num_reactions
            )));
        }
        let tableau = match &self.tableau {
            Some(t) => t,
            None => return Ok(None),
        };
        let mut objective = vec![Rational::zero(); self.num_reactions];
        objective[rho] = Rational::from_integer(1.into());
        let flux = match tableau.maximize(&objective)? {
            LpOutcome::Infeasible => None,
            LpOutcome::Optimal { value, solution } => value.is_positive().then_some(solution),
            LpOutcome::Unbounded { point, ray } => {
                Some(point.iter().zip(&ray).map(|(p, r)| p + r).collect())
            }
        };
        Ok(flux.map(|f| FluxVector::new(f).expect("simplex keeps variables non-negative")))
    }
}

/// `F ≥ 0` with `M F = delta` and `F(rho) > 0`, or `None` when no such vector exists.
pub fn positive_flux_solution(
    m: &StoichMatrix,
    delta: &[Rational],
    rho: usize,
) -> Result<Option<FluxVector>, LpError> {
    let found = FluxSolver::new(m, delta)?.positive_on(rho)?;
    if let Some(f) = &found {
        debug_assert_eq!(m.mul(f.as_slice()), delta);
        debug_assert!(f[rho].is_positive());
    }
    Ok(found)
}
