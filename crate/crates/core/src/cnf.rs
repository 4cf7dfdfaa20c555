//! Small CNF formulas (clauses of at most three literals).

use thiserror::Error;

pub const MAX_CLAUSE_LEN: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} has {len} distinct literals, at most {MAX_CLAUSE_LEN} allowed")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("clause {clause} mentions variable {var}, outside 1..={num_vars}")]
    VariableOutOfRange {
        clause: usize,
        var: u32,
        num_vars: usize,
    },
    #[error("clause {clause} contains both {var} and -{var}")]
    Tautology { clause: usize, var: u32 },
}

/// A CNF formula over variables `1..=num_vars`. Literals are signed,
/// 1-based variable indices as in DIMACS.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Validates and normalizes: duplicate literals inside a clause are
    /// merged, keeping first-occurrence order.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, CnfError> {
        let mut normalized = Vec::with_capacity(clauses.len());
        for (ci, clause) in clauses.into_iter().enumerate() {
            let mut lits: Vec<i32> = Vec::with_capacity(clause.len());
            for lit in clause {
                let var = lit.unsigned_abs();
                if lit == 0 || var as usize > num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        clause: ci,
                        var,
                        num_vars,
                    });
                }
                if lits.contains(&-lit) {
                    return Err(CnfError::Tautology { clause: ci, var });
                }
                if !lits.contains(&lit) {
                    lits.push(lit);
                }
            }
            if lits.is_empty() {
                return Err(CnfError::EmptyClause { clause: ci });
            }
            if lits.len() > MAX_CLAUSE_LEN {
                return Err(CnfError::ClauseTooLong {
                    clause: ci,
                    len: lits.len(),
                });
            }
            normalized.push(lits);
        }
        Ok(Self {
            num_vars,
            clauses: normalized,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.num_vars, "assignment length");
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
        })
    }

    /// DIMACS text of this formula.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_duplicates() {
        let f = CnfFormula::new(2, vec![vec![1, 1, -2, 1]]).unwrap();
        assert_eq!(f.clauses(), &[vec![1, -2]]);
    }

    #[test]
    fn rejects_bad_clauses() {
        assert_eq!(
            CnfFormula::new(1, vec![vec![1, -1]]),
            Err(CnfError::Tautology { clause: 0, var: 1 })
        );
        assert!(matches!(
            CnfFormula::new(4, vec![vec![1, 2, 3, 4]]),
            Err(CnfError::ClauseTooLong { len: 4, .. })
        ));
        assert!(matches!(
            CnfFormula::new(1, vec![vec![2]]),
            Err(CnfError::VariableOutOfRange { .. })
        ));
        assert!(matches!(
            CnfFormula::new(1, vec![vec![]]),
            Err(CnfError::EmptyClause { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2]]).unwrap();
        assert!(f.is_satisfied_by(&[false, true]));
        assert!(!f.is_satisfied_by(&[true, false]));
    }
}
