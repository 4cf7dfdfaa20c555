//! 3SAT → subset reachability.
//!
//! For a formula over `x_1..x_n` with clauses `C_1..C_m` the network has, per
//! variable, species `S_i`, `s_i`, `sbar_i` and reactions
//!
//! ```text
//! S_i -> s_i     S_i -> sbar_i     s_i ->     sbar_i ->
//! ```
//!
//! and per clause a species `T_j` with one catalytic reaction
//! `s_i -> s_i + T_j` (or `sbar_i -> sbar_i + T_j`) per distinct literal.
//! The start state holds 1 of every `S_i`, the target 1 of every `T_j`.
//! The target is reachable using `2n + m` reactions iff the formula is
//! satisfiable, and never with fewer.

use crate::cnf::CnfFormula;
use crate::crn::{Crn, FluxVector, FluxVectorSequence, ReachWitness, Reaction, State};
use crate::parse::ProblemFile;
use crate::rational::{int, Rational};
use num::{Signed, Zero};
use thiserror::Error;

/// Largest variable count accepted by [`brute_force_sat`].
pub const MAX_BRUTE_FORCE_VARS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("formula must have at least one variable and one clause")]
    EmptyFormula,
    #[error("{0} variables exceed the brute-force limit of {MAX_BRUTE_FORCE_VARS}")]
    TooManyVariables(usize),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

/// Species and reaction indices of one variable gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableGadget {
    pub source: usize,
    pub positive: usize,
    pub negative: usize,
    pub choose_positive: usize,
    pub choose_negative: usize,
    pub drain_positive: usize,
    pub drain_negative: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGadget {
    /// The `T_j` species.
    pub target: usize,
    /// `(literal, reaction)` for each distinct literal of the clause.
    pub reactions: Vec<(i32, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub crn: Crn,
    pub start: State,
    pub target: State,
    /// `2n + m`.
    pub k: usize,
    pub variables: Vec<VariableGadget>,
    pub clauses: Vec<ClauseGadget>,
}

impl ReductionInstance {
    pub fn to_problem(&self) -> ProblemFile {
        ProblemFile {
            crn: self.crn.clone(),
            start: self.start.clone(),
            target: self.target.clone(),
            k: Some(self.k as u64),
        }
    }
}

/// Builds the reachability instance of `phi`.
pub fn reduce_3sat(phi: &CnfFormula) -> Result<ReductionInstance, ReduceError> {
    let n = phi.num_vars();
    let m = phi.num_clauses();
    if n == 0 || m == 0 {
        return Err(ReduceError::EmptyFormula);
    }
    let mut species = Vec::with_capacity(3 * n + m);
    for i in 1..=n {
        species.push(format!("S{i}"));
        species.push(format!("s{i}"));
        species.push(format!("sbar{i}"));
    }
    for j in 1..=m {
        species.push(format!("T{j}"));
    }
    let num_species = species.len();
    let rxn = |reactants: &[(usize, u32)], products: &[(usize, u32)]| {
        Reaction::from_terms(num_species, reactants, products)
            .expect("gadget reactions change something")
    };

    let mut reactions = Vec::new();
    let mut variables = Vec::with_capacity(n);
    for i in 0..n {
        let (source, positive, negative) = (3 * i, 3 * i + 1, 3 * i + 2);
        let base = reactions.len();
        reactions.push(rxn(&[(source, 1)], &[(positive, 1)]));
        reactions.push(rxn(&[(source, 1)], &[(negative, 1)]));
        reactions.push(rxn(&[(positive, 1)], &[]));
        reactions.push(rxn(&[(negative, 1)], &[]));
        variables.push(VariableGadget {
            source,
            positive,
            negative,
            choose_positive: base,
            choose_negative: base + 1,
            drain_positive: base + 2,
            drain_negative: base + 3,
        });
    }
    let mut clauses = Vec::with_capacity(m);
    for (j, clause) in phi.clauses().iter().enumerate() {
        let target = 3 * n + j;
        let mut gadget = ClauseGadget {
            target,
            reactions: Vec::new(),
        };
        for &lit in clause {
            if gadget.reactions.iter().any(|&(l, _)| l == lit) {
                continue;
            }
            let var = &variables[lit.unsigned_abs() as usize - 1];
            let literal_species = if lit > 0 { var.positive } else { var.negative };
            gadget.reactions.push((lit, reactions.len()));
            reactions.push(rxn(
                &[(literal_species, 1)],
                &[(literal_species, 1), (target, 1)],
            ));
        }
        clauses.push(gadget);
    }

    let mut start = vec![Rational::zero(); num_species];
    for var in &variables {
        start[var.source] = int(1);
    }
    let mut target = vec![Rational::zero(); num_species];
    for clause in &clauses {
        target[clause.target] = int(1);
    }
    Ok(ReductionInstance {
        crn: Crn::new(species, reactions).expect("generated names are unique"),
        start: State::new(start).expect("non-negative"),
        target: State::new(target).expect("non-negative"),
        k: 2 * n + m,
        variables,
        clauses,
    })
}

/// Exhaustive truth-table search; returns the first satisfying assignment in
/// binary counting order (variable 1 is the least significant bit).
pub fn brute_force_sat(phi: &CnfFormula) -> Result<Option<Vec<bool>>, ReduceError> {
    let n = phi.num_vars();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(ReduceError::TooManyVariables(n));
    }
    Ok((0u32..1 << n).find_map(|bits| {
        let assignment: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        phi.is_satisfied_by(&assignment).then_some(assignment)
    }))
}

/// The three-step witness `(u1, u2, u3)` encoded by a satisfying assignment:
/// route each `S_i` to the chosen literal, fire one true literal per clause,
/// then drain the literal species.
pub fn forward_witness(
    inst: &ReductionInstance,
    assignment: &[bool],
) -> Result<FluxVectorSequence, ReduceError> {
    if assignment.len() != inst.variables.len() {
        return Err(ReduceError::InvalidWitness(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            inst.variables.len()
        )));
    }
    let r = inst.crn.num_reactions();
    let mut choose = vec![Rational::zero(); r];
    let mut fire = vec![Rational::zero(); r];
    let mut drain = vec![Rational::zero(); r];
    for (var, &value) in inst.variables.iter().zip(assignment) {
        let (pick, sink) = if value {
            (var.choose_positive, var.drain_positive)
        } else {
            (var.choose_negative, var.drain_negative)
        };
        choose[pick] = int(1);
        drain[sink] = int(1);
    }
    for (j, clause) in inst.clauses.iter().enumerate() {
        let &(_, reaction) = clause
            .reactions
            .iter()
            .find(|&&(lit, _)| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
            .ok_or_else(|| {
                ReduceError::InvalidWitness(format!("clause {} is not satisfied", j + 1))
            })?;
        fire[reaction] = int(1);
    }
    Ok(FluxVectorSequence::new(
        [choose, fire, drain]
            .into_iter()
            .map(|u| FluxVector::new(u).expect("non-negative"))
            .collect(),
    ))
}

/// Reads the assignment off a witness that reaches the target with at most
/// `2n + m` reactions: `x_i` is true iff `S_i -> s_i` carries positive flux.
pub fn witness_to_assignment(
    inst: &ReductionInstance,
    witness: &ReachWitness,
    phi: &CnfFormula,
) -> Result<Vec<bool>, ReduceError> {
    inst.crn
        .verify_witness(&inst.start, &inst.target, &witness.sequence)
        .map_err(|e| ReduceError::InvalidWitness(e.to_string()))?;
    let total = witness
        .sequence
        .total()
        .unwrap_or_else(|| FluxVector::zeros(inst.crn.num_reactions()));
    let used = total.support().len();
    if used > inst.k {
        return Err(ReduceError::InvalidWitness(format!(
            "witness uses {used} reactions, more than {}",
            inst.k
        )));
    }
    let mut assignment = Vec::with_capacity(inst.variables.len());
    for (i, var) in inst.variables.iter().enumerate() {
        let pos = total[var.choose_positive].is_positive();
        let neg = total[var.choose_negative].is_positive();
        if pos && neg {
            return Err(ReduceError::InvalidWitness(format!(
                "variable {} is routed to both literals",
                i + 1
            )));
        }
        assignment.push(pos);
    }
    if !phi.is_satisfied_by(&assignment) {
        return Err(ReduceError::InvalidWitness(
            "extracted assignment does not satisfy the formula".into(),
        ));
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_literal_counts() {
        let inst = reduce_3sat(&formula(1, &[&[1]])).unwrap();
        assert_eq!(inst.crn.species(), &["S1", "s1", "sbar1", "T1"]);
        assert_eq!(inst.crn.num_reactions(), 5);
        assert_eq!(inst.k, 3);
        assert_eq!(inst.start, State::from_integers(&[1, 0, 0, 0]).unwrap());
        assert_eq!(inst.target, State::from_integers(&[0, 0, 0, 1]).unwrap());
    }

    #[test]
    fn three_literal_clause_counts() {
        let inst = reduce_3sat(&formula(3, &[&[1, -2, 3]])).unwrap();
        assert_eq!(inst.crn.num_species(), 10);
        assert_eq!(inst.crn.num_reactions(), 15);
        assert_eq!(inst.k, 7);
        assert!(inst.clauses[0]
            .reactions
            .iter()
            .all(|&(_, j)| inst.crn.reactions()[j].is_catalytic()));
        assert_eq!(inst.crn.reaction_text(13), "sbar2 -> sbar2 + T1");
    }

    #[test]
    fn unused_variables_keep_their_gadget() {
        let inst = reduce_3sat(&formula(3, &[&[2]])).unwrap();
        assert_eq!(inst.crn.num_reactions(), 13);
        assert_eq!(inst.k, 7);
    }

    #[test]
    fn empty_formula_rejected() {
        assert_eq!(
            reduce_3sat(&formula(2, &[])),
            Err(ReduceError::EmptyFormula)
        );
        assert_eq!(
            reduce_3sat(&CnfFormula::new(0, vec![]).unwrap()),
            Err(ReduceError::EmptyFormula)
        );
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_sat(&formula(1, &[&[1]])).unwrap(),
            Some(vec![true])
        );
        assert_eq!(brute_force_sat(&formula(1, &[&[1], &[-1]])).unwrap(), None);
        let sol = brute_force_sat(&formula(2, &[&[1, 2], &[-1, 2]]))
            .unwrap()
            .unwrap();
        assert!(sol[1]);
        let wide = CnfFormula::new(21, vec![vec![1]]).unwrap();
        assert_eq!(
            brute_force_sat(&wide),
            Err(ReduceError::TooManyVariables(21))
        );
    }

    #[test]
    fn forward_witness_replays() {
        let phi = formula(3, &[&[1, -2, 3], &[-1, 2], &[2, 3]]);
        let inst = reduce_3sat(&phi).unwrap();
        let assignment = brute_force_sat(&phi).unwrap().unwrap();
        let seq = forward_witness(&inst, &assignment).unwrap();
        inst.crn
            .verify_witness(&inst.start, &inst.target, &seq)
            .unwrap();
        assert_eq!(seq.used_reactions().len(), inst.k);
        let witness = ReachWitness::new(seq);
        assert_eq!(
            witness_to_assignment(&inst, &witness, &phi).unwrap(),
            assignment
        );
    }

    #[test]
    fn extraction_reads_polarity() {
        for (lit, expected) in [(1, true), (-1, false)] {
            let phi = formula(1, &[&[lit]]);
            let inst = reduce_3sat(&phi).unwrap();
            let seq = forward_witness(&inst, &[expected]).unwrap();
            let got = witness_to_assignment(&inst, &ReachWitness::new(seq), &phi).unwrap();
            assert_eq!(got, vec![expected]);
        }
    }

    #[test]
    fn extraction_rejects_bad_witnesses() {
        let phi = formula(1, &[&[1]]);
        let inst = reduce_3sat(&phi).unwrap();
        let empty = ReachWitness::new(FluxVectorSequence::empty());
        assert!(matches!(
            witness_to_assignment(&inst, &empty, &phi),
            Err(ReduceError::InvalidWitness(_))
        ));
        // half of S1 each way still reaches the target, with 5 reactions > k = 3
        let half = crate::rational::ratio(1, 2);
        let mut u1 = vec![Rational::zero(); 5];
        u1[0] = half.clone();
        u1[1] = half.clone();
        let mut u2 = vec![Rational::zero(); 5];
        u2[4] = int(1);
        let mut u3 = vec![Rational::zero(); 5];
        u3[2] = half.clone();
        u3[3] = half;
        let seq = FluxVectorSequence::new(
            [u1, u2, u3]
                .into_iter()
                .map(|u| FluxVector::new(u).unwrap())
                .collect(),
        );
        inst.crn
            .verify_witness(&inst.start, &inst.target, &seq)
            .unwrap();
        assert!(matches!(
            witness_to_assignment(&inst, &ReachWitness::new(seq), &phi),
            Err(ReduceError::InvalidWitness(_))
        ));
    }
}
