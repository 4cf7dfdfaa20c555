//! Max-support flux vectors and the polynomial-time reachability procedure.
//!
//! The construction works in three layers:
//!
//! * [`max_support_flux`] puts the same small flux `δ` on every reaction that
//!   is applicable at `c`. `δ` is chosen so that no species present at `c` can
//!   lose more than half of the smallest concentration, hence nothing present
//!   disappears while everything producible appears.
//! * [`max_support_sequence`] repeats that step `|R| + 1` times with budget
//!   `ε / (|R| + 1)` each; the resulting state has the largest support of any
//!   state reachable from `c`, so a reaction is eventually applicable iff it is
//!   applicable there.
//! * [`solve_reach`] prunes reactions that can never fire or can never carry
//!   positive flux in a solution of `c + M F = d`, averages one solution per
//!   surviving reaction into a strictly positive `S`, walks to the max-support
//!   state with total flux below `S`, and finishes with the remainder.

use crate::crn::{Crn, FluxVector, FluxVectorSequence, ReachWitness, State};
use crate::lp::{FluxSolver, LpError};
use crate::rational::Rational;
use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReachError {
    #[error("{what} has {found} entries, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// The quantities behind one max-support step at a state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSupportParams {
    /// Smallest nonzero concentration; `None` when the state is all zeros.
    pub eps_c: Option<Rational>,
    /// `max(1, |Δρ(s)|)` over applicable `ρ` and all species `s`.
    pub gamma_c: Rational,
    /// Flux given to each applicable reaction; `None` only when `|R| = 0`.
    pub delta: Option<Rational>,
    /// Reactions applicable at the state, in canonical order.
    pub applicable: Vec<usize>,
}

/// Reactions whose reactants are all present at `c`.
pub fn applicable_set(crn: &Crn, c: &State) -> Vec<usize> {
    (0..crn.num_reactions())
        .filter(|&j| crn.reaction_applicable(j, c))
        .collect()
}

pub fn max_support_params(crn: &Crn, c: &State, eps: &Rational) -> MaxSupportParams {
    assert!(eps.is_positive(), "eps must be positive");
    let applicable = applicable_set(crn, c);
    let gamma = applicable
        .iter()
        .flat_map(|&j| crn.reactions()[j].net_change())
        .map(i64::unsigned_abs)
        .max()
        .unwrap_or(0)
        .max(1);
    let gamma_c = Rational::from_integer(BigInt::from(gamma));
    let eps_c = c.min_positive().cloned();
    let delta = (crn.num_reactions() > 0).then(|| {
        let budget = match &eps_c {
            Some(e) => {
                let half = e / Rational::from_integer(2.into());
                if half < *eps {
                    half
                } else {
                    eps.clone()
                }
            }
            None => eps.clone(),
        };
        budget / (&gamma_c * Rational::from_integer(BigInt::from(crn.num_reactions())))
    });
    MaxSupportParams {
        eps_c,
        gamma_c,
        delta,
        applicable,
    }
}

/// The `eps`-max support flux vector of `c`: `δ` on every applicable reaction.
pub fn max_support_flux(crn: &Crn, c: &State, eps: &Rational) -> FluxVector {
    let params = max_support_params(crn, c, eps);
    let mut flux = FluxVector::zeros(crn.num_reactions()).into_inner();
    if let Some(delta) = &params.delta {
        for &j in &params.applicable {
            flux[j] = delta.clone();
        }
    }
    FluxVector::new(flux).expect("delta is positive")
}

/// `|R| + 1` successive max-support steps, each with budget `eps / (|R| + 1)`.
pub fn max_support_sequence(crn: &Crn, c: &State, eps: &Rational) -> FluxVectorSequence {
    let steps = crn.num_reactions() + 1;
    let gamma = eps / Rational::from_integer(BigInt::from(steps));
    let mut state = c.clone();
    let mut seq = FluxVectorSequence::empty();
    for _ in 0..steps {
        let u = max_support_flux(crn, &state, &gamma);
        state = crn
            .apply_flux(&state, &u)
            .expect("max-support flux vectors are applicable");
        seq.push(u);
    }
    seq
}

/// `c * U_{c,eps}`: a state whose support contains that of every state
/// reachable from `c`.
pub fn max_support_state(crn: &Crn, c: &State, eps: &Rational) -> State {
    let seq = max_support_sequence(crn, c, eps);
    crn.apply_sequence(c, &seq)
        .expect("max-support sequences are applicable")
}

/// Reactions applicable at no state reachable from `c`.
///
/// Walks the 1-max support sequence but stops as soon as a step leaves the
/// applicable set unchanged: a max-support step keeps the support and adds
/// the products of exactly the applicable reactions, so nothing changes after
/// that point.
pub fn permanently_inapplicable(crn: &Crn, c: &State) -> Vec<usize> {
    let steps = crn.num_reactions() + 1;
    let gamma = Rational::one() / Rational::from_integer(BigInt::from(steps));
    let mut state = c.clone();
    let mut applicable = applicable_set(crn, &state);
    for _ in 0..steps {
        let u = max_support_flux(crn, &state, &gamma);
        state = crn
            .apply_flux(&state, &u)
            .expect("max-support flux vectors are applicable");
        let next = applicable_set(crn, &state);
        if next == applicable {
            break;
        }
        applicable = next;
    }
    (0..crn.num_reactions())
        .filter(|j| !applicable.contains(j))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationCause {
    /// Never applicable from the start state using the surviving reactions.
    PermanentlyInapplicable,
    /// No non-negative `F` with `c + M F = d` gives it positive flux.
    NoPositiveFlux,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub reaction: usize,
    pub cause: EliminationCause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachable {
    /// Witness over the full network; eliminated reactions carry zero flux.
    pub witness: ReachWitness,
    /// Reactions that survived pruning, in canonical order.
    pub live: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Reachable(Reachable),
    /// Every reaction was eliminated; the log records why, in order.
    NotReachable {
        eliminated: Vec<Elimination>,
    },
}

impl SolveResult {
    pub fn is_reachable(&self) -> bool {
        matches!(self, SolveResult::Reachable(_))
    }

    pub fn witness(&self) -> Option<&ReachWitness> {
        match self {
            SolveResult::Reachable(r) => Some(&r.witness),
            SolveResult::NotReachable { .. } => None,
        }
    }
}

/// Per-reaction positive solutions of `M F = delta` over the live network, or
/// the first live position that admits none.
fn positive_solutions(
    sub: &Crn,
    delta: &[Rational],
) -> Result<Result<Vec<FluxVector>, usize>, LpError> {
    let solver = FluxSolver::new(&sub.stoich_matrix(), delta)?;
    if !solver.is_feasible() {
        return Ok(Err(0));
    }
    let mut found: Vec<FluxVector> = solver.any_solution().into_iter().collect();
    let mut per_reaction = Vec::with_capacity(sub.num_reactions());
    for k in 0..sub.num_reactions() {
        // any earlier solution that is already positive on k serves as F_k
        if let Some(f) = found.iter().find(|f| f[k].is_positive()) {
            per_reaction.push(f.clone());
            continue;
        }
        match solver.positive_on(k)? {
            Some(f) => {
                per_reaction.push(f.clone());
                found.push(f);
            }
            None => return Ok(Err(k)),
        }
    }
    Ok(Ok(per_reaction))
}

/// Decides whether `d` is reachable from `c` and, if so, returns a witness of
/// at most `|R'| + 2` flux vectors.
pub fn solve_reach(crn: &Crn, c: &State, d: &State) -> Result<SolveResult, ReachError> {
    for (what, state) in [("start state", c), ("target state", d)] {
        if state.len() != crn.num_species() {
            return Err(ReachError::Dimension {
                what,
                expected: crn.num_species(),
                found: state.len(),
            });
        }
    }
    if c == d {
        return Ok(SolveResult::Reachable(Reachable {
            witness: ReachWitness::new(FluxVectorSequence::empty()),
            live: Vec::new(),
        }));
    }
    let delta: Vec<Rational> = d
        .as_slice()
        .iter()
        .zip(c.as_slice())
        .map(|(a, b)| a - b)
        .collect();

    let mut live: Vec<usize> = (0..crn.num_reactions()).collect();
    let mut eliminated = Vec::new();
    let solutions = loop {
        if live.is_empty() {
            return Ok(SolveResult::NotReachable { eliminated });
        }
        let sub = crn.restrict(&live);
        let dead = permanently_inapplicable(&sub, c);
        if !dead.is_empty() {
            for &k in &dead {
                eliminated.push(Elimination {
                    reaction: live[k],
                    cause: EliminationCause::PermanentlyInapplicable,
                });
            }
            live = (0..live.len())
                .filter(|k| !dead.contains(k))
                .map(|k| live[k])
                .collect();
            continue;
        }
        match positive_solutions(&sub, &delta)? {
            Ok(solutions) => break solutions,
            Err(k) => {
                eliminated.push(Elimination {
                    reaction: live.remove(k),
                    cause: EliminationCause::NoPositiveFlux,
                });
            }
        }
    };

    let sub = crn.restrict(&live);
    let count = Rational::from_integer(BigInt::from(live.len()));
    let mut average = vec![Rational::zero(); live.len()];
    for f in &solutions {
        for (acc, v) in average.iter_mut().zip(f.as_slice()) {
            *acc += v;
        }
    }
    for v in &mut average {
        *v /= &count;
    }
    let eps =
        average.iter().min().expect("live set is nonempty") / Rational::from_integer(2.into());
    let prefix = max_support_sequence(&sub, c, &eps);
    let spent = prefix.total().expect("sequence has |R'| + 1 steps");
    let remainder: Vec<Rational> = average
        .iter()
        .zip(spent.as_slice())
        .map(|(s, u)| s - u)
        .collect();
    let mut steps = prefix;
    steps.push(FluxVector::new(remainder).expect("prefix flux stays below the average"));
    let sequence = steps.pad(&live, crn.num_reactions());
    debug_assert!(crn.verify_witness(c, d, &sequence).is_ok());
    Ok(SolveResult::Reachable(Reachable {
        witness: ReachWitness::new(sequence),
        live,
    }))
}
