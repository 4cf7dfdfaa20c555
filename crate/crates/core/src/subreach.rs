//! Reachability using a bounded number of distinct reactions.
//!
//! The problem is NP-complete, so the decision procedure is an exact
//! exponential search guarded by a configurable cap on the number of
//! candidate reactions. The search looks for the *support* of a witness: the
//! set `W` of reactions carrying positive total flux. Any such `W` satisfies
//! cheap combinatorial conditions which drive branching and pruning:
//!
//! * sign: every species whose concentration must drop (rise) has a consumer
//!   (producer) in `W`, and a species that some reaction in `W` changes while
//!   its net displacement is zero has both;
//! * closure: every reactant of a reaction in `W` is present at the start or
//!   produced by a reaction of `W` that can itself fire.
//!
//! Sets meeting both conditions are checked exactly with an LP cone test and
//! then with [`solve_reach`] on the restricted network. Bounds are deepened
//! one at a time, so the first bound that yields a hit is the minimum, and
//! the lexicographically least set of that size is returned.

use crate::crn::{Crn, FluxVectorSequence, ReachWitness, State};
use crate::lp::FluxSolver;
use crate::rational::Rational;
use crate::reach::{permanently_inapplicable, solve_reach, ReachError, SolveResult};
use num::Signed;
use thiserror::Error;

pub const DEFAULT_MAX_REACTIONS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubReachOptions {
    /// Largest number of candidate reactions (after removing permanently
    /// inapplicable ones) the exponential search will accept.
    pub max_reactions: usize,
}

impl Default for SubReachOptions {
    fn default() -> Self {
        Self {
            max_reactions: DEFAULT_MAX_REACTIONS,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubReachError {
    #[error("{candidates} candidate reactions exceed the search cap of {cap}")]
    TooManyReactions { candidates: usize, cap: usize },
    #[error(transparent)]
    Reach(#[from] ReachError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubReachResult {
    pub decision: bool,
    /// The witnessing reaction set, sorted.
    pub subset: Option<Vec<usize>>,
    /// Witness over the full network with zero flux outside `subset`.
    pub witness: Option<ReachWitness>,
}

impl SubReachResult {
    fn rejected() -> Self {
        Self {
            decision: false,
            subset: None,
            witness: None,
        }
    }
}

enum Node {
    Prune,
    Branch(Vec<usize>),
    Complete,
}

struct Search<'a> {
    crn: &'a Crn,
    start: &'a State,
    target: &'a State,
    delta: Vec<Rational>,
    /// `net[j][s]`, net change of reaction `j` on species `s`.
    net: Vec<Vec<i64>>,
    candidates: Vec<usize>,
}

impl Search<'_> {
    fn free(&self, j: usize, included: &[usize], excluded: &[bool]) -> bool {
        !excluded[j] && !included.contains(&j)
    }

    fn closure(&self, included: &[usize]) -> Vec<bool> {
        let mut present: Vec<bool> = self
            .start
            .as_slice()
            .iter()
            .map(|v| v.is_positive())
            .collect();
        let mut fired = vec![false; included.len()];
        loop {
            let mut changed = false;
            for (k, &j) in included.iter().enumerate() {
                if fired[k] || !self.enabled(j, &present) {
                    continue;
                }
                fired[k] = true;
                changed = true;
                for (s, &p) in self.crn.reactions()[j].products().iter().enumerate() {
                    if p > 0 {
                        present[s] = true;
                    }
                }
            }
            if !changed {
                return present;
            }
        }
    }

    fn enabled(&self, j: usize, present: &[bool]) -> bool {
        self.crn.reactions()[j]
            .reactants()
            .iter()
            .zip(present)
            .all(|(&r, &here)| r == 0 || here)
    }

    fn analyse(&self, included: &[usize], excluded: &[bool], bound: usize) -> Node {
        let mut requirements: Vec<Vec<usize>> = Vec::new();
        for (s, delta) in self.delta.iter().enumerate() {
            let has = |sign: i64| included.iter().any(|&j| self.net[j][s].signum() == sign);
            let need = if delta.is_negative() {
                Some(-1)
            } else if delta.is_positive() {
                Some(1)
            } else {
                match (has(1), has(-1)) {
                    (true, false) => Some(-1),
                    (false, true) => Some(1),
                    _ => None,
                }
            };
            let Some(sign) = need else { continue };
            if has(sign) {
                continue;
            }
            let options: Vec<usize> = self
                .candidates
                .iter()
                .copied()
                .filter(|&j| self.free(j, included, excluded) && self.net[j][s].signum() == sign)
                .collect();
            if options.is_empty() {
                return Node::Prune;
            }
            requirements.push(options);
        }
        if !requirements.is_empty() {
            requirements.sort_by_key(Vec::len);
            // requirements with pairwise disjoint options each need their own reaction
            let mut used: Vec<usize> = Vec::new();
            let mut lower = 0;
            for options in &requirements {
                if options.iter().all(|j| !used.contains(j)) {
                    used.extend(options);
                    lower += 1;
                }
            }
            if included.len() + lower > bound {
                return Node::Prune;
            }
            return Node::Branch(requirements.swap_remove(0));
        }

        let present = self.closure(included);
        if included.iter().all(|&j| self.enabled(j, &present)) {
            return Node::Complete;
        }
        if included.len() + 1 > bound {
            return Node::Prune;
        }
        let expanders: Vec<usize> = self
            .candidates
            .iter()
            .copied()
            .filter(|&j| {
                self.free(j, included, excluded)
                    && self.enabled(j, &present)
                    && self.crn.reactions()[j]
                        .products()
                        .iter()
                        .zip(&present)
                        .any(|(&p, &here)| p > 0 && !here)
            })
            .collect();
        if expanders.is_empty() {
            Node::Prune
        } else {
            Node::Branch(expanders)
        }
    }

    fn reaches_with(&self, subset: &[usize]) -> Result<bool, ReachError> {
        let sub = self.crn.restrict(subset);
        if !FluxSolver::new(&sub.stoich_matrix(), &self.delta)?.is_feasible() {
            return Ok(false);
        }
        Ok(solve_reach(&sub, self.start, self.target)?.is_reachable())
    }

    /// The lexicographically least sorted set any completion of `included`
    /// could reach: fill up to `bound` with the smallest free candidates.
    fn lex_floor(&self, included: &[usize], excluded: &[bool], bound: usize) -> Vec<usize> {
        let mut floor = included.to_vec();
        floor.extend(
            self.candidates
                .iter()
                .copied()
                .filter(|&j| self.free(j, included, excluded))
                .take(bound.saturating_sub(included.len())),
        );
        floor.sort_unstable();
        floor
    }

    fn explore(
        &self,
        included: &mut Vec<usize>,
        excluded: &mut Vec<bool>,
        bound: usize,
        best: &mut Option<Vec<usize>>,
    ) -> Result<(), ReachError> {
        if let Some(best) = best {
            if self.lex_floor(included, excluded, bound) >= *best {
                return Ok(());
            }
        }
        let options = match self.analyse(included, excluded, bound) {
            Node::Prune => return Ok(()),
            Node::Branch(options) => options,
            Node::Complete => {
                let mut subset = included.clone();
                subset.sort_unstable();
                if self.reaches_with(&subset)? {
                    *best = Some(subset);
                    return Ok(());
                }
                if included.len() >= bound {
                    return Ok(());
                }
                self.candidates
                    .iter()
                    .copied()
                    .filter(|&j| self.free(j, included, excluded))
                    .collect()
            }
        };
        // branch i takes options[i] and rules out options[..i]
        let mut newly_excluded = Vec::new();
        for &j in &options {
            included.push(j);
            self.explore(included, excluded, bound, best)?;
            included.pop();
            excluded[j] = true;
            newly_excluded.push(j);
        }
        for j in newly_excluded {
            excluded[j] = false;
        }
        Ok(())
    }

    /// Lexicographically least witnessing set of size at most `bound`, given
    /// that no smaller bound has one. Every witnessing set then has exactly
    /// `bound` elements, so branches whose [`Self::lex_floor`] is not below
    /// the best set found so far are cut.
    fn least_at(&self, bound: usize) -> Result<Option<Vec<usize>>, ReachError> {
        let mut best = None;
        let mut excluded = vec![false; self.crn.num_reactions()];
        self.explore(&mut Vec::new(), &mut excluded, bound, &mut best)?;
        Ok(best)
    }
}

fn check_dims(crn: &Crn, c: &State, d: &State) -> Result<(), ReachError> {
    for (what, state) in [("start state", c), ("target state", d)] {
        if state.len() != crn.num_species() {
            return Err(ReachError::Dimension {
                what,
                expected: crn.num_species(),
                found: state.len(),
            });
        }
    }
    Ok(())
}

/// Is `d` reachable from `c` using at most `k` distinct reactions?
pub fn decide_subreach(
    crn: &Crn,
    c: &State,
    d: &State,
    k: usize,
) -> Result<SubReachResult, SubReachError> {
    decide_subreach_with(crn, c, d, k, &SubReachOptions::default())
}

pub fn decide_subreach_with(
    crn: &Crn,
    c: &State,
    d: &State,
    k: usize,
    options: &SubReachOptions,
) -> Result<SubReachResult, SubReachError> {
    check_dims(crn, c, d)?;
    if c == d {
        return Ok(SubReachResult {
            decision: true,
            subset: Some(Vec::new()),
            witness: Some(ReachWitness::new(FluxVectorSequence::empty())),
        });
    }
    let dead = permanently_inapplicable(crn, c);
    let candidates: Vec<usize> = (0..crn.num_reactions())
        .filter(|j| !dead.contains(j))
        .collect();
    if candidates.len() > options.max_reactions {
        return Err(SubReachError::TooManyReactions {
            candidates: candidates.len(),
            cap: options.max_reactions,
        });
    }
    let delta: Vec<Rational> = d
        .as_slice()
        .iter()
        .zip(c.as_slice())
        .map(|(a, b)| a - b)
        .collect();
    let live = crn.restrict(&candidates);
    if k == 0
        || !FluxSolver::new(&live.stoich_matrix(), &delta)
            .map_err(ReachError::from)?
            .is_feasible()
    {
        return Ok(SubReachResult::rejected());
    }
    // With the whole network allowed the answer is known up front, and a
    // reaction eliminated by the solver appears in no witness at all.
    let candidates = if k >= candidates.len() {
        match solve_reach(&live, c, d)? {
            SolveResult::Reachable(r) => r.live.iter().map(|&i| candidates[i]).collect(),
            SolveResult::NotReachable { .. } => return Ok(SubReachResult::rejected()),
        }
    } else {
        candidates
    };
    let search = Search {
        crn,
        start: c,
        target: d,
        delta,
        net: crn.reactions().iter().map(|r| r.net_change()).collect(),
        candidates,
    };
    for bound in 1..=k.min(search.candidates.len()) {
        if let Some(subset) = search.least_at(bound)? {
            let witness = match solve_reach(&crn.restrict(&subset), c, d)? {
                SolveResult::Reachable(r) => {
                    ReachWitness::new(r.witness.sequence.pad(&subset, crn.num_reactions()))
                }
                SolveResult::NotReachable { .. } => {
                    unreachable!("subset was accepted by the same solver")
                }
            };
            return Ok(SubReachResult {
                decision: true,
                subset: Some(subset),
                witness: Some(witness),
            });
        }
    }
    Ok(SubReachResult::rejected())
}

/// Least `k` for which [`decide_subreach`] accepts, or `None` when `d` is not
/// reachable even with every reaction.
pub fn min_reactions(crn: &Crn, c: &State, d: &State) -> Result<Option<usize>, SubReachError> {
    min_reactions_with(crn, c, d, &SubReachOptions::default())
}

pub fn min_reactions_with(
    crn: &Crn,
    c: &State,
    d: &State,
    options: &SubReachOptions,
) -> Result<Option<usize>, SubReachError> {
    let result = decide_subreach_with(crn, c, d, crn.num_reactions(), options)?;
    Ok(result.subset.map(|s| s.len()))
}
