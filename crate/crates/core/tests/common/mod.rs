//! Independent oracles shared by the integration tests. None of these call
//! into the solver they are used to check.

#![allow(dead_code)]

use ccrn::cnf::CnfFormula;
use ccrn::crn::{Crn, Reaction, State};
use ccrn::linalg::{dot, left_null_space};
use ccrn::rational::Rational;
use ccrn::reach::solve_reach;
use std::collections::BTreeSet;

/// Species reachable in support from `start`: repeatedly add the products of
/// every reaction whose reactants are already present.
pub fn support_closure(crn: &Crn, start: &[usize]) -> BTreeSet<usize> {
    let mut present: BTreeSet<usize> = start.iter().copied().collect();
    loop {
        let before = present.len();
        for rxn in crn.reactions() {
            let enabled = rxn
                .reactants()
                .iter()
                .enumerate()
                .all(|(s, &k)| k == 0 || present.contains(&s));
            if enabled {
                present.extend(
                    rxn.products()
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k > 0)
                        .map(|(s, _)| s),
                );
            }
        }
        if present.len() == before {
            return present;
        }
    }
}

/// A conservation law `w` (with `wᵀM = 0`) that separates `c` from `d`.
pub fn separating_law(crn: &Crn, c: &State, d: &State) -> Option<Vec<Rational>> {
    left_null_space(&crn.stoich_matrix())
        .into_iter()
        .find(|w| dot(w, c.as_slice()) != dot(w, d.as_slice()))
}

/// All subsets of `0..n` in order of size, then lexicographically.
pub fn subsets_by_size(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=max_size.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Plain enumeration without pruning: the first subset of size at most `k`
/// whose restricted network reaches `d`.
pub fn enumerate_subreach(crn: &Crn, c: &State, d: &State, k: usize) -> Option<Vec<usize>> {
    subsets_by_size(crn.num_reactions(), k)
        .into_iter()
        .find(|subset| {
            solve_reach(&crn.restrict(subset), c, d)
                .unwrap()
                .is_reachable()
        })
}

/// Truth-table satisfiability written independently of the library.
pub fn satisfiable(phi: &CnfFormula) -> bool {
    let n = phi.num_vars();
    (0u32..1 << n).any(|bits| {
        phi.clauses().iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = bits >> (lit.unsigned_abs() - 1) & 1 == 1;
                value == (lit > 0)
            })
        })
    })
}

/// Every non-tautological clause over `n` variables with 1 to 3 distinct
/// literals, as sorted literal lists.
pub fn all_clauses(n: usize) -> Vec<Vec<i32>> {
    let vars: Vec<i32> = (1..=n as i32).collect();
    let mut out = Vec::new();
    for var_set in subsets_by_size(n, 3).into_iter().filter(|s| !s.is_empty()) {
        for signs in 0u32..1 << var_set.len() {
            let clause = var_set
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if signs >> i & 1 == 1 {
                        -vars[v]
                    } else {
                        vars[v]
                    }
                })
                .collect();
            out.push(clause);
        }
    }
    out
}

/// Multisets of `m` clauses drawn from `clauses`, as index lists.
pub fn clause_multisets(count: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(count: usize, m: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == m {
            out.push(acc.clone());
            return;
        }
        for i in from..count {
            acc.push(i);
            go(count, m, i, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(count, m, 0, &mut Vec::new(), &mut out);
    out
}

/// A network over `species` species built from `(reactants, products)` pairs.
pub fn network(species: usize, reactions: &[(Vec<u32>, Vec<u32>)]) -> Crn {
    Crn::new(
        (0..species).map(|i| format!("X{i}")).collect(),
        reactions
            .iter()
            .map(|(r, p)| Reaction::new(r.clone(), p.clone()).unwrap())
            .collect(),
    )
    .unwrap()
}

pub mod strategies {
    use super::network;
    use ccrn::crn::{Crn, FluxVector, State};
    use ccrn::rational::{ratio, Rational};
    use num::Zero;
    use proptest::collection::vec;
    use proptest::prelude::*;

    fn coefficient() -> impl Strategy<Value = u32> {
        prop_oneof![3 => Just(0u32), 1 => 1u32..=2]
    }

    pub fn crn(max_species: usize, max_reactions: usize) -> impl Strategy<Value = Crn> {
        (1..=max_species).prop_flat_map(move |species| {
            vec(
                (vec(coefficient(), species), vec(coefficient(), species))
                    .prop_filter("net change must be nonzero", |(r, p)| r != p),
                0..=max_reactions,
            )
            .prop_map(move |rxns| network(species, &rxns))
        })
    }

    pub fn rational() -> impl Strategy<Value = Rational> {
        (1i64..=8, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
    }

    pub fn maybe_zero() -> impl Strategy<Value = Rational> {
        prop_oneof![1 => Just(Rational::zero()), 2 => rational()]
    }

    pub fn state(species: usize) -> impl Strategy<Value = State> {
        vec(maybe_zero(), species).prop_map(|v| State::new(v).unwrap())
    }

    pub fn flux(reactions: usize) -> impl Strategy<Value = FluxVector> {
        vec(maybe_zero(), reactions).prop_map(|v| FluxVector::new(v).unwrap())
    }

    /// A network together with a state over its species.
    pub fn crn_and_state(
        max_species: usize,
        max_reactions: usize,
    ) -> impl Strategy<Value = (Crn, State)> {
        crn(max_species, max_reactions).prop_flat_map(|crn| {
            let s = crn.num_species();
            (Just(crn), state(s))
        })
    }
}
