mod common;

use ccrn::crn::{Crn, FluxVector, FluxVectorSequence, State};
use ccrn::gen::{forward_simulate, random_crn, random_state, rng_from_seed};
use ccrn::reach::solve_reach;
use ccrn::subreach::{
    decide_subreach, decide_subreach_with, min_reactions, SubReachError, SubReachOptions,
};
use common::{enumerate_subreach, network, strategies};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Forward-simulates `d` on a random sub-network so that small subsets matter.
fn instance(
    max_species: usize,
    max_reactions: usize,
) -> impl Strategy<Value = (Crn, State, State)> {
    strategies::crn_and_state(max_species, max_reactions).prop_flat_map(|(crn, c)| {
        let r = crn.num_reactions();
        (
            Just(crn),
            Just(c),
            subsequence((0..r).collect::<Vec<_>>(), 0..=r),
            any::<u64>(),
        )
            .prop_map(|(crn, c, used, seed)| {
                let d = forward_simulate(&mut rng_from_seed(seed), &crn.restrict(&used), &c, 3);
                (crn, c, d)
            })
    })
}

/// The witness restricted to `subset`, as a sequence over the sub-network.
fn restrict_witness(seq: &FluxVectorSequence, subset: &[usize]) -> FluxVectorSequence {
    FluxVectorSequence::new(
        seq.steps()
            .iter()
            .map(|u| FluxVector::new(subset.iter().map(|&j| u[j].clone()).collect()).unwrap())
            .collect(),
    )
}

fn check_against_oracle(crn: &Crn, c: &State, d: &State) -> Result<(), TestCaseError> {
    let r = crn.num_reactions();
    let least = enumerate_subreach(crn, c, d, r);
    prop_assert_eq!(
        solve_reach(crn, c, d).unwrap().is_reachable(),
        least.is_some()
    );
    prop_assert_eq!(
        min_reactions(crn, c, d).unwrap(),
        least.as_ref().map(Vec::len)
    );
    for k in 0..=r {
        let result = decide_subreach(crn, c, d, k).unwrap();
        let expected = least.clone().filter(|s| s.len() <= k);
        prop_assert_eq!(result.decision, expected.is_some(), "k = {}", k);
        prop_assert_eq!(&result.subset, &expected, "k = {}", k);
        if let (Some(subset), Some(witness)) = (&result.subset, &result.witness) {
            prop_assert!(crn.verify_witness(c, d, &witness.sequence).is_ok());
            prop_assert!(witness
                .sequence
                .used_reactions()
                .iter()
                .all(|j| subset.contains(j)));
            let local = restrict_witness(&witness.sequence, subset);
            prop_assert!(crn.restrict(subset).verify_witness(c, d, &local).is_ok());
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn agrees_with_plain_enumeration((crn, c, d) in instance(4, 6)) {
        check_against_oracle(&crn, &c, &d)?;
    }

    #[test]
    fn arbitrary_targets_agree_with_enumeration(
        (crn, c) in strategies::crn_and_state(3, 5),
        d_raw in proptest::collection::vec(strategies::maybe_zero(), 3),
    ) {
        let d = State::new(d_raw[..crn.num_species()].to_vec()).unwrap();
        check_against_oracle(&crn, &c, &d)?;
    }
}

#[test]
fn ten_reaction_networks_agree_with_enumeration() {
    let mut rng = rng_from_seed(10);
    for _ in 0..6 {
        let crn = random_crn(&mut rng, 5, 10);
        let c = random_state(&mut rng, 5);
        let d = forward_simulate(&mut rng, &crn, &c, 3);
        check_against_oracle(&crn, &c, &d).unwrap();
    }
}

#[test]
fn decisions_are_monotone_in_k() {
    let mut rng = rng_from_seed(3);
    for _ in 0..30 {
        let crn = random_crn(&mut rng, 4, 6);
        let c = random_state(&mut rng, 4);
        let d = forward_simulate(&mut rng, &crn, &c, 4);
        let decisions: Vec<bool> = (0..=6)
            .map(|k| decide_subreach(&crn, &c, &d, k).unwrap().decision)
            .collect();
        assert!(decisions.windows(2).all(|w| !w[0] || w[1]), "{decisions:?}");
    }
}

#[test]
fn cap_is_an_explicit_error() {
    let rxns: Vec<(Vec<u32>, Vec<u32>)> = (0..5).map(|i| (vec![1], vec![i + 2])).collect();
    let crn = network(1, &rxns);
    let c = State::from_integers(&[1]).unwrap();
    let d = State::from_integers(&[2]).unwrap();
    let err =
        decide_subreach_with(&crn, &c, &d, 2, &SubReachOptions { max_reactions: 4 }).unwrap_err();
    assert_eq!(
        err,
        SubReachError::TooManyReactions {
            candidates: 5,
            cap: 4
        }
    );
}

#[test]
fn prefers_fewer_reactions_then_lower_indices() {
    // A -> B, B -> C, A -> C: the direct route wins with one reaction
    let crn = network(
        3,
        &[
            (vec![1, 0, 0], vec![0, 1, 0]),
            (vec![0, 1, 0], vec![0, 0, 1]),
            (vec![1, 0, 0], vec![0, 0, 1]),
        ],
    );
    let c = State::from_integers(&[1, 0, 0]).unwrap();
    let d = State::from_integers(&[0, 0, 1]).unwrap();
    assert_eq!(
        decide_subreach(&crn, &c, &d, 3).unwrap().subset,
        Some(vec![2])
    );
    assert_eq!(min_reactions(&crn, &c, &d).unwrap(), Some(1));
}
