mod common;

use ccrn::crn::{Crn, FluxVector, FluxVectorSequence, State};
use ccrn::gen::{random_applicable_flux, rng_from_seed};
use ccrn::linalg::{dot, left_null_space};
use ccrn::rational::Rational;
use common::strategies;
use num::{Signed, Zero};
use proptest::prelude::*;

/// `c + M u` computed entry by entry from the reaction vectors.
fn naive_apply(crn: &Crn, c: &State, u: &FluxVector) -> Vec<Rational> {
    let mut out = c.as_slice().to_vec();
    for (rxn, flux) in crn.reactions().iter().zip(u.as_slice()) {
        for (s, slot) in out.iter_mut().enumerate() {
            let net = i64::from(rxn.products()[s]) - i64::from(rxn.reactants()[s]);
            *slot += flux * Rational::from_integer(net.into());
        }
    }
    out
}

fn applicable_by_definition(crn: &Crn, c: &State, u: &FluxVector) -> bool {
    let reactions_ok = crn.reactions().iter().zip(u.as_slice()).all(|(rxn, f)| {
        f.is_zero()
            || rxn
                .reactants()
                .iter()
                .zip(c.as_slice())
                .all(|(&k, v)| k == 0 || v.is_positive())
    });
    reactions_ok && naive_apply(crn, c, u).iter().all(|v| !v.is_negative())
}

fn net_and_flux() -> impl Strategy<Value = (Crn, State, FluxVector)> {
    strategies::crn_and_state(4, 5).prop_flat_map(|(crn, c)| {
        let r = crn.num_reactions();
        (Just(crn), Just(c), strategies::flux(r))
    })
}

proptest! {
    #[test]
    fn applicability_matches_definition((crn, c, u) in net_and_flux()) {
        let expected = applicable_by_definition(&crn, &c, &u);
        prop_assert_eq!(crn.flux_applicable(&u, &c), expected);
        match crn.apply_flux(&c, &u) {
            Ok(next) => {
                prop_assert!(expected);
                prop_assert!(next.as_slice().iter().all(|v| !v.is_negative()));
                prop_assert_eq!(next.as_slice(), &naive_apply(&crn, &c, &u)[..]);
            }
            Err(_) => prop_assert!(!expected),
        }
    }

    #[test]
    fn application_is_linear((crn, c) in strategies::crn_and_state(4, 5), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let u = random_applicable_flux(&mut rng, &crn, &c);
        let mid = crn.apply_flux(&c, &u).unwrap();
        let v = random_applicable_flux(&mut rng, &crn, &mid);
        let two_steps = crn.apply_flux(&mid, &v).unwrap();
        let sum = u.add(&v);
        if crn.flux_applicable(&sum, &c) {
            prop_assert_eq!(crn.apply_flux(&c, &sum).unwrap(), two_steps);
        }
    }

    #[test]
    fn zero_steps_are_the_identity((crn, c) in strategies::crn_and_state(4, 5), steps in 0usize..4) {
        let seq = FluxVectorSequence::new(vec![FluxVector::zeros(crn.num_reactions()); steps]);
        prop_assert_eq!(crn.apply_sequence(&c, &seq).unwrap(), c);
    }

    #[test]
    fn conservation_laws_are_preserved((crn, c) in strategies::crn_and_state(5, 4), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let mut seq = FluxVectorSequence::empty();
        let mut state = c.clone();
        for _ in 0..3 {
            let u = random_applicable_flux(&mut rng, &crn, &state);
            state = crn.apply_flux(&state, &u).unwrap();
            seq.push(u);
        }
        let end = crn.apply_sequence(&c, &seq).unwrap();
        prop_assert_eq!(&end, &state);
        let m = crn.stoich_matrix();
        for w in left_null_space(&m) {
            for j in 0..crn.num_reactions() {
                let column: Vec<Rational> = m.column(j).into_iter().map(|x| Rational::from_integer(x.into())).collect();
                prop_assert!(dot(&w, &column).is_zero());
            }
            prop_assert_eq!(dot(&w, end.as_slice()), dot(&w, c.as_slice()));
        }
    }

    #[test]
    fn empty_witness_reaches_the_start((crn, c) in strategies::crn_and_state(5, 5)) {
        prop_assert!(crn.verify_witness(&c, &c, &FluxVectorSequence::empty()).is_ok());
    }

    #[test]
    fn matrix_columns_are_net_changes(crn in strategies::crn(5, 5)) {
        let m = crn.stoich_matrix();
        prop_assert_eq!(m.rows(), crn.num_species());
        prop_assert_eq!(m.cols(), crn.num_reactions());
        for (j, rxn) in crn.reactions().iter().enumerate() {
            prop_assert_eq!(m.column(j), rxn.net_change());
        }
    }
}
