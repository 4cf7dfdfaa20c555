//! Seeded random instances.
//!
//! Reachable instances are built by forward simulation: a random network and
//! start state, then a few random applicable flux vectors whose endpoint
//! becomes the target. Unreachable instances take such an endpoint and bump
//! one species that carries weight in a conservation law `wᵀM = 0`, so that
//! `wᵀd ≠ wᵀc` certifies unreachability.

use crate::crn::{Crn, FluxVector, Reaction, State};
use crate::linalg::{dot, left_null_space};
use crate::parse::ProblemFile;
use crate::rational::{ratio, Rational};
use num::{BigInt, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type GenRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Reachable,
    ConservedUnreachable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub species: usize,
    pub reactions: usize,
    pub mode: GenMode,
    /// Upper bound on forward-simulation steps (at least one is taken).
    pub max_steps: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            species: 3,
            reactions: 3,
            mode: GenMode::Reachable,
            max_steps: 5,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("at least one species is required")]
    NoSpecies,
    #[error("no network with a conservation law found after {0} attempts")]
    NoConservationLaw(usize),
}

const CONSERVATION_ATTEMPTS: usize = 1000;

fn random_side(rng: &mut GenRng, species: usize) -> Vec<u32> {
    let mut side = vec![0u32; species];
    let terms = rng.gen_range(0..=2usize.min(species));
    for _ in 0..terms {
        side[rng.gen_range(0..species)] += rng.gen_range(1..=2);
    }
    side
}

/// A random network with small stoichiometric coefficients; reactions are
/// redrawn until their net change is nonzero.
pub fn random_crn(rng: &mut GenRng, species: usize, reactions: usize) -> Crn {
    let names = (0..species).map(|i| format!("X{i}")).collect();
    let rxns = (0..reactions)
        .map(|_| loop {
            let r = random_side(rng, species);
            let p = random_side(rng, species);
            if let Ok(rxn) = Reaction::new(r, p) {
                break rxn;
            }
        })
        .collect();
    Crn::new(names, rxns).expect("generated names are unique")
}

fn small_rational(rng: &mut GenRng) -> Rational {
    ratio(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

/// A random state; each species is present with probability 2/3.
pub fn random_state(rng: &mut GenRng, species: usize) -> State {
    let conc = (0..species)
        .map(|_| {
            if rng.gen_ratio(2, 3) {
                small_rational(rng)
            } else {
                Rational::zero()
            }
        })
        .collect();
    State::new(conc).expect("non-negative")
}

/// A random flux vector applicable at `c`: random positive flux on a random
/// subset of the applicable reactions, scaled down into the feasible range.
/// Returns the zero vector when nothing is applicable.
pub fn random_applicable_flux(rng: &mut GenRng, crn: &Crn, c: &State) -> FluxVector {
    let applicable: Vec<usize> = (0..crn.num_reactions())
        .filter(|&j| crn.reaction_applicable(j, c))
        .collect();
    let mut flux = vec![Rational::zero(); crn.num_reactions()];
    if applicable.is_empty() {
        return FluxVector::zeros(crn.num_reactions());
    }
    let count = rng.gen_range(1..=applicable.len());
    for &j in applicable.choose_multiple(rng, count) {
        flux[j] = small_rational(rng);
    }
    let change = crn.stoich_matrix().mul(&flux);
    // largest t with c + t·change ≥ 0
    let limit = c
        .as_slice()
        .iter()
        .zip(&change)
        .filter(|(_, d)| d.is_negative())
        .map(|(v, d)| -(v / d))
        .min();
    let fraction = ratio(rng.gen_range(1..=4), 4);
    let scale = match limit {
        Some(limit) if limit < Rational::from_integer(BigInt::from(1)) => limit * fraction,
        _ => fraction,
    };
    for v in &mut flux {
        *v *= &scale;
    }
    FluxVector::new(flux).expect("non-negative")
}

/// Applies between 1 and `max_steps` random applicable flux vectors.
pub fn forward_simulate(rng: &mut GenRng, crn: &Crn, c: &State, max_steps: usize) -> State {
    let steps = rng.gen_range(1..=max_steps.max(1));
    let mut state = c.clone();
    for _ in 0..steps {
        let u = random_applicable_flux(rng, crn, &state);
        state = crn
            .apply_flux(&state, &u)
            .expect("generated flux is applicable");
    }
    state
}

/// A conservation law and a target that violates it, if `crn` has one.
fn violate_conservation(
    rng: &mut GenRng,
    crn: &Crn,
    reachable: &State,
) -> Option<(Vec<Rational>, State)> {
    let laws = left_null_space(&crn.stoich_matrix());
    let law = laws.choose(rng)?.clone();
    let weighted: Vec<usize> = (0..crn.num_species())
        .filter(|&s| !law[s].is_zero())
        .collect();
    let s = *weighted.choose(rng)?;
    let mut conc = reachable.as_slice().to_vec();
    conc[s] += small_rational(rng);
    Some((law, State::new(conc).expect("non-negative")))
}

/// Generates a problem file; identical seeds and configs give identical output.
pub fn generate(seed: u64, config: &GenConfig) -> Result<ProblemFile, GenError> {
    if config.species == 0 {
        return Err(GenError::NoSpecies);
    }
    let mut rng = rng_from_seed(seed);
    match config.mode {
        GenMode::Reachable => {
            let crn = random_crn(&mut rng, config.species, config.reactions);
            let start = random_state(&mut rng, config.species);
            let target = forward_simulate(&mut rng, &crn, &start, config.max_steps);
            Ok(ProblemFile {
                crn,
                start,
                target,
                k: None,
            })
        }
        GenMode::ConservedUnreachable => {
            for _ in 0..CONSERVATION_ATTEMPTS {
                let crn = random_crn(&mut rng, config.species, config.reactions);
                let start = random_state(&mut rng, config.species);
                let reachable = forward_simulate(&mut rng, &crn, &start, config.max_steps);
                if let Some((law, target)) = violate_conservation(&mut rng, &crn, &reachable) {
                    debug_assert_ne!(dot(&law, start.as_slice()), dot(&law, target.as_slice()));
                    return Ok(ProblemFile {
                        crn,
                        start,
                        target,
                        k: None,
                    });
                }
            }
            Err(GenError::NoConservationLaw(CONSERVATION_ATTEMPTS))
        }
    }
}
