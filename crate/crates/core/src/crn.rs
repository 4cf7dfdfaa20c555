//! The continuous CRN data model and the exact semantics of applying flux
//! vectors.
//!
//! A [`Crn`] owns an ordered species table and an ordered reaction list; the
//! reaction order is the column order of the stoichiometry matrix. States and
//! flux vectors are dense vectors of non-negative rationals indexed by species
//! and by reaction respectively. Sets (supports, applicable reactions) are
//! returned as sorted index lists.

use crate::rational::{format_rational, is_positive, Rational};
use num::{BigInt, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrnError {
    #[error("reaction {reaction} has zero net change")]
    ZeroNetChange { reaction: usize },
    #[error("reaction vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("duplicate species name '{0}'")]
    DuplicateSpecies(String),
    #[error("invalid species name '{0}'")]
    InvalidSpeciesName(String),
    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: String },
}

/// Why a flux vector cannot be applied at a state.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Inapplicable {
    #[error("flux vector has {found} entries, expected {expected}")]
    FluxLength { expected: usize, found: usize },
    #[error("state has {found} entries, expected {expected}")]
    StateLength { expected: usize, found: usize },
    #[error(
        "reaction {reaction} has positive flux but its reactant (species {species}) is absent"
    )]
    ReactionNotApplicable { reaction: usize, species: usize },
    #[error("species {species} would reach negative concentration {value}")]
    Negative { species: usize, value: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ApplyError {
    /// Index of the failing step when applying a sequence.
    pub step: Option<usize>,
    pub reason: Inapplicable,
}

impl fmt::Display for ApplyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(step) => write!(f, "step {step} not applicable: {}", self.reason),
            None => write!(f, "flux vector not applicable: {}", self.reason),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error(transparent)]
    NotApplicable(#[from] ApplyError),
    #[error("target state has {found} entries, expected {expected}")]
    TargetLength { expected: usize, found: usize },
    #[error("replay ends with species {species} at {found}, target is {expected}")]
    EndpointMismatch {
        species: usize,
        expected: String,
        found: String,
    },
}

/// A reaction `(r, p)` over the species of its network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    reactants: Vec<u32>,
    products: Vec<u32>,
}

impl Reaction {
    /// Builds a reaction; both vectors must have the same length and the net
    /// change must be nonzero.
    pub fn new(reactants: Vec<u32>, products: Vec<u32>) -> Result<Self, CrnError> {
        if reactants.len() != products.len() {
            return Err(CrnError::LengthMismatch {
                expected: reactants.len(),
                found: products.len(),
            });
        }
        if reactants == products {
            return Err(CrnError::ZeroNetChange { reaction: 0 });
        }
        Ok(Self {
            reactants,
            products,
        })
    }

    /// Convenience constructor from sparse `(species, coefficient)` lists.
    pub fn from_terms(
        num_species: usize,
        reactants: &[(usize, u32)],
        products: &[(usize, u32)],
    ) -> Result<Self, CrnError> {
        let mut r = vec![0; num_species];
        let mut p = vec![0; num_species];
        for &(s, k) in reactants {
            r[s] += k;
        }
        for &(s, k) in products {
            p[s] += k;
        }
        Self::new(r, p)
    }

    pub fn reactants(&self) -> &[u32] {
        &self.reactants
    }

    pub fn products(&self) -> &[u32] {
        &self.products
    }

    pub fn num_species(&self) -> usize {
        self.reactants.len()
    }

    /// `p - r`, componentwise.
    pub fn net_change(&self) -> Vec<i64> {
        self.reactants
            .iter()
            .zip(&self.products)
            .map(|(&r, &p)| i64::from(p) - i64::from(r))
            .collect()
    }

    /// True iff some species appears with the same nonzero coefficient on both sides.
    pub fn is_catalytic(&self) -> bool {
        self.reactants
            .iter()
            .zip(&self.products)
            .any(|(&r, &p)| r == p && r != 0)
    }

    /// Reactant species (`r(s) > 0`).
    pub fn support(&self) -> Vec<usize> {
        positions(&self.reactants)
    }

    /// All reactants present at `c`.
    pub fn is_applicable(&self, c: &State) -> bool {
        self.first_missing_reactant(c).is_none()
    }

    fn first_missing_reactant(&self, c: &State) -> Option<usize> {
        self.reactants
            .iter()
            .enumerate()
            .find(|&(s, &r)| r > 0 && !is_positive(&c.0[s]))
            .map(|(s, _)| s)
    }
}

fn positions(v: &[u32]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, _)| i)
        .collect()
}

fn check_non_negative(values: &[Rational]) -> Result<(), CrnError> {
    match values.iter().position(|v| v.is_negative()) {
        Some(index) => Err(CrnError::NegativeEntry {
            index,
            value: format_rational(&values[index]),
        }),
        None => Ok(()),
    }
}

fn support_of(values: &[Rational]) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| is_positive(v))
        .map(|(i, _)| i)
        .collect()
}

/// Non-negative concentration per species.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State(Vec<Rational>);

impl State {
    pub fn new(conc: Vec<Rational>) -> Result<Self, CrnError> {
        check_non_negative(&conc)?;
        Ok(Self(conc))
    }

    pub fn zeros(num_species: usize) -> Self {
        Self(vec![Rational::zero(); num_species])
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, CrnError> {
        Self::new(values.iter().map(|&v| crate::rational::int(v)).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `supp(c)`: species with strictly positive concentration.
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.0)
    }

    /// Smallest nonzero concentration, if any species is present.
    pub fn min_positive(&self) -> Option<&Rational> {
        self.0.iter().filter(|v| is_positive(v)).min()
    }
}

impl std::ops::Index<usize> for State {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// Non-negative flux per reaction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FluxVector(Vec<Rational>);

impl FluxVector {
    pub fn new(flux: Vec<Rational>) -> Result<Self, CrnError> {
        check_non_negative(&flux)?;
        Ok(Self(flux))
    }

    pub fn zeros(num_reactions: usize) -> Self {
        Self(vec![Rational::zero(); num_reactions])
    }

    /// Flux `value` on a single reaction, zero elsewhere.
    pub fn single(
        num_reactions: usize,
        reaction: usize,
        value: Rational,
    ) -> Result<Self, CrnError> {
        let mut flux = vec![Rational::zero(); num_reactions];
        flux[reaction] = value;
        Self::new(flux)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `supp(u)`: reactions with strictly positive flux.
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.0)
    }

    /// Max norm.
    pub fn norm(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Componentwise sum; both vectors must have equal length.
    pub fn add(&self, other: &FluxVector) -> FluxVector {
        assert_eq!(self.len(), other.len(), "flux vector length mismatch");
        FluxVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Embeds a flux vector over `live` reactions of a sub-network into a
    /// network with `total` reactions, zero at every other reaction.
    pub fn pad(&self, live: &[usize], total: usize) -> FluxVector {
        assert_eq!(
            self.len(),
            live.len(),
            "live set does not match flux length"
        );
        let mut flux = vec![Rational::zero(); total];
        for (value, &j) in self.0.iter().zip(live) {
            flux[j] = value.clone();
        }
        FluxVector(flux)
    }
}

impl std::ops::Index<usize> for FluxVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// An ordered tuple of flux vectors, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct FluxVectorSequence(Vec<FluxVector>);

impl FluxVectorSequence {
    pub fn new(steps: Vec<FluxVector>) -> Self {
        Self(steps)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn steps(&self) -> &[FluxVector] {
        &self.0
    }

    pub fn push(&mut self, step: FluxVector) {
        self.0.push(step);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise sum of every step, or `None` for an empty sequence.
    pub fn total(&self) -> Option<FluxVector> {
        let mut it = self.0.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, u| acc.add(u)))
    }

    /// Reactions receiving positive flux in at least one step.
    pub fn used_reactions(&self) -> Vec<usize> {
        self.total().map(|t| t.support()).unwrap_or_default()
    }

    pub fn pad(&self, live: &[usize], total: usize) -> Self {
        Self(self.0.iter().map(|u| u.pad(live, total)).collect())
    }
}

/// A replayable answer to a reachability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachWitness {
    pub sequence: FluxVectorSequence,
    /// `trace[0]` is the start state and `trace[i] = trace[i-1] * steps[i]`.
    pub trace: Option<Vec<State>>,
}

impl ReachWitness {
    pub fn new(sequence: FluxVectorSequence) -> Self {
        Self {
            sequence,
            trace: None,
        }
    }

    /// Attaches the intermediate states obtained by replaying from `start`.
    pub fn with_trace(mut self, crn: &Crn, start: &State) -> Result<Self, ApplyError> {
        let mut states = vec![start.clone()];
        for (i, u) in self.sequence.steps().iter().enumerate() {
            let next = crn
                .apply_flux(states.last().unwrap(), u)
                .map_err(|e| ApplyError {
                    step: Some(i),
                    reason: e.reason,
                })?;
            states.push(next);
        }
        self.trace = Some(states);
        Ok(self)
    }
}

/// `|Λ| × |R|` integer matrix whose column `j` is the net change of reaction `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoichMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl StoichMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    /// `M·x` in exact arithmetic.
    pub fn mul(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(
            x.len(),
            self.cols,
            "vector length does not match column count"
        );
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(&m, v)| m != 0 && !v.is_zero())
                    .fold(Rational::zero(), |acc, (&m, v)| {
                        acc + v * Rational::from_integer(BigInt::from(m))
                    })
            })
            .collect()
    }

    /// Rows as rational vectors, for the LP and linear-algebra routines.
    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&m| Rational::from_integer(BigInt::from(m)))
                    .collect()
            })
            .collect()
    }
}

/// A continuous chemical reaction network `(Λ, R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crn {
    species: Vec<String>,
    reactions: Vec<Reaction>,
    index: HashMap<String, usize>,
}

pub(crate) fn valid_species_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Crn {
    pub fn new(species: Vec<String>, reactions: Vec<Reaction>) -> Result<Self, CrnError> {
        let mut index = HashMap::with_capacity(species.len());
        for (i, name) in species.iter().enumerate() {
            if !valid_species_name(name) {
                return Err(CrnError::InvalidSpeciesName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(CrnError::DuplicateSpecies(name.clone()));
            }
        }
        for (j, rxn) in reactions.iter().enumerate() {
            if rxn.num_species() != species.len() {
                return Err(CrnError::LengthMismatch {
                    expected: species.len(),
                    found: rxn.num_species(),
                });
            }
            if rxn.reactants == rxn.products {
                return Err(CrnError::ZeroNetChange { reaction: j });
            }
        }
        Ok(Self {
            species,
            reactions,
            index,
        })
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Stable label of reaction `j`, used in witness files (`r1`, `r2`, ...).
    pub fn reaction_label(j: usize) -> String {
        format!("r{}", j + 1)
    }

    /// Inverse of [`Crn::reaction_label`], bounded by this network's size.
    pub fn reaction_by_label(&self, label: &str) -> Option<usize> {
        let n: usize = label.strip_prefix('r')?.parse().ok()?;
        if label.starts_with("r0") || n == 0 || n > self.reactions.len() {
            return None;
        }
        Some(n - 1)
    }

    /// Human-readable form, e.g. `2A + B -> 2C`.
    pub fn reaction_text(&self, j: usize) -> String {
        let side = |v: &[u32]| {
            v.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(s, &k)| {
                    if k == 1 {
                        self.species[s].clone()
                    } else {
                        format!("{k}{}", self.species[s])
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let rxn = &self.reactions[j];
        let lhs = side(&rxn.reactants);
        let rhs = side(&rxn.products);
        match (lhs.is_empty(), rhs.is_empty()) {
            (_, true) => format!("{lhs} ->").trim_start().to_string(),
            (true, false) => format!("-> {rhs}"),
            (false, false) => format!("{lhs} -> {rhs}"),
        }
    }

    pub fn stoich_matrix(&self) -> StoichMatrix {
        let rows = self.species.len();
        let cols = self.reactions.len();
        let mut entries = vec![0i64; rows * cols];
        for (j, rxn) in self.reactions.iter().enumerate() {
            for (i, delta) in rxn.net_change().into_iter().enumerate() {
                entries[i * cols + j] = delta;
            }
        }
        StoichMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// The network `(Λ, R')` keeping only the listed reactions, in the given order.
    pub fn restrict(&self, reactions: &[usize]) -> Crn {
        Crn {
            species: self.species.clone(),
            reactions: reactions
                .iter()
                .map(|&j| self.reactions[j].clone())
                .collect(),
            index: self.index.clone(),
        }
    }

    /// Pairs `(i, j)`, `i < j`, of reactions with identical `(r, p)`.
    pub fn duplicate_reactions(&self) -> Vec<(usize, usize)> {
        let mut seen: HashMap<&Reaction, usize> = HashMap::new();
        let mut dups = Vec::new();
        for (j, rxn) in self.reactions.iter().enumerate() {
            if let Some(&i) = seen.get(rxn) {
                dups.push((i, j));
            } else {
                seen.insert(rxn, j);
            }
        }
        dups
    }

    pub fn reaction_applicable(&self, reaction: usize, c: &State) -> bool {
        self.reactions[reaction].is_applicable(c)
    }

    fn check_flux(&self, c: &State, u: &FluxVector) -> Result<Vec<Rational>, Inapplicable> {
        if c.len() != self.num_species() {
            return Err(Inapplicable::StateLength {
                expected: self.num_species(),
                found: c.len(),
            });
        }
        if u.len() != self.num_reactions() {
            return Err(Inapplicable::FluxLength {
                expected: self.num_reactions(),
                found: u.len(),
            });
        }
        for j in u.support() {
            if let Some(species) = self.reactions[j].first_missing_reactant(c) {
                return Err(Inapplicable::ReactionNotApplicable {
                    reaction: j,
                    species,
                });
            }
        }
        let mut next = c.0.clone();
        for (j, flux) in u.0.iter().enumerate() {
            if flux.is_zero() {
                continue;
            }
            let rxn = &self.reactions[j];
            for (s, value) in next.iter_mut().enumerate() {
                let delta = i64::from(rxn.products[s]) - i64::from(rxn.reactants[s]);
                if delta != 0 {
                    *value += flux * Rational::from_integer(BigInt::from(delta));
                }
            }
        }
        if let Some(species) = next.iter().position(|v| v.is_negative()) {
            return Err(Inapplicable::Negative {
                species,
                value: format_rational(&next[species]),
            });
        }
        Ok(next)
    }

    /// Both applicability conditions: supported reactions applicable and the
    /// result non-negative.
    pub fn flux_applicable(&self, u: &FluxVector, c: &State) -> bool {
        self.check_flux(c, u).is_ok()
    }

    /// `c * u = c + M u`.
    pub fn apply_flux(&self, c: &State, u: &FluxVector) -> Result<State, ApplyError> {
        self.check_flux(c, u)
            .map(State)
            .map_err(|reason| ApplyError { step: None, reason })
    }

    /// Left fold of [`Crn::apply_flux`]; errors carry the failing step index.
    pub fn apply_sequence(&self, c: &State, seq: &FluxVectorSequence) -> Result<State, ApplyError> {
        seq.steps()
            .iter()
            .enumerate()
            .try_fold(c.clone(), |state, (i, u)| {
                self.check_flux(&state, u)
                    .map(State)
                    .map_err(|reason| ApplyError {
                        step: Some(i),
                        reason,
                    })
            })
    }

    /// Checks that `seq` is applicable at `c` and lands exactly on `d`.
    pub fn verify_witness(
        &self,
        c: &State,
        d: &State,
        seq: &FluxVectorSequence,
    ) -> Result<(), WitnessError> {
        if d.len() != self.num_species() {
            return Err(WitnessError::TargetLength {
                expected: self.num_species(),
                found: d.len(),
            });
        }
        let end = self.apply_sequence(c, seq)?;
        match end.0.iter().zip(&d.0).position(|(a, b)| a != b) {
            Some(species) => Err(WitnessError::EndpointMismatch {
                species,
                expected: format_rational(&d.0[species]),
                found: format_rational(&end.0[species]),
            }),
            None => Ok(()),
        }
    }
}
