//! Exact reachability analysis for rate-independent continuous chemical
//! reaction networks.
//!
//! * [`crn`]: networks, states, flux vectors and their exact semantics.
//! * [`parse`]: problem files, DIMACS CNF and witness formats.
//! * [`lp`]: exact rational simplex used to find positive flux solutions.
//! * [`reach`]: max-support constructions and the polynomial-time solver.
//! * [`subreach`]: exact search for reachability with few reactions.
//! * [`reduce`]: the 3SAT reduction and its helpers.
//! * [`gen`]: seeded instance generation.
//!
//! All arithmetic is on arbitrary-precision rationals; nothing in the crate
//! uses floating point.

pub mod cnf;
pub mod crn;
pub mod gen;
pub mod linalg;
pub mod lp;
pub mod parse;
pub mod rational;
pub mod reach;
pub mod reduce;
pub mod subreach;

pub use crn::{Crn, FluxVector, FluxVectorSequence, ReachWitness, Reaction, State, StoichMatrix};
pub use rational::Rational;
pub use reach::{solve_reach, SolveResult};
pub use subreach::{decide_subreach, min_reactions, SubReachResult};
