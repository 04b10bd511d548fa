//! Lifted inference, projectivity analysis and learning for Markov logic
//! networks in the two-variable fragment.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the `projmln` companion crate.
//!
//! Indices of 1-types, 2-tables and domain constants are zero-based
//! throughout the API. Text formats are one-based.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod error;
pub mod layout;
pub mod learn;
pub mod logic;
pub mod math;
pub mod mln;
pub mod projectivity;
pub mod rbm;
pub mod world;

pub use error::{Error, Result};
pub use layout::PairLayout;
pub use learn::{
    compare_with_rbm, fit_projective_mln, projective_log_likelihood,
    subsample_consistency_experiment, ConsistencyReport, Dominance, FitOptions, FitResult,
};
pub use logic::{
    enumerate_one_types, enumerate_two_tables, evaluate_lifted, n_ij, n_ijl, parse_formula,
    parse_language, Atom, AtomArgs, Formula, Language, LiftedInterpretation, OneType, Predicate,
    Substitution, TwoTable, Var,
};
pub use mln::{
    fomc, normalize, partition_function, partition_function_oracle, world_log_weight,
    world_probability, Clause, Mln, NormalForm, Weight,
};
pub use projectivity::{
    check_projective, check_sigma_consequence, is_sigma_determinate, verify_marginal_consistency,
    ProjectivityVerdict, SigmaWitness,
};
pub use rbm::{
    fit_rbm, mln_to_rbm, rbm_log_prob, rbm_to_mln, sample, validate, ParamId, RbmParams,
    RbmViolation,
};
pub use world::{
    enumerate_worlds, restrict, stats, world_from_atoms, GroundArgs, GroundAtom, PairType,
    SufficientStats, World, DEFAULT_ATOM_CAP,
};
