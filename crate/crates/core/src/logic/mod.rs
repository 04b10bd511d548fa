//! The FO² front-end: vocabularies, quantifier-free formulas over `x` and
//! `y`, and the 1-type / 2-table enumeration everything else is indexed by.

mod formula;
mod language;
mod parser;
mod types;

pub use formula::{Atom, AtomArgs, Formula, FormulaDisplay, Substitution, Var, VarSet};
pub use language::{Arity, Language, Predicate, MAX_BINARY, MAX_SINGLE_VARIABLE_ATOMS};
pub use parser::{parse_formula, parse_language, parse_predicate_decl};
pub use types::{
    enumerate_one_types, enumerate_two_tables, evaluate_lifted, n_ij, n_ijl, one_type_formula,
    two_table_formula, LiftedInterpretation, OneType, TwoTable,
};
