//! Markov logic networks over FO²: representation, the (s, t, f) normal
//! form, lifted partition function and model counting, and a brute-force
//! oracle that works directly on ground atoms.

mod normal;
pub mod oracle;
mod partition;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::logic::{Formula, Language};

pub use normal::{normalize, NormalForm};
pub use oracle::{ground_log_weight, partition_function_oracle};
pub use partition::{fomc, partition_function, world_log_weight, world_probability};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Soft(f64),
    Hard,
}

impl Weight {
    pub fn is_hard(&self) -> bool {
        matches!(self, Weight::Hard)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub formula: Formula,
    pub weight: Weight,
}

impl Clause {
    pub fn soft(formula: Formula, weight: f64) -> Self {
        Self {
            formula,
            weight: Weight::Soft(weight),
        }
    }

    pub fn hard(formula: Formula) -> Self {
        Self {
            formula,
            weight: Weight::Hard,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mln {
    lang: Language,
    clauses: Vec<Clause>,
}

impl Mln {
    pub fn new(lang: Language, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            c.formula.validate(&lang)?;
            if let Weight::Soft(w) = c.weight {
                if !w.is_finite() {
                    return Err(Error::NonFiniteWeight(w));
                }
            }
        }
        Ok(Self { lang, clauses })
    }

    pub fn language(&self) -> &Language {
        &self.lang
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Soft weights in clause order.
    pub fn soft_weights(&self) -> Vec<f64> {
        self.clauses
            .iter()
            .filter_map(|c| match c.weight {
                Weight::Soft(w) => Some(w),
                Weight::Hard => None,
            })
            .collect()
    }

    /// Same formulas with the soft weights replaced in order.
    pub fn with_soft_weights(&self, theta: &[f64]) -> Result<Self> {
        let mut it = theta.iter();
        let clauses = self
            .clauses
            .iter()
            .map(|c| match c.weight {
                Weight::Soft(_) => Clause::soft(
                    c.formula.clone(),
                    *it.next().expect("theta shorter than soft clause count"),
                ),
                Weight::Hard => c.clone(),
            })
            .collect();
        Mln::new(self.lang.clone(), clauses)
    }

    /// The equivalent network in which every two-variable clause
    /// `(phi(x,y), a)` is replaced by `(phi(x,x), a)` and
    /// `(phi(x,y) & x != y, a)`. Hard clauses are split the same way.
    pub fn split(&self) -> Mln {
        let mut clauses = Vec::new();
        for c in &self.clauses {
            if c.formula.is_two_variable() {
                clauses.push(Clause {
                    formula: c.formula.diagonal(),
                    weight: c.weight,
                });
                clauses.push(Clause {
                    formula: Formula::and(c.formula.clone(), Formula::Distinct),
                    weight: c.weight,
                });
            } else {
                clauses.push(c.clone());
            }
        }
        Mln {
            lang: self.lang.clone(),
            clauses,
        }
    }
}
