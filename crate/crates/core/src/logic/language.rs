use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Upper bound on `U + B`, the number of single-variable atoms.
pub const MAX_SINGLE_VARIABLE_ATOMS: usize = 16;
/// Upper bound on the number of binary predicates.
pub const MAX_BINARY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arity {
    Unary,
    Binary,
}

impl Arity {
    pub fn count(self) -> usize {
        match self {
            Arity::Unary => 1,
            Arity::Binary => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub name: String,
    pub arity: Arity,
}

/// A vocabulary of unary and binary predicates, sorted by name.
///
/// Atom order (and therefore every type index) is fixed by the name order.
/// The single-variable atoms are `P(x)` or `R(x,x)`, one per predicate, so
/// the bit of predicate `k` in a 1-type is bit `k`. The two-variable atoms
/// are `R(x,y)` then `R(y,x)` for each binary predicate in name order, so
/// the `r`-th binary predicate owns bits `2r` and `2r + 1` of a 2-table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Language {
    predicates: Vec<Predicate>,
    binary_rank: Vec<Option<usize>>,
    binary_count: usize,
}

impl Language {
    pub fn new<S: Into<String>>(decls: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut predicates = Vec::new();
        for (name, arity) in decls {
            let name = name.into();
            let arity = match arity {
                1 => Arity::Unary,
                2 => Arity::Binary,
                _ => return Err(Error::BadArity { name, arity }),
            };
            predicates.push(Predicate { name, arity });
        }
        predicates.sort_by(|a, b| a.name.cmp(&b.name));
        for w in predicates.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::DuplicatePredicate(w[0].name.clone()));
            }
        }
        let mut binary_rank = Vec::with_capacity(predicates.len());
        let mut binary_count = 0;
        for p in &predicates {
            if p.arity == Arity::Binary {
                binary_rank.push(Some(binary_count));
                binary_count += 1;
            } else {
                binary_rank.push(None);
            }
        }
        if predicates.len() > MAX_SINGLE_VARIABLE_ATOMS || binary_count > MAX_BINARY {
            return Err(Error::LanguageTooLarge {
                unary: predicates.len() - binary_count,
                binary: binary_count,
            });
        }
        Ok(Self {
            predicates,
            binary_rank,
            binary_count,
        })
    }

    pub fn empty() -> Self {
        Self {
            predicates: Vec::new(),
            binary_rank: Vec::new(),
            binary_count: 0,
        }
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn predicate(&self, index: usize) -> &Predicate {
        &self.predicates[index]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.predicates
            .binary_search_by(|p| p.name.as_str().cmp(name))
            .ok()
    }

    pub fn unary_count(&self) -> usize {
        self.predicates.len() - self.binary_count
    }

    pub fn binary_count(&self) -> usize {
        self.binary_count
    }

    /// Rank of a binary predicate among the binary predicates.
    pub fn binary_rank(&self, predicate: usize) -> Option<usize> {
        self.binary_rank[predicate]
    }

    /// Number of 1-types, `2^(U + B)`.
    pub fn u(&self) -> usize {
        1 << self.predicates.len()
    }

    /// Number of 2-tables, `2^(2B)`.
    pub fn b(&self) -> usize {
        1 << (2 * self.binary_count)
    }

    /// Swaps `x` and `y` in a 2-table.
    pub fn dual(&self, table: usize) -> usize {
        let mut out = 0;
        for r in 0..self.binary_count {
            let fwd = (table >> (2 * r)) & 1;
            let back = (table >> (2 * r + 1)) & 1;
            out |= back << (2 * r) | fwd << (2 * r + 1);
        }
        out
    }

    /// Ground atoms of a domain of size `n`: `U n + B n^2`.
    pub fn ground_atom_count(&self, n: usize) -> usize {
        self.unary_count() * n + self.binary_count * n * n
    }

    /// The single-variable atoms in index order, e.g. `["A(x)", "R(x,x)"]`.
    pub fn single_variable_atoms(&self) -> Vec<String> {
        self.predicates
            .iter()
            .map(|p| match p.arity {
                Arity::Unary => alloc::format!("{}(x)", p.name),
                Arity::Binary => alloc::format!("{}(x,x)", p.name),
            })
            .collect()
    }

    /// The two-variable atoms in index order.
    pub fn two_variable_atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in self.predicates.iter().filter(|p| p.arity == Arity::Binary) {
            out.push(alloc::format!("{}(x,y)", p.name));
            out.push(alloc::format!("{}(y,x)", p.name));
        }
        out
    }
}

impl fmt::Display for Language {
    /// Renders the declaration text accepted by [`crate::parse_language`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.predicates {
            writeln!(f, "predicate {}/{}", p.name, p.arity.count())?;
        }
        Ok(())
    }
}

impl Predicate {
    pub fn new(name: &str, arity: Arity) -> Self {
        Self {
            name: name.to_string(),
            arity,
        }
    }
}
