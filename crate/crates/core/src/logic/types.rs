use alloc::vec::Vec;

use super::formula::{Atom, Formula, Substitution, Var};
use super::language::{Arity, Language};

/// A truth assignment to every first-order atom over `{x, y}`.
///
/// Stored as four bitmasks indexed by predicate position: the
/// single-variable atoms of `x` and of `y` (`P(x)`, `R(x,x)` and `P(y)`,
/// `R(y,y)`), and the cross atoms `R(x,y)` and `R(y,x)`. Bits of unary
/// predicates in the cross masks are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LiftedInterpretation {
    pub x: u32,
    pub y: u32,
    pub xy: u32,
    pub yx: u32,
}

impl LiftedInterpretation {
    /// The interpretation determined by the 2-type `i(x) & j(y) & l(x,y)`.
    pub fn from_types(lang: &Language, i: usize, j: usize, l: usize) -> Self {
        let mut xy = 0u32;
        let mut yx = 0u32;
        for (p, pred) in lang.predicates().iter().enumerate() {
            if pred.arity == Arity::Binary {
                let r = lang.binary_rank(p).unwrap();
                xy |= (((l >> (2 * r)) & 1) as u32) << p;
                yx |= (((l >> (2 * r + 1)) & 1) as u32) << p;
            }
        }
        Self {
            x: i as u32,
            y: j as u32,
            xy,
            yx,
        }
    }

    /// The interpretation in which `x` has 1-type `i`; `y` mirrors `x`.
    pub fn from_one_type(i: usize) -> Self {
        Self {
            x: i as u32,
            y: i as u32,
            xy: 0,
            yx: 0,
        }
    }

    pub(crate) fn single(&self, v: Var, predicate: usize) -> bool {
        let bits = match v {
            Var::X => self.x,
            Var::Y => self.y,
        };
        (bits >> predicate) & 1 == 1
    }

    pub(crate) fn cross(&self, predicate: usize, forward: bool) -> bool {
        let bits = if forward { self.xy } else { self.yx };
        (bits >> predicate) & 1 == 1
    }
}

/// A 1-type, identified by the bits of its single-variable atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneType {
    /// Zero-based; equal to the truth vector read as a binary number with the
    /// first atom least significant.
    pub index: usize,
}

impl OneType {
    pub fn truth(&self, atom: usize) -> bool {
        (self.index >> atom) & 1 == 1
    }

    pub fn truth_bits(&self, lang: &Language) -> Vec<bool> {
        (0..lang.predicates().len())
            .map(|a| self.truth(a))
            .collect()
    }
}

/// A 2-table and its dual (the table with `x` and `y` exchanged).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoTable {
    pub index: usize,
    pub dual: usize,
}

impl TwoTable {
    pub fn truth(&self, atom: usize) -> bool {
        (self.index >> atom) & 1 == 1
    }

    pub fn truth_bits(&self, lang: &Language) -> Vec<bool> {
        (0..2 * lang.binary_count())
            .map(|a| self.truth(a))
            .collect()
    }

    pub fn is_self_dual(&self) -> bool {
        self.index == self.dual
    }
}

pub fn enumerate_one_types(lang: &Language) -> Vec<OneType> {
    (0..lang.u()).map(|index| OneType { index }).collect()
}

pub fn enumerate_two_tables(lang: &Language) -> Vec<TwoTable> {
    (0..lang.b())
        .map(|index| TwoTable {
            index,
            dual: lang.dual(index),
        })
        .collect()
}

/// The conjunction of literals describing 1-type `i` of variable `v`, or
/// `None` for the empty language.
pub fn one_type_formula(lang: &Language, i: usize, v: Var) -> Option<Formula> {
    Formula::conjunction(lang.predicates().iter().enumerate().map(|(p, pred)| {
        let atom = match pred.arity {
            Arity::Unary => Atom::unary(p, v),
            Arity::Binary => Atom::binary(p, v, v),
        };
        literal(atom, (i >> p) & 1 == 1)
    }))
}

/// The conjunction of literals describing 2-table `l` of `(x, y)`, or `None`
/// when there are no binary predicates.
pub fn two_table_formula(lang: &Language, l: usize) -> Option<Formula> {
    let mut literals = Vec::new();
    for (p, pred) in lang.predicates().iter().enumerate() {
        if pred.arity == Arity::Binary {
            let r = lang.binary_rank(p).unwrap();
            literals.push(literal(
                Atom::binary(p, Var::X, Var::Y),
                (l >> (2 * r)) & 1 == 1,
            ));
            literals.push(literal(
                Atom::binary(p, Var::Y, Var::X),
                (l >> (2 * r + 1)) & 1 == 1,
            ));
        }
    }
    Formula::conjunction(literals)
}

fn literal(atom: Atom, positive: bool) -> Formula {
    if positive {
        Formula::atom(atom)
    } else {
        Formula::not(Formula::atom(atom))
    }
}

/// Classical evaluation of a quantifier-free formula under `tau`. The marker
/// `x != y` is taken as satisfied; to evaluate `phi(x, x)` use
/// [`Formula::eval`] with [`Substitution::DIAGONAL_X`].
pub fn evaluate_lifted(formula: &Formula, tau: &LiftedInterpretation) -> bool {
    formula.eval(tau, Substitution::IDENTITY)
}

/// Whether the 2-type `ijl` satisfies `phi({x,y})`, i.e.
/// `phi(x,x) & phi(x,y) & phi(y,x) & phi(y,y)`. The 2-type fixes every atom
/// so the count is 0 or 1.
pub fn n_ijl(lang: &Language, formula: &Formula, i: usize, j: usize, l: usize) -> u8 {
    let tau = LiftedInterpretation::from_types(lang, i, j, l);
    let all = [
        Substitution::DIAGONAL_X,
        Substitution::IDENTITY,
        Substitution::SWAP,
        Substitution::DIAGONAL_Y,
    ];
    all.iter().all(|&sub| formula.eval(&tau, sub)) as u8
}

/// `sum_l n_ijl`.
pub fn n_ij(lang: &Language, formula: &Formula, i: usize, j: usize) -> u64 {
    (0..lang.b())
        .map(|l| n_ijl(lang, formula, i, j, l) as u64)
        .sum()
}
