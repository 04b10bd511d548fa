//! Brute-force reference computations over explicit ground-atom truth
//! tables. Nothing here goes through 1-types, 2-tables or the normal form:
//! formulas are grounded and evaluated atom by atom, which is what makes
//! these usable as independent checks.

use alloc::vec::Vec;

use super::{Mln, Weight};
use crate::error::{Error, Result};
use crate::logic::{AtomArgs, Formula, Language, Var};
use crate::math::{exp, LogSumExp};
use crate::world::{GroundIndex, World};

/// Truth of `formula` with `x := c`, `y := d` in the world encoded by `mask`.
pub fn eval_ground(formula: &Formula, index: &GroundIndex, mask: u64, c: usize, d: usize) -> bool {
    let constant = |v: Var| if v == Var::X { c } else { d };
    formula.eval_with(
        &mut |a| {
            let pos = match a.args {
                AtomArgs::One(v) => index.unary(a.predicate, constant(v)),
                AtomArgs::Two(v, w) => index.binary(a.predicate, constant(v), constant(w)),
            };
            (mask >> pos) & 1 == 1
        },
        c != d,
    )
}

/// `sum_i a_i N(phi_i, world)` by direct grounding; `-inf` when a hard
/// clause has a false grounding. Two-variable clauses are grounded over all
/// of `Δ²`, single-variable clauses over `Δ`.
pub fn ground_log_weight(mln: &Mln, index: &GroundIndex, mask: u64) -> f64 {
    let n = index.n();
    let mut total = 0.0;
    for clause in mln.clauses() {
        let groundings: Vec<(usize, usize)> = if clause.formula.is_two_variable() {
            (0..n).flat_map(|c| (0..n).map(move |d| (c, d))).collect()
        } else {
            (0..n).map(|c| (c, c)).collect()
        };
        let mut true_count = 0u64;
        for (c, d) in groundings {
            if eval_ground(&clause.formula, index, mask, c, d) {
                true_count += 1;
            } else if clause.weight.is_hard() {
                return f64::NEG_INFINITY;
            }
        }
        if let Weight::Soft(a) = clause.weight {
            total += a * true_count as f64;
        }
    }
    total
}

fn checked_index(lang: &Language, n: usize, cap: usize) -> Result<GroundIndex> {
    let index = GroundIndex::new(lang, n);
    if index.len() > cap || index.len() >= 64 {
        return Err(Error::EnumerationCap {
            atoms: index.len(),
            cap,
        });
    }
    Ok(index)
}

/// Log weights of all `2^|G|` worlds, indexed by ground-atom bitmask.
pub fn all_log_weights(mln: &Mln, n: usize, cap: usize) -> Result<(GroundIndex, Vec<f64>)> {
    let index = checked_index(mln.language(), n, cap)?;
    let weights = (0..1u64 << index.len())
        .map(|mask| ground_log_weight(mln, &index, mask))
        .collect();
    Ok((index, weights))
}

/// `log Z(n)` summed over every world.
pub fn partition_function_oracle(mln: &Mln, n: usize, cap: usize) -> Result<f64> {
    let index = checked_index(mln.language(), n, cap)?;
    let mut acc = LogSumExp::new();
    for mask in 0..1u64 << index.len() {
        acc.push(ground_log_weight(mln, &index, mask));
    }
    Ok(acc.value())
}

/// Probability of every world, indexed by ground-atom bitmask.
pub fn distribution(mln: &Mln, n: usize, cap: usize) -> Result<(GroundIndex, Vec<f64>)> {
    let (index, weights) = all_log_weights(mln, n, cap)?;
    let mut acc = LogSumExp::new();
    for &w in &weights {
        acc.push(w);
    }
    let log_z = acc.value();
    if log_z == f64::NEG_INFINITY {
        return Err(Error::ZeroPartition(n));
    }
    Ok((index, weights.iter().map(|&w| exp(w - log_z)).collect()))
}

/// Number of worlds in which every grounding of `formula` over `Δ²` holds.
pub fn count_models(lang: &Language, formula: &Formula, n: usize, cap: usize) -> Result<u64> {
    let index = checked_index(lang, n, cap)?;
    let count = (0..1u64 << index.len())
        .filter(|&mask| (0..n).all(|c| (0..n).all(|d| eval_ground(formula, &index, mask, c, d))))
        .count();
    Ok(count as u64)
}

/// Bitmask of a [`World`] under `index`.
pub fn world_mask(lang: &Language, index: &GroundIndex, world: &World) -> u64 {
    world
        .true_atoms(lang)
        .iter()
        .fold(0u64, |m, a| m | 1 << index.position(a))
}

/// For each atom of the size-`m` index, its bit position in the size-`n`
/// index, so that `restrict_mask` maps an `n`-world onto its induced
/// sub-world on `0..m`.
pub fn restriction_map(small: &GroundIndex, large: &GroundIndex) -> Vec<usize> {
    small.atoms().iter().map(|a| large.position(a)).collect()
}

pub fn restrict_mask(mask: u64, map: &[usize]) -> u64 {
    map.iter().enumerate().fold(0u64, |m, (small, &large)| {
        m | ((mask >> large) & 1) << small
    })
}
