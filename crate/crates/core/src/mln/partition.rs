use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use super::NormalForm;
use crate::combinatorics::{ln_multinomial, multinomial, pair_count, Compositions};
use crate::error::{Error, Result};
use crate::logic::{n_ij, Formula, Language, LiftedInterpretation, Substitution};
use crate::math::{exp, ln_factorials, scaled_log, LogSumExp};
use crate::world::{stats, SufficientStats, World};

/// Unnormalized log weight `sum_i k_i log s_i + sum h^{ij}_l log t_ijl`.
pub fn world_log_weight(nf: &NormalForm, st: &SufficientStats) -> f64 {
    let mut total = 0.0;
    for (i, &k) in st.k.iter().enumerate() {
        total += scaled_log(k, nf.log_s(i));
    }
    let layout = nf.layout();
    for (i, j) in layout.pairs() {
        for l in 0..layout.b() {
            total += scaled_log(st.h[layout.cell(i, j, l)], nf.log_t(i, j, l));
        }
    }
    total
}

/// `log Z(n)` by summing over the 1-type compositions of `n`:
/// `Z(n) = sum_k C(n; k) prod_i s_i^{k_i} prod_{i<=j} f_ij^{k(i,j)}`.
pub fn partition_function(nf: &NormalForm, n: usize) -> f64 {
    let u = nf.u();
    let ln_fact = ln_factorials(n);
    let mut acc = LogSumExp::new();
    Compositions::for_each(n, u, |k| {
        let mut term = ln_multinomial(k, &ln_fact);
        for (i, &ki) in k.iter().enumerate() {
            if ki > 0 {
                term += ki as f64 * nf.log_s(i);
            }
        }
        for i in 0..u {
            if k[i] == 0 {
                continue;
            }
            for j in i..u {
                term += scaled_log(pair_count(k, i, j), nf.log_f(i, j));
            }
        }
        acc.push(term);
    });
    acc.value()
}

/// `P(world) = exp(log weight - log Z(n))`.
pub fn world_probability(nf: &NormalForm, world: &World) -> Result<f64> {
    let log_z = partition_function(nf, world.n());
    if log_z == f64::NEG_INFINITY {
        return Err(Error::ZeroPartition(world.n()));
    }
    let st = stats(nf.language(), world);
    Ok(exp(world_log_weight(nf, &st) - log_z))
}

/// Exact number of models of `forall x y. phi(x, y)` over a domain of size
/// `n`, by summing over 1-type compositions with per-pair extension counts
/// `n_ij`. A 1-type whose diagonal instance `phi(x, x)` fails cannot occur.
pub fn fomc(lang: &Language, formula: &Formula, n: usize) -> Result<BigUint> {
    formula.validate(lang)?;
    let u = lang.u();
    let admissible: Vec<bool> = (0..u)
        .map(|i| {
            formula.eval(
                &LiftedInterpretation::from_one_type(i),
                Substitution::DIAGONAL_X,
            )
        })
        .collect();
    let mut counts = alloc::vec![0u64; u * u];
    for i in 0..u {
        for j in i..u {
            let c = n_ij(lang, formula, i, j);
            counts[i * u + j] = c;
            counts[j * u + i] = c;
        }
    }
    let mut total = BigUint::zero();
    Compositions::for_each(n, u, |k| {
        if k.iter().zip(&admissible).any(|(&ki, &ok)| ki > 0 && !ok) {
            return;
        }
        let mut term = multinomial(k);
        for i in 0..u {
            for j in i..u {
                let e = pair_count(k, i, j);
                if e == 0 {
                    continue;
                }
                let c = counts[i * u + j];
                if c == 0 {
                    return;
                }
                if c != 1 {
                    term *= BigUint::from(c).pow(e as u32);
                }
            }
        }
        total += term;
    });
    Ok(total)
}
