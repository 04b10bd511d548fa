//! Deciding projectivity from the normal form, checking it semantically by
//! marginalizing brute-force distributions, and σ-determinacy.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::logic::Atom;
use crate::mln::oracle::{distribution, restrict_mask, restriction_map};
use crate::mln::{Mln, NormalForm};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Outcome of [`check_projective`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivityVerdict {
    pub projective: bool,
    /// `f_ij` for all `i, j` (row-major, `u x u`).
    pub f: Vec<f64>,
    pub u: usize,
    /// `log S`, the shared value of `log f_ij`, when projective.
    pub log_common: Option<f64>,
    /// `max - min` of `log f_ij` over admissible pairs.
    pub spread: f64,
    pub tolerance: f64,
}

impl ProjectivityVerdict {
    pub fn common_value(&self) -> Option<f64> {
        self.log_common.map(crate::math::exp)
    }

    pub fn f(&self, i: usize, j: usize) -> f64 {
        self.f[i * self.u + j]
    }
}

/// An MLN is projective iff `f_ij` takes one value over all pairs of
/// admissible 1-types. The comparison is done on `log f`.
pub fn check_projective(nf: &NormalForm, tol: f64) -> Result<ProjectivityVerdict> {
    let admissible: Vec<usize> = nf.admissible_types().collect();
    if admissible.is_empty() {
        return Err(Error::NoAdmissibleType);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, &i) in admissible.iter().enumerate() {
        for &j in &admissible[a..] {
            let v = nf.log_f(i, j);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let spread = if lo == hi {
        0.0
    } else if lo == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        hi - lo
    };
    let projective = spread <= tol;
    let u = nf.u();
    let f = (0..u * u).map(|c| nf.f(c / u, c % u)).collect();
    Ok(ProjectivityVerdict {
        projective,
        f,
        u,
        log_common: projective.then_some(if lo == hi { lo } else { (lo + hi) / 2.0 }),
        spread,
        tolerance: tol,
    })
}

/// `max_w' |P^(n) restricted to [m] (w') - P^(m)(w')|`, both distributions by
/// exhaustive enumeration. The restriction is to the first `m` constants,
/// which by exchangeability is as good as any `m`-subset.
pub fn verify_marginal_consistency(mln: &Mln, n: usize, m: usize, cap: usize) -> Result<f64> {
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(alloc::format!(
            "need 0 < m < n, got m={m}, n={n}"
        )));
    }
    let (large, p_n) = distribution(mln, n, cap)?;
    let (small, p_m) = distribution(mln, m, cap)?;
    let map = restriction_map(&small, &large);
    let mut marginal = vec![0.0; p_m.len()];
    for (mask, &p) in p_n.iter().enumerate() {
        marginal[restrict_mask(mask as u64, &map) as usize] += p;
    }
    Ok(marginal
        .iter()
        .zip(&p_m)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// First clause whose atoms do not all use the same variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaWitness {
    pub clause: usize,
    pub first: Atom,
    pub second: Atom,
}

/// `Ok(())` when every clause is σ-determinate: all of its atoms mention
/// exactly the same variables. Distinctness markers are not atoms.
pub fn is_sigma_determinate(mln: &Mln) -> core::result::Result<(), SigmaWitness> {
    for (c, clause) in mln.clauses().iter().enumerate() {
        let atoms = clause.formula.atoms();
        if let Some(first) = atoms.first() {
            let vars = first.variables();
            if let Some(other) = atoms.iter().find(|a| a.variables() != vars) {
                return Err(SigmaWitness {
                    clause: c,
                    first: *first,
                    second: *other,
                });
            }
        }
    }
    Ok(())
}

/// Whether `t_ijl` depends on `l` alone across all pairs of admissible
/// 1-types (log-space tolerance `1e-12`; zeros only match zeros).
pub fn check_sigma_consequence(nf: &NormalForm) -> bool {
    let admissible: Vec<usize> = nf.admissible_types().collect();
    let Some(&first) = admissible.first() else {
        return true;
    };
    (0..nf.b()).all(|l| {
        let reference = nf.log_t(first, first, l);
        admissible.iter().enumerate().all(|(a, &i)| {
            admissible[a..].iter().all(|&j| {
                let v = nf.log_t(i, j, l);
                v == reference || (v - reference).abs() <= 1e-12
            })
        })
    })
}
