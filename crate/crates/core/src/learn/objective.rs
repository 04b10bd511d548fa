use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::combinatorics::choose2;
use crate::error::{Error, Result};
use crate::math::{exp, LogSumExp};
use crate::mln::{normalize, Mln};
use crate::world::SufficientStats;

/// A soft-max block: log values `rows · theta` over a fixed set of
/// indicator rows.
#[derive(Debug, Clone)]
struct Block {
    rows: Vec<DVector<f64>>,
}

/// Log-sum-exp of a block with its first two derivatives.
struct BlockEval {
    value: f64,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl Block {
    fn eval(&self, theta: &DVector<f64>, hessian: bool) -> BlockEval {
        let q = theta.len();
        let logs: Vec<f64> = self.rows.iter().map(|r| r.dot(theta)).collect();
        let mut acc = LogSumExp::new();
        for &v in &logs {
            acc.push(v);
        }
        let value = acc.value();
        let mut mean = DVector::zeros(q);
        let mut second = DMatrix::zeros(if hessian { q } else { 0 }, if hessian { q } else { 0 });
        for (r, &v) in self.rows.iter().zip(&logs) {
            let weight = exp(v - value);
            mean.axpy(weight, r, 1.0);
            if hessian {
                second.ger(weight, r, r, 1.0);
            }
        }
        let cov = if hessian {
            second - &mean * mean.transpose()
        } else {
            second
        };
        BlockEval { value, mean, cov }
    }
}

/// The projective log-likelihood of a structure as a function of its soft
/// weights:
///
/// `sum_i k_i log s_i + sum h^{ij}_l log t_ijl - n log sum_i s_i
///  - C(n,2) log f_rr`
///
/// with `r` the first admissible 1-type. Each `log s_i` and `log t_ijl` is
/// linear in `theta` with integer coefficients, which is what makes exact
/// derivatives cheap. Constraints `g_ij = log f_ij - log f_rr` range over
/// admissible pairs `i <= j` other than `(r, r)`.
#[derive(Debug, Clone)]
pub struct ProjectiveObjective {
    structure: Mln,
    dim: usize,
    admissible1: Vec<bool>,
    admissible2: Vec<bool>,
    /// `d log s_i / d theta` for every 1-type.
    s_rows: Vec<DVector<f64>>,
    /// `d log t_c / d theta` for every cell.
    t_rows: Vec<DVector<f64>>,
    s_block: Block,
    reference: Block,
    constraints: Vec<Block>,
}

/// Value, gradient and (optionally) Hessian of a scalar function of `theta`.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: Option<DMatrix<f64>>,
}

/// The constraint values `g` with their gradients and Hessians.
#[derive(Debug, Clone)]
pub struct ConstraintEval {
    pub values: Vec<f64>,
    pub gradients: Vec<DVector<f64>>,
    pub hessians: Vec<DMatrix<f64>>,
}

impl ProjectiveObjective {
    pub fn new(structure: &Mln) -> Result<Self> {
        let dim = structure.soft_weights().len();
        if dim == 0 {
            return Err(Error::NoFreeWeight);
        }
        let base = normalize(&structure.with_soft_weights(&vec![0.0; dim])?);
        let unit: Vec<_> = (0..dim)
            .map(|q| {
                let mut e = vec![0.0; dim];
                e[q] = 1.0;
                structure.with_soft_weights(&e).map(|m| normalize(&m))
            })
            .collect::<Result<_>>()?;
        let layout = base.layout();
        let u = base.u();
        let admissible1: Vec<bool> = (0..u).map(|i| base.is_admissible(i)).collect();
        let admissible2: Vec<bool> = base.log_t_cells().iter().map(|v| v.is_finite()).collect();
        let s_rows: Vec<DVector<f64>> = (0..u)
            .map(|i| {
                DVector::from_iterator(
                    dim,
                    unit.iter()
                        .map(|nf| if admissible1[i] { nf.log_s(i) } else { 0.0 }),
                )
            })
            .collect();
        let t_rows: Vec<DVector<f64>> = (0..layout.len())
            .map(|c| {
                DVector::from_iterator(
                    dim,
                    unit.iter().map(|nf| {
                        if admissible2[c] {
                            nf.log_t_cells()[c]
                        } else {
                            0.0
                        }
                    }),
                )
            })
            .collect();
        let types: Vec<usize> = (0..u).filter(|&i| admissible1[i]).collect();
        let Some(&r) = types.first() else {
            return Err(Error::NoAdmissibleType);
        };
        let s_block = Block {
            rows: types.iter().map(|&i| s_rows[i].clone()).collect(),
        };
        let pair_block = |i: usize, j: usize| -> Result<Block> {
            let rows: Vec<_> = (0..layout.b())
                .map(|l| layout.cell(i, j, l))
                .filter(|&c| admissible2[c])
                .map(|c| t_rows[c].clone())
                .collect();
            if rows.is_empty() {
                return Err(Error::NotProjective {
                    spread: f64::INFINITY,
                });
            }
            Ok(Block { rows })
        };
        let reference = pair_block(r, r)?;
        let mut constraints = Vec::new();
        for (a, &i) in types.iter().enumerate() {
            for &j in &types[a..] {
                if (i, j) != (r, r) {
                    constraints.push(pair_block(i, j)?);
                }
            }
        }
        Ok(Self {
            structure: structure.clone(),
            dim,
            admissible1,
            admissible2,
            s_rows,
            t_rows,
            s_block,
            reference,
            constraints,
        })
    }

    pub fn structure(&self) -> &Mln {
        &self.structure
    }

    /// Number of free weights.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// `sum_i k_i d log s_i + sum_c h_c d log t_c`, or `None` when the world
    /// realizes a type the structure's hard clauses forbid.
    fn data_term(&self, st: &SufficientStats) -> Option<DVector<f64>> {
        let mut c = DVector::zeros(self.dim);
        for (i, &k) in st.k.iter().enumerate() {
            if k > 0 {
                if !self.admissible1[i] {
                    return None;
                }
                c.axpy(k as f64, &self.s_rows[i], 1.0);
            }
        }
        for (cell, &h) in st.h.iter().enumerate() {
            if h > 0 {
                if !self.admissible2[cell] {
                    return None;
                }
                c.axpy(h as f64, &self.t_rows[cell], 1.0);
            }
        }
        Some(c)
    }

    /// The log-likelihood and its derivatives. Worlds excluded by a hard
    /// clause give `-inf` with a zero gradient.
    pub fn evaluate(
        &self,
        theta: &DVector<f64>,
        st: &SufficientStats,
        hessian: bool,
    ) -> Derivatives {
        let Some(data) = self.data_term(st) else {
            return Derivatives {
                value: f64::NEG_INFINITY,
                gradient: DVector::zeros(self.dim),
                hessian: hessian.then(|| DMatrix::zeros(self.dim, self.dim)),
            };
        };
        let n = st.n as f64;
        let pairs = choose2(st.n) as f64;
        let s = self.s_block.eval(theta, hessian);
        let f = self.reference.eval(theta, hessian);
        let value = data.dot(theta) - n * s.value - if pairs > 0.0 { pairs * f.value } else { 0.0 };
        let gradient = &data - &s.mean * n - &f.mean * pairs;
        let hessian = hessian.then(|| -(s.cov * n) - f.cov * pairs);
        Derivatives {
            value,
            gradient,
            hessian,
        }
    }

    pub fn constraints(&self, theta: &DVector<f64>, hessian: bool) -> ConstraintEval {
        let f = self.reference.eval(theta, hessian);
        let mut out = ConstraintEval {
            values: Vec::with_capacity(self.constraints.len()),
            gradients: Vec::with_capacity(self.constraints.len()),
            hessians: Vec::new(),
        };
        for block in &self.constraints {
            let g = block.eval(theta, hessian);
            out.values.push(g.value - f.value);
            out.gradients.push(&g.mean - &f.mean);
            if hessian {
                out.hessians.push(&g.cov - &f.cov);
            }
        }
        out
    }

    /// `max |log f_ij - log f_rr|` over admissible pairs.
    pub fn residual(&self, theta: &DVector<f64>) -> f64 {
        self.constraints(theta, false)
            .values
            .iter()
            .fold(0.0, |m, g| m.max(g.abs()))
    }
}

/// Value and gradient of the projective log-likelihood at `theta`.
pub fn projective_log_likelihood(
    structure: &Mln,
    theta: &[f64],
    st: &SufficientStats,
) -> Result<(f64, Vec<f64>)> {
    let objective = ProjectiveObjective::new(structure)?;
    if theta.len() != objective.dim() {
        return Err(Error::InvalidArgument(alloc::format!(
            "expected {} weights, got {}",
            objective.dim(),
            theta.len()
        )));
    }
    let d = objective.evaluate(&DVector::from_column_slice(theta), st, false);
    Ok((d.value, d.gradient.iter().copied().collect()))
}
