use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::objective::ProjectiveObjective;
use crate::error::{Error, Result};
use crate::mln::Mln;
use crate::rbm::{fit_rbm, rbm_log_prob};
use crate::world::{stats, SufficientStats, World};

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Gradient-norm tolerance for each penalty stage.
    pub gtol: f64,
    /// Required `max |log f_ij - log f_rr|` at the end.
    pub ctol: f64,
    /// Penalty weights, solved in order.
    pub penalties: Vec<f64>,
    /// Extra multiplier rounds at the last penalty if `ctol` is not met.
    pub extra_rounds: usize,
    /// Newton iterations allowed per stage.
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            gtol: 1e-8,
            ctol: 1e-6,
            penalties: vec![1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6],
            extra_rounds: 50,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub theta: Vec<f64>,
    /// The projective log-likelihood at `theta`.
    pub log_likelihood: f64,
    pub constraint_residual: f64,
    /// Residual after each stage.
    pub stage_residuals: Vec<f64>,
    /// Gradient norm of the last stage objective at `theta`.
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// The stage objective
/// `L(theta) - sum_c mu_c g_c(theta) - lambda sum_c g_c(theta)^2`.
struct Stage<'a> {
    objective: &'a ProjectiveObjective,
    st: &'a SufficientStats,
    mu: &'a [f64],
    lambda: f64,
}

impl Stage<'_> {
    fn value(&self, theta: &DVector<f64>) -> f64 {
        let l = self.objective.evaluate(theta, self.st, false).value;
        let g = self.objective.constraints(theta, false);
        l - g
            .values
            .iter()
            .zip(self.mu)
            .map(|(g, mu)| mu * g + self.lambda * g * g)
            .sum::<f64>()
    }

    fn derivatives(&self, theta: &DVector<f64>) -> (f64, DVector<f64>, DMatrix<f64>) {
        let d = self.objective.evaluate(theta, self.st, true);
        let c = self.objective.constraints(theta, true);
        let mut value = d.value;
        let mut gradient = d.gradient;
        let mut hessian = d.hessian.unwrap();
        for (k, &g) in c.values.iter().enumerate() {
            let coef = self.mu[k] + 2.0 * self.lambda * g;
            value -= self.mu[k] * g + self.lambda * g * g;
            gradient.axpy(-coef, &c.gradients[k], 1.0);
            hessian -= &c.hessians[k] * coef;
            hessian.ger(-2.0 * self.lambda, &c.gradients[k], &c.gradients[k], 1.0);
        }
        (value, gradient, hessian)
    }

    /// Damped Newton ascent with a backtracking line search. Returns the
    /// number of iterations and the final gradient norm.
    fn maximize(&self, theta: &mut DVector<f64>, gtol: f64, max_iterations: usize) -> (usize, f64) {
        let mut iterations = 0;
        loop {
            let (value, gradient, hessian) = self.derivatives(theta);
            let norm = gradient.norm();
            if norm <= gtol || iterations >= max_iterations {
                return (iterations, norm);
            }
            iterations += 1;
            let step = newton_direction(&hessian, &gradient);
            let slope = gradient.dot(&step);
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let candidate = &*theta + &step * alpha;
                let v = self.value(&candidate);
                let sufficient = v >= value + 1e-4 * alpha * slope;
                // Near the optimum the value can stop changing in floating
                // point while the gradient still shrinks.
                let flat = alpha == 1.0
                    && v >= value - 1e-12 * (1.0 + value.abs())
                    && self.derivatives(&candidate).1.norm() < norm;
                if v.is_finite() && (sufficient || flat) {
                    *theta = candidate;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                return (iterations, norm);
            }
        }
    }
}

/// Solves `(-H + tau I) d = g`, raising `tau` until the matrix is positive
/// definite.
fn newton_direction(hessian: &DMatrix<f64>, gradient: &DVector<f64>) -> DVector<f64> {
    let q = gradient.len();
    let scale = hessian.diagonal().amax().max(1.0);
    let mut tau = 0.0;
    loop {
        let m = -hessian + DMatrix::identity(q, q) * tau;
        if let Some(chol) = m.cholesky() {
            return chol.solve(gradient);
        }
        tau = if tau == 0.0 {
            1e-10 * scale
        } else {
            tau * 10.0
        };
        if tau > 1e12 * scale {
            return gradient.clone();
        }
    }
}

/// Maximizes the projective log-likelihood subject to `f_ij = f_rr` for all
/// admissible `i, j`.
///
/// Each penalty `lambda` from the schedule defines a smooth stage objective
/// with a quadratic penalty and a multiplier term; after each stage the
/// multipliers move by `2 lambda g`. Stages are solved by damped Newton
/// iterations with exact Hessians. The starting point is the structure's own
/// weights.
pub fn fit_projective_mln(structure: &Mln, world: &World, opts: &FitOptions) -> Result<FitResult> {
    let objective = ProjectiveObjective::new(structure)?;
    let st = stats(structure.language(), world);
    let mut theta = DVector::from_vec(structure.soft_weights());
    if objective.evaluate(&theta, &st, false).value == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(
            "world violates a hard clause of the structure".into(),
        ));
    }
    let mut mu = vec![0.0; objective.constraint_count()];
    let mut iterations = 0;
    let mut gradient_norm = f64::INFINITY;
    let mut stage_residuals = Vec::new();
    let mut schedule: Vec<f64> = opts.penalties.clone();
    let last = schedule.last().copied().unwrap_or(1.0);
    schedule.extend(core::iter::repeat_n(last, opts.extra_rounds));
    let stages = opts.penalties.len();
    let mut converged = false;
    for (k, &lambda) in schedule.iter().enumerate() {
        let stage = Stage {
            objective: &objective,
            st: &st,
            mu: &mu,
            lambda,
        };
        let (its, norm) = stage.maximize(&mut theta, opts.gtol, opts.max_iterations);
        iterations += its;
        gradient_norm = norm;
        let g = objective.constraints(&theta, false).values;
        let residual = g.iter().fold(0.0, |m: f64, g| m.max(g.abs()));
        if k < stages {
            stage_residuals.push(residual);
        }
        if k + 1 >= stages && residual <= opts.ctol {
            converged = norm <= opts.gtol;
            break;
        }
        for (m, g) in mu.iter_mut().zip(&g) {
            *m += 2.0 * lambda * g;
        }
    }
    let theta: Vec<f64> = theta.iter().copied().collect();
    let dv = DVector::from_column_slice(&theta);
    Ok(FitResult {
        log_likelihood: objective.evaluate(&dv, &st, false).value,
        constraint_residual: objective.residual(&dv),
        theta,
        stage_residuals,
        gradient_norm,
        iterations,
        converged,
    })
}

/// Log-likelihoods of the RBM maximum-likelihood estimate and of the best
/// projective MLN with a given structure, on the same world.
#[derive(Debug, Clone, PartialEq)]
pub struct Dominance {
    pub rbm: f64,
    pub projective: f64,
    pub fit: FitResult,
}

impl Dominance {
    /// `L_RBM >= L_proj - 1e-6`.
    pub fn holds(&self) -> bool {
        self.rbm >= self.projective - 1e-6
    }
}

pub fn compare_with_rbm(structure: &Mln, world: &World, opts: &FitOptions) -> Result<Dominance> {
    let fit = fit_projective_mln(structure, world, opts)?;
    if !fit.converged {
        return Err(Error::NotConverged {
            iterations: fit.iterations,
        });
    }
    let lang = structure.language();
    Ok(Dominance {
        rbm: rbm_log_prob(&fit_rbm(lang, world), world),
        projective: fit.log_likelihood,
        fit,
    })
}
