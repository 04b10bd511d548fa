//! Maximum-likelihood learning: the RBM estimate is closed form, projective
//! MLNs are fitted under the constraint that all `f_ij` agree.

mod consistency;
mod fit;
mod objective;

pub use consistency::{
    subsample_consistency_experiment, ConsistencyReport, Estimate, ParamSummary,
};
pub use fit::{compare_with_rbm, fit_projective_mln, Dominance, FitOptions, FitResult};
pub use objective::{projective_log_likelihood, ConstraintEval, Derivatives, ProjectiveObjective};
