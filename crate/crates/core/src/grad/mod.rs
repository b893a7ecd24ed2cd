//! Gradient estimators for circuit outputs.
//!
//! All estimators return the Jacobian of the circuit outputs (one row per
//! observable) with respect to the trainable parameters, together with the
//! number of circuit evaluations spent. The loss chain rule is applied by
//! the training loop.

mod estimators;
mod guided;
mod jacobian;

pub use estimators::{
    finite_diff_jacobian, param_shift_jacobian, spsa_jacobian, spsa_jacobian_directed, SpsaConfig, SHIFT,
};
pub use guided::{avg_ps_norm, make_schedule, suppress, GuidedSchedule};
pub use jacobian::Jacobian;
