//! Single-qubit dynamics under `H0 = σz` and a piecewise-constant control.

pub mod matrix;
pub mod objective;
pub mod propagator;
pub mod special;

pub use matrix::Mat2;
pub use objective::{
    analytic_gradient, central_difference, finite_difference_gradient, gradient_kernel, objective,
    objective_at_zero, GateProblem,
};
pub use propagator::{
    make_phase_gate, propagate, propagate_to, propagate_total, segment_propagator, sinc, PhaseGate,
    PiecewiseControl, Propagation, SystemConfig,
};
pub use special::{special_control_f0, special_time, special_time_t0, two_segment_trace};
