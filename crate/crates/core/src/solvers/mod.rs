//! Collocation solvers on the first- and second-kind cardinal bases:
//! linear multi-term fractional ODEs by a dense solve, nonlinear ones by
//! Newton, fractional PDEs by method of lines, and the viscous Burgers
//! benchmark with implicit trapezoidal stepping.

mod burgers;
mod linear_fde;
mod newton;
mod nonlinear_fde;
mod pde;
mod rk45;

pub use burgers::{solve_burgers, BurgersProblem};
pub use linear_fde::{solve_linear_fde, LinearFdeProblem};
pub use newton::{fd_jacobian, newton_solve, NewtonOutcome};
pub use nonlinear_fde::{solve_nonlinear_fde, NonlinearFdeProblem};
pub use pde::{solve_pde_mol, PdeProblem};
pub use rk45::{integrate_rk45, Rk45Options};

use crate::interp::GridFunction;

/// A scalar function of x used in problem definitions.
pub type ScalarFn = Box<dyn Fn(f64) -> f64>;
/// A scalar function of (x, t).
pub type SpaceTimeFn = Box<dyn Fn(f64, f64) -> f64>;

/// Solution samples plus diagnostics.
pub struct SolverReport {
    /// Nodal solution (final time for evolution problems).
    pub solution: GridFunction,
    /// Time-indexed nodal states for evolution problems.
    pub history: Vec<(f64, Vec<f64>)>,
    /// Max nodal error against a supplied exact solution.
    pub e_infty: Option<f64>,
    /// Max nodal error per stored time.
    pub e_infty_series: Vec<(f64, f64)>,
    /// Condition number of the assembled system (linear solves).
    pub cond: Option<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| {
        if x.is_finite() {
            m.max(x.abs())
        } else {
            f64::INFINITY
        }
    })
}
