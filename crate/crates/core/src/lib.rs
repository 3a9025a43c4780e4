//! Pseudo-spectral numerics on Müntz-type bases.
//!
//! The crate builds up from classical Jacobi polynomials to mapped
//! Gauss–Jacobi–Müntz quadrature, Jacobi–Müntz and Lagrange–Müntz basis
//! functions, Erdélyi–Kober fractional differentiation matrices (a direct
//! and a stable U·V⁻¹ construction), and collocation solvers for
//! fractional/classical ODEs and PDEs. A CLI front end re-runs the
//! benchmark experiments and emits machine-readable tables.

pub mod cli;
pub mod diffmat;
pub mod ek;
pub mod error;
pub mod experiments;
pub mod gamma;
pub mod interp;
pub mod jacobi;
pub mod jacobi_muntz;
pub mod linalg;
pub mod quadrature;
pub mod solvers;

pub use diffmat::{DmSide, FirstOrderFamily};
pub use error::{MuntzError, Result};
pub use interp::{GridFunction, InterpolantKind, MuntzNodeSet};
pub use jacobi::{GaussRule, JacobiParams};
pub use jacobi_muntz::{JmfKind, JmfSpec};
pub use linalg::DenseMatrix;
pub use quadrature::{MuntzBasisParams, QuadKind, QuadRule};
pub use solvers::SolverReport;
