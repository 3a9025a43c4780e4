//! Nonlinear Erdélyi–Kober fractional differential equations
//!
//!   D^(μ_l) y = F(x, y, D^(μ_1) y, …, D^(μ_(l-1)) y),  y^(r)(0) = 0,
//!
//! collocated on the first-kind cardinal basis and solved by damped
//! Newton with a forward-difference Jacobian.

use super::linear_fde::validate_initial_condition_exponent;
use super::{newton_solve, SolverReport};
use crate::diffmat::{ek_dm_stable, DmSide};
use crate::error::{MuntzError, Result};
use crate::interp::{GridFunction, MuntzNodeSet};
use crate::quadrature::MuntzBasisParams;

pub struct NonlinearFdeProblem {
    /// Fractional orders μ_1 < … < μ_l; the last is the leading order.
    pub orders: Vec<f64>,
    /// Right-hand side F(x, y, lower-order derivatives of y at x).
    pub f: Box<dyn Fn(f64, f64, &[f64]) -> f64>,
    pub basis: MuntzBasisParams,
    pub n: usize,
    pub exact: Option<Box<dyn Fn(f64) -> f64>>,
    pub tol: f64,
    pub max_iter: usize,
}

pub fn solve_nonlinear_fde(p: &NonlinearFdeProblem) -> Result<SolverReport> {
    if p.orders.is_empty() {
        return Err(MuntzError::InvalidParam("no fractional orders given".into()));
    }
    if p.orders.windows(2).any(|w| w[0] >= w[1]) || p.orders.iter().any(|&m| m <= 0.0) {
        return Err(MuntzError::InvalidParam(
            "orders must be positive and strictly increasing".into(),
        ));
    }
    let max_order = *p.orders.last().unwrap();
    validate_initial_condition_exponent(&p.basis, max_order)?;

    let ns = MuntzNodeSet::new(p.n, p.basis)?;
    let m = p.n + 1;
    let d_lead = ek_dm_stable(DmSide::Left, &ns, max_order)?;
    let lower: Vec<_> = p.orders[..p.orders.len() - 1]
        .iter()
        .map(|&mu| ek_dm_stable(DmSide::Left, &ns, mu))
        .collect::<Result<_>>()?;

    let nodes = ns.nodes().to_vec();
    let residual = move |y: &[f64]| -> Vec<f64> {
        let lead = d_lead.matvec(y);
        let lows: Vec<Vec<f64>> = lower.iter().map(|d| d.matvec(y)).collect();
        let mut out = Vec::with_capacity(m);
        let mut low_at = vec![0.0; lows.len()];
        for r in 0..m {
            for (slot, lo) in low_at.iter_mut().zip(&lows) {
                *slot = lo[r];
            }
            out.push(lead[r] - (p.f)(nodes[r], y[r], &low_at));
        }
        out
    };

    let x0 = vec![0.0; m];
    let outcome = newton_solve(&residual, None, &x0, p.tol, p.max_iter)?;

    let e_infty = p.exact.as_ref().map(|exact| {
        ns.nodes()
            .iter()
            .zip(&outcome.x)
            .map(|(&x, &v)| (v - exact(x)).abs())
            .fold(0.0_f64, f64::max)
    });

    Ok(SolverReport {
        solution: GridFunction::new(ns, outcome.x)?,
        history: vec![],
        e_infty,
        e_infty_series: vec![],
        cond: None,
        iterations: outcome.iterations,
        residual_norm: outcome.residual_norm,
    })
}
