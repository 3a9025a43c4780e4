//! Viscous Burgers benchmark
//!
//!   u_t = ε u_xx - u u_x + s(x, t),  u(0, t) = u(b, t) = 0,
//!
//! on the second-kind cardinal basis (η > 0 and α > 0 make every basis
//! function vanish at both endpoints). The advection term uses the
//! cutoff-family first-order matrix; the diffusion term uses the directly
//! assembled second-order matrix, whose spectrum stays in the left half
//! plane (the squared first-order matrix carries a spurious unstable mode
//! that wrecks long horizons; see second_order_dm).
//!
//! Time stepping is TR-BDF2 (a trapezoid substage to t + γ dt followed by
//! a variable-step BDF2 substage, γ = 2 - sqrt 2): the clustered Müntz
//! grid makes the semi-discrete diffusion extremely stiff, and the plain
//! trapezoid rule's undamped stiff ringing couples to the quadratic term
//! and blows up mid-run. Both substages share one implicit coefficient,
//! so a single analytic Jacobian is factored per step and reused across
//! Newton iterations.

use super::{inf_norm, SolverReport, SpaceTimeFn};
use crate::diffmat::{first_order_dm, second_order_dm, FirstOrderFamily};
use crate::error::{MuntzError, Result};
use crate::interp::{GridFunction, MuntzNodeSet};
use crate::linalg::DenseMatrix;
use crate::quadrature::MuntzBasisParams;

pub struct BurgersProblem {
    pub epsilon: f64,
    pub s: SpaceTimeFn,
    pub initial: Box<dyn Fn(f64) -> f64>,
    pub basis: MuntzBasisParams,
    pub n: usize,
    pub t_end: f64,
    /// Nominal trapezoid step; halved locally when a step's Newton fails.
    pub dt: f64,
    pub exact: Option<SpaceTimeFn>,
}

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 25;
const MAX_HALVINGS: usize = 10;

struct Stepper<'a> {
    d1: crate::linalg::DenseMatrix,
    d2: crate::linalg::DenseMatrix,
    epsilon: f64,
    s: &'a SpaceTimeFn,
    nodes: Vec<f64>,
}

impl Stepper<'_> {
    fn rhs(&self, t: f64, u: &[f64]) -> Vec<f64> {
        let du = self.d1.matvec(u);
        let d2u = self.d2.matvec(u);
        (0..u.len())
            .map(|i| self.epsilon * d2u[i] - u[i] * du[i] + (self.s)(self.nodes[i], t))
            .collect()
    }

    /// Jacobian of v - c dt G(t, v) - const: I - c dt (ε D² - diag(D¹v)
    /// - diag(v) D¹).
    fn stage_jacobian(&self, v: &[f64], c_dt: f64) -> DenseMatrix {
        let m = v.len();
        let dv = self.d1.matvec(v);
        let mut jac = DenseMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut g = self.epsilon * self.d2.get(i, j) - v[i] * self.d1.get(i, j);
                if i == j {
                    g -= dv[i];
                }
                let mut entry = -c_dt * g;
                if i == j {
                    entry += 1.0;
                }
                jac.set(i, j, entry);
            }
        }
        jac
    }

    /// Newton on v - c dt G(t_stage, v) = rhs_const, reusing a factored
    /// Jacobian and refactoring once at the current iterate on a stall.
    fn implicit_stage(
        &self,
        t_stage: f64,
        c_dt: f64,
        rhs_const: &[f64],
        v0: Vec<f64>,
    ) -> Result<Vec<f64>> {
        let residual = |v: &[f64]| -> Vec<f64> {
            let g = self.rhs(t_stage, v);
            (0..v.len())
                .map(|i| v[i] - c_dt * g[i] - rhs_const[i])
                .collect()
        };
        let mut v = v0;
        let mut r = residual(&v);
        let mut lu = self.stage_jacobian(&v, c_dt).lu()?;
        let mut refreshed = false;
        for iter in 0..NEWTON_MAX_ITER {
            let rnorm = inf_norm(&r);
            if rnorm <= NEWTON_TOL {
                return Ok(v);
            }
            if !rnorm.is_finite() {
                break;
            }
            if iter == 8 && !refreshed {
                lu = self.stage_jacobian(&v, c_dt).lu()?;
                refreshed = true;
            }
            let delta = lu.solve(&r);
            for (vi, di) in v.iter_mut().zip(&delta) {
                *vi -= di;
            }
            r = residual(&v);
        }
        if inf_norm(&r) <= NEWTON_TOL {
            Ok(v)
        } else {
            Err(MuntzError::NewtonNonConvergence {
                iterations: NEWTON_MAX_ITER,
                residual: inf_norm(&r),
            })
        }
    }

    /// One TR-BDF2 step with γ = 2 - sqrt 2; both substages share the
    /// implicit coefficient d = 1 - 1/sqrt 2.
    fn trbdf2_step(&self, t: f64, u: &[f64], dt: f64) -> Result<Vec<f64>> {
        let gamma = 2.0 - std::f64::consts::SQRT_2;
        let d = 1.0 - 1.0 / std::f64::consts::SQRT_2;
        let m = u.len();

        // trapezoid substage to t + γ dt
        let g_old = self.rhs(t, u);
        let rhs1: Vec<f64> = (0..m).map(|i| u[i] + d * dt * g_old[i]).collect();
        let predictor: Vec<f64> = (0..m).map(|i| u[i] + gamma * dt * g_old[i]).collect();
        let u_mid = self.implicit_stage(t + gamma * dt, d * dt, &rhs1, predictor)?;

        // BDF2 substage to t + dt
        let c1 = 1.0 / (gamma * (2.0 - gamma));
        let c2 = (1.0 - gamma) * (1.0 - gamma) / (gamma * (2.0 - gamma));
        let rhs2: Vec<f64> = (0..m).map(|i| c1 * u_mid[i] - c2 * u[i]).collect();
        self.implicit_stage(t + dt, d * dt, &rhs2, u_mid)
    }

    fn advance(&self, t: f64, u: &[f64], dt: f64, depth: usize) -> Result<Vec<f64>> {
        match self.trbdf2_step(t, u, dt) {
            Ok(v) => Ok(v),
            Err(MuntzError::NewtonNonConvergence { .. }) if depth < MAX_HALVINGS => {
                let half = 0.5 * dt;
                let mid = self.advance(t, u, half, depth + 1)?;
                self.advance(t + half, &mid, half, depth + 1)
            }
            Err(e) => Err(e),
        }
    }
}

pub fn solve_burgers(p: &BurgersProblem) -> Result<SolverReport> {
    if !(p.epsilon > 0.0) {
        return Err(MuntzError::InvalidParam(format!(
            "viscosity must be positive, got {}",
            p.epsilon
        )));
    }
    if !(p.basis.eta > 0.0 && p.basis.jac.alpha > 0.0) {
        return Err(MuntzError::InvalidParam(
            "Burgers trial basis needs eta > 0 and alpha > 0 so it vanishes at both endpoints"
                .into(),
        ));
    }
    if !(p.dt > 0.0 && p.t_end > 0.0) {
        return Err(MuntzError::InvalidParam("dt and t_end must be positive".into()));
    }

    let ns = MuntzNodeSet::new(p.n, p.basis)?;
    let d1 = first_order_dm(FirstOrderFamily::CutoffBasis, &ns)?;
    let d2 = second_order_dm(FirstOrderFamily::CutoffBasis, &ns)?;
    let stepper = Stepper {
        d1,
        d2,
        epsilon: p.epsilon,
        s: &p.s,
        nodes: ns.nodes().to_vec(),
    };

    let mut u: Vec<f64> = ns.nodes().iter().map(|&x| (p.initial)(x)).collect();
    let mut t = 0.0;
    let steps = (p.t_end / p.dt).ceil() as usize;
    let mut history = Vec::new();
    let record_every = (steps / 50).max(1);
    for step in 0..steps {
        let dt = p.dt.min(p.t_end - t);
        if dt <= 0.0 {
            break;
        }
        u = stepper.advance(t, &u, dt, 0)?;
        t += dt;
        if step % record_every == 0 || step + 1 == steps {
            history.push((t, u.clone()));
        }
    }

    let e_infty = p.exact.as_ref().map(|exact| {
        ns.nodes()
            .iter()
            .zip(&u)
            .map(|(&x, &v)| (v - exact(x, t)).abs())
            .fold(0.0_f64, f64::max)
    });

    Ok(SolverReport {
        solution: GridFunction::new(ns, u)?,
        history,
        e_infty,
        e_infty_series: vec![],
        cond: None,
        iterations: steps,
        residual_norm: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::JacobiParams;

    fn burgers_basis(sigma: f64) -> MuntzBasisParams {
        MuntzBasisParams::new(JacobiParams::new(0.5, 1.0).unwrap(), sigma, 1.0, 0.0, 1.0)
            .unwrap()
    }

    #[test]
    fn zero_forcing_zero_initial_stays_zero() {
        let p = BurgersProblem {
            epsilon: 1.0,
            s: Box::new(|_, _| 0.0),
            initial: Box::new(|_| 0.0),
            basis: burgers_basis(0.5),
            n: 8,
            t_end: 0.5,
            dt: 0.01,
            exact: Some(Box::new(|_, _| 0.0)),
        };
        let report = solve_burgers(&p).unwrap();
        assert!(report.e_infty.unwrap() < 1e-13);
    }

    #[test]
    fn manufactured_solution_in_trial_span_tracked() {
        // u = x² (1-x)^(3/2) cos t: one half-power above the basis cutoff,
        // so u AND u_x lie in the α = 0.5, η = 1, σ = 1 trial span and the
        // squared first-order matrix differentiates it exactly
        let basis = burgers_basis(1.0);
        let eps = 0.7;
        let amp = |x: f64| x * x * (1.0 - x).powf(1.5);
        let amp_x = |x: f64| {
            2.0 * x * (1.0 - x).powf(1.5) - 1.5 * x * x * (1.0 - x).sqrt()
        };
        let amp_xx = |x: f64| {
            2.0 * (1.0 - x).powf(1.5) - 6.0 * x * (1.0 - x).sqrt()
                + 0.75 * x * x / (1.0 - x).sqrt()
        };
        let u_exact = move |x: f64, t: f64| amp(x) * t.cos();
        let p = BurgersProblem {
            epsilon: eps,
            s: Box::new(move |x, t| {
                -amp(x) * t.sin() - eps * amp_xx(x) * t.cos()
                    + amp(x) * t.cos() * amp_x(x) * t.cos()
            }),
            initial: Box::new(move |x| u_exact(x, 0.0)),
            basis,
            n: 10,
            t_end: 1.0,
            dt: 0.002,
            exact: Some(Box::new(u_exact)),
        };
        let report = solve_burgers(&p).unwrap();
        assert!(
            report.e_infty.unwrap() < 1e-6,
            "error {}",
            report.e_infty.unwrap()
        );
    }

    #[test]
    fn invalid_basis_rejected() {
        let mut basis = burgers_basis(0.5);
        basis.eta = 0.0;
        let p = BurgersProblem {
            epsilon: 1.0,
            s: Box::new(|_, _| 0.0),
            initial: Box::new(|_| 0.0),
            basis,
            n: 4,
            t_end: 0.1,
            dt: 0.01,
            exact: None,
        };
        assert!(matches!(solve_burgers(&p), Err(MuntzError::InvalidParam(_))));
    }
}
