//! Damped Newton iteration on dense nodal systems with a
//! forward-difference Jacobian fallback.

use super::inf_norm;
use crate::error::{MuntzError, Result};
use crate::linalg::DenseMatrix;

pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
}

/// Forward-difference Jacobian with step sqrt(ulp) (1 + |x_i|).
pub fn fd_jacobian(residual: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], r0: &[f64]) -> DenseMatrix {
    let n = x.len();
    let mut jac = DenseMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    for j in 0..n {
        let h = f64::EPSILON.sqrt() * (1.0 + x[j].abs());
        xp[j] = x[j] + h;
        let rp = residual(&xp);
        xp[j] = x[j];
        for i in 0..n {
            jac.set(i, j, (rp[i] - r0[i]) / h);
        }
    }
    jac
}

/// Solve residual(x) = 0 from x0. The step is damped by halving (up to
/// 8 times) whenever it increases the residual norm; a singular Jacobian
/// gets one Tikhonov-damped retry before the iteration gives up.
pub fn newton_solve(
    residual: &dyn Fn(&[f64]) -> Vec<f64>,
    jacobian: Option<&dyn Fn(&[f64]) -> DenseMatrix>,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<NewtonOutcome> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residual(&x);
    if r.len() != n {
        return Err(MuntzError::InvalidParam(format!(
            "residual dimension {} does not match unknowns {}",
            r.len(),
            n
        )));
    }
    let mut rnorm = inf_norm(&r);
    for iter in 0..max_iter {
        if rnorm <= tol {
            return Ok(NewtonOutcome {
                x,
                iterations: iter,
                residual_norm: rnorm,
            });
        }
        let jac = match jacobian {
            Some(j) => j(&x),
            None => fd_jacobian(residual, &x, &r),
        };
        let delta = match jac.solve(&r) {
            Ok(d) => d,
            Err(MuntzError::SingularSystem { .. }) => {
                // damped retry: J + λI with λ scaled to the matrix
                let lambda = 1e-10 * jac.max_abs().max(1.0);
                let mut damped = jac.clone();
                for i in 0..n {
                    damped.set(i, i, damped.get(i, i) + lambda);
                }
                damped.solve(&r)?
            }
            Err(e) => return Err(e),
        };
        let mut scale = 1.0;
        let mut accepted = false;
        let mut best = (x.clone(), r.clone(), rnorm);
        for _ in 0..=8 {
            let trial: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi - scale * di).collect();
            let rt = residual(&trial);
            let nt = inf_norm(&rt);
            if nt < rnorm {
                best = (trial, rt, nt);
                accepted = true;
                break;
            }
            if nt < best.2 {
                best = (trial, rt, nt);
            }
            scale *= 0.5;
        }
        let _ = accepted;
        x = best.0;
        r = best.1;
        rnorm = best.2;
    }
    if rnorm <= tol {
        Ok(NewtonOutcome {
            x,
            iterations: max_iter,
            residual_norm: rnorm,
        })
    } else {
        Err(MuntzError::NewtonNonConvergence {
            iterations: max_iter,
            residual: rnorm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_square_root() {
        let out = newton_solve(&|x| vec![x[0] * x[0] - 4.0], None, &[3.0], 1e-12, 50).unwrap();
        assert!((out.x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn linear_system_converges_immediately() {
        let residual = |x: &[f64]| vec![2.0 * x[0] + x[1] - 5.0, x[0] - x[1] + 1.0];
        let out = newton_solve(&residual, None, &[0.0, 0.0], 1e-12, 50).unwrap();
        assert!((out.x[0] - 4.0 / 3.0).abs() < 1e-10);
        assert!((out.x[1] - 7.0 / 3.0).abs() < 1e-10);
        assert!(out.iterations <= 2, "took {} iterations", out.iterations);
    }

    #[test]
    fn reports_non_convergence() {
        // no real root
        let r = newton_solve(&|x| vec![x[0] * x[0] + 1.0], None, &[1.0], 1e-14, 8);
        assert!(matches!(r, Err(MuntzError::NewtonNonConvergence { .. })));
    }

    #[test]
    fn analytic_jacobian_used_when_given() {
        let residual = |x: &[f64]| vec![(x[0]).exp() - 2.0];
        let jacobian = |x: &[f64]| {
            let mut j = DenseMatrix::zeros(1, 1);
            j.set(0, 0, x[0].exp());
            j
        };
        let out = newton_solve(&residual, Some(&jacobian), &[0.0], 1e-13, 30).unwrap();
        assert!((out.x[0] - 2.0_f64.ln()).abs() < 1e-12);
    }
}
