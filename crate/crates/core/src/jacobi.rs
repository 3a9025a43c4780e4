//! Classical Jacobi polynomials and Gauss–Jacobi quadrature on [-1, 1].
//!
//! Nodes come from the symmetric-tridiagonal eigenvalue problem
//! (Golub–Welsch) followed by one Newton polish step per node; weights come
//! from the Christoffel function of the orthonormalized family, which stays
//! robust for α, β close to -1.

use crate::error::{MuntzError, Result};
use crate::gamma::{beta, ln_gamma_sign};
use crate::linalg::sym_tridiag_eigenvalues;

/// Jacobi weight exponents (1-t)^α (1+t)^β with α, β > -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha <= -1.0 || beta <= -1.0 {
            return Err(MuntzError::InvalidParam(format!(
                "Jacobi parameters must satisfy alpha, beta > -1; got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Total mass of the weight: ∫ (1-t)^α (1+t)^β dt = 2^(α+β+1) B(α+1, β+1).
    pub fn total_mass(&self) -> f64 {
        2.0_f64.powf(self.alpha + self.beta + 1.0)
            * beta(self.alpha + 1.0, self.beta + 1.0).expect("alpha, beta > -1")
    }
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() || t.abs() > 1.0 + 1e-12 {
        return Err(MuntzError::Domain(format!(
            "Jacobi evaluation point {t} outside [-1, 1]"
        )));
    }
    Ok(())
}

/// P_n^(α,β)(t) by the standard three-term recurrence.
pub fn eval_jacobi(n: usize, p: JacobiParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(eval_jacobi_unchecked(n, p.alpha, p.beta, t))
}

/// All degrees 0..=n_max at a single point, one recurrence pass.
pub fn eval_jacobi_all(n_max: usize, p: JacobiParams, t: f64) -> Result<Vec<f64>> {
    check_t(t)?;
    Ok(eval_jacobi_all_unchecked(n_max, p.alpha, p.beta, t))
}

/// Recurrence without the domain check; parameters may lie outside the
/// orthogonality range (the shifted families in the derivative formulas
/// need e.g. β - 1). The recurrence denominators stay nonzero whenever
/// α + β > -2, which every shift used here preserves.
pub(crate) fn eval_jacobi_unchecked(n: usize, a: f64, b: f64, t: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 0.5 * (a - b) + 0.5 * (a + b + 2.0) * t,
        _ => {
            let mut pm1 = 1.0;
            let mut pn = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * t;
            for k in 2..=n {
                let kf = k as f64;
                let c = 2.0 * kf + a + b;
                let a1 = 2.0 * kf * (kf + a + b) * (c - 2.0);
                let a2 = (c - 1.0) * (a * a - b * b);
                let a3 = (c - 1.0) * c * (c - 2.0);
                let a4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
                let next = ((a2 + a3 * t) * pn - a4 * pm1) / a1;
                pm1 = pn;
                pn = next;
            }
            pn
        }
    }
}

pub(crate) fn eval_jacobi_all_unchecked(n_max: usize, a: f64, b: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(0.5 * (a - b) + 0.5 * (a + b + 2.0) * t);
    for k in 2..=n_max {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let a1 = 2.0 * kf * (kf + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 1.0) * c * (c - 2.0);
        let a4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
        let next = ((a2 + a3 * t) * out[k - 1] - a4 * out[k - 2]) / a1;
        out.push(next);
    }
    out
}

/// d/dt P_n^(α,β)(t) = (n+α+β+1)/2 · P_(n-1)^(α+1,β+1)(t).
pub fn eval_jacobi_deriv(n: usize, p: JacobiParams, t: f64) -> Result<f64> {
    check_t(t)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(0.5
        * (n as f64 + p.alpha + p.beta + 1.0)
        * eval_jacobi_unchecked(n - 1, p.alpha + 1.0, p.beta + 1.0, t))
}

/// Orthogonality constant γ_n = ∫ [P_n^(α,β)]² (1-t)^α (1+t)^β dt,
/// evaluated through log-gamma differences.
pub fn gamma_n(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    if n == 0 {
        // (α+β+1) Γ(α+β+1) rewritten as Γ(α+β+2), which has no pole on α+β > -2
        let ln = (a + b + 1.0) * 2.0_f64.ln()
            + ln_gamma_sign(a + 1.0).expect("alpha > -1 > pole").0
            + ln_gamma_sign(b + 1.0).expect("beta > -1 > pole").0
            - ln_gamma_sign(a + b + 2.0).expect("alpha + beta > -2").0;
        return ln.exp();
    }
    let ln_fact = ln_gamma_sign(nf + 1.0).expect("positive").0;
    let ln = (a + b + 1.0) * 2.0_f64.ln()
        + ln_gamma_sign(nf + a + 1.0).expect("positive").0
        + ln_gamma_sign(nf + b + 1.0).expect("positive").0
        - (2.0 * nf + a + b + 1.0).ln()
        - ln_fact
        - ln_gamma_sign(nf + a + b + 1.0).expect("positive for n >= 1").0;
    ln.exp()
}

/// An (n+1)-point Gauss–Jacobi rule, exact for polynomials of degree
/// ≤ 2n+1 against (1-t)^α (1+t)^β.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

/// Monic recurrence coefficients of the Jacobi weight; `diag[k]` and
/// `sub[k]` (k ≥ 1) build the Golub–Welsch matrix.
fn monic_coefficients(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(n + 1);
    let mut sub = Vec::with_capacity(n);
    diag.push((b - a) / (a + b + 2.0));
    for k in 1..=n {
        let kf = k as f64;
        let denom = (2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0);
        diag.push((b * b - a * a) / denom);
        let bk = if k == 1 {
            // the (k+α+β)/(2k+α+β-1) factor cancels at k = 1
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
        } else {
            let c = 2.0 * kf + a + b;
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (c * c * (c + 1.0) * (c - 1.0))
        };
        sub.push(bk.sqrt());
    }
    (diag, sub)
}

/// Gauss–Jacobi nodes and weights (n+1 points).
pub fn gauss_jacobi(n: usize, p: JacobiParams) -> Result<GaussRule> {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        return Ok(GaussRule {
            nodes: vec![(b - a) / (a + b + 2.0)],
            weights: vec![p.total_mass()],
            degree: 0,
        });
    }
    let (diag, sub) = monic_coefficients(n, a, b);
    let mut nodes = sym_tridiag_eigenvalues(&diag, &sub)?;

    // one Newton polish step per node on P_(n+1)
    for x in nodes.iter_mut() {
        let f = eval_jacobi_unchecked(n + 1, a, b, *x);
        let df = 0.5 * (n as f64 + 1.0 + a + b + 1.0) * eval_jacobi_unchecked(n, a + 1.0, b + 1.0, *x);
        if df != 0.0 {
            let step = f / df;
            if step.abs() < 1e-3 {
                *x -= step;
            }
        }
    }
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // weights through the Christoffel function of the orthonormal family
    let norms: Vec<f64> = (0..=n).map(|k| gamma_n(k, p).sqrt()).collect();
    let mut weights = Vec::with_capacity(n + 1);
    for (j, &x) in nodes.iter().enumerate() {
        let vals = eval_jacobi_all_unchecked(n, a, b, x);
        let k_sum: f64 = vals
            .iter()
            .zip(&norms)
            .map(|(v, s)| (v / s) * (v / s))
            .sum();
        if !(k_sum.is_finite() && k_sum > 0.0) {
            return Err(MuntzError::EigenNonConvergence { index: j });
        }
        weights.push(1.0 / k_sum);
    }

    for j in 0..=n {
        let interior = nodes[j] > -1.0 && nodes[j] < 1.0;
        let increasing = j == 0 || nodes[j] > nodes[j - 1];
        if !interior || !increasing || weights[j] <= 0.0 {
            return Err(MuntzError::EigenNonConvergence { index: j });
        }
    }
    Ok(GaussRule {
        nodes,
        weights,
        degree: n,
    })
}
