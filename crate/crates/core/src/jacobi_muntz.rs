//! Jacobi–Müntz functions of the first and second kind, their closed-form
//! Erdélyi–Kober fractional derivatives, and the two classical
//! first-derivative special cases.
//!
//! First kind:  x^(σ(β-η-μ)) P_n^(α,β)(2(x/b)^σ - 1)
//! Second kind: x^(ση) (b^σ - x^σ)^α P_n^(α,β)(2(x/b)^σ - 1)

use crate::error::{MuntzError, Result};
use crate::gamma::gamma_ratio;
use crate::jacobi::{eval_jacobi_unchecked, JacobiParams};
use crate::quadrature::MuntzBasisParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JmfKind {
    First,
    Second,
}

/// One basis function: kind, degree index and the parameter bundle.
#[derive(Debug, Clone, Copy)]
pub struct JmfSpec {
    pub kind: JmfKind,
    pub n: usize,
    pub params: MuntzBasisParams,
}

/// What to do when an endpoint evaluation hits a negative exponent.
/// The default rejects it; `SignedLimit` returns the signed infinity so
/// callers plotting near the endpoint can ask for the limit explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointPolicy {
    Reject,
    SignedLimit,
}

/// base^expo for base ≥ 0 with 0^0 = 1; `None` marks the singular
/// 0^(negative) case for the caller's policy to resolve.
fn pow_zero_aware(base: f64, expo: f64) -> Option<f64> {
    if base > 0.0 {
        Some((expo * base.ln()).exp())
    } else if expo > 0.0 {
        Some(0.0)
    } else if expo == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

fn domain_check(x: f64, b: f64) -> Result<()> {
    if !(x.is_finite() && (0.0..=b).contains(&x)) {
        return Err(MuntzError::Domain(format!("x = {x} outside [0, {b}]")));
    }
    Ok(())
}

pub fn eval_jmf(spec: &JmfSpec, x: f64) -> Result<f64> {
    eval_jmf_with_policy(spec, x, EndpointPolicy::Reject)
}

pub fn eval_jmf_with_policy(spec: &JmfSpec, x: f64, policy: EndpointPolicy) -> Result<f64> {
    let p = &spec.params;
    domain_check(x, p.b)?;
    let z = 2.0 * (x / p.b).powf(p.sigma) - 1.0;
    let z = z.clamp(-1.0, 1.0);
    let poly = eval_jacobi_unchecked(spec.n, p.jac.alpha, p.jac.beta, z);
    match spec.kind {
        JmfKind::First => {
            let e = p.first_kind_exponent();
            match pow_zero_aware(x, e) {
                Some(pf) => Ok(pf * poly),
                None => match policy {
                    EndpointPolicy::Reject => Err(MuntzError::SingularEndpoint { x, exponent: e }),
                    EndpointPolicy::SignedLimit => Ok(poly.signum() * f64::INFINITY),
                },
            }
        }
        JmfKind::Second => {
            let e1 = p.sigma * p.eta;
            let cut = (p.b_sigma() - x.powf(p.sigma)).max(0.0);
            let pf1 = pow_zero_aware(x, e1);
            let pf2 = pow_zero_aware(cut, p.jac.alpha);
            match (pf1, pf2) {
                (Some(a), Some(b)) => Ok(a * b * poly),
                (None, _) => match policy {
                    EndpointPolicy::Reject => {
                        Err(MuntzError::SingularEndpoint { x, exponent: e1 })
                    }
                    EndpointPolicy::SignedLimit => {
                        Ok((pf2.unwrap_or(1.0) * poly).signum() * f64::INFINITY)
                    }
                },
                (_, None) => match policy {
                    EndpointPolicy::Reject => Err(MuntzError::SingularEndpoint {
                        x,
                        exponent: p.jac.alpha,
                    }),
                    EndpointPolicy::SignedLimit => {
                        Ok((pf1.unwrap_or(1.0) * poly).signum() * f64::INFINITY)
                    }
                },
            }
        }
    }
}

/// The parameter bundle after the Erdélyi–Kober derivative shift.
///
/// First kind of order μ: (α, β, η) → (α+μ, β-μ, η-μ); needs β-μ > -1.
/// Second kind:           (α, β, η) → (α-μ, β+μ, η+μ); needs α-μ > -1.
pub fn shifted_spec(spec: &JmfSpec, mu: f64) -> Result<JmfSpec> {
    let p = &spec.params;
    let jac = match spec.kind {
        JmfKind::First => {
            let shifted = p.jac.beta - mu;
            if shifted <= -1.0 {
                return Err(MuntzError::ParamShift {
                    requirement: "beta - mu",
                    value: shifted,
                });
            }
            JacobiParams::new(p.jac.alpha + mu, shifted)?
        }
        JmfKind::Second => {
            let shifted = p.jac.alpha - mu;
            if shifted <= -1.0 {
                return Err(MuntzError::ParamShift {
                    requirement: "alpha - mu",
                    value: shifted,
                });
            }
            JacobiParams::new(shifted, p.jac.beta + mu)?
        }
    };
    let eta = match spec.kind {
        JmfKind::First => p.eta - mu,
        JmfKind::Second => p.eta + mu,
    };
    Ok(JmfSpec {
        kind: spec.kind,
        n: spec.n,
        params: MuntzBasisParams::new(jac, p.sigma, eta, p.mu, p.b)?,
    })
}

/// Γ-ratio multiplying the shifted basis function in the closed-form
/// derivative: Γ(k+β+1)/Γ(k+β-μ+1) for the first kind, the α analogue for
/// the second.
pub fn ek_deriv_jmf_factor(spec: &JmfSpec, mu: f64) -> Result<f64> {
    let k = spec.n as f64;
    let p = &spec.params;
    match spec.kind {
        JmfKind::First => gamma_ratio(k + p.jac.beta + 1.0, k + p.jac.beta - mu + 1.0),
        JmfKind::Second => gamma_ratio(k + p.jac.alpha + 1.0, k + p.jac.alpha - mu + 1.0),
    }
}

/// Closed-form Erdélyi–Kober derivative of a Jacobi–Müntz function, of
/// order μ = spec.params.mu (left-sided for the first kind, right-sided
/// for the second). μ = 0 is the identity.
pub fn ek_deriv_jmf_closed(spec: &JmfSpec, x: f64) -> Result<f64> {
    let mu = spec.params.mu;
    if mu == 0.0 {
        return eval_jmf(spec, x);
    }
    let factor = ek_deriv_jmf_factor(spec, mu)?;
    let shifted = shifted_spec(spec, mu)?;
    Ok(factor * eval_jmf(&shifted, x)?)
}

/// The two composite families whose classical first derivative has a
/// one-term closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialDeriv {
    /// d/dx [ x^(σβ) P_n^(α,β)(2(x/b)^σ-1) ]
    ///   = σ(n+β) x^(σβ-1) P_n^(α+1,β-1)(·)
    PowerJacobi,
    /// d/dx [ (b^σ-x^σ)^α P_n^(α,β)(2(x/b)^σ-1) ]
    ///   = -σ(n+α) x^(σ-1) (b^σ-x^σ)^(α-1) P_n^(α-1,β+1)(·)
    CutoffJacobi,
}

pub fn d_dx_special(
    kind: SpecialDeriv,
    n: usize,
    params: &MuntzBasisParams,
    x: f64,
) -> Result<f64> {
    domain_check(x, params.b)?;
    if x == 0.0 || x == params.b {
        return Err(MuntzError::SingularEndpoint {
            x,
            exponent: match kind {
                SpecialDeriv::PowerJacobi => params.sigma * params.jac.beta - 1.0,
                SpecialDeriv::CutoffJacobi => params.jac.alpha - 1.0,
            },
        });
    }
    let (a, b) = (params.jac.alpha, params.jac.beta);
    let z = (2.0 * (x / params.b).powf(params.sigma) - 1.0).clamp(-1.0, 1.0);
    let nf = n as f64;
    match kind {
        SpecialDeriv::PowerJacobi => {
            let poly = eval_jacobi_unchecked(n, a + 1.0, b - 1.0, z);
            Ok(params.sigma * (nf + b) * x.powf(params.sigma * b - 1.0) * poly)
        }
        SpecialDeriv::CutoffJacobi => {
            let poly = eval_jacobi_unchecked(n, a - 1.0, b + 1.0, z);
            let cut = params.b_sigma() - x.powf(params.sigma);
            Ok(-params.sigma * (nf + a) * x.powf(params.sigma - 1.0) * cut.powf(a - 1.0) * poly)
        }
    }
}
