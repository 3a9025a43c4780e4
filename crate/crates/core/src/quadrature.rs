//! Mapped Gauss–Jacobi–Müntz quadrature on [0, b].
//!
//! The base rule maps Gauss–Jacobi nodes through x = b ((1+t)/2)^(1/σ) and
//! integrates against x^(σ(β+1)-1) (b^σ - x^σ)^α. The two reweighted
//! variants trade that weight for the first- and second-kind Müntz weights
//! by multiplying the base weights pointwise, which is exact and avoids
//! cancellation from re-deriving weights.

use crate::error::{MuntzError, Result};
use crate::jacobi::{gauss_jacobi, JacobiParams};

/// Parameter bundle shared by every Müntz-type construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuntzBasisParams {
    pub jac: JacobiParams,
    /// Müntz exponent scale σ > 0.
    pub sigma: f64,
    /// Weight shift η.
    pub eta: f64,
    /// Fractional order μ ≥ 0 (used by the first-kind constructions).
    pub mu: f64,
    /// Right endpoint b > 0.
    pub b: f64,
}

impl MuntzBasisParams {
    pub fn new(jac: JacobiParams, sigma: f64, eta: f64, mu: f64, b: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(MuntzError::InvalidParam(format!("sigma must be > 0, got {sigma}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(MuntzError::InvalidParam(format!("b must be > 0, got {b}")));
        }
        if !eta.is_finite() {
            return Err(MuntzError::InvalidParam(format!("eta must be finite, got {eta}")));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(MuntzError::InvalidParam(format!("mu must be >= 0, got {mu}")));
        }
        Ok(Self { jac, sigma, eta, mu, b })
    }

    /// Leading exponent σ(β - η - μ) of the first-kind basis.
    pub fn first_kind_exponent(&self) -> f64 {
        self.sigma * (self.jac.beta - self.eta - self.mu)
    }

    /// b^σ, the Müntz image of the right endpoint.
    pub fn b_sigma(&self) -> f64 {
        self.b.powf(self.sigma)
    }

    /// Orthogonality constant of the mapped family:
    /// (1/σ) (b^σ/2)^(α+β+1) γ_n.
    pub fn star_gamma(&self, n: usize) -> f64 {
        let scale = (self.b_sigma() / 2.0).powf(self.jac.alpha + self.jac.beta + 1.0) / self.sigma;
        scale * crate::jacobi::gamma_n(n, self.jac)
    }
}

/// Which weight family a rule carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    /// Weight x^(σ(β+1)-1) (b^σ - x^σ)^α, exact on spans of x^(kσ).
    Base,
    /// First-kind Müntz weight, exact on spans of x^(2σ(β-μ-η)+kσ).
    Gjmqr1,
    /// Second-kind Müntz weight, exact on spans of (b^σ-x^σ)^(2α) x^(2ση+kσ).
    Gjmqr2,
}

/// Reweighting variant selector for [`gjmqr_weights`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GjmqrVariant {
    First,
    Second,
}

/// A mapped quadrature rule with n+1 nodes inside (0, b).
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub kind: QuadKind,
    pub params: MuntzBasisParams,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub n: usize,
    /// Gauss–Jacobi nodes on [-1, 1] the mapped nodes came from; kept so
    /// downstream evaluations of P_j(2(x_j/b)^σ - 1) use the exact values.
    pub(crate) gauss_nodes: Vec<f64>,
}

/// Mapped rule: x_j = b ((1+t_j)/2)^(1/σ), w_j = (1/σ)(b^σ/2)^(α+β+1) w_j^J.
pub fn mapped_rule(n: usize, params: MuntzBasisParams) -> Result<QuadRule> {
    let base = gauss_jacobi(n, params.jac)?;
    let scale = (params.b_sigma() / 2.0).powf(params.jac.alpha + params.jac.beta + 1.0)
        / params.sigma;
    let nodes: Vec<f64> = base
        .nodes
        .iter()
        .map(|t| params.b * (0.5 * (1.0 + t)).powf(1.0 / params.sigma))
        .collect();
    let weights: Vec<f64> = base.weights.iter().map(|w| scale * w).collect();
    for j in 0..=n {
        let interior = nodes[j] > 0.0 && nodes[j] < params.b;
        let increasing = j == 0 || nodes[j] > nodes[j - 1];
        if !interior || !increasing {
            return Err(MuntzError::EigenNonConvergence { index: j });
        }
    }
    Ok(QuadRule {
        kind: QuadKind::Base,
        params,
        nodes,
        weights,
        n,
        gauss_nodes: base.nodes,
    })
}

/// Reweight a base rule into GJMQR-1 or GJMQR-2.
///
/// Variant 1 multiplies each weight by x_j^(2σ(η+μ-β)); variant 2 by
/// (b^σ - x_j^σ)^(-2α) x_j^(-2ση). Fractional powers go through
/// exp(c ln x) so small nodes do not underflow a pow chain.
pub fn gjmqr_weights(rule: &QuadRule, variant: GjmqrVariant) -> Result<QuadRule> {
    if rule.kind != QuadKind::Base {
        return Err(MuntzError::InvalidParam(
            "gjmqr_weights expects a base-kind rule".into(),
        ));
    }
    let p = &rule.params;
    let b_sigma = p.b_sigma();
    let mut out = rule.clone();
    match variant {
        GjmqrVariant::First => {
            let c = 2.0 * p.sigma * (p.eta + p.mu - p.jac.beta);
            for (w, x) in out.weights.iter_mut().zip(&rule.nodes) {
                *w *= (c * x.ln()).exp();
            }
            out.kind = QuadKind::Gjmqr1;
        }
        GjmqrVariant::Second => {
            let c_eta = -2.0 * p.sigma * p.eta;
            let c_alpha = -2.0 * p.jac.alpha;
            for (w, x) in out.weights.iter_mut().zip(&rule.nodes) {
                let cut = b_sigma - x.powf(p.sigma);
                *w *= (c_eta * x.ln() + c_alpha * cut.ln()).exp();
            }
            out.kind = QuadKind::Gjmqr2;
        }
    }
    if out.weights.iter().any(|w| !w.is_finite()) {
        return Err(MuntzError::Overflow("reweighted quadrature weight".into()));
    }
    Ok(out)
}

/// Σ_j w_j f(x_j).
pub fn integrate(f: impl Fn(f64) -> f64, rule: &QuadRule) -> Result<f64> {
    let mut total = 0.0;
    for (j, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = f(*x);
        if !v.is_finite() {
            return Err(MuntzError::NonFiniteEval { index: j, x: *x });
        }
        total += w * v;
    }
    Ok(total)
}

/// Closed form of ∫_0^b x^(kσ) x^(σ(β+1)-1) (b^σ-x^σ)^α dx
/// = b^(σ(α+β+k+1))/σ · B(β+k+1, α+1); the exactness oracle for every
/// rule kind (the reweighted variants reduce to the same integral on
/// their exactness classes).
pub fn base_monomial_integral(k: usize, params: &MuntzBasisParams) -> f64 {
    let a = params.jac.alpha;
    let b = params.jac.beta;
    let kf = k as f64;
    (params.sigma * (a + b + kf + 1.0) * params.b.ln()).exp() / params.sigma
        * crate::gamma::beta(b + kf + 1.0, a + 1.0).expect("alpha, beta+k > -1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_params() -> MuntzBasisParams {
        MuntzBasisParams::new(
            JacobiParams::new(-0.5, 2.0).unwrap(),
            0.5,
            0.0,
            0.5,
            10.0,
        )
        .unwrap()
    }

    #[test]
    fn sigma_one_reduces_to_affine_gauss_legendre() {
        let p = MuntzBasisParams::new(JacobiParams::new(0.0, 0.0).unwrap(), 1.0, 0.0, 0.0, 2.0)
            .unwrap();
        let r = mapped_rule(1, p).unwrap();
        let inv_sqrt3 = 1.0 / 3.0_f64.sqrt();
        assert!((r.nodes[0] - (1.0 - inv_sqrt3)).abs() < 1e-14);
        assert!((r.nodes[1] - (1.0 + inv_sqrt3)).abs() < 1e-14);
    }

    #[test]
    fn total_mass_matches_beta_form() {
        let p = paper_params();
        let r = mapped_rule(5, p).unwrap();
        let total: f64 = r.weights.iter().sum();
        let want = (p.b_sigma() / 2.0).powf(p.jac.alpha + p.jac.beta + 1.0) / p.sigma
            * p.jac.total_mass();
        assert!(((total - want) / want).abs() < 1e-13);
        // and the k = 0 monomial oracle agrees with the same number
        assert!(((base_monomial_integral(0, &p) - want) / want).abs() < 1e-13);
    }

    #[test]
    fn base_rule_exact_on_muntz_monomials() {
        let p = paper_params();
        for n in 0..=8usize {
            let r = mapped_rule(n, p).unwrap();
            for k in 0..=(2 * n + 1) {
                let got = integrate(|x| x.powf(k as f64 * p.sigma), &r).unwrap();
                let want = base_monomial_integral(k, &p);
                assert!(
                    ((got - want) / want).abs() < 1e-10,
                    "n={n} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn gjmqr1_exact_on_first_kind_span() {
        let p = paper_params();
        let n = 8;
        let r1 = gjmqr_weights(&mapped_rule(n, p).unwrap(), GjmqrVariant::First).unwrap();
        let lead = 2.0 * p.sigma * (p.jac.beta - p.mu - p.eta);
        for k in 0..=(2 * n + 1) {
            let got = integrate(|x| x.powf(lead + k as f64 * p.sigma), &r1).unwrap();
            let want = base_monomial_integral(k, &p);
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "k={k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn gjmqr2_exact_on_second_kind_span() {
        let p = MuntzBasisParams::new(
            JacobiParams::new(0.5, -0.5).unwrap(),
            0.5,
            0.5,
            0.25,
            10.0,
        )
        .unwrap();
        let n = 8;
        let r2 = gjmqr_weights(&mapped_rule(n, p).unwrap(), GjmqrVariant::Second).unwrap();
        let b_sigma = p.b_sigma();
        for k in 0..=(2 * n + 1) {
            let got = integrate(
                |x| {
                    (b_sigma - x.powf(p.sigma)).powf(2.0 * p.jac.alpha)
                        * x.powf(2.0 * p.sigma * p.eta + k as f64 * p.sigma)
                },
                &r2,
            )
            .unwrap();
            let want = base_monomial_integral(k, &p);
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "k={k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn degenerate_exponents_leave_weights_unchanged() {
        // η + μ = β makes the first-kind exponent vanish
        let p = MuntzBasisParams::new(JacobiParams::new(-0.5, 1.0).unwrap(), 0.5, 0.5, 0.5, 3.0)
            .unwrap();
        let base = mapped_rule(4, p).unwrap();
        let r1 = gjmqr_weights(&base, GjmqrVariant::First).unwrap();
        for (w1, w0) in r1.weights.iter().zip(&base.weights) {
            assert!((w1 - w0).abs() <= 1e-15 * w0.abs());
        }
        // α = 0, η = 0 makes the second-kind factors vanish
        let p2 = MuntzBasisParams::new(JacobiParams::new(0.0, 1.0).unwrap(), 0.5, 0.0, 0.5, 3.0)
            .unwrap();
        let base2 = mapped_rule(4, p2).unwrap();
        let r2 = gjmqr_weights(&base2, GjmqrVariant::Second).unwrap();
        for (w2, w0) in r2.weights.iter().zip(&base2.weights) {
            assert!((w2 - w0).abs() <= 1e-15 * w0.abs());
        }
    }

    #[test]
    fn discrete_inner_product_matches_adaptive_integration() {
        // random pairs in the Müntz span with combined degree <= 2N+1:
        // the discrete inner product equals the continuous one, checked
        // against the tanh-sinh oracle rather than the closed form
        let p = paper_params();
        let n = 6;
        let rule = mapped_rule(n, p).unwrap();
        let mut seed = 0xfeed_u64;
        let mut rand = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let b_sigma = p.b_sigma();
        for _ in 0..4 {
            let c_phi: Vec<f64> = (0..=3).map(|_| rand()).collect();
            let c_psi: Vec<f64> = (0..=3).map(|_| rand()).collect();
            let phi = |x: f64| -> f64 {
                c_phi
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * x.powf(k as f64 * p.sigma))
                    .sum()
            };
            let psi = |x: f64| -> f64 {
                c_psi
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * x.powf(k as f64 * p.sigma))
                    .sum()
            };
            let discrete = integrate(|x| phi(x) * psi(x), &rule).unwrap();
            // continuous oracle in the mapped variable u = x^σ:
            // (1/σ) ∫ φψ(u^(1/σ)) u^β (b^σ - u)^α du, with the singular
            // cutoff factor taken from the exact distance to the endpoint
            let continuous = crate::ek::tanh_sinh(
                &|u: f64, _from_lo: f64, from_hi: f64| {
                    let x = u.powf(1.0 / p.sigma);
                    phi(x) * psi(x) * u.powf(p.jac.beta) * from_hi.powf(p.jac.alpha)
                        / p.sigma
                },
                0.0,
                b_sigma,
                1e-12,
            )
            .unwrap();
            assert!(
                (discrete - continuous).abs() <= 1e-9 * continuous.abs().max(1.0),
                "{discrete} vs {continuous}"
            );
        }
    }

    #[test]
    fn integrate_edge_cases() {
        let p = paper_params();
        let r = mapped_rule(3, p).unwrap();
        assert_eq!(integrate(|_| 0.0, &r).unwrap(), 0.0);
        assert!(matches!(
            integrate(|x| (x - r.nodes[1]).recip() * 0.0 / 0.0, &r),
            Err(MuntzError::NonFiniteEval { .. })
        ));
        // n = 0 rule supported
        let r0 = mapped_rule(0, p).unwrap();
        assert_eq!(r0.nodes.len(), 1);
        let got = integrate(|_| 1.0, &r0).unwrap();
        let want = base_monomial_integral(0, &p);
        assert!(((got - want) / want).abs() < 1e-12);
    }
}
