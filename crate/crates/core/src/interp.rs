//! Müntz cardinal functions h_r^σ, the two Lagrange–Müntz basis families,
//! and the three nodal interpolants built on the mapped quadrature nodes.
//!
//! h_r^σ(x) = Π_(j≠r) (x^σ - x_j^σ)/(x_r^σ - x_j^σ) is a polynomial in
//! x^σ with the Kronecker-delta property at the nodes. The first- and
//! second-kind cardinal functions multiply it by (x/x_r)^(σ(β-η-μ)) and
//! (x/x_r)^(ση) ((b^σ-x^σ)/(b^σ-x_r^σ))^α respectively.

use std::sync::Arc;

use crate::error::{MuntzError, Result};
use crate::quadrature::{mapped_rule, MuntzBasisParams, QuadRule};

/// Above this N the cardinal products go through log-magnitude + sign
/// accumulation; the clustered mapped nodes under/overflow raw products.
const LOG_PRODUCT_THRESHOLD: usize = 60;

/// Mapped collocation nodes with the precomputed cardinal denominators.
#[derive(Debug, Clone)]
pub struct MuntzNodeSet {
    params: MuntzBasisParams,
    nodes: Vec<f64>,
    /// x_j^σ, cached once.
    z: Vec<f64>,
    /// Π_(j≠r)(z_r - z_j), same association order as evaluation uses.
    denom: Vec<f64>,
    /// (ln |denom|, sign) for the log path.
    denom_log: Vec<(f64, f64)>,
    /// Base quadrature weights; the closed-form inverses need them.
    weights: Vec<f64>,
    /// Original Gauss–Jacobi nodes on [-1, 1] (exact arguments for
    /// P_j(2(x/b)^σ - 1) at the mapped nodes).
    gauss_nodes: Vec<f64>,
    n: usize,
}

impl MuntzNodeSet {
    /// Build the node set for resolution N (N+1 nodes) from the mapped rule.
    pub fn new(n: usize, params: MuntzBasisParams) -> Result<Arc<Self>> {
        Self::from_rule(&mapped_rule(n, params)?)
    }

    pub fn from_rule(rule: &QuadRule) -> Result<Arc<Self>> {
        let params = rule.params;
        let nodes = rule.nodes.clone();
        let n = rule.n;
        let z: Vec<f64> = nodes.iter().map(|x| x.powf(params.sigma)).collect();
        let mut denom = Vec::with_capacity(n + 1);
        let mut denom_log = Vec::with_capacity(n + 1);
        for r in 0..=n {
            // forward prefix then backward suffix, matching eval order
            let mut fwd = 1.0;
            for j in 0..r {
                fwd *= z[r] - z[j];
            }
            let mut bwd = 1.0;
            for j in (r + 1..=n).rev() {
                bwd *= z[r] - z[j];
            }
            let d = fwd * bwd;
            let mut ln = 0.0;
            let mut sign = 1.0;
            for j in 0..=n {
                if j == r {
                    continue;
                }
                let diff = z[r] - z[j];
                if diff == 0.0 {
                    return Err(MuntzError::InvalidParam(
                        "coincident nodes in cardinal denominator".into(),
                    ));
                }
                ln += diff.abs().ln();
                sign *= diff.signum();
            }
            if n <= LOG_PRODUCT_THRESHOLD && (d == 0.0 || !d.is_finite()) {
                return Err(MuntzError::Overflow("cardinal denominator".into()));
            }
            denom.push(d);
            denom_log.push((ln, sign));
        }
        Ok(Arc::new(Self {
            params,
            nodes,
            z,
            denom,
            denom_log,
            weights: rule.weights.clone(),
            gauss_nodes: rule.gauss_nodes.clone(),
            n,
        }))
    }

    pub fn params(&self) -> &MuntzBasisParams {
        &self.params
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Base quadrature weights paired with the nodes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn z_values(&self) -> &[f64] {
        &self.z
    }

    pub(crate) fn gauss_nodes(&self) -> &[f64] {
        &self.gauss_nodes
    }

    fn check_domain(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && (0.0..=self.params.b).contains(&x)) {
            return Err(MuntzError::Domain(format!(
                "x = {x} outside [0, {}]",
                self.params.b
            )));
        }
        Ok(x.powf(self.params.sigma))
    }

    /// h_r^σ(x).
    pub fn eval_h_sigma(&self, r: usize, x: f64) -> Result<f64> {
        if r > self.n {
            return Err(MuntzError::InvalidParam(format!(
                "cardinal index {r} > N = {}",
                self.n
            )));
        }
        let zx = self.check_domain(x)?;
        if self.n > LOG_PRODUCT_THRESHOLD {
            let mut ln = 0.0;
            let mut sign = 1.0;
            for j in 0..=self.n {
                if j == r {
                    continue;
                }
                let diff = zx - self.z[j];
                if diff == 0.0 {
                    return Ok(0.0);
                }
                ln += diff.abs().ln();
                sign *= diff.signum();
            }
            let (dln, dsign) = self.denom_log[r];
            Ok(sign * dsign * (ln - dln).exp())
        } else {
            let mut fwd = 1.0;
            for j in 0..r {
                fwd *= zx - self.z[j];
            }
            let mut bwd = 1.0;
            for j in (r + 1..=self.n).rev() {
                bwd *= zx - self.z[j];
            }
            Ok(fwd * bwd / self.denom[r])
        }
    }

    /// All cardinal values h_0..h_N at one point in O(N).
    pub fn eval_h_all(&self, x: f64) -> Result<Vec<f64>> {
        let zx = self.check_domain(x)?;
        let m = self.n + 1;
        if self.n > LOG_PRODUCT_THRESHOLD {
            return (0..m).map(|r| self.eval_h_sigma(r, x)).collect();
        }
        let mut prefix = vec![1.0; m + 1];
        for j in 0..m {
            prefix[j + 1] = prefix[j] * (zx - self.z[j]);
        }
        let mut suffix = vec![1.0; m + 1];
        for j in (0..m).rev() {
            suffix[j] = suffix[j + 1] * (zx - self.z[j]);
        }
        Ok((0..m)
            .map(|r| prefix[r] * suffix[r + 1] / self.denom[r])
            .collect())
    }

    /// First- or second-kind Lagrange–Müntz cardinal function.
    pub fn eval_lmf(&self, r: usize, variant: LmfVariant, x: f64) -> Result<f64> {
        let h = self.eval_h_sigma(r, x)?;
        let p = &self.params;
        match variant {
            LmfVariant::First => {
                let e = p.first_kind_exponent();
                let ratio = x / self.nodes[r];
                match pow_ratio(ratio, e) {
                    Some(pf) => Ok(pf * h),
                    None => Err(MuntzError::SingularEndpoint { x, exponent: e }),
                }
            }
            LmfVariant::Second => {
                let e = p.sigma * p.eta;
                let ratio = x / self.nodes[r];
                let zx = x.powf(p.sigma);
                let cut_ratio = (p.b_sigma() - zx) / (p.b_sigma() - self.z[r]);
                let pf1 = pow_ratio(ratio, e);
                let pf2 = pow_ratio(cut_ratio.max(0.0), p.jac.alpha);
                match (pf1, pf2) {
                    (Some(a), Some(b)) => Ok(a * b * h),
                    (None, _) => Err(MuntzError::SingularEndpoint { x, exponent: e }),
                    (_, None) => Err(MuntzError::SingularEndpoint {
                        x,
                        exponent: p.jac.alpha,
                    }),
                }
            }
        }
    }
}

fn pow_ratio(base: f64, expo: f64) -> Option<f64> {
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmfVariant {
    First,
    Second,
}

/// Which interpolation operator a nodal vector is read through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpolantKind {
    /// Plain mapped-Jacobi interpolant (cardinal basis h_r^σ).
    Mji,
    /// First-kind prefactored interpolant.
    Njmi1,
    /// Second-kind prefactored interpolant.
    Njmi2,
}

/// Function samples at the collocation nodes.
#[derive(Debug, Clone)]
pub struct GridFunction {
    nodeset: Arc<MuntzNodeSet>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(nodeset: Arc<MuntzNodeSet>, values: Vec<f64>) -> Result<Self> {
        if values.len() != nodeset.n() + 1 {
            return Err(MuntzError::InvalidParam(format!(
                "grid function length {} does not match N + 1 = {}",
                values.len(),
                nodeset.n() + 1
            )));
        }
        Ok(Self { nodeset, values })
    }

    pub fn nodeset(&self) -> &Arc<MuntzNodeSet> {
        &self.nodeset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Sample f at the nodes.
pub fn interpolate(
    _kind: InterpolantKind,
    f: impl Fn(f64) -> f64,
    ns: &Arc<MuntzNodeSet>,
) -> Result<GridFunction> {
    let mut values = Vec::with_capacity(ns.n() + 1);
    for (j, &x) in ns.nodes().iter().enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(MuntzError::NonFiniteEval { index: j, x });
        }
        values.push(v);
    }
    GridFunction::new(ns.clone(), values)
}

/// Evaluate the selected interpolant of a nodal vector at x.
///
/// The prefactored kinds evaluate as prefactor(x) · Σ_k v_k
/// prefactor(x_k)^(-1) h_k(x), the composition of the plain interpolant
/// with the weight, so x = 0 and x = b stay well defined whenever the
/// prefactor exponents are nonnegative.
pub fn eval_interpolant(kind: InterpolantKind, gf: &GridFunction, x: f64) -> Result<f64> {
    let ns = gf.nodeset();
    let p = ns.params();
    let h = ns.eval_h_all(x)?;
    match kind {
        InterpolantKind::Mji => Ok(h
            .iter()
            .zip(gf.values())
            .map(|(hk, vk)| hk * vk)
            .sum()),
        InterpolantKind::Njmi1 => {
            let e = p.first_kind_exponent();
            let pf = pow_ratio(x, e)
                .ok_or(MuntzError::SingularEndpoint { x, exponent: e })?;
            let mut acc = 0.0;
            for ((hk, vk), xk) in h.iter().zip(gf.values()).zip(ns.nodes()) {
                acc += hk * vk * (-e * xk.ln()).exp();
            }
            Ok(pf * acc)
        }
        InterpolantKind::Njmi2 => {
            let e = p.sigma * p.eta;
            let b_sigma = p.b_sigma();
            let zx = x.powf(p.sigma);
            let pf1 = pow_ratio(x, e)
                .ok_or(MuntzError::SingularEndpoint { x, exponent: e })?;
            let pf2 = pow_ratio((b_sigma - zx).max(0.0), p.jac.alpha)
                .ok_or(MuntzError::SingularEndpoint {
                    x,
                    exponent: p.jac.alpha,
                })?;
            let mut acc = 0.0;
            for (((hk, vk), xk), zk) in h
                .iter()
                .zip(gf.values())
                .zip(ns.nodes())
                .zip(ns.z_values())
            {
                acc += hk * vk * (-e * xk.ln() - p.jac.alpha * (b_sigma - zk).ln()).exp();
            }
            Ok(pf1 * pf2 * acc)
        }
    }
}
