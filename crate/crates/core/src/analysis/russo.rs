//! Russo-type derivative formulas checked against central differences of
//! exact probabilities.

use serde::{Deserialize, Serialize};

use super::enumerate::ExactEnumerator;
use super::PhasePoint;
use crate::error::{ArwError, Result};
use crate::randomness::ParticleLaw;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RussoReport {
    pub point: PhasePoint,
    pub law: String,
    pub h: f64,
    /// Central difference of the exact probability.
    pub difference: f64,
    /// Right-hand side of the derivative formula.
    pub formula: f64,
    pub residual: f64,
}

fn check_step(h: f64) -> Result<()> {
    if !(1e-6..=1e-3).contains(&h) {
        return Err(ArwError::InvalidArgument(format!("step {h} outside [1e-6, 1e-3]")));
    }
    Ok(())
}

fn shifted(p: &PhasePoint, dl: f64, dm: f64) -> Result<PhasePoint> {
    PhasePoint::new(p.lambda + dl, p.mu + dm)
}

/// Central difference of `P` in `λ`.
pub fn lambda_difference(e: &ExactEnumerator, p: &PhasePoint, family: &ParticleLaw, h: f64) -> Result<f64> {
    check_step(h)?;
    if p.lambda < h {
        return Err(ArwError::InvalidPhasePoint {
            lambda: p.lambda,
            mu: p.mu,
            reason: format!("λ must be at least the step {h}"),
        });
    }
    let hi = e.probability(&shifted(p, h, 0.0)?, family)?;
    let lo = e.probability(&shifted(p, -h, 0.0)?, family)?;
    Ok((hi - lo) / (2.0 * h))
}

/// Central difference of `P` in `μ`.
pub fn mu_difference(e: &ExactEnumerator, p: &PhasePoint, family: &ParticleLaw, h: f64) -> Result<f64> {
    check_step(h)?;
    let hi = e.probability(&shifted(p, 0.0, h)?, family)?;
    let lo = e.probability(&shifted(p, 0.0, -h)?, family)?;
    Ok((hi - lo) / (2.0 * h))
}

/// `|∂̂_λ P + (1/(1+λ))² Σ_{y,m} P((y,m) s-essential)|`.
pub fn russo_lambda_residual(
    e: &ExactEnumerator,
    p: &PhasePoint,
    family: &ParticleLaw,
    h: f64,
) -> Result<RussoReport> {
    let difference = lambda_difference(e, p, family, h)?;
    let formula = -e.s_essential_sum(p, family)? / (1.0 + p.lambda).powi(2);
    Ok(RussoReport {
        point: *p,
        law: family.family().into(),
        h,
        difference,
        formula,
        residual: (difference - formula).abs(),
    })
}

/// `|∂̂_μ P − Σ_{y,k} P((y,k) p-essential) ν'_{>k}|`.
pub fn russo_mu_residual(e: &ExactEnumerator, p: &PhasePoint, family: &ParticleLaw, h: f64) -> Result<RussoReport> {
    let difference = mu_difference(e, p, family, h)?;
    let formula = e.p_essential_sum(p, family)?;
    Ok(RussoReport {
        point: *p,
        law: family.family().into(),
        h,
        difference,
        formula,
        residual: (difference - formula).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffInequality {
    pub point: PhasePoint,
    pub law: String,
    pub h: f64,
    /// `−∂̂_λ P`.
    pub lhs: f64,
    /// `∂̂_μ P / (λ(1+λ))`.
    pub rhs: f64,
    pub slack: f64,
    /// `rhs + slack − lhs`; nonnegative on a pass.
    pub margin: f64,
    pub pass: bool,
}

/// `−∂_λ P ≤ ∂_μ P / (λ(1+λ))`, with slack `10 h²`.
pub fn diff_inequality_check(
    e: &ExactEnumerator,
    p: &PhasePoint,
    family: &ParticleLaw,
    h: f64,
) -> Result<DiffInequality> {
    if p.lambda <= 0.0 {
        return Err(ArwError::InvalidPhasePoint { lambda: p.lambda, mu: p.mu, reason: "λ must be positive".into() });
    }
    let lhs = -lambda_difference(e, p, family, h)?;
    let rhs = mu_difference(e, p, family, h)? / (p.lambda * (1.0 + p.lambda));
    let slack = 10.0 * h * h;
    let margin = rhs + slack - lhs;
    Ok(DiffInequality { point: *p, law: family.family().into(), h, lhs, rhs, slack, margin, pass: margin >= 0.0 })
}

/// Interpolates `q ↦ P` on `Σ Z(x) + 1` Chebyshev nodes in `q ∈ (0, 1)` and
/// returns the largest deviation at `probes` further points. Zero up to
/// rounding when `P` is a polynomial in `q` of that degree.
pub fn polynomial_fit_residual(e: &ExactEnumerator, mu: f64, family: &ParticleLaw, probes: usize) -> Result<f64> {
    let n = e.gap_count() + 1;
    let lambda_at = |q: f64| q / (1.0 - q);
    let nodes: Vec<f64> = (0..n)
        .map(|j| 0.5 - 0.45 * ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect();
    let values = nodes
        .iter()
        .map(|&q| e.probability(&PhasePoint::new(lambda_at(q), mu)?, family))
        .collect::<Result<Vec<_>>>()?;
    // Barycentric weights for Chebyshev nodes of the first kind.
    let weights: Vec<f64> = (0..n)
        .map(|j| {
            let t = (2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
            (if j % 2 == 0 { 1.0 } else { -1.0 }) * t.sin()
        })
        .collect();
    let interp = |q: f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..n {
            let d = q - nodes[j];
            if d == 0.0 {
                return values[j];
            }
            num += weights[j] / d * values[j];
            den += weights[j] / d;
        }
        num / den
    };
    let mut worst: f64 = 0.0;
    for i in 0..probes {
        let q = 0.05 + 0.9 * (i as f64 + 0.37) / probes as f64;
        let exact = e.probability(&PhasePoint::new(lambda_at(q), mu)?, family)?;
        worst = worst.max((exact - interp(q)).abs());
    }
    Ok(worst)
}
