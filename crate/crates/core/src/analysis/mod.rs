//! Exact and Monte Carlo analysis of event probabilities across the
//! `(λ, μ)` phase diagram.

pub mod curve;
pub mod enumerate;
pub mod montecarlo;
pub mod russo;

use serde::{Deserialize, Serialize};

use crate::error::{ArwError, Result};
use crate::randomness::ParticleLaw;

pub use curve::{estimate_critical_curve, slope_bound_check, CurveConfig, CurveEstimate, CurvePoint, SlopeCheck};
pub use enumerate::{ExactEnumerator, DEFAULT_STATE_LIMIT};
pub use montecarlo::{
    coupled_staircase_check, estimate_activity, monotone_path_check, ActivityConfig, ActivityEstimate,
    MonotoneReport, StaircaseReport,
};
pub use russo::{
    diff_inequality_check, polynomial_fit_residual, russo_lambda_residual, russo_mu_residual, DiffInequality,
    RussoReport,
};

/// A point `(λ, μ)` of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub lambda: f64,
    pub mu: f64,
}

impl PhasePoint {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        let p = PhasePoint { lambda, mu };
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(p.invalid("λ must be finite and nonnegative"));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(p.invalid("μ must be finite and nonnegative"));
        }
        Ok(p)
    }

    fn invalid(&self, reason: &str) -> ArwError {
        ArwError::InvalidPhasePoint { lambda: self.lambda, mu: self.mu, reason: reason.into() }
    }

    /// The law of `family` at density `μ`, rejected outside its domain.
    pub fn law(&self, family: &ParticleLaw) -> Result<ParticleLaw> {
        let law = family.with_mean(self.mu);
        law.validate().map_err(|e| self.invalid(&e.to_string()))?;
        Ok(law)
    }

    /// `q = λ/(1+λ)`, the probability that a gap holds a sleep.
    pub fn sleep_probability(&self) -> f64 {
        self.lambda / (1.0 + self.lambda)
    }
}

/// The region above the semi-line from `origin` with the given slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiLine {
    pub origin: PhasePoint,
    pub slope: f64,
}

impl SemiLine {
    /// Slope `1/(λ(1+λ))`; vertical at `λ = 0`.
    pub fn new(origin: PhasePoint) -> Self {
        let l = origin.lambda;
        let slope = if l > 0.0 { 1.0 / (l * (1.0 + l)) } else { f64::INFINITY };
        SemiLine { origin, slope }
    }

    pub fn with_slope(origin: PhasePoint, slope: f64) -> Result<Self> {
        if slope.is_nan() || slope < 0.0 {
            return Err(ArwError::InvalidArgument(format!("slope {slope} must be nonnegative")));
        }
        Ok(SemiLine { origin, slope })
    }

    pub fn contains(&self, q: &PhasePoint) -> bool {
        const EPS: f64 = 1e-12;
        let dl = q.lambda - self.origin.lambda;
        if dl < -EPS {
            return false;
        }
        if dl <= EPS {
            return q.mu >= self.origin.mu - EPS;
        }
        if self.slope.is_infinite() {
            return false;
        }
        q.mu >= self.origin.mu + self.slope * dl - EPS
    }

    /// The boundary point at `λ = origin.λ + t`.
    pub fn boundary(&self, t: f64) -> Result<PhasePoint> {
        if self.slope.is_infinite() && t > 0.0 {
            return Err(ArwError::InvalidArgument("vertical semi-line has no boundary point at t > 0".into()));
        }
        PhasePoint::new(self.origin.lambda + t, self.origin.mu + self.slope * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semi_line_membership() {
        let p = PhasePoint::new(1.0, 0.3).unwrap();
        let s = SemiLine::new(p);
        assert_eq!(s.slope, 0.5);
        assert!(s.contains(&p));
        assert!(s.contains(&PhasePoint::new(2.0, 0.8).unwrap()));
        assert!(s.contains(&PhasePoint::new(1.0, 0.6).unwrap()));
        assert!(!s.contains(&PhasePoint::new(2.0, 0.79).unwrap()));
        assert!(!s.contains(&PhasePoint::new(0.9, 5.0).unwrap()));
        assert_eq!(s.boundary(1.0).unwrap(), PhasePoint::new(2.0, 0.8).unwrap());
    }

    #[test]
    fn phase_point_domain() {
        assert!(PhasePoint::new(-1.0, 0.5).is_err());
        let p = PhasePoint::new(1.0, 1.2).unwrap();
        assert!(p.law(&ParticleLaw::Bernoulli { mean: 0.5 }).is_err());
        assert!(p.law(&ParticleLaw::Poisson { mean: 0.5 }).is_ok());
        assert_eq!(PhasePoint::new(1.0, 0.0).unwrap().sleep_probability(), 0.5);
    }
}
