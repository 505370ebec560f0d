//! Coupled Monte Carlo estimates.
//!
//! Replicate `r` of every estimate draws from `RandomSource::new(seed, r)`,
//! so runs at different `(λ, μ)` share their uniforms: particle counts are
//! nondecreasing in `μ` and sleep counts nondecreasing in `λ`, replicate by
//! replicate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{ExactEnumerator, DEFAULT_STATE_LIMIT};
use super::{PhasePoint, SemiLine};
use crate::engine::{Domain, HaltReason, StabilizeOptions, Stabilizer, DEFAULT_BUDGET};
use crate::error::{ArwError, Result};
use crate::essential::{EventSpec, Membership};
use crate::randomness::{ParticleLaw, RandomSource};
use crate::state::{ActivityFunction, InstructionSource, ParticleConfig};
use crate::topology::{Topology, VertexId};

/// Settings for estimating `P(M_{B_L}(o) > H)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityConfig {
    pub topology: Topology,
    pub radius: u32,
    pub threshold: u64,
    pub samples: u64,
    pub seed: u64,
    pub budget: u64,
    pub law: ParticleLaw,
    #[serde(default)]
    pub xi: ActivityFunction,
}

impl ActivityConfig {
    /// `L = 64` on the line and cycle, `16` elsewhere; `H = 10`.
    pub fn defaults(topology: Topology) -> Self {
        let radius = match topology {
            Topology::Line | Topology::Cycle { .. } | Topology::Path { .. } => 64,
            _ => 16,
        };
        ActivityConfig {
            topology,
            radius,
            threshold: 10,
            samples: 1000,
            seed: 0,
            budget: DEFAULT_BUDGET,
            law: ParticleLaw::Poisson { mean: 1.0 },
            xi: ActivityFunction::AllActive,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.radius == 0 || self.samples == 0 || self.budget == 0 {
            return Err(ArwError::InvalidArgument("radius, samples and budget must be positive".into()));
        }
        self.xi.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityEstimate {
    pub point: PhasePoint,
    pub successes: u64,
    pub samples: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Replicates stopped by the budget; counted as exceeding `H`.
    pub budget_exhausted: u64,
}

/// 95% Wilson score interval.
pub fn wilson(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = n as f64;
    let p = successes as f64 / n;
    let d = 1.0 + z * z / n;
    let c = (p + z * z / (2.0 * n)) / d;
    let h = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / d;
    let lo = if successes == 0 { 0.0 } else { (c - h).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (c + h).min(1.0) };
    (lo, hi)
}

struct ActivityRunner {
    stabilizer: Stabilizer,
    origin: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Below,
    Above,
    Exhausted,
}

impl ActivityRunner {
    fn new(cfg: &ActivityConfig) -> Result<Self> {
        cfg.validate()?;
        let origin = cfg.topology.origin();
        let domain = Domain::ball(&cfg.topology, origin, cfg.radius)?;
        Ok(ActivityRunner { stabilizer: Stabilizer::new(cfg.topology, domain)?, origin })
    }

    fn replicate(&self, cfg: &ActivityConfig, p: &PhasePoint, law: &ParticleLaw, r: u64) -> Result<Outcome> {
        let src = RandomSource::new(cfg.seed, r);
        let eta = ParticleConfig::sample(self.stabilizer.domain().sites(), law, &src, &cfg.xi);
        let tau = InstructionSource::lazy(cfg.topology, src, p.lambda)?;
        let opts = StabilizeOptions {
            budget: cfg.budget,
            relevant: true,
            stop_when_jumps_exceed: Some((self.origin, cfg.threshold)),
            ..Default::default()
        };
        let res = self.stabilizer.run(&eta, &tau, &opts)?;
        Ok(match res.halt {
            HaltReason::ThresholdReached => Outcome::Above,
            HaltReason::BudgetExhausted => Outcome::Exhausted,
            _ if res.jumps_at(self.origin) > cfg.threshold => Outcome::Above,
            _ => Outcome::Below,
        })
    }

    fn estimate(&self, cfg: &ActivityConfig, p: &PhasePoint) -> Result<ActivityEstimate> {
        let law = p.law(&cfg.law)?;
        let outcomes = (0..cfg.samples)
            .into_par_iter()
            .map(|r| self.replicate(cfg, p, &law, r))
            .collect::<Result<Vec<_>>>()?;
        let above = outcomes.iter().filter(|&&o| o == Outcome::Above).count() as u64;
        let exhausted = outcomes.iter().filter(|&&o| o == Outcome::Exhausted).count() as u64;
        let successes = above + exhausted;
        let (ci_lo, ci_hi) = wilson(successes, cfg.samples);
        Ok(ActivityEstimate {
            point: *p,
            successes,
            samples: cfg.samples,
            estimate: successes as f64 / cfg.samples as f64,
            ci_lo,
            ci_hi,
            budget_exhausted: exhausted,
        })
    }
}

/// Fraction of replicates with `M_{B_L}(o) > H`.
pub fn estimate_activity(p: &PhasePoint, cfg: &ActivityConfig) -> Result<ActivityEstimate> {
    ActivityRunner::new(cfg)?.estimate(cfg, p)
}

/// Estimates over a grid of points with one prepared domain.
pub fn estimate_activity_grid(points: &[PhasePoint], cfg: &ActivityConfig) -> Result<Vec<ActivityEstimate>> {
    let runner = ActivityRunner::new(cfg)?;
    points.iter().map(|p| runner.estimate(cfg, p)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub p: PhasePoint,
    pub q: PhasePoint,
    pub prob_p: f64,
    pub prob_q: f64,
    /// Standard error of `P̂_q − P̂_p`; zero for exact comparisons.
    pub joint_se: f64,
    pub exact: bool,
    pub samples: u64,
    pub inconclusive: u64,
    pub pass: bool,
}

/// Replicate membership for Monte Carlo comparisons. Single-site
/// thresholds stop as soon as they are met.
fn sampled_membership(
    event: &EventSpec,
    eta: &ParticleConfig,
    tau: &InstructionSource,
    budget: u64,
) -> Result<Membership> {
    let single = event.thresholds().and_then(|h| {
        let mut pos = h.iter().enumerate().filter(|(_, &v)| v > 0);
        match (pos.next(), pos.next()) {
            (Some((i, &v)), None) => Some((event.domain().sites()[i], v - 1)),
            _ => None,
        }
    });
    let Some(stop) = single else {
        return event.membership(eta, tau, budget);
    };
    let opts = StabilizeOptions { budget, relevant: true, stop_when_jumps_exceed: Some(stop), ..Default::default() };
    let r = event.stabilizer().run(eta, tau, &opts)?;
    Ok(match r.halt {
        HaltReason::ThresholdReached => Membership::In,
        _ => event.classify(&r),
    })
}

/// `P_p(A) ≤ P_q(A)` for `q` in the semi-line region of `p`. Exact when the
/// event can be enumerated, otherwise by coupled replicates within two joint
/// standard errors.
pub fn monotone_path_check(
    event: &EventSpec,
    p: &PhasePoint,
    q: &PhasePoint,
    family: &ParticleLaw,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<MonotoneReport> {
    if !SemiLine::new(*p).contains(q) {
        return Err(ArwError::InvalidArgument(format!(
            "({}, {}) lies outside the semi-line region of ({}, {})",
            q.lambda, q.mu, p.lambda, p.mu
        )));
    }
    let law_p = p.law(family)?;
    let law_q = q.law(family)?;
    if let Ok(e) = ExactEnumerator::new(event, DEFAULT_STATE_LIMIT) {
        let prob_p = e.probability(p, family)?;
        let prob_q = e.probability(q, family)?;
        return Ok(MonotoneReport {
            p: *p,
            q: *q,
            prob_p,
            prob_q,
            joint_se: 0.0,
            exact: true,
            samples: 0,
            inconclusive: 0,
            pass: prob_p <= prob_q,
        });
    }
    if samples < 2 {
        return Err(ArwError::InvalidArgument("need at least two samples".into()));
    }
    let t = *event.topology();
    let sites = event.domain().sites().to_vec();
    let pairs = (0..samples)
        .into_par_iter()
        .map(|r| -> Result<(Membership, Membership)> {
            let src = RandomSource::new(seed, r);
            let run = |pt: &PhasePoint, law: &ParticleLaw| -> Result<Membership> {
                let eta = ParticleConfig::sample(&sites, law, &src, &ActivityFunction::AllActive);
                let tau = InstructionSource::lazy(t, src, pt.lambda)?;
                sampled_membership(event, &eta, &tau, budget)
            };
            Ok((run(p, &law_p)?, run(q, &law_q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut inconclusive = 0;
    let mut diffs = Vec::with_capacity(pairs.len());
    let (mut np, mut nq) = (0u64, 0u64);
    for (a, b) in pairs {
        if a == Membership::Inconclusive || b == Membership::Inconclusive {
            inconclusive += 1;
            continue;
        }
        let (a, b) = (u64::from(a == Membership::In), u64::from(b == Membership::In));
        np += a;
        nq += b;
        diffs.push(b as f64 - a as f64);
    }
    let n = diffs.len() as f64;
    if n < 2.0 {
        return Err(ArwError::InvalidArgument("fewer than two conclusive replicates".into()));
    }
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let joint_se = (var / n).sqrt();
    let (prob_p, prob_q) = (np as f64 / n, nq as f64 / n);
    Ok(MonotoneReport {
        p: *p,
        q: *q,
        prob_p,
        prob_q,
        joint_se,
        exact: false,
        samples,
        inconclusive,
        pass: prob_p <= prob_q + 2.0 * joint_se,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseReport {
    pub points: Vec<PhasePoint>,
    pub replicates: u64,
    /// A `μ` step that lowered a replicate's indicator.
    pub mu_step_violations: u64,
    /// A `λ` step that raised a replicate's indicator.
    pub lambda_step_violations: u64,
    /// Steps along the path where a replicate's indicator dropped. These are
    /// allowed: only the probabilities are ordered along the path.
    pub path_drops: u64,
    pub estimates: Vec<f64>,
    pub pass: bool,
}

/// Staircase from `p` to `q` alternating `μ` and `λ` steps of at most `step`.
fn staircase(p: &PhasePoint, q: &PhasePoint, step: f64) -> Result<Vec<(PhasePoint, bool)>> {
    let dl = q.lambda - p.lambda;
    let dm = q.mu - p.mu;
    let n = ((dl.abs().max(dm.abs()) / step).ceil() as usize).max(1);
    let mut out = vec![(*p, false)];
    for i in 1..=n {
        let f = i as f64 / n as f64;
        let prev = out.last().unwrap().0;
        out.push((PhasePoint::new(prev.lambda, p.mu + f * dm)?, true));
        out.push((PhasePoint::new(p.lambda + f * dl, p.mu + f * dm)?, false));
    }
    Ok(out)
}

/// Per-replicate monotonicity along a staircase from `p` to `q` under the
/// coupling: the indicator of `M_{B_L}(o) > H` never drops on a `μ` step and
/// never rises on a `λ` step.
pub fn coupled_staircase_check(
    p: &PhasePoint,
    q: &PhasePoint,
    step: f64,
    cfg: &ActivityConfig,
) -> Result<StaircaseReport> {
    if !(step > 0.0) {
        return Err(ArwError::InvalidArgument("step must be positive".into()));
    }
    let path = staircase(p, q, step)?;
    let runner = ActivityRunner::new(cfg)?;
    let laws = path.iter().map(|(pt, _)| pt.law(&cfg.law)).collect::<Result<Vec<_>>>()?;
    let rows = (0..cfg.samples)
        .into_par_iter()
        .map(|r| {
            path.iter()
                .zip(&laws)
                .map(|((pt, _), law)| runner.replicate(cfg, pt, law, r).map(|o| o != Outcome::Below))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut mu_v, mut lambda_v, mut drops) = (0, 0, 0);
    let mut hits = vec![0u64; path.len()];
    for row in &rows {
        for (i, &b) in row.iter().enumerate() {
            hits[i] += u64::from(b);
        }
        for i in 1..row.len() {
            let (a, b) = (row[i - 1], row[i]);
            if a && !b {
                drops += 1;
            }
            if path[i].1 && a && !b {
                mu_v += 1;
            }
            if !path[i].1 && !a && b {
                lambda_v += 1;
            }
        }
    }
    Ok(StaircaseReport {
        points: path.iter().map(|(pt, _)| *pt).collect(),
        replicates: cfg.samples,
        mu_step_violations: mu_v,
        lambda_step_violations: lambda_v,
        path_drops: drops,
        estimates: hits.iter().map(|&h| h as f64 / cfg.samples as f64).collect(),
        pass: mu_v == 0 && lambda_v == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::CapStyle;

    fn small(samples: u64) -> ActivityConfig {
        ActivityConfig { radius: 16, threshold: 5, samples, seed: 3, ..ActivityConfig::defaults(Topology::Line) }
    }

    #[test]
    fn wilson_interval_brackets() {
        let (lo, hi) = wilson(50, 100);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        let (lo, hi) = wilson(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
    }

    #[test]
    fn no_particles_no_activity() {
        let e = estimate_activity(&PhasePoint::new(1.0, 0.0).unwrap(), &small(200)).unwrap();
        assert_eq!(e.successes, 0);
    }

    #[test]
    fn activity_regimes() {
        let cfg = ActivityConfig { samples: 400, seed: 11, ..ActivityConfig::defaults(Topology::Line) };
        let hot = estimate_activity(&PhasePoint::new(0.1, 0.95).unwrap(), &cfg).unwrap();
        let cold = estimate_activity(&PhasePoint::new(4.0, 0.05).unwrap(), &cfg).unwrap();
        assert!(hot.estimate > 0.9, "{hot:?}");
        assert!(cold.estimate < 0.05, "{cold:?}");
        assert_eq!(hot.budget_exhausted + cold.budget_exhausted, 0);
    }

    #[test]
    fn coupled_grid_is_monotone() {
        let cfg = small(300);
        let lambdas = [0.2, 0.5, 1.0, 2.0, 4.0];
        let mus = [0.2, 0.4, 0.6, 0.8, 1.0];
        let pts: Vec<_> = lambdas
            .iter()
            .flat_map(|&l| mus.iter().map(move |&m| PhasePoint::new(l, m).unwrap()))
            .collect();
        let est = estimate_activity_grid(&pts, &cfg).unwrap();
        let at = |i: usize, j: usize| est[i * mus.len() + j].successes;
        for i in 0..lambdas.len() {
            for j in 0..mus.len() {
                if j + 1 < mus.len() {
                    assert!(at(i, j) <= at(i, j + 1));
                }
                if i + 1 < lambdas.len() {
                    assert!(at(i, j) >= at(i + 1, j));
                }
            }
        }
    }

    #[test]
    fn staircase_respects_coordinatewise_order() {
        let p = PhasePoint::new(1.0, 0.3).unwrap();
        let q = PhasePoint::new(2.0, 0.8).unwrap();
        let r = coupled_staircase_check(&p, &q, 0.05, &small(200)).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.points.first(), Some(&p));
        assert_eq!(r.points.last(), Some(&q));
    }

    #[test]
    fn monotone_path_exact_and_sampled() {
        let t = Topology::Line;
        let dom = Domain::with_uniform_cap(t.ball(t.origin(), 1).unwrap(), 2, CapStyle::Jumps).unwrap();
        let ev = EventSpec::jump_threshold(t, dom, vec![2, 0, 0]).unwrap();
        let pois = ParticleLaw::Poisson { mean: 1.0 };
        let p = PhasePoint::new(1.0, 0.3).unwrap();
        let r = monotone_path_check(&ev, &p, &p, &pois, 0, 0, DEFAULT_BUDGET).unwrap();
        assert!(r.exact && r.pass && r.prob_p == r.prob_q);
        let q = PhasePoint::new(2.0, 0.8).unwrap();
        assert!(monotone_path_check(&ev, &p, &q, &pois, 0, 0, DEFAULT_BUDGET).unwrap().pass);
        let off = PhasePoint::new(2.0, 0.5).unwrap();
        assert!(monotone_path_check(&ev, &p, &off, &pois, 0, 0, DEFAULT_BUDGET).is_err());

        let big = EventSpec::jump_threshold(t, Domain::ball(&t, t.origin(), 16).unwrap(), {
            let mut h = vec![0; 33];
            h[0] = 6;
            h
        })
        .unwrap();
        let up = PhasePoint::new(1.0, 0.6).unwrap();
        let r = monotone_path_check(&big, &p, &up, &pois, 500, 1, DEFAULT_BUDGET).unwrap();
        assert!(!r.exact && r.pass && r.prob_p <= r.prob_q, "{r:?}");
    }
}
