//! Essential pairs and the checkable content of the lemmas linking them.
//!
//! Events here depend on a realization only through the jump odometer of a
//! finite domain, so they are increasing and see a gap's sleep count only
//! through whether it is positive.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{Domain, GapFeed, Stabilizer, StabilizeOptions, StabilizationResult};
use crate::error::{ArwError, Result};
use crate::randomness::{ParticleLaw, RandomSource};
use crate::state::{Edit, InstructionSource, ParticleConfig};
use crate::topology::{Topology, VertexId};

/// What an event may look at: the jump odometer on its domain.
#[derive(Debug, Clone, Copy)]
pub struct EventView<'a> {
    pub sites: &'a [VertexId],
    pub jumps: &'a [u64],
}

impl EventView<'_> {
    pub fn jumps_at(&self, x: VertexId) -> u64 {
        self.sites.iter().position(|&s| s == x).map_or(0, |i| self.jumps[i])
    }
}

pub type EventTest = Arc<dyn Fn(&EventView<'_>) -> bool + Send + Sync>;

#[derive(Clone)]
enum EventKind {
    Constant(bool),
    JumpThreshold(Vec<u64>),
    Predicate(EventTest),
}

/// An increasing event on a bounded domain.
#[derive(Clone)]
pub struct EventSpec {
    name: String,
    stabilizer: Arc<Stabilizer>,
    kind: EventKind,
}

impl fmt::Debug for EventSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EventSpec")
            .field("name", &self.name)
            .field("domain", self.stabilizer.domain())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    In,
    Out,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Inconclusive,
}

impl Decision {
    fn both(a: Membership, want_a: bool, b: Membership, want_b: bool) -> Decision {
        match (a, b) {
            (Membership::Inconclusive, _) | (_, Membership::Inconclusive) => Decision::Inconclusive,
            _ if (a == Membership::In) == want_a && (b == Membership::In) == want_b => Decision::Yes,
            _ => Decision::No,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Decision::Yes
    }
}

impl EventSpec {
    /// `{M(x) ≥ H(x) for all x in K}`.
    pub fn jump_threshold(topology: Topology, domain: Domain, threshold: Vec<u64>) -> Result<Self> {
        if threshold.len() != domain.len() {
            return Err(ArwError::InvalidDomain(format!(
                "{} thresholds for {} sites",
                threshold.len(),
                domain.len()
            )));
        }
        let name = format!("M >= {threshold:?}");
        Ok(EventSpec {
            name,
            stabilizer: Arc::new(Stabilizer::new(topology, domain)?),
            kind: EventKind::JumpThreshold(threshold),
        })
    }

    /// An event given by a test on the jump odometer. The test must be
    /// nondecreasing in every coordinate.
    pub fn predicate(topology: Topology, domain: Domain, name: &str, test: EventTest) -> Result<Self> {
        Ok(EventSpec {
            name: name.to_string(),
            stabilizer: Arc::new(Stabilizer::new(topology, domain)?),
            kind: EventKind::Predicate(test),
        })
    }

    pub fn constant(topology: Topology, domain: Domain, value: bool) -> Result<Self> {
        Ok(EventSpec {
            name: if value { "always".into() } else { "never".into() },
            stabilizer: Arc::new(Stabilizer::new(topology, domain)?),
            kind: EventKind::Constant(value),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        self.stabilizer.domain()
    }

    pub fn topology(&self) -> &Topology {
        self.stabilizer.topology()
    }

    pub fn stabilizer(&self) -> &Stabilizer {
        &self.stabilizer
    }

    pub fn thresholds(&self) -> Option<&[u64]> {
        match &self.kind {
            EventKind::JumpThreshold(h) => Some(h),
            _ => None,
        }
    }

    pub fn holds(&self, view: &EventView<'_>) -> bool {
        match &self.kind {
            EventKind::Constant(b) => *b,
            EventKind::JumpThreshold(h) => view.jumps.iter().zip(h).all(|(m, h)| m >= h),
            EventKind::Predicate(t) => t(view),
        }
    }

    pub fn run<F: GapFeed + ?Sized>(
        &self,
        eta: &ParticleConfig,
        feed: &F,
        budget: u64,
    ) -> Result<StabilizationResult> {
        let opts = StabilizeOptions { budget, relevant: true, ..Default::default() };
        self.stabilizer.run(eta, feed, &opts)
    }

    pub fn membership<F: GapFeed + ?Sized>(
        &self,
        eta: &ParticleConfig,
        feed: &F,
        budget: u64,
    ) -> Result<Membership> {
        if let EventKind::Constant(b) = self.kind {
            return Ok(if b { Membership::In } else { Membership::Out });
        }
        let r = self.run(eta, feed, budget)?;
        Ok(self.classify(&r))
    }

    pub fn classify(&self, r: &StabilizationResult) -> Membership {
        if !r.halt.is_conclusive() {
            return Membership::Inconclusive;
        }
        let view = EventView { sites: &r.sites, jumps: &r.jumps };
        if self.holds(&view) {
            Membership::In
        } else {
            Membership::Out
        }
    }
}

/// `(η, Γ_-^{y,m}τ) ∈ A` and `(η, Γ_1^{y,m}τ) ∉ A`. Never reads `S^{y,m}`.
pub fn is_s_essential(
    event: &EventSpec,
    eta: &ParticleConfig,
    tau: &InstructionSource,
    y: VertexId,
    m: u64,
    budget: u64,
) -> Result<Decision> {
    let minus = event.membership(eta, &tau.gamma_minus(y, m), budget)?;
    let one = event.membership(eta, &tau.gamma_one(y, m), budget)?;
    Ok(Decision::both(minus, true, one, false))
}

/// `(η^{(y,k)}, τ) ∉ A` and `(η^{(y,k+1)}, τ) ∈ A`. Never reads `η(y)`.
pub fn is_p_essential(
    event: &EventSpec,
    eta: &ParticleConfig,
    tau: &InstructionSource,
    y: VertexId,
    k: u32,
    budget: u64,
) -> Result<Decision> {
    let low = event.membership(&eta.edit(y, Edit::SetCount(k)), tau, budget)?;
    let high = event.membership(&eta.edit(y, Edit::SetCount(k + 1)), tau, budget)?;
    Ok(Decision::both(low, false, high, true))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "outcome")]
pub enum RemovalCheck {
    Pass,
    Fail { witness: String },
    /// `n = M(y)`: no claim; records whether the odometer moved.
    Excluded { changed: bool },
    Inconclusive,
}

/// Removing the sleeps of gap `n ≠ M(y)` at `y` leaves the jump odometer
/// unchanged.
pub fn check_removal_invariance(
    stabilizer: &Stabilizer,
    eta: &ParticleConfig,
    tau: &InstructionSource,
    y: VertexId,
    n: u64,
    budget: u64,
) -> Result<RemovalCheck> {
    let opts = StabilizeOptions { budget, ..Default::default() };
    let base = stabilizer.run(eta, tau, &opts)?;
    let cut = stabilizer.run(eta, &tau.gamma_minus(y, n), &opts)?;
    if !base.halt.is_conclusive() || !cut.halt.is_conclusive() {
        return Ok(RemovalCheck::Inconclusive);
    }
    let changed = base.jumps != cut.jumps;
    if base.jumps_at(y) == n {
        return Ok(RemovalCheck::Excluded { changed });
    }
    Ok(if changed {
        RemovalCheck::Fail {
            witness: format!("y={y:?} n={n}: M={:?} became {:?}", base.jumps, cut.jumps),
        }
    } else {
        RemovalCheck::Pass
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "outcome")]
pub enum StrictIncrease {
    /// The hypotheses do not hold on this instance.
    Vacuous,
    Pass,
    Fail { witness: String },
    Inconclusive,
}

/// If `(y, M(y))` is s-essential for a jump-threshold event and
/// `S^{y,M(y)} > 0`, then one more particle at `y` raises `M(y)`.
pub fn check_strict_increase(
    event: &EventSpec,
    eta: &ParticleConfig,
    tau: &InstructionSource,
    y: VertexId,
    budget: u64,
) -> Result<StrictIncrease> {
    let base = event.run(eta, tau, budget)?;
    if !base.halt.is_conclusive() {
        return Ok(StrictIncrease::Inconclusive);
    }
    let my = base.jumps_at(y);
    if tau.sleeps(y, my)? == 0 {
        return Ok(StrictIncrease::Vacuous);
    }
    match is_s_essential(event, eta, tau, y, my, budget)? {
        Decision::Inconclusive => return Ok(StrictIncrease::Inconclusive),
        Decision::No => return Ok(StrictIncrease::Vacuous),
        Decision::Yes => {}
    }
    let more = event.run(&eta.edit(y, Edit::AddOne), tau, budget)?;
    if !more.halt.is_conclusive() {
        return Ok(StrictIncrease::Inconclusive);
    }
    Ok(if more.jumps_at(y) > my {
        StrictIncrease::Pass
    } else {
        StrictIncrease::Fail {
            witness: format!("y={y:?}: M(y)={my} with and {} without the extra particle", more.jumps_at(y)),
        }
    })
}

/// One row of an essential-pair scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub vertex: VertexId,
    pub index: u64,
    pub s_essential: Decision,
    pub p_essential: Decision,
    pub sleeps_positive: bool,
    pub jumps: u64,
}

/// Scans `(y, j)` for `y ∈ K` and `j ≤ M(y) + 1` (and up to the jump cap,
/// if any). Pairs beyond cannot be essential for a bounded-domain event.
pub fn scan(
    event: &EventSpec,
    eta: &ParticleConfig,
    tau: &InstructionSource,
    budget: u64,
) -> Result<Vec<ScanRow>> {
    let base = event.run(eta, tau, budget)?;
    let dom = event.domain();
    let mut rows = Vec::new();
    for (i, &y) in dom.sites().iter().enumerate() {
        let my = base.jumps[i];
        let top = dom.caps()[i].map_or(my + 1, |z| z.max(my + 1));
        for j in 0..=top {
            rows.push(ScanRow {
                vertex: y,
                index: j,
                s_essential: is_s_essential(event, eta, tau, y, j, budget)?,
                p_essential: is_p_essential(event, eta, tau, y, j as u32, budget)?,
                sleeps_positive: tau.sleeps(y, j)? > 0,
                jumps: my,
            });
        }
    }
    Ok(rows)
}

/// Parameters of the randomized lemma sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub topology: Topology,
    pub radius: u32,
    /// `None` for plain stabilization of `K`; otherwise uniform jump caps.
    pub jump_cap: Option<u64>,
    pub instances: u64,
    pub seed: u64,
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    pub budget: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub instances: u64,
    pub removal_checked: u64,
    pub removal_violations: u64,
    pub removal_excluded: u64,
    pub removal_excluded_changed: u64,
    /// s-essential with positive gap away from `M(y)`.
    pub emptiness_violations: u64,
    /// Two gap indices at one vertex both s-essential with positive gap.
    pub uniqueness_violations: u64,
    pub qualifying: u64,
    pub inclusion_violations: u64,
    pub strict_violations: u64,
    pub inconclusive: u64,
    pub witnesses: Vec<String>,
}

impl SweepReport {
    fn merge(mut self, o: SweepReport) -> SweepReport {
        self.instances += o.instances;
        self.removal_checked += o.removal_checked;
        self.removal_violations += o.removal_violations;
        self.removal_excluded += o.removal_excluded;
        self.removal_excluded_changed += o.removal_excluded_changed;
        self.emptiness_violations += o.emptiness_violations;
        self.uniqueness_violations += o.uniqueness_violations;
        self.qualifying += o.qualifying;
        self.inclusion_violations += o.inclusion_violations;
        self.strict_violations += o.strict_violations;
        self.inconclusive += o.inconclusive;
        self.witnesses.extend(o.witnesses);
        self.witnesses.truncate(10);
        self
    }

    pub fn violations(&self) -> u64 {
        self.removal_violations
            + self.emptiness_violations
            + self.uniqueness_violations
            + self.inclusion_violations
            + self.strict_violations
    }
}

/// Checks removal invariance, the emptiness and inclusion relations, and the
/// strict increase on random instances. Half of the instances use the
/// threshold `H = M + e_y`, which sits right at the event's edge so that
/// the hypotheses of the inclusion lemma are met often.
pub fn lemma_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.lambdas.is_empty() || cfg.mus.is_empty() {
        return Err(ArwError::InvalidArgument("sweep needs at least one λ and one μ".into()));
    }
    let t = cfg.topology;
    let sites = t.ball(t.origin(), cfg.radius)?;
    let domain = match cfg.jump_cap {
        None => Domain::uncapped(sites.clone())?,
        Some(z) => Domain::with_uniform_cap(sites.clone(), z, crate::engine::CapStyle::Jumps)?,
    };
    let stabilizer = Stabilizer::new(t, domain.clone())?;
    (0..cfg.instances)
        .into_par_iter()
        .map(|rep| sweep_instance(cfg, &stabilizer, rep))
        .try_reduce(SweepReport::default, |a, b| Ok(a.merge(b)))
}

fn sweep_instance(cfg: &SweepConfig, st: &Stabilizer, rep: u64) -> Result<SweepReport> {
    let t = *st.topology();
    let src = RandomSource::new(cfg.seed, rep);
    let pick = |slot: u64, n: usize| (src.bits(7, VertexId(0), slot) % n as u64) as usize;
    let lambda = cfg.lambdas[pick(0, cfg.lambdas.len())];
    let mu = cfg.mus[pick(1, cfg.mus.len())];
    let law = ParticleLaw::poisson(mu)?;
    let sites = st.domain().sites().to_vec();
    let eta = ParticleConfig::sample(&sites, &law, &src, &Default::default());
    let tau = InstructionSource::lazy(t, src, lambda)?;
    let mut out = SweepReport { instances: 1, ..Default::default() };
    let base = st.run(&eta, &tau, &StabilizeOptions { budget: cfg.budget, ..Default::default() })?;
    if !base.halt.is_conclusive() {
        out.inconclusive += 1;
        return Ok(out);
    }
    let h: Vec<u64> = if pick(2, 2) == 0 {
        let bump = pick(3, sites.len());
        base.jumps.iter().enumerate().map(|(i, &m)| m + u64::from(i == bump)).collect()
    } else {
        (0..sites.len()).map(|i| pick(10 + i as u64, 4) as u64).collect()
    };
    let event = EventSpec::jump_threshold(t, st.domain().clone(), h)?;
    for (i, &y) in sites.iter().enumerate() {
        let my = base.jumps[i];
        let mut positive_essential = 0;
        for n in 0..=my + 1 {
            match check_removal_invariance(st, &eta, &tau, y, n, cfg.budget)? {
                RemovalCheck::Pass => out.removal_checked += 1,
                RemovalCheck::Fail { witness } => {
                    out.removal_checked += 1;
                    out.removal_violations += 1;
                    out.witnesses.push(format!("rep {rep}: {witness}"));
                }
                RemovalCheck::Excluded { changed } => {
                    out.removal_excluded += 1;
                    out.removal_excluded_changed += u64::from(changed);
                }
                RemovalCheck::Inconclusive => out.inconclusive += 1,
            }
            let s_pos = tau.sleeps(y, n)? > 0;
            match is_s_essential(&event, &eta, &tau, y, n, cfg.budget)? {
                Decision::Inconclusive => out.inconclusive += 1,
                Decision::Yes if s_pos => {
                    positive_essential += 1;
                    if n != my {
                        out.emptiness_violations += 1;
                        out.witnesses.push(format!("rep {rep}: ({y:?},{n}) s-essential with M(y)={my}"));
                    }
                }
                _ => {}
            }
        }
        if positive_essential > 1 {
            out.uniqueness_violations += 1;
        }
        // Hypotheses of the inclusion and strict-increase lemmas.
        if tau.sleeps(y, my)? > 0 && is_s_essential(&event, &eta, &tau, y, my, cfg.budget)?.is_yes() {
            out.qualifying += 1;
            let j = eta.count(y);
            match is_p_essential(&event, &eta, &tau, y, j, cfg.budget)? {
                Decision::Yes => {}
                Decision::No => {
                    out.inclusion_violations += 1;
                    out.witnesses.push(format!("rep {rep}: ({y:?},{j}) not p-essential"));
                }
                Decision::Inconclusive => out.inconclusive += 1,
            }
            match check_strict_increase(&event, &eta, &tau, y, cfg.budget)? {
                StrictIncrease::Pass => {}
                StrictIncrease::Fail { witness } => {
                    out.strict_violations += 1;
                    out.witnesses.push(format!("rep {rep}: {witness}"));
                }
                StrictIncrease::Vacuous => {
                    out.strict_violations += 1;
                    out.witnesses.push(format!("rep {rep}: hypotheses changed between checks"));
                }
                StrictIncrease::Inconclusive => out.inconclusive += 1,
            }
        }
    }
    Ok(out)
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instances, removal {}/{} ok ({} excluded, {} moved), emptiness {}, uniqueness {}, \
             inclusion {} of {}, strict {}, inconclusive {}",
            self.instances,
            self.removal_checked - self.removal_violations,
            self.removal_checked,
            self.removal_excluded,
            self.removal_excluded_changed,
            self.emptiness_violations,
            self.uniqueness_violations,
            self.inclusion_violations,
            self.qualifying,
            self.strict_violations,
            self.inconclusive
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{CapStyle, DEFAULT_BUDGET};
    use crate::state::{ExplicitArray, InstructionSlot};
    use InstructionSlot::{Jump as J, Sleep as S};

    const O: VertexId = VertexId(0);

    fn one_site_event() -> EventSpec {
        let dom = Domain::with_uniform_cap(vec![O], 1, CapStyle::Jumps).unwrap();
        EventSpec::jump_threshold(Topology::Line, dom, vec![1]).unwrap()
    }

    fn tau0(slots: &[InstructionSlot]) -> InstructionSource {
        InstructionSource::explicit(Topology::Line, [(O, ExplicitArray::from_slots(slots))].into()).unwrap()
    }

    #[test]
    fn constant_events_have_no_essential_pairs() {
        let dom = Domain::with_uniform_cap(vec![O], 1, CapStyle::Jumps).unwrap();
        let yes = EventSpec::constant(Topology::Line, dom.clone(), true).unwrap();
        let no = EventSpec::constant(Topology::Line, dom, false).unwrap();
        let eta = ParticleConfig::from_counts([(O, 1)]);
        let tau = tau0(&[S, J(1)]);
        for m in 0..3 {
            assert_eq!(is_s_essential(&yes, &eta, &tau, O, m, DEFAULT_BUDGET).unwrap(), Decision::No);
            assert_eq!(is_p_essential(&no, &eta, &tau, O, m as u32, DEFAULT_BUDGET).unwrap(), Decision::No);
        }
    }

    #[test]
    fn one_site_sleeping_essential() {
        let e = one_site_event();
        let eta = ParticleConfig::from_counts([(O, 1)]);
        let tau = tau0(&[J(1), J(1)]);
        assert_eq!(is_s_essential(&e, &eta, &tau, O, 0, DEFAULT_BUDGET).unwrap(), Decision::Yes);
        assert_eq!(is_s_essential(&e, &eta, &tau, O, 1, DEFAULT_BUDGET).unwrap(), Decision::No);
    }

    #[test]
    fn one_site_particle_essential() {
        let e = one_site_event();
        let eta = ParticleConfig::from_counts([(O, 1)]);
        let jump_first = tau0(&[J(1), J(1)]);
        assert_eq!(is_p_essential(&e, &eta, &jump_first, O, 0, DEFAULT_BUDGET).unwrap(), Decision::Yes);
        let sleep_first = tau0(&[S, J(1), J(1)]);
        assert_eq!(is_p_essential(&e, &eta, &sleep_first, O, 0, DEFAULT_BUDGET).unwrap(), Decision::No);
        assert_eq!(is_p_essential(&e, &eta, &sleep_first, O, 1, DEFAULT_BUDGET).unwrap(), Decision::Yes);
    }

    #[test]
    fn one_site_strict_increase() {
        let e = one_site_event();
        let eta = ParticleConfig::from_counts([(O, 1)]);
        let tau = tau0(&[S, J(1), J(1)]);
        assert_eq!(check_strict_increase(&e, &eta, &tau, O, DEFAULT_BUDGET).unwrap(), StrictIncrease::Pass);
        let jump_first = tau0(&[J(1), J(1)]);
        assert_eq!(
            check_strict_increase(&e, &eta, &jump_first, O, DEFAULT_BUDGET).unwrap(),
            StrictIncrease::Vacuous
        );
    }

    #[test]
    fn removal_beyond_odometer_is_harmless() {
        let st = Stabilizer::new(Topology::Line, Domain::uncapped(vec![O]).unwrap()).unwrap();
        let eta = ParticleConfig::from_counts([(O, 1)]);
        let tau = tau0(&[S, J(1), S, S, J(0)]);
        // M(0) = 0: gap 1 is never read, gap 0 is the excluded case.
        assert_eq!(check_removal_invariance(&st, &eta, &tau, O, 1, DEFAULT_BUDGET).unwrap(), RemovalCheck::Pass);
        assert_eq!(
            check_removal_invariance(&st, &eta, &tau, O, 0, DEFAULT_BUDGET).unwrap(),
            RemovalCheck::Excluded { changed: true }
        );
    }

    #[test]
    fn removal_below_odometer_on_random_line_instances() {
        let t = Topology::Line;
        let st = Stabilizer::new(t, Domain::ball(&t, O, 2).unwrap()).unwrap();
        let law = ParticleLaw::poisson(1.2).unwrap();
        let mut checked = 0;
        for rep in 0..1000 {
            let src = RandomSource::new(31, rep);
            let eta = ParticleConfig::sample(st.domain().sites(), &law, &src, &Default::default());
            let tau = InstructionSource::lazy(t, src, 1.0).unwrap();
            let base = st.run(&eta, &tau, &Default::default()).unwrap();
            for (i, &y) in st.domain().sites().iter().enumerate() {
                for n in 0..base.jumps[i] {
                    let r = check_removal_invariance(&st, &eta, &tau, y, n, DEFAULT_BUDGET).unwrap();
                    assert_eq!(r, RemovalCheck::Pass);
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn scan_lists_pairs_up_to_the_cap() {
        let e = one_site_event();
        let eta = ParticleConfig::from_counts([(O, 1)]);
        let rows = scan(&e, &eta, &tau0(&[J(1), J(1), J(1)]), DEFAULT_BUDGET).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].s_essential, Decision::Yes);
        assert_eq!(rows[0].jumps, 1);
    }

    #[test]
    fn small_sweeps_are_clean() {
        for cap in [None, Some(2)] {
            let cfg = SweepConfig {
                topology: Topology::Line,
                radius: 2,
                jump_cap: cap,
                instances: 300,
                seed: 5,
                lambdas: vec![0.5, 1.0, 2.0],
                mus: vec![0.5, 1.0],
                budget: DEFAULT_BUDGET,
            };
            let r = lemma_sweep(&cfg).unwrap();
            assert_eq!(r.violations(), 0, "{r} {:?}", r.witnesses);
            assert_eq!(r.inconclusive, 0);
            assert!(r.qualifying > 0);
        }
    }
}
