//! Stabilization of finite domains.
//!
//! A [`Stabilizer`] is prepared once per `(topology, domain)` pair and can be
//! run against many configurations and instruction feeds. Particles leaving
//! `K` land on the outer boundary and are never toppled there.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ArwError, Result};
use crate::state::{Comparison, Gap, InstructionSource, ParticleConfig, SiteState, Window};
use crate::topology::{Topology, VertexId};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapStyle {
    /// `Z(x)` bounds the number of instructions used at `x`.
    Instructions,
    /// `Z(x)` bounds the number of jump instructions used at `x`.
    Jumps,
}

/// A finite set `K` with per-site caps (`None` is `∞`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    sites: Vec<VertexId>,
    caps: Vec<Option<u64>>,
    style: CapStyle,
}

impl Domain {
    pub fn new(sites: Vec<VertexId>, caps: Vec<Option<u64>>, style: CapStyle) -> Result<Self> {
        if sites.len() != caps.len() {
            return Err(ArwError::InvalidDomain(format!(
                "{} sites but {} caps",
                sites.len(),
                caps.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = sites.iter().find(|x| !seen.insert(**x)) {
            return Err(ArwError::InvalidDomain(format!("duplicate site {dup:?}")));
        }
        Ok(Domain { sites, caps, style })
    }

    pub fn uncapped(sites: Vec<VertexId>) -> Result<Self> {
        let caps = vec![None; sites.len()];
        Self::new(sites, caps, CapStyle::Instructions)
    }

    pub fn with_uniform_cap(sites: Vec<VertexId>, cap: u64, style: CapStyle) -> Result<Self> {
        let caps = vec![Some(cap); sites.len()];
        Self::new(sites, caps, style)
    }

    pub fn ball(topology: &Topology, center: VertexId, radius: u32) -> Result<Self> {
        Self::uncapped(topology.ball(center, radius)?)
    }

    pub fn sites(&self) -> &[VertexId] {
        &self.sites
    }

    pub fn caps(&self) -> &[Option<u64>] {
        &self.caps
    }

    pub fn style(&self) -> CapStyle {
        self.style
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn index_of(&self, x: VertexId) -> Option<usize> {
        self.sites.iter().position(|&s| s == x)
    }

    pub fn cap(&self, x: VertexId) -> Option<u64> {
        self.index_of(x).and_then(|i| self.caps[i])
    }
}

/// Supplies gaps to the engine. `site` is the index of `vertex` in the
/// domain, which lets table-driven feeds skip hashing.
pub trait GapFeed {
    fn gap(&self, site: usize, vertex: VertexId, index: u64) -> Result<Gap>;
}

impl GapFeed for InstructionSource {
    fn gap(&self, _site: usize, vertex: VertexId, index: u64) -> Result<Gap> {
        InstructionSource::gap(self, vertex, index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "seed")]
pub enum Policy {
    Fifo,
    /// Uniformly random unstable site, one instruction at a time.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizeOptions {
    pub budget: u64,
    pub policy: Policy,
    /// Consume at most one sleep per gap. `m` is then not reported.
    pub relevant: bool,
    /// Halt as soon as the jump count at this vertex exceeds the bound.
    pub stop_when_jumps_exceed: Option<(VertexId, u64)>,
}

impl Default for StabilizeOptions {
    fn default() -> Self {
        StabilizeOptions {
            budget: DEFAULT_BUDGET,
            policy: Policy::Fifo,
            relevant: false,
            stop_when_jumps_exceed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "sites")]
pub enum HaltReason {
    Stable,
    /// Active sites left in place because their cap was reached.
    Capped(Vec<VertexId>),
    BudgetExhausted,
    ThresholdReached,
}

impl HaltReason {
    pub fn is_conclusive(&self) -> bool {
        matches!(self, HaltReason::Stable | HaltReason::Capped(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationResult {
    pub sites: Vec<VertexId>,
    /// Instructions used per site; absent in relevant mode.
    pub m: Option<Vec<u64>>,
    /// Jump instructions used per site.
    pub jumps: Vec<u64>,
    pub final_config: ParticleConfig,
    pub halt: HaltReason,
    pub sleeps_used: u64,
    pub instructions: u64,
}

impl StabilizationResult {
    pub fn jumps_at(&self, x: VertexId) -> u64 {
        self.sites.iter().position(|&s| s == x).map_or(0, |i| self.jumps[i])
    }

    pub fn m_at(&self, x: VertexId) -> Option<u64> {
        let m = self.m.as_ref()?;
        Some(self.sites.iter().position(|&s| s == x).map_or(0, |i| m[i]))
    }
}

/// Local indexing of `K ∪ ∂K` for one domain.
#[derive(Debug, Clone)]
pub struct Stabilizer {
    topology: Topology,
    domain: Domain,
    /// `K` first, then boundary vertices.
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl Stabilizer {
    pub fn new(topology: Topology, domain: Domain) -> Result<Self> {
        let mut vertices = domain.sites.clone();
        let mut index: HashMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adjacency = Vec::with_capacity(domain.len());
        for i in 0..domain.len() {
            let nbrs = topology.neighbors(vertices[i])?;
            let mut row = Vec::with_capacity(nbrs.len());
            for w in nbrs {
                let j = *index.entry(w).or_insert_with(|| {
                    vertices.push(w);
                    vertices.len() - 1
                });
                row.push(j);
            }
            adjacency.push(row);
        }
        Ok(Stabilizer {
            topology,
            domain,
            vertices,
            index,
            adjacency,
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// `K ∪ ∂K`, with `K` first.
    pub fn support(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn local_index(&self, x: VertexId) -> Option<usize> {
        self.index.get(&x).copied()
    }

    pub fn run<F: GapFeed + ?Sized>(
        &self,
        eta: &ParticleConfig,
        feed: &F,
        opts: &StabilizeOptions,
    ) -> Result<StabilizationResult> {
        if opts.budget == 0 {
            return Err(ArwError::InvalidArgument("budget must be at least 1".into()));
        }
        let k = self.domain.len();
        let mut run = Run {
            st: self,
            feed,
            relevant: opts.relevant,
            states: self.vertices.iter().map(|&v| eta.get(v)).collect(),
            m: vec![0; k],
            jumps: vec![0; k],
            used: vec![0; k],
            gap: vec![None; k],
            queued: vec![false; k],
            sleeps_used: 0,
            instructions: 0,
        };
        let threshold = opts
            .stop_when_jumps_exceed
            .and_then(|(v, h)| self.domain.index_of(v).map(|i| (i, h)));
        let halt = match opts.policy {
            Policy::Fifo => run.fifo(opts.budget, threshold)?,
            Policy::Random(seed) => run.random(opts.budget, threshold, seed)?,
        };
        let halt = match halt {
            Some(h) => h,
            None => {
                let capped: Vec<VertexId> = (0..k)
                    .filter(|&i| !run.states[i].is_stable())
                    .map(|i| self.vertices[i])
                    .collect();
                if capped.is_empty() {
                    HaltReason::Stable
                } else {
                    HaltReason::Capped(capped)
                }
            }
        };
        let mut final_config = eta.clone();
        for (i, &v) in self.vertices.iter().enumerate() {
            final_config.set(v, run.states[i]);
        }
        Ok(StabilizationResult {
            sites: self.domain.sites.clone(),
            m: (!opts.relevant).then_some(run.m),
            jumps: run.jumps,
            final_config,
            halt,
            sleeps_used: run.sleeps_used,
            instructions: run.instructions,
        })
    }
}

struct Run<'a, F: GapFeed + ?Sized> {
    st: &'a Stabilizer,
    feed: &'a F,
    relevant: bool,
    states: Vec<SiteState>,
    m: Vec<u64>,
    jumps: Vec<u64>,
    /// Sleeps consumed in the current gap.
    used: Vec<u64>,
    gap: Vec<Option<Gap>>,
    queued: Vec<bool>,
    sleeps_used: u64,
    instructions: u64,
}

impl<F: GapFeed + ?Sized> Run<'_, F> {
    fn capped(&self, i: usize) -> bool {
        match self.st.domain.caps[i] {
            None => false,
            Some(z) => match self.st.domain.style {
                CapStyle::Instructions => self.m[i] >= z,
                CapStyle::Jumps => self.jumps[i] >= z,
            },
        }
    }

    fn toppleable(&self, i: usize) -> bool {
        i < self.st.domain.len() && !self.states[i].is_stable() && !self.capped(i)
    }

    fn current_gap(&mut self, i: usize) -> Result<Gap> {
        if let Some(g) = self.gap[i] {
            return Ok(g);
        }
        let mut g = self.feed.gap(i, self.st.vertices[i], self.jumps[i])?;
        if self.relevant {
            g.sleeps = g.sleeps.min(1);
        }
        self.gap[i] = Some(g);
        Ok(g)
    }

    /// Applies the next instruction at `i`; returns the jump target, if any.
    fn step(&mut self, i: usize) -> Result<Option<usize>> {
        let g = self.current_gap(i)?;
        self.m[i] += 1;
        self.instructions += 1;
        if self.used[i] < g.sleeps {
            self.used[i] += 1;
            self.sleeps_used += 1;
            if self.states[i] == SiteState::Active(1) {
                self.states[i] = SiteState::Sleeping;
            }
            return Ok(None);
        }
        let j = g.jump.ok_or(ArwError::ExplicitExhausted {
            vertex: self.st.vertices[i],
            slot: self.m[i] - 1,
        })?;
        let target = self.st.adjacency[i][j as usize];
        let n = self.states[i].count();
        self.states[i] = SiteState::active(n - 1);
        self.states[target] = self.states[target].add_one();
        self.jumps[i] += 1;
        self.used[i] = 0;
        self.gap[i] = None;
        Ok(Some(target))
    }

    /// Instructions at `i` until it stabilizes, caps, or emits a jump.
    /// Ineffective sleeps (at two or more particles) are consumed in bulk.
    fn burst(&mut self, i: usize, budget: u64) -> Result<Option<usize>> {
        while self.toppleable(i) && self.instructions < budget {
            if self.states[i].count() >= 2 {
                let g = self.current_gap(i)?;
                let mut skip = g.sleeps - self.used[i];
                skip = skip.min(budget - self.instructions);
                if let (Some(z), CapStyle::Instructions) =
                    (self.st.domain.caps[i], self.st.domain.style)
                {
                    skip = skip.min(z - self.m[i]);
                }
                if skip > 0 {
                    self.used[i] += skip;
                    self.m[i] += skip;
                    self.sleeps_used += skip;
                    self.instructions += skip;
                    continue;
                }
            }
            if let Some(t) = self.step(i)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    fn fifo(&mut self, budget: u64, threshold: Option<(usize, u64)>) -> Result<Option<HaltReason>> {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..self.st.domain.len() {
            if self.toppleable(i) {
                self.queued[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            self.queued[i] = false;
            if self.instructions >= budget {
                return Ok(Some(HaltReason::BudgetExhausted));
            }
            let target = self.burst(i, budget)?;
            if let Some((ti, h)) = threshold {
                if self.jumps[ti] > h {
                    return Ok(Some(HaltReason::ThresholdReached));
                }
            }
            for j in [Some(i), target].into_iter().flatten() {
                if self.toppleable(j) && !self.queued[j] {
                    self.queued[j] = true;
                    queue.push_back(j);
                }
            }
            if self.instructions >= budget && queue.iter().any(|&j| self.toppleable(j)) {
                return Ok(Some(HaltReason::BudgetExhausted));
            }
        }
        Ok(None)
    }

    fn random(
        &mut self,
        budget: u64,
        threshold: Option<(usize, u64)>,
        seed: u64,
    ) -> Result<Option<HaltReason>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<usize> = (0..self.st.domain.len()).filter(|&i| self.toppleable(i)).collect();
        for &i in &pool {
            self.queued[i] = true;
        }
        while !pool.is_empty() {
            if self.instructions >= budget {
                return Ok(Some(HaltReason::BudgetExhausted));
            }
            let pick = rng.random_range(0..pool.len());
            let i = pool[pick];
            let target = self.step(i)?;
            if let Some((ti, h)) = threshold {
                if self.jumps[ti] > h {
                    return Ok(Some(HaltReason::ThresholdReached));
                }
            }
            if !self.toppleable(i) {
                self.queued[i] = false;
                pool.swap_remove(pick);
            }
            if let Some(t) = target {
                if self.toppleable(t) && !self.queued[t] {
                    self.queued[t] = true;
                    pool.push(t);
                }
            }
        }
        Ok(None)
    }
}

/// Convenience: prepare and run once.
pub fn stabilize<F: GapFeed + ?Sized>(
    topology: Topology,
    domain: &Domain,
    eta: &ParticleConfig,
    feed: &F,
    opts: &StabilizeOptions,
) -> Result<StabilizationResult> {
    Stabilizer::new(topology, domain.clone())?.run(eta, feed, opts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl CheckReport {
    fn pass() -> Self {
        CheckReport { verdict: Verdict::Pass, witness: None }
    }

    fn fail(witness: String) -> Self {
        CheckReport { verdict: Verdict::Fail, witness: Some(witness) }
    }

    fn inconclusive(witness: String) -> Self {
        CheckReport { verdict: Verdict::Inconclusive, witness: Some(witness) }
    }
}

/// Runs FIFO and `trials` random policies and compares `(m, M, final)`.
pub fn check_abelian<F: GapFeed + ?Sized>(
    stabilizer: &Stabilizer,
    eta: &ParticleConfig,
    feed: &F,
    trials: u32,
    seed: u64,
    budget: u64,
) -> Result<CheckReport> {
    let base = StabilizeOptions { budget, ..Default::default() };
    let reference = stabilizer.run(eta, feed, &base)?;
    if !reference.halt.is_conclusive() {
        return Ok(CheckReport::inconclusive("fifo run did not finish".into()));
    }
    for t in 0..trials {
        let policy_seed = seed.wrapping_add(t as u64).wrapping_mul(0x2545_F491_4F6C_DD1D);
        let opts = StabilizeOptions { policy: Policy::Random(policy_seed), ..base.clone() };
        let r = stabilizer.run(eta, feed, &opts)?;
        if !r.halt.is_conclusive() {
            return Ok(CheckReport::inconclusive(format!("policy {t} did not finish")));
        }
        if r.m != reference.m || r.jumps != reference.jumps || r.final_config != reference.final_config
        {
            return Ok(CheckReport::fail(format!(
                "policy {t}: m={:?} M={:?} vs fifo m={:?} M={:?}",
                r.m, r.jumps, reference.m, reference.jumps
            )));
        }
    }
    Ok(CheckReport::pass())
}

/// One side of a monotonicity comparison.
#[derive(Debug, Clone)]
pub struct MonotoneInput<'a> {
    pub domain: &'a Domain,
    pub eta: &'a ParticleConfig,
    pub tau: &'a InstructionSource,
}

/// Checks `M₁ ≤ M₂` pointwise on `K₁`, after verifying `K₁ ⊆ K₂`,
/// `Z₁ ≤ Z₂`, `η₁ ≤ η₂` and `τ₁ ≤ τ₂` on the window the runs can read.
/// The odometers `m` are compared as well when the two arrays agree on that
/// window; with fewer sleeps `m` can legitimately drop.
pub fn check_monotone(
    topology: Topology,
    small: MonotoneInput<'_>,
    large: MonotoneInput<'_>,
    budget: u64,
) -> Result<CheckReport> {
    let (d1, d2) = (small.domain, large.domain);
    if d1.style != d2.style {
        return Err(ArwError::Incomparable("domains use different cap styles".into()));
    }
    for (i, &x) in d1.sites.iter().enumerate() {
        let j = d2
            .index_of(x)
            .ok_or_else(|| ArwError::Incomparable(format!("{x:?} is in K1 but not K2")))?;
        let ok = match (d1.caps[i], d2.caps[j]) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        if !ok {
            return Err(ArwError::Incomparable(format!("cap at {x:?} exceeds the larger domain's")));
        }
    }
    let st1 = Stabilizer::new(topology, d1.clone())?;
    let st2 = Stabilizer::new(topology, d2.clone())?;
    let cfg_window = Window::new(st2.support().to_vec(), 0)?;
    if !small.eta.compare(large.eta, &cfg_window)?.is_le() {
        return Err(ArwError::Incomparable("configurations are not ordered".into()));
    }
    let opts = StabilizeOptions { budget, ..Default::default() };
    let r1 = st1.run(small.eta, small.tau, &opts)?;
    let r2 = st2.run(large.eta, large.tau, &opts)?;
    if !r1.halt.is_conclusive() || !r2.halt.is_conclusive() {
        return Ok(CheckReport::inconclusive("budget exhausted".into()));
    }
    let horizon = r1.jumps.iter().chain(&r2.jumps).max().copied().unwrap_or(0) + 1;
    let arr_window = Window::new(d2.sites.clone(), horizon)?;
    let arrays = small.tau.compare(large.tau, &arr_window)?;
    if !arrays.is_le() {
        return Err(ArwError::Incomparable("instruction arrays are not ordered".into()));
    }
    for (i, &x) in d1.sites.iter().enumerate() {
        let j = d2.index_of(x).expect("checked above");
        if r1.jumps[i] > r2.jumps[j] {
            return Ok(CheckReport::fail(format!(
                "M({x:?}) = {} > {}",
                r1.jumps[i], r2.jumps[j]
            )));
        }
        if arrays == Comparison::Equal {
            if let (Some(m1), Some(m2)) = (&r1.m, &r2.m) {
                if m1[i] > m2[j] {
                    return Ok(CheckReport::fail(format!("m({x:?}) = {} > {}", m1[i], m2[j])));
                }
            }
        }
    }
    Ok(CheckReport::pass())
}
