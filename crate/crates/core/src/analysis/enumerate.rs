//! Exhaustive enumeration of relevant realizations on a jump-capped domain.
//!
//! A site `x` with jump cap `Z(x)` reads at most `Z(x)` gaps, each seen as a
//! sleep bit (whether the gap holds a sleep) and a jump direction. Initial
//! counts are grouped into classes `0..=Z(x)` and a saturated class
//! `≥ Z(x)+1`: a site starting with `Z(x)+1` or more particles always
//! carries two or more until its cap is hit, so every such count gives the
//! same odometer. The enumeration is therefore exact for any law.
//!
//! Membership is computed once per state and stored as a bitset. Tables
//! indexed by configuration class and number of sleep bits then give the
//! probability, the essential-pair sums and the alternative sum as
//! polynomials in `q = λ/(1+λ)` for any `(λ, μ)`.

use rayon::prelude::*;

use super::PhasePoint;
use crate::engine::CapStyle;
use crate::error::{ArwError, Result};
use crate::essential::{EventSpec, EventView};
use crate::randomness::{Neumaier, ParticleLaw};
use crate::topology::VertexId;

pub const DEFAULT_STATE_LIMIT: u128 = 100_000_000;

const BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone)]
pub struct ExactEnumerator {
    event: EventSpec,
    sites: Vec<VertexId>,
    caps: Vec<u32>,
    degrees: Vec<u32>,
    /// Neighbor `j` of site `i` as a site index, `None` outside `K`.
    nbr: Vec<Vec<Option<usize>>>,
    gap_offset: Vec<usize>,
    gaps: usize,
    radix: Vec<u64>,
    stride: Vec<u64>,
    class_stride: Vec<u64>,
    configs: u64,
    instructions: u64,
    members: u64,
    cnt: Vec<u64>,
    sess: Vec<u64>,
    pess: Vec<u64>,
    alt: Vec<u64>,
}

struct Scratch {
    counts: Vec<u32>,
    asleep: Vec<bool>,
    used: Vec<bool>,
    jumps: Vec<u64>,
    stack: Vec<usize>,
    digits: Vec<u8>,
    classes: Vec<u32>,
}

#[derive(Default, Clone)]
struct Tables {
    cnt: Vec<u64>,
    sess: Vec<u64>,
    pess: Vec<u64>,
    alt: Vec<u64>,
}

impl Tables {
    fn zeros(n: usize, configs: usize, gaps: usize) -> Self {
        Tables {
            cnt: vec![0; configs * (gaps + 1)],
            sess: vec![0; configs * gaps.max(1)],
            pess: vec![0; n * configs * (gaps + 1)],
            alt: vec![0; configs * (gaps + 1)],
        }
    }

    fn add(mut self, o: Tables) -> Tables {
        for (a, b) in [
            (&mut self.cnt, &o.cnt),
            (&mut self.sess, &o.sess),
            (&mut self.pess, &o.pess),
            (&mut self.alt, &o.alt),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self
    }
}

impl ExactEnumerator {
    /// Enumerates `event`, refusing state spaces above `limit`.
    pub fn new(event: &EventSpec, limit: u128) -> Result<Self> {
        let dom = event.domain();
        if dom.style() != CapStyle::Jumps {
            return Err(ArwError::NotEnumerable("the domain must use jump caps".into()));
        }
        let topology = *event.topology();
        let sites = dom.sites().to_vec();
        let n = sites.len();
        let mut caps = Vec::with_capacity(n);
        for (x, c) in sites.iter().zip(dom.caps()) {
            let z = c.ok_or_else(|| ArwError::NotEnumerable(format!("site {x:?} has no jump cap")))?;
            caps.push(u32::try_from(z).map_err(|_| ArwError::NotEnumerable("jump cap too large".into()))?);
        }
        let mut degrees = Vec::with_capacity(n);
        let mut nbr = Vec::with_capacity(n);
        for &x in &sites {
            let ns = topology.neighbors(x)?;
            if ns.len() > 127 {
                return Err(ArwError::NotEnumerable("degree above 127".into()));
            }
            degrees.push(ns.len() as u32);
            nbr.push(ns.iter().map(|w| sites.iter().position(|s| s == w)).collect());
        }
        let mut gap_offset = Vec::with_capacity(n);
        let mut radix = Vec::new();
        for i in 0..n {
            gap_offset.push(radix.len());
            for _ in 0..caps[i] {
                radix.push(2 * u64::from(degrees[i]));
            }
        }
        let gaps = radix.len();
        let mut states: u128 = 1;
        for &r in &radix {
            states = states.saturating_mul(r as u128);
        }
        let instr_states = states;
        for &z in &caps {
            states = states.saturating_mul(u128::from(z) + 2);
        }
        if states > limit || states > u128::from(u64::MAX) {
            return Err(ArwError::StateSpaceTooLarge { states, limit });
        }
        let instructions = instr_states as u64;
        let configs = (states / instr_states) as u64;
        let mut stride = Vec::with_capacity(gaps);
        let mut s = 1u64;
        for &r in &radix {
            stride.push(s);
            s *= r;
        }
        let mut class_stride = Vec::with_capacity(n);
        let mut s = 1u64;
        for &z in &caps {
            class_stride.push(s);
            s *= u64::from(z) + 2;
        }
        let mut e = ExactEnumerator {
            event: event.clone(),
            sites,
            caps,
            degrees,
            nbr,
            gap_offset,
            gaps,
            radix,
            stride,
            class_stride,
            configs,
            instructions,
            members: 0,
            cnt: Vec::new(),
            sess: Vec::new(),
            pess: Vec::new(),
            alt: Vec::new(),
        };
        e.build();
        Ok(e)
    }

    fn scratch(&self) -> Scratch {
        let n = self.sites.len();
        Scratch {
            counts: vec![0; n],
            asleep: vec![false; n],
            used: vec![false; n],
            jumps: vec![0; n],
            stack: Vec::new(),
            digits: vec![0; self.gaps],
            classes: vec![0; n],
        }
    }

    fn decode(&self, state: u64, s: &mut Scratch) {
        let mut c = state / self.instructions;
        let mut w = state % self.instructions;
        for (i, &z) in self.caps.iter().enumerate() {
            let r = u64::from(z) + 2;
            s.classes[i] = (c % r) as u32;
            c /= r;
        }
        for (g, &r) in self.radix.iter().enumerate() {
            s.digits[g] = (w % r) as u8;
            w /= r;
        }
    }

    /// Jump odometer of the decoded state, all sites active, sleeps clamped.
    fn odometer(&self, s: &mut Scratch) {
        let n = self.sites.len();
        s.stack.clear();
        for i in 0..n {
            s.counts[i] = s.classes[i];
            s.asleep[i] = false;
            s.used[i] = false;
            s.jumps[i] = 0;
            if s.counts[i] > 0 {
                s.stack.push(i);
            }
        }
        while let Some(i) = s.stack.pop() {
            while s.counts[i] > 0 && !s.asleep[i] && s.jumps[i] < u64::from(self.caps[i]) {
                let d = s.digits[self.gap_offset[i] + s.jumps[i] as usize];
                if d & 1 == 1 && !s.used[i] {
                    s.used[i] = true;
                    if s.counts[i] == 1 {
                        s.asleep[i] = true;
                    }
                    continue;
                }
                s.counts[i] -= 1;
                s.jumps[i] += 1;
                s.used[i] = false;
                if let Some(t) = self.nbr[i][usize::from(d >> 1)] {
                    s.counts[t] += 1;
                    s.asleep[t] = false;
                    s.stack.push(t);
                }
            }
        }
    }

    fn holds(&self, s: &mut Scratch) -> bool {
        self.odometer(s);
        self.event.holds(&EventView { sites: &self.sites, jumps: &s.jumps })
    }

    fn build(&mut self) {
        let total = self.configs * self.instructions;
        let mut bits = vec![0u64; total.div_ceil(64) as usize];
        bits.par_iter_mut().enumerate().for_each_init(
            || self.scratch(),
            |s, (w, word)| {
                let start = w as u64 * 64;
                for b in 0..64.min(total - start) {
                    self.decode(start + b, s);
                    if self.holds(s) {
                        *word |= 1 << b;
                    }
                }
            },
        );
        let member = |state: u64| bits[(state / 64) as usize] >> (state % 64) & 1 == 1;
        self.members = bits.iter().map(|w| u64::from(w.count_ones())).sum();
        let n = self.sites.len();
        let (c_n, g) = (self.configs as usize, self.gaps);
        let tables = (0..total.div_ceil(BLOCK))
            .into_par_iter()
            .fold(
                || (Tables::zeros(n, c_n, g), self.scratch()),
                |(mut t, mut s), block| {
                    let start = block * BLOCK;
                    for state in start..(start + BLOCK).min(total) {
                        self.decode(state, &mut s);
                        let c = (state / self.instructions) as usize;
                        let b = s.digits.iter().filter(|&&d| d & 1 == 1).count();
                        let in_a = member(state);
                        if in_a {
                            t.cnt[c * (g + 1) + b] += 1;
                            for (gi, &d) in s.digits.iter().enumerate() {
                                if d & 1 == 0 && !member(state + self.stride[gi]) {
                                    t.sess[c * g + b] += 1;
                                }
                            }
                            continue;
                        }
                        for y in 0..n {
                            if s.classes[y] <= self.caps[y] && member(state + self.class_stride[y] * self.instructions)
                            {
                                t.pess[(y * c_n + c) * (g + 1) + b] += 1;
                            }
                        }
                        if b == 0 {
                            continue;
                        }
                        self.odometer(&mut s);
                        for y in 0..n {
                            let my = s.jumps[y];
                            if my < u64::from(self.caps[y]) {
                                let gi = self.gap_offset[y] + my as usize;
                                if s.digits[gi] & 1 == 1 && member(state - self.stride[gi]) {
                                    t.alt[c * (g + 1) + b] += 1;
                                }
                            }
                        }
                    }
                    (t, s)
                },
            )
            .map(|(t, _)| t)
            .reduce(|| Tables::zeros(n, c_n, g), Tables::add);
        self.cnt = tables.cnt;
        self.sess = tables.sess;
        self.pess = tables.pess;
        self.alt = tables.alt;
    }

    pub fn event(&self) -> &EventSpec {
        &self.event
    }

    pub fn sites(&self) -> &[VertexId] {
        &self.sites
    }

    pub fn state_count(&self) -> u64 {
        self.configs * self.instructions
    }

    /// Number of enumerated gaps, `Σ Z(x)`: the degree of every tabulated
    /// quantity as a polynomial in `q`.
    pub fn gap_count(&self) -> usize {
        self.gaps
    }

    /// States in the event.
    pub fn member_count(&self) -> u64 {
        self.members
    }

    fn class_weights(&self, law: &ParticleLaw) -> Vec<Vec<f64>> {
        self.caps
            .iter()
            .map(|&z| (0..=z).map(|k| law.pmf(k)).chain([law.tail_from(z + 1)]).collect())
            .collect()
    }

    fn config_weight(&self, weights: &[Vec<f64>], c: u64, skip: Option<usize>) -> f64 {
        let mut w = 1.0;
        let mut c = c;
        for (i, &z) in self.caps.iter().enumerate() {
            let r = u64::from(z) + 2;
            if skip != Some(i) {
                w *= weights[i][(c % r) as usize];
            }
            c /= r;
        }
        w
    }

    fn class_of(&self, c: u64, i: usize) -> u32 {
        ((c / self.class_stride[i]) % (u64::from(self.caps[i]) + 2)) as u32
    }

    /// `Π_x d_x^{-Z(x)}`, the weight of one choice of every jump direction.
    fn jump_weight(&self) -> f64 {
        self.caps
            .iter()
            .zip(&self.degrees)
            .map(|(&z, &d)| (d as f64).powi(-(z as i32)))
            .product()
    }

    fn bit_weights(q: f64, gaps: usize) -> Vec<f64> {
        (0..=gaps).map(|b| q.powi(b as i32) * (1.0 - q).powi((gaps - b) as i32)).collect()
    }

    fn contract(&self, table: &[u64], width: usize, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
        let law = p.law(family)?;
        let weights = self.class_weights(&law);
        let bw = Self::bit_weights(p.sleep_probability(), width - 1);
        let mut acc = Neumaier::default();
        for c in 0..self.configs {
            let row = &table[c as usize * width..(c as usize + 1) * width];
            if row.iter().all(|&x| x == 0) {
                continue;
            }
            let cw = self.config_weight(&weights, c, None);
            for (b, &k) in row.iter().enumerate() {
                if k > 0 {
                    acc.add(cw * k as f64 * bw[b]);
                }
            }
        }
        Ok(acc.sum() * self.jump_weight())
    }

    /// `P_{λ,μ}(A)`.
    pub fn probability(&self, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
        self.contract(&self.cnt, self.gaps + 1, p, family)
    }

    /// `Σ_{y,m} P((y,m) is s-essential)`.
    pub fn s_essential_sum(&self, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
        if self.gaps == 0 {
            p.law(family)?;
            return Ok(0.0);
        }
        self.contract(&self.sess, self.gaps, p, family)
    }

    /// `Σ_y P((y, M(y)) is s-essential and S^{y,M(y)} > 0)`.
    pub fn alternative_sum(&self, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
        self.contract(&self.alt, self.gaps + 1, p, family)
    }

    /// `P((y,k) is p-essential)` for the site with index `y`.
    pub fn p_essential_probability(&self, y: usize, k: u32, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
        let law = p.law(family)?;
        if y >= self.sites.len() {
            return Err(ArwError::OutOfRange(format!("site index {y}")));
        }
        if k > self.caps[y] {
            return Ok(0.0);
        }
        let weights = self.class_weights(&law);
        let width = self.gaps + 1;
        let bw = Self::bit_weights(p.sleep_probability(), self.gaps);
        let mut acc = Neumaier::default();
        for c in 0..self.configs {
            if self.class_of(c, y) != k {
                continue;
            }
            let base = (y * self.configs as usize + c as usize) * width;
            let cw = self.config_weight(&weights, c, Some(y));
            for (b, &cnt) in self.pess[base..base + width].iter().enumerate() {
                if cnt > 0 {
                    acc.add(cw * cnt as f64 * bw[b]);
                }
            }
        }
        Ok(acc.sum() * self.jump_weight())
    }

    /// `Σ_{y,k} P((y,k) is p-essential) ν'_{>k}(μ)`.
    pub fn p_essential_sum(&self, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
        let law = p.law(family)?;
        let mut acc = Neumaier::default();
        for y in 0..self.sites.len() {
            for k in 0..=self.caps[y] {
                let d = law.tail_above_derivative(k);
                if d != 0.0 {
                    acc.add(self.p_essential_probability(y, k, p, family)? * d);
                }
            }
        }
        Ok(acc.sum())
    }
}

/// One-shot exact probability of a bounded event.
pub fn exact_event_prob(event: &EventSpec, p: &PhasePoint, family: &ParticleLaw) -> Result<f64> {
    ExactEnumerator::new(event, DEFAULT_STATE_LIMIT)?.probability(p, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Domain, StabilizeOptions, Stabilizer};
    use crate::essential::{is_p_essential, is_s_essential, Decision};
    use crate::state::{ExplicitArray, InstructionSlot, InstructionSource, ParticleConfig};
    use crate::topology::Topology;
    use std::collections::HashMap;

    const O: VertexId = VertexId(0);

    fn one_site() -> EventSpec {
        let dom = Domain::with_uniform_cap(vec![O], 1, CapStyle::Jumps).unwrap();
        EventSpec::jump_threshold(Topology::Line, dom, vec![1]).unwrap()
    }

    fn two_site_path() -> EventSpec {
        let t = Topology::path(2).unwrap();
        let dom = Domain::with_uniform_cap(vec![VertexId(0), VertexId(1)], 2, CapStyle::Jumps).unwrap();
        EventSpec::jump_threshold(t, dom, vec![1, 1]).unwrap()
    }

    const BERN: ParticleLaw = ParticleLaw::Bernoulli { mean: 0.5 };

    #[test]
    fn one_site_hand_values() {
        // Two configurations × one gap: P = μ(1 - q) = μ/(1+λ).
        let e = ExactEnumerator::new(&one_site(), DEFAULT_STATE_LIMIT).unwrap();
        let p = PhasePoint::new(1.0, 0.5).unwrap();
        assert_eq!(e.state_count(), 3 * 4);
        assert!((e.probability(&p, &BERN).unwrap() - 0.25).abs() < 1e-15);
        assert!((e.s_essential_sum(&p, &BERN).unwrap() - 0.5).abs() < 1e-15);
        assert!((e.p_essential_sum(&p, &BERN).unwrap() - 0.5).abs() < 1e-15);
        assert!((e.alternative_sum(&p, &BERN).unwrap() - 0.25).abs() < 1e-15);
        let p0 = PhasePoint::new(1.0, 1e-9).unwrap();
        assert!(e.probability(&p0, &BERN).unwrap() < 1e-9);
    }

    #[test]
    fn constant_events_normalize() {
        let dom = Domain::with_uniform_cap(vec![O, VertexId(1)], 2, CapStyle::Jumps).unwrap();
        let yes = EventSpec::constant(Topology::Line, dom.clone(), true).unwrap();
        let no = EventSpec::constant(Topology::Line, dom, false).unwrap();
        let p = PhasePoint::new(0.7, 1.3).unwrap();
        let pois = ParticleLaw::Poisson { mean: 1.0 };
        let y = ExactEnumerator::new(&yes, DEFAULT_STATE_LIMIT).unwrap();
        assert!((y.probability(&p, &pois).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(y.s_essential_sum(&p, &pois).unwrap(), 0.0);
        let n = ExactEnumerator::new(&no, DEFAULT_STATE_LIMIT).unwrap();
        assert_eq!(n.probability(&p, &pois).unwrap(), 0.0);
        assert_eq!(n.p_essential_sum(&p, &pois).unwrap(), 0.0);
    }

    #[test]
    fn rejects_uncapped_and_oversized() {
        let dom = Domain::uncapped(vec![O]).unwrap();
        let e = EventSpec::jump_threshold(Topology::Line, dom, vec![1]).unwrap();
        assert!(matches!(ExactEnumerator::new(&e, DEFAULT_STATE_LIMIT), Err(ArwError::NotEnumerable(_))));
        let dom = Domain::with_uniform_cap(Topology::Line.ball(O, 3).unwrap(), 3, CapStyle::Jumps).unwrap();
        let e = EventSpec::jump_threshold(Topology::Line, dom, vec![1; 7]).unwrap();
        assert!(matches!(
            ExactEnumerator::new(&e, DEFAULT_STATE_LIMIT),
            Err(ArwError::StateSpaceTooLarge { .. })
        ));
    }

    /// Independent oracle: rebuild each state as an explicit instance and run
    /// the engine on it.
    fn engine_membership(e: &ExactEnumerator, state: u64, ev: &EventSpec) -> bool {
        let mut s = e.scratch();
        e.decode(state, &mut s);
        let mut arrays = HashMap::new();
        let mut eta = ParticleConfig::new();
        for (i, &x) in e.sites.iter().enumerate() {
            eta.set_count(x, s.classes[i]);
            let mut slots = Vec::new();
            for m in 0..e.caps[i] as usize {
                let d = s.digits[e.gap_offset[i] + m];
                if d & 1 == 1 {
                    slots.push(InstructionSlot::Sleep);
                }
                slots.push(InstructionSlot::Jump(u32::from(d >> 1)));
            }
            arrays.insert(x, ExplicitArray::from_slots(&slots));
        }
        let tau = InstructionSource::explicit(*ev.topology(), arrays).unwrap();
        let st = Stabilizer::new(*ev.topology(), ev.domain().clone()).unwrap();
        let r = st.run(&eta, &tau, &StabilizeOptions { relevant: true, ..Default::default() }).unwrap();
        ev.classify(&r) == crate::essential::Membership::In
    }

    #[test]
    fn kernel_agrees_with_engine() {
        let ev = two_site_path();
        let e = ExactEnumerator::new(&ev, DEFAULT_STATE_LIMIT).unwrap();
        let mut s = e.scratch();
        let mut members = 0;
        for state in 0..e.state_count() {
            e.decode(state, &mut s);
            let k = e.holds(&mut s);
            assert_eq!(k, engine_membership(&e, state, &ev), "state {state}");
            members += u64::from(k);
        }
        assert_eq!(members, e.member_count());
    }

    #[test]
    fn saturated_class_is_exact() {
        // Counts above Z+1 never change the odometer.
        let ev = two_site_path();
        let e = ExactEnumerator::new(&ev, DEFAULT_STATE_LIMIT).unwrap();
        let st = Stabilizer::new(*ev.topology(), ev.domain().clone()).unwrap();
        let mut s = e.scratch();
        for w in 0..e.instructions {
            e.decode(w + (3 + 4 * 3) * e.instructions, &mut s);
            let mut arrays = HashMap::new();
            for (i, &x) in e.sites.iter().enumerate() {
                let mut slots = Vec::new();
                for m in 0..2 {
                    let d = s.digits[e.gap_offset[i] + m];
                    if d & 1 == 1 {
                        slots.push(InstructionSlot::Sleep);
                    }
                    slots.push(InstructionSlot::Jump(u32::from(d >> 1)));
                }
                arrays.insert(x, ExplicitArray::from_slots(&slots));
            }
            let tau = InstructionSource::explicit(*ev.topology(), arrays).unwrap();
            let opts = StabilizeOptions { relevant: true, ..Default::default() };
            let base = st.run(&ParticleConfig::from_counts([(O, 3), (VertexId(1), 3)]), &tau, &opts).unwrap();
            for extra in [(4, 3), (3, 7), (9, 5)] {
                let eta = ParticleConfig::from_counts([(O, extra.0), (VertexId(1), extra.1)]);
                assert_eq!(st.run(&eta, &tau, &opts).unwrap().jumps, base.jumps);
            }
        }
    }

    #[test]
    fn essential_tables_match_detectors() {
        // Per-state essential counts agree with the pair detectors in the
        // essential module, evaluated on explicit instances.
        let ev = two_site_path();
        let e = ExactEnumerator::new(&ev, DEFAULT_STATE_LIMIT).unwrap();
        let mut s = e.scratch();
        let (mut sess, mut pess) = (0u64, 0u64);
        for state in (0..e.state_count()).step_by(7) {
            e.decode(state, &mut s);
            let mut arrays = HashMap::new();
            let mut eta = ParticleConfig::new();
            for (i, &x) in e.sites.iter().enumerate() {
                eta.set_count(x, s.classes[i]);
                let mut slots = Vec::new();
                for m in 0..2 {
                    let d = s.digits[e.gap_offset[i] + m];
                    if d & 1 == 1 {
                        slots.push(InstructionSlot::Sleep);
                    }
                    slots.push(InstructionSlot::Jump(u32::from(d >> 1)));
                }
                arrays.insert(x, ExplicitArray::from_slots(&slots));
            }
            let tau = InstructionSource::explicit(*ev.topology(), arrays).unwrap();
            for (i, &x) in e.sites.iter().enumerate() {
                for m in 0..2u64 {
                    let d = s.digits[e.gap_offset[i] + m as usize];
                    let det = is_s_essential(&ev, &eta, &tau, x, m, 1000).unwrap() == Decision::Yes;
                    let flip = if d & 1 == 0 { state + e.stride[e.gap_offset[i] + m as usize] } else { state - e.stride[e.gap_offset[i] + m as usize] };
                    let (lo, hi) = if d & 1 == 0 { (state, flip) } else { (flip, state) };
                    let tab = engine_membership(&e, lo, &ev) && !engine_membership(&e, hi, &ev);
                    assert_eq!(det, tab);
                    sess += u64::from(det);
                }
                for k in 0..=3u32 {
                    if is_p_essential(&ev, &eta, &tau, x, k, 1000).unwrap() == Decision::Yes {
                        pess += 1;
                    }
                }
            }
        }
        assert!(sess > 0 && pess > 0);
    }

    #[test]
    fn alternative_sum_matches_double_sum() {
        let ev = two_site_path();
        let e = ExactEnumerator::new(&ev, DEFAULT_STATE_LIMIT).unwrap();
        for (l, m) in [(0.5, 0.5), (1.0, 1.2), (3.0, 0.2)] {
            let p = PhasePoint::new(l, m).unwrap();
            let pois = ParticleLaw::Poisson { mean: 1.0 };
            let s = e.s_essential_sum(&p, &pois).unwrap();
            let a = e.alternative_sum(&p, &pois).unwrap();
            assert!((s * p.sleep_probability() - a).abs() < 1e-14, "{s} {a}");
        }
    }
}
