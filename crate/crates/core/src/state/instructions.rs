use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Comparison, Window};
use crate::error::{ArwError, Result};
use crate::randomness::RandomSource;
use crate::topology::{Topology, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InstructionSlot {
    Sleep,
    /// Jump to the neighbor with this index.
    Jump(u32),
}

/// The `m`-th gap at a vertex: `sleeps` sleep instructions followed by the
/// `m`-th jump. `jump` is `None` only at the end of an explicit array with
/// no random tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub sleeps: u64,
    pub jump: Option<u32>,
}

/// Finite prefix of one vertex's array in gap form.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExplicitArray {
    /// `(S^{x,m}, J^{x,m})` for each complete gap.
    pub gaps: Vec<(u64, u32)>,
    /// Sleeps after the last listed jump.
    pub trailing: u64,
}

impl ExplicitArray {
    pub fn from_slots(slots: &[InstructionSlot]) -> Self {
        let mut a = ExplicitArray::default();
        let mut run = 0;
        for s in slots {
            match *s {
                InstructionSlot::Sleep => run += 1,
                InstructionSlot::Jump(j) => {
                    a.gaps.push((run, j));
                    run = 0;
                }
            }
        }
        a.trailing = run;
        a
    }

    pub fn to_slots(&self) -> Vec<InstructionSlot> {
        let mut out = Vec::new();
        for &(s, j) in &self.gaps {
            out.extend(std::iter::repeat_n(InstructionSlot::Sleep, s as usize));
            out.push(InstructionSlot::Jump(j));
        }
        out.extend(std::iter::repeat_n(InstructionSlot::Sleep, self.trailing as usize));
        out
    }

    pub fn len_slots(&self) -> u64 {
        self.gaps.iter().map(|g| g.0 + 1).sum::<u64>() + self.trailing
    }
}

#[derive(Debug, Clone)]
enum Base {
    Lazy {
        src: RandomSource,
        lambda: f64,
    },
    Explicit {
        arrays: Arc<HashMap<VertexId, ExplicitArray>>,
        tail: Option<(RandomSource, f64)>,
    },
}

/// The instruction array `τ`, lazily decoded or given as explicit prefixes,
/// with `Γ` surgeries stored as per-gap sleep-count overrides.
#[derive(Debug, Clone)]
pub struct InstructionSource {
    topology: Topology,
    base: Base,
    overlay: HashMap<VertexId, BTreeMap<u64, u64>>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(ArwError::InvalidArgument(format!(
            "sleep rate must be finite and nonnegative, got {lambda}"
        )))
    }
}

impl InstructionSource {
    pub fn lazy(topology: Topology, src: RandomSource, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(InstructionSource {
            topology,
            base: Base::Lazy { src, lambda },
            overlay: HashMap::new(),
        })
    }

    /// Explicit arrays; reading past a listed prefix is an error.
    pub fn explicit(topology: Topology, arrays: HashMap<VertexId, ExplicitArray>) -> Result<Self> {
        Self::build_explicit(topology, arrays, None)
    }

    /// Explicit prefixes continued by lazily decoded gaps. Gap numbering
    /// carries on from the prefix, and the prefix's trailing sleeps are
    /// added to the first random gap.
    pub fn explicit_with_tail(
        topology: Topology,
        arrays: HashMap<VertexId, ExplicitArray>,
        src: RandomSource,
        lambda: f64,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        Self::build_explicit(topology, arrays, Some((src, lambda)))
    }

    fn build_explicit(
        topology: Topology,
        arrays: HashMap<VertexId, ExplicitArray>,
        tail: Option<(RandomSource, f64)>,
    ) -> Result<Self> {
        for (&x, a) in &arrays {
            let d = topology.degree(x)?;
            if let Some(&(_, j)) = a.gaps.iter().find(|g| g.1 as usize >= d) {
                return Err(ArwError::InvalidArgument(format!(
                    "jump index {j} at {} exceeds degree {d}",
                    topology.format_vertex(x)
                )));
            }
        }
        Ok(InstructionSource {
            topology,
            base: Base::Explicit {
                arrays: Arc::new(arrays),
                tail,
            },
            overlay: HashMap::new(),
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Sleep rate of the random part, if any.
    pub fn lambda(&self) -> Option<f64> {
        match &self.base {
            Base::Lazy { lambda, .. } => Some(*lambda),
            Base::Explicit { tail, .. } => tail.map(|t| t.1),
        }
    }

    fn base_gap(&self, x: VertexId, m: u64) -> Result<Gap> {
        let random = |src: &RandomSource, lambda: f64| -> Result<Gap> {
            let d = self.topology.degree(x)?;
            Ok(Gap {
                sleeps: src.sleeps(x, m, lambda)?,
                jump: Some(src.jump(x, m, d)),
            })
        };
        match &self.base {
            Base::Lazy { src, lambda } => random(src, *lambda),
            Base::Explicit { arrays, tail } => {
                let empty = ExplicitArray::default();
                let a = arrays.get(&x).unwrap_or(&empty);
                let len = a.gaps.len() as u64;
                if m < len {
                    let (s, j) = a.gaps[m as usize];
                    return Ok(Gap { sleeps: s, jump: Some(j) });
                }
                match tail {
                    Some((src, lambda)) => {
                        let mut g = random(src, *lambda)?;
                        if m == len {
                            g.sleeps = g.sleeps.saturating_add(a.trailing);
                        }
                        Ok(g)
                    }
                    None if m == len => Ok(Gap {
                        sleeps: a.trailing,
                        jump: None,
                    }),
                    None => Err(ArwError::ExplicitExhausted {
                        vertex: x,
                        slot: a.len_slots(),
                    }),
                }
            }
        }
    }

    /// Gap `m` at `x`, after surgeries.
    pub fn gap(&self, x: VertexId, m: u64) -> Result<Gap> {
        let mut g = self.base_gap(x, m)?;
        if let Some(s) = self.overlay.get(&x).and_then(|o| o.get(&m)) {
            g.sleeps = *s;
        }
        Ok(g)
    }

    /// `S^{x,m}`.
    pub fn sleeps(&self, x: VertexId, m: u64) -> Result<u64> {
        Ok(self.gap(x, m)?.sleeps)
    }

    /// The raw slot `τ^{x,n}`.
    pub fn slot(&self, x: VertexId, n: u64) -> Result<InstructionSlot> {
        let mut start = 0u64;
        let mut m = 0u64;
        loop {
            let g = self.gap(x, m)?;
            if n < start + g.sleeps {
                return Ok(InstructionSlot::Sleep);
            }
            let t = start + g.sleeps;
            match g.jump {
                Some(j) if n == t => return Ok(InstructionSlot::Jump(j)),
                Some(_) => {}
                None => {
                    return Err(ArwError::ExplicitExhausted { vertex: x, slot: t });
                }
            }
            start = t + 1;
            m += 1;
        }
    }

    /// `(t^{x,m}, J^{x,m}, S^{x,m})`.
    pub fn counters(&self, x: VertexId, m: u64) -> Result<(u64, u32, u64)> {
        let mut t: u64 = 0;
        for g in 0..=m {
            let gap = self.gap(x, g)?;
            t += gap.sleeps + 1;
            if gap.jump.is_none() {
                return Err(ArwError::ExplicitExhausted { vertex: x, slot: t - 1 });
            }
        }
        let gap = self.gap(x, m)?;
        Ok((t - 1, gap.jump.expect("checked above"), gap.sleeps))
    }

    fn with_gap_sleeps(&self, y: VertexId, m: u64, sleeps: u64) -> Self {
        let mut out = self.clone();
        out.overlay.entry(y).or_default().insert(m, sleeps);
        out
    }

    /// `Γ_-^{y,m}`: drop every sleep between jumps `m-1` and `m` at `y`.
    pub fn gamma_minus(&self, y: VertexId, m: u64) -> Self {
        self.with_gap_sleeps(y, m, 0)
    }

    /// `Γ_1^{y,m}`: exactly one sleep between jumps `m-1` and `m` at `y`.
    pub fn gamma_one(&self, y: VertexId, m: u64) -> Self {
        self.with_gap_sleeps(y, m, 1)
    }

    /// Materializes the first `gaps` gaps at `x`.
    pub fn prefix(&self, x: VertexId, gaps: u64) -> Result<ExplicitArray> {
        let mut a = ExplicitArray::default();
        for m in 0..gaps {
            let g = self.gap(x, m)?;
            match g.jump {
                Some(j) => a.gaps.push((g.sleeps, j)),
                None => {
                    a.trailing = g.sleeps;
                    break;
                }
            }
        }
        Ok(a)
    }

    /// Array order on the window: `self ≤ other` iff the jumps agree and
    /// `other` has pointwise no more sleeps.
    pub fn compare(&self, other: &Self, window: &Window) -> Result<Comparison> {
        if window.vertices.is_empty() {
            return Err(ArwError::WindowUnspecified);
        }
        let mut acc = Comparison::Equal;
        for &x in &window.vertices {
            for m in 0..window.horizon {
                let (a, b) = (self.gap(x, m)?, other.gap(x, m)?);
                if a.jump != b.jump {
                    return Ok(Comparison::Incomparable);
                }
                // More sleeps means a smaller array.
                acc = acc.combine(Some(b.sleeps.cmp(&a.sleeps)));
                if acc == Comparison::Incomparable {
                    return Ok(acc);
                }
                if a.jump.is_none() {
                    break;
                }
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use InstructionSlot::{Jump as J, Sleep as S};

    fn single(slots: &[InstructionSlot]) -> InstructionSource {
        let a = ExplicitArray::from_slots(slots);
        InstructionSource::explicit(Topology::Line, HashMap::from([(VertexId(0), a)])).unwrap()
    }

    fn scan_counters(slots: &[InstructionSlot]) -> Vec<(u64, u64)> {
        // Oracle: direct scan producing (t, S) per jump.
        let mut out = Vec::new();
        let mut run = 0;
        for (n, s) in slots.iter().enumerate() {
            match s {
                S => run += 1,
                J(_) => {
                    out.push((n as u64, run));
                    run = 0;
                }
            }
        }
        out
    }

    const O: VertexId = VertexId(0);

    #[test]
    fn figure_one_counters() {
        let tau = single(&[S, S, J(1), J(0), J(1), S, S, J(0)]);
        assert_eq!(tau.counters(O, 0).unwrap(), (2, 1, 2));
        assert_eq!(tau.sleeps(O, 1).unwrap(), 0);
        assert_eq!(tau.counters(O, 3).unwrap(), (7, 0, 2));
        let cut = tau.gamma_minus(O, 3);
        assert_eq!(cut.counters(O, 3).unwrap().0, 5);
        assert_eq!(cut.counters(O, 2).unwrap(), tau.counters(O, 2).unwrap());
    }

    #[test]
    fn literal_figure_prefix() {
        let tau = single(&[S, S, J(1), J(0), S, S, J(1)]);
        assert_eq!(tau.counters(O, 0).unwrap(), (2, 1, 2));
        assert_eq!(tau.sleeps(O, 1).unwrap(), 0);
        assert_eq!(tau.counters(O, 2).unwrap(), (6, 1, 2));
    }

    #[test]
    fn no_sleep_identity_layout() {
        let tau = single(&[J(0); 6]);
        for m in 0..6 {
            assert_eq!(tau.counters(O, m).unwrap().0, m);
            assert_eq!(tau.sleeps(O, m).unwrap(), 0);
        }
    }

    #[test]
    fn alternating_counters() {
        let slots = [S, J(0), S, J(1)];
        let tau = single(&slots);
        assert_eq!(scan_counters(&slots), vec![(1, 1), (3, 1)]);
        assert_eq!(tau.sleeps(O, 0).unwrap(), 1);
        assert_eq!(tau.sleeps(O, 1).unwrap(), 1);
        assert_eq!(tau.counters(O, 1).unwrap().0, 3);
    }

    #[test]
    fn gamma_minus_examples() {
        let tau = single(&[S, J(0), S, J(1)]);
        let g = tau.gamma_minus(O, 0);
        assert_eq!(g.prefix(O, 3).unwrap().to_slots(), vec![J(0), S, J(1)]);
        assert_eq!(g.counters(O, 0).unwrap().0, 0);
        let z = single(&[J(0), J(1)]);
        assert_eq!(z.gamma_minus(O, 1).prefix(O, 3).unwrap(), z.prefix(O, 3).unwrap());
    }

    #[test]
    fn gamma_one_examples() {
        let tau = single(&[S, S, J(0)]);
        assert_eq!(tau.gamma_one(O, 0).prefix(O, 2).unwrap().to_slots(), vec![S, J(0)]);
        let z = single(&[J(1), J(0)]);
        let g = z.gamma_one(O, 1);
        // Inserted at t^{m-1} + 1 = 1.
        assert_eq!(g.slot(O, 1).unwrap(), S);
        assert_eq!(g.slot(O, 2).unwrap(), J(0));
        let one = single(&[S, J(1)]);
        assert_eq!(one.gamma_one(O, 0).prefix(O, 2).unwrap(), one.prefix(O, 2).unwrap());
    }

    #[test]
    fn comparisons() {
        let tau = single(&[S, S, J(0), S, J(1)]);
        let w = Window::new(vec![O], 3).unwrap();
        assert_eq!(tau.compare(&tau.gamma_minus(O, 0), &w).unwrap(), Comparison::Less);
        assert_eq!(tau.gamma_minus(O, 0).compare(&tau, &w).unwrap(), Comparison::Greater);
        let other = single(&[S, S, J(1), S, J(1)]);
        assert_eq!(tau.compare(&other, &w).unwrap(), Comparison::Incomparable);
        assert!(tau.compare(&tau, &Window { vertices: vec![], horizon: 1 }).is_err());
    }

    #[test]
    fn exhaustion_and_tail() {
        let tau = single(&[J(1), S]);
        assert_eq!(tau.slot(O, 1).unwrap(), S);
        assert!(matches!(tau.slot(O, 2), Err(ArwError::ExplicitExhausted { .. })));
        assert!(matches!(tau.counters(O, 1), Err(ArwError::ExplicitExhausted { .. })));
        let src = RandomSource::new(3, 0);
        let tailed = InstructionSource::explicit_with_tail(
            Topology::Line,
            HashMap::from([(O, ExplicitArray::from_slots(&[J(1), S]))]),
            src,
            1.0,
        )
        .unwrap();
        let lazy = InstructionSource::lazy(Topology::Line, src, 1.0).unwrap();
        assert_eq!(tailed.gap(O, 0).unwrap(), Gap { sleeps: 0, jump: Some(1) });
        assert_eq!(tailed.sleeps(O, 1).unwrap(), lazy.sleeps(O, 1).unwrap() + 1);
        assert_eq!(tailed.gap(O, 5).unwrap(), lazy.gap(O, 5).unwrap());
        assert_eq!(tailed.gap(VertexId(9), 2).unwrap(), lazy.gap(VertexId(9), 2).unwrap());
    }

    #[test]
    fn lazy_jumps_do_not_depend_on_lambda() {
        let src = RandomSource::new(11, 2);
        let a = InstructionSource::lazy(Topology::Grid2d, src, 0.3).unwrap();
        let b = InstructionSource::lazy(Topology::Grid2d, src, 3.0).unwrap();
        let w = Window::new(vec![VertexId(0), Topology::grid_vertex(1, -1)], 50).unwrap();
        // Smaller rate means fewer sleeps: a larger array.
        assert_eq!(b.compare(&a, &w).unwrap(), Comparison::Less);
    }

    #[test]
    fn rejects_bad_jump_index() {
        let a = ExplicitArray { gaps: vec![(0, 2)], trailing: 0 };
        assert!(InstructionSource::explicit(Topology::Line, HashMap::from([(O, a)])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn slots() -> impl Strategy<Value = Vec<InstructionSlot>> {
            proptest::collection::vec(
                prop_oneof![Just(S), (0u32..2).prop_map(J)],
                0..30,
            )
        }

        fn gaps_of(tau: &InstructionSource) -> ExplicitArray {
            tau.prefix(O, 64).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn counters_round_trip(s in slots()) {
                let tau = single(&s);
                let a = gaps_of(&tau);
                prop_assert_eq!(a.to_slots(), s.clone());
                for (n, slot) in s.iter().enumerate() {
                    prop_assert_eq!(tau.slot(O, n as u64).unwrap(), *slot);
                }
                for (m, (t, sl)) in scan_counters(&s).into_iter().enumerate() {
                    let (ct, _, cs) = tau.counters(O, m as u64).unwrap();
                    prop_assert_eq!((ct, cs), (t, sl));
                }
            }

            #[test]
            fn gamma_laws(s in slots(), m in 0u64..8) {
                let tau = single(&s);
                let minus = tau.gamma_minus(O, m);
                prop_assert_eq!(gaps_of(&minus.gamma_minus(O, m)), gaps_of(&minus));
                let one = tau.gamma_one(O, m);
                prop_assert_eq!(gaps_of(&one.gamma_one(O, m)), gaps_of(&one));
                prop_assert_eq!(gaps_of(&one.gamma_minus(O, m)), gaps_of(&minus));
                let w = Window::new(vec![O], 64).unwrap();
                prop_assert!(tau.compare(&minus, &w).unwrap().is_le());
                // Jumps and other gaps are untouched.
                let (a, b) = (gaps_of(&tau), gaps_of(&one));
                prop_assert_eq!(a.gaps.len(), b.gaps.len());
                for (g, (x, y)) in a.gaps.iter().zip(&b.gaps).enumerate() {
                    prop_assert_eq!(x.1, y.1);
                    if g as u64 != m {
                        prop_assert_eq!(x.0, y.0);
                    }
                }
            }

            #[test]
            fn gamma_minus_shift_rule(s in slots(), m in 0u64..8) {
                let tau = single(&s);
                let a = gaps_of(&tau);
                prop_assume!((m as usize) < a.gaps.len());
                let cut = tau.gamma_minus(O, m);
                let (t_prev, shift) = if m == 0 { (None, a.gaps[0].0) } else {
                    (Some(tau.counters(O, m - 1).unwrap().0), a.gaps[m as usize].0)
                };
                let first_moved = t_prev.map_or(0, |t| t + 1);
                for n in 0..first_moved {
                    prop_assert_eq!(cut.slot(O, n).unwrap(), tau.slot(O, n).unwrap());
                }
                for n in first_moved..(s.len() as u64 - shift) {
                    prop_assert_eq!(cut.slot(O, n).unwrap(), tau.slot(O, n + shift).unwrap());
                }
            }
        }
    }
}
