//! Line-oriented text format for small test instances.
//!
//! ```text
//! # comments and blank lines are ignored
//! topology line
//! eta -1 2          # vertex, state: 0 | rho | n | rho*k
//! eta 0 rho
//! tau 0 s s j1 j0   # vertex, slots: s = sleep, jN = jump to neighbor N
//! tail 42 0.5       # optional: seed and rate continuing every array
//! ```
//!
//! The `topology` line must come first. Vertices use the topology's label
//! form (`-3` on the line, `x,y` on the grid, an index otherwise).

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::{ExplicitArray, InstructionSlot, InstructionSource, ParticleConfig, SiteState};
use crate::error::{ArwError, Result};
use crate::randomness::RandomSource;
use crate::topology::{Topology, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub topology: Topology,
    pub eta: ParticleConfig,
    pub tau: BTreeMap<VertexId, ExplicitArray>,
    pub tail: Option<(u64, f64)>,
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let mut topology = None;
        let mut eta = ParticleConfig::new();
        let mut tau = BTreeMap::new();
        let mut tail = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| ArwError::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            if key == "topology" {
                if topology.is_some() {
                    return Err(err("duplicate topology line".into()));
                }
                topology = Some(rest.parse::<Topology>().map_err(|e| err(e.to_string()))?);
                continue;
            }
            let topo = topology.ok_or_else(|| err("`topology` must come first".into()))?;
            let mut words = rest.split_whitespace();
            match key {
                "eta" => {
                    let v = words.next().ok_or_else(|| err("missing vertex".into()))?;
                    let s = words.next().ok_or_else(|| err("missing state".into()))?;
                    if words.next().is_some() {
                        return Err(err("trailing tokens after state".into()));
                    }
                    let v = topo.parse_vertex(v).map_err(|e| err(e.to_string()))?;
                    let s: SiteState = s.parse().map_err(|e: ArwError| err(e.to_string()))?;
                    eta.set(v, s);
                }
                "tau" => {
                    let v = words.next().ok_or_else(|| err("missing vertex".into()))?;
                    let v = topo.parse_vertex(v).map_err(|e| err(e.to_string()))?;
                    let d = topo.degree(v).map_err(|e| err(e.to_string()))?;
                    let slots = words
                        .map(|w| parse_slot(w, d).map_err(&err))
                        .collect::<Result<Vec<_>>>()?;
                    if tau.insert(v, ExplicitArray::from_slots(&slots)).is_some() {
                        return Err(err(format!("duplicate array for {}", topo.format_vertex(v))));
                    }
                }
                "tail" => {
                    let seed = words.next().and_then(|w| w.parse().ok());
                    let lambda = words.next().and_then(|w| w.parse().ok());
                    match (seed, lambda) {
                        (Some(s), Some(l)) => tail = Some((s, l)),
                        _ => return Err(err("expected `tail <seed> <rate>`".into())),
                    }
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let topology = topology.ok_or(ArwError::Parse {
            line: 0,
            message: "missing topology line".into(),
        })?;
        Ok(Instance { topology, eta, tau, tail })
    }

    pub fn format(&self) -> String {
        let t = &self.topology;
        let mut out = format!("topology {t}\n");
        for (v, s) in self.eta.iter() {
            let _ = writeln!(out, "eta {} {s}", t.format_vertex(v));
        }
        for (v, a) in &self.tau {
            let _ = write!(out, "tau {}", t.format_vertex(*v));
            for s in a.to_slots() {
                match s {
                    InstructionSlot::Sleep => out.push_str(" s"),
                    InstructionSlot::Jump(j) => {
                        let _ = write!(out, " j{j}");
                    }
                }
            }
            out.push('\n');
        }
        if let Some((seed, lambda)) = self.tail {
            let _ = writeln!(out, "tail {seed} {lambda}");
        }
        out
    }

    pub fn source(&self) -> Result<InstructionSource> {
        let arrays: HashMap<_, _> = self.tau.iter().map(|(k, v)| (*k, v.clone())).collect();
        match self.tail {
            Some((seed, lambda)) => InstructionSource::explicit_with_tail(
                self.topology,
                arrays,
                RandomSource::new(seed, 0),
                lambda,
            ),
            None => InstructionSource::explicit(self.topology, arrays),
        }
    }
}

fn parse_slot(w: &str, degree: usize) -> std::result::Result<InstructionSlot, String> {
    if w == "s" {
        return Ok(InstructionSlot::Sleep);
    }
    let j: u32 = w
        .strip_prefix('j')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("bad slot `{w}`"))?;
    if j as usize >= degree {
        return Err(format!("jump index {j} exceeds degree {degree}"));
    }
    Ok(InstructionSlot::Jump(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two-site line instance
topology line
eta -1 2
eta 0 rho
tau 0 s s j1 j0 # trailing comment
tau -1 j1 s
";

    #[test]
    fn parses_sample() {
        let inst = Instance::parse(SAMPLE).unwrap();
        assert_eq!(inst.eta.get(Topology::line_vertex(-1)), SiteState::Active(2));
        assert_eq!(inst.eta.get(VertexId(0)), SiteState::Sleeping);
        assert_eq!(inst.tau[&VertexId(0)].gaps, vec![(2, 1), (0, 0)]);
        assert_eq!(inst.tau[&Topology::line_vertex(-1)].trailing, 1);
        let src = inst.source().unwrap();
        assert_eq!(src.counters(VertexId(0), 1).unwrap(), (3, 0, 0));
    }

    #[test]
    fn reports_line_numbers() {
        let e = Instance::parse("topology line\neta 0 zz\n").unwrap_err();
        assert!(matches!(e, ArwError::Parse { line: 2, .. }));
        let e = Instance::parse("eta 0 1\n").unwrap_err();
        assert!(matches!(e, ArwError::Parse { line: 1, .. }));
        let e = Instance::parse("topology line\ntau 0 j2\n").unwrap_err();
        assert!(matches!(e, ArwError::Parse { line: 2, .. }));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn state() -> impl Strategy<Value = SiteState> {
            prop_oneof![
                Just(SiteState::Sleeping),
                (1u32..5).prop_map(SiteState::Active),
                (2u32..5).prop_map(SiteState::SleepingMany),
            ]
        }

        fn slot() -> impl Strategy<Value = InstructionSlot> {
            prop_oneof![Just(InstructionSlot::Sleep), (0u32..4).prop_map(InstructionSlot::Jump)]
        }

        proptest! {
            #[test]
            fn text_round_trip(
                grid in any::<bool>(),
                sites in proptest::collection::btree_map((-5i32..5, -5i32..5), state(), 0..6),
                arrays in proptest::collection::btree_map((-5i32..5, -5i32..5), proptest::collection::vec(slot(), 0..12), 0..4),
                tail in proptest::option::of((any::<u64>(), 0.0f64..4.0)),
            ) {
                let topology = if grid { Topology::Grid2d } else { Topology::Line };
                let vid = |(x, y): (i32, i32)| if grid { Topology::grid_vertex(x, y) } else { Topology::line_vertex((x * 10 + y) as i64) };
                let d = if grid { 4 } else { 2 };
                let mut eta = ParticleConfig::new();
                for (k, s) in sites {
                    eta.set(vid(k), s);
                }
                let tau = arrays
                    .into_iter()
                    .map(|(k, v)| {
                        let slots: Vec<_> = v
                            .into_iter()
                            .map(|s| match s {
                                InstructionSlot::Jump(j) => InstructionSlot::Jump(j % d),
                                s => s,
                            })
                            .collect();
                        (vid(k), ExplicitArray::from_slots(&slots))
                    })
                    .collect();
                let inst = Instance { topology, eta, tau, tail };
                let text = inst.format();
                prop_assert_eq!(Instance::parse(&text).unwrap(), inst);
            }
        }
    }
}
