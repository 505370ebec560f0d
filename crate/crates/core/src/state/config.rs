use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Comparison, SiteState, Window};
use crate::error::{ArwError, Result};
use crate::randomness::{ParticleLaw, RandomSource};
use crate::topology::VertexId;

/// Which sites start with active particles (`φ = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Activity {
    #[default]
    AllActive,
    ActiveSet(BTreeSet<VertexId>),
}

impl Activity {
    pub fn is_active(&self, x: VertexId) -> bool {
        match self {
            Activity::AllActive => true,
            Activity::ActiveSet(s) => s.contains(&x),
        }
    }
}

/// The activity function `ξ`: `φ(x)` is Bernoulli with parameter `ξ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ActivityFunction {
    #[default]
    AllActive,
    Constant { p: f64 },
    /// Only `at` is active; with `λ = 0` this is the frog model.
    Delta { at: VertexId },
}

impl ActivityFunction {
    pub fn xi(&self, x: VertexId) -> f64 {
        match *self {
            ActivityFunction::AllActive => 1.0,
            ActivityFunction::Constant { p } => p,
            ActivityFunction::Delta { at } => f64::from(u8::from(x == at)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ActivityFunction::Constant { p } if !(0.0..=1.0).contains(&p) => Err(
                ArwError::InvalidArgument(format!("activity probability {p} outside [0, 1]")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edit {
    /// `η^{(x,k)}`: exactly `k` particles at `x`.
    SetCount(u32),
    /// `η^x`: one more active particle at `x`.
    AddOne,
}

/// Sparse configuration; absent sites are empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParticleConfig {
    sites: BTreeMap<VertexId, SiteState>,
    activity: Activity,
}

impl ParticleConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_activity(activity: Activity) -> Self {
        ParticleConfig {
            sites: BTreeMap::new(),
            activity,
        }
    }

    /// All-active configuration from plain counts.
    pub fn from_counts<I: IntoIterator<Item = (VertexId, u32)>>(counts: I) -> Self {
        let mut c = Self::new();
        for (x, k) in counts {
            c.set_count(x, k);
        }
        c
    }

    /// Draws `η_μ` (and `φ`) on `vertices` from the coupling source.
    pub fn sample(
        vertices: &[VertexId],
        law: &ParticleLaw,
        src: &RandomSource,
        xi: &ActivityFunction,
    ) -> Self {
        let activity = match xi {
            ActivityFunction::AllActive => Activity::AllActive,
            _ => Activity::ActiveSet(
                vertices
                    .iter()
                    .copied()
                    .filter(|&x| src.activity(x, xi.xi(x)))
                    .collect(),
            ),
        };
        let mut c = Self::with_activity(activity);
        for &x in vertices {
            c.set_count(x, src.particles(x, law));
        }
        c
    }

    pub fn activity(&self) -> &Activity {
        &self.activity
    }

    pub fn get(&self, x: VertexId) -> SiteState {
        self.sites.get(&x).copied().unwrap_or(SiteState::Empty)
    }

    pub fn set(&mut self, x: VertexId, s: SiteState) {
        if s == SiteState::Empty {
            self.sites.remove(&x);
        } else {
            self.sites.insert(x, s);
        }
    }

    /// `k` particles at `x`, active or dormant according to `φ(x)`.
    pub fn set_count(&mut self, x: VertexId, k: u32) {
        let s = if self.activity.is_active(x) {
            SiteState::active(k)
        } else {
            SiteState::sleeping(k)
        };
        self.set(x, s);
    }

    pub fn add_one(&mut self, x: VertexId) {
        self.set(x, self.get(x).add_one());
    }

    pub fn edit(&self, x: VertexId, op: Edit) -> Self {
        let mut c = self.clone();
        match op {
            Edit::SetCount(k) => c.set_count(x, k),
            Edit::AddOne => c.add_one(x),
        }
        c
    }

    pub fn count(&self, x: VertexId) -> u32 {
        self.get(x).count()
    }

    pub fn total(&self) -> u64 {
        self.sites.values().map(|s| s.count() as u64).sum()
    }

    /// Non-empty sites in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, SiteState)> + '_ {
        self.sites.iter().map(|(&x, &s)| (x, s))
    }

    pub fn compare(&self, other: &Self, window: &Window) -> Result<Comparison> {
        if window.vertices.is_empty() {
            return Err(ArwError::WindowUnspecified);
        }
        Ok(window.vertices.iter().fold(Comparison::Equal, |acc, &x| {
            acc.combine(self.get(x).partial_cmp(&other.get(x)))
        }))
    }

    /// Restriction to `vertices`, keeping the activity flags.
    pub fn restrict(&self, vertices: &[VertexId]) -> Self {
        let mut c = Self::with_activity(self.activity.clone());
        for &x in vertices {
            c.set(x, self.get(x));
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u64) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn edits_touch_one_site() {
        let eta = ParticleConfig::from_counts([(v(0), 3), (v(1), 1)]);
        let e0 = eta.edit(v(0), Edit::SetCount(0));
        assert_eq!(e0.get(v(0)), SiteState::Empty);
        assert_eq!(e0.get(v(1)), SiteState::Active(1));
        let mut s = ParticleConfig::new();
        s.set(v(2), SiteState::Sleeping);
        assert_eq!(s.edit(v(2), Edit::AddOne).get(v(2)), SiteState::Active(2));
    }

    #[test]
    fn dormant_sites_sleep() {
        let mut c = ParticleConfig::with_activity(Activity::ActiveSet([v(0)].into()));
        c.set_count(v(0), 2);
        c.set_count(v(1), 3);
        c.set_count(v(2), 1);
        assert_eq!(c.get(v(0)), SiteState::Active(2));
        assert_eq!(c.get(v(1)), SiteState::SleepingMany(3));
        assert_eq!(c.get(v(2)), SiteState::Sleeping);
    }

    #[test]
    fn add_one_dominates() {
        let eta = ParticleConfig::from_counts([(v(0), 1)]);
        let w = Window::new(vec![v(0), v(1)], 0).unwrap();
        assert_eq!(eta.compare(&eta.edit(v(1), Edit::AddOne), &w).unwrap(), Comparison::Less);
        assert_eq!(eta.compare(&eta, &w).unwrap(), Comparison::Equal);
    }

    #[test]
    fn delta_activity_sampling() {
        let src = RandomSource::new(5, 0);
        let law = ParticleLaw::poisson(2.0).unwrap();
        let vs: Vec<_> = (0..20).map(v).collect();
        let c = ParticleConfig::sample(&vs, &law, &src, &ActivityFunction::Delta { at: v(0) });
        for (x, s) in c.iter() {
            assert_eq!(x == v(0), !s.is_stable(), "{x:?} {s:?}");
        }
    }
}
