//! Particle configurations, instruction arrays and their partial orders.

mod config;
mod instructions;
mod text;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ArwError, Result};
use crate::topology::VertexId;

pub use config::{Activity, ActivityFunction, Edit, ParticleConfig};
pub use instructions::{ExplicitArray, Gap, InstructionSlot, InstructionSource};
pub use text::Instance;

/// Occupation of one site, ordered `0 < ρ < 1 < 2 < …`.
///
/// `SleepingMany(k)` (with `k ≥ 2`) only arises from dormant initial data:
/// `k` sleeping particles that all wake when an active particle arrives.
/// It is comparable with `Empty`, `Sleeping` and other `SleepingMany`
/// states but not with `Active`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SiteState {
    Empty,
    Sleeping,
    Active(u32),
    SleepingMany(u32),
}

impl SiteState {
    pub fn active(n: u32) -> Self {
        if n == 0 {
            SiteState::Empty
        } else {
            SiteState::Active(n)
        }
    }

    pub fn sleeping(n: u32) -> Self {
        match n {
            0 => SiteState::Empty,
            1 => SiteState::Sleeping,
            k => SiteState::SleepingMany(k),
        }
    }

    pub fn count(&self) -> u32 {
        match *self {
            SiteState::Empty => 0,
            SiteState::Sleeping => 1,
            SiteState::Active(n) | SiteState::SleepingMany(n) => n,
        }
    }

    pub fn is_stable(&self) -> bool {
        !matches!(self, SiteState::Active(_))
    }

    /// One more active particle arrives; sleepers wake (`1 + ρ = 2`).
    pub fn add_one(self) -> Self {
        SiteState::Active(self.count() + 1)
    }
}

impl PartialOrd for SiteState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use SiteState::*;
        // Rank 0 empty, 1 sleeping, then counts shifted by one for actives.
        let rank = |s: &SiteState| match *s {
            Empty => Some(0u64),
            Sleeping => Some(1),
            Active(n) => Some(n as u64 + 1),
            SleepingMany(_) => None,
        };
        match (self, other) {
            (SleepingMany(a), SleepingMany(b)) => a.partial_cmp(b),
            (SleepingMany(_), Empty | Sleeping) => Some(Ordering::Greater),
            (Empty | Sleeping, SleepingMany(_)) => Some(Ordering::Less),
            (SleepingMany(_), Active(_)) | (Active(_), SleepingMany(_)) => None,
            _ => rank(self).partial_cmp(&rank(other)),
        }
    }
}

impl fmt::Display for SiteState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteState::Empty => write!(f, "0"),
            SiteState::Sleeping => write!(f, "rho"),
            SiteState::Active(n) => write!(f, "{n}"),
            SiteState::SleepingMany(k) => write!(f, "rho*{k}"),
        }
    }
}

impl std::str::FromStr for SiteState {
    type Err = ArwError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || ArwError::InvalidArgument(format!("unknown site state `{s}`"));
        if s == "rho" {
            return Ok(SiteState::Sleeping);
        }
        if let Some(k) = s.strip_prefix("rho*") {
            return Ok(SiteState::sleeping(k.parse().map_err(|_| bad())?));
        }
        Ok(SiteState::active(s.parse().map_err(|_| bad())?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Equal,
    Less,
    Greater,
    Incomparable,
}

impl Comparison {
    /// Fold one coordinate-wise comparison into a running verdict.
    pub fn combine(self, next: Option<Ordering>) -> Comparison {
        use Comparison::*;
        match (self, next) {
            (Incomparable, _) | (_, None) => Incomparable,
            (c, Some(Ordering::Equal)) => c,
            (Equal | Less, Some(Ordering::Less)) => Less,
            (Equal | Greater, Some(Ordering::Greater)) => Greater,
            _ => Incomparable,
        }
    }

    /// `a ≤ b` in the partial order.
    pub fn is_le(self) -> bool {
        matches!(self, Comparison::Equal | Comparison::Less)
    }
}

/// Finite window on which configurations and arrays are compared: a vertex
/// set and, for arrays, the number of leading gaps per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub vertices: Vec<VertexId>,
    pub horizon: u64,
}

impl Window {
    pub fn new(vertices: Vec<VertexId>, horizon: u64) -> Result<Self> {
        if vertices.is_empty() {
            return Err(ArwError::WindowUnspecified);
        }
        Ok(Window { vertices, horizon })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_order() {
        use SiteState::*;
        assert!(Empty < Sleeping);
        assert!(Sleeping < Active(1));
        assert!(Active(1) < Active(2));
        assert!(Empty < SleepingMany(3));
        assert!(SleepingMany(2) < SleepingMany(3));
        assert_eq!(SleepingMany(2).partial_cmp(&Active(5)), None);
    }

    #[test]
    fn add_one_rules() {
        use SiteState::*;
        assert_eq!(Empty.add_one(), Active(1));
        assert_eq!(Sleeping.add_one(), Active(2));
        assert_eq!(Active(3).add_one(), Active(4));
        assert_eq!(SleepingMany(3).add_one(), Active(4));
        assert_eq!(Empty.add_one().add_one(), Active(2));
    }

    #[test]
    fn state_text_round_trip() {
        for s in [SiteState::Empty, SiteState::Sleeping, SiteState::Active(4), SiteState::SleepingMany(3)] {
            assert_eq!(s.to_string().parse::<SiteState>().unwrap(), s);
        }
        assert_eq!("rho*1".parse::<SiteState>().unwrap(), SiteState::Sleeping);
        assert!("x".parse::<SiteState>().is_err());
    }

    #[test]
    fn empty_window_rejected() {
        assert_eq!(Window::new(vec![], 3), Err(ArwError::WindowUnspecified));
    }

    #[test]
    fn comparison_folding() {
        use Comparison::*;
        assert_eq!(Equal.combine(Some(Ordering::Less)).combine(Some(Ordering::Equal)), Less);
        assert_eq!(Less.combine(Some(Ordering::Greater)), Incomparable);
        assert_eq!(Greater.combine(None), Incomparable);
    }
}
