//! Counter-based coupling source.
//!
//! Every random quantity is a pure function of the key
//! `(seed, replicate, tag, vertex, slot)`. The key is folded through the
//! splitmix64 finalizer:
//!
//! ```text
//! h = mix64(seed + GOLDEN)
//! for w in [replicate, tag, vertex, slot]:
//!     h = mix64((h + GOLDEN) ^ w)        // wrapping add
//! uniform = (h >> 11) * 2^-53             // in [0, 1)
//! ```
//!
//! Tags are fixed: 0 particle counts, 1 inter-jump sleep counts, 2 jump
//! targets, 3 activity flags. Because the decoders below are monotone in
//! their parameter, configurations and arrays drawn at different `(λ, μ)`
//! from one key are coupled pointwise.

use serde::{Deserialize, Serialize};

use crate::error::{ArwError, Result};
use crate::topology::VertexId;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub const TAG_PARTICLES: u64 = 0;
pub const TAG_GAPS: u64 = 1;
pub const TAG_JUMPS: u64 = 2;
pub const TAG_ACTIVITY: u64 = 3;

/// Poisson means above this make `e^{-μ}` lose too much relative precision.
pub const MAX_POISSON_MEAN: f64 = 500.0;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub replicate: u64,
}

impl RandomSource {
    pub fn new(seed: u64, replicate: u64) -> Self {
        RandomSource { seed, replicate }
    }

    pub fn with_replicate(&self, replicate: u64) -> Self {
        RandomSource { replicate, ..*self }
    }

    pub fn bits(&self, tag: u64, v: VertexId, slot: u64) -> u64 {
        let mut h = mix64(self.seed.wrapping_add(GOLDEN));
        for w in [self.replicate, tag, v.0, slot] {
            h = mix64(h.wrapping_add(GOLDEN) ^ w);
        }
        h
    }

    pub fn uniform(&self, tag: u64, v: VertexId, slot: u64) -> f64 {
        (self.bits(tag, v, slot) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// The variable `X_v` that seeds the initial particle count at `v`.
    pub fn uniform_site(&self, v: VertexId) -> f64 {
        self.uniform(TAG_PARTICLES, v, 0)
    }

    pub fn particles(&self, v: VertexId, law: &ParticleLaw) -> u32 {
        decode_particles(self.uniform_site(v), law)
    }

    /// Sleep instructions preceding the `m`-th jump at `v`.
    pub fn sleeps(&self, v: VertexId, m: u64, lambda: f64) -> Result<u64> {
        decode_sleep_count(1.0 - self.uniform(TAG_GAPS, v, m), lambda)
    }

    /// Neighbor index of the `m`-th jump at `v`; independent of `(λ, μ)`.
    pub fn jump(&self, v: VertexId, m: u64, degree: usize) -> u32 {
        ((self.bits(TAG_JUMPS, v, m) as u128 * degree as u128) >> 64) as u32
    }

    /// Activity flag: `true` (active) with probability `xi`.
    pub fn activity(&self, v: VertexId, xi: f64) -> bool {
        self.uniform(TAG_ACTIVITY, v, 0) < xi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ParticleLaw {
    Poisson { mean: f64 },
    Bernoulli { mean: f64 },
}

impl ParticleLaw {
    pub fn poisson(mean: f64) -> Result<Self> {
        let law = ParticleLaw::Poisson { mean };
        law.validate()?;
        Ok(law)
    }

    pub fn bernoulli(mean: f64) -> Result<Self> {
        let law = ParticleLaw::Bernoulli { mean };
        law.validate()?;
        Ok(law)
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ParticleLaw::Poisson { mean } | ParticleLaw::Bernoulli { mean } => mean,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ParticleLaw::Poisson { .. } => "poisson",
            ParticleLaw::Bernoulli { .. } => "bernoulli",
        }
    }

    /// Same family at a different density.
    pub fn with_mean(&self, mean: f64) -> Self {
        match self {
            ParticleLaw::Poisson { .. } => ParticleLaw::Poisson { mean },
            ParticleLaw::Bernoulli { .. } => ParticleLaw::Bernoulli { mean },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ParticleLaw::Poisson { mean } => {
                if !(mean.is_finite() && (0.0..=MAX_POISSON_MEAN).contains(&mean)) {
                    return Err(ArwError::InvalidLaw(format!(
                        "poisson mean must lie in [0, {MAX_POISSON_MEAN}], got {mean}"
                    )));
                }
            }
            ParticleLaw::Bernoulli { mean } => {
                if !(mean > 0.0 && mean < 1.0) {
                    return Err(ArwError::InvalidLaw(format!(
                        "bernoulli mean must lie in (0, 1), got {mean}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn pmf(&self, k: u32) -> f64 {
        match *self {
            ParticleLaw::Bernoulli { mean } => match k {
                0 => 1.0 - mean,
                1 => mean,
                _ => 0.0,
            },
            ParticleLaw::Poisson { mean } => {
                if mean == 0.0 {
                    return if k == 0 { 1.0 } else { 0.0 };
                }
                let mut p = (-mean).exp();
                for j in 1..=k {
                    p *= mean / j as f64;
                }
                p
            }
        }
    }

    /// `ν_{<k}`.
    pub fn cdf_below(&self, k: u32) -> f64 {
        let mut acc = Neumaier::default();
        for j in 0..k {
            acc.add(self.pmf(j));
        }
        acc.sum().min(1.0)
    }

    /// `ν_{>k}`, summed from the tail side when it is small.
    pub fn tail_above(&self, k: u32) -> f64 {
        match *self {
            ParticleLaw::Bernoulli { mean } => {
                if k == 0 {
                    mean
                } else {
                    0.0
                }
            }
            ParticleLaw::Poisson { mean } => {
                if (k as f64) < mean {
                    return (1.0 - self.cdf_below(k + 1)).max(0.0);
                }
                let mut acc = Neumaier::default();
                let mut p = self.pmf(k + 1);
                let mut j = k + 1;
                while p > 0.0 {
                    acc.add(p);
                    if p < 1e-18 * acc.sum() {
                        break;
                    }
                    j += 1;
                    p *= mean / j as f64;
                }
                acc.sum()
            }
        }
    }

    /// `ν_{≥k}`.
    pub fn tail_from(&self, k: u32) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.tail_above(k - 1)
        }
    }

    /// `d/dμ ν_{>k}(μ)`.
    pub fn tail_above_derivative(&self, k: u32) -> f64 {
        match self {
            ParticleLaw::Bernoulli { .. } => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            ParticleLaw::Poisson { .. } => self.pmf(k),
        }
    }

    /// Smallest `k` with `ν_{>k} < eps`; counts beyond it carry negligible mass.
    pub fn truncation_point(&self, eps: f64) -> u32 {
        let mut k = 0;
        while self.tail_above(k) >= eps {
            k += 1;
        }
        k
    }
}

/// The unique `k` with `u ∈ [ν_{<k}, ν_{<k+1})`.
pub fn decode_particles(u: f64, law: &ParticleLaw) -> u32 {
    match *law {
        ParticleLaw::Bernoulli { mean } => u32::from(u >= 1.0 - mean),
        ParticleLaw::Poisson { mean } => {
            if mean == 0.0 {
                return 0;
            }
            let mut p = (-mean).exp();
            let mut cdf = Neumaier::default();
            let mut k = 0u32;
            loop {
                cdf.add(p);
                let c = cdf.sum();
                if u < c || (1.0 - c < 1e-15 && k as f64 >= mean) {
                    return k;
                }
                k += 1;
                p *= mean / k as f64;
            }
        }
    }
}

/// The unique `ℓ` with `u ∈ (q^{ℓ+1}, q^ℓ]`, `q = λ/(1+λ)`.
pub fn decode_sleep_count(u: f64, lambda: f64) -> Result<u64> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(ArwError::UniformOutOfRange(u));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(ArwError::InvalidArgument(format!(
            "sleep rate must be finite and nonnegative, got {lambda}"
        )));
    }
    if lambda == 0.0 || u == 1.0 {
        return Ok(0);
    }
    let q = lambda / (1.0 + lambda);
    // ln q computed as -ln(1 + 1/λ) keeps precision for large λ.
    let ln_q = -(1.0 / lambda).ln_1p();
    let raw = (u.ln() / ln_q).floor();
    if raw >= u64::MAX as f64 {
        return Ok(u64::MAX);
    }
    let mut l = raw as u64;
    if l < 1 << 20 {
        let pow = |e: u64| q.powi(e as i32);
        while l > 0 && u > pow(l) {
            l -= 1;
        }
        while u <= pow(l + 1) {
            l += 1;
        }
    }
    Ok(l)
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
