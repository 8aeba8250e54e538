//! Lifetime distribution models, inverse-CDF sampling, and deterministic
//! per-trial random streams.
//!
//! Sampling is defined exclusively as `quantile(dist, u)` of a single uniform
//! draw per (trial, component), so that the two redundancy architectures
//! compared in a trial consume the identical component realization. The
//! uniform draw is a pure function of `(seed, trial_index, component_tag)`;
//! there is no sequential generator state, which lets trials run on any
//! number of workers with bit-identical results.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// One atom of a finite-support distribution: a lifetime value carrying an
/// exact rational probability weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub weight: BigRational,
}

/// Parametric or finite-support model of a component lifetime.
///
/// Constructed through the checked constructors, which enforce the parameter
/// constraints; the enum fields themselves are read-only from outside.
#[derive(Debug, Clone, PartialEq)]
pub enum LifetimeDistribution {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Uniform { lo: f64, hi: f64 },
    PointMass { value: f64 },
    DiscreteFinite { atoms: Vec<Atom> },
}

impl LifetimeDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::Domain(format!(
                "exponential rate must be finite and > 0, got {rate}"
            )));
        }
        Ok(LifetimeDistribution::Exponential { rate })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        if !shape.is_finite() || shape <= 0.0 || !scale.is_finite() || scale <= 0.0 {
            return Err(Error::Domain(format!(
                "weibull requires shape > 0 and scale > 0, got shape={shape}, scale={scale}"
            )));
        }
        Ok(LifetimeDistribution::Weibull { shape, scale })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi <= lo {
            return Err(Error::Domain(format!(
                "uniform requires 0 <= lo < hi, got lo={lo}, hi={hi}"
            )));
        }
        Ok(LifetimeDistribution::Uniform { lo, hi })
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Domain(format!(
                "point mass value must be finite and >= 0, got {value}"
            )));
        }
        Ok(LifetimeDistribution::PointMass { value })
    }

    /// Finite-support distribution from `(value, weight)` atoms. Values must
    /// be nonnegative, finite, and strictly increasing; weights must be
    /// positive rationals summing to exactly 1.
    pub fn discrete_finite(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("discrete distribution needs at least one atom".into()));
        }
        let mut total = BigRational::zero();
        for (i, atom) in atoms.iter().enumerate() {
            if !atom.value.is_finite() || atom.value < 0.0 {
                return Err(Error::Domain(format!(
                    "atom {i} value must be finite and >= 0, got {}",
                    atom.value
                )));
            }
            if i > 0 && atoms[i - 1].value >= atom.value {
                return Err(Error::Domain(format!(
                    "atom values must be strictly increasing, atom {i} ({}) does not exceed atom {} ({})",
                    atom.value,
                    i - 1,
                    atoms[i - 1].value
                )));
            }
            if atom.weight <= BigRational::zero() {
                return Err(Error::Domain(format!("atom {i} weight must be positive")));
            }
            total += &atom.weight;
        }
        if !total.is_one() {
            return Err(Error::Domain(format!("atom weights must sum to 1, got {total}")));
        }
        Ok(LifetimeDistribution::DiscreteFinite { atoms })
    }

    /// Inverse CDF. `u = 1` on an unbounded distribution yields `+inf`
    /// (the essential supremum); the counter-based uniform draw never
    /// produces `u = 1`, so sampled lifetimes are always finite.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("quantile level must be in [0, 1], got {u}")));
        }
        Ok(match self {
            LifetimeDistribution::Exponential { rate } => -f64::ln_1p(-u) / rate,
            LifetimeDistribution::Weibull { shape, scale } => {
                scale * (-f64::ln_1p(-u)).powf(1.0 / shape)
            }
            LifetimeDistribution::Uniform { lo, hi } => lo + u * (hi - lo),
            LifetimeDistribution::PointMass { value } => *value,
            LifetimeDistribution::DiscreteFinite { atoms } => {
                // Smallest atom whose cumulative weight reaches u, with the
                // comparison done in exact rational arithmetic (every f64 is
                // an exact rational).
                let u_exact = BigRational::from_float(u).expect("u is finite");
                let mut cum = BigRational::zero();
                let mut chosen = atoms.last().expect("atoms nonempty").value;
                for atom in atoms {
                    cum += &atom.weight;
                    if cum >= u_exact {
                        chosen = atom.value;
                        break;
                    }
                }
                chosen
            }
        })
    }

    /// CDF, used by statistical self-tests.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            LifetimeDistribution::Exponential { rate } => {
                if t < 0.0 {
                    0.0
                } else {
                    1.0 - (-rate * t).exp()
                }
            }
            LifetimeDistribution::Weibull { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    1.0 - (-(t / scale).powf(*shape)).exp()
                }
            }
            LifetimeDistribution::Uniform { lo, hi } => ((t - lo) / (hi - lo)).clamp(0.0, 1.0),
            LifetimeDistribution::PointMass { value } => {
                if t >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            LifetimeDistribution::DiscreteFinite { atoms } => {
                let mut cum = BigRational::zero();
                for atom in atoms {
                    if atom.value > t {
                        break;
                    }
                    cum += &atom.weight;
                }
                rational_to_f64(&cum)
            }
        }
    }

    /// Finite-support atoms, if this distribution has them. PointMass is a
    /// single atom of weight 1.
    pub fn finite_atoms(&self) -> Option<Vec<Atom>> {
        match self {
            LifetimeDistribution::PointMass { value } => Some(vec![Atom {
                value: *value,
                weight: BigRational::one(),
            }]),
            LifetimeDistribution::DiscreteFinite { atoms } => Some(atoms.clone()),
            _ => None,
        }
    }

    /// Draw one lifetime from the stream's deterministic uniform.
    pub fn sample(&self, stream: RandomStream) -> Result<f64> {
        self.quantile(stream.uniform())
    }

    /// Stable one-line rendering used for scenario digests.
    pub fn canonical_string(&self) -> String {
        match self {
            LifetimeDistribution::Exponential { rate } => format!("exponential(rate={rate})"),
            LifetimeDistribution::Weibull { shape, scale } => {
                format!("weibull(shape={shape},scale={scale})")
            }
            LifetimeDistribution::Uniform { lo, hi } => format!("uniform(lo={lo},hi={hi})"),
            LifetimeDistribution::PointMass { value } => format!("point_mass(value={value})"),
            LifetimeDistribution::DiscreteFinite { atoms } => {
                let parts: Vec<String> = atoms
                    .iter()
                    .map(|a| format!("{}:{}/{}", a.value, a.weight.numer(), a.weight.denom()))
                    .collect();
                format!("discrete({})", parts.join(","))
            }
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let numer = bigint_to_f64(r.numer());
    let denom = bigint_to_f64(r.denom());
    numer / denom
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
}

/// Identifies one component draw inside a trial: layer 0 is the original
/// vector X, layer i >= 1 is the redundancy set Y_i; positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentTag {
    pub layer: u32,
    pub position: u32,
}

/// Counter-based random stream: the uniform draw is a pure function of
/// `(seed, trial_index, component_tag)`. No mutation, no sequencing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStream {
    pub seed: u64,
    pub trial_index: u64,
    pub tag: ComponentTag,
}

impl RandomStream {
    pub fn new(seed: u64, trial_index: u64, layer: u32, position: u32) -> Self {
        RandomStream {
            seed,
            trial_index,
            tag: ComponentTag { layer, position },
        }
    }

    /// The stream's uniform draw in [0, 1), on the 2^53 grid.
    pub fn uniform(self) -> f64 {
        let bits = self.mixed_bits();
        (bits >> 11) as f64 * (1.0 / 9007199254740992.0) // 2^-53
    }

    fn mixed_bits(self) -> u64 {
        let tag = (u64::from(self.tag.layer) << 32) | u64::from(self.tag.position);
        let mut h = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        h = mix64(h ^ mix64(self.trial_index.wrapping_add(0xd134_2543_de82_ef95)));
        h = mix64(h ^ mix64(tag.wrapping_add(0x94d0_49bb_1331_11eb)));
        h
    }
}

// splitmix64 finalizer
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
