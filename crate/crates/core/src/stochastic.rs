//! Seeded random streams and the small distribution kit used by the process
//! objects.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha::ChaCha8Rng`), whose
//! output is specified independently of platform and word size. Seeds are
//! derived with SplitMix64:
//!
//! * replication `r` of base seed `s` uses `splitmix64(s + (r + 1) * 0x9E3779B97F4A7C15)`;
//! * a named stream inside a replication uses
//!   `splitmix64(replication_seed ^ fnv1a64(name))`.
//!
//! Each stochastic decision point (a source's interarrivals, a router, an
//! offspring trigger, a disorder draw) owns its own named stream, so changing
//! one distribution leaves every other stream untouched.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("discrete distribution has no entries")]
    Empty,
    #[error("cumulative probability {cum} at entry {index} is outside (0, 1]")]
    OutOfRange { index: usize, cum: f64 },
    #[error("cumulative probabilities must be strictly increasing (entry {index})")]
    NotIncreasing { index: usize },
    #[error("final cumulative probability is {0}, expected 1")]
    NotNormalized(f64),
    #[error("value {0} appears more than once")]
    DuplicateValue(i64),
    #[error("probability {prob} at entry {index} is negative or not finite")]
    BadProbability { index: usize, prob: f64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a64(name: &str) -> u64 {
    name.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// A reproducible stream of uniform variates.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform sample in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Independent child stream keyed by `name`. Does not consume from `self`.
    pub fn derive(&self, name: &str) -> RngStream {
        RngStream::new(splitmix64(self.seed ^ fnv1a64(name)))
    }
}

/// Stream for replication `replication_index` of an experiment.
pub fn substream(base_seed: u64, replication_index: u64) -> RngStream {
    let mixed = base_seed.wrapping_add(replication_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    RngStream::new(splitmix64(mixed))
}

/// Integer-valued law given as `(value, cumulative probability)` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(i64, f64)>", into = "Vec<(i64, f64)>")]
pub struct DiscreteDistribution {
    entries: Vec<(i64, f64)>,
}

/// Slack allowed on the final cumulative probability before it is snapped to 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

impl DiscreteDistribution {
    pub fn from_cumulative(entries: Vec<(i64, f64)>) -> Result<Self, DistributionError> {
        if entries.is_empty() {
            return Err(DistributionError::Empty);
        }
        let mut prev = 0.0;
        let mut seen = std::collections::HashSet::new();
        for (index, &(value, cum)) in entries.iter().enumerate() {
            if !(cum > 0.0 && cum <= 1.0 + NORMALIZATION_TOLERANCE) {
                return Err(DistributionError::OutOfRange { index, cum });
            }
            if index > 0 && cum <= prev {
                return Err(DistributionError::NotIncreasing { index });
            }
            if !seen.insert(value) {
                return Err(DistributionError::DuplicateValue(value));
            }
            prev = cum;
        }
        if (prev - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(DistributionError::NotNormalized(prev));
        }
        let mut entries = entries;
        entries.last_mut().expect("non-empty").1 = 1.0;
        Ok(DiscreteDistribution { entries })
    }

    /// Builds the cumulative table from point probabilities. Zero-probability
    /// values are dropped since they can never be sampled.
    pub fn from_probabilities(pairs: &[(i64, f64)]) -> Result<Self, DistributionError> {
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(pairs.len());
        for (index, &(value, p)) in pairs.iter().enumerate() {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(DistributionError::BadProbability { index, prob: p });
            }
            if p == 0.0 {
                continue;
            }
            acc += p;
            cumulative.push((value, acc));
        }
        Self::from_cumulative(cumulative)
    }

    /// Children per couple: 0..=5 with probabilities 10/20/30/30/8/2 percent.
    pub fn offspring_default() -> Self {
        Self::from_cumulative(vec![(0, 0.10), (1, 0.30), (2, 0.60), (3, 0.90), (4, 0.98), (5, 1.00)])
            .expect("static table is valid")
    }

    pub fn entries(&self) -> &[(i64, f64)] {
        &self.entries
    }

    /// `(value, probability)` pairs recovered from the cumulative table.
    pub fn probabilities(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let mut prev = 0.0;
        self.entries.iter().map(move |&(v, c)| {
            let p = c - prev;
            prev = c;
            (v, p)
        })
    }
}

impl TryFrom<Vec<(i64, f64)>> for DiscreteDistribution {
    type Error = DistributionError;

    fn try_from(entries: Vec<(i64, f64)>) -> Result<Self, Self::Error> {
        Self::from_cumulative(entries)
    }
}

impl From<DiscreteDistribution> for Vec<(i64, f64)> {
    fn from(d: DiscreteDistribution) -> Self {
        d.entries
    }
}

/// Value of the first entry whose cumulative probability exceeds `u`.
pub fn sample_discrete(dist: &DiscreteDistribution, u: f64) -> i64 {
    let idx = dist.entries.partition_point(|&(_, cum)| cum <= u);
    dist.entries[idx.min(dist.entries.len() - 1)].0
}

pub fn mean_of(dist: &DiscreteDistribution) -> f64 {
    dist.probabilities().map(|(v, p)| v as f64 * p).sum()
}

/// Distributions accepted in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Distribution {
    Constant { value: f64 },
    Uniform { min: f64, max: f64 },
    Exponential { mean: f64 },
    Discrete { pairs: DiscreteDistribution },
}

impl Distribution {
    pub fn constant(value: f64) -> Self {
        Distribution::Constant { value }
    }

    pub fn exponential(mean: f64) -> Self {
        Distribution::Exponential { mean }
    }

    /// Draws one variate. Consumes exactly one uniform from `rng`.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = rng.uniform();
        match self {
            Distribution::Constant { value } => *value,
            Distribution::Uniform { min, max } => min + (max - min) * u,
            // Inverse transform; 1 - u lies in (0, 1], so ln is finite.
            Distribution::Exponential { mean } => -mean * (1.0 - u).ln(),
            Distribution::Discrete { pairs } => sample_discrete(pairs, u) as f64,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::Constant { value } => *value,
            Distribution::Uniform { min, max } => 0.5 * (min + max),
            Distribution::Exponential { mean } => *mean,
            Distribution::Discrete { pairs } => mean_of(pairs),
        }
    }

    /// True when every sample is guaranteed to be `>= 0`.
    pub fn is_non_negative(&self) -> bool {
        match self {
            Distribution::Constant { value } => *value >= 0.0,
            Distribution::Uniform { min, .. } => *min >= 0.0,
            Distribution::Exponential { mean } => *mean >= 0.0,
            Distribution::Discrete { pairs } => pairs.entries().iter().all(|&(v, _)| v >= 0),
        }
    }

    pub fn check(&self) -> Result<(), DistributionError> {
        match *self {
            Distribution::Constant { value } if !value.is_finite() => {
                Err(DistributionError::BadParameter(format!("constant value {value}")))
            }
            Distribution::Uniform { min, max } if !(min.is_finite() && max.is_finite() && min <= max) => {
                Err(DistributionError::BadParameter(format!("uniform bounds [{min}, {max}]")))
            }
            Distribution::Exponential { mean } if !(mean.is_finite() && mean > 0.0) => {
                Err(DistributionError::BadParameter(format!("exponential mean {mean}")))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn offspring_table_lookups() {
        let d = DiscreteDistribution::offspring_default();
        assert_eq!(sample_discrete(&d, 0.05), 0);
        assert_eq!(sample_discrete(&d, 0.95), 4);
        assert_eq!(sample_discrete(&d, 0.10), 1);
        assert_eq!(sample_discrete(&d, 0.999_999), 5);
    }

    #[test]
    fn single_entry_always_returns_its_value() {
        let d = DiscreteDistribution::from_cumulative(vec![(7, 1.0)]).unwrap();
        for u in [0.0, 0.3, 0.999] {
            assert_eq!(sample_discrete(&d, u), 7);
        }
        assert_eq!(mean_of(&d), 7.0);
    }

    #[test]
    fn means() {
        let d = DiscreteDistribution::offspring_default();
        // 0(.10) + 1(.20) + 2(.30) + 3(.30) + 4(.08) + 5(.02)
        assert!((mean_of(&d) - 2.12).abs() < 1e-12);
        let half = DiscreteDistribution::from_cumulative(vec![(0, 0.5), (2, 1.0)]).unwrap();
        assert_eq!(mean_of(&half), 1.0);
    }

    #[test]
    fn probabilities_build_same_table() {
        let d = DiscreteDistribution::from_probabilities(&[
            (0, 0.10),
            (1, 0.20),
            (2, 0.30),
            (3, 0.30),
            (4, 0.08),
            (5, 0.02),
        ])
        .unwrap();
        let reference = DiscreteDistribution::offspring_default();
        for (a, b) in d.entries().iter().zip(reference.entries()) {
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_tables() {
        use DistributionError::*;
        assert_eq!(DiscreteDistribution::from_cumulative(vec![]), Err(Empty));
        assert_eq!(
            DiscreteDistribution::from_cumulative(vec![(0, 0.5), (1, 0.4)]),
            Err(NotIncreasing { index: 1 })
        );
        assert_eq!(
            DiscreteDistribution::from_cumulative(vec![(0, 0.5), (0, 1.0)]),
            Err(DuplicateValue(0))
        );
        assert!(matches!(
            DiscreteDistribution::from_cumulative(vec![(0, 0.5), (1, 0.9)]),
            Err(NotNormalized(_))
        ));
        assert!(matches!(
            DiscreteDistribution::from_cumulative(vec![(0, 0.0), (1, 1.0)]),
            Err(OutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn snaps_final_entry_to_one() {
        let d = DiscreteDistribution::from_cumulative(vec![(0, 0.5), (1, 1.0 - 1e-13)]).unwrap();
        assert_eq!(d.entries()[1].1, 1.0);
    }

    #[test]
    fn the_printed_create_step_table_is_not_a_valid_cumulative_law() {
        // Read literally as (value, cumulative percent) pairs the expression
        // 0,1,1,3,2,6,3,90,4,98,5,1 ends below its predecessor.
        let literal = vec![(0, 0.01), (1, 0.03), (2, 0.06), (3, 0.90), (4, 0.98), (5, 0.01)];
        assert!(DiscreteDistribution::from_cumulative(literal).is_err());
    }

    #[test]
    fn json_forms() {
        let d: Distribution = serde_json::from_str(r#"{"type": "discrete", "pairs": [[0, 0.5], [2, 1.0]]}"#).unwrap();
        assert_eq!(d.mean(), 1.0);
        let c: Distribution = serde_json::from_str(r#"{"type": "constant", "value": 2.5}"#).unwrap();
        assert_eq!(c, Distribution::constant(2.5));
        let e: Distribution = serde_json::from_str(r#"{"type": "exponential", "mean": 3}"#).unwrap();
        assert_eq!(e, Distribution::exponential(3.0));
        let bad = serde_json::from_str::<Distribution>(r#"{"type": "discrete", "pairs": [[0, 0.5]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let mut a = substream(42, 0);
        let mut b = substream(42, 0);
        let mut c = substream(42, 1);
        let xs: Vec<f64> = (0..10_000).map(|_| a.uniform()).collect();
        let ys: Vec<f64> = (0..10_000).map(|_| b.uniform()).collect();
        let zs: Vec<f64> = (0..10_000).map(|_| c.uniform()).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().zip(&zs).all(|(x, z)| x != z));
    }

    #[test]
    fn ten_replications_have_distinct_seeds() {
        let seeds: std::collections::HashSet<u64> = (0..10).map(|r| substream(7, r).seed()).collect();
        assert_eq!(seeds.len(), 10);
        let again: std::collections::HashSet<u64> = (0..10).map(|r| substream(7, r).seed()).collect();
        assert_eq!(seeds, again);
    }

    #[test]
    fn derived_streams_do_not_consume_parent() {
        let parent = RngStream::new(99);
        let mut a = parent.derive("routing");
        let mut b = parent.derive("routing");
        let mut other = parent.derive("offspring");
        assert_eq!(a.uniform(), b.uniform());
        assert_ne!(a.uniform(), other.uniform());
    }

    #[test]
    fn exponential_mean_is_close() {
        let mut rng = RngStream::new(3);
        let d = Distribution::exponential(2.0);
        let n = 200_000;
        let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        // sd of the sample mean = 2 / sqrt(n)
        assert!((mean - 2.0).abs() < 3.0 * 2.0 / (n as f64).sqrt());
    }

    proptest! {
        #[test]
        fn sampling_is_monotone_in_u(u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
            let d = DiscreteDistribution::offspring_default();
            let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
            prop_assert!(sample_discrete(&d, lo) <= sample_discrete(&d, hi));
        }

        #[test]
        fn sampled_value_brackets_u(u in 0.0f64..1.0) {
            let d = DiscreteDistribution::offspring_default();
            let v = sample_discrete(&d, u);
            let pos = d.entries().iter().position(|&(x, _)| x == v).unwrap();
            let lower = if pos == 0 { 0.0 } else { d.entries()[pos - 1].1 };
            prop_assert!(lower <= u && u < d.entries()[pos].1);
        }
    }
}
