//! Inbreeding coefficients for cousin marriages and the per-birth risk of an
//! autosomal recessive disorder.
//!
//! The risk model is single-locus: a child is affected when homozygous for
//! the deleterious allele (frequency `q`). With probability `F` the child's
//! two alleles are identical by descent, giving
//! `P(affected) = q² + F·q·(1 − q)`. Swap [`disorder_probability`] to plug in
//! a different risk law.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::process::{Entity, Scalar};
use crate::stochastic::RngStream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneticsError {
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("unknown consanguinity degree {0:?}")]
    UnknownDegree(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsanguinityDegree {
    Unrelated,
    ThirdCousin,
    SecondCousin,
    FirstCousinOnceRemoved,
    FirstCousin,
}

impl ConsanguinityDegree {
    pub const ALL: [ConsanguinityDegree; 5] = [
        ConsanguinityDegree::Unrelated,
        ConsanguinityDegree::ThirdCousin,
        ConsanguinityDegree::SecondCousin,
        ConsanguinityDegree::FirstCousinOnceRemoved,
        ConsanguinityDegree::FirstCousin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConsanguinityDegree::Unrelated => "unrelated",
            ConsanguinityDegree::ThirdCousin => "third_cousin",
            ConsanguinityDegree::SecondCousin => "second_cousin",
            ConsanguinityDegree::FirstCousinOnceRemoved => "first_cousin_once_removed",
            ConsanguinityDegree::FirstCousin => "first_cousin",
        }
    }
}

impl fmt::Display for ConsanguinityDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConsanguinityDegree {
    type Err = GeneticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| GeneticsError::UnknownDegree(s.to_string()))
    }
}

/// Probability that a child's two alleles at a locus are identical by descent.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct InbreedingCoefficient(f64);

impl InbreedingCoefficient {
    pub fn new(f: f64) -> Result<Self, GeneticsError> {
        unit_interval("inbreeding coefficient", f).map(InbreedingCoefficient)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for InbreedingCoefficient {
    type Error = GeneticsError;
    fn try_from(f: f64) -> Result<Self, Self::Error> {
        Self::new(f)
    }
}

impl From<InbreedingCoefficient> for f64 {
    fn from(f: InbreedingCoefficient) -> f64 {
        f.0
    }
}

/// Population frequency of the recessive deleterious allele.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlleleFrequency(f64);

impl AlleleFrequency {
    pub fn new(q: f64) -> Result<Self, GeneticsError> {
        unit_interval("allele frequency", q).map(AlleleFrequency)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for AlleleFrequency {
    type Error = GeneticsError;
    fn try_from(q: f64) -> Result<Self, Self::Error> {
        Self::new(q)
    }
}

impl From<AlleleFrequency> for f64 {
    fn from(q: AlleleFrequency) -> f64 {
        q.0
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<f64, GeneticsError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(GeneticsError::OutOfRange { name, value })
    }
}

/// Standard kinship values for offspring of the given parental relationship.
pub fn inbreeding_coefficient(degree: ConsanguinityDegree) -> InbreedingCoefficient {
    let f = match degree {
        ConsanguinityDegree::Unrelated => 0.0,
        ConsanguinityDegree::FirstCousin => 1.0 / 16.0,
        ConsanguinityDegree::FirstCousinOnceRemoved => 1.0 / 32.0,
        ConsanguinityDegree::SecondCousin => 1.0 / 64.0,
        ConsanguinityDegree::ThirdCousin => 1.0 / 256.0,
    };
    InbreedingCoefficient(f)
}

/// Homozygote frequency under inbreeding, `q² + f·q·(1−q)`, evaluated as
/// `(1−f)·q² + f·q` so the limits `f = 0` and `f = 1` come out exact.
pub fn disorder_probability(q: AlleleFrequency, f: InbreedingCoefficient) -> f64 {
    let (q, f) = (q.value(), f.value());
    (1.0 - f) * q * q + f * q
}

pub const AFFECTED: &str = "affected";
pub const INBREEDING_F: &str = "inbreeding_f";

/// Draws the child's disease status for parents related by `degree`.
pub fn assign_disorder(child: Entity, degree: ConsanguinityDegree, q: AlleleFrequency, rng: &mut RngStream) -> Entity {
    assign_disorder_with(child, inbreeding_coefficient(degree), q, rng)
}

/// Same as [`assign_disorder`] with an explicit coefficient. Records
/// `affected` and `inbreeding_f` on the entity and consumes exactly one
/// uniform from `rng`.
pub fn assign_disorder_with(mut child: Entity, f: InbreedingCoefficient, q: AlleleFrequency, rng: &mut RngStream) -> Entity {
    let p = disorder_probability(q, f);
    let affected = rng.uniform() < p;
    child.attributes.insert(AFFECTED.into(), Scalar::Bool(affected));
    child.attributes.insert(INBREEDING_F.into(), Scalar::Real(f.value()));
    child
}
