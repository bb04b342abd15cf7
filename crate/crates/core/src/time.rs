use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// Simulation time in abstract units.
///
/// Backed by an `f64`; `SimTime::INFINITY` marks a passive state. Values are
/// compared exactly. Any `f64` can be wrapped via `From`, and the simulator
/// rejects negative or NaN values coming out of a model's time advance
/// (see [`SimTime::is_valid`]).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimTime(f64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0.0);
    pub const INFINITY: SimTime = SimTime(f64::INFINITY);

    pub const fn new(value: f64) -> Self {
        SimTime(value)
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Non-negative and not NaN. Infinity is valid.
    pub fn is_valid(self) -> bool {
        self.0 >= 0.0
    }
}

impl From<f64> for SimTime {
    fn from(value: f64) -> Self {
        SimTime(value)
    }
}

impl From<SimTime> for f64 {
    fn from(t: SimTime) -> Self {
        t.0
    }
}

impl Eq for SimTime {}

impl PartialOrd for SimTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for SimTime {
    type Output = SimTime;

    fn add(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 + rhs.0)
    }
}

impl Sub for SimTime {
    type Output = SimTime;

    /// `INFINITY - x` stays infinite; finite differences are plain subtraction.
    fn sub(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 - rhs.0)
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_orders_last() {
        assert!(SimTime::INFINITY > SimTime::new(1e300));
        assert!(SimTime::ZERO < SimTime::new(1.0));
        assert_eq!(SimTime::new(2.0) + SimTime::INFINITY, SimTime::INFINITY);
    }

    #[test]
    fn validity() {
        assert!(SimTime::INFINITY.is_valid());
        assert!(SimTime::ZERO.is_valid());
        assert!(!SimTime::new(-0.5).is_valid());
        assert!(!SimTime::new(f64::NAN).is_valid());
    }
}
