use crate::devs::{Atomic, Emission, Message};
use crate::stochastic::RngStream;
use crate::time::SimTime;

use super::{Entity, ObjectKind, ObjectStats, ProcessError, IN};

/// Picks index `i` with probability `weight_i / Σ weights` by scanning the
/// cumulative weights in list order against `u · Σ weights`.
pub fn route_select<T>(outgoing: &[(T, f64)], u: f64) -> Result<usize, ProcessError> {
    if outgoing.is_empty() {
        return Err(ProcessError::NoRoutes);
    }
    if let Some((i, (_, w))) = outgoing.iter().enumerate().find(|(_, (_, w))| !(*w > 0.0 && w.is_finite())) {
        return Err(ProcessError::InvalidParameter(format!("route {i} has weight {w}")));
    }
    let total: f64 = outgoing.iter().map(|(_, w)| w).sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, (_, w)) in outgoing.iter().enumerate() {
        acc += w;
        if target < acc {
            return Ok(i);
        }
    }
    Ok(outgoing.len() - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub port: String,
    pub weight: f64,
    /// New class label given to entities sent down this branch.
    pub relabel: Option<String>,
}

impl Branch {
    pub fn new(port: impl Into<String>, weight: f64) -> Self {
        Branch {
            port: port.into(),
            weight,
            relabel: None,
        }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.relabel = Some(label.into());
        self
    }
}

/// Zero-delay weighted splitter placed where a node fans out to several paths.
pub struct Router {
    branches: Vec<Branch>,
    weights: Vec<(usize, f64)>,
    rng: RngStream,
    pending: Vec<(usize, Entity)>,
    counts: Vec<u64>,
    stats: ObjectStats,
}

impl Router {
    pub fn new(name: impl Into<String>, branches: Vec<Branch>, rng: RngStream) -> Result<Self, ProcessError> {
        let weights: Vec<(usize, f64)> = branches.iter().map(|b| b.weight).enumerate().collect();
        // Validates weights and non-emptiness up front.
        route_select(&weights, 0.0)?;
        let n = branches.len();
        Ok(Router {
            branches,
            weights,
            rng,
            pending: Vec::new(),
            counts: vec![0; n],
            stats: ObjectStats::new(name, ObjectKind::Router),
        })
    }

    /// Entities sent down each branch so far, in branch order.
    pub fn branch_counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn branch_ports(&self) -> impl Iterator<Item = &str> {
        self.branches.iter().map(|b| b.port.as_str())
    }

    pub fn stats(&self) -> ObjectStats {
        let mut s = self.stats.clone();
        s.held = self.pending.iter().map(|(_, e)| e.weight()).sum();
        s
    }
}

impl Atomic<Entity> for Router {
    fn input_ports(&self) -> Vec<String> {
        vec![IN.into()]
    }

    fn output_ports(&self) -> Vec<String> {
        self.branches.iter().map(|b| b.port.clone()).collect()
    }

    fn delta_int(&mut self) {
        for (_, e) in self.pending.drain(..) {
            self.stats.exited += e.weight();
        }
    }

    fn delta_ext(&mut self, _elapsed: SimTime, inputs: &[Message<Entity>]) {
        for msg in inputs {
            let mut entity = msg.payload.clone();
            self.stats.entered += entity.weight();
            let u = self.rng.uniform();
            let i = route_select(&self.weights, u).expect("validated at construction");
            if let Some(label) = &self.branches[i].relabel {
                entity.class_label = label.clone();
                self.stats.label(label);
            }
            self.counts[i] += 1;
            self.stats.processed += 1;
            self.pending.push((i, entity));
        }
    }

    fn lambda(&self) -> Vec<Emission<Entity>> {
        self.pending
            .iter()
            .map(|(i, e)| Emission::new(self.branches[*i].port.clone(), e.clone()))
            .collect()
    }

    fn ta(&self) -> SimTime {
        if self.pending.is_empty() {
            SimTime::INFINITY
        } else {
            SimTime::ZERO
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_route_always_chosen() {
        let routes = [("only", 3.0)];
        for u in [0.0, 0.5, 0.999_999] {
            assert_eq!(route_select(&routes, u).unwrap(), 0);
        }
    }

    #[test]
    fn cumulative_scan_boundaries() {
        let routes = [("c", 35.7), ("nc", 65.9)];
        let p = 35.7 / 101.6;
        assert_eq!(route_select(&routes, p - 1e-9).unwrap(), 0);
        assert_eq!(route_select(&routes, p + 1e-9).unwrap(), 1);
    }

    #[test]
    fn empty_and_bad_weights_rejected() {
        let none: [(&str, f64); 0] = [];
        assert_eq!(route_select(&none, 0.3), Err(ProcessError::NoRoutes));
        assert!(route_select(&[("a", 0.0)], 0.3).is_err());
        assert!(route_select(&[("a", -1.0), ("b", 1.0)], 0.3).is_err());
    }
}
