use crate::devs::{Atomic, Emission, Message};
use crate::stochastic::{Distribution, RngStream};
use crate::time::SimTime;

use super::{Entity, IdAllocator, ObjectKind, ObjectStats, ProcessError, OUT};

/// Generates entities of one class label. The first entity appears after
/// the first interarrival sample.
pub struct Source {
    label: String,
    interarrival: Distribution,
    remaining: Option<u64>,
    rng: RngStream,
    ids: IdAllocator,
    now: SimTime,
    sigma: SimTime,
    stats: ObjectStats,
}

impl Source {
    /// `max_arrivals = None` means unbounded.
    pub fn new(
        name: impl Into<String>,
        label: impl Into<String>,
        interarrival: Distribution,
        max_arrivals: Option<u64>,
        rng: RngStream,
        ids: IdAllocator,
    ) -> Result<Self, ProcessError> {
        interarrival
            .check()
            .map_err(|e| ProcessError::InvalidParameter(format!("interarrival: {e}")))?;
        let mut source = Source {
            label: label.into(),
            interarrival,
            remaining: max_arrivals,
            rng,
            ids,
            now: SimTime::ZERO,
            sigma: SimTime::INFINITY,
            stats: ObjectStats::new(name, ObjectKind::Source),
        };
        source.schedule_next();
        Ok(source)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn stats(&self) -> ObjectStats {
        self.stats.clone()
    }

    fn schedule_next(&mut self) {
        self.sigma = match self.remaining {
            Some(0) => SimTime::INFINITY,
            _ => SimTime::new(self.interarrival.sample(&mut self.rng)),
        };
    }
}

impl Atomic<Entity> for Source {
    fn input_ports(&self) -> Vec<String> {
        Vec::new()
    }

    fn output_ports(&self) -> Vec<String> {
        vec![OUT.into()]
    }

    fn delta_int(&mut self) {
        self.now = self.now + self.sigma;
        self.stats.created += 1;
        self.stats.exited += 1;
        self.stats.label(&self.label);
        if let Some(n) = self.remaining.as_mut() {
            *n -= 1;
        }
        self.schedule_next();
    }

    fn delta_ext(&mut self, elapsed: SimTime, _inputs: &[Message<Entity>]) {
        self.now = self.now + elapsed;
        self.sigma = self.sigma - elapsed;
    }

    fn lambda(&self) -> Vec<Emission<Entity>> {
        let entity = Entity::new(self.ids.next_id(), self.label.clone(), self.now + self.sigma);
        vec![Emission::new(OUT, entity)]
    }

    fn ta(&self) -> SimTime {
        self.sigma
    }
}
