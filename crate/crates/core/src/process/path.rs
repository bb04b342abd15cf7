use std::collections::VecDeque;

use crate::devs::{Atomic, Emission, Message};
use crate::time::SimTime;

use super::{BufferKind, Entity, ObjectKind, ObjectStats, ProcessError, IN, OUT};

/// Link with a fixed travel time.
///
/// Travel time is the same for every traveler, so exits always follow entry
/// order. With passing disallowed travelers leave one per event, in line;
/// otherwise everyone due at the same instant leaves in one bag.
pub struct Path {
    travel_time: SimTime,
    weight: f64,
    allow_passing: bool,
    travelers: VecDeque<(Entity, SimTime)>,
    stats: ObjectStats,
}

impl Path {
    pub fn new(name: impl Into<String>, travel_time: SimTime, weight: f64, allow_passing: bool) -> Result<Self, ProcessError> {
        if !(travel_time.is_valid() && travel_time.is_finite()) {
            return Err(ProcessError::InvalidParameter(format!("travel time {travel_time}")));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(ProcessError::InvalidParameter(format!("path weight {weight}")));
        }
        Ok(Path {
            travel_time,
            weight,
            allow_passing,
            travelers: VecDeque::new(),
            stats: ObjectStats::new(name, ObjectKind::Path),
        })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn allows_passing(&self) -> bool {
        self.allow_passing
    }

    pub fn stats(&self) -> ObjectStats {
        let mut s = self.stats.clone();
        s.held = self.travelers.iter().map(|(e, _)| e.weight()).sum();
        s
    }

    fn due(&self) -> usize {
        let Some((_, head)) = self.travelers.front() else { return 0 };
        if !self.allow_passing {
            return 1;
        }
        self.travelers.iter().take_while(|(_, r)| r <= head).count()
    }
}

impl Atomic<Entity> for Path {
    fn input_ports(&self) -> Vec<String> {
        vec![IN.into()]
    }

    fn output_ports(&self) -> Vec<String> {
        vec![OUT.into()]
    }

    fn delta_int(&mut self) {
        let sigma = self.ta();
        let n = self.due();
        for (entity, _) in self.travelers.drain(..n) {
            self.stats.exited += entity.weight();
            self.stats.buffer_mut(BufferKind::Travelers).exited += 1;
        }
        for (_, remaining) in &mut self.travelers {
            *remaining = *remaining - sigma;
        }
    }

    fn delta_ext(&mut self, elapsed: SimTime, inputs: &[Message<Entity>]) {
        for (_, remaining) in &mut self.travelers {
            *remaining = *remaining - elapsed;
        }
        for msg in inputs {
            self.stats.entered += msg.payload.weight();
            self.stats.processed += 1;
            self.stats.buffer_mut(BufferKind::Travelers).entered += 1;
            self.travelers.push_back((msg.payload.clone(), self.travel_time));
        }
    }

    fn lambda(&self) -> Vec<Emission<Entity>> {
        self.travelers
            .iter()
            .take(self.due())
            .map(|(e, _)| Emission::new(OUT, e.clone()))
            .collect()
    }

    fn ta(&self) -> SimTime {
        match self.travelers.front() {
            Some((_, r)) if r.value() > 0.0 => *r,
            Some(_) => SimTime::ZERO,
            None => SimTime::INFINITY,
        }
    }
}
