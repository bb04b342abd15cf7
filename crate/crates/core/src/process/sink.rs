use crate::devs::{Atomic, Emission, Message};
use crate::time::SimTime;

use super::{BufferKind, Entity, ObjectKind, ObjectStats, IN};

/// Destroys everything it receives, counting individuals by class label.
pub struct Sink {
    stats: ObjectStats,
}

impl Sink {
    pub fn new(name: impl Into<String>) -> Self {
        Sink {
            stats: ObjectStats::new(name, ObjectKind::Sink),
        }
    }

    pub fn name(&self) -> &str {
        &self.stats.name
    }

    pub fn stats(&self) -> ObjectStats {
        self.stats.clone()
    }
}

impl Atomic<Entity> for Sink {
    fn input_ports(&self) -> Vec<String> {
        vec![IN.into()]
    }

    fn output_ports(&self) -> Vec<String> {
        Vec::new()
    }

    fn delta_int(&mut self) {}

    fn delta_ext(&mut self, _elapsed: SimTime, inputs: &[Message<Entity>]) {
        for msg in inputs {
            let input = self.stats.buffer_mut(BufferKind::InputBuffer);
            input.entered += 1;
            input.exited += 1;
            let stats = &mut self.stats;
            msg.payload.for_each_individual(&mut |e| {
                stats.entered += 1;
                stats.destroyed += 1;
                *stats.destroyed_by_label.entry(e.class_label.clone()).or_default() += 1;
                if e.is_affected() {
                    *stats.affected_by_label.entry(e.class_label.clone()).or_default() += 1;
                }
            });
        }
    }

    fn lambda(&self) -> Vec<Emission<Entity>> {
        Vec::new()
    }

    fn ta(&self) -> SimTime {
        SimTime::INFINITY
    }
}
