use std::collections::VecDeque;

use crate::devs::{Atomic, Emission, Message};
use crate::genetics::{assign_disorder_with, AlleleFrequency, InbreedingCoefficient};
use crate::stochastic::{sample_discrete, DiscreteDistribution, Distribution, RngStream};
use crate::time::SimTime;

use super::{BufferKind, Entity, IdAllocator, ObjectKind, ObjectStats, ProcessError, Scalar, CREATED, IN, OUT};

/// Logic run when a server finishes processing an entity. Entities returned
/// here are placed in the output buffer right behind the processed one.
pub trait ProcessedTrigger: Send {
    fn on_processed(&mut self, processed: &Entity, now: SimTime, ids: &IdAllocator) -> Vec<Entity>;
}

/// Disease-status draw applied to every created child.
pub struct DisorderDraw {
    pub inbreeding: InbreedingCoefficient,
    pub allele_frequency: AlleleFrequency,
    pub rng: RngStream,
}

/// Creates a random number of offspring for each processed couple.
pub struct OffspringTrigger {
    child_label: String,
    count: DiscreteDistribution,
    rng: RngStream,
    disorder: Option<DisorderDraw>,
}

impl OffspringTrigger {
    pub fn new(child_label: impl Into<String>, count: DiscreteDistribution, rng: RngStream) -> Result<Self, ProcessError> {
        if count.entries().iter().any(|&(v, _)| v < 0) {
            return Err(ProcessError::InvalidParameter("offspring counts must be non-negative".into()));
        }
        Ok(OffspringTrigger {
            child_label: child_label.into(),
            count,
            rng,
            disorder: None,
        })
    }

    pub fn with_disorder(mut self, draw: DisorderDraw) -> Self {
        self.disorder = Some(draw);
        self
    }
}

impl ProcessedTrigger for OffspringTrigger {
    fn on_processed(&mut self, processed: &Entity, now: SimTime, ids: &IdAllocator) -> Vec<Entity> {
        let n = sample_discrete(&self.count, self.rng.uniform());
        (0..n)
            .map(|_| {
                let mut child = Entity::new(ids.next_id(), self.child_label.clone(), now);
                child.attributes.insert("parent_id".into(), Scalar::Int(processed.id as i64));
                match &mut self.disorder {
                    Some(d) => assign_disorder_with(child, d.inbreeding, d.allele_frequency, &mut d.rng),
                    None => child,
                }
            })
            .collect()
    }
}

/// Capacitated FIFO process.
///
/// Completed entities go to the output buffer and leave on `out`; anything the
/// trigger creates follows its parent in the same output bag on `created`.
/// Couple `created` to the same destination as `out` to keep children in line
/// behind their parents.
pub struct Server {
    capacity: usize,
    service_time: Distribution,
    rng: RngStream,
    trigger: Option<Box<dyn ProcessedTrigger>>,
    ids: IdAllocator,
    now: SimTime,
    input: VecDeque<Entity>,
    in_service: Vec<(Entity, SimTime)>,
    output: Vec<(Entity, bool)>,
    stats: ObjectStats,
}

impl Server {
    pub fn new(
        name: impl Into<String>,
        capacity: usize,
        service_time: Distribution,
        rng: RngStream,
        ids: IdAllocator,
    ) -> Result<Self, ProcessError> {
        if capacity == 0 {
            return Err(ProcessError::InvalidParameter("server capacity must be at least 1".into()));
        }
        service_time
            .check()
            .map_err(|e| ProcessError::InvalidParameter(format!("service time: {e}")))?;
        Ok(Server {
            capacity,
            service_time,
            rng,
            trigger: None,
            ids,
            now: SimTime::ZERO,
            input: VecDeque::new(),
            in_service: Vec::new(),
            output: Vec::new(),
            stats: ObjectStats::new(name, ObjectKind::Server),
        })
    }

    pub fn with_trigger(mut self, trigger: impl ProcessedTrigger + 'static) -> Self {
        self.trigger = Some(Box::new(trigger));
        self
    }

    pub fn queue_len(&self) -> usize {
        self.input.len()
    }

    pub fn in_service(&self) -> usize {
        self.in_service.len()
    }

    pub fn stats(&self) -> ObjectStats {
        let mut s = self.stats.clone();
        s.held = self
            .input
            .iter()
            .chain(self.in_service.iter().map(|(e, _)| e))
            .chain(self.output.iter().map(|(e, _)| e))
            .map(Entity::weight)
            .sum();
        s
    }

    fn start_services(&mut self) {
        while self.in_service.len() < self.capacity {
            let Some(entity) = self.input.pop_front() else { break };
            self.stats.buffer_mut(BufferKind::InputBuffer).exited += 1;
            let duration = SimTime::new(self.service_time.sample(&mut self.rng));
            self.in_service.push((entity, duration));
        }
    }

    fn advance(&mut self, dt: SimTime) {
        self.now = self.now + dt;
        for (_, remaining) in &mut self.in_service {
            *remaining = *remaining - dt;
        }
    }
}

impl Atomic<Entity> for Server {
    fn input_ports(&self) -> Vec<String> {
        vec![IN.into()]
    }

    fn output_ports(&self) -> Vec<String> {
        vec![OUT.into(), CREATED.into()]
    }

    fn delta_int(&mut self) {
        if !self.output.is_empty() {
            for (entity, created) in self.output.drain(..) {
                self.stats.exited += entity.weight();
                if !created {
                    self.stats.buffer_mut(BufferKind::OutputBuffer).exited += 1;
                }
            }
            return;
        }

        let sigma = self.ta();
        self.advance(sigma);
        let (done, busy): (Vec<_>, Vec<_>) = std::mem::take(&mut self.in_service)
            .into_iter()
            .partition(|(_, remaining)| remaining.value() <= 0.0);
        self.in_service = busy;
        for (entity, _) in done {
            self.stats.processed += 1;
            self.stats.buffer_mut(BufferKind::OutputBuffer).entered += 1;
            let children = match &mut self.trigger {
                Some(trigger) => trigger.on_processed(&entity, self.now, &self.ids),
                None => Vec::new(),
            };
            self.output.push((entity, false));
            for child in children {
                self.stats.created += child.weight();
                self.stats.label(&child.class_label);
                self.output.push((child, true));
            }
        }
        self.start_services();
    }

    fn delta_ext(&mut self, elapsed: SimTime, inputs: &[Message<Entity>]) {
        self.advance(elapsed);
        for msg in inputs {
            self.stats.entered += msg.payload.weight();
            self.stats.buffer_mut(BufferKind::InputBuffer).entered += 1;
            self.input.push_back(msg.payload.clone());
        }
        self.start_services();
    }

    fn lambda(&self) -> Vec<Emission<Entity>> {
        self.output
            .iter()
            .map(|(e, created)| Emission::new(if *created { CREATED } else { OUT }, e.clone()))
            .collect()
    }

    fn ta(&self) -> SimTime {
        if !self.output.is_empty() {
            return SimTime::ZERO;
        }
        self.in_service
            .iter()
            .map(|(_, remaining)| if remaining.value() < 0.0 { SimTime::ZERO } else { *remaining })
            .min()
            .unwrap_or(SimTime::INFINITY)
    }
}
