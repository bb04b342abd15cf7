use std::collections::VecDeque;

use crate::devs::{Atomic, Emission, Message};
use crate::time::SimTime;

use super::{BufferKind, Entity, ObjectKind, ObjectStats, ProcessError, MEMBER, OUT, PARENT};

/// Attaches `batch_quantity` members to each parent, FIFO on both inputs.
/// Batches leave immediately once formed.
pub struct Combiner {
    batch_quantity: usize,
    parents: VecDeque<Entity>,
    members: VecDeque<Entity>,
    staged: Vec<Entity>,
    stats: ObjectStats,
}

impl Combiner {
    pub fn new(name: impl Into<String>, batch_quantity: usize) -> Result<Self, ProcessError> {
        if batch_quantity == 0 {
            return Err(ProcessError::InvalidParameter("batch quantity must be at least 1".into()));
        }
        Ok(Combiner {
            batch_quantity,
            parents: VecDeque::new(),
            members: VecDeque::new(),
            staged: Vec::new(),
            stats: ObjectStats::new(name, ObjectKind::Combiner),
        })
    }

    pub fn batch_quantity(&self) -> usize {
        self.batch_quantity
    }

    pub fn waiting_parents(&self) -> usize {
        self.parents.len()
    }

    pub fn waiting_members(&self) -> usize {
        self.members.len()
    }

    pub fn stats(&self) -> ObjectStats {
        let mut s = self.stats.clone();
        s.held = self
            .parents
            .iter()
            .chain(&self.members)
            .chain(&self.staged)
            .map(Entity::weight)
            .sum();
        s
    }

    fn form_batches(&mut self) {
        while !self.parents.is_empty() && self.members.len() >= self.batch_quantity {
            let mut parent = self.parents.pop_front().expect("checked");
            parent.members.extend(self.members.drain(..self.batch_quantity));
            self.stats.buffer_mut(BufferKind::ParentInputBuffer).exited += 1;
            self.stats.buffer_mut(BufferKind::MemberInputBuffer).exited += self.batch_quantity as u64;
            self.stats.buffer_mut(BufferKind::OutputBuffer).entered += 1;
            self.stats.processed += 1;
            self.staged.push(parent);
        }
    }
}

impl Atomic<Entity> for Combiner {
    fn input_ports(&self) -> Vec<String> {
        vec![PARENT.into(), MEMBER.into()]
    }

    fn output_ports(&self) -> Vec<String> {
        vec![OUT.into()]
    }

    fn delta_int(&mut self) {
        for batch in self.staged.drain(..) {
            self.stats.exited += batch.weight();
            self.stats.buffer_mut(BufferKind::OutputBuffer).exited += 1;
        }
    }

    fn delta_ext(&mut self, _elapsed: SimTime, inputs: &[Message<Entity>]) {
        for msg in inputs {
            let entity = msg.payload.clone();
            self.stats.entered += entity.weight();
            if &*msg.port.name == PARENT {
                self.stats.buffer_mut(BufferKind::ParentInputBuffer).entered += 1;
                self.parents.push_back(entity);
            } else {
                self.stats.buffer_mut(BufferKind::MemberInputBuffer).entered += 1;
                self.members.push_back(entity);
            }
        }
        self.form_batches();
    }

    fn lambda(&self) -> Vec<Emission<Entity>> {
        self.staged.iter().map(|e| Emission::new(OUT, e.clone())).collect()
    }

    fn ta(&self) -> SimTime {
        if self.staged.is_empty() {
            SimTime::INFINITY
        } else {
            SimTime::ZERO
        }
    }
}
