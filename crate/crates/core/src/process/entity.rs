use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::time::SimTime;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
}

impl Scalar {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Scalar::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Scalar::Real(x) => Some(*x),
            Scalar::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

/// A dynamic individual (or a batched group led by a parent) flowing through
/// process objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Entity {
    pub id: u64,
    pub class_label: String,
    pub created_at: SimTime,
    pub attributes: BTreeMap<String, Scalar>,
    pub members: Vec<Entity>,
}

impl Entity {
    pub fn new(id: u64, class_label: impl Into<String>, created_at: SimTime) -> Self {
        Entity {
            id,
            class_label: class_label.into(),
            created_at,
            attributes: BTreeMap::new(),
            members: Vec::new(),
        }
    }

    /// Number of individuals carried: this entity plus all batched members.
    pub fn weight(&self) -> u64 {
        1 + self.members.iter().map(Entity::weight).sum::<u64>()
    }

    /// Visits this entity and every batched member, depth first.
    pub fn for_each_individual(&self, f: &mut impl FnMut(&Entity)) {
        f(self);
        for m in &self.members {
            m.for_each_individual(f);
        }
    }

    pub fn is_affected(&self) -> bool {
        self.attributes
            .get(crate::genetics::AFFECTED)
            .and_then(Scalar::as_bool)
            .unwrap_or(false)
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.class_label, self.id)?;
        if !self.members.is_empty() {
            f.write_str("[")?;
            for (i, m) in self.members.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{m}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Hands out entity ids in creation order. Clones share the same counter, so
/// one allocator serves a whole replication.
#[derive(Clone, Debug, Default)]
pub struct IdAllocator(Arc<AtomicU64>);

impl IdAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_id(&self) -> u64 {
        self.0.fetch_add(1, Ordering::Relaxed)
    }

    /// Number of ids handed out so far.
    pub fn issued(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}
