use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ObjectKind {
    Source,
    Router,
    Combiner,
    Server,
    Sink,
    Path,
}

/// Statistic sources reported per object, named after the buffers they watch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BufferKind {
    InputBuffer,
    OutputBuffer,
    ParentInputBuffer,
    MemberInputBuffer,
    Travelers,
}

impl BufferKind {
    pub fn label(self) -> &'static str {
        match self {
            BufferKind::InputBuffer => "[InputBuffer]",
            BufferKind::OutputBuffer => "[OutputBuffer]",
            BufferKind::ParentInputBuffer => "[ParentInputBuffer]",
            BufferKind::MemberInputBuffer => "[MemberInputBuffer]",
            BufferKind::Travelers => "[Travelers]",
        }
    }
}

impl fmt::Display for BufferKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Units (top-level entities, batched members not counted separately)
/// passing through one buffer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BufferStats {
    pub entered: u64,
    pub exited: u64,
}

impl BufferStats {
    pub fn held(&self) -> u64 {
        self.entered - self.exited
    }
}

/// Snapshot of one process object's counters.
///
/// `entered`, `created`, `exited`, `destroyed` and `held` count individuals
/// (a married couple counts two), so that
/// `entered + created == exited + destroyed + held` holds for every object.
/// `processed` counts completed operations (batches formed, services finished).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObjectStats {
    pub name: String,
    pub kind: ObjectKind,
    pub entered: u64,
    pub created: u64,
    pub processed: u64,
    pub exited: u64,
    pub destroyed: u64,
    pub held: u64,
    pub buffers: BTreeMap<BufferKind, BufferStats>,
    /// Individuals that received their class label at this object.
    pub labeled: BTreeMap<String, u64>,
    /// Individuals destroyed here, by class label.
    pub destroyed_by_label: BTreeMap<String, u64>,
    /// Destroyed individuals carrying `affected = true`, by class label.
    pub affected_by_label: BTreeMap<String, u64>,
}

impl ObjectStats {
    pub fn new(name: impl Into<String>, kind: ObjectKind) -> Self {
        ObjectStats {
            name: name.into(),
            kind,
            entered: 0,
            created: 0,
            processed: 0,
            exited: 0,
            destroyed: 0,
            held: 0,
            buffers: BTreeMap::new(),
            labeled: BTreeMap::new(),
            destroyed_by_label: BTreeMap::new(),
            affected_by_label: BTreeMap::new(),
        }
    }

    pub fn buffer(&self, kind: BufferKind) -> BufferStats {
        self.buffers.get(&kind).copied().unwrap_or_default()
    }

    pub(crate) fn buffer_mut(&mut self, kind: BufferKind) -> &mut BufferStats {
        self.buffers.entry(kind).or_default()
    }

    pub(crate) fn label(&mut self, class: &str) {
        *self.labeled.entry(class.to_string()).or_default() += 1;
    }

    pub fn is_conserved(&self) -> bool {
        self.entered + self.created == self.exited + self.destroyed + self.held
    }
}
