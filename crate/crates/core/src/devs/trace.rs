use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use crate::time::SimTime;

use super::model::Message;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Internal,
    External,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Internal => "internal",
            Phase::External => "external",
        })
    }
}

/// One transition. Internal entries carry the messages the component emitted;
/// external entries carry the messages it received.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry<V> {
    pub time: SimTime,
    pub component: Arc<str>,
    pub phase: Phase,
    pub messages: Vec<Message<V>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventTrace<V> {
    pub entries: Vec<TraceEntry<V>>,
}

impl<V> Default for EventTrace<V> {
    fn default() -> Self {
        EventTrace { entries: Vec::new() }
    }
}

impl<V> EventTrace<V> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TraceEntry<V>> {
        self.entries.iter()
    }

    pub fn internal_events(&self) -> impl Iterator<Item = &TraceEntry<V>> {
        self.entries.iter().filter(|e| e.phase == Phase::Internal)
    }
}

impl<V: fmt::Display> EventTrace<V> {
    /// Tab-separated dump, one line per event:
    /// `time<TAB>component<TAB>phase<TAB>ports<TAB>payloads`.
    /// Multiple messages are joined with `;`, an event without messages
    /// shows `-` in both columns.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.entries {
            let (ports, payloads) = if e.messages.is_empty() {
                ("-".to_string(), "-".to_string())
            } else {
                let ports: Vec<&str> = e.messages.iter().map(|m| &*m.port.name).collect();
                let payloads: Vec<String> = e.messages.iter().map(|m| m.payload.to_string()).collect();
                (ports.join(";"), payloads.join(";"))
            };
            writeln!(w, "{}\t{}\t{}\t{}\t{}", e.time, e.component, e.phase, ports, payloads)?;
        }
        Ok(())
    }
}

impl<'a, V> IntoIterator for &'a EventTrace<V> {
    type Item = &'a TraceEntry<V>;
    type IntoIter = std::slice::Iter<'a, TraceEntry<V>>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}
