//! Process-oriented simulation objects, each an atomic DEVS model over [`Entity`]
//! payloads.
//!
//! | object     | inputs             | outputs                 |
//! |------------|--------------------|-------------------------|
//! | `Source`   | –                  | `out`                   |
//! | `Router`   | `in`               | one port per branch     |
//! | `Combiner` | `parent`, `member` | `out`                   |
//! | `Server`   | `in`               | `out`, `created`        |
//! | `Sink`     | `in`               | –                       |
//! | `Path`     | `in`               | `out`                   |

mod combiner;
mod entity;
mod path;
mod router;
mod server;
mod sink;
mod source;
mod stats;

pub use combiner::Combiner;
pub use entity::{Entity, IdAllocator, Scalar};
pub use path::Path;
pub use router::{route_select, Branch, Router};
pub use server::{DisorderDraw, OffspringTrigger, ProcessedTrigger, Server};
pub use sink::Sink;
pub use source::Source;
pub use stats::{BufferKind, BufferStats, ObjectKind, ObjectStats};

use std::any::Any;

use thiserror::Error;

use crate::devs::Atomic;

pub const IN: &str = "in";
pub const OUT: &str = "out";
pub const CREATED: &str = "created";
pub const PARENT: &str = "parent";
pub const MEMBER: &str = "member";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProcessError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no outgoing routes to choose from")]
    NoRoutes,
}

/// Statistics of any process object, or `None` for foreign atomic models.
pub fn object_stats(model: &dyn Atomic<Entity>) -> Option<ObjectStats> {
    let any: &dyn Any = model;
    if let Some(x) = any.downcast_ref::<Source>() {
        Some(x.stats())
    } else if let Some(x) = any.downcast_ref::<Router>() {
        Some(x.stats())
    } else if let Some(x) = any.downcast_ref::<Combiner>() {
        Some(x.stats())
    } else if let Some(x) = any.downcast_ref::<Server>() {
        Some(x.stats())
    } else if let Some(x) = any.downcast_ref::<Sink>() {
        Some(x.stats())
    } else {
        any.downcast_ref::<Path>().map(Path::stats)
    }
}
