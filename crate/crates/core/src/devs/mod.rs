//! Classic DEVS: atomic and coupled models, plus the abstract simulator that
//! executes them.
//!
//! Models are built independently of the simulator. A [`Coupled`] model is
//! validated and flattened once by [`Simulation::initialize`]; afterwards the
//! simulator only sees a list of atomic components and a precomputed routing
//! table from output ports to input ports.

mod model;
mod simulator;
mod trace;

pub use model::{
    Atomic, Coupled, Coupling, Direction, Emission, Endpoint, Message, Model, Port, Translation,
};
pub use simulator::{NodeView, Simulation, MAX_ZERO_STEPS};
pub use trace::{EventTrace, Phase, TraceEntry};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DevsError {
    #[error("invalid model structure: {0}")]
    Structure(String),
    #[error("invalid coupling at {endpoint}: {reason}")]
    InvalidCoupling { endpoint: String, reason: String },
    #[error("contract violation in {component}: {detail}")]
    ContractViolation { component: String, detail: String },
    #[error("{component} emitted on undeclared output port {port:?}")]
    Routing { component: String, port: String },
    #[error("illegitimate model: {steps} consecutive steps at t = {time} without the clock advancing")]
    Illegitimate { time: f64, steps: u64 },
    #[error("no imminent component: every component is passive")]
    Passive,
    #[error("invalid start time {0}")]
    InvalidTime(f64),
    #[error("run horizon {t_end} lies before the current clock {clock}")]
    InvalidHorizon { clock: f64, t_end: f64 },
}
