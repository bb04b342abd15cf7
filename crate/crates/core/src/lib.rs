//! A Classic DEVS simulation kernel, a library of process-oriented
//! simulation objects built on it, and a population model of consanguineous and
//! non-consanguineous marriages with congenital-disorder risk.
//!
//! Layers, bottom up:
//!
//! * [`devs`]: atomic/coupled models and the abstract simulator.
//! * [`stochastic`]: seeded streams and distributions.
//! * [`genetics`]: inbreeding coefficients and disorder probability.
//! * [`process`]: Source, Router, Combiner, Server, Sink, Path.
//! * [`model`]: configuration and the two population models.
//! * [`experiment`]: replications, aggregation, CSV report.
//! * [`cli`]: the `consim` command line.

pub mod cli;
pub mod devs;
pub mod experiment;
pub mod genetics;
pub mod model;
pub mod process;
pub mod stochastic;
pub mod time;

pub use time::SimTime;
