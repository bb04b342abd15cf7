//! Seeded replications of a configured model and their aggregation into
//! report rows.

mod report;

pub use report::{
    export_csv, format_value, parse_csv, write_csv, Category, ReportRow, Statistic, DYNAMIC_OBJECT,
    PROCESSED,
};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::devs::{DevsError, EventTrace, Simulation};
use crate::model::{build_model, dynamic_object_name, validate_config, ModelConfig, ModelError, Violation};
use crate::process::{object_stats, BufferKind, Entity, ObjectKind, ObjectStats};
use crate::stochastic::substream;
use crate::time::SimTime;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidConfig(Vec<Violation>),
    #[error("replication {index}: {source}")]
    Model { index: u64, source: ModelError },
    #[error("replication {index}: {source}")]
    Kernel { index: u64, source: DevsError },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed report: {0}")]
    Parse(String),
}

/// Counters harvested from one object at the end of a replication.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObjectRecord {
    pub component: String,
    pub report_name: String,
    pub stats: ObjectStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationStats {
    pub index: u64,
    pub seed: u64,
    pub clock: f64,
    pub objects: Vec<ObjectRecord>,
}

impl ReplicationStats {
    pub fn object(&self, component: &str) -> Option<&ObjectStats> {
        self.objects.iter().find(|o| o.component == component).map(|o| &o.stats)
    }

    pub fn objects_of(&self, kind: ObjectKind) -> impl Iterator<Item = &ObjectRecord> {
        self.objects.iter().filter(move |o| o.stats.kind == kind)
    }

    /// `(created, destroyed, held)` summed over every object, in individuals.
    pub fn conservation(&self) -> (u64, u64, u64) {
        self.objects.iter().fold((0, 0, 0), |(c, d, h), o| {
            (c + o.stats.created, d + o.stats.destroyed, h + o.stats.held)
        })
    }

    /// Individuals that acquired `label` anywhere in the model.
    pub fn labeled(&self, label: &str) -> u64 {
        self.objects
            .iter()
            .map(|o| o.stats.labeled.get(label).copied().unwrap_or(0))
            .sum()
    }

    /// Destroyed individuals with `label`, and how many of them were affected.
    pub fn destroyed_and_affected(&self, label: &str) -> (u64, u64) {
        self.objects_of(ObjectKind::Sink).fold((0, 0), |(d, a), o| {
            (
                d + o.stats.destroyed_by_label.get(label).copied().unwrap_or(0),
                a + o.stats.affected_by_label.get(label).copied().unwrap_or(0),
            )
        })
    }

    /// Count rows for this replication, keyed by
    /// `(object_name, data_source, category)`.
    pub fn counts(&self) -> BTreeMap<(String, String, Category), u64> {
        let mut rows = BTreeMap::new();
        let mut labeled: BTreeMap<&str, u64> = BTreeMap::new();
        let mut affected: BTreeMap<&str, u64> = BTreeMap::new();
        for o in &self.objects {
            for (label, n) in &o.stats.labeled {
                *labeled.entry(label).or_default() += n;
            }
            for (label, n) in &o.stats.affected_by_label {
                *affected.entry(label).or_default() += n;
            }
        }
        for (label, n) in &labeled {
            rows.insert(
                (dynamic_object_name(label), DYNAMIC_OBJECT.to_string(), Category::Throughput),
                *n,
            );
            if label.starts_with("Child") {
                rows.insert(
                    (
                        format!("{}_affected", dynamic_object_name(label)),
                        DYNAMIC_OBJECT.to_string(),
                        Category::Throughput,
                    ),
                    affected.get(label).copied().unwrap_or(0),
                );
            }
        }

        for o in &self.objects {
            let s = &o.stats;
            let name = &o.report_name;
            let mut buffer = |kind: BufferKind, content: bool| {
                let b = s.buffer(kind);
                rows.insert((name.clone(), kind.label().to_string(), Category::Throughput), b.entered);
                if content {
                    rows.insert((name.clone(), kind.label().to_string(), Category::Content), b.held());
                }
            };
            match s.kind {
                ObjectKind::Combiner => {
                    buffer(BufferKind::ParentInputBuffer, true);
                    buffer(BufferKind::MemberInputBuffer, true);
                    buffer(BufferKind::OutputBuffer, true);
                }
                ObjectKind::Server => {
                    buffer(BufferKind::InputBuffer, true);
                    buffer(BufferKind::OutputBuffer, true);
                }
                ObjectKind::Sink => buffer(BufferKind::InputBuffer, false),
                ObjectKind::Path => buffer(BufferKind::Travelers, true),
                ObjectKind::Source | ObjectKind::Router => {}
            }
            if matches!(s.kind, ObjectKind::Combiner | ObjectKind::Server) {
                rows.insert((name.clone(), PROCESSED.to_string(), Category::Throughput), s.processed);
            }
        }
        rows
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultMetadata {
    pub config: ModelConfig,
    pub base_seed: u64,
    pub timestamp: u64,
    pub code_version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub replications: Vec<ReplicationStats>,
    pub rows: Vec<ReportRow>,
    pub metadata: ResultMetadata,
}

impl ExperimentResult {
    pub fn row(&self, object: &str, source: &str, category: Category, statistic: Statistic) -> Option<&ReportRow> {
        self.rows.iter().find(|r| {
            r.object_name == object && r.data_source == source && r.category == category && r.statistic == statistic
        })
    }

    pub fn total(&self, object: &str, source: &str) -> Option<f64> {
        self.row(object, source, Category::Throughput, Statistic::Total).map(|r| r.value)
    }
}

/// Runs one replication to `config.run_length`. With `tracing` the full
/// event trace is returned as well.
pub fn run_replication(
    config: &ModelConfig,
    index: u64,
    tracing: bool,
) -> Result<(ReplicationStats, Option<EventTrace<Entity>>), ExperimentError> {
    let stream = substream(config.base_seed, index);
    let built = build_model(config, &stream).map_err(|source| ExperimentError::Model { index, source })?;
    let roster = built.roster.clone();
    let mut sim = Simulation::initialize(built.coupled, SimTime::ZERO)
        .map_err(|source| ExperimentError::Kernel { index, source })?;
    sim.set_tracing(tracing);
    let trace = sim
        .run_until(SimTime::new(config.run_length))
        .map_err(|source| ExperimentError::Kernel { index, source })?;

    let objects = sim
        .nodes()
        .filter_map(|node| {
            let stats = object_stats(node.model)?;
            let report_name = roster
                .iter()
                .find(|r| r.component == node.path)
                .map(|r| r.report_name.clone())
                .unwrap_or_else(|| node.path.to_string());
            Some(ObjectRecord {
                component: node.path.to_string(),
                report_name,
                stats,
            })
        })
        .collect();
    let stats = ReplicationStats {
        index,
        seed: stream.seed(),
        clock: sim.clock().value(),
        objects,
    };
    Ok((stats, tracing.then_some(trace)))
}

/// Runs every replication (concurrently; results are ordered by index) and
/// aggregates them.
pub fn run_experiment(config: &ModelConfig) -> Result<ExperimentResult, ExperimentError> {
    let violations = validate_config(config);
    if !violations.is_empty() {
        return Err(ExperimentError::InvalidConfig(violations));
    }
    let replications = (0..config.replications)
        .into_par_iter()
        .map(|r| run_replication(config, r, false).map(|(stats, _)| stats))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = aggregate(&replications);
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(ExperimentResult {
        replications,
        rows,
        metadata: ResultMetadata {
            config: config.clone(),
            base_seed: config.base_seed,
            timestamp,
            code_version: env!("CARGO_PKG_VERSION"),
        },
    })
}

/// Total, Mean, Min and Max across replications for every count row. A row
/// missing from a replication counts as zero there. Output is sorted.
pub fn aggregate(replications: &[ReplicationStats]) -> Vec<ReportRow> {
    let per_rep: Vec<_> = replications.iter().map(ReplicationStats::counts).collect();
    let mut keys: Vec<&(String, String, Category)> = per_rep.iter().flat_map(|m| m.keys()).collect();
    keys.sort();
    keys.dedup();

    let n = replications.len() as f64;
    let mut rows = Vec::with_capacity(keys.len() * 4);
    for key in keys {
        let values: Vec<u64> = per_rep.iter().map(|m| m.get(key).copied().unwrap_or(0)).collect();
        let total: u64 = values.iter().sum();
        let min = values.iter().copied().min().unwrap_or(0);
        let max = values.iter().copied().max().unwrap_or(0);
        let (object, source, category) = key;
        for (statistic, value) in [
            (Statistic::Total, total as f64),
            (Statistic::Mean, if n > 0.0 { total as f64 / n } else { 0.0 }),
            (Statistic::Min, min as f64),
            (Statistic::Max, max as f64),
        ] {
            rows.push(ReportRow {
                object_name: object.clone(),
                data_source: source.clone(),
                category: *category,
                statistic,
                value,
            });
        }
    }
    report::sort_rows(&mut rows);
    rows
}
