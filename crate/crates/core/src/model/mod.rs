//! The population growth submodel and the full consanguinity model, wired
//! from process objects.
//!
//! Consanguinity model layout (component ids; `PathN` are the fourteen paths):
//!
//! ```text
//! WP ─► SexSplit ─┬─► MaleSplit ───┬─ Path1 ─► Path5 ─► Marriage_C.parent
//!                 │                └─ Path2 ─► Path7 ─► Marriage_NC.parent
//!                 └─► FemaleSplit ─┬─ Path3 ─► Path6 ─► Marriage_C.member
//!                                  └─ Path4 ─► Path8 ─► Marriage_NC.member
//! Marriage_C  ─ Path9  ─► PopulationG_C  ─┬─ Path11 (couples)  ─► NewPopulation_C
//!                                         └─ Path13 (children) ─► NewPopulation_C
//! Marriage_NC ─ Path10 ─► PopulationG_NC ─┬─ Path12 (couples)  ─► NewPopulation_NC
//!                                         └─ Path14 (children) ─► NewPopulation_NC
//! ```
//!
//! The parent/member sides shown assume `combiner_parent = male`.

mod config;

pub use config::{
    validate_config, BranchWeights, Metadata, ModelConfig, ModelKind, RoutingWeights, Sex, SexSplit,
    SourceConfig, Sources, Violation, SEX_SPLIT_TOLERANCE,
};

use thiserror::Error;

use crate::devs::Coupled;
use crate::genetics::{inbreeding_coefficient, ConsanguinityDegree, InbreedingCoefficient};
use crate::process::{
    Branch, Combiner, DisorderDraw, Entity, IdAllocator, ObjectKind, OffspringTrigger, Path, ProcessError,
    Router, Server, Sink, Source, CREATED, IN, MEMBER, OUT, PARENT,
};
use crate::stochastic::RngStream;
use crate::time::SimTime;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid configuration: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Config(Vec<Violation>),
    #[error(transparent)]
    Process(#[from] ProcessError),
}

/// Maps a component id to the object name used in reports.
#[derive(Clone, Debug, PartialEq)]
pub struct RosterEntry {
    pub component: String,
    pub report_name: String,
    pub kind: ObjectKind,
}

pub struct BuiltModel {
    pub coupled: Coupled<Entity>,
    pub roster: Vec<RosterEntry>,
    pub ids: IdAllocator,
}

impl BuiltModel {
    pub fn report_name(&self, component: &str) -> Option<&str> {
        self.roster
            .iter()
            .find(|r| r.component == component)
            .map(|r| r.report_name.as_str())
    }

    pub fn count(&self, kind: ObjectKind) -> usize {
        self.roster.iter().filter(|r| r.kind == kind).count()
    }
}

/// Report names for class labels under `[Dynamic Object]`.
pub fn dynamic_object_name(label: &str) -> String {
    match label {
        "MP" => "Male population".into(),
        "FP" => "Female population".into(),
        "WP" => "Whole population".into(),
        "Child_C" => "Child_consanguineous".into(),
        "Child_NC" => "Child_non-consanguineous".into(),
        other => other.into(),
    }
}

struct Builder<'a> {
    coupled: Coupled<Entity>,
    roster: Vec<RosterEntry>,
    ids: IdAllocator,
    rng: &'a RngStream,
    travel_time: SimTime,
}

impl<'a> Builder<'a> {
    fn new(rng: &'a RngStream, config: &ModelConfig) -> Self {
        Builder {
            coupled: Coupled::new(),
            roster: Vec::new(),
            ids: IdAllocator::new(),
            rng,
            travel_time: SimTime::new(config.travel_time),
        }
    }

    fn stream(&self, name: &str) -> RngStream {
        self.rng.derive(name)
    }

    fn register(&mut self, component: &str, report_name: &str, kind: ObjectKind) {
        self.roster.push(RosterEntry {
            component: component.into(),
            report_name: report_name.into(),
            kind,
        });
    }

    fn source(&mut self, id: &str, label: &str, cfg: &SourceConfig) -> Result<(), ModelError> {
        let source = Source::new(
            id,
            label,
            cfg.interarrival.clone(),
            cfg.max_arrivals,
            self.stream(&format!("{id}.interarrival")),
            self.ids.clone(),
        )?;
        self.coupled.add_atomic(id, source);
        self.register(id, id, ObjectKind::Source);
        Ok(())
    }

    fn router(&mut self, id: &str, branches: Vec<Branch>) -> Result<(), ModelError> {
        let router = Router::new(id, branches, self.stream(id))?;
        self.coupled.add_atomic(id, router);
        self.register(id, id, ObjectKind::Router);
        Ok(())
    }

    fn path(&mut self, id: &str, weight: f64, allow_passing: bool) -> Result<(), ModelError> {
        let path = Path::new(id, self.travel_time, weight, allow_passing)?;
        self.coupled.add_atomic(id, path);
        self.register(id, id, ObjectKind::Path);
        Ok(())
    }

    fn combiner(&mut self, id: &str, report_name: &str) -> Result<(), ModelError> {
        self.coupled.add_atomic(id, Combiner::new(report_name, 1)?);
        self.register(id, report_name, ObjectKind::Combiner);
        Ok(())
    }

    fn growth_server(
        &mut self,
        id: &str,
        report_name: &str,
        child_label: &str,
        config: &ModelConfig,
        disorder: Option<InbreedingCoefficient>,
    ) -> Result<(), ModelError> {
        let mut trigger = OffspringTrigger::new(
            child_label,
            config.offspring_distribution.clone(),
            self.stream(&format!("{id}.offspring")),
        )?;
        if let (Some(f), Some(q)) = (disorder, config.allele()) {
            trigger = trigger.with_disorder(DisorderDraw {
                inbreeding: f,
                allele_frequency: q,
                rng: self.stream(&format!("{id}.disorder")),
            });
        }
        let server = Server::new(
            report_name,
            1,
            config.service_time.clone(),
            self.stream(&format!("{id}.service")),
            self.ids.clone(),
        )?
        .with_trigger(trigger);
        self.coupled.add_atomic(id, server);
        self.register(id, report_name, ObjectKind::Server);
        Ok(())
    }

    fn sink(&mut self, id: &str, report_name: &str) {
        self.coupled.add_atomic(id, Sink::new(report_name));
        self.register(id, report_name, ObjectKind::Sink);
    }

    fn finish(self) -> BuiltModel {
        BuiltModel {
            coupled: self.coupled,
            roster: self.roster,
            ids: self.ids,
        }
    }
}

fn check(config: &ModelConfig) -> Result<(), ModelError> {
    let violations = validate_config(config);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Config(violations))
    }
}

fn combiner_ports(parent: Sex) -> (&'static str, &'static str) {
    match parent {
        Sex::Male => (PARENT, MEMBER),
        Sex::Female => (MEMBER, PARENT),
    }
}

/// Two sources (MP, FP) married in one combiner, one growth server creating
/// `Child` entities, one sink. Children follow their parents on Path4.
pub fn build_population_growth_model(config: &ModelConfig, rng: &RngStream) -> Result<BuiltModel, ModelError> {
    check(config)?;
    let mut b = Builder::new(rng, config);
    let (male_port, female_port) = combiner_ports(config.combiner_parent);

    b.source("MP", "MP", &config.sources.male)?;
    b.source("FP", "FP", &config.sources.female)?;
    b.path("Path1", 1.0, true)?;
    b.path("Path2", 1.0, true)?;
    b.combiner("Marriage", "Marriage(s)")?;
    b.path("Path3", 1.0, true)?;
    b.growth_server("PopulationGrowth", "Population growth", "Child", config, None)?;
    b.path("Path4", 1.0, false)?;
    b.sink("NewPopulation", "New Population");

    b.coupled
        .connect("MP", OUT, "Path1", IN)
        .connect("FP", OUT, "Path2", IN)
        .connect("Path1", OUT, "Marriage", male_port)
        .connect("Path2", OUT, "Marriage", female_port)
        .connect("Marriage", OUT, "Path3", IN)
        .connect("Path3", OUT, "PopulationGrowth", IN)
        .connect("PopulationGrowth", OUT, "Path4", IN)
        .connect("PopulationGrowth", CREATED, "Path4", IN)
        .connect("Path4", OUT, "NewPopulation", IN);
    Ok(b.finish())
}

pub const CONSANGUINEOUS_MARRIAGE: &str = "Consanguineous marriage(s)";
pub const NON_CONSANGUINEOUS_MARRIAGE: &str = "Non-consanguineous marriage(s)";
pub const GROWTH_C: &str = "Population growth_Consanguineous marriage(s)";
pub const GROWTH_NC: &str = "Population growth_Non-consanguineous marriage(s)";
pub const NEW_POPULATION_C: &str = "NewPopulation_Consanguineous marriage(s)";
pub const NEW_POPULATION_NC: &str = "NewPopulation_Non-consanguineous marriage(s)";

/// The whole-population model: sex split, consanguineous/non-consanguineous
/// routing, two marriage combiners, two growth servers, two sinks and
/// fourteen paths.
pub fn build_consanguinity_model(config: &ModelConfig, rng: &RngStream) -> Result<BuiltModel, ModelError> {
    check(config)?;
    let mut b = Builder::new(rng, config);
    let (male_port, female_port) = combiner_ports(config.combiner_parent);
    let w = config.routing;

    b.source("WP", "WP", &config.sources.whole)?;
    b.router(
        "SexSplit",
        vec![
            Branch::new("male", config.sex_split.male.max(f64::MIN_POSITIVE)).relabel("MP"),
            Branch::new("female", config.sex_split.female.max(f64::MIN_POSITIVE)).relabel("FP"),
        ],
    )?;

    // First legs carry the routing weights; the routers read them back.
    let legs = [
        ("Path1", "MaleSplit", "c", w.male.consanguineous),
        ("Path2", "MaleSplit", "nc", w.male.non_consanguineous),
        ("Path3", "FemaleSplit", "c", w.female.consanguineous),
        ("Path4", "FemaleSplit", "nc", w.female.non_consanguineous),
    ];
    for (router, first, second) in [("MaleSplit", 0, 1), ("FemaleSplit", 2, 3)] {
        b.router(
            router,
            vec![Branch::new("c", legs[first].3), Branch::new("nc", legs[second].3)],
        )?;
    }
    for (path, _, _, weight) in legs {
        b.path(path, weight, true)?;
    }
    for id in ["Path5", "Path6", "Path7", "Path8"] {
        b.path(id, 1.0, true)?;
    }
    b.combiner("Marriage_C", CONSANGUINEOUS_MARRIAGE)?;
    b.combiner("Marriage_NC", NON_CONSANGUINEOUS_MARRIAGE)?;
    b.path("Path9", 1.0, true)?;
    b.path("Path10", 1.0, true)?;

    let f_c = config
        .consanguineous_inbreeding()
        .ok_or_else(|| ModelError::Config(validate_config(config)))?;
    b.growth_server("PopulationG_C", GROWTH_C, "Child_C", config, Some(f_c))?;
    b.growth_server(
        "PopulationG_NC",
        GROWTH_NC,
        "Child_NC",
        config,
        Some(inbreeding_coefficient(ConsanguinityDegree::Unrelated)),
    )?;
    for id in ["Path11", "Path12", "Path13", "Path14"] {
        b.path(id, 1.0, false)?;
    }
    b.sink("NewPopulation_C", NEW_POPULATION_C);
    b.sink("NewPopulation_NC", NEW_POPULATION_NC);

    b.coupled
        .connect("WP", OUT, "SexSplit", IN)
        .connect("SexSplit", "male", "MaleSplit", IN)
        .connect("SexSplit", "female", "FemaleSplit", IN)
        .connect("MaleSplit", "c", "Path1", IN)
        .connect("MaleSplit", "nc", "Path2", IN)
        .connect("FemaleSplit", "c", "Path3", IN)
        .connect("FemaleSplit", "nc", "Path4", IN)
        .connect("Path1", OUT, "Path5", IN)
        .connect("Path2", OUT, "Path7", IN)
        .connect("Path3", OUT, "Path6", IN)
        .connect("Path4", OUT, "Path8", IN)
        .connect("Path5", OUT, "Marriage_C", male_port)
        .connect("Path6", OUT, "Marriage_C", female_port)
        .connect("Path7", OUT, "Marriage_NC", male_port)
        .connect("Path8", OUT, "Marriage_NC", female_port)
        .connect("Marriage_C", OUT, "Path9", IN)
        .connect("Marriage_NC", OUT, "Path10", IN)
        .connect("Path9", OUT, "PopulationG_C", IN)
        .connect("Path10", OUT, "PopulationG_NC", IN)
        .connect("PopulationG_C", OUT, "Path11", IN)
        .connect("PopulationG_NC", OUT, "Path12", IN)
        .connect("PopulationG_C", CREATED, "Path13", IN)
        .connect("PopulationG_NC", CREATED, "Path14", IN)
        .connect("Path11", OUT, "NewPopulation_C", IN)
        .connect("Path13", OUT, "NewPopulation_C", IN)
        .connect("Path12", OUT, "NewPopulation_NC", IN)
        .connect("Path14", OUT, "NewPopulation_NC", IN);
    Ok(b.finish())
}

pub fn build_model(config: &ModelConfig, rng: &RngStream) -> Result<BuiltModel, ModelError> {
    match config.model {
        ModelKind::Consanguinity => build_consanguinity_model(config, rng),
        ModelKind::PopulationGrowth => build_population_growth_model(config, rng),
    }
}
