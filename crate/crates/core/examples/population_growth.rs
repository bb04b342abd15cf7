//! The marriage and growth submodel: two sources, a combiner, a growth
//! server and a sink.

use devs_consanguinity::experiment::run_replication;
use devs_consanguinity::model::{ModelConfig, ModelKind, Sources, SourceConfig};
use devs_consanguinity::process::BufferKind;
use devs_consanguinity::stochastic::{DiscreteDistribution, Distribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Deterministic: one man and one woman per year, two children per couple.
    let config = ModelConfig {
        model: ModelKind::PopulationGrowth,
        sources: Sources {
            male: SourceConfig::new(Distribution::constant(1.0), None),
            female: SourceConfig::new(Distribution::constant(1.0), None),
            ..Sources::default()
        },
        offspring_distribution: DiscreteDistribution::from_cumulative(vec![(2, 1.0)])?,
        run_length: 10.0,
        ..ModelConfig::default()
    };
    let (stats, _) = run_replication(&config, 0, false)?;
    let sink = stats.object("NewPopulation").unwrap();
    println!("fixed run, 10 years:");
    println!("  marriages  {}", stats.object("PopulationGrowth").unwrap().processed);
    println!("  children   {}", stats.labeled("Child"));
    println!("  sink input {}", sink.buffer(BufferKind::InputBuffer).entered);
    println!("  destroyed  {}", sink.destroyed);

    let random = ModelConfig {
        model: ModelKind::PopulationGrowth,
        run_length: 1000.0,
        ..ModelConfig::default()
    };
    let (stats, _) = run_replication(&random, 0, false)?;
    let marriages = stats.object("PopulationGrowth").unwrap().processed;
    let children = stats.labeled("Child");
    println!("\nexponential arrivals, 1000 years:");
    println!("  marriages {marriages}, children {children}, {:.3} per marriage", children as f64 / marriages as f64);
    Ok(())
}
