//! Ten seeded replications aggregated into the CSV report.
//!
//! ```text
//! cargo run --release --example replications_csv -- report.csv
//! ```

use devs_consanguinity::experiment::{export_csv, run_experiment, Statistic};
use devs_consanguinity::model::ModelConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "report.csv".into());
    let config = ModelConfig {
        replications: 10,
        ..ModelConfig::default()
    };
    let result = run_experiment(&config)?;
    export_csv(&result, &path)?;
    println!("{} rows written to {path}", result.rows.len());

    for r in result.rows.iter().filter(|r| r.data_source == "[Dynamic Object]" && r.statistic == Statistic::Mean) {
        println!("{:<36} mean {:>10.1}", r.object_name, r.value);
    }
    Ok(())
}
