//! One replication of the full consanguinity model with default parameters.

use devs_consanguinity::experiment::run_replication;
use devs_consanguinity::model::ModelConfig;
use devs_consanguinity::process::{BufferKind, ObjectKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ModelConfig::default();
    let (stats, _) = run_replication(&config, 0, false)?;

    println!("seed {:#018x}, clock {}", stats.seed, stats.clock);
    for label in ["WP", "MP", "FP"] {
        println!("{label:>8}: {}", stats.labeled(label));
    }
    for label in ["Child_C", "Child_NC"] {
        let (n, affected) = stats.destroyed_and_affected(label);
        println!("{label:>8}: {n} born, {affected} affected ({:.2e})", affected as f64 / n as f64);
    }

    println!("\nmarriages:");
    for o in stats.objects_of(ObjectKind::Combiner) {
        let s = &o.stats;
        println!(
            "  {:<32} candidates {:>5}  spouses {:>5}  married {:>5}  waiting {:>5}",
            o.report_name,
            s.buffer(BufferKind::ParentInputBuffer).entered,
            s.buffer(BufferKind::MemberInputBuffer).entered,
            s.processed,
            s.buffer(BufferKind::ParentInputBuffer).held(),
        );
    }

    println!("\npaths:");
    for o in stats.objects_of(ObjectKind::Path) {
        println!("  {:<7} {}", o.report_name, o.stats.buffer(BufferKind::Travelers).entered);
    }

    let (created, destroyed, held) = stats.conservation();
    println!("\ncreated {created} = destroyed {destroyed} + held {held}");
    Ok(())
}
