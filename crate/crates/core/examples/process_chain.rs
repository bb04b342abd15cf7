//! Hand-wiring process objects without the model builder: a source, a
//! weighted split, two servers with different service times and a sink.

use devs_consanguinity::devs::{Coupled, Simulation};
use devs_consanguinity::process::{object_stats, Branch, IdAllocator, Path, Router, Server, Sink, Source, IN, OUT};
use devs_consanguinity::stochastic::{Distribution, RngStream};
use devs_consanguinity::SimTime;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ids = IdAllocator::new();
    let rng = RngStream::new(99);

    let mut m = Coupled::new();
    m.add_atomic(
        "Arrivals",
        Source::new("Arrivals", "Job", Distribution::exponential(1.0), None, rng.derive("arrivals"), ids.clone())?,
    )
    .add_atomic(
        "Split",
        Router::new("Split", vec![Branch::new("a", 3.0), Branch::new("b", 1.0)], rng.derive("split"))?,
    )
    .add_atomic("Quick", Server::new("Quick", 2, Distribution::exponential(1.5), rng.derive("quick"), ids.clone())?)
    .add_atomic("Slow", Server::new("Slow", 1, Distribution::exponential(3.0), rng.derive("slow"), ids.clone())?)
    .add_atomic("Walk", Path::new("Walk", SimTime::new(0.5), 1.0, false)?)
    .add_atomic("Exit", Sink::new("Exit"))
    .connect("Arrivals", OUT, "Split", IN)
    .connect("Split", "a", "Quick", IN)
    .connect("Split", "b", "Slow", IN)
    .connect("Quick", OUT, "Walk", IN)
    .connect("Slow", OUT, "Walk", IN)
    .connect("Walk", OUT, "Exit", IN);

    let mut sim = Simulation::initialize(m, SimTime::ZERO)?;
    sim.set_tracing(false);
    sim.run_until(SimTime::new(500.0))?;

    println!("{:<9}{:>8}{:>8}{:>10}{:>8}{:>10}{:>6}", "object", "entered", "created", "processed", "exited", "destroyed", "held");
    for node in sim.nodes() {
        let s = object_stats(node.model).unwrap();
        println!(
            "{:<9}{:>8}{:>8}{:>10}{:>8}{:>10}{:>6}",
            node.path, s.entered, s.created, s.processed, s.exited, s.destroyed, s.held
        );
    }
    Ok(())
}
