//! A generator feeding a counter, run on the bare DEVS kernel.
//!
//! ```text
//! cargo run --example kernel_pipeline
//! ```

use devs_consanguinity::devs::{Atomic, Coupled, Emission, Message, Simulation};
use devs_consanguinity::SimTime;

struct Generator {
    period: f64,
    fired: u32,
}

impl Atomic<u32> for Generator {
    fn input_ports(&self) -> Vec<String> {
        vec![]
    }

    fn output_ports(&self) -> Vec<String> {
        vec!["out".into()]
    }

    fn delta_int(&mut self) {
        self.fired += 1;
    }

    fn delta_ext(&mut self, _: SimTime, _: &[Message<u32>]) {}

    fn lambda(&self) -> Vec<Emission<u32>> {
        vec![Emission::new("out", self.fired + 1)]
    }

    fn ta(&self) -> SimTime {
        SimTime::new(self.period)
    }
}

#[derive(Default)]
struct Counter {
    total: u32,
}

impl Atomic<u32> for Counter {
    fn input_ports(&self) -> Vec<String> {
        vec!["in".into()]
    }

    fn output_ports(&self) -> Vec<String> {
        vec![]
    }

    fn delta_int(&mut self) {}

    fn delta_ext(&mut self, elapsed: SimTime, inputs: &[Message<u32>]) {
        for m in inputs {
            println!("  counter got {} after {elapsed}", m.payload);
            self.total += 1;
        }
    }

    fn lambda(&self) -> Vec<Emission<u32>> {
        vec![]
    }

    fn ta(&self) -> SimTime {
        SimTime::INFINITY
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut model = Coupled::new();
    model
        .add_atomic("fast", Generator { period: 2.0, fired: 0 })
        .add_atomic("slow", Generator { period: 3.0, fired: 0 })
        .add_atomic("counter", Counter::default())
        .connect("fast", "out", "counter", "in")
        .connect("slow", "out", "counter", "in");

    let mut sim = Simulation::initialize(model, SimTime::ZERO)?;
    let trace = sim.run_until(SimTime::new(7.0))?;

    println!("\ntrace:");
    trace.write_tsv(std::io::stdout().lock())?;
    // At t = 6 both generators are imminent; "fast" was added first so it fires first.
    println!("\ncounter total: {}", sim.component::<Counter>("counter").unwrap().total);
    println!("clock {}, next event at {}", sim.clock(), sim.next_time());
    Ok(())
}
