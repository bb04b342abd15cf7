#![allow(dead_code)]

pub mod oracles;

use devs_consanguinity::devs::{Atomic, Coupled, Emission, Message};
use devs_consanguinity::SimTime;

/// Fires every `period`, emitting its firing count on `out`.
pub struct Generator {
    pub period: f64,
    pub fired: u64,
}

impl Generator {
    pub fn new(period: f64) -> Self {
        Generator { period, fired: 0 }
    }
}

impl Atomic<u64> for Generator {
    fn input_ports(&self) -> Vec<String> {
        vec![]
    }

    fn output_ports(&self) -> Vec<String> {
        vec!["out".into()]
    }

    fn delta_int(&mut self) {
        self.fired += 1;
    }

    fn delta_ext(&mut self, _elapsed: SimTime, _inputs: &[Message<u64>]) {}

    fn lambda(&self) -> Vec<Emission<u64>> {
        vec![Emission::new("out", self.fired + 1)]
    }

    fn ta(&self) -> SimTime {
        SimTime::new(self.period)
    }
}

pub struct Passive;

impl Atomic<u64> for Passive {
    fn input_ports(&self) -> Vec<String> {
        vec!["in".into()]
    }

    fn output_ports(&self) -> Vec<String> {
        vec![]
    }

    fn delta_int(&mut self) {}

    fn delta_ext(&mut self, _elapsed: SimTime, _inputs: &[Message<u64>]) {}

    fn lambda(&self) -> Vec<Emission<u64>> {
        vec![]
    }

    fn ta(&self) -> SimTime {
        SimTime::INFINITY
    }
}

/// Passive; counts every message it receives and remembers each elapsed time.
#[derive(Default)]
pub struct Counter {
    pub count: u64,
    pub elapsed: Vec<f64>,
    pub payloads: Vec<u64>,
}

impl Atomic<u64> for Counter {
    fn input_ports(&self) -> Vec<String> {
        vec!["in".into()]
    }

    fn output_ports(&self) -> Vec<String> {
        vec![]
    }

    fn delta_int(&mut self) {}

    fn delta_ext(&mut self, elapsed: SimTime, inputs: &[Message<u64>]) {
        self.count += inputs.len() as u64;
        self.elapsed.push(elapsed.value());
        self.payloads.extend(inputs.iter().map(|m| m.payload));
    }

    fn lambda(&self) -> Vec<Emission<u64>> {
        vec![]
    }

    fn ta(&self) -> SimTime {
        SimTime::INFINITY
    }
}

pub fn pipeline(period: f64) -> Coupled<u64> {
    let mut c = Coupled::new();
    c.add_atomic("gen", Generator::new(period))
        .add_atomic("counter", Counter::default())
        .connect("gen", "out", "counter", "in");
    c
}

pub fn two_generators(order: [&str; 2]) -> Coupled<u64> {
    let mut c = Coupled::new();
    c.add_atomic("A", Generator::new(1.0))
        .add_atomic("B", Generator::new(1.0))
        .set_select(order);
    c
}

/// One line per trace entry: `time component phase`.
pub fn summarize<V>(trace: &devs_consanguinity::devs::EventTrace<V>) -> Vec<String> {
    trace
        .iter()
        .map(|e| format!("{} {} {}", e.time, e.component, e.phase))
        .collect()
}
