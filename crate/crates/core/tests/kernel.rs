mod common;

use std::sync::Arc;

use common::{pipeline, summarize, two_generators, Counter, Generator, Passive};
use devs_consanguinity::devs::{Atomic, Coupled, DevsError, Emission, Endpoint, Message, Phase, Simulation};
use devs_consanguinity::SimTime;
use proptest::prelude::*;

fn t(x: f64) -> SimTime {
    SimTime::new(x)
}

#[test]
fn passive_atomic_never_schedules() {
    let sim = Simulation::<u64>::initialize(Box::new(Passive) as Box<dyn Atomic<u64>>, SimTime::ZERO).unwrap();
    assert!(sim.next_time().is_infinite());
}

#[test]
fn generator_first_event_at_ta() {
    let sim = Simulation::initialize(Box::new(Generator::new(2.0)) as Box<dyn Atomic<u64>>, SimTime::ZERO).unwrap();
    assert_eq!(sim.next_time(), t(2.0));
}

#[test]
fn coupled_next_time_is_child_minimum() {
    let mut c = Coupled::new();
    c.add_atomic("gen", Generator::new(2.0)).add_atomic("idle", Passive);
    let sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    assert_eq!(sim.next_time(), t(2.0));
    assert!(sim.node("idle").unwrap().t_next.is_infinite());
}

#[test]
fn lone_generator_step_emits_one_message() {
    let mut sim = Simulation::initialize(Box::new(Generator::new(2.0)) as Box<dyn Atomic<u64>>, SimTime::ZERO).unwrap();
    let (time, out) = sim.step().unwrap();
    assert_eq!(time, t(2.0));
    assert_eq!(out.len(), 1);
    assert_eq!(&*out[0].port.name, "out");
    assert_eq!(out[0].payload, 1);
}

#[test]
fn generator_run_until_seven() {
    let mut c = Coupled::new();
    c.add_atomic("gen", Generator::new(2.0));
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    let trace = sim.run_until(t(7.0)).unwrap();
    assert_eq!(summarize(&trace), ["2 gen internal", "4 gen internal", "6 gen internal"]);
    assert_eq!(sim.clock(), t(6.0));
    assert_eq!(sim.next_time(), t(8.0));
    assert_eq!(sim.component::<Generator>("gen").unwrap().fired, 3);
}

#[test]
fn passive_model_has_empty_trace() {
    let mut c = Coupled::new();
    c.add_atomic("a", Passive).add_atomic("b", Passive);
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    assert!(sim.run_until(t(10.0)).unwrap().is_empty());
    assert_eq!(sim.step().unwrap_err(), DevsError::Passive);
}

#[test]
fn pipeline_counter_sees_elapsed_one() {
    let mut sim = Simulation::initialize(pipeline(1.0), SimTime::ZERO).unwrap();
    let (time, external) = sim.step().unwrap();
    assert_eq!(time, t(1.0));
    assert!(external.is_empty());
    let counter = sim.component::<Counter>("counter").unwrap();
    assert_eq!(counter.count, 1);
    assert_eq!(counter.elapsed, [1.0]);
    assert_eq!(summarize(sim.trace()), ["1 gen internal", "1 counter external"]);
}

#[test]
fn pipeline_elapsed_is_time_since_last_transition() {
    let mut sim = Simulation::initialize(pipeline(1.5), SimTime::ZERO).unwrap();
    sim.run_until(t(6.0)).unwrap();
    let counter = sim.component::<Counter>("counter").unwrap();
    assert_eq!(counter.payloads, [1, 2, 3, 4]);
    assert_eq!(counter.elapsed, [1.5, 1.5, 1.5, 1.5]);
}

#[test]
fn select_order_breaks_ties() {
    let mut sim = Simulation::initialize(two_generators(["A", "B"]), SimTime::ZERO).unwrap();
    sim.step().unwrap();
    sim.step().unwrap();
    assert_eq!(summarize(sim.trace()), ["1 A internal", "1 B internal"]);

    let mut sim = Simulation::initialize(two_generators(["B", "A"]), SimTime::ZERO).unwrap();
    sim.step().unwrap();
    assert_eq!(sim.clock(), t(1.0));
    assert_eq!(&*sim.trace().entries[0].component, "B");
}

#[test]
fn default_select_is_insertion_order() {
    let mut c = Coupled::new();
    c.add_atomic("Z", Generator::new(1.0)).add_atomic("A", Generator::new(1.0));
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    sim.run_until(t(2.0)).unwrap();
    assert_eq!(
        summarize(sim.trace()),
        ["1 Z internal", "1 A internal", "2 Z internal", "2 A internal"]
    );
}

/// A sends to B while both are imminent. B goes second in select order, so it
/// takes the external transition first with elapsed = ta, then fires itself.
#[test]
fn imminent_receiver_takes_external_first() {
    struct Relay {
        fired: u64,
        seen: Vec<f64>,
    }
    impl Atomic<u64> for Relay {
        fn input_ports(&self) -> Vec<String> {
            vec!["in".into()]
        }
        fn output_ports(&self) -> Vec<String> {
            vec!["out".into()]
        }
        fn delta_int(&mut self) {
            self.fired += 1;
        }
        fn delta_ext(&mut self, elapsed: SimTime, _inputs: &[Message<u64>]) {
            self.seen.push(elapsed.value());
        }
        fn lambda(&self) -> Vec<Emission<u64>> {
            vec![Emission::new("out", 0)]
        }
        fn ta(&self) -> SimTime {
            SimTime::new(2.0)
        }
    }
    let mut c = Coupled::new();
    c.add_atomic("A", Generator::new(2.0))
        .add_atomic("B", Relay { fired: 0, seen: vec![] })
        .connect("A", "out", "B", "in");
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    sim.step().unwrap();
    let b = sim.component::<Relay>("B").unwrap();
    assert_eq!(b.seen, [2.0]);
    assert_eq!(b.fired, 0);
    // The external transition reset B's clock: it now fires at 4, not 2.
    assert_eq!(sim.node("B").unwrap().t_next, t(4.0));
    assert_eq!(sim.next_time(), t(4.0));
}

#[test]
fn translation_applies_on_coupling() {
    let mut c = Coupled::new();
    c.add_atomic("gen", Generator::new(1.0))
        .add_atomic("counter", Counter::default())
        .couple(
            Endpoint::child("gen", "out"),
            Endpoint::child("counter", "in"),
            Some(Arc::new(|v: u64| v * 10)),
        );
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    sim.run_until(t(3.0)).unwrap();
    assert_eq!(sim.component::<Counter>("counter").unwrap().payloads, [10, 20, 30]);
}

fn nested() -> Coupled<u64> {
    let mut inner = Coupled::new();
    inner
        .add_output_port("y")
        .add_atomic("gen", Generator::new(1.0))
        .connect_output("gen", "out", "y");
    let mut sink = Coupled::new();
    sink.add_input_port("x")
        .add_atomic("counter", Counter::default())
        .connect_input("x", "counter", "in");
    let mut root = Coupled::new();
    root.add_output_port("result")
        .add_component("left", inner)
        .add_component("right", sink)
        .connect("left", "y", "right", "x")
        .connect_output("left", "y", "result");
    root
}

#[test]
fn hierarchical_routing_reaches_nested_atomics_and_root() {
    let mut sim = Simulation::initialize(nested(), SimTime::ZERO).unwrap();
    let (_, external) = sim.step().unwrap();
    assert_eq!(external.len(), 1);
    assert_eq!(&*external[0].port.name, "result");
    let counter = sim.component::<Counter>("right/counter").unwrap();
    assert_eq!(counter.count, 1);
    let paths: Vec<&str> = sim.nodes().map(|n| n.path).collect();
    assert_eq!(paths, ["left/gen", "right/counter"]);
}

#[test]
fn structural_errors_are_rejected() {
    let mut dup = Coupled::<u64>::new();
    dup.add_atomic("a", Passive).add_atomic("a", Passive);
    assert!(matches!(dup.validate(), Err(DevsError::Structure(_))));

    let mut unknown = Coupled::<u64>::new();
    unknown.add_atomic("gen", Generator::new(1.0)).connect("gen", "out", "ghost", "in");
    assert!(matches!(unknown.validate(), Err(DevsError::InvalidCoupling { .. })));

    let mut wrong_port = Coupled::<u64>::new();
    wrong_port
        .add_atomic("gen", Generator::new(1.0))
        .add_atomic("p", Passive)
        .connect("gen", "out", "p", "nope");
    assert!(matches!(wrong_port.validate(), Err(DevsError::InvalidCoupling { .. })));

    let mut backwards = Coupled::<u64>::new();
    backwards
        .add_atomic("gen", Generator::new(1.0))
        .add_atomic("p", Passive)
        .connect("p", "in", "gen", "out");
    assert!(backwards.validate().is_err());

    let mut self_loop = Coupled::<u64>::new();
    self_loop.add_atomic("c", Counter::default()).connect("c", "in", "c", "in");
    assert!(self_loop.validate().is_err());

    let mut partial = Coupled::<u64>::new();
    partial
        .add_atomic("a", Passive)
        .add_atomic("b", Passive)
        .set_select(["a"]);
    assert!(matches!(partial.validate(), Err(DevsError::Structure(_))));

    assert!(Simulation::initialize(dup, SimTime::ZERO).is_err());
}

struct Broken(f64);

impl Atomic<u64> for Broken {
    fn input_ports(&self) -> Vec<String> {
        vec![]
    }
    fn output_ports(&self) -> Vec<String> {
        vec!["out".into()]
    }
    fn delta_int(&mut self) {}
    fn delta_ext(&mut self, _elapsed: SimTime, _inputs: &[Message<u64>]) {}
    fn lambda(&self) -> Vec<Emission<u64>> {
        vec![Emission::new("elsewhere", 0)]
    }
    fn ta(&self) -> SimTime {
        SimTime::new(self.0)
    }
}

#[test]
fn negative_time_advance_is_a_contract_violation() {
    let mut c = Coupled::new();
    c.add_atomic("bad", Broken(-1.0));
    assert!(matches!(
        Simulation::initialize(c, SimTime::ZERO),
        Err(DevsError::ContractViolation { .. })
    ));
}

#[test]
fn undeclared_output_port_is_a_routing_error() {
    let mut c = Coupled::new();
    c.add_atomic("bad", Broken(1.0));
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    assert!(matches!(sim.step(), Err(DevsError::Routing { .. })));
}

#[test]
fn zero_time_loop_is_illegitimate() {
    let mut c = Coupled::new();
    c.add_atomic("spin", Generator::new(0.0));
    let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
    sim.set_max_zero_steps(1000);
    sim.set_tracing(false);
    match sim.run_until(t(1.0)) {
        Err(DevsError::Illegitimate { time, steps }) => {
            assert_eq!(time, 0.0);
            assert_eq!(steps, 1001);
        }
        other => panic!("expected illegitimate model, got {:?}", other.map(|tr| tr.len())),
    }
}

#[test]
fn run_until_rejects_past_horizon() {
    let mut sim = Simulation::initialize(pipeline(1.0), SimTime::ZERO).unwrap();
    sim.run_until(t(5.0)).unwrap();
    assert!(matches!(sim.run_until(t(2.0)), Err(DevsError::InvalidHorizon { .. })));
}

#[test]
fn identical_models_give_identical_traces() {
    let run = || {
        let mut sim = Simulation::initialize(nested(), SimTime::ZERO).unwrap();
        let trace = sim.run_until(t(50.0)).unwrap();
        let mut buf = Vec::new();
        trace.write_tsv(&mut buf).unwrap();
        buf
    };
    assert_eq!(run(), run());
}

#[test]
fn trace_tsv_format() {
    let mut sim = Simulation::initialize(pipeline(1.0), SimTime::ZERO).unwrap();
    let trace = sim.run_until(t(1.0)).unwrap();
    let mut buf = Vec::new();
    trace.write_tsv(&mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "1\tgen\tinternal\tout\t1\n1\tcounter\texternal\tin\t1\n"
    );
    assert_eq!(trace.entries[1].phase, Phase::External);
}

proptest! {
    #[test]
    fn clock_is_monotone_and_nodes_consistent(
        periods in prop::collection::vec(0.1f64..5.0, 1..6),
        horizon in 1.0f64..40.0,
    ) {
        let mut c = Coupled::new();
        c.add_atomic("counter", Counter::default());
        for (i, p) in periods.iter().enumerate() {
            let name = format!("g{i}");
            c.add_atomic(name.clone(), Generator::new(*p)).connect(&name, "out", "counter", "in");
        }
        let mut sim = Simulation::initialize(c, SimTime::ZERO).unwrap();
        let trace = sim.run_until(t(horizon)).unwrap();
        let times: Vec<f64> = trace.iter().map(|e| e.time.value()).collect();
        prop_assert!(times.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(times.iter().all(|&x| x <= horizon));
        for node in sim.nodes() {
            prop_assert!(node.t_last <= sim.clock());
            prop_assert!(node.t_last <= node.t_next);
            prop_assert!(node.t_next > SimTime::new(horizon));
        }
        let fired: u64 = (0..periods.len())
            .map(|i| sim.component::<Generator>(&format!("g{i}")).unwrap().fired)
            .sum();
        prop_assert_eq!(sim.component::<Counter>("counter").unwrap().count, fired);
        prop_assert_eq!(trace.internal_events().count() as u64, fired);
    }
}
