use std::any::Any;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::sync::Arc;

use crate::time::SimTime;

use super::model::{join_path, Atomic, Coupling, Direction, Endpoint, Message, Model, Port, Translation};
use super::trace::{EventTrace, Phase, TraceEntry};
use super::DevsError;

/// Consecutive steps allowed at a single clock value before the model is
/// declared illegitimate.
pub const MAX_ZERO_STEPS: u64 = 1_000_000;

struct Node<V> {
    path: Arc<str>,
    model: Box<dyn Atomic<V>>,
    t_last: SimTime,
    t_next: SimTime,
    generation: u64,
    output_ports: Vec<String>,
}

enum Target {
    Node(usize, Arc<str>),
    Root(Arc<str>),
}

struct Route<V> {
    target: Target,
    translations: Vec<Translation<V>>,
}

enum Tree<V> {
    Leaf(usize),
    Branch(Branch<V>),
}

struct Branch<V> {
    children: HashMap<String, Tree<V>>,
    couplings: Vec<Coupling<V>>,
}

/// Read-only view of one atomic component inside a running simulation.
pub struct NodeView<'a, V> {
    pub path: &'a str,
    pub t_last: SimTime,
    pub t_next: SimTime,
    pub model: &'a dyn Atomic<V>,
}

/// Abstract simulator for a (flattened) Classic DEVS model.
///
/// Atomic components are stored in select order: a depth-first walk of the
/// hierarchy where each coupled model contributes its children in its own
/// select order. Ties among imminent components resolve to the lowest index.
pub struct Simulation<V> {
    nodes: Vec<Node<V>>,
    routes: Vec<HashMap<String, Vec<Route<V>>>>,
    root_outputs: Vec<Arc<str>>,
    calendar: BinaryHeap<Reverse<(SimTime, usize, u64)>>,
    clock: SimTime,
    zero_steps: u64,
    max_zero_steps: u64,
    tracing: bool,
    trace: EventTrace<V>,
}

impl<V: Clone + 'static> Simulation<V> {
    pub fn initialize(model: impl Into<Model<V>>, t0: SimTime) -> Result<Self, DevsError> {
        let model = model.into();
        if !t0.is_finite() || !t0.is_valid() {
            return Err(DevsError::InvalidTime(t0.value()));
        }
        if let Model::Coupled(c) = &model {
            c.validate()?;
        }
        let root_outputs: Vec<Arc<str>> = model.output_ports().into_iter().map(Arc::from).collect();

        let mut nodes = Vec::new();
        let tree = flatten(model, "", &mut nodes);

        let mut routes: Vec<HashMap<String, Vec<Route<V>>>> = Vec::with_capacity(nodes.len());
        match &tree {
            Tree::Leaf(i) => {
                let mut table = HashMap::new();
                for port in &nodes[*i].output_ports {
                    table.insert(
                        port.clone(),
                        vec![Route {
                            target: Target::Root(Arc::from(port.as_str())),
                            translations: Vec::new(),
                        }],
                    );
                }
                routes.push(table);
            }
            Tree::Branch(root) => {
                routes.resize_with(nodes.len(), HashMap::new);
                let mut stack = Vec::new();
                collect_routes(root, &mut stack, &nodes, &mut routes)?;
            }
        }

        let mut sim = Simulation {
            nodes,
            routes,
            root_outputs,
            calendar: BinaryHeap::new(),
            clock: t0,
            zero_steps: 0,
            max_zero_steps: MAX_ZERO_STEPS,
            tracing: true,
            trace: EventTrace::default(),
        };
        for i in 0..sim.nodes.len() {
            sim.nodes[i].t_last = t0;
            sim.reschedule(i)?;
        }
        Ok(sim)
    }

    /// Advances to the next event time and executes exactly one imminent
    /// component's internal transition, plus the external transitions of the
    /// components that receive its output.
    ///
    /// Returns the event time and any messages that crossed the root model's
    /// output boundary.
    pub fn step(&mut self) -> Result<(SimTime, Vec<Message<V>>), DevsError> {
        let (t, imminent) = self.peek().ok_or(DevsError::Passive)?;
        if t == self.clock {
            self.zero_steps += 1;
            if self.zero_steps > self.max_zero_steps {
                return Err(DevsError::Illegitimate {
                    time: t.value(),
                    steps: self.zero_steps,
                });
            }
        } else {
            self.zero_steps = 0;
        }
        self.clock = t;

        let emissions = self.nodes[imminent].model.lambda();
        let source = self.nodes[imminent].path.clone();
        let mut outputs = Vec::with_capacity(emissions.len());
        let mut inbox: BTreeMap<usize, Vec<Message<V>>> = BTreeMap::new();
        let mut external = Vec::new();

        for emission in emissions {
            let Some(routes) = self.routes[imminent].get(&emission.port) else {
                if self.nodes[imminent].output_ports.contains(&emission.port) {
                    // Declared but uncoupled: the message leaves the model.
                    if self.tracing {
                        outputs.push(Message {
                            port: Port {
                                owner: source.clone(),
                                name: Arc::from(emission.port.as_str()),
                                direction: Direction::Output,
                            },
                            payload: emission.payload,
                        });
                    }
                    continue;
                }
                return Err(DevsError::Routing {
                    component: source.to_string(),
                    port: emission.port,
                });
            };
            for route in routes {
                let payload = route
                    .translations
                    .iter()
                    .fold(emission.payload.clone(), |v, z| z(v));
                match &route.target {
                    Target::Node(j, port) => inbox.entry(*j).or_default().push(Message {
                        port: Port {
                            owner: self.nodes[*j].path.clone(),
                            name: port.clone(),
                            direction: Direction::Input,
                        },
                        payload,
                    }),
                    Target::Root(port) => external.push(Message {
                        port: Port {
                            owner: Arc::from(""),
                            name: port.clone(),
                            direction: Direction::Output,
                        },
                        payload,
                    }),
                }
            }
            if self.tracing {
                outputs.push(Message {
                    port: Port {
                        owner: source.clone(),
                        name: Arc::from(emission.port.as_str()),
                        direction: Direction::Output,
                    },
                    payload: emission.payload,
                });
            }
        }

        self.nodes[imminent].model.delta_int();
        self.nodes[imminent].t_last = t;
        self.reschedule(imminent)?;
        if self.tracing {
            self.trace.entries.push(TraceEntry {
                time: t,
                component: source,
                phase: Phase::Internal,
                messages: outputs,
            });
        }

        for (j, messages) in inbox {
            let node = &mut self.nodes[j];
            let elapsed = t - node.t_last;
            node.model.delta_ext(elapsed, &messages);
            node.t_last = t;
            self.reschedule(j)?;
            if self.tracing {
                self.trace.entries.push(TraceEntry {
                    time: t,
                    component: self.nodes[j].path.clone(),
                    phase: Phase::External,
                    messages,
                });
            }
        }

        Ok((t, external))
    }

    /// Steps while the next event time is at or before `t_end`. Returns the
    /// trace entries recorded during this call (empty when tracing is off).
    pub fn run_until(&mut self, t_end: SimTime) -> Result<EventTrace<V>, DevsError> {
        if t_end < self.clock || t_end.value().is_nan() {
            return Err(DevsError::InvalidHorizon {
                clock: self.clock.value(),
                t_end: t_end.value(),
            });
        }
        let start = self.trace.entries.len();
        while let Some((t, _)) = self.peek() {
            if t > t_end {
                break;
            }
            self.step()?;
        }
        Ok(EventTrace {
            entries: self.trace.entries[start..].to_vec(),
        })
    }
}

impl<V: 'static> Simulation<V> {
    pub fn clock(&self) -> SimTime {
        self.clock
    }

    /// Minimum `t_next` over all components.
    pub fn next_time(&self) -> SimTime {
        self.nodes
            .iter()
            .map(|n| n.t_next)
            .min()
            .unwrap_or(SimTime::INFINITY)
    }

    pub fn set_tracing(&mut self, on: bool) {
        self.tracing = on;
    }

    pub fn set_max_zero_steps(&mut self, limit: u64) {
        self.max_zero_steps = limit;
    }

    /// Everything recorded since initialization.
    pub fn trace(&self) -> &EventTrace<V> {
        &self.trace
    }

    pub fn root_output_ports(&self) -> impl Iterator<Item = &str> {
        self.root_outputs.iter().map(|p| &**p)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeView<'_, V>> {
        self.nodes.iter().map(|n| NodeView {
            path: &n.path,
            t_last: n.t_last,
            t_next: n.t_next,
            model: n.model.as_ref(),
        })
    }

    pub fn node(&self, path: &str) -> Option<NodeView<'_, V>> {
        self.nodes().find(|n| n.path == path)
    }

    /// Downcasts the atomic at `path` to its concrete type.
    pub fn component<T: Atomic<V>>(&self, path: &str) -> Option<&T> {
        let node = self.nodes.iter().find(|n| &*n.path == path)?;
        let any: &dyn Any = node.model.as_ref();
        any.downcast_ref::<T>()
    }

    fn peek(&mut self) -> Option<(SimTime, usize)> {
        while let Some(Reverse((t, i, generation))) = self.calendar.peek().copied() {
            if self.nodes[i].generation == generation {
                return Some((t, i));
            }
            self.calendar.pop();
        }
        None
    }

    fn reschedule(&mut self, i: usize) -> Result<(), DevsError> {
        let node = &mut self.nodes[i];
        let ta = node.model.ta();
        if !ta.is_valid() {
            return Err(DevsError::ContractViolation {
                component: node.path.to_string(),
                detail: format!("time advance {} is negative or NaN", ta.value()),
            });
        }
        node.t_next = node.t_last + ta;
        node.generation += 1;
        if node.t_next.is_finite() {
            self.calendar.push(Reverse((node.t_next, i, node.generation)));
        }
        Ok(())
    }
}

fn flatten<V: 'static>(model: Model<V>, path: &str, nodes: &mut Vec<Node<V>>) -> Tree<V> {
    match model {
        Model::Atomic(a) => {
            let output_ports = a.output_ports();
            nodes.push(Node {
                path: Arc::from(path),
                model: a,
                t_last: SimTime::ZERO,
                t_next: SimTime::INFINITY,
                generation: 0,
                output_ports,
            });
            Tree::Leaf(nodes.len() - 1)
        }
        Model::Coupled(c) => {
            let mut components: Vec<(String, Model<V>)> = c.components;
            if let Some(order) = &c.select {
                let rank: HashMap<&str, usize> =
                    order.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                components.sort_by_key(|(n, _)| rank[n.as_str()]);
            }
            let mut children = HashMap::with_capacity(components.len());
            for (name, child) in components {
                let sub = flatten(child, &join_path(path, &name), nodes);
                children.insert(name, sub);
            }
            Tree::Branch(Branch {
                children,
                couplings: c.couplings,
            })
        }
    }
}

fn collect_routes<'a, V>(
    branch: &'a Branch<V>,
    stack: &mut Vec<(&'a Branch<V>, &'a str)>,
    nodes: &[Node<V>],
    routes: &mut [HashMap<String, Vec<Route<V>>>],
) -> Result<(), DevsError> {
    for (name, child) in &branch.children {
        stack.push((branch, name.as_str()));
        match child {
            Tree::Leaf(i) => {
                for port in &nodes[*i].output_ports {
                    let mut found = Vec::new();
                    resolve_up(stack, stack.len() - 1, port, Vec::new(), &mut found);
                    for route in &found {
                        if let Target::Node(j, _) = route.target {
                            if j == *i {
                                return Err(DevsError::InvalidCoupling {
                                    endpoint: format!("{}.{}", nodes[*i].path, port),
                                    reason: "output loops back to the same component".into(),
                                });
                            }
                        }
                    }
                    if !found.is_empty() {
                        routes[*i].insert(port.clone(), found);
                    }
                }
            }
            Tree::Branch(sub) => collect_routes(sub, stack, nodes, routes)?,
        }
        stack.pop();
    }
    Ok(())
}

fn resolve_up<V>(
    stack: &[(&Branch<V>, &str)],
    depth: usize,
    port: &str,
    translations: Vec<Translation<V>>,
    out: &mut Vec<Route<V>>,
) {
    let (branch, child) = stack[depth];
    for coupling in &branch.couplings {
        if coupling.from.component.as_deref() != Some(child) || coupling.from.port != port {
            continue;
        }
        let mut chain = translations.clone();
        chain.extend(coupling.translation.clone());
        match &coupling.to {
            Endpoint {
                component: Some(target),
                port: target_port,
            } => resolve_down(&branch.children[target], target_port, chain, out),
            Endpoint { component: None, port: boundary } => {
                if depth == 0 {
                    out.push(Route {
                        target: Target::Root(Arc::from(boundary.as_str())),
                        translations: chain,
                    });
                } else {
                    resolve_up(stack, depth - 1, boundary, chain, out);
                }
            }
        }
    }
}

fn resolve_down<V>(tree: &Tree<V>, port: &str, translations: Vec<Translation<V>>, out: &mut Vec<Route<V>>) {
    match tree {
        Tree::Leaf(i) => out.push(Route {
            target: Target::Node(*i, Arc::from(port)),
            translations,
        }),
        Tree::Branch(b) => {
            for coupling in &b.couplings {
                if coupling.from.component.is_some() || coupling.from.port != port {
                    continue;
                }
                if let Some(target) = &coupling.to.component {
                    let mut chain = translations.clone();
                    chain.extend(coupling.translation.clone());
                    resolve_down(&b.children[target], &coupling.to.port, chain, out);
                }
            }
        }
    }
}
