use std::any::Any;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::time::SimTime;

use super::DevsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Input,
    Output,
}

/// A port on a component, identified by the component path that owns it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Port {
    pub owner: Arc<str>,
    pub name: Arc<str>,
    pub direction: Direction,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.owner, self.name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message<V> {
    pub port: Port,
    pub payload: V,
}

/// Output produced by an atomic model's output function, before routing.
#[derive(Clone, Debug, PartialEq)]
pub struct Emission<V> {
    pub port: String,
    pub payload: V,
}

impl<V> Emission<V> {
    pub fn new(port: impl Into<String>, payload: V) -> Self {
        Emission {
            port: port.into(),
            payload,
        }
    }
}

/// Classic DEVS atomic model `(X, Y, S, δext, δint, λ, ta)`.
///
/// The implementing value *is* the state `S`; transitions mutate it in place.
/// `lambda` is only called on the imminent component, immediately before
/// `delta_int`. `delta_ext` receives the time elapsed since the component's
/// last transition, which never exceeds the current `ta`.
pub trait Atomic<V>: Any + Send {
    fn input_ports(&self) -> Vec<String>;

    fn output_ports(&self) -> Vec<String>;

    fn delta_int(&mut self);

    fn delta_ext(&mut self, elapsed: SimTime, inputs: &[Message<V>]);

    fn lambda(&self) -> Vec<Emission<V>>;

    /// Dwell time in the current state. `SimTime::INFINITY` for passive states.
    fn ta(&self) -> SimTime;
}

/// Translation applied to payloads travelling along a coupling (`Z_ij`).
pub type Translation<V> = Arc<dyn Fn(V) -> V + Send + Sync>;

/// One side of a coupling. `component == None` refers to the coupled model's
/// own boundary ports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub component: Option<String>,
    pub port: String,
}

impl Endpoint {
    pub fn child(component: impl Into<String>, port: impl Into<String>) -> Self {
        Endpoint {
            component: Some(component.into()),
            port: port.into(),
        }
    }

    pub fn boundary(port: impl Into<String>) -> Self {
        Endpoint {
            component: None,
            port: port.into(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.component {
            Some(c) => write!(f, "{c}.{}", self.port),
            None => write!(f, "<self>.{}", self.port),
        }
    }
}

pub struct Coupling<V> {
    pub from: Endpoint,
    pub to: Endpoint,
    pub translation: Option<Translation<V>>,
}

impl<V> Clone for Coupling<V> {
    fn clone(&self) -> Self {
        Coupling {
            from: self.from.clone(),
            to: self.to.clone(),
            translation: self.translation.clone(),
        }
    }
}

impl<V> fmt::Debug for Coupling<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coupling")
            .field("from", &self.from)
            .field("to", &self.to)
            .field("translated", &self.translation.is_some())
            .finish()
    }
}

/// Either an atomic or a coupled model.
pub enum Model<V> {
    Atomic(Box<dyn Atomic<V>>),
    Coupled(Coupled<V>),
}

impl<V: 'static> Model<V> {
    pub fn atomic(model: impl Atomic<V>) -> Self {
        Model::Atomic(Box::new(model))
    }

    pub(crate) fn input_ports(&self) -> Vec<String> {
        match self {
            Model::Atomic(a) => a.input_ports(),
            Model::Coupled(c) => c.input_ports.clone(),
        }
    }

    pub(crate) fn output_ports(&self) -> Vec<String> {
        match self {
            Model::Atomic(a) => a.output_ports(),
            Model::Coupled(c) => c.output_ports.clone(),
        }
    }
}

impl<V> From<Coupled<V>> for Model<V> {
    fn from(c: Coupled<V>) -> Self {
        Model::Coupled(c)
    }
}

impl<V: 'static> From<Box<dyn Atomic<V>>> for Model<V> {
    fn from(a: Box<dyn Atomic<V>>) -> Self {
        Model::Atomic(a)
    }
}

/// Classic DEVS coupled model `(X, Y, D, {Mi}, {Ii}, {Zij}, select)`.
///
/// Influencee sets are implied by the couplings. Unless [`Coupled::set_select`]
/// is called, the select order is the order in which components were added.
pub struct Coupled<V> {
    pub(crate) input_ports: Vec<String>,
    pub(crate) output_ports: Vec<String>,
    pub(crate) components: Vec<(String, Model<V>)>,
    pub(crate) couplings: Vec<Coupling<V>>,
    pub(crate) select: Option<Vec<String>>,
}

impl<V> Default for Coupled<V> {
    fn default() -> Self {
        Coupled {
            input_ports: Vec::new(),
            output_ports: Vec::new(),
            components: Vec::new(),
            couplings: Vec::new(),
            select: None,
        }
    }
}

impl<V: 'static> Coupled<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_input_port(&mut self, name: impl Into<String>) -> &mut Self {
        self.input_ports.push(name.into());
        self
    }

    pub fn add_output_port(&mut self, name: impl Into<String>) -> &mut Self {
        self.output_ports.push(name.into());
        self
    }

    pub fn add_component(&mut self, name: impl Into<String>, model: impl Into<Model<V>>) -> &mut Self {
        self.components.push((name.into(), model.into()));
        self
    }

    pub fn add_atomic(&mut self, name: impl Into<String>, model: impl Atomic<V>) -> &mut Self {
        self.components.push((name.into(), Model::atomic(model)));
        self
    }

    /// Internal coupling: child output → child input.
    pub fn connect(&mut self, from: &str, from_port: &str, to: &str, to_port: &str) -> &mut Self {
        self.couple(Endpoint::child(from, from_port), Endpoint::child(to, to_port), None)
    }

    /// External input coupling: own input → child input.
    pub fn connect_input(&mut self, port: &str, to: &str, to_port: &str) -> &mut Self {
        self.couple(Endpoint::boundary(port), Endpoint::child(to, to_port), None)
    }

    /// External output coupling: child output → own output.
    pub fn connect_output(&mut self, from: &str, from_port: &str, port: &str) -> &mut Self {
        self.couple(Endpoint::child(from, from_port), Endpoint::boundary(port), None)
    }

    pub fn couple(&mut self, from: Endpoint, to: Endpoint, translation: Option<Translation<V>>) -> &mut Self {
        self.couplings.push(Coupling { from, to, translation });
        self
    }

    /// Overrides the tie-breaking order. Must name every component exactly once.
    pub fn set_select<S: Into<String>>(&mut self, order: impl IntoIterator<Item = S>) -> &mut Self {
        self.select = Some(order.into_iter().map(Into::into).collect());
        self
    }

    pub fn component_names(&self) -> impl Iterator<Item = &str> {
        self.components.iter().map(|(n, _)| n.as_str())
    }

    pub fn couplings(&self) -> &[Coupling<V>] {
        &self.couplings
    }

    pub fn component(&self, name: &str) -> Option<&Model<V>> {
        self.components.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Checks the structural invariants of this model and, recursively, of
    /// every coupled child.
    pub fn validate(&self) -> Result<(), DevsError> {
        self.validate_at("")
    }

    pub(crate) fn validate_at(&self, path: &str) -> Result<(), DevsError> {
        let mut seen = HashSet::new();
        for (name, _) in &self.components {
            if name.is_empty() || name.contains('/') {
                return Err(DevsError::Structure(format!(
                    "component name {name:?} in {} must be non-empty and contain no '/'",
                    display_path(path)
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(DevsError::Structure(format!(
                    "duplicate component {name:?} in {}",
                    display_path(path)
                )));
            }
        }
        check_unique_ports(&self.input_ports, path, "input")?;
        check_unique_ports(&self.output_ports, path, "output")?;

        if let Some(order) = &self.select {
            let mut listed = HashSet::new();
            for name in order {
                if !seen.contains(name.as_str()) {
                    return Err(DevsError::Structure(format!(
                        "select order in {} names unknown component {name:?}",
                        display_path(path)
                    )));
                }
                if !listed.insert(name.as_str()) {
                    return Err(DevsError::Structure(format!(
                        "select order in {} lists {name:?} twice",
                        display_path(path)
                    )));
                }
            }
            if listed.len() != seen.len() {
                return Err(DevsError::Structure(format!(
                    "select order in {} is not a total order over its components",
                    display_path(path)
                )));
            }
        }

        for coupling in &self.couplings {
            self.check_endpoint(path, &coupling.from, Side::Source)?;
            self.check_endpoint(path, &coupling.to, Side::Destination)?;
            match (&coupling.from.component, &coupling.to.component) {
                (Some(a), Some(b)) if a == b => {
                    return Err(DevsError::InvalidCoupling {
                        endpoint: format!("{}/{}", display_path(path), coupling.to),
                        reason: "a component may not be coupled to itself".into(),
                    })
                }
                (None, None) => {
                    return Err(DevsError::InvalidCoupling {
                        endpoint: format!("{}/{}", display_path(path), coupling.from),
                        reason: "direct input-to-output feedthrough is not supported".into(),
                    })
                }
                _ => {}
            }
        }

        for (name, model) in &self.components {
            if let Model::Coupled(c) = model {
                c.validate_at(&join_path(path, name))?;
            }
        }
        Ok(())
    }

    fn check_endpoint(&self, path: &str, endpoint: &Endpoint, side: Side) -> Result<(), DevsError> {
        let bad = |reason: String| DevsError::InvalidCoupling {
            endpoint: format!("{}/{}", display_path(path), endpoint),
            reason,
        };
        match &endpoint.component {
            None => {
                // Sources on the boundary are own inputs, destinations own outputs.
                let (ports, kind) = match side {
                    Side::Source => (&self.input_ports, "input"),
                    Side::Destination => (&self.output_ports, "output"),
                };
                if !ports.contains(&endpoint.port) {
                    return Err(bad(format!("no {kind} port {:?} on the coupled model", endpoint.port)));
                }
            }
            Some(child) => {
                let model = self
                    .component(child)
                    .ok_or_else(|| bad(format!("unknown component {child:?}")))?;
                let (ports, kind) = match side {
                    Side::Source => (model.output_ports(), "output"),
                    Side::Destination => (model.input_ports(), "input"),
                };
                if !ports.contains(&endpoint.port) {
                    return Err(bad(format!("component {child:?} has no {kind} port {:?}", endpoint.port)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Side {
    Source,
    Destination,
}

fn check_unique_ports(ports: &[String], path: &str, kind: &str) -> Result<(), DevsError> {
    let mut seen = HashSet::new();
    for p in ports {
        if !seen.insert(p) {
            return Err(DevsError::Structure(format!(
                "duplicate {kind} port {p:?} on {}",
                display_path(path)
            )));
        }
    }
    Ok(())
}

pub(crate) fn join_path(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}/{name}")
    }
}

fn display_path(path: &str) -> &str {
    if path.is_empty() {
        "<root>"
    } else {
        path
    }
}
