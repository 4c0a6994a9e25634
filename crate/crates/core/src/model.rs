//! Fault-tree structure, validation and the boolean structure function.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::distributions::LifetimeModel;
use crate::error::{Error, Result, TreeError};

/// Name of a basic event or gate: `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(String);

impl EventId {
    pub fn new(name: impl Into<String>) -> Result<Self, TreeError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Self(name))
        } else {
            Err(TreeError::InvalidId(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for EventId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for EventId {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        Self::new(s)
    }
}

/// Gate semantics over input events read as "has failed".
///
/// `Nand` is the intersection of the complemented `negated` inputs with the
/// plain `normal` inputs; it is not the complement of `And`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    And(Vec<EventId>),
    Or(Vec<EventId>),
    Nor(Vec<EventId>),
    Nand {
        negated: Vec<EventId>,
        normal: Vec<EventId>,
    },
    Xor(EventId, EventId),
    Not(EventId),
}

impl GateKind {
    /// Keyword used by the text format.
    pub fn keyword(&self) -> &'static str {
        match self {
            GateKind::And(_) => "and",
            GateKind::Or(_) => "or",
            GateKind::Nor(_) => "nor",
            GateKind::Nand { .. } => "nand",
            GateKind::Xor(..) => "xor",
            GateKind::Not(_) => "not",
        }
    }

    /// All referenced node ids, in declaration order.
    pub fn inputs(&self) -> Vec<&EventId> {
        match self {
            GateKind::And(v) | GateKind::Or(v) | GateKind::Nor(v) => v.iter().collect(),
            GateKind::Nand { negated, normal } => negated.iter().chain(normal).collect(),
            GateKind::Xor(a, b) => vec![a, b],
            GateKind::Not(a) => vec![a],
        }
    }

    /// True for the monotone gates (AND / OR).
    pub fn is_coherent(&self) -> bool {
        matches!(self, GateKind::And(_) | GateKind::Or(_))
    }

    /// Checks the input-count rules, returning a description of the violation.
    pub fn check_arity(&self) -> std::result::Result<(), String> {
        match self {
            GateKind::And(v) | GateKind::Or(v) | GateKind::Nor(v) if v.len() < 2 => Err(format!(
                "{} gate needs at least 2 inputs, got {}",
                self.keyword(),
                v.len()
            )),
            GateKind::Nand { negated, .. } if negated.is_empty() => {
                Err("nand gate needs at least one complemented input".into())
            }
            GateKind::Nand { normal, .. } if normal.is_empty() => {
                Err("nand gate needs at least one plain input".into())
            }
            GateKind::Xor(a, b) if a == b => Err("xor gate needs 2 distinct inputs".into()),
            _ => Ok(()),
        }
    }
}

/// Truth assignment of basic events (`true` = failed by the mission time).
pub type EventState = BTreeMap<EventId, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeRef {
    Event(usize),
    Gate(usize),
}

#[derive(Debug, Clone)]
enum Compiled {
    And(Vec<NodeRef>),
    Or(Vec<NodeRef>),
    Nor(Vec<NodeRef>),
    Nand(Vec<NodeRef>, Vec<NodeRef>),
    Xor(NodeRef, NodeRef),
    Not(NodeRef),
}

/// A validated, immutable static fault tree.
///
/// Basic events are kept sorted by id; their position in [`FaultTree::events`]
/// is the event index used by the indexed evaluation APIs. Gates are kept in
/// a deterministic topological order (inputs before consumers).
#[derive(Debug, Clone)]
pub struct FaultTree {
    events: Vec<(EventId, LifetimeModel)>,
    gates: Vec<(EventId, GateKind)>,
    top: EventId,
    compiled: Vec<Compiled>,
    top_ref: NodeRef,
    index: HashMap<EventId, NodeRef>,
}

impl PartialEq for FaultTree {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events && self.gates == other.gates && self.top == other.top
    }
}

impl FaultTree {
    /// Validates and assembles a tree.
    pub fn new(
        events: Vec<(EventId, LifetimeModel)>,
        gates: Vec<(EventId, GateKind)>,
        top: EventId,
    ) -> Result<Self, TreeError> {
        for (id, kind) in &gates {
            kind.check_arity().map_err(|reason| TreeError::BadArity {
                gate: id.to_string(),
                reason,
            })?;
        }

        let mut events = events;
        events.sort_by(|a, b| a.0.cmp(&b.0));
        let mut index = HashMap::new();
        for (i, (id, _)) in events.iter().enumerate() {
            if index.insert(id.clone(), NodeRef::Event(i)).is_some() {
                return Err(TreeError::DuplicateId(id.to_string()));
            }
        }
        let mut by_id: BTreeMap<&EventId, &GateKind> = BTreeMap::new();
        for (id, kind) in &gates {
            if index.contains_key(id) || by_id.insert(id, kind).is_some() {
                return Err(TreeError::DuplicateId(id.to_string()));
            }
        }
        for (id, kind) in &by_id {
            for input in kind.inputs() {
                if !index.contains_key(input) && !by_id.contains_key(input) {
                    return Err(TreeError::UnknownReference {
                        node: id.to_string(),
                        reference: input.to_string(),
                    });
                }
            }
        }
        if !index.contains_key(&top) && !by_id.contains_key(&top) {
            return Err(TreeError::UnknownReference {
                node: "toplevel".into(),
                reference: top.to_string(),
            });
        }

        let order = topological_order(&by_id)?;
        let ordered: Vec<(EventId, GateKind)> = order
            .into_iter()
            .map(|id| (id.clone(), by_id[id].clone()))
            .collect();
        for (i, (id, _)) in ordered.iter().enumerate() {
            index.insert(id.clone(), NodeRef::Gate(i));
        }

        let resolve = |ids: &[EventId]| ids.iter().map(|id| index[id]).collect::<Vec<_>>();
        let compiled = ordered
            .iter()
            .map(|(_, kind)| match kind {
                GateKind::And(v) => Compiled::And(resolve(v)),
                GateKind::Or(v) => Compiled::Or(resolve(v)),
                GateKind::Nor(v) => Compiled::Nor(resolve(v)),
                GateKind::Nand { negated, normal } => {
                    Compiled::Nand(resolve(negated), resolve(normal))
                }
                GateKind::Xor(a, b) => Compiled::Xor(index[a], index[b]),
                GateKind::Not(a) => Compiled::Not(index[a]),
            })
            .collect();
        let top_ref = index[&top];

        Ok(Self {
            events,
            gates: ordered,
            top,
            compiled,
            top_ref,
            index,
        })
    }

    pub fn builder() -> TreeBuilder {
        TreeBuilder::default()
    }

    /// Basic events sorted by id.
    pub fn events(&self) -> &[(EventId, LifetimeModel)] {
        &self.events
    }

    /// Gates in topological order.
    pub fn gates(&self) -> &[(EventId, GateKind)] {
        &self.gates
    }

    pub fn top(&self) -> &EventId {
        &self.top
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    /// Position of a basic event in [`FaultTree::events`].
    pub fn event_index(&self, id: &str) -> Option<usize> {
        match self.index.get(id) {
            Some(NodeRef::Event(i)) => Some(*i),
            _ => None,
        }
    }

    pub fn gate(&self, id: &str) -> Option<&GateKind> {
        match self.index.get(id) {
            Some(NodeRef::Gate(i)) => Some(&self.gates[*i].1),
            _ => None,
        }
    }

    /// First gate that is not AND/OR, if any.
    pub fn first_non_coherent_gate(&self) -> Option<&EventId> {
        self.gates
            .iter()
            .find(|(_, kind)| !kind.is_coherent())
            .map(|(id, _)| id)
    }

    pub fn is_coherent(&self) -> bool {
        self.first_non_coherent_gate().is_none()
    }

    /// Evaluates the structure function for a named truth assignment.
    pub fn structure_eval(&self, state: &EventState) -> Result<bool> {
        let values = self
            .events
            .iter()
            .map(|(id, _)| {
                state
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::IncompleteState(id.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.evaluator().eval(&values))
    }

    /// Reusable evaluator over event-index ordered states.
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator {
            tree: self,
            gate_values: vec![false; self.gates.len()],
        }
    }
}

/// Evaluates the structure function repeatedly without reallocating.
pub struct Evaluator<'a> {
    tree: &'a FaultTree,
    gate_values: Vec<bool>,
}

impl Evaluator<'_> {
    /// `states[i]` is the state of `tree.events()[i]`.
    pub fn eval(&mut self, states: &[bool]) -> bool {
        assert_eq!(
            states.len(),
            self.tree.events.len(),
            "state length mismatch"
        );
        self.eval_with(|i| states[i])
    }

    /// Evaluates with event states drawn from a closure over event indices.
    pub fn eval_with(&mut self, state: impl Fn(usize) -> bool) -> bool {
        for (g, gate) in self.tree.compiled.iter().enumerate() {
            let values = &self.gate_values;
            let value = |r: &NodeRef| match *r {
                NodeRef::Event(i) => state(i),
                NodeRef::Gate(j) => values[j],
            };
            let out = match gate {
                Compiled::And(v) => v.iter().all(value),
                Compiled::Or(v) => v.iter().any(value),
                Compiled::Nor(v) => !v.iter().any(value),
                Compiled::Nand(neg, pos) => neg.iter().all(|r| !value(r)) && pos.iter().all(value),
                Compiled::Xor(a, b) => value(a) != value(b),
                Compiled::Not(a) => !value(a),
            };
            self.gate_values[g] = out;
        }
        match self.tree.top_ref {
            NodeRef::Event(i) => state(i),
            NodeRef::Gate(j) => self.gate_values[j],
        }
    }
}

fn topological_order<'a>(
    gates: &BTreeMap<&'a EventId, &'a GateKind>,
) -> Result<Vec<&'a EventId>, TreeError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut marks: HashMap<&EventId, Mark> = gates.keys().map(|&id| (id, Mark::Fresh)).collect();
    let mut order = Vec::with_capacity(gates.len());

    for &root in gates.keys() {
        if marks[root] != Mark::Fresh {
            continue;
        }
        // explicit stack: (gate, next input position)
        let mut stack: Vec<(&EventId, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Active);
        while let Some((gate, pos)) = stack.pop() {
            let inputs = gates[gate].inputs();
            if let Some(&input) = inputs.get(pos) {
                stack.push((gate, pos + 1));
                if let Some((&child, _)) = gates.get_key_value(input) {
                    match marks[child] {
                        Mark::Fresh => {
                            marks.insert(child, Mark::Active);
                            stack.push((child, 0));
                        }
                        Mark::Active => return Err(TreeError::Cycle(child.to_string())),
                        Mark::Done => {}
                    }
                }
            } else {
                marks.insert(gate, Mark::Done);
                order.push(gate);
            }
        }
    }
    Ok(order)
}

/// String-keyed convenience front end for [`FaultTree::new`].
#[derive(Debug, Default, Clone)]
pub struct TreeBuilder {
    events: Vec<(EventId, LifetimeModel)>,
    gates: Vec<(EventId, GateKind)>,
    top: Option<EventId>,
    error: Option<TreeError>,
}

impl TreeBuilder {
    fn id(&mut self, name: &str) -> EventId {
        match EventId::new(name) {
            Ok(id) => id,
            Err(e) => {
                self.error.get_or_insert(e);
                EventId(String::new())
            }
        }
    }

    fn ids<'s>(&mut self, names: impl IntoIterator<Item = &'s str>) -> Vec<EventId> {
        names.into_iter().map(|n| self.id(n)).collect()
    }

    pub fn event(mut self, name: &str, model: LifetimeModel) -> Self {
        let id = self.id(name);
        self.events.push((id, model));
        self
    }

    pub fn gate(mut self, name: &str, kind: GateKind) -> Self {
        let id = self.id(name);
        self.gates.push((id, kind));
        self
    }

    pub fn and<'s>(mut self, name: &str, inputs: impl IntoIterator<Item = &'s str>) -> Self {
        let kind = GateKind::And(self.ids(inputs));
        self.gate(name, kind)
    }

    pub fn or<'s>(mut self, name: &str, inputs: impl IntoIterator<Item = &'s str>) -> Self {
        let kind = GateKind::Or(self.ids(inputs));
        self.gate(name, kind)
    }

    pub fn nor<'s>(mut self, name: &str, inputs: impl IntoIterator<Item = &'s str>) -> Self {
        let kind = GateKind::Nor(self.ids(inputs));
        self.gate(name, kind)
    }

    pub fn nand<'s>(
        mut self,
        name: &str,
        negated: impl IntoIterator<Item = &'s str>,
        normal: impl IntoIterator<Item = &'s str>,
    ) -> Self {
        let negated = self.ids(negated);
        let normal = self.ids(normal);
        self.gate(name, GateKind::Nand { negated, normal })
    }

    pub fn xor(mut self, name: &str, a: &str, b: &str) -> Self {
        let kind = GateKind::Xor(self.id(a), self.id(b));
        self.gate(name, kind)
    }

    pub fn not(mut self, name: &str, input: &str) -> Self {
        let kind = GateKind::Not(self.id(input));
        self.gate(name, kind)
    }

    pub fn top(mut self, name: &str) -> Self {
        self.top = Some(self.id(name));
        self
    }

    pub fn build(self) -> Result<FaultTree, TreeError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let top = self.top.ok_or_else(|| TreeError::UnknownReference {
            node: "toplevel".into(),
            reference: String::new(),
        })?;
        FaultTree::new(self.events, self.gates, top)
    }
}
