#![allow(dead_code)]

use fta::{EventId, FaultTree, GateKind, LifetimeModel, ProbAssignment};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct TreeShape {
    pub max_events: usize,
    pub max_depth: usize,
    pub coherent: bool,
}

fn id(s: &str) -> EventId {
    EventId::new(s).unwrap()
}

pub fn random_model<R: Rng>(rng: &mut R) -> LifetimeModel {
    match rng.gen_range(0..3) {
        0 => LifetimeModel::exponential(rng.gen_range(0.0..1e-2)).unwrap(),
        1 => LifetimeModel::weibull(rng.gen_range(0.3..4.0), rng.gen_range(10.0..1e4)).unwrap(),
        _ => LifetimeModel::fixed(rng.gen_range(0.0..=1.0)).unwrap(),
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    shape: TreeShape,
    events: Vec<String>,
    gates: Vec<(EventId, GateKind)>,
    // levels of gates at and below each generated gate
    heights: Vec<usize>,
}

impl<R: Rng> Gen<'_, R> {
    fn leaf(&mut self) -> String {
        self.events.choose(self.rng).unwrap().clone()
    }

    /// Event or gate name for a node at `depth` (the top gate is at depth 1).
    fn node(&mut self, depth: usize) -> String {
        let can_branch = depth <= self.shape.max_depth;
        if !can_branch || (depth > 1 && self.rng.gen_bool(0.35)) {
            // occasionally share an existing gate to get a DAG
            if !self.gates.is_empty() && self.rng.gen_bool(0.15) {
                let g = self.rng.gen_range(0..self.gates.len());
                if depth + self.heights[g] - 1 <= self.shape.max_depth {
                    return self.gates[g].0.to_string();
                }
            }
            return self.leaf();
        }
        let kind = self.gate_kind(depth);
        let name = format!("g{}", self.gates.len());
        self.push(&name, kind);
        name
    }

    fn height_of(&self, input: &EventId) -> usize {
        self.gates
            .iter()
            .position(|(g, _)| g == input)
            .map_or(0, |i| self.heights[i])
    }

    fn push(&mut self, name: &str, kind: GateKind) {
        let height = 1 + kind
            .inputs()
            .iter()
            .map(|i| self.height_of(i))
            .max()
            .unwrap_or(0);
        self.gates.push((id(name), kind));
        self.heights.push(height);
    }

    fn children(&mut self, depth: usize, lo: usize, hi: usize) -> Vec<EventId> {
        let k = self.rng.gen_range(lo..=hi);
        (0..k).map(|_| id(&self.node(depth + 1))).collect()
    }

    fn gate_kind(&mut self, depth: usize) -> GateKind {
        let choice = if self.shape.coherent {
            self.rng.gen_range(0..2)
        } else {
            self.rng.gen_range(0..6)
        };
        match choice {
            0 => GateKind::And(self.children(depth, 2, 3)),
            1 => GateKind::Or(self.children(depth, 2, 4)),
            2 => GateKind::Nor(self.children(depth, 2, 3)),
            3 => {
                let negated = self.children(depth, 1, 2);
                let normal = self.children(depth, 1, 2);
                GateKind::Nand { negated, normal }
            }
            4 => loop {
                let a = id(&self.node(depth + 1));
                let b = id(&self.node(depth + 1));
                if a != b {
                    break GateKind::Xor(a, b);
                }
            },
            _ => GateKind::Not(id(&self.node(depth + 1))),
        }
    }
}

/// Random valid tree whose top is a gate. Gate names are allocated after
/// their children, so the structure is acyclic by construction.
pub fn random_tree<R: Rng>(rng: &mut R, shape: TreeShape, fixed_probs: bool) -> FaultTree {
    let n = rng.gen_range(2..=shape.max_events);
    let events: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut gen = Gen {
        rng,
        shape,
        events: events.clone(),
        gates: Vec::new(),
        heights: Vec::new(),
    };
    // children are generated before the gate is pushed, so names are unique
    let kind = gen.gate_kind(1);
    let top = format!("g{}", gen.gates.len());
    gen.push(&top, kind);
    debug_assert!(gen.heights.iter().all(|&h| h <= shape.max_depth));
    let gates = std::mem::take(&mut gen.gates);
    let models: Vec<(EventId, LifetimeModel)> = events
        .iter()
        .map(|e| {
            let m = if fixed_probs {
                LifetimeModel::fixed(gen.rng.gen_range(0.0..=1.0)).unwrap()
            } else {
                random_model(gen.rng)
            };
            (id(e), m)
        })
        .collect();
    FaultTree::new(models, gates, id(&top)).expect("generator builds valid trees")
}

pub fn coherent_shape() -> TreeShape {
    TreeShape {
        max_events: 12,
        max_depth: 5,
        coherent: true,
    }
}

pub fn general_shape() -> TreeShape {
    TreeShape {
        max_events: 10,
        max_depth: 4,
        coherent: false,
    }
}

pub fn random_assignment<R: Rng>(rng: &mut R, tree: &FaultTree) -> ProbAssignment {
    let mut a = ProbAssignment::new();
    for (id, _) in tree.events() {
        a.insert(id.clone(), rng.gen_range(0.0..=1.0)).unwrap();
    }
    a
}

/// State with exactly the listed events failed.
pub fn only(tree: &FaultTree, failed: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut s = vec![false; tree.event_count()];
    for i in failed {
        s[i] = true;
    }
    s
}
