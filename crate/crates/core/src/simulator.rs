//! Single-packet forwarding simulation over functional graphs.
//!
//! Every node has at most one next hop, which models a per-destination
//! forwarding table. A packet is originated at a start node and handed from
//! successor to successor, running [`receive_packet`] at each node.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::protocol::{initialize_packet, receive_packet, HopCount, NodeId, ReceiveOutcome};
use crate::reference::CycleStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("expected {expected} node ids, got {actual}")]
    BadArity { expected: usize, actual: usize },
    #[error("node index {index} out of range for {len} nodes")]
    BadIndex { index: usize, len: usize },
    #[error("duplicate positions must differ (both {0})")]
    SamePosition(usize),
    #[error("cycle length must be at least 1")]
    EmptyCycle,
}

/// A graph where every node has exactly one successor entry; `None` marks a
/// node whose packets leave the network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionalGraph {
    ids: Vec<NodeId>,
    succ: Vec<Option<usize>>,
}

impl FunctionalGraph {
    pub fn new(ids: Vec<NodeId>, succ: Vec<Option<usize>>) -> Result<Self, SimError> {
        if ids.len() != succ.len() {
            return Err(SimError::BadArity {
                expected: succ.len(),
                actual: ids.len(),
            });
        }
        let len = succ.len();
        if let Some(&index) = succ.iter().flatten().find(|&&s| s >= len) {
            return Err(SimError::BadIndex { index, len });
        }
        Ok(Self { ids, succ })
    }

    /// A loop-free path `0 -> 1 -> ... -> n-1 -> terminal`.
    pub fn chain(ids: Vec<NodeId>) -> Self {
        let n = ids.len();
        let succ = (0..n).map(|i| (i + 1 < n).then_some(i + 1)).collect();
        Self { ids, succ }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub fn successor(&self, index: usize) -> Option<usize> {
        self.succ[index]
    }

    pub fn successors(&self) -> &[Option<usize>] {
        &self.succ
    }

    /// Same topology with new node ids.
    pub fn relabel(&self, ids: Vec<NodeId>) -> Result<Self, SimError> {
        Self::new(ids, self.succ.clone())
    }

    /// Default hop budget for simulating this graph, well above the
    /// worst-case detection hop.
    pub fn default_max_hops(&self) -> usize {
        4 * (self.len() + 1)
    }
}

/// Where rho-shaped graphs get their node ids from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdSource {
    Explicit(Vec<NodeId>),
    /// Distinct ids drawn from a seeded generator.
    Seeded(u64),
}

/// Draws `n` pairwise distinct 64-bit ids.
pub fn distinct_ids<R: Rng>(rng: &mut R, n: usize) -> Vec<NodeId> {
    let mut seen = HashSet::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    while ids.len() < n {
        let id: u64 = rng.gen();
        if seen.insert(id) {
            ids.push(NodeId(id));
        }
    }
    ids
}

/// Builds a tail of `mu` nodes feeding a cycle of `lambda` nodes. Node `i`
/// is the `i`-th element of the walk starting at node 0.
pub fn build_rho(mu: usize, lambda: usize, ids: IdSource) -> Result<FunctionalGraph, SimError> {
    if lambda == 0 {
        return Err(SimError::EmptyCycle);
    }
    let n = mu + lambda;
    let ids = match ids {
        IdSource::Explicit(ids) => {
            if ids.len() != n {
                return Err(SimError::BadArity {
                    expected: n,
                    actual: ids.len(),
                });
            }
            ids
        }
        IdSource::Seeded(seed) => distinct_ids(&mut ChaCha8Rng::seed_from_u64(seed), n),
    };
    let succ = (0..n)
        .map(|i| Some(if i + 1 == n { mu } else { i + 1 }))
        .collect();
    Ok(FunctionalGraph { ids, succ })
}

/// Builds the rho graph matching a cycle structure.
pub fn build_rho_for(
    structure: CycleStructure,
    ids: IdSource,
) -> Result<FunctionalGraph, SimError> {
    build_rho(structure.mu(), structure.lambda(), ids)
}

/// Uniformly random successor per node, each independently replaced by a
/// terminal with probability `terminal_prob`. Node ids are distinct.
pub fn random_functional_graph(n: usize, terminal_prob: f64, seed: u64) -> FunctionalGraph {
    assert!(n >= 1, "graph needs at least one node");
    assert!(
        (0.0..=1.0).contains(&terminal_prob),
        "terminal_prob must be a probability"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = distinct_ids(&mut rng, n);
    let succ = (0..n)
        .map(|_| {
            let target = rng.gen_range(0..n);
            (!rng.gen_bool(terminal_prob)).then_some(target)
        })
        .collect();
    FunctionalGraph { ids, succ }
}

/// Copy of `graph` where node `position_b` takes node `position_a`'s id.
pub fn inject_duplicate(
    graph: &FunctionalGraph,
    position_a: usize,
    position_b: usize,
) -> Result<FunctionalGraph, SimError> {
    let len = graph.len();
    for index in [position_a, position_b] {
        if index >= len {
            return Err(SimError::BadIndex { index, len });
        }
    }
    if position_a == position_b {
        return Err(SimError::SamePosition(position_a));
    }
    let mut out = graph.clone();
    out.ids[position_b] = out.ids[position_a];
    Ok(out)
}

/// Hop at which a hop-limit scheme stops a looping packet: always the full
/// budget, whatever the loop looks like.
pub fn hop_limit_baseline(_structure: CycleStructure, ttl: usize) -> usize {
    ttl
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimStep {
    pub hop: HopCount,
    pub node: NodeId,
    pub tortoise_after: NodeId,
    pub snapshot_taken: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimOutcome {
    /// The receiver at `at_hop` matched the tortoise.
    Detected {
        at_hop: u32,
    },
    /// The node at hop `at_hop - 1` has no successor; the packet leaves the
    /// graph on hop `at_hop`.
    Terminated {
        at_hop: u32,
    },
    BudgetExhausted,
    HopOverflow,
}

impl fmt::Display for SimOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimOutcome::Detected { at_hop } => write!(f, "detected@{at_hop}"),
            SimOutcome::Terminated { at_hop } => write!(f, "terminated@{at_hop}"),
            SimOutcome::BudgetExhausted => f.write_str("budget_exhausted"),
            SimOutcome::HopOverflow => f.write_str("hop_overflow"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimTrace {
    pub steps: Vec<SimStep>,
    pub outcome: SimOutcome,
}

pub const TRACE_CSV_HEADER: &str = "hop,node_id_hex,tortoise_hex,snapshot,outcome";

impl SimTrace {
    pub fn detected_at(&self) -> Option<u32> {
        match self.outcome {
            SimOutcome::Detected { at_hop } => Some(at_hop),
            _ => None,
        }
    }

    /// One row per step. The last step row carries the outcome; a packet
    /// that leaves the graph gets an extra row for its exit hop with empty
    /// node columns.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{TRACE_CSV_HEADER}")?;
        let exit_row =
            matches!(self.outcome, SimOutcome::Terminated { .. }) || self.steps.is_empty();
        for (i, step) in self.steps.iter().enumerate() {
            let last = i + 1 == self.steps.len() && !exit_row;
            writeln!(
                out,
                "{},{},{},{},{}",
                step.hop,
                step.node,
                step.tortoise_after,
                u8::from(step.snapshot_taken),
                if last {
                    self.outcome.to_string()
                } else {
                    String::new()
                }
            )?;
        }
        if exit_row {
            let hop = match self.outcome {
                SimOutcome::Terminated { at_hop } | SimOutcome::Detected { at_hop } => {
                    at_hop.to_string()
                }
                _ => String::new(),
            };
            writeln!(out, "{hop},,,,{}", self.outcome)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("trace CSV is ASCII")
    }
}

/// Originates a packet at `start` and forwards it until a loop is reported,
/// it leaves the graph, the hop counter saturates, or `max_hops` receives
/// have happened.
pub fn simulate(
    graph: &FunctionalGraph,
    start: usize,
    max_hops: usize,
) -> Result<SimTrace, SimError> {
    if start >= graph.len() {
        return Err(SimError::BadIndex {
            index: start,
            len: graph.len(),
        });
    }
    let mut header = initialize_packet(graph.id(start));
    let mut current = start;
    let mut steps = Vec::new();
    let outcome = loop {
        if steps.len() >= max_hops {
            break SimOutcome::BudgetExhausted;
        }
        current = match graph.successor(current) {
            Some(next) => next,
            None => {
                break SimOutcome::Terminated {
                    at_hop: steps.len() as u32 + 1,
                }
            }
        };
        let node = graph.id(current);
        match receive_packet(header, node) {
            Err(_) => break SimOutcome::HopOverflow,
            Ok(ReceiveOutcome::LoopDetected) => {
                let hop = HopCount(header.hops.get() + 1);
                steps.push(SimStep {
                    hop,
                    node,
                    tortoise_after: header.tortoise,
                    snapshot_taken: false,
                });
                break SimOutcome::Detected {
                    at_hop: hop.get() as u32,
                };
            }
            Ok(ReceiveOutcome::Forward(next)) => {
                steps.push(SimStep {
                    hop: next.hops,
                    node,
                    tortoise_after: next.tortoise,
                    snapshot_taken: next.hops.is_power_of_two(),
                });
                header = next;
            }
        }
    };
    Ok(SimTrace { steps, outcome })
}
