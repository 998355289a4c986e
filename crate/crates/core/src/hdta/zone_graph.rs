use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{witness_along, HdtaModel, Move, Run};
use crate::clocks::Zone;
use crate::precubical::CubeId;

/// How a discrete move transforms a zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SuccessorRule {
    /// `((Z[r] ∩ I') ↑) ∩ I'`: the reset valuation must satisfy the target
    /// invariant on entry, matching the concrete semantics.
    #[default]
    Exact,
    /// `(Z[r] ↑) ∩ I'`: no entry check, so valuations that only satisfy the
    /// target invariant after some delay are admitted as well.
    OverApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZoneOptions {
    pub rule: SuccessorRule,
    /// Discard a new state when a stored zone at the same cube includes it.
    /// With this off only exact duplicates are discarded.
    pub subsumption: bool,
    /// Extrapolate zones with the per-clock maximal constants.
    pub normalize: bool,
    /// Record every stored state for tracing.
    pub record: bool,
    /// Enumerate successors in reverse order (for order-independence checks).
    pub reverse_order: bool,
}

impl Default for ZoneOptions {
    fn default() -> Self {
        ZoneOptions {
            rule: SuccessorRule::Exact,
            subsumption: true,
            normalize: true,
            record: false,
            reverse_order: false,
        }
    }
}

/// A cube with a zone contained in its invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicState {
    pub cube: CubeId,
    pub zone: Zone,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReachStats {
    /// States taken from the waiting list and expanded.
    pub explored: usize,
    /// States kept in the passed list (including the initial state).
    pub stored: usize,
    /// Candidates discarded by inclusion or equality.
    pub subsumed: usize,
    pub peak_waiting: usize,
}

/// One stored state, for JSON-lines traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub index: usize,
    pub parent: Option<usize>,
    #[serde(rename = "move")]
    pub via: Option<String>,
    pub cube: String,
    pub state: String,
}

/// One JSON object per line.
pub fn trace_json_lines(trace: &[TraceEntry]) -> String {
    trace
        .iter()
        .map(|e| serde_json::to_string(e).expect("plain fields serialize") + "\n")
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct ReachResult {
    pub reachable: bool,
    /// A concrete run to a final cube, validated by replay. Absent when
    /// unreachable, or when an over-approximating rule found a spurious path.
    pub witness: Option<Run>,
    /// Discrete moves of the symbolic path to the final state.
    pub path: Vec<Move>,
    pub stats: ReachStats,
    pub trace: Vec<TraceEntry>,
}

pub(crate) struct ZoneEngine<'a> {
    model: &'a HdtaModel,
    opts: ZoneOptions,
    k: Vec<i64>,
}

impl<'a> ZoneEngine<'a> {
    pub(crate) fn new(model: &'a HdtaModel, opts: ZoneOptions) -> Self {
        ZoneEngine {
            model,
            opts,
            k: model.max_constants(),
        }
    }

    fn finish_zone(&self, z: Zone) -> Zone {
        if self.opts.normalize {
            z.normalize(&self.k)
        } else {
            z
        }
    }

    pub(crate) fn initial(&self) -> Option<SymbolicState> {
        let m = self.model;
        let l0 = m.initial();
        let inv = m.inv(l0).atoms();
        let n = m.clocks().len();
        let start = match self.opts.rule {
            SuccessorRule::Exact => Zone::origin(n).constrained(inv),
            SuccessorRule::OverApprox => Zone::origin(n),
        };
        let zone = start.up().constrained(inv);
        (!zone.is_empty()).then(|| SymbolicState {
            cube: l0,
            zone: self.finish_zone(zone),
        })
    }

    pub(crate) fn successors(&self, s: &SymbolicState) -> Vec<(Move, SymbolicState)> {
        let m = self.model;
        let mut out = Vec::new();
        for mv in m.moves(s.cube) {
            let to = mv.target();
            let inv = m.inv(to).atoms();
            let reset = s.zone.reset(m.resets(mv));
            let entered = match self.opts.rule {
                SuccessorRule::Exact => reset.constrained(inv),
                SuccessorRule::OverApprox => reset,
            };
            if entered.is_empty() {
                continue;
            }
            let zone = entered.up().constrained(inv);
            if zone.is_empty() {
                continue;
            }
            out.push((
                mv,
                SymbolicState {
                    cube: to,
                    zone: self.finish_zone(zone),
                },
            ));
        }
        if self.opts.reverse_order {
            out.reverse();
        }
        out
    }

    fn trace_entry(
        &self,
        index: usize,
        parent: Option<(usize, Move)>,
        s: &SymbolicState,
    ) -> TraceEntry {
        TraceEntry {
            index,
            parent: parent.map(|p| p.0),
            via: parent.map(|p| p.1.to_string()),
            cube: self.model.name(s.cube).to_string(),
            state: s.zone.render(self.model.clocks()),
        }
    }
}

/// Successors of `s` under the given options, one per enabled move.
pub fn zone_successors(
    model: &HdtaModel,
    s: &SymbolicState,
    opts: ZoneOptions,
) -> Vec<(Move, SymbolicState)> {
    ZoneEngine::new(model, opts).successors(s)
}

struct Node {
    state: SymbolicState,
    parent: Option<(usize, Move)>,
}

/// Breadth-first zone-graph exploration with a passed/waiting list; stops at
/// the first state whose cube is final.
pub fn zone_reach(model: &HdtaModel, opts: ZoneOptions) -> ReachResult {
    let engine = ZoneEngine::new(model, opts);
    let mut result = ReachResult::default();
    let Some(init) = engine.initial() else {
        return result;
    };
    let mut nodes = vec![Node {
        state: init,
        parent: None,
    }];
    let mut passed: HashMap<CubeId, Vec<usize>> = HashMap::new();
    passed.entry(nodes[0].state.cube).or_default().push(0);
    if opts.record {
        result
            .trace
            .push(engine.trace_entry(0, None, &nodes[0].state));
    }
    let mut waiting = VecDeque::from([0usize]);
    let mut goal = model.is_final(nodes[0].state.cube).then_some(0);
    result.stats.peak_waiting = 1;

    while goal.is_none() {
        let Some(cur) = waiting.pop_front() else {
            break;
        };
        result.stats.explored += 1;
        let succs = engine.successors(&nodes[cur].state);
        for (mv, next) in succs {
            let stored = passed.entry(next.cube).or_default();
            let covered = stored.iter().any(|&i| {
                let z = &nodes[i].state.zone;
                if opts.subsumption {
                    z.includes(&next.zone)
                } else {
                    *z == next.zone
                }
            });
            if covered {
                result.stats.subsumed += 1;
                continue;
            }
            let idx = nodes.len();
            stored.push(idx);
            if opts.record {
                result
                    .trace
                    .push(engine.trace_entry(idx, Some((cur, mv)), &next));
            }
            let is_goal = model.is_final(next.cube);
            nodes.push(Node {
                state: next,
                parent: Some((cur, mv)),
            });
            if is_goal {
                goal = Some(idx);
                break;
            }
            waiting.push_back(idx);
        }
        result.stats.peak_waiting = result.stats.peak_waiting.max(waiting.len());
    }
    result.stats.stored = nodes.len();

    if let Some(g) = goal {
        result.reachable = true;
        let mut path = Vec::new();
        let mut at = g;
        while let Some((p, mv)) = nodes[at].parent {
            path.push(mv);
            at = p;
        }
        path.reverse();
        let witness = witness_along(model, &path, None);
        if opts.rule == SuccessorRule::Exact {
            assert!(
                witness.as_ref().is_some_and(|w| w.accepts(model)),
                "exact zone path without a concrete witness"
            );
        }
        result.witness = witness;
        result.path = path;
    }
    result
}

/// The full zone graph: every reachable symbolic state, deduplicated by
/// zone equality so that the result does not depend on exploration order.
#[derive(Debug, Clone, Default)]
pub struct ZoneGraph {
    /// States in discovery order; index 0 is the initial state.
    pub nodes: Vec<SymbolicState>,
    pub edges: Vec<(usize, Move, usize)>,
}

impl ZoneGraph {
    pub fn zones_at(&self, cube: CubeId) -> impl Iterator<Item = &Zone> + '_ {
        self.nodes
            .iter()
            .filter(move |s| s.cube == cube)
            .map(|s| &s.zone)
    }

    /// The path of moves to `target` along discovery edges.
    pub fn path_to(&self, target: usize) -> Vec<Move> {
        let mut parent: Vec<Option<(usize, Move)>> = vec![None; self.nodes.len()];
        for &(a, mv, b) in &self.edges {
            if b != 0 && parent[b].is_none() && a < b {
                parent[b] = Some((a, mv));
            }
        }
        let mut path = Vec::new();
        let mut at = target;
        while let Some((p, mv)) = parent[at] {
            path.push(mv);
            at = p;
        }
        path.reverse();
        path
    }
}

pub fn zone_graph_export(model: &HdtaModel, opts: ZoneOptions) -> ZoneGraph {
    let engine = ZoneEngine::new(model, opts);
    let mut graph = ZoneGraph::default();
    let Some(init) = engine.initial() else {
        return graph;
    };
    let mut index: HashMap<SymbolicState, usize> = HashMap::new();
    index.insert(init.clone(), 0);
    graph.nodes.push(init);
    let mut waiting = VecDeque::from([0usize]);
    while let Some(cur) = waiting.pop_front() {
        for (mv, next) in engine.successors(&graph.nodes[cur]) {
            let target = match index.get(&next) {
                Some(&i) => i,
                None => {
                    let i = graph.nodes.len();
                    index.insert(next.clone(), i);
                    graph.nodes.push(next);
                    waiting.push_back(i);
                    i
                }
            };
            graph.edges.push((cur, mv, target));
        }
    }
    graph
}
