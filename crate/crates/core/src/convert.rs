//! Classical timed automata, their zone-based reachability check, and the
//! conversions between timed automata and HDTA.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::clocks::{
    Atom, ClockConstraint, ClockError, ClockId, ClockSet, Relation, Zone, URGENT_CLOCK,
};
use crate::hdta::{CubeSpec, HdtaModel, ModelError, ReachStats};
use crate::precubical::{Multiset, Side};

/// Location, zone, and the (parent, edge) it was reached through.
type TaNode = (usize, Zone, Option<(usize, usize)>);

/// Silent action on the edges that enter an unfolded cube.
pub const SILENT_ACTION: &str = "__tau";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaEdge {
    pub name: String,
    pub source: usize,
    pub guard: ClockConstraint,
    pub action: String,
    pub resets: Vec<ClockId>,
    pub target: usize,
}

/// A timed automaton with location invariants and guarded, resetting edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedAutomaton {
    pub clocks: ClockSet,
    pub alphabet: BTreeSet<String>,
    pub locations: Vec<String>,
    pub invariants: Vec<ClockConstraint>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub edges: Vec<TaEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaError {
    #[error("no locations")]
    NoLocations,
    #[error("duplicate location `{0}`")]
    DuplicateLocation(String),
    #[error("expected {expected} invariants, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("location index {0} out of range")]
    LocationOutOfRange(usize),
    #[error("edge `{name}` refers to location index {index} out of range")]
    EdgeEndpoint {
        edge: usize,
        name: String,
        index: usize,
    },
    #[error("edge `{name}` uses undeclared action `{action}`")]
    UndeclaredAction {
        edge: usize,
        name: String,
        action: String,
    },
    #[error("edge `{name}`: {error}")]
    EdgeClock {
        edge: usize,
        name: String,
        error: ClockError,
    },
    #[error("location `{name}`: {error}")]
    LocationClock { name: String, error: ClockError },
}

impl TaError {
    /// Index of the offending edge, if the error concerns one.
    pub fn edge_index(&self) -> Option<usize> {
        match self {
            TaError::EdgeEndpoint { edge, .. }
            | TaError::UndeclaredAction { edge, .. }
            | TaError::EdgeClock { edge, .. } => Some(*edge),
            _ => None,
        }
    }
}

fn check_constraint(phi: &ClockConstraint, clocks: &ClockSet) -> Result<(), ClockError> {
    for a in phi.atoms() {
        if a.is_diagonal() {
            return Err(ClockError::DiagonalAtom(a.render(clocks)));
        }
        clocks.check(a.left)?;
    }
    Ok(())
}

impl TimedAutomaton {
    pub fn new(
        clocks: ClockSet,
        alphabet: BTreeSet<String>,
        locations: Vec<String>,
        invariants: Vec<ClockConstraint>,
        initial: usize,
        finals: BTreeSet<usize>,
        mut edges: Vec<TaEdge>,
    ) -> Result<Self, TaError> {
        if locations.is_empty() {
            return Err(TaError::NoLocations);
        }
        if invariants.len() != locations.len() {
            return Err(TaError::Arity {
                expected: locations.len(),
                got: invariants.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for l in &locations {
            if !seen.insert(l) {
                return Err(TaError::DuplicateLocation(l.clone()));
            }
        }
        let n = locations.len();
        if let Some(&bad) = std::iter::once(&initial).chain(&finals).find(|&&i| i >= n) {
            return Err(TaError::LocationOutOfRange(bad));
        }
        for (name, inv) in locations.iter().zip(&invariants) {
            check_constraint(inv, &clocks).map_err(|error| TaError::LocationClock {
                name: name.clone(),
                error,
            })?;
        }
        for (i, e) in edges.iter_mut().enumerate() {
            for index in [e.source, e.target] {
                if index >= n {
                    return Err(TaError::EdgeEndpoint {
                        edge: i,
                        name: e.name.clone(),
                        index,
                    });
                }
            }
            if !alphabet.contains(&e.action) {
                return Err(TaError::UndeclaredAction {
                    edge: i,
                    name: e.name.clone(),
                    action: e.action.clone(),
                });
            }
            let clock_err = |error| TaError::EdgeClock {
                edge: i,
                name: e.name.clone(),
                error,
            };
            check_constraint(&e.guard, &clocks).map_err(clock_err)?;
            for &c in &e.resets {
                clocks.check(c).map_err(|error| TaError::EdgeClock {
                    edge: i,
                    name: e.name.clone(),
                    error,
                })?;
            }
            e.resets.sort();
            e.resets.dedup();
        }
        Ok(TimedAutomaton {
            clocks,
            alphabet,
            locations,
            invariants,
            initial,
            finals,
            edges,
        })
    }

    /// Per-clock maximal constant over guards and invariants, indexed by clock id.
    pub fn max_constants(&self) -> Vec<i64> {
        let mut k = vec![0; self.clocks.dbm_dim()];
        for inv in &self.invariants {
            inv.max_constants_into(&mut k);
        }
        for e in &self.edges {
            e.guard.max_constants_into(&mut k);
        }
        k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("clock name `{0}` is reserved for the conversion")]
    ReservedClock(String),
    #[error("name `{0}` is used by both a location and an edge")]
    NameCollision(String),
    #[error(
        "cube `{cube}` has dimension {dim}; only dimension <= 1 converts to a timed automaton"
    )]
    DimensionTooHigh { cube: String, dim: usize },
    #[error("clock `{0}` is declared by more than one component")]
    SharedClock(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ta(#[from] TaError),
    #[error(transparent)]
    Clock(#[from] ClockError),
}

/// One-dimensional HDTA with the same reachable locations: locations become
/// 0-cubes that reset a fresh clock on exit, edges become 1-cubes whose
/// invariant is the guard plus "fresh clock <= 0".
pub fn ta_to_1dta(ta: &TimedAutomaton) -> Result<HdtaModel, ConvertError> {
    if ta.clocks.contains(URGENT_CLOCK) {
        return Err(ConvertError::ReservedClock(URGENT_CLOCK.to_string()));
    }
    let locs: BTreeSet<&str> = ta.locations.iter().map(String::as_str).collect();
    if let Some(e) = ta.edges.iter().find(|e| locs.contains(e.name.as_str())) {
        return Err(ConvertError::NameCollision(e.name.clone()));
    }
    let mut clocks = ta.clocks.clone();
    let urgent = clocks.push(URGENT_CLOCK.to_string())?;
    let stay = ClockConstraint::new(vec![Atom::single(urgent, Relation::Le, 0)?], &clocks)?;
    let mut cubes = Vec::with_capacity(ta.locations.len() + ta.edges.len());
    for (name, inv) in ta.locations.iter().zip(&ta.invariants) {
        cubes.push(CubeSpec {
            name: name.clone(),
            lower: vec![],
            upper: vec![],
            label: Multiset::new(),
            inv: inv.clone(),
            exit: vec![urgent],
        });
    }
    for e in &ta.edges {
        cubes.push(CubeSpec {
            name: e.name.clone(),
            lower: vec![ta.locations[e.source].clone()],
            upper: vec![ta.locations[e.target].clone()],
            label: Multiset::singleton(e.action.clone()),
            inv: e.guard.and(&stay),
            exit: e.resets.clone(),
        });
    }
    let finals: Vec<String> = ta.finals.iter().map(|&f| ta.locations[f].clone()).collect();
    Ok(HdtaModel::assemble(
        clocks,
        ta.alphabet.clone(),
        cubes,
        &ta.locations[ta.initial],
        &finals,
    )?)
}

/// Timed automaton over the same clocks whose locations are all cubes of the
/// model: a silent edge enters each cube from each lower face, and an edge
/// labeled with the terminated event leaves it through each upper face.
/// Reachability of final cubes is preserved for any dimension.
pub fn unfold_to_ta(model: &HdtaModel) -> TimedAutomaton {
    let sp = model.space();
    let mut alphabet = model.hda().alphabet.clone();
    alphabet.insert(SILENT_ACTION.to_string());
    let mut edges = Vec::new();
    for x in sp.ids() {
        for k in 1..=sp.dim(x) {
            let lo = sp.face(x, k, Side::Lower);
            edges.push(TaEdge {
                name: format!("{}.s{k}", sp.name(x)),
                source: lo.index(),
                guard: ClockConstraint::truth(),
                action: SILENT_ACTION.to_string(),
                resets: model.exit(lo).to_vec(),
                target: x.index(),
            });
        }
        for k in 1..=sp.dim(x) {
            let action = model
                .hda()
                .terminated_event(x, k)
                .expect("validated labeling")
                .to_string();
            edges.push(TaEdge {
                name: format!("{}.f{k}", sp.name(x)),
                source: x.index(),
                guard: ClockConstraint::truth(),
                action,
                resets: model.exit(x).to_vec(),
                target: sp.face(x, k, Side::Upper).index(),
            });
        }
    }
    TimedAutomaton {
        clocks: model.clocks().clone(),
        alphabet,
        locations: sp.ids().map(|x| sp.name(x).to_string()).collect(),
        invariants: sp.ids().map(|x| model.inv(x).clone()).collect(),
        initial: model.initial().index(),
        finals: model.hda().finals.iter().map(|f| f.index()).collect(),
        edges,
    }
}

/// [`unfold_to_ta`] restricted to models of dimension at most 1.
pub fn one_dta_to_ta(model: &HdtaModel) -> Result<TimedAutomaton, ConvertError> {
    if let Some(x) = model.space().ids().find(|&x| model.space().dim(x) > 1) {
        return Err(ConvertError::DimensionTooHigh {
            cube: model.name(x).to_string(),
            dim: model.space().dim(x),
        });
    }
    Ok(unfold_to_ta(model))
}

#[derive(Debug, Clone, Default)]
pub struct TaReach {
    pub reachable: bool,
    /// Edge indices of a path to a final location.
    pub path: Vec<usize>,
    pub stats: ReachStats,
}

/// Classical zone-graph reachability: successor `((Z ∩ g)[r] ∩ I')↑ ∩ I'`
/// with extrapolation and inclusion subsumption.
pub fn ta_zone_reach(ta: &TimedAutomaton) -> TaReach {
    let n = ta.clocks.len();
    let k = ta.max_constants();
    let mut out = TaReach::default();
    let inv = |l: usize| ta.invariants[l].atoms();
    let z0 = Zone::origin(n).constrained(inv(ta.initial));
    if z0.is_empty() {
        return out;
    }
    let z0 = z0.up().constrained(inv(ta.initial)).normalize(&k);
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); ta.locations.len()];
    for (i, e) in ta.edges.iter().enumerate() {
        out_edges[e.source].push(i);
    }
    let mut nodes: Vec<TaNode> = vec![(ta.initial, z0, None)];
    let mut passed: HashMap<usize, Vec<usize>> = HashMap::from([(ta.initial, vec![0])]);
    let mut waiting = VecDeque::from([0usize]);
    let mut goal = ta.finals.contains(&ta.initial).then_some(0);
    out.stats.peak_waiting = 1;
    while goal.is_none() {
        let Some(cur) = waiting.pop_front() else {
            break;
        };
        out.stats.explored += 1;
        for &ei in &out_edges[nodes[cur].0] {
            let e = &ta.edges[ei];
            let entered = nodes[cur]
                .1
                .constrained(e.guard.atoms())
                .reset(&e.resets)
                .constrained(inv(e.target));
            if entered.is_empty() {
                continue;
            }
            let z = entered.up().constrained(inv(e.target)).normalize(&k);
            let stored = passed.entry(e.target).or_default();
            if stored.iter().any(|&i| nodes[i].1.includes(&z)) {
                out.stats.subsumed += 1;
                continue;
            }
            let idx = nodes.len();
            stored.push(idx);
            nodes.push((e.target, z, Some((cur, ei))));
            if ta.finals.contains(&e.target) {
                goal = Some(idx);
                break;
            }
            waiting.push_back(idx);
        }
        out.stats.peak_waiting = out.stats.peak_waiting.max(waiting.len());
    }
    out.stats.stored = nodes.len();
    if let Some(g) = goal {
        out.reachable = true;
        let mut at = g;
        while let Some((p, e)) = nodes[at].2 {
            out.path.push(e);
            at = p;
        }
        out.path.reverse();
    }
    out
}

/// Interleaving product of timed automata over disjoint clock sets. Only
/// location tuples reachable in the untimed product graph are built; a
/// tuple is final when every component is.
pub fn interleave(components: &[TimedAutomaton]) -> Result<TimedAutomaton, ConvertError> {
    let mut clocks = ClockSet::default();
    // clock id remapping per component, indexed by old id
    let mut maps: Vec<Vec<ClockId>> = Vec::new();
    let mut alphabet = BTreeSet::new();
    for ta in components {
        let mut map = vec![ClockId::REFERENCE];
        for name in ta.clocks.names() {
            if clocks.contains(name) {
                return Err(ConvertError::SharedClock(name.clone()));
            }
            map.push(clocks.push(name.clone())?);
        }
        maps.push(map);
        alphabet.extend(ta.alphabet.iter().cloned());
    }
    let out_edges: Vec<Vec<Vec<usize>>> = components
        .iter()
        .map(|ta| {
            let mut o = vec![Vec::new(); ta.locations.len()];
            for (i, e) in ta.edges.iter().enumerate() {
                o[e.source].push(i);
            }
            o
        })
        .collect();
    let start: Vec<usize> = components.iter().map(|ta| ta.initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut tuples = vec![start];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        let tuple = tuples[cur].clone();
        for (c, ta) in components.iter().enumerate() {
            for &ei in &out_edges[c][tuple[c]] {
                let e = &ta.edges[ei];
                let mut next = tuple.clone();
                next[c] = e.target;
                let target = *index.entry(next.clone()).or_insert_with(|| {
                    tuples.push(next);
                    queue.push_back(tuples.len() - 1);
                    tuples.len() - 1
                });
                edges.push(TaEdge {
                    name: format!("{}@{}", e.name, cur),
                    source: cur,
                    guard: e.guard.map_clocks(&maps[c]),
                    action: e.action.clone(),
                    resets: e.resets.iter().map(|r| maps[c][r.index()]).collect(),
                    target,
                });
            }
        }
    }
    let locations: Vec<String> = tuples
        .iter()
        .map(|t| {
            t.iter()
                .zip(components)
                .map(|(&l, ta)| ta.locations[l].as_str())
                .collect::<Vec<_>>()
                .join("*")
        })
        .collect();
    let invariants: Vec<ClockConstraint> = tuples
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .fold(ClockConstraint::truth(), |acc, (c, &l)| {
                    acc.and(&components[c].invariants[l].map_clocks(&maps[c]))
                })
        })
        .collect();
    let finals: BTreeSet<usize> = tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            t.iter()
                .enumerate()
                .all(|(c, l)| components[c].finals.contains(l))
        })
        .map(|(i, _)| i)
        .collect();
    Ok(TimedAutomaton::new(
        clocks, alphabet, locations, invariants, 0, finals, edges,
    )?)
}
