//! Seeded generators for random timed automata and HDTA, used by the
//! agreement checks, the property tests and the benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clocks::{Atom, ClockConstraint, ClockId, ClockSet, Relation};
use crate::convert::{TaEdge, TimedAutomaton};
use crate::hdta::{CubeSpec, HdtaModel};
use crate::precubical::Multiset;

const ACTIONS: [&str; 3] = ["a", "b", "c"];
const RELATIONS: [Relation; 4] = [Relation::Lt, Relation::Le, Relation::Ge, Relation::Gt];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaShape {
    pub max_clocks: usize,
    pub max_locations: usize,
    pub max_edges: usize,
    pub max_constant: i64,
}

impl Default for TaShape {
    fn default() -> Self {
        TaShape {
            max_clocks: 2,
            max_locations: 6,
            max_edges: 10,
            max_constant: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HdtaShape {
    pub max_clocks: usize,
    pub max_cubes: usize,
    pub max_constant: i64,
}

impl Default for HdtaShape {
    fn default() -> Self {
        HdtaShape {
            max_clocks: 2,
            max_cubes: 12,
            max_constant: 5,
        }
    }
}

fn clock_set(rng: &mut ChaCha8Rng, max: usize, prefix: &str) -> ClockSet {
    let n = rng.gen_range(1..=max.max(1));
    ClockSet::new((0..n).map(|i| format!("{prefix}{}", ["x", "y", "z", "w"][i % 4])))
        .expect("distinct generated names")
}

/// Zero to two single-clock atoms; true about a third of the time.
fn constraint(rng: &mut ChaCha8Rng, clocks: &ClockSet, kmax: i64) -> ClockConstraint {
    let atoms = match rng.gen_range(0..6) {
        0 | 1 => 0,
        2..=4 => 1,
        _ => 2,
    };
    let atoms = (0..atoms)
        .map(|_| {
            let c = ClockId(rng.gen_range(1..=clocks.len()) as u16);
            let rel = *RELATIONS.choose(rng).expect("non-empty");
            Atom::single(c, rel, rng.gen_range(0..=kmax)).expect("in range")
        })
        .collect();
    ClockConstraint::new(atoms, clocks).expect("declared clocks")
}

fn clock_subset(rng: &mut ChaCha8Rng, clocks: &ClockSet) -> Vec<ClockId> {
    clocks.ids().filter(|_| rng.gen_bool(0.4)).collect()
}

/// Random timed automaton with locations `q0..` (initial `q0`) and edges
/// `e0..`; one or two final locations.
pub fn random_ta(seed: u64, shape: TaShape) -> TimedAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clocks = clock_set(&mut rng, shape.max_clocks, "");
    let n = rng.gen_range(2..=shape.max_locations.max(2));
    let locations: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let invariants = (0..n)
        .map(|i| {
            if i == 0 || rng.gen_bool(0.5) {
                ClockConstraint::truth()
            } else {
                constraint(&mut rng, &clocks, shape.max_constant)
            }
        })
        .collect();
    let m = rng.gen_range(1..=shape.max_edges.max(1));
    let edges = (0..m)
        .map(|i| TaEdge {
            name: format!("e{i}"),
            source: rng.gen_range(0..n),
            guard: constraint(&mut rng, &clocks, shape.max_constant),
            action: ACTIONS[rng.gen_range(0..2)].to_string(),
            resets: clock_subset(&mut rng, &clocks),
            target: rng.gen_range(0..n),
        })
        .collect();
    let mut finals = BTreeSet::from([rng.gen_range(1..n)]);
    if rng.gen_bool(0.3) {
        finals.insert(rng.gen_range(1..n));
    }
    TimedAutomaton::new(
        clocks,
        ACTIONS[..2].iter().map(|s| s.to_string()).collect(),
        locations,
        invariants,
        0,
        finals,
        edges,
    )
    .expect("generated automaton is well formed")
}

struct Builder {
    cubes: Vec<CubeSpec>,
    /// (name, source, target, action) per 1-cube
    edges: Vec<(String, usize, usize, String)>,
    states: usize,
}

impl Builder {
    fn edge(&mut self, from: usize, to: usize, action: &str) -> usize {
        let name = format!("t{}", self.edges.len());
        self.edges
            .push((name.clone(), from, to, action.to_string()));
        self.cubes.push(CubeSpec {
            name,
            lower: vec![format!("s{from}")],
            upper: vec![format!("s{to}")],
            label: Multiset::singleton(action),
            inv: ClockConstraint::truth(),
            exit: vec![],
        });
        self.edges.len() - 1
    }

    fn find_edge(&self, from: usize, to: usize, action: &str) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| e.1 == from && e.2 == to && e.3 == action)
    }
}

/// Random HDTA of dimension at most 2 with states `s0..` (initial `s0`),
/// edges `t0..` and squares `u0..`. Squares are glued on pairs of edges
/// leaving a common state; the closing edges are reused when present.
pub fn random_hdta(seed: u64, shape: HdtaShape) -> HdtaModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clocks = clock_set(&mut rng, shape.max_clocks, "");
    let budget = shape.max_cubes.max(3);
    let states = rng.gen_range(2..=(budget / 2).clamp(2, 5));
    let mut b = Builder {
        cubes: (0..states)
            .map(|i| CubeSpec {
                name: format!("s{i}"),
                lower: vec![],
                upper: vec![],
                label: Multiset::new(),
                inv: ClockConstraint::truth(),
                exit: vec![],
            })
            .collect(),
        edges: Vec::new(),
        states,
    };
    let edges = rng.gen_range(1..=(budget - states).min(6));
    for _ in 0..edges {
        let (s, t) = (rng.gen_range(0..states), rng.gen_range(0..states));
        b.edge(s, t, ACTIONS[rng.gen_range(0..2)]);
    }
    let mut squares = 0;
    for _ in 0..rng.gen_range(0..=2) {
        let n = b.edges.len();
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || b.edges[i].1 != b.edges[j].1 {
            continue;
        }
        let (ti, tj) = (b.edges[i].2, b.edges[j].2);
        let (ai, aj) = (b.edges[i].3.clone(), b.edges[j].3.clone());
        let f = rng.gen_range(0..b.states);
        // closing edges: tj --ai--> f and ti --aj--> f
        let need = [b.find_edge(tj, f, &ai), b.find_edge(ti, f, &aj)]
            .iter()
            .filter(|e| e.is_none())
            .count();
        if b.cubes.len() + need + 1 > budget {
            continue;
        }
        let up1 = b
            .find_edge(tj, f, &ai)
            .unwrap_or_else(|| b.edge(tj, f, &ai));
        let up2 = b
            .find_edge(ti, f, &aj)
            .unwrap_or_else(|| b.edge(ti, f, &aj));
        let name = |e: usize| b.edges[e].0.clone();
        let cube = CubeSpec {
            name: format!("u{squares}"),
            lower: vec![name(i), name(j)],
            upper: vec![name(up1), name(up2)],
            label: [ai.as_str(), aj.as_str()].into_iter().collect(),
            inv: ClockConstraint::truth(),
            exit: vec![],
        };
        b.cubes.push(cube);
        squares += 1;
    }
    for (idx, c) in b.cubes.iter_mut().enumerate() {
        if idx != 0 || rng.gen_bool(0.2) {
            c.inv = constraint(&mut rng, &clocks, shape.max_constant);
        }
        c.exit = clock_subset(&mut rng, &clocks);
    }
    let mut finals = vec![format!("s{}", rng.gen_range(1..states))];
    if rng.gen_bool(0.3) {
        finals.push(format!("s{}", rng.gen_range(0..states)));
    }
    finals.sort();
    finals.dedup();
    HdtaModel::assemble(
        clocks,
        ACTIONS[..2].iter().map(|s| s.to_string()).collect(),
        b.cubes,
        "s0",
        &finals,
    )
    .expect("generated model is valid")
}

/// Random HDTA whose clock names all start with `prefix`, so that several
/// can be tensored without collisions.
pub fn random_hdta_with_clock_prefix(seed: u64, shape: HdtaShape, prefix: &str) -> HdtaModel {
    let m = random_hdta(seed, shape);
    let clocks = ClockSet::new(m.clocks().names().iter().map(|n| format!("{prefix}{n}")))
        .expect("prefixed names are valid");
    HdtaModel::assemble(
        clocks,
        m.hda().alphabet.clone(),
        m.to_specs(),
        m.name(m.initial()),
        &m.final_names(),
    )
    .expect("renaming clocks keeps validity")
}
