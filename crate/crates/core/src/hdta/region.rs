//! Region-graph oracle: breadth-first search over (cube, region) pairs with
//! successors computed on region representatives.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{HdtaModel, Move, ReachResult, Run, Step, TraceEntry};
use crate::clocks::{Bound, ClockId, ClockSet, Time, Valuation, Zone};
use crate::precubical::CubeId;

/// One region: integer parts up to `cmax`, overflow flags, zero-fraction
/// flags and the ordering of the remaining fractional parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    /// Integer part per clock; `None` when the clock exceeds `cmax`.
    ints: Vec<Option<u32>>,
    /// Fraction is zero; always false for overflowed clocks.
    frac_zero: Vec<bool>,
    /// Non-overflowed clocks with non-zero fraction, grouped by equal
    /// fraction, groups in increasing order of fraction.
    order: Vec<Vec<u16>>,
}

/// The region of `v` with respect to the maximal constant `cmax`.
pub fn region_of(v: &Valuation, cmax: i64) -> Region {
    let cap = Time::from_integer(BigInt::from(cmax));
    let mut ints = Vec::with_capacity(v.len());
    let mut frac_zero = Vec::with_capacity(v.len());
    let mut fracs: Vec<(Time, u16)> = Vec::new();
    for (i, x) in v.values().iter().enumerate() {
        if *x > cap {
            ints.push(None);
            frac_zero.push(false);
            continue;
        }
        let int = x.floor();
        let frac = x - &int;
        ints.push(Some(int.to_integer().to_u32().expect("bounded by cmax")));
        frac_zero.push(frac.is_zero());
        if !frac.is_zero() {
            fracs.push((frac, i as u16));
        }
    }
    fracs.sort();
    let mut order: Vec<Vec<u16>> = Vec::new();
    let mut last: Option<Time> = None;
    for (f, i) in fracs {
        if last.as_ref() == Some(&f) {
            order.last_mut().expect("group").push(i);
        } else {
            order.push(vec![i]);
            last = Some(f);
        }
    }
    Region {
        ints,
        frac_zero,
        order,
    }
}

impl Region {
    pub fn clocks(&self) -> usize {
        self.ints.len()
    }

    pub fn is_overflow(&self, clock: usize) -> bool {
        self.ints[clock].is_none()
    }

    pub fn int_part(&self, clock: usize) -> Option<u32> {
        self.ints[clock]
    }

    pub fn frac_is_zero(&self, clock: usize) -> bool {
        self.frac_zero[clock]
    }

    pub fn fraction_order(&self) -> &[Vec<u16>] {
        &self.order
    }

    /// A valuation in the region. Fraction group `t` (1-based) gets
    /// `2t / (2(|C|+1))`; overflowed clocks get `cmax + 1`.
    pub fn representative(&self, cmax: i64) -> Valuation {
        let n = self.clocks() as i64;
        let mut vals: Vec<Time> = self
            .ints
            .iter()
            .map(|i| match i {
                Some(k) => Time::from_integer(BigInt::from(*k)),
                None => Time::from_integer(BigInt::from(cmax + 1)),
            })
            .collect();
        for (t, group) in self.order.iter().enumerate() {
            let frac = Time::new(BigInt::from(2 * (t as i64 + 1)), BigInt::from(2 * (n + 1)));
            for &c in group {
                vals[c as usize] += &frac;
            }
        }
        Valuation::new(vals).expect("non-negative")
    }

    /// The region as a zone, for intersecting with symbolic states.
    pub fn to_zone(&self, cmax: i64) -> Zone {
        let n = self.clocks();
        let mut z = Zone::universe(n);
        let mut class = vec![None; n];
        for (t, g) in self.order.iter().enumerate() {
            for &c in g {
                class[c as usize] = Some(t);
            }
        }
        for c in 0..n {
            let row = c + 1;
            match self.ints[c] {
                None => z.and_entry(0, row, Bound::lt(-cmax)),
                Some(k) if self.frac_zero[c] => {
                    z.and_entry(row, 0, Bound::le(k as i64));
                    z.and_entry(0, row, Bound::le(-(k as i64)));
                }
                Some(k) => {
                    z.and_entry(row, 0, Bound::lt(k as i64 + 1));
                    z.and_entry(0, row, Bound::lt(-(k as i64)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (Some(ti), Some(tj)) = (class[i], class[j]) else {
                    continue;
                };
                let diff = self.ints[i].unwrap() as i64 - self.ints[j].unwrap() as i64;
                if ti == tj {
                    z.and_entry(i + 1, j + 1, Bound::le(diff));
                } else if ti < tj {
                    // frac_i < frac_j: diff - 1 < x_i - x_j < diff
                    z.and_entry(i + 1, j + 1, Bound::lt(diff));
                    z.and_entry(j + 1, i + 1, Bound::lt(1 - diff));
                }
            }
        }
        z
    }

    pub fn render(&self, clocks: &ClockSet, cmax: i64) -> String {
        let name = |c: usize| clocks.name(ClockId(c as u16 + 1)).to_string();
        let mut parts: Vec<String> = (0..self.clocks())
            .map(|c| match self.ints[c] {
                None => format!("{}>{cmax}", name(c)),
                Some(k) if self.frac_zero[c] => format!("{}={k}", name(c)),
                Some(k) => format!("{k}<{}<{}", name(c), k + 1),
            })
            .collect();
        if self.order.len() > 1 || self.order.first().is_some_and(|g| g.len() > 1) {
            let groups: Vec<String> = self
                .order
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&c| format!("frac({})", name(c as usize)))
                        .collect::<Vec<_>>()
                        .join("=")
                })
                .collect();
            parts.push(groups.join("<"));
        }
        parts.join(", ")
    }
}

/// The least delay taking `v` into the immediate time-successor region, or
/// `None` when every clock already exceeds `cmax`.
pub(crate) fn delay_to_next_region(v: &Valuation, cmax: i64) -> Option<Time> {
    let cap = Time::from_integer(BigInt::from(cmax));
    let mut any = false;
    let mut some_zero = false;
    let mut max_frac = Time::zero();
    for x in v.values() {
        if *x > cap {
            continue;
        }
        any = true;
        let frac = x - x.floor();
        if frac.is_zero() {
            some_zero = true;
        } else if frac > max_frac {
            max_frac = frac;
        }
    }
    if !any {
        return None;
    }
    let gap = Time::one() - max_frac;
    Some(if some_zero {
        gap / Time::from_integer(BigInt::from(2))
    } else {
        gap
    })
}

/// `|C|! * 2^|C| * (2 cmax + 2)^|C|`, the classical bound on the number of
/// regions per location.
pub fn region_bound(clocks: usize, cmax: i64) -> u128 {
    let n = clocks as u32;
    let fact: u128 = (1..=clocks as u128).product();
    fact * 2u128.pow(n) * ((2 * cmax as u128) + 2).pow(n)
}

/// Every region over `clocks` clocks for `cmax`.
pub fn enumerate_regions(clocks: usize, cmax: i64) -> Vec<Region> {
    let mut out = Vec::new();
    // choice per clock: integer part 0..=cmax with zero/non-zero fraction, or overflow
    let per_clock = 2 * (cmax as usize + 1) + 1;
    let total = per_clock.pow(clocks as u32);
    for code in 0..total {
        let mut ints = Vec::with_capacity(clocks);
        let mut frac_zero = Vec::with_capacity(clocks);
        let mut fractional = Vec::new();
        let mut rest = code;
        let mut skip = false;
        for c in 0..clocks {
            let choice = rest % per_clock;
            rest /= per_clock;
            if choice == per_clock - 1 {
                ints.push(None);
                frac_zero.push(false);
            } else if choice / 2 == cmax as usize && choice % 2 == 1 {
                // above cmax is overflow, already covered
                skip = true;
                break;
            } else {
                ints.push(Some((choice / 2) as u32));
                frac_zero.push(choice.is_multiple_of(2));
                if !choice.is_multiple_of(2) {
                    fractional.push(c as u16);
                }
            }
        }
        if skip {
            continue;
        }
        for order in ordered_partitions(&fractional) {
            out.push(Region {
                ints: ints.clone(),
                frac_zero: frac_zero.clone(),
                order,
            });
        }
    }
    out
}

fn ordered_partitions(items: &[u16]) -> Vec<Vec<Vec<u16>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // choose the non-empty first group as a subset, recurse on the rest
    let n = items.len();
    for mask in 1u32..(1 << n) {
        let first: Vec<u16> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i])
            .collect();
        let rest: Vec<u16> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| items[i])
            .collect();
        for mut tail in ordered_partitions(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("maximal constant {cmax} exceeds the region-engine bound {bound}")]
    ConstantTooLarge { cmax: i64, bound: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionOptions {
    /// Refuse models whose maximal constant exceeds this bound.
    pub max_constant: i64,
    pub record: bool,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            max_constant: 16,
            record: false,
        }
    }
}

/// Edge of the region graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionEdge {
    Delay,
    Discrete(Move),
}

type Node = (CubeId, Region);

struct RegionEngine<'a> {
    model: &'a HdtaModel,
    cmax: i64,
}

impl<'a> RegionEngine<'a> {
    fn new(model: &'a HdtaModel, opts: RegionOptions) -> Result<Self, RegionError> {
        let cmax = model.cmax();
        if cmax > opts.max_constant {
            return Err(RegionError::ConstantTooLarge {
                cmax,
                bound: opts.max_constant,
            });
        }
        Ok(RegionEngine { model, cmax })
    }

    fn initial(&self) -> Option<Node> {
        let s = self.model.initial_state()?;
        Some((s.cube, region_of(&s.val, self.cmax)))
    }

    fn successors(&self, (cube, region): &Node) -> Vec<(RegionEdge, Node)> {
        let m = self.model;
        let rep = region.representative(self.cmax);
        let mut out = Vec::new();
        if let Some(d) = delay_to_next_region(&rep, self.cmax) {
            let w = rep.delay(&d).expect("non-negative");
            if m.inv(*cube).satisfied_by(&w).expect("declared clocks") {
                out.push((RegionEdge::Delay, (*cube, region_of(&w, self.cmax))));
            }
        }
        let s = super::ConcreteState {
            cube: *cube,
            val: rep,
        };
        for mv in m.moves(*cube) {
            let next = match mv {
                Move::Start { to, k, .. } => m.concrete_start(&s, to, k),
                Move::Finish { k, .. } => m.concrete_finish(&s, k),
            };
            if let Some(t) = next.expect("well-formed move") {
                out.push((
                    RegionEdge::Discrete(mv),
                    (t.cube, region_of(&t.val, self.cmax)),
                ));
            }
        }
        out
    }

    /// Rebuilds a concrete run from the initial state along region edges.
    fn concretize(&self, edges: &[RegionEdge]) -> Option<Run> {
        let m = self.model;
        let mut s = m.initial_state()?;
        let mut steps = Vec::new();
        for e in edges {
            let step = match e {
                RegionEdge::Delay => Step::Delay(delay_to_next_region(&s.val, self.cmax)?),
                RegionEdge::Discrete(mv) => Step::from_move(*mv),
            };
            s = m.apply(&s, &step).ok()??;
            steps.push(step);
        }
        Some(Run { steps })
    }
}

/// Reachability of a final cube in the region quotient.
pub fn region_reach(model: &HdtaModel, opts: RegionOptions) -> Result<ReachResult, RegionError> {
    let engine = RegionEngine::new(model, opts)?;
    let mut result = ReachResult::default();
    let Some(init) = engine.initial() else {
        return Ok(result);
    };
    let mut nodes: Vec<(Node, Option<(usize, RegionEdge)>)> = vec![(init.clone(), None)];
    let mut seen: HashMap<Node, usize> = HashMap::from([(init, 0)]);
    let mut waiting = VecDeque::from([0usize]);
    let record =
        |result: &mut ReachResult, idx: usize, node: &Node, parent: Option<(usize, RegionEdge)>| {
            if opts.record {
                result.trace.push(TraceEntry {
                    index: idx,
                    parent: parent.map(|p| p.0),
                    via: parent.map(|p| match p.1 {
                        RegionEdge::Delay => "delay".to_string(),
                        RegionEdge::Discrete(mv) => mv.to_string(),
                    }),
                    cube: model.name(node.0).to_string(),
                    state: node.1.render(model.clocks(), engine.cmax),
                });
            }
        };
    record(&mut result, 0, &nodes[0].0, None);
    let mut goal = model.is_final(nodes[0].0 .0).then_some(0);
    result.stats.peak_waiting = 1;
    while goal.is_none() {
        let Some(cur) = waiting.pop_front() else {
            break;
        };
        result.stats.explored += 1;
        for (edge, next) in engine.successors(&nodes[cur].0) {
            if seen.contains_key(&next) {
                result.stats.subsumed += 1;
                continue;
            }
            let idx = nodes.len();
            seen.insert(next.clone(), idx);
            record(&mut result, idx, &next, Some((cur, edge)));
            let is_goal = model.is_final(next.0);
            nodes.push((next, Some((cur, edge))));
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
        let mut edges = Vec::new();
        let mut at = g;
        while let Some((p, e)) = nodes[at].1 {
            edges.push(e);
            at = p;
        }
        edges.reverse();
        result.path = edges
            .iter()
            .filter_map(|e| match e {
                RegionEdge::Discrete(mv) => Some(*mv),
                RegionEdge::Delay => None,
            })
            .collect();
        let run = engine.concretize(&edges);
        assert!(
            run.as_ref().is_some_and(|r| r.accepts(model)),
            "region path without a concrete witness"
        );
        result.witness = run;
    }
    Ok(result)
}

/// The full region graph reachable from the initial state.
#[derive(Debug, Clone, Default)]
pub struct RegionGraph {
    pub cmax: i64,
    pub nodes: Vec<(CubeId, Region)>,
    pub edges: Vec<(usize, RegionEdge, usize)>,
}

impl RegionGraph {
    /// Distinct regions visited at each cube, indexed by cube id.
    pub fn regions_per_cube(&self, cubes: usize) -> Vec<usize> {
        let mut out = vec![0; cubes];
        for (c, _) in &self.nodes {
            out[c.index()] += 1;
        }
        out
    }
}

pub fn region_graph(model: &HdtaModel, opts: RegionOptions) -> Result<RegionGraph, RegionError> {
    let engine = RegionEngine::new(model, opts)?;
    let mut graph = RegionGraph {
        cmax: engine.cmax,
        ..RegionGraph::default()
    };
    let Some(init) = engine.initial() else {
        return Ok(graph);
    };
    let mut seen: HashMap<Node, usize> = HashMap::from([(init.clone(), 0)]);
    graph.nodes.push(init);
    let mut waiting = VecDeque::from([0usize]);
    while let Some(cur) = waiting.pop_front() {
        for (edge, next) in engine.successors(&graph.nodes[cur]) {
            let target = match seen.get(&next) {
                Some(&i) => i,
                None => {
                    let i = graph.nodes.len();
                    seen.insert(next.clone(), i);
                    graph.nodes.push(next);
                    waiting.push_back(i);
                    i
                }
            };
            graph.edges.push((cur, edge, target));
        }
    }
    Ok(graph)
}
