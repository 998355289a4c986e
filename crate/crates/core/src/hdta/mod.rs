//! Higher-dimensional timed automata: the model, its concrete semantics, the
//! region-graph oracle and the zone-graph reachability engine.

mod concrete;
mod region;
mod semantics;
mod witness;
mod zone_graph;

pub use concrete::{bounded_search, BoundedSearch};
pub use region::{
    enumerate_regions, region_bound, region_graph, region_of, region_reach, Region, RegionEdge,
    RegionError, RegionGraph, RegionOptions,
};
pub use semantics::{ConcreteState, Run, SemanticsError, Step};
pub use witness::witness_along;
pub use zone_graph::{
    trace_json_lines, zone_graph_export, zone_reach, zone_successors, ReachResult, ReachStats,
    SuccessorRule, SymbolicState, TraceEntry, ZoneGraph, ZoneOptions,
};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::clocks::{ClockConstraint, ClockError, ClockId, ClockSet};
use crate::precubical::{
    Cube, CubeId, Hda, HdaError, IdentityViolation, LabelViolation, Multiset, PrecubicalSet, Side,
    StructureError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Hda(#[from] HdaError),
    #[error("precubical identity fails at cube `{cube}` for k={k}, l={l} ({count} violation(s) in total)")]
    Identity {
        cube: String,
        k: usize,
        l: usize,
        count: usize,
        violations: Vec<IdentityViolation>,
    },
    #[error("labeling law fails at cube `{cube}` ({count} violation(s) in total)")]
    Labeling {
        cube: String,
        count: usize,
        violations: Vec<LabelViolation>,
    },
    #[error("cube `{cube}`: {error}")]
    Clock { cube: String, error: ClockError },
    #[error("expected {expected} {what} entries, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("no initial state")]
    NoInitial,
    #[error("cube `{cube}` refers to unknown cube `{name}`")]
    UnknownCube { cube: String, name: String },
}

impl ModelError {
    /// Name of the cube the error is about, if any.
    pub fn cube(&self) -> Option<&str> {
        match self {
            ModelError::Structure(e) => Some(match e {
                StructureError::DimensionTooLarge { cube, .. }
                | StructureError::FaceCount { cube, .. }
                | StructureError::DanglingFace { cube, .. }
                | StructureError::FaceDimension { cube, .. } => cube,
                StructureError::DuplicateName(cube) => cube,
            }),
            ModelError::Hda(HdaError::InitialNotState(c) | HdaError::FinalNotState(c)) => Some(c),
            ModelError::Hda(HdaError::UndeclaredAction { cube, .. }) => Some(cube),
            ModelError::Identity { cube, .. }
            | ModelError::Labeling { cube, .. }
            | ModelError::Clock { cube, .. }
            | ModelError::UnknownCube { cube, .. } => Some(cube),
            ModelError::Arity { .. } | ModelError::NoInitial => None,
        }
    }
}

/// Cube data with faces given by name, for [`HdtaModel::assemble`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSpec {
    pub name: String,
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub label: Multiset,
    pub inv: ClockConstraint,
    pub exit: Vec<ClockId>,
}

/// A discrete move between cubes. `Start` enters `to` through its `k`-th
/// lower face; `Finish` leaves `from` through its `k`-th upper face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Start { from: CubeId, to: CubeId, k: usize },
    Finish { from: CubeId, to: CubeId, k: usize },
}

impl Move {
    pub fn source(self) -> CubeId {
        match self {
            Move::Start { from, .. } | Move::Finish { from, .. } => from,
        }
    }

    pub fn target(self) -> CubeId {
        match self {
            Move::Start { to, .. } | Move::Finish { to, .. } => to,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Move::Start { k, .. } | Move::Finish { k, .. } => k,
        }
    }

    pub fn kind(self) -> &'static str {
        match self {
            Move::Start { .. } => "start",
            Move::Finish { .. } => "finish",
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind(), self.index())
    }
}

/// An HDA with an invariant and an exit set on every cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdtaModel {
    hda: Hda,
    clocks: ClockSet,
    inv: Vec<ClockConstraint>,
    exit: Vec<Vec<ClockId>>,
    /// `cofaces[y]` lists `(x, k)` with `d[k,0] x = y`.
    cofaces: Vec<Vec<(CubeId, usize)>>,
}

impl HdtaModel {
    /// Validates the precubical identity, the labeling laws and the clock data.
    pub fn new(
        hda: Hda,
        clocks: ClockSet,
        inv: Vec<ClockConstraint>,
        exit: Vec<Vec<ClockId>>,
    ) -> Result<Self, ModelError> {
        let space = &hda.space;
        let n = space.len();
        if inv.len() != n {
            return Err(ModelError::Arity {
                what: "invariant",
                expected: n,
                got: inv.len(),
            });
        }
        if exit.len() != n {
            return Err(ModelError::Arity {
                what: "exit",
                expected: n,
                got: exit.len(),
            });
        }
        let violations = space.validate();
        if let Some(v) = violations.first() {
            return Err(ModelError::Identity {
                cube: space.name(v.cube).to_string(),
                k: v.k,
                l: v.l,
                count: violations.len(),
                violations: violations.clone(),
            });
        }
        let labels = hda.validate_labeling();
        if let Some(v) = labels.first() {
            let cube = match v {
                LabelViolation::Cardinality { cube, .. }
                | LabelViolation::OppositeFaces { cube, .. }
                | LabelViolation::NotOneEvent { cube, .. } => *cube,
            };
            return Err(ModelError::Labeling {
                cube: space.name(cube).to_string(),
                count: labels.len(),
                violations: labels.clone(),
            });
        }
        let clock_err = |x: usize, error| ModelError::Clock {
            cube: space.cubes()[x].name.clone(),
            error,
        };
        for (x, phi) in inv.iter().enumerate() {
            for a in phi.atoms() {
                if a.is_diagonal() {
                    return Err(clock_err(x, ClockError::DiagonalAtom(a.render(&clocks))));
                }
                clocks.check(a.left).map_err(|e| clock_err(x, e))?;
            }
        }
        let mut exit = exit;
        for (x, e) in exit.iter_mut().enumerate() {
            for &c in e.iter() {
                clocks.check(c).map_err(|err| clock_err(x, err))?;
            }
            e.sort();
            e.dedup();
        }
        let mut cofaces = vec![Vec::new(); n];
        for x in space.ids() {
            for (slot, &y) in space.cube(x).lower.iter().enumerate() {
                cofaces[y.index()].push((x, slot + 1));
            }
        }
        Ok(HdtaModel {
            hda,
            clocks,
            inv,
            exit,
            cofaces,
        })
    }

    /// Builds and validates a model from named cubes.
    pub fn assemble(
        clocks: ClockSet,
        alphabet: BTreeSet<String>,
        cubes: Vec<CubeSpec>,
        initial: &str,
        finals: &[String],
    ) -> Result<Self, ModelError> {
        let ids: HashMap<&str, CubeId> = cubes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.as_str(), CubeId(i as u32)))
            .collect();
        let resolve = |cube: &str, name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownCube {
                    cube: cube.to_string(),
                    name: name.to_string(),
                })
        };
        let mut raw = Vec::with_capacity(cubes.len());
        let mut inv = Vec::with_capacity(cubes.len());
        let mut exit = Vec::with_capacity(cubes.len());
        for c in &cubes {
            let lower = c
                .lower
                .iter()
                .map(|f| resolve(&c.name, f))
                .collect::<Result<Vec<_>, _>>()?;
            let upper = c
                .upper
                .iter()
                .map(|f| resolve(&c.name, f))
                .collect::<Result<Vec<_>, _>>()?;
            raw.push(Cube {
                name: c.name.clone(),
                dim: c.lower.len(),
                lower,
                upper,
                label: c.label.clone(),
            });
            inv.push(c.inv.clone());
            exit.push(c.exit.clone());
        }
        let initial = ids.get(initial).copied().ok_or(ModelError::NoInitial)?;
        let finals = finals
            .iter()
            .map(|f| resolve(f, f))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let space = PrecubicalSet::new(raw)?;
        let hda = Hda::new(space, initial, finals, alphabet)?;
        HdtaModel::new(hda, clocks, inv, exit)
    }

    /// The model as named cube records, in cube order.
    pub fn to_specs(&self) -> Vec<CubeSpec> {
        let sp = self.space();
        sp.ids()
            .map(|x| {
                let c = sp.cube(x);
                CubeSpec {
                    name: c.name.clone(),
                    lower: c.lower.iter().map(|&f| sp.name(f).to_string()).collect(),
                    upper: c.upper.iter().map(|&f| sp.name(f).to_string()).collect(),
                    label: c.label.clone(),
                    inv: self.inv(x).clone(),
                    exit: self.exit(x).to_vec(),
                }
            })
            .collect()
    }

    pub fn final_names(&self) -> Vec<String> {
        self.hda
            .finals
            .iter()
            .map(|&f| self.name(f).to_string())
            .collect()
    }

    pub fn hda(&self) -> &Hda {
        &self.hda
    }

    pub fn space(&self) -> &PrecubicalSet {
        &self.hda.space
    }

    pub fn clocks(&self) -> &ClockSet {
        &self.clocks
    }

    pub fn initial(&self) -> CubeId {
        self.hda.initial
    }

    pub fn is_final(&self, x: CubeId) -> bool {
        self.hda.finals.contains(&x)
    }

    pub fn inv(&self, x: CubeId) -> &ClockConstraint {
        &self.inv[x.index()]
    }

    pub fn exit(&self, x: CubeId) -> &[ClockId] {
        &self.exit[x.index()]
    }

    pub fn name(&self, x: CubeId) -> &str {
        self.hda.space.name(x)
    }

    pub fn len(&self) -> usize {
        self.hda.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hda.space.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.hda.space.dimension_bound().saturating_sub(1)
    }

    /// Cubes `x` with `d[k,0] x = y`, as `(x, k)` pairs.
    pub fn cofaces(&self, y: CubeId) -> &[(CubeId, usize)] {
        &self.cofaces[y.index()]
    }

    /// Every discrete move out of `x`: starts into cofaces, then finishes
    /// through upper faces, each group in index order.
    pub fn moves(&self, x: CubeId) -> impl Iterator<Item = Move> + '_ {
        let starts = self
            .cofaces(x)
            .iter()
            .map(move |&(to, k)| Move::Start { from: x, to, k });
        let finishes = (1..=self.space().dim(x)).map(move |k| Move::Finish {
            from: x,
            to: self.space().face(x, k, Side::Upper),
            k,
        });
        starts.chain(finishes)
    }

    /// Clocks zeroed by `m`: the exit set of the cube being left.
    pub fn resets(&self, m: Move) -> &[ClockId] {
        self.exit(m.source())
    }

    /// Per-clock maximal constant over all invariants, indexed by clock id
    /// (entry 0 is the reference clock and stays 0).
    pub fn max_constants(&self) -> Vec<i64> {
        let mut k = vec![0; self.clocks.dbm_dim()];
        for phi in &self.inv {
            phi.max_constants_into(&mut k);
        }
        k
    }

    /// Largest constant in any invariant.
    pub fn cmax(&self) -> i64 {
        self.max_constants().into_iter().max().unwrap_or(0)
    }

    /// Number of cubes of each dimension.
    pub fn grade_counts(&self) -> Vec<usize> {
        (0..=self.dimension())
            .map(|n| self.space().grade(n).len())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig3_shape() {
        let m = fixtures::fig3();
        assert_eq!(m.grade_counts(), vec![4, 4, 1]);
        assert_eq!(m.cmax(), 4);
        assert_eq!(m.max_constants(), vec![0, 4, 3]);
        let l0 = m.initial();
        let kinds: Vec<_> = m
            .moves(l0)
            .map(|mv| m.name(mv.target()).to_string())
            .collect();
        assert_eq!(kinds, vec!["e1", "e2"]);
        let u = m.space().lookup("u").unwrap();
        let out: Vec<_> = m
            .moves(u)
            .map(|mv| m.name(mv.target()).to_string())
            .collect();
        assert_eq!(out, vec!["e3", "e4"]);
    }

    #[test]
    fn start_finish_duality() {
        for m in [fixtures::fig3(), fixtures::fig4(), fixtures::fig5()] {
            for x in m.space().ids() {
                for mv in m.moves(x) {
                    let (a, b) = (m.space().dim(mv.source()), m.space().dim(mv.target()));
                    match mv {
                        Move::Start { .. } => assert_eq!(a + 1, b),
                        Move::Finish { .. } => assert_eq!(a, b + 1),
                    }
                }
            }
        }
    }

    #[test]
    fn arity_is_checked() {
        let m = fixtures::fig3();
        let err = HdtaModel::new(
            m.hda().clone(),
            m.clocks().clone(),
            vec![],
            vec![vec![]; m.len()],
        );
        assert!(matches!(
            err,
            Err(ModelError::Arity {
                what: "invariant",
                ..
            })
        ));
    }
}
