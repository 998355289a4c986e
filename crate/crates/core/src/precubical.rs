//! Precubical sets and higher-dimensional automata.
//!
//! A precubical set is stored as a flat list of cubes; the grading is derived
//! from each cube's dimension. Face indices are 1-based throughout, so
//! `face(x, k, Side::Lower)` is the `k`-th lower face of `x`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Largest cube dimension accepted by [`PrecubicalSet::new`].
pub const MAX_DIMENSION: usize = 16;

/// Index of a cube inside its [`PrecubicalSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeId(pub u32);

impl CubeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CubeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Which family of face maps: lower (event not yet started) or upper (event terminated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Lower, Side::Upper];

    pub fn bit(self) -> u8 {
        match self {
            Side::Lower => 0,
            Side::Upper => 1,
        }
    }
}

/// A finite multiset of action names.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset(BTreeMap<String, u32>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(action: impl Into<String>) -> Self {
        let mut m = Self::new();
        m.insert(action);
        m
    }

    pub fn insert(&mut self, action: impl Into<String>) {
        *self.0.entry(action.into()).or_insert(0) += 1;
    }

    /// Cardinality: the sum of all multiplicities.
    pub fn len(&self) -> usize {
        self.0.values().map(|&n| n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, action: &str) -> u32 {
        self.0.get(action).copied().unwrap_or(0)
    }

    /// Multiset sum.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (a, &n) in &other.0 {
            *out.0.entry(a.clone()).or_insert(0) += n;
        }
        out
    }

    /// Multiset difference, truncated at zero.
    pub fn difference(&self, other: &Multiset) -> Multiset {
        let mut out = BTreeMap::new();
        for (a, &n) in &self.0 {
            let rest = n.saturating_sub(other.count(a));
            if rest > 0 {
                out.insert(a.clone(), rest);
            }
        }
        Multiset(out)
    }

    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        self.0.iter().all(|(a, &n)| other.count(a) >= n)
    }

    /// The actions with repetition, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0
            .iter()
            .flat_map(|(a, &n)| std::iter::repeat_n(a.as_str(), n as usize))
    }

    pub fn distinct(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.keys().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for Multiset {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for a in iter {
            m.insert(a);
        }
        m
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    pub name: String,
    pub dim: usize,
    pub lower: Vec<CubeId>,
    pub upper: Vec<CubeId>,
    pub label: Multiset,
}

impl Cube {
    pub fn point(name: impl Into<String>) -> Self {
        Cube {
            name: name.into(),
            dim: 0,
            lower: Vec::new(),
            upper: Vec::new(),
            label: Multiset::new(),
        }
    }

    pub fn faces(&self, side: Side) -> &[CubeId] {
        match side {
            Side::Lower => &self.lower,
            Side::Upper => &self.upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("cube `{cube}` has dimension {dim}, above the supported maximum {MAX_DIMENSION}")]
    DimensionTooLarge { cube: String, dim: usize },
    #[error("cube `{cube}` of dimension {dim} lists {lower} lower and {upper} upper faces")]
    FaceCount {
        cube: String,
        dim: usize,
        lower: usize,
        upper: usize,
    },
    #[error("cube `{cube}`: {side:?} face slot {slot} refers to a missing cube {target}")]
    DanglingFace {
        cube: String,
        side: Side,
        slot: usize,
        target: CubeId,
    },
    #[error("cube `{cube}`: {side:?} face slot {slot} is `{face}` of dimension {face_dim}, expected {expected}")]
    FaceDimension {
        cube: String,
        side: Side,
        slot: usize,
        face: String,
        face_dim: usize,
        expected: usize,
    },
    #[error("duplicate cube name `{0}`")]
    DuplicateName(String),
}

/// One failure of the precubical identity
/// `d[k,ν] d[ℓ,μ] x = d[ℓ-1,μ] d[k,ν] x` for `k < ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    pub cube: CubeId,
    pub k: usize,
    pub l: usize,
    pub nu: Side,
    pub mu: Side,
    /// `d[k,ν] d[ℓ,μ] x`
    pub left: CubeId,
    /// `d[ℓ-1,μ] d[k,ν] x`
    pub right: CubeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecubicalSet {
    cubes: Vec<Cube>,
    by_dim: Vec<Vec<CubeId>>,
    by_name: HashMap<String, CubeId>,
}

impl PrecubicalSet {
    /// Builds the set, checking names, face counts, face targets and face dimensions.
    /// The precubical identity itself is checked separately by [`Self::validate`].
    pub fn new(cubes: Vec<Cube>) -> Result<Self, StructureError> {
        let mut by_name = HashMap::with_capacity(cubes.len());
        for (i, c) in cubes.iter().enumerate() {
            if by_name.insert(c.name.clone(), CubeId(i as u32)).is_some() {
                return Err(StructureError::DuplicateName(c.name.clone()));
            }
        }
        let mut by_dim: Vec<Vec<CubeId>> = Vec::new();
        for (i, c) in cubes.iter().enumerate() {
            if c.dim > MAX_DIMENSION {
                return Err(StructureError::DimensionTooLarge {
                    cube: c.name.clone(),
                    dim: c.dim,
                });
            }
            if c.lower.len() != c.dim || c.upper.len() != c.dim {
                return Err(StructureError::FaceCount {
                    cube: c.name.clone(),
                    dim: c.dim,
                    lower: c.lower.len(),
                    upper: c.upper.len(),
                });
            }
            for side in Side::BOTH {
                for (slot, &f) in c.faces(side).iter().enumerate() {
                    let Some(face) = cubes.get(f.index()) else {
                        return Err(StructureError::DanglingFace {
                            cube: c.name.clone(),
                            side,
                            slot: slot + 1,
                            target: f,
                        });
                    };
                    if face.dim + 1 != c.dim {
                        return Err(StructureError::FaceDimension {
                            cube: c.name.clone(),
                            side,
                            slot: slot + 1,
                            face: face.name.clone(),
                            face_dim: face.dim,
                            expected: c.dim - 1,
                        });
                    }
                }
            }
            if by_dim.len() <= c.dim {
                by_dim.resize(c.dim + 1, Vec::new());
            }
            by_dim[c.dim].push(CubeId(i as u32));
        }
        Ok(PrecubicalSet {
            cubes,
            by_dim,
            by_name,
        })
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cube(&self, id: CubeId) -> &Cube {
        &self.cubes[id.index()]
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn ids(&self) -> impl Iterator<Item = CubeId> + '_ {
        (0..self.cubes.len() as u32).map(CubeId)
    }

    pub fn lookup(&self, name: &str) -> Option<CubeId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: CubeId) -> &str {
        &self.cubes[id.index()].name
    }

    pub fn dim(&self, id: CubeId) -> usize {
        self.cubes[id.index()].dim
    }

    /// One more than the largest dimension present (0 for the empty set).
    pub fn dimension_bound(&self) -> usize {
        self.by_dim.len()
    }

    /// The cubes of dimension `n`.
    pub fn grade(&self, n: usize) -> &[CubeId] {
        self.by_dim.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `k`-th face of `x` on `side`, with `1 <= k <= dim x`. Panics when out of range.
    pub fn face(&self, x: CubeId, k: usize, side: Side) -> CubeId {
        self.cube(x).faces(side)[k - 1]
    }

    /// Checks the precubical identity on every cube and returns all failures.
    pub fn validate(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        for x in self.ids() {
            let n = self.dim(x);
            if n < 2 {
                continue;
            }
            for l in 2..=n {
                for k in 1..l {
                    for nu in Side::BOTH {
                        for mu in Side::BOTH {
                            let left = self.face(self.face(x, l, mu), k, nu);
                            let right = self.face(self.face(x, k, nu), l - 1, mu);
                            if left != right {
                                out.push(IdentityViolation {
                                    cube: x,
                                    k,
                                    l,
                                    nu,
                                    mu,
                                    left,
                                    right,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelViolation {
    /// `|λ(x)| ≠ dim x`
    Cardinality {
        cube: CubeId,
        size: usize,
        dim: usize,
    },
    /// `λ(d[k,0] x) ≠ λ(d[k,1] x)`
    OppositeFaces { cube: CubeId, k: usize },
    /// `λ(x) \ λ(d[k,0] x)` is not a singleton
    NotOneEvent { cube: CubeId, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HdaError {
    #[error("initial cube `{0}` is not a 0-cube")]
    InitialNotState(String),
    #[error("final cube `{0}` is not a 0-cube")]
    FinalNotState(String),
    #[error("cube `{cube}` uses undeclared action `{action}`")]
    UndeclaredAction { cube: String, action: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("face index {k} out of range for cube of dimension {dim}")]
    IndexOutOfRange { k: usize, dim: usize },
    #[error("cube label minus face label is not a single event")]
    NotOneEvent,
}

/// A higher-dimensional automaton: a precubical set with initial and final
/// 0-cubes. Labels live on the cubes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hda {
    pub space: PrecubicalSet,
    pub initial: CubeId,
    pub finals: BTreeSet<CubeId>,
    /// Declared action alphabet; every label is drawn from it.
    pub alphabet: BTreeSet<String>,
}

impl Hda {
    pub fn new(
        space: PrecubicalSet,
        initial: CubeId,
        finals: BTreeSet<CubeId>,
        alphabet: BTreeSet<String>,
    ) -> Result<Self, HdaError> {
        if space.dim(initial) != 0 {
            return Err(HdaError::InitialNotState(space.name(initial).to_string()));
        }
        if let Some(&f) = finals.iter().find(|&&f| space.dim(f) != 0) {
            return Err(HdaError::FinalNotState(space.name(f).to_string()));
        }
        for c in space.cubes() {
            if let Some(a) = c.label.distinct().find(|a| !alphabet.contains(*a)) {
                return Err(HdaError::UndeclaredAction {
                    cube: c.name.clone(),
                    action: a.to_string(),
                });
            }
        }
        Ok(Hda {
            space,
            initial,
            finals,
            alphabet,
        })
    }

    /// Checks the three labeling laws on every cube and returns all failures.
    pub fn validate_labeling(&self) -> Vec<LabelViolation> {
        let sp = &self.space;
        let mut out = Vec::new();
        for x in sp.ids() {
            let c = sp.cube(x);
            if c.label.len() != c.dim {
                out.push(LabelViolation::Cardinality {
                    cube: x,
                    size: c.label.len(),
                    dim: c.dim,
                });
            }
            for k in 1..=c.dim {
                let lo = &sp.cube(c.lower[k - 1]).label;
                let hi = &sp.cube(c.upper[k - 1]).label;
                if lo != hi {
                    out.push(LabelViolation::OppositeFaces { cube: x, k });
                }
                let started = c.label.difference(lo);
                if started.len() != 1 || !lo.is_submultiset_of(&c.label) {
                    out.push(LabelViolation::NotOneEvent { cube: x, k });
                }
            }
        }
        out
    }

    /// The event started when entering `x` from its `k`-th lower face.
    pub fn started_event(&self, x: CubeId, k: usize) -> Result<&str, EventError> {
        self.event_across(x, k, Side::Lower)
    }

    /// The event terminated when leaving `x` through its `k`-th upper face.
    pub fn terminated_event(&self, x: CubeId, k: usize) -> Result<&str, EventError> {
        self.event_across(x, k, Side::Upper)
    }

    fn event_across(&self, x: CubeId, k: usize, side: Side) -> Result<&str, EventError> {
        let c = self.space.cube(x);
        if k == 0 || k > c.dim {
            return Err(EventError::IndexOutOfRange { k, dim: c.dim });
        }
        let face = &self.space.cube(c.faces(side)[k - 1]).label;
        let diff = c.label.difference(face);
        if diff.len() != 1 {
            return Err(EventError::NotOneEvent);
        }
        let a = diff.distinct().next().expect("singleton");
        Ok(c.label.distinct().find(|b| *b == a).expect("present"))
    }
}
