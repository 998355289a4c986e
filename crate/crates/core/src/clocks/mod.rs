//! Clocks, clock constraints, valuations and zones.
//!
//! Clock index 0 is the constant-zero reference clock used by difference
//! bound matrices; user clocks are numbered from 1 in declaration order.

mod constraint;
mod valuation;
mod zone;

pub use constraint::{Atom, ClockConstraint, ExtendedConstraint, Relation};
pub use valuation::{time, Time, Valuation};
pub use zone::{Bound, Zone};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Fresh clock introduced by the timed-automaton to 1DTA conversion.
pub const URGENT_CLOCK: &str = "__urgent";

/// Largest absolute constant accepted in a clock comparison. Keeps every sum
/// formed during shortest-path closure far from `i64` overflow.
pub const MAX_CONSTANT: i64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClockError {
    #[error("unknown clock `{0}`")]
    UnknownClock(String),
    #[error("clock index {0} is not declared")]
    ClockOutOfRange(usize),
    #[error("duplicate clock `{0}`")]
    DuplicateClock(String),
    #[error("invalid clock name `{0}`")]
    InvalidName(String),
    #[error("constant {0} exceeds the supported magnitude {MAX_CONSTANT}")]
    ConstantOutOfRange(i64),
    #[error("difference atom `{0}` is not allowed in a diagonal-free constraint")]
    DiagonalAtom(String),
    #[error("negative delay {0}")]
    NegativeDelay(String),
    #[error("valuation has {got} clocks, expected {expected}")]
    Arity { got: usize, expected: usize },
    #[error("cannot parse constraint `{text}`: {reason}")]
    Syntax { text: String, reason: String },
}

/// A user clock; `ClockId(0)` is the reference clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockId(pub u16);

impl ClockId {
    pub const REFERENCE: ClockId = ClockId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\'')
}

/// Ordered set of clock names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClockSet {
    names: Vec<String>,
    index: HashMap<String, ClockId>,
}

impl ClockSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ClockError> {
        let mut set = ClockSet::default();
        for n in names {
            set.push(n.into())?;
        }
        Ok(set)
    }

    pub fn push(&mut self, name: String) -> Result<ClockId, ClockError> {
        if !is_identifier(&name) {
            return Err(ClockError::InvalidName(name));
        }
        if self.index.contains_key(&name) {
            return Err(ClockError::DuplicateClock(name));
        }
        if self.names.len() >= u16::MAX as usize - 1 {
            return Err(ClockError::ClockOutOfRange(self.names.len() + 1));
        }
        let id = ClockId(self.names.len() as u16 + 1);
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    /// Number of user clocks (excluding the reference clock).
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Side length of a DBM over these clocks.
    pub fn dbm_dim(&self) -> usize {
        self.names.len() + 1
    }

    pub fn id(&self, name: &str) -> Result<ClockId, ClockError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ClockError::UnknownClock(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn name(&self, id: ClockId) -> &str {
        if id == ClockId::REFERENCE {
            "0"
        } else {
            &self.names[id.index() - 1]
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ids(&self) -> impl Iterator<Item = ClockId> + '_ {
        (1..=self.names.len() as u16).map(ClockId)
    }

    pub fn check(&self, id: ClockId) -> Result<(), ClockError> {
        if id.index() == 0 || id.index() > self.names.len() {
            Err(ClockError::ClockOutOfRange(id.index()))
        } else {
            Ok(())
        }
    }

    /// Parses a constraint such as `x<=4 & y>3 & x-y<2`. `true` (or an empty
    /// string) is the empty conjunction; `c=k` becomes `c<=k & c>=k`.
    pub fn parse_constraint(&self, text: &str) -> Result<ExtendedConstraint, ClockError> {
        constraint::parse(self, text)
    }

    /// Like [`Self::parse_constraint`] but rejects difference atoms.
    pub fn parse_clock_constraint(&self, text: &str) -> Result<ClockConstraint, ClockError> {
        ClockConstraint::new(self.parse_constraint(text)?.into_atoms(), self)
    }

    /// Parses a whitespace- or comma-separated clock list.
    pub fn parse_clock_list(&self, text: &str) -> Result<Vec<ClockId>, ClockError> {
        let mut out: Vec<ClockId> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty() && *s != "-")
            .map(|s| self.id(s))
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for ClockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}
