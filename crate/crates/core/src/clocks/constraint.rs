use std::fmt;

use num_bigint::BigInt;

use super::{ClockError, ClockId, ClockSet, Valuation, MAX_CONSTANT};
use crate::clocks::zone::Bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Lt,
    Le,
    Ge,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

/// `left ⋈ k` or, with `right` present, `left - right ⋈ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub left: ClockId,
    pub right: Option<ClockId>,
    pub rel: Relation,
    pub constant: i64,
}

impl Atom {
    pub fn single(clock: ClockId, rel: Relation, constant: i64) -> Result<Self, ClockError> {
        Self::build(clock, None, rel, constant)
    }

    pub fn difference(
        left: ClockId,
        right: ClockId,
        rel: Relation,
        constant: i64,
    ) -> Result<Self, ClockError> {
        Self::build(left, Some(right), rel, constant)
    }

    fn build(
        left: ClockId,
        right: Option<ClockId>,
        rel: Relation,
        constant: i64,
    ) -> Result<Self, ClockError> {
        if constant.abs() > MAX_CONSTANT {
            return Err(ClockError::ConstantOutOfRange(constant));
        }
        Ok(Atom {
            left,
            right,
            rel,
            constant,
        })
    }

    pub fn is_diagonal(&self) -> bool {
        self.right.is_some()
    }

    pub fn clocks(&self) -> impl Iterator<Item = ClockId> {
        std::iter::once(self.left).chain(self.right)
    }

    /// The DBM entry `(row, col, bound)` meaning `x_row - x_col ⋈ bound`.
    pub fn entry(&self) -> (usize, usize, Bound) {
        let l = self.left.index();
        let r = self.right.map_or(0, ClockId::index);
        let k = self.constant;
        match self.rel {
            Relation::Le => (l, r, Bound::le(k)),
            Relation::Lt => (l, r, Bound::lt(k)),
            Relation::Ge => (r, l, Bound::le(-k)),
            Relation::Gt => (r, l, Bound::lt(-k)),
        }
    }

    pub fn satisfied_by(&self, v: &Valuation) -> Result<bool, ClockError> {
        let lhs = match self.right {
            None => v.get(self.left)?.clone(),
            Some(r) => v.get(self.left)? - v.get(r)?,
        };
        let k = super::Time::from_integer(BigInt::from(self.constant));
        Ok(self.rel.holds(&lhs, &k))
    }

    pub fn render(&self, clocks: &ClockSet) -> String {
        match self.right {
            None => format!(
                "{}{}{}",
                clocks.name(self.left),
                self.rel.symbol(),
                self.constant
            ),
            Some(r) => format!(
                "{}-{}{}{}",
                clocks.name(self.left),
                clocks.name(r),
                self.rel.symbol(),
                self.constant
            ),
        }
    }
}

fn render_atoms(atoms: &[Atom], clocks: &ClockSet) -> String {
    if atoms.is_empty() {
        "true".to_string()
    } else {
        atoms
            .iter()
            .map(|a| a.render(clocks))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

fn check_clocks(atoms: &[Atom], clocks: &ClockSet) -> Result<(), ClockError> {
    for a in atoms {
        for c in a.clocks() {
            clocks.check(c)?;
        }
    }
    Ok(())
}

/// Conjunction of single-clock comparisons. The empty conjunction is `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ClockConstraint(Vec<Atom>);

impl ClockConstraint {
    pub fn new(atoms: Vec<Atom>, clocks: &ClockSet) -> Result<Self, ClockError> {
        if let Some(a) = atoms.iter().find(|a| a.is_diagonal()) {
            return Err(ClockError::DiagonalAtom(a.render(clocks)));
        }
        check_clocks(&atoms, clocks)?;
        Ok(ClockConstraint(atoms))
    }

    pub fn truth() -> Self {
        ClockConstraint(Vec::new())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn is_true(&self) -> bool {
        self.0.is_empty()
    }

    pub fn and(&self, other: &ClockConstraint) -> ClockConstraint {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        ClockConstraint(atoms)
    }

    /// Rewrites clock ids through `map` (indexed by old id).
    pub fn map_clocks(&self, map: &[ClockId]) -> ClockConstraint {
        ClockConstraint(
            self.0
                .iter()
                .map(|a| Atom {
                    left: map[a.left.index()],
                    right: a.right.map(|r| map[r.index()]),
                    ..*a
                })
                .collect(),
        )
    }

    pub fn satisfied_by(&self, v: &Valuation) -> Result<bool, ClockError> {
        satisfied(&self.0, v)
    }

    /// Largest absolute constant compared against each clock, indexed by clock id.
    pub fn max_constants_into(&self, out: &mut [i64]) {
        for a in &self.0 {
            let k = a.constant.abs();
            for c in a.clocks() {
                out[c.index()] = out[c.index()].max(k);
            }
        }
    }

    pub fn render(&self, clocks: &ClockSet) -> String {
        render_atoms(&self.0, clocks)
    }
}

/// Conjunction of single-clock and difference comparisons.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExtendedConstraint(Vec<Atom>);

impl ExtendedConstraint {
    pub fn new(atoms: Vec<Atom>, clocks: &ClockSet) -> Result<Self, ClockError> {
        check_clocks(&atoms, clocks)?;
        Ok(ExtendedConstraint(atoms))
    }

    pub fn truth() -> Self {
        ExtendedConstraint(Vec::new())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn into_atoms(self) -> Vec<Atom> {
        self.0
    }

    pub fn satisfied_by(&self, v: &Valuation) -> Result<bool, ClockError> {
        satisfied(&self.0, v)
    }

    pub fn render(&self, clocks: &ClockSet) -> String {
        render_atoms(&self.0, clocks)
    }
}

impl From<ClockConstraint> for ExtendedConstraint {
    fn from(c: ClockConstraint) -> Self {
        ExtendedConstraint(c.0)
    }
}

fn satisfied(atoms: &[Atom], v: &Valuation) -> Result<bool, ClockError> {
    for a in atoms {
        if !a.satisfied_by(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

pub(super) fn parse(clocks: &ClockSet, text: &str) -> Result<ExtendedConstraint, ClockError> {
    let syntax = |reason: &str| ClockError::Syntax {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "true" {
        return Ok(ExtendedConstraint::truth());
    }
    let mut atoms = Vec::new();
    for part in trimmed.split('&') {
        let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
        if part.is_empty() {
            return Err(syntax("empty conjunct"));
        }
        let op_at = part
            .find(['<', '>', '='])
            .ok_or_else(|| syntax("missing comparison operator"))?;
        let (lhs, rest) = part.split_at(op_at);
        let (ops, rhs): (Vec<Relation>, &str) = if let Some(r) = rest.strip_prefix("<=") {
            (vec![Relation::Le], r)
        } else if let Some(r) = rest.strip_prefix(">=") {
            (vec![Relation::Ge], r)
        } else if let Some(r) = rest.strip_prefix("==") {
            (vec![Relation::Le, Relation::Ge], r)
        } else if let Some(r) = rest.strip_prefix('<') {
            (vec![Relation::Lt], r)
        } else if let Some(r) = rest.strip_prefix('>') {
            (vec![Relation::Gt], r)
        } else if let Some(r) = rest.strip_prefix('=') {
            (vec![Relation::Le, Relation::Ge], r)
        } else {
            return Err(syntax("bad operator"));
        };
        let constant: i64 = rhs
            .parse()
            .map_err(|_| syntax(&format!("bad integer constant `{rhs}`")))?;
        // `x-y` (difference) or `x`; clock names never contain '-'
        let (left, right) = match lhs.split_once('-') {
            Some((l, r)) => (clocks.id(l)?, Some(clocks.id(r)?)),
            None => (clocks.id(lhs)?, None),
        };
        for rel in ops {
            atoms.push(Atom::build(left, right, rel, constant)?);
        }
    }
    Ok(ExtendedConstraint(atoms))
}
