//! Difference bound matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Atom, ClockId, ClockSet, Time, Valuation};

/// Upper bound on a clock difference, `(< k)` or `(<= k)` or unbounded.
///
/// Encoded as `k << 1 | nonstrict` so the derived ordering is the tightness
/// order: `(< k)` sorts before `(<= k)`, which sorts before `(< k + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound(i64);

impl Bound {
    pub const INFINITY: Bound = Bound(i64::MAX);
    pub const LE_ZERO: Bound = Bound(1);
    pub const LT_ZERO: Bound = Bound(0);

    pub fn le(k: i64) -> Bound {
        Bound((k << 1) | 1)
    }

    pub fn lt(k: i64) -> Bound {
        Bound(k << 1)
    }

    pub fn is_infinite(self) -> bool {
        self == Bound::INFINITY
    }

    pub fn constant(self) -> Option<i64> {
        (!self.is_infinite()).then_some(self.0 >> 1)
    }

    pub fn is_strict(self) -> bool {
        self.0 & 1 == 0
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Bound) -> Bound {
        if self.is_infinite() || other.is_infinite() {
            Bound::INFINITY
        } else {
            Bound((((self.0 >> 1) + (other.0 >> 1)) << 1) | (self.0 & other.0 & 1))
        }
    }

    fn admits(self, diff: &Time) -> bool {
        match self.constant() {
            None => true,
            Some(k) => {
                let k = Time::from_integer(BigInt::from(k));
                if self.is_strict() {
                    *diff < k
                } else {
                    *diff <= k
                }
            }
        }
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant() {
            None => write!(f, "inf"),
            Some(k) if self.is_strict() => write!(f, "<{k}"),
            Some(k) => write!(f, "<={k}"),
        }
    }
}

/// A convex set of valuations stored as a difference bound matrix.
///
/// Entry `(i, j)` bounds `x_i - x_j`, with row and column 0 standing for the
/// constant zero. All public operations keep the matrix in canonical
/// (shortest-path closed) form, except [`Zone::from_bounds`]; every empty zone
/// shares one representative so that equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Zone {
    dim: usize,
    m: Vec<Bound>,
    empty: bool,
}

impl Zone {
    /// All non-negative valuations over `clocks` user clocks.
    pub fn universe(clocks: usize) -> Zone {
        let dim = clocks + 1;
        let mut m = vec![Bound::INFINITY; dim * dim];
        for j in 0..dim {
            m[j] = Bound::LE_ZERO;
            m[j * dim + j] = Bound::LE_ZERO;
        }
        Zone {
            dim,
            m,
            empty: false,
        }
    }

    /// The single valuation with every clock at zero.
    pub fn origin(clocks: usize) -> Zone {
        let dim = clocks + 1;
        Zone {
            dim,
            m: vec![Bound::LE_ZERO; dim * dim],
            empty: false,
        }
    }

    pub fn empty(clocks: usize) -> Zone {
        let dim = clocks + 1;
        Zone {
            dim,
            m: vec![Bound::LT_ZERO; dim * dim],
            empty: true,
        }
    }

    pub fn from_atoms<'a>(clocks: usize, atoms: impl IntoIterator<Item = &'a Atom>) -> Zone {
        let mut z = Zone::universe(clocks);
        z.constrain(atoms);
        z
    }

    /// Raw, possibly non-canonical matrix in row-major order. Call
    /// [`Zone::canonicalize`] before using any other operation.
    pub fn from_bounds(clocks: usize, bounds: Vec<Bound>) -> Zone {
        let dim = clocks + 1;
        assert_eq!(bounds.len(), dim * dim, "matrix size");
        Zone {
            dim,
            m: bounds,
            empty: false,
        }
    }

    pub fn clocks(&self) -> usize {
        self.dim - 1
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn at(&self, i: usize, j: usize) -> Bound {
        self.m[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, b: Bound) {
        self.m[i * self.dim + j] = b;
    }

    fn make_empty(&mut self) {
        *self = Zone::empty(self.clocks());
    }

    /// Floyd-Warshall closure; a negative cycle makes the zone empty.
    pub fn canonicalize(&mut self) {
        if self.empty {
            return;
        }
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let ik = self.at(i, k);
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let cand = ik.add(self.at(k, j));
                    if cand < self.at(i, j) {
                        self.set(i, j, cand);
                    }
                }
            }
            if (0..n).any(|i| self.at(i, i) < Bound::LE_ZERO) {
                self.make_empty();
                return;
            }
        }
    }

    /// Intersects with `x_i - x_j ⋈ b`, keeping canonical form.
    pub fn and_entry(&mut self, i: usize, j: usize, b: Bound) {
        if self.empty || b >= self.at(i, j) {
            return;
        }
        if self.at(j, i).add(b) < Bound::LE_ZERO {
            self.make_empty();
            return;
        }
        self.set(i, j, b);
        let n = self.dim;
        for k in 0..n {
            let ki = self.at(k, i);
            if ki.is_infinite() {
                continue;
            }
            let kij = ki.add(b);
            for l in 0..n {
                let cand = kij.add(self.at(j, l));
                if cand < self.at(k, l) {
                    self.set(k, l, cand);
                }
            }
        }
    }

    pub fn constrain<'a>(&mut self, atoms: impl IntoIterator<Item = &'a Atom>) {
        for a in atoms {
            let (i, j, b) = a.entry();
            self.and_entry(i, j, b);
        }
    }

    pub fn constrained<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> Zone {
        let mut z = self.clone();
        z.constrain(atoms);
        z
    }

    pub fn intersect(&self, other: &Zone) -> Zone {
        assert_eq!(self.dim, other.dim, "zones over different clock sets");
        if self.empty || other.empty {
            return Zone::empty(self.clocks());
        }
        let mut out = self.clone();
        for (a, b) in out.m.iter_mut().zip(&other.m) {
            *a = (*a).min(*b);
        }
        out.canonicalize();
        out
    }

    /// Future closure: `{ v + d | v ∈ Z, d >= 0 }`.
    pub fn up(&self) -> Zone {
        let mut out = self.clone();
        if !out.empty {
            for i in 1..out.dim {
                out.set(i, 0, Bound::INFINITY);
            }
        }
        out
    }

    /// Past closure: `{ v | v + d ∈ Z for some d >= 0 }`.
    pub fn down(&self) -> Zone {
        let mut out = self.clone();
        if out.empty {
            return out;
        }
        for j in 1..out.dim {
            let mut b = Bound::LE_ZERO;
            for i in 1..out.dim {
                b = b.min(out.at(i, j));
            }
            out.set(0, j, b);
        }
        out
    }

    /// Sets every clock in `clocks` to zero.
    pub fn reset(&self, clocks: &[ClockId]) -> Zone {
        let mut out = self.clone();
        if out.empty {
            return out;
        }
        for &c in clocks {
            let c = c.index();
            for j in 0..out.dim {
                let (r, col) = (out.at(0, j), out.at(j, 0));
                out.set(c, j, r);
                out.set(j, c, col);
            }
            out.set(c, c, Bound::LE_ZERO);
        }
        out
    }

    /// Removes every constraint on the given clocks (existential projection).
    pub fn free(&self, clocks: &[ClockId]) -> Zone {
        let mut out = self.clone();
        if out.empty {
            return out;
        }
        for &c in clocks {
            let c = c.index();
            for i in 0..out.dim {
                if i != c {
                    out.set(c, i, Bound::INFINITY);
                    let b = out.at(i, 0);
                    out.set(i, c, b);
                }
            }
        }
        out
    }

    /// Set inclusion `other ⊆ self`, assuming both are canonical.
    pub fn includes(&self, other: &Zone) -> bool {
        if other.empty {
            return true;
        }
        if self.empty {
            return false;
        }
        self.m.iter().zip(&other.m).all(|(a, b)| b <= a)
    }

    /// Extrapolation with per-clock maximal constants `k` (indexed by clock id,
    /// `k[0] == 0`). The result over-approximates the zone and is still
    /// bounded by the same constants.
    pub fn normalize(&self, k: &[i64]) -> Zone {
        if self.empty {
            return self.clone();
        }
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = out.at(i, j);
                if b.is_infinite() {
                    continue;
                }
                if b > Bound::le(k[i]) {
                    out.set(i, j, Bound::INFINITY);
                } else if b < Bound::lt(-k[j]) {
                    out.set(i, j, Bound::lt(-k[j]));
                }
            }
        }
        out.canonicalize();
        out
    }

    pub fn contains(&self, v: &Valuation) -> bool {
        if self.empty || v.len() != self.clocks() {
            return false;
        }
        let val = |i: usize| -> Time {
            if i == 0 {
                Time::zero()
            } else {
                v.values()[i - 1].clone()
            }
        };
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && !self.at(i, j).admits(&(val(i) - val(j))) {
                    return false;
                }
            }
        }
        true
    }

    /// Some valuation inside the zone, chosen clock by clock with a
    /// preference for small values.
    pub fn pick_point(&self) -> Option<Valuation> {
        if self.empty {
            return None;
        }
        let mut vals: Vec<Time> = vec![Time::zero()];
        for c in 1..self.dim {
            let mut win = Window::unbounded_from_zero();
            for (j, vj) in vals.iter().enumerate() {
                // x_c - x_j <= m[c][j]  and  x_j - x_c <= m[j][c]
                win.cap_above(vj, self.at(c, j));
                win.cap_below(vj, self.at(j, c));
            }
            vals.push(win.pick()?);
        }
        vals.remove(0);
        Valuation::new(vals).ok()
    }

    /// Smallest convenient delay `d >= 0` with `v + d` in the zone.
    pub fn pick_delay(&self, v: &Valuation) -> Option<Time> {
        if self.empty || v.len() != self.clocks() {
            return None;
        }
        let mut win = Window::unbounded_from_zero();
        for c in 1..self.dim {
            let neg = -v.values()[c - 1].clone();
            // v_c + d <= m[c][0]  and  -(v_c + d) <= m[0][c]
            win.cap_above(&neg, self.at(c, 0));
            win.cap_below(&neg, self.at(0, c));
        }
        let d = win.pick()?;
        let w = v.delay(&d).ok()?;
        self.contains(&w).then_some(d)
    }

    /// Non-redundant entries `(i, j, bound)` describing the zone, excluding
    /// the implicit `x >= 0` bounds, in matrix order.
    pub fn minimal_entries(&self) -> Vec<(usize, usize, Bound)> {
        if self.empty {
            return Vec::new();
        }
        let mut kept: Vec<(usize, usize, Bound)> = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = self.at(i, j);
                if i == j || b.is_infinite() || (i == 0 && b == Bound::LE_ZERO) {
                    continue;
                }
                kept.push((i, j, b));
            }
        }
        // try dropping difference entries first so single-clock bounds survive
        let mut order: Vec<usize> = (0..kept.len()).collect();
        order.sort_by_key(|&n| (kept[n].0 == 0 || kept[n].1 == 0, n));
        let mut alive = vec![true; kept.len()];
        for idx in order {
            let (i, j, b) = kept[idx];
            let mut without = Zone::universe(self.clocks());
            for (n, &(p, q, c)) in kept.iter().enumerate() {
                if n != idx && alive[n] {
                    without.and_entry(p, q, c);
                }
            }
            if without.at(i, j) <= b {
                alive[idx] = false;
            }
        }
        kept.into_iter()
            .zip(alive)
            .filter_map(|(e, a)| a.then_some(e))
            .collect()
    }

    /// Minimal constraint list such as `x-y<=2 & y<=3`, sorted; `true` for
    /// the universe and `false` for the empty zone.
    pub fn render(&self, clocks: &ClockSet) -> String {
        if self.empty {
            return "false".to_string();
        }
        let entries = self.minimal_entries();
        let mut used = vec![false; entries.len()];
        let mut parts = Vec::new();
        for (n, &(i, j, b)) in entries.iter().enumerate() {
            if used[n] {
                continue;
            }
            used[n] = true;
            let k = b.constant().expect("finite entry");
            // pair x_i - x_j <= k with x_j - x_i <= -k into an equality
            let twin = (!b.is_strict())
                .then(|| {
                    entries.iter().enumerate().position(|(m, &(p, q, c))| {
                        !used[m] && p == j && q == i && c == Bound::le(-k)
                    })
                })
                .flatten();
            if let Some(m) = twin {
                used[m] = true;
                parts.push(match (i, j) {
                    (0, c) => format!("{}={}", clocks.name(ClockId(c as u16)), -k),
                    (c, 0) => format!("{}={}", clocks.name(ClockId(c as u16)), k),
                    (p, q) if p < q => format!("{}-{}={}", name(clocks, p), name(clocks, q), k),
                    (p, q) => format!("{}-{}={}", name(clocks, q), name(clocks, p), -k),
                });
                continue;
            }
            if j == 0 && b == Bound::LE_ZERO {
                parts.push(format!("{}=0", name(clocks, i)));
                continue;
            }
            let op = if b.is_strict() { "<" } else { "<=" };
            let flipped = if b.is_strict() { ">" } else { ">=" };
            parts.push(match (i, j) {
                (c, 0) => format!("{}{op}{k}", name(clocks, c)),
                (0, c) => format!("{}{flipped}{}", name(clocks, c), -k),
                (p, q) => format!("{}-{}{op}{k}", name(clocks, p), name(clocks, q)),
            });
        }
        if parts.is_empty() {
            return "true".to_string();
        }
        parts.sort();
        parts.join(" & ")
    }
}

fn name(clocks: &ClockSet, i: usize) -> &str {
    clocks.name(ClockId(i as u16))
}

impl fmt::Debug for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "Zone(empty)");
        }
        write!(f, "Zone[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Interval of admissible values for one unknown, with strictness flags.
struct Window {
    lo: Time,
    lo_strict: bool,
    hi: Option<(Time, bool)>,
}

impl Window {
    fn unbounded_from_zero() -> Window {
        Window {
            lo: Time::zero(),
            lo_strict: false,
            hi: None,
        }
    }

    /// `unknown - base <= b`, i.e. `unknown <= base + b`.
    fn cap_above(&mut self, base: &Time, b: Bound) {
        let Some(k) = b.constant() else { return };
        let cand = base + Time::from_integer(BigInt::from(k));
        let strict = b.is_strict();
        match &self.hi {
            Some((h, hs)) if *h < cand || (*h == cand && (*hs || !strict)) => {}
            _ => self.hi = Some((cand, strict)),
        }
    }

    /// `base - unknown <= b`, i.e. `unknown >= base - b`.
    fn cap_below(&mut self, base: &Time, b: Bound) {
        let Some(k) = b.constant() else { return };
        let cand = base - Time::from_integer(BigInt::from(k));
        let strict = b.is_strict();
        if cand > self.lo || (cand == self.lo && strict) {
            self.lo = cand;
            self.lo_strict = strict;
        }
    }

    fn pick(&self) -> Option<Time> {
        if let Some((h, hs)) = &self.hi {
            if *h < self.lo || (*h == self.lo && (*hs || self.lo_strict)) {
                return None;
            }
        }
        if !self.lo_strict {
            return Some(self.lo.clone());
        }
        let two = Time::from_integer(BigInt::from(2));
        Some(match &self.hi {
            Some((h, _)) => (&self.lo + h) / two,
            None => &self.lo + Time::one() / two,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocks::{time, ClockSet};
    use proptest::prelude::*;

    fn xy() -> ClockSet {
        ClockSet::new(["x", "y"]).unwrap()
    }

    fn zone(c: &ClockSet, text: &str) -> Zone {
        Zone::from_atoms(c.len(), c.parse_constraint(text).unwrap().atoms())
    }

    #[test]
    fn bound_arithmetic_and_order() {
        assert!(Bound::lt(3) < Bound::le(3));
        assert!(Bound::le(3) < Bound::lt(4));
        assert!(Bound::lt(-2) < Bound::le(-2));
        assert_eq!(Bound::le(-2).constant(), Some(-2));
        assert_eq!(Bound::le(2).add(Bound::le(-3)), Bound::le(-1));
        assert_eq!(Bound::le(2).add(Bound::lt(1)), Bound::lt(3));
        assert_eq!(Bound::le(2).add(Bound::INFINITY), Bound::INFINITY);
    }

    #[test]
    fn closure_derives_implied_bound() {
        let c = xy();
        let mut raw = Zone::universe(2);
        raw.set(1, 2, Bound::le(1));
        raw.set(2, 0, Bound::le(2));
        raw.canonicalize();
        assert_eq!(raw.at(1, 0), Bound::le(3));
        assert_eq!(raw, zone(&c, "x-y<=1 & y<=2"));
    }

    #[test]
    fn contradiction_is_empty() {
        let c = xy();
        let z = zone(&c, "x<=1 & x>1");
        assert!(z.is_empty());
        assert_eq!(z, zone(&c, "y>=5 & y-x<=1 & x<=2"));
        assert_eq!(z, Zone::empty(2));
    }

    #[test]
    fn delay_reset_and_inclusion() {
        let c = xy();
        let z = Zone::origin(2).up();
        assert_eq!(z.render(&c), "x-y=0");
        let r = zone(&c, "x<=4 & x>=1").reset(&[ClockId(2)]);
        assert_eq!(r.render(&c), "x<=4 & x>=1 & y=0");
        assert!(z.includes(&Zone::origin(2)));
        assert!(!Zone::origin(2).includes(&z));
        assert!(Zone::universe(2).includes(&z));
        assert!(z.includes(&Zone::empty(2)));
    }

    #[test]
    fn normalization_drops_large_bounds() {
        let c = ClockSet::new(["x"]).unwrap();
        let z = zone(&c, "x>=7");
        assert_eq!(z.normalize(&[0, 3]).render(&c), "x>3");
        let w = zone(&c, "x<=2");
        assert_eq!(w.normalize(&[0, 3]), w);
    }

    #[test]
    fn rendering() {
        let c = xy();
        assert_eq!(Zone::universe(2).render(&c), "true");
        assert_eq!(Zone::empty(2).render(&c), "false");
        assert_eq!(
            zone(&c, "x>=2 & x-y>=0 & x-y<=4").render(&c),
            "x-y<=4 & x>=2 & y-x<=0"
        );
    }

    #[test]
    fn picks() {
        let c = xy();
        let z = zone(&c, "x>1 & x<2 & y-x>=1");
        let p = z.pick_point().unwrap();
        assert!(z.contains(&p));
        let v = Valuation::zero(2);
        let d = zone(&c, "x>=3").pick_delay(&v).unwrap();
        assert_eq!(d, time(3, 1));
        assert!(zone(&c, "x-y>=1").pick_delay(&v).is_none());
        assert!(Zone::empty(2).pick_point().is_none());
    }

    #[test]
    fn down_and_free() {
        let c = xy();
        let z = zone(&c, "x>=3 & y<=5 & x-y<=1");
        let d = z.down();
        assert!(d.contains(&Valuation::zero(2)));
        assert!(!d.contains(&Valuation::from_f64s(&[0.0, 5.0])));
        assert_eq!(zone(&c, "x<=2 & y=0").free(&[ClockId(2)]), zone(&c, "x<=2"));
    }

    fn atom_strategy(clocks: usize) -> impl Strategy<Value = Atom> {
        (1..=clocks as u16, 0..=clocks as u16, 0..4usize, -2i64..7).prop_map(|(l, r, rel, k)| {
            let rel = [Relation::Lt, Relation::Le, Relation::Ge, Relation::Gt][rel];
            if r == 0 || r == l {
                Atom::single(ClockId(l), rel, k.abs()).unwrap()
            } else {
                Atom::difference(ClockId(l), ClockId(r), rel, k).unwrap()
            }
        })
    }

    use crate::clocks::Relation;

    fn atoms(clocks: usize) -> impl Strategy<Value = Vec<Atom>> {
        proptest::collection::vec(atom_strategy(clocks), 0..5)
    }

    fn point(clocks: usize) -> impl Strategy<Value = Valuation> {
        proptest::collection::vec(0i64..36, clocks)
            .prop_map(|q| Valuation::new(q.into_iter().map(|n| time(n, 4)).collect()).unwrap())
    }

    fn holds(atoms: &[Atom], v: &Valuation) -> bool {
        atoms.iter().all(|a| a.satisfied_by(v).unwrap())
    }

    proptest! {
        #[test]
        fn membership_matches_constraints(a in atoms(3), v in point(3)) {
            let z = Zone::from_atoms(3, &a);
            prop_assert_eq!(z.contains(&v), holds(&a, &v));
        }

        #[test]
        fn canonical_form_is_idempotent(a in atoms(3)) {
            let z = Zone::from_atoms(3, &a);
            let mut again = z.clone();
            again.canonicalize();
            prop_assert_eq!(again, z);
        }

        #[test]
        fn incremental_matches_full_closure(a in atoms(3)) {
            let mut raw = Zone::universe(3);
            let mut contradiction = false;
            for at in &a {
                let (i, j, b) = at.entry();
                if b < raw.at(i, j) { raw.set(i, j, b); }
                contradiction |= i == j && b < Bound::LE_ZERO;
            }
            raw.canonicalize();
            let inc = Zone::from_atoms(3, &a);
            prop_assert!(contradiction || raw == inc);
        }

        #[test]
        fn delay_is_closure(a in atoms(2), v in point(2), d in 0i64..20) {
            let z = Zone::from_atoms(2, &a);
            let up = z.up();
            prop_assert_eq!(up.up(), up.clone());
            prop_assert!(up.includes(&z));
            if z.contains(&v) {
                prop_assert!(up.contains(&v.delay(&time(d, 4)).unwrap()));
            }
        }

        #[test]
        fn reset_maps_points(a in atoms(3), v in point(3), mask in 0u8..8) {
            let z = Zone::from_atoms(3, &a);
            let r: Vec<ClockId> = (1..=3u16).filter(|i| mask & (1 << (i - 1)) != 0).map(ClockId).collect();
            if z.contains(&v) {
                prop_assert!(z.reset(&r).contains(&v.reset(&r).unwrap()));
            }
        }

        #[test]
        fn normalization_is_idempotent_and_widening(a in atoms(3), ks in proptest::collection::vec(0i64..5, 3)) {
            let mut k = vec![0];
            k.extend(ks);
            let z = Zone::from_atoms(3, &a);
            let n = z.normalize(&k);
            prop_assert!(n.includes(&z));
            prop_assert_eq!(n.normalize(&k), n);
        }

        #[test]
        fn inclusion_agrees_with_points(a in atoms(2), b in atoms(2), v in point(2)) {
            let (za, zb) = (Zone::from_atoms(2, &a), Zone::from_atoms(2, &b));
            if za.includes(&zb) && zb.contains(&v) {
                prop_assert!(za.contains(&v));
            }
            let both = za.intersect(&zb);
            prop_assert_eq!(both.clone(), zb.intersect(&za));
            prop_assert_eq!(both.contains(&v), za.contains(&v) && zb.contains(&v));
        }

        #[test]
        fn picked_points_are_members(a in atoms(3)) {
            let z = Zone::from_atoms(3, &a);
            match z.pick_point() {
                Some(p) => prop_assert!(z.contains(&p)),
                None => prop_assert!(z.is_empty()),
            }
        }

        #[test]
        fn past_closure_admits_delay(a in atoms(3), v in point(3)) {
            let z = Zone::from_atoms(3, &a);
            let past = z.down();
            prop_assert_eq!(past.contains(&v), z.pick_delay(&v).is_some());
            if z.contains(&v) {
                prop_assert!(past.contains(&v));
            }
        }

        #[test]
        fn minimal_entries_describe_zone(a in atoms(3)) {
            let z = Zone::from_atoms(3, &a);
            let mut rebuilt = Zone::universe(3);
            for (i, j, b) in z.minimal_entries() {
                rebuilt.and_entry(i, j, b);
            }
            if !z.is_empty() {
                prop_assert_eq!(rebuilt, z);
            }
        }
    }
}
