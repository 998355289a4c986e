//! Tensor product of HDTA and an isomorphism check between models.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::clocks::{ClockError, ClockId, ClockSet, Zone};
use crate::hdta::{CubeSpec, HdtaModel, ModelError};
use crate::precubical::{CubeId, Side};

type Candidates<'a> = dyn 'a + Fn(&[Option<CubeId>], CubeId) -> Vec<CubeId>;
type Consistent<'a> = dyn 'a + Fn(&[Option<CubeId>], CubeId, CubeId) -> bool;

/// What to do when both factors declare a clock with the same name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClockPolicy {
    #[default]
    Reject,
    /// Rename each colliding clock to `l.NAME` in the left factor and
    /// `r.NAME` in the right one.
    Prefix,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("clock `{0}` is declared by both factors (enable clock renaming to prefix it)")]
    ClockCollision(String),
    #[error("product dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
    #[error(transparent)]
    Clock(#[from] ClockError),
    #[error("product failed validation: {0}")]
    Model(#[from] ModelError),
}

/// A cube of the product, as the pair of factor cubes it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductCubeId {
    pub left: CubeId,
    pub right: CubeId,
}

/// Name of the product cube `(a, b)`.
pub fn product_name(a: &str, b: &str) -> String {
    format!("{a}*{b}")
}

/// The product cube for `(left, right)` in [`tensor`]'s output, which lists
/// cubes in left-major order.
pub fn product_cube(right_len: usize, p: ProductCubeId) -> CubeId {
    CubeId((p.left.index() * right_len + p.right.index()) as u32)
}

/// Tensor product. Cube `(a, b)` has dimension `dim a + dim b`, label
/// `λ(a) + λ(b)`, invariant `inv(a) ∧ inv(b)` and exit set
/// `exit(a) ∪ exit(b)`; its first `dim a` faces are taken in `a`, the rest
/// in `b`. The clocks of the left factor come first.
pub fn tensor(
    left: &HdtaModel,
    right: &HdtaModel,
    policy: ClockPolicy,
) -> Result<HdtaModel, ComposeError> {
    let dim = left.dimension() + right.dimension();
    if dim > crate::precubical::MAX_DIMENSION {
        return Err(ComposeError::DimensionTooLarge(dim));
    }
    let lnames: BTreeSet<&str> = left.clocks().names().iter().map(String::as_str).collect();
    let rnames: BTreeSet<&str> = right.clocks().names().iter().map(String::as_str).collect();
    let shared: BTreeSet<&str> = lnames.intersection(&rnames).copied().collect();
    if let (ClockPolicy::Reject, Some(c)) = (policy, shared.first()) {
        return Err(ComposeError::ClockCollision(c.to_string()));
    }
    let mut clocks = ClockSet::default();
    let mut embed = |from: &ClockSet, prefix: &str| -> Result<Vec<ClockId>, ClockError> {
        let mut map = vec![ClockId::REFERENCE];
        for name in from.names() {
            let name = if shared.contains(name.as_str()) {
                format!("{prefix}.{name}")
            } else {
                name.clone()
            };
            map.push(clocks.push(name)?);
        }
        Ok(map)
    };
    let lmap = embed(left.clocks(), "l")?;
    let rmap = embed(right.clocks(), "r")?;

    let (ls, rs) = (left.space(), right.space());
    let name = |a: CubeId, b: CubeId| product_name(ls.name(a), rs.name(b));
    let mut cubes = Vec::with_capacity(ls.len() * rs.len());
    for a in ls.ids() {
        for b in rs.ids() {
            let faces = |side: Side| -> Vec<String> {
                let mut out: Vec<String> = ls
                    .cube(a)
                    .faces(side)
                    .iter()
                    .map(|&fa| name(fa, b))
                    .collect();
                out.extend(rs.cube(b).faces(side).iter().map(|&fb| name(a, fb)));
                out
            };
            let mut exit: Vec<ClockId> = left.exit(a).iter().map(|c| lmap[c.index()]).collect();
            exit.extend(right.exit(b).iter().map(|c| rmap[c.index()]));
            cubes.push(CubeSpec {
                name: name(a, b),
                lower: faces(Side::Lower),
                upper: faces(Side::Upper),
                label: ls.cube(a).label.sum(&rs.cube(b).label),
                inv: left
                    .inv(a)
                    .map_clocks(&lmap)
                    .and(&right.inv(b).map_clocks(&rmap)),
                exit,
            });
        }
    }
    let alphabet = left
        .hda()
        .alphabet
        .union(&right.hda().alphabet)
        .cloned()
        .collect();
    let finals: Vec<String> = left
        .hda()
        .finals
        .iter()
        .flat_map(|&a| right.hda().finals.iter().map(move |&b| (a, b)))
        .map(|(a, b)| name(a, b))
        .collect();
    Ok(HdtaModel::assemble(
        clocks,
        alphabet,
        cubes,
        &name(left.initial(), right.initial()),
        &finals,
    )?)
}

/// Comparable per-cube data; invariants are compared as zones over the
/// clocks of the first model.
#[derive(PartialEq, Eq)]
struct Signature {
    dim: usize,
    label: crate::precubical::Multiset,
    initial: bool,
    is_final: bool,
    inv: Zone,
    exit: Vec<ClockId>,
}

fn signatures(m: &HdtaModel, clock_map: &[ClockId]) -> Vec<Signature> {
    let n = clock_map.len() - 1;
    m.space()
        .ids()
        .map(|x| {
            let inv = m.inv(x).map_clocks(clock_map);
            let mut exit: Vec<ClockId> = m.exit(x).iter().map(|c| clock_map[c.index()]).collect();
            exit.sort();
            Signature {
                dim: m.space().dim(x),
                label: m.space().cube(x).label.clone(),
                initial: x == m.initial(),
                is_final: m.is_final(x),
                inv: Zone::from_atoms(n, inv.atoms()),
                exit,
            }
        })
        .collect()
}

/// `(z, k, side)` for every `z` with `δ_k^side z = x`, indexed by `x`.
fn coface_index(m: &HdtaModel) -> Vec<Vec<(CubeId, usize, Side)>> {
    let sp = m.space();
    let mut out = vec![Vec::new(); sp.len()];
    for z in sp.ids() {
        for side in Side::BOTH {
            for (i, &f) in sp.cube(z).faces(side).iter().enumerate() {
                out[f.index()].push((z, i + 1, side));
            }
        }
    }
    out
}

/// Finds a bijection between the cubes of `a` and `b` that preserves
/// dimension, faces, labels, invariants, exit sets, the initial state and
/// final states. Clocks are matched by name. Returns the image of each cube
/// of `a`, or `None`.
pub fn iso_check(a: &HdtaModel, b: &HdtaModel) -> Option<Vec<CubeId>> {
    let (sa, sb) = (a.space(), b.space());
    if sa.len() != sb.len() || a.clocks().len() != b.clocks().len() {
        return None;
    }
    let ident: Vec<ClockId> = std::iter::once(ClockId::REFERENCE)
        .chain(a.clocks().ids())
        .collect();
    let mut to_a = vec![ClockId::REFERENCE];
    for name in b.clocks().names() {
        to_a.push(a.clocks().id(name).ok()?);
    }
    let siga = signatures(a, &ident);
    let sigb = signatures(b, &to_a);
    let up_a = coface_index(a);
    let up_b = coface_index(b);

    // visit order: breadth-first over the undirected face relation, then
    // anything disconnected from the initial state
    let mut order = vec![a.initial()];
    let mut seen = vec![false; sa.len()];
    seen[a.initial().index()] = true;
    let mut head = 0;
    loop {
        while head < order.len() {
            let x = order[head];
            head += 1;
            let c = sa.cube(x);
            let near = c
                .lower
                .iter()
                .chain(&c.upper)
                .copied()
                .chain(up_a[x.index()].iter().map(|t| t.0));
            for y in near {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    order.push(y);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => {
                seen[i] = true;
                order.push(CubeId(i as u32));
            }
            None => break,
        }
    }

    let mut map: Vec<Option<CubeId>> = vec![None; sa.len()];
    let mut used = vec![false; sb.len()];

    let consistent = |map: &[Option<CubeId>], x: CubeId, y: CubeId| -> bool {
        if siga[x.index()] != sigb[y.index()] {
            return false;
        }
        for side in Side::BOTH {
            let fy = sb.cube(y).faces(side);
            for (i, &f) in sa.cube(x).faces(side).iter().enumerate() {
                if map[f.index()].is_some_and(|g| g != fy[i]) {
                    return false;
                }
            }
        }
        up_a[x.index()]
            .iter()
            .all(|&(z, k, side)| match map[z.index()] {
                Some(w) => sb.face(w, k, side) == y,
                None => true,
            })
    };

    fn search(
        depth: usize,
        order: &[CubeId],
        map: &mut Vec<Option<CubeId>>,
        used: &mut Vec<bool>,
        candidates: &Candidates<'_>,
        consistent: &Consistent<'_>,
    ) -> bool {
        let Some(&x) = order.get(depth) else {
            return true;
        };
        for y in candidates(map, x) {
            if used[y.index()] || !consistent(map, x, y) {
                continue;
            }
            map[x.index()] = Some(y);
            used[y.index()] = true;
            if search(depth + 1, order, map, used, candidates, consistent) {
                return true;
            }
            map[x.index()] = None;
            used[y.index()] = false;
        }
        false
    }

    // a mapped neighbour pins the candidates down to its matching neighbours
    let candidates = |map: &[Option<CubeId>], x: CubeId| -> Vec<CubeId> {
        if x == a.initial() {
            return vec![b.initial()];
        }
        for (z, k, side) in &up_a[x.index()] {
            if let Some(w) = map[z.index()] {
                return vec![sb.face(w, *k, *side)];
            }
        }
        for side in Side::BOTH {
            for (i, &f) in sa.cube(x).faces(side).iter().enumerate() {
                if let Some(g) = map[f.index()] {
                    return up_b[g.index()]
                        .iter()
                        .filter(|t| t.1 == i + 1 && t.2 == side)
                        .map(|t| t.0)
                        .collect();
                }
            }
        }
        sb.ids().collect()
    };

    search(0, &order, &mut map, &mut used, &candidates, &consistent)
        .then(|| map.into_iter().map(|y| y.expect("total")).collect())
}

/// The unit of [`tensor`]: one state, no clocks, invariant true.
pub fn unit_model() -> HdtaModel {
    HdtaModel::assemble(
        ClockSet::default(),
        BTreeSet::new(),
        vec![CubeSpec {
            name: "1".to_string(),
            lower: vec![],
            upper: vec![],
            label: Default::default(),
            inv: crate::clocks::ClockConstraint::truth(),
            exit: vec![],
        }],
        "1",
        &["1".to_string()],
    )
    .expect("unit model is valid")
}

/// Cube counts per dimension predicted for a product from its factors.
pub fn predicted_grade_counts(left: &[usize], right: &[usize]) -> Vec<usize> {
    let mut out = vec![0; left.len() + right.len() - 1];
    for (p, &a) in left.iter().enumerate() {
        for (q, &b) in right.iter().enumerate() {
            out[p + q] += a * b;
        }
    }
    out
}

/// Index of every product cube by its name, for callers that need to map
/// back to factor pairs.
pub fn product_pairs(left: &HdtaModel, right: &HdtaModel) -> HashMap<String, ProductCubeId> {
    let mut out = HashMap::new();
    for a in left.space().ids() {
        for b in right.space().ids() {
            out.insert(
                product_name(left.name(a), right.name(b)),
                ProductCubeId { left: a, right: b },
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig9_product_is_fig3() {
        let p = tensor(
            &fixtures::fig9_a(),
            &fixtures::fig9_b(),
            ClockPolicy::Reject,
        )
        .unwrap();
        assert_eq!(p.grade_counts(), vec![4, 4, 1]);
        let sq = p.space().lookup("ea*eb").unwrap();
        let ab: crate::precubical::Multiset = ["a", "b"].into_iter().collect();
        assert_eq!(p.space().cube(sq).label, ab);
        assert!(iso_check(&p, &fixtures::fig3()).is_some());
        assert!(iso_check(&fixtures::fig3(), &p).is_some());
    }

    #[test]
    fn product_faces_follow_the_case_split() {
        let p = tensor(
            &fixtures::fig9_a(),
            &fixtures::fig9_b(),
            ClockPolicy::Reject,
        )
        .unwrap();
        let sp = p.space();
        let sq = sp.lookup("ea*eb").unwrap();
        assert_eq!(sp.name(sp.face(sq, 1, Side::Lower)), "p0*eb");
        assert_eq!(sp.name(sp.face(sq, 2, Side::Lower)), "ea*q0");
        assert_eq!(sp.name(sp.face(sq, 1, Side::Upper)), "p1*eb");
        assert_eq!(sp.name(sp.face(sq, 2, Side::Upper)), "ea*q1");
        let ids = product_pairs(&fixtures::fig9_a(), &fixtures::fig9_b());
        assert_eq!(product_cube(3, ids["ea*eb"]), sq);
    }

    #[test]
    fn identity_and_non_isomorphic() {
        let m = fixtures::fig3();
        let id = iso_check(&m, &m).unwrap();
        assert!(id.iter().enumerate().all(|(i, y)| y.index() == i));
        assert!(iso_check(&fixtures::fig3(), &fixtures::fig4()).is_none());
    }

    #[test]
    fn unit_law() {
        let m = fixtures::fig5();
        let p = tensor(&m, &unit_model(), ClockPolicy::Reject).unwrap();
        assert!(iso_check(&p, &m).is_some());
        let q = tensor(&unit_model(), &m, ClockPolicy::Reject).unwrap();
        assert!(iso_check(&q, &m).is_some());
    }

    #[test]
    fn collisions() {
        let a = fixtures::fig9_a();
        assert!(matches!(
            tensor(&a, &a, ClockPolicy::Reject),
            Err(ComposeError::ClockCollision(c)) if c == "x"
        ));
        let p = tensor(&a, &a, ClockPolicy::Prefix).unwrap();
        assert_eq!(p.clocks().names(), ["l.x", "r.x"]);
        assert_eq!(p.grade_counts(), predicted_grade_counts(&[2, 1], &[2, 1]));
    }
}
