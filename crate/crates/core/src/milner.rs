//! Benchmark family in the style of a real-time Milner scheduler.
//!
//! This is a reconstruction: the structure follows the textual description
//! (per node, a timed work action and an untimed token pass that are
//! independent of each other), but the concrete guards are chosen here.
//! Node `i` has clock `x{i}` and actions `w{i}` (work) and `p{i}` (pass):
//!
//! ```text
//!   n{i}.00 --w--> n{i}.10
//!      |             |
//!      p   n{i}.wp   p
//!      v             v
//!   n{i}.01 --w--> n{i}.11
//! ```
//!
//! Every node is activated at time 0: `n{i}.00` carries `x{i} <= 0` and
//! resets `x{i}` on exit, so `x{i}` measures time since activation. Work
//! completes between `d` and `D` after activation: `x{i} <= D` holds on every
//! cube where work is running and `x{i} >= d` on every cube reached after it
//! finished. Passing the token is untimed.
//!
//! The HDTA variant is the tensor product of the N squares. The interleaved
//! variant drops the squares, so work and pass of one node cannot overlap,
//! and composes the resulting timed automata by interleaving before turning
//! the product into a one-dimensional HDTA.

use thiserror::Error;

use crate::clocks::{Atom, ClockConstraint, ClockSet, Relation};
use crate::compose::{tensor, ClockPolicy, ComposeError};
use crate::convert::{interleave, one_dta_to_ta, ta_to_1dta, ConvertError};
use crate::hdta::{zone_reach, CubeSpec, HdtaModel, ReachStats, ZoneOptions};
use crate::precubical::{Multiset, MAX_DIMENSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchSpec {
    pub n: usize,
    pub d: i64,
    pub big_d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("timing bounds must satisfy 0 <= d <= D (got d={d}, D={big_d})")]
    Bounds { d: i64, big_d: i64 },
    #[error("{n} nodes give dimension {dim}, above the maximum {max}")]
    TooManyNodes { n: usize, dim: usize, max: usize },
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Convert(#[from] ConvertError),
}

impl BenchSpec {
    pub fn check(&self) -> Result<(), BenchError> {
        if self.n == 0 {
            return Err(BenchError::NoNodes);
        }
        if self.d < 0 || self.d > self.big_d {
            return Err(BenchError::Bounds {
                d: self.d,
                big_d: self.big_d,
            });
        }
        let dim = self.n.saturating_mul(2);
        if dim > MAX_DIMENSION {
            return Err(BenchError::TooManyNodes {
                n: self.n,
                dim,
                max: MAX_DIMENSION,
            });
        }
        Ok(())
    }
}

/// One scheduler node; `with_square` adds the 2-cube joining work and pass.
pub fn node(i: usize, d: i64, big_d: i64, with_square: bool) -> HdtaModel {
    let x = format!("x{i}");
    let clocks = ClockSet::new([x.as_str()]).expect("valid clock name");
    let c = clocks.id(&x).expect("declared");
    let (w, p) = (format!("w{i}"), format!("p{i}"));
    let at_most = ClockConstraint::new(
        vec![Atom::single(c, Relation::Le, big_d).expect("range")],
        &clocks,
    )
    .expect("declared");
    let at_least = ClockConstraint::new(
        vec![Atom::single(c, Relation::Ge, d).expect("range")],
        &clocks,
    )
    .expect("declared");
    let n = |s: &str| format!("n{i}.{s}");
    let cube = |name: &str,
                lower: &[&str],
                upper: &[&str],
                label: Multiset,
                inv: &ClockConstraint,
                reset: bool| CubeSpec {
        name: n(name),
        lower: lower.iter().map(|s| n(s)).collect(),
        upper: upper.iter().map(|s| n(s)).collect(),
        label,
        inv: inv.clone(),
        exit: if reset { vec![c] } else { vec![] },
    };
    let truth = ClockConstraint::truth();
    let now = ClockConstraint::new(
        vec![Atom::single(c, Relation::Le, 0).expect("range")],
        &clocks,
    )
    .expect("declared");
    let one = |a: &str| Multiset::singleton(a);
    let mut cubes = vec![
        cube("00", &[], &[], Multiset::new(), &now, true),
        cube("10", &[], &[], Multiset::new(), &at_least, false),
        cube("01", &[], &[], Multiset::new(), &truth, false),
        cube("11", &[], &[], Multiset::new(), &at_least, false),
        cube("w0", &["00"], &["10"], one(&w), &at_most, false),
        cube("p0", &["00"], &["01"], one(&p), &truth, false),
        cube("w1", &["01"], &["11"], one(&w), &at_most, false),
        cube("p1", &["10"], &["11"], one(&p), &at_least, false),
    ];
    if with_square {
        let label = [w.as_str(), p.as_str()].into_iter().collect();
        cubes.push(cube(
            "wp",
            &["w0", "p0"],
            &["w1", "p1"],
            label,
            &at_most,
            false,
        ));
    }
    HdtaModel::assemble(
        clocks,
        [w, p].into_iter().collect(),
        cubes,
        &n("00"),
        &[n("11")],
    )
    .expect("node is a valid model")
}

/// The two variants built from one spec.
#[derive(Debug, Clone)]
pub struct MilnerModels {
    pub hdta: HdtaModel,
    pub interleaved: HdtaModel,
}

pub fn gen_milner(spec: BenchSpec) -> Result<MilnerModels, BenchError> {
    spec.check()?;
    let mut hdta = node(0, spec.d, spec.big_d, true);
    for i in 1..spec.n {
        hdta = tensor(
            &hdta,
            &node(i, spec.d, spec.big_d, true),
            ClockPolicy::Reject,
        )?;
    }
    let tas = (0..spec.n)
        .map(|i| one_dta_to_ta(&node(i, spec.d, spec.big_d, false)))
        .collect::<Result<Vec<_>, _>>()?;
    let interleaved = ta_to_1dta(&interleave(&tas)?)?;
    Ok(MilnerModels { hdta, interleaved })
}

/// Zone-reachability statistics of both variants.
#[derive(Debug, Clone)]
pub struct MilnerRow {
    pub n: usize,
    pub hdta: ReachStats,
    pub interleaved: ReachStats,
    pub hdta_reachable: bool,
    pub interleaved_reachable: bool,
}

impl MilnerRow {
    /// Explored states of the HDTA variant over those of the interleaved one.
    pub fn ratio(&self) -> f64 {
        self.hdta.explored as f64 / self.interleaved.explored.max(1) as f64
    }
}

pub fn measure(spec: BenchSpec) -> Result<MilnerRow, BenchError> {
    let m = gen_milner(spec)?;
    let h = zone_reach(&m.hdta, ZoneOptions::default());
    let i = zone_reach(&m.interleaved, ZoneOptions::default());
    Ok(MilnerRow {
        n: spec.n,
        hdta: h.stats,
        interleaved: i.stats,
        hdta_reachable: h.reachable,
        interleaved_reachable: i.reachable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_shapes() {
        assert_eq!(node(0, 4, 30, true).grade_counts(), vec![4, 4, 1]);
        assert_eq!(node(0, 4, 30, false).grade_counts(), vec![4, 4]);
    }

    #[test]
    fn spec_guards() {
        let bad = |n, d, big_d| gen_milner(BenchSpec { n, d, big_d }).is_err();
        assert!(bad(0, 4, 30));
        assert!(bad(2, 31, 30));
        assert!(bad(2, -1, 30));
        assert!(bad(MAX_DIMENSION, 4, 30));
    }

    #[test]
    fn both_variants_reach_the_goal() {
        let row = measure(BenchSpec {
            n: 2,
            d: 4,
            big_d: 30,
        })
        .unwrap();
        assert!(row.hdta_reachable && row.interleaved_reachable);
        assert!(row.hdta.explored < row.interleaved.explored);
    }
}
