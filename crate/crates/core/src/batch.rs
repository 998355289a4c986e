//! Batch runs over seeded corpora: engine agreement on random HDTA and
//! conversion agreement on random timed automata. Each item is independent,
//! so batches run on the rayon pool when the `parallel` feature is on.

use serde::Serialize;

use crate::convert::{one_dta_to_ta, ta_to_1dta, ta_zone_reach};
use crate::hdta::{bounded_search, region_reach, zone_reach, RegionOptions, ZoneOptions};
use crate::random::{random_hdta, random_ta, HdtaShape, TaShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses rayon when built with the `parallel` feature, otherwise the same
    /// as `Sequential`.
    #[default]
    Parallel,
}

/// Applies `f` to every seed, keeping seed order in the output.
pub fn run_batch<T, F>(seeds: std::ops::Range<u64>, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => seeds.map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            seeds.into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => seeds.map(f).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EngineVerdicts {
    pub seed: u64,
    pub zone: bool,
    pub region: bool,
    /// Bounded concrete search found an accepting state.
    pub concrete: bool,
    pub zone_explored: usize,
    pub region_explored: usize,
}

impl EngineVerdicts {
    /// Zone and region agree, and a concrete hit is confirmed by both.
    pub fn agree(&self) -> bool {
        self.zone == self.region && (!self.concrete || (self.zone && self.region))
    }
}

pub const CONCRETE_DEPTH: usize = 12;

pub fn engine_agreement(seed: u64, shape: HdtaShape) -> EngineVerdicts {
    let m = random_hdta(seed, shape);
    let z = zone_reach(&m, ZoneOptions::default());
    let r = region_reach(
        &m,
        RegionOptions {
            max_constant: shape.max_constant.max(16),
            ..Default::default()
        },
    )
    .expect("constants within the configured bound");
    let c = bounded_search(&m, CONCRETE_DEPTH);
    EngineVerdicts {
        seed,
        zone: z.reachable,
        region: r.reachable,
        concrete: c.found,
        zone_explored: z.stats.explored,
        region_explored: r.stats.explored,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConversionVerdicts {
    pub seed: u64,
    pub ta: bool,
    pub one_dta: bool,
    pub round_trip: bool,
}

impl ConversionVerdicts {
    pub fn agree(&self) -> bool {
        self.ta == self.one_dta && self.ta == self.round_trip
    }
}

pub fn conversion_agreement(seed: u64, shape: TaShape) -> ConversionVerdicts {
    let ta = random_ta(seed, shape);
    let m = ta_to_1dta(&ta).expect("generated names avoid reserved ones");
    let back = one_dta_to_ta(&m).expect("one-dimensional");
    ConversionVerdicts {
        seed,
        ta: ta_zone_reach(&ta).reachable,
        one_dta: zone_reach(&m, ZoneOptions::default()).reachable,
        round_trip: ta_zone_reach(&back).reachable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn execution_modes_agree() {
        let seq = run_batch(0..16, Execution::Sequential, |s| {
            engine_agreement(s, HdtaShape::default())
        });
        let par = run_batch(0..16, Execution::Parallel, |s| {
            engine_agreement(s, HdtaShape::default())
        });
        assert_eq!(seq, par);
        assert!(seq.iter().all(EngineVerdicts::agree));
    }

    #[test]
    fn conversions_agree_on_a_few_seeds() {
        let out = run_batch(0..16, Execution::Parallel, |s| {
            conversion_agreement(s, TaShape::default())
        });
        assert!(out.iter().all(ConversionVerdicts::agree), "{out:?}");
    }
}
