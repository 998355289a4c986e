//! Bounded explicit search on a quarter-unit time grid. It under-approximates
//! reachability and serves as an independent check on the symbolic engines.

use std::collections::{HashMap, VecDeque};

use super::{HdtaModel, Move, Run, Step};
use crate::clocks::{time, Relation};
use crate::precubical::CubeId;

/// Grid resolution: one tick is `1 / TICKS` time units.
const TICKS: i64 = 4;

#[derive(Debug, Clone, Default)]
pub struct BoundedSearch {
    pub found: bool,
    pub witness: Option<Run>,
    /// Distinct (cube, valuation) states reached after a discrete move.
    pub states: usize,
}

fn holds(model: &HdtaModel, cube: CubeId, ticks: &[i64]) -> bool {
    model.inv(cube).atoms().iter().all(|a| {
        let v = ticks[a.left.index() - 1];
        let k = a.constant * TICKS;
        match a.rel {
            Relation::Lt => v < k,
            Relation::Le => v <= k,
            Relation::Ge => v >= k,
            Relation::Gt => v > k,
        }
    })
}

/// Searches runs with at most `depth` discrete moves, each preceded by a
/// delay that is a multiple of 1/4 up to `cmax + 1`.
pub fn bounded_search(model: &HdtaModel, depth: usize) -> BoundedSearch {
    let cmax = model.cmax();
    // every value above cmax compares the same way against every constant
    let ceiling = cmax * TICKS + 1;
    let max_delay = (cmax + 1) * TICKS;
    let n = model.clocks().len();
    let l0 = model.initial();
    let start = (l0, vec![0i64; n]);
    let mut out = BoundedSearch::default();
    if !holds(model, l0, &start.1) {
        return out;
    }
    type Key = (CubeId, Vec<i64>);
    let mut parent: HashMap<Key, Option<(Key, i64, Move)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut waiting = VecDeque::from([(start.clone(), 0usize)]);
    let mut goal = model.is_final(l0).then(|| start.clone());

    'search: while let Some(((cube, vals), d)) = waiting.pop_front() {
        if goal.is_some() || d >= depth {
            break;
        }
        for q in 0..=max_delay {
            let delayed: Vec<i64> = vals.iter().map(|v| (v + q).min(ceiling)).collect();
            if !holds(model, cube, &delayed) {
                continue;
            }
            for mv in model.moves(cube) {
                let mut next = delayed.clone();
                for c in model.resets(mv) {
                    next[c.index() - 1] = 0;
                }
                let to = mv.target();
                if !holds(model, to, &next) {
                    continue;
                }
                let key = (to, next);
                if parent.contains_key(&key) {
                    continue;
                }
                parent.insert(key.clone(), Some(((cube, vals.clone()), q, mv)));
                if model.is_final(to) {
                    goal = Some(key);
                    break 'search;
                }
                waiting.push_back((key, d + 1));
            }
        }
    }
    out.states = parent.len();
    if let Some(g) = goal {
        let mut steps = Vec::new();
        let mut at = g;
        while let Some(Some((prev, q, mv))) = parent.get(&at).cloned() {
            steps.push(Step::from_move(mv));
            if q > 0 {
                steps.push(Step::Delay(time(q, TICKS)));
            }
            at = prev;
        }
        steps.reverse();
        let run = Run { steps };
        out.found = true;
        out.witness = run.accepts(model).then_some(run);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_agree_with_expectations() {
        for (m, expect) in [
            (fixtures::fig3(), true),
            (fixtures::fig4(), true),
            (fixtures::fig5(), true),
            (fixtures::fig5_no_square(), false),
        ] {
            let r = bounded_search(&m, 12);
            assert_eq!(r.found, expect);
            if expect {
                assert!(r.witness.is_some());
            }
        }
    }

    #[test]
    fn zero_depth_only_sees_initial() {
        assert!(!bounded_search(&fixtures::fig3(), 0).found);
    }
}
