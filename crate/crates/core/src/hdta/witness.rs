//! Concrete runs along a symbolic path.
//!
//! Exact (non-extrapolated) zones are recomputed forward along the path, then
//! pruned backward to the valuations that can still complete it, and finally a
//! concrete run is picked forward through the pruned sets. Each pruned set is
//! a zone with integer bounds, so the only rationals involved are the picked
//! valuations themselves.

use num_traits::Zero;

use super::{HdtaModel, Move, Run, Step};
use crate::clocks::{Valuation, Zone};

/// A concrete run that follows `moves` from the initial state and ends in a
/// valuation inside `target` (if given). `None` if no such run exists.
pub fn witness_along(model: &HdtaModel, moves: &[Move], target: Option<&Zone>) -> Option<Run> {
    let n = model.clocks().len();
    let l0 = model.initial();

    // entry sets E_i and delay closures Z_i
    let mut entry = vec![Zone::origin(n).constrained(model.inv(l0).atoms())];
    let mut closed = vec![entry[0].up().constrained(model.inv(l0).atoms())];
    let mut cube = l0;
    for &mv in moves {
        if mv.source() != cube {
            return None;
        }
        cube = mv.target();
        let inv = model.inv(cube).atoms();
        let e = closed.last()?.reset(model.resets(mv)).constrained(inv);
        closed.push(e.up().constrained(inv));
        entry.push(e);
    }
    if entry[0].is_empty() {
        return None;
    }

    // X_i: valuations in Z_i from which the rest of the path can be completed
    let last = moves.len();
    let mut exitable = vec![Zone::empty(n); last + 1];
    exitable[last] = match target {
        Some(t) => closed[last].intersect(t),
        None => closed[last].clone(),
    };
    for i in (0..last).rev() {
        let landing = entry[i + 1].intersect(&exitable[i + 1].down());
        exitable[i] = closed[i].intersect(&landing.free(model.resets(moves[i])));
    }

    let mut v = Valuation::zero(n);
    let mut steps = Vec::new();
    for i in 0..=last {
        let d = exitable[i].pick_delay(&v)?;
        v = v.delay(&d).ok()?;
        if !d.is_zero() {
            steps.push(Step::Delay(d));
        }
        if i < last {
            steps.push(Step::from_move(moves[i]));
            v = v.reset(model.resets(moves[i])).ok()?;
        }
    }
    let run = Run { steps };
    run.replay(model).ok()?;
    Some(run)
}
