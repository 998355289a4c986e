use std::fmt;

use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

use super::{HdtaModel, Move};
use crate::clocks::{ClockError, Time, Valuation};
use crate::precubical::{CubeId, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("face index {k} out of range for cube `{cube}` of dimension {dim}")]
    IndexOutOfRange { cube: String, k: usize, dim: usize },
    #[error("`{from}` is not lower face {k} of `{to}`")]
    NotLowerFace { from: String, to: String, k: usize },
    #[error(transparent)]
    Clock(#[from] ClockError),
    #[error("step {index} ({step}) is not enabled")]
    Blocked { index: usize, step: String },
    #[error("initial valuation violates the initial invariant")]
    InitialBlocked,
}

/// A cube together with a valuation satisfying its invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConcreteState {
    pub cube: CubeId,
    pub val: Valuation,
}

/// One step of a concrete run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Delay(Time),
    /// Enter `to` through its `k`-th lower face.
    Start {
        to: CubeId,
        k: usize,
    },
    /// Leave the current cube through its `k`-th upper face.
    Finish {
        k: usize,
    },
}

impl Step {
    pub fn from_move(m: Move) -> Step {
        match m {
            Move::Start { to, k, .. } => Step::Start { to, k },
            Move::Finish { k, .. } => Step::Finish { k },
        }
    }
}

/// A finite sequence of steps from the initial state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Run {
    pub steps: Vec<Step>,
}

impl HdtaModel {
    /// `(l0, v0)` if the all-zero valuation satisfies the initial invariant.
    pub fn initial_state(&self) -> Option<ConcreteState> {
        let val = Valuation::zero(self.clocks().len());
        let cube = self.initial();
        self.inv(cube)
            .satisfied_by(&val)
            .ok()?
            .then_some(ConcreteState { cube, val })
    }

    /// Lets `d` time units pass. Invariants are convex, so checking both
    /// endpoints covers the whole segment.
    pub fn concrete_delay(
        &self,
        s: &ConcreteState,
        d: &Time,
    ) -> Result<Option<ConcreteState>, SemanticsError> {
        if d.is_negative() {
            return Err(ClockError::NegativeDelay(d.to_string()).into());
        }
        let inv = self.inv(s.cube);
        let val = s.val.delay(d)?;
        if !inv.satisfied_by(&s.val)? || !inv.satisfied_by(&val)? {
            return Ok(None);
        }
        Ok(Some(ConcreteState { cube: s.cube, val }))
    }

    /// Enters `to` from its `k`-th lower face, which must be the current cube.
    pub fn concrete_start(
        &self,
        s: &ConcreteState,
        to: CubeId,
        k: usize,
    ) -> Result<Option<ConcreteState>, SemanticsError> {
        let dim = self.space().dim(to);
        if k == 0 || k > dim {
            return Err(SemanticsError::IndexOutOfRange {
                cube: self.name(to).to_string(),
                k,
                dim,
            });
        }
        if self.space().face(to, k, Side::Lower) != s.cube {
            return Err(SemanticsError::NotLowerFace {
                from: self.name(s.cube).to_string(),
                to: self.name(to).to_string(),
                k,
            });
        }
        self.enter(to, s.val.reset(self.exit(s.cube))?)
    }

    /// Leaves the current cube through its `k`-th upper face.
    pub fn concrete_finish(
        &self,
        s: &ConcreteState,
        k: usize,
    ) -> Result<Option<ConcreteState>, SemanticsError> {
        let dim = self.space().dim(s.cube);
        if k == 0 || k > dim {
            return Err(SemanticsError::IndexOutOfRange {
                cube: self.name(s.cube).to_string(),
                k,
                dim,
            });
        }
        let to = self.space().face(s.cube, k, Side::Upper);
        self.enter(to, s.val.reset(self.exit(s.cube))?)
    }

    fn enter(&self, cube: CubeId, val: Valuation) -> Result<Option<ConcreteState>, SemanticsError> {
        Ok(self
            .inv(cube)
            .satisfied_by(&val)?
            .then_some(ConcreteState { cube, val }))
    }

    pub fn apply(
        &self,
        s: &ConcreteState,
        step: &Step,
    ) -> Result<Option<ConcreteState>, SemanticsError> {
        match step {
            Step::Delay(d) => self.concrete_delay(s, d),
            Step::Start { to, k } => self.concrete_start(s, *to, *k),
            Step::Finish { k } => self.concrete_finish(s, *k),
        }
    }
}

impl Run {
    /// Executes the run from the initial state, failing on the first
    /// disabled step. Returns every visited state, initial state first.
    pub fn replay(&self, model: &HdtaModel) -> Result<Vec<ConcreteState>, SemanticsError> {
        let mut s = model
            .initial_state()
            .ok_or(SemanticsError::InitialBlocked)?;
        let mut trace = vec![s.clone()];
        for (index, step) in self.steps.iter().enumerate() {
            s = model
                .apply(&s, step)?
                .ok_or_else(|| SemanticsError::Blocked {
                    index,
                    step: step.describe(model),
                })?;
            trace.push(s.clone());
        }
        Ok(trace)
    }

    /// Replays the run and checks that it ends in a final cube.
    pub fn accepts(&self, model: &HdtaModel) -> bool {
        self.replay(model)
            .map(|t| t.last().is_some_and(|s| model.is_final(s.cube)))
            .unwrap_or(false)
    }

    pub fn discrete_len(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| !matches!(s, Step::Delay(_)))
            .count()
    }

    /// One line per step with the state reached, for human consumption.
    pub fn render(&self, model: &HdtaModel) -> Result<String, SemanticsError> {
        let trace = self.replay(model)?;
        let mut out = String::new();
        let show = |s: &ConcreteState| {
            format!(
                "({}, {})",
                model.name(s.cube),
                s.val.display(model.clocks())
            )
        };
        out.push_str(&format!("  {}\n", show(&trace[0])));
        for (step, s) in self.steps.iter().zip(&trace[1..]) {
            out.push_str(&format!("  --{}--> {}\n", step.describe(model), show(s)));
        }
        Ok(out)
    }

    /// JSON object per visited state, paired with the step that produced it.
    pub fn to_json_lines(&self, model: &HdtaModel) -> Result<Vec<Value>, SemanticsError> {
        let trace = self.replay(model)?;
        let mut out = vec![state_json(model, &trace[0], None)];
        for (step, s) in self.steps.iter().zip(&trace[1..]) {
            out.push(state_json(model, s, Some(step)));
        }
        Ok(out)
    }
}

fn state_json(model: &HdtaModel, s: &ConcreteState, step: Option<&Step>) -> Value {
    json!({
        "step": step.map(|st| st.describe(model)),
        "cube": model.name(s.cube),
        "valuation": model
            .clocks()
            .names()
            .iter()
            .zip(s.val.values())
            .map(|(n, v)| (n.clone(), Value::String(v.to_string())))
            .collect::<serde_json::Map<_, _>>(),
    })
}

impl Step {
    pub fn describe(&self, model: &HdtaModel) -> String {
        match self {
            Step::Delay(d) => format!("delay {d}"),
            Step::Start { to, k } => format!("start {k} into {}", model.name(*to)),
            Step::Finish { k } => format!("finish {k}"),
        }
    }
}

impl fmt::Display for ConcreteState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.cube, self.val.values())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocks::time;
    use crate::fixtures;

    fn at(m: &HdtaModel, cube: &str, vals: &[f64]) -> ConcreteState {
        ConcreteState {
            cube: m.space().lookup(cube).unwrap(),
            val: Valuation::from_f64s(vals),
        }
    }

    #[test]
    fn delay_in_square() {
        let m = fixtures::fig3();
        let s = at(&m, "u", &[0.0, 0.0]);
        let t = m.concrete_delay(&s, &time(3, 1)).unwrap().unwrap();
        assert_eq!(t.val, Valuation::from_f64s(&[3.0, 3.0]));
        assert_eq!(m.concrete_delay(&s, &time(0, 1)).unwrap().unwrap(), s);
        assert!(m.concrete_delay(&s, &time(7, 2)).unwrap().is_none());
        assert!(m.concrete_delay(&s, &time(-1, 1)).is_err());
    }

    #[test]
    fn start_into_edges() {
        let m = fixtures::fig3();
        let s0 = m.initial_state().unwrap();
        let e1 = m.space().lookup("e1").unwrap();
        let s = m.concrete_start(&s0, e1, 1).unwrap().unwrap();
        assert_eq!(s.val, Valuation::zero(2));
        assert!(m.concrete_start(&s0, e1, 2).is_err());

        let m4 = fixtures::fig4();
        let s0 = m4.initial_state().unwrap();
        let e2 = m4.space().lookup("e2").unwrap();
        for d in [0, 1, 5] {
            let s = m4.concrete_delay(&s0, &time(d, 1)).unwrap().unwrap();
            assert!(m4.concrete_start(&s, e2, 1).unwrap().is_none());
        }
    }

    #[test]
    fn finish_edges() {
        let m = fixtures::fig3();
        let s = at(&m, "e1", &[2.5, 2.5]);
        let t = m.concrete_finish(&s, 1).unwrap().unwrap();
        assert_eq!(m.name(t.cube), "l1");
        assert_eq!(t.val, Valuation::from_f64s(&[2.5, 0.0]));
        assert!(m.concrete_finish(&at(&m, "l1", &[2.5, 0.0]), 1).is_err());

        // right b-edge of fig5 resets z on exit while lf needs z >= 1
        let m5 = fixtures::fig5();
        for vals in [[3.0, 1.0, 0.0], [2.0, 2.0, 5.0], [4.0, 1.5, 2.0]] {
            let s = at(&m5, "e3", &vals);
            assert!(m5.concrete_finish(&s, 1).unwrap().is_none());
        }
    }

    #[test]
    fn replay_and_render() {
        let m = fixtures::fig3();
        let e1 = m.space().lookup("e1").unwrap();
        let u = m.space().lookup("u").unwrap();
        let run = Run {
            steps: vec![
                Step::Start { to: e1, k: 1 },
                Step::Delay(time(2, 1)),
                Step::Start { to: u, k: 2 },
                Step::Delay(time(1, 1)),
                Step::Finish { k: 1 },
                Step::Delay(time(1, 1)),
                Step::Finish { k: 1 },
            ],
        };
        assert!(run.accepts(&m));
        assert_eq!(run.discrete_len(), 4);
        assert!(run.render(&m).unwrap().contains("lf"));
        let short = Run {
            steps: vec![Step::Start { to: e1, k: 1 }, Step::Finish { k: 1 }],
        };
        assert!(matches!(
            short.replay(&m),
            Err(SemanticsError::Blocked { index: 1, .. })
        ));
    }
}
