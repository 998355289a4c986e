//! Line-oriented model files.
//!
//! ```text
//! hdta 1
//! clocks x y
//! actions a b
//! initial l0
//! final lf
//! cube NAME DIM | LOWER FACES | UPPER FACES | LABEL | INVARIANT | EXIT CLOCKS
//! ```
//!
//! Timed automata use the header `ta 1` and the records
//! `location NAME | INVARIANT` and `edge NAME SOURCE TARGET | GUARD | ACTION | RESETS`.
//! `#` starts a comment; `-` marks an empty field. Faces are listed in
//! index order starting from 1.

pub mod dot;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::clocks::{ClockConstraint, ClockId, ClockSet};
use crate::convert::{TaEdge, TimedAutomaton};
use crate::hdta::{CubeSpec, HdtaModel};
use crate::precubical::Multiset;

/// A problem at a 1-based line number (0 when no line applies).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub errors: Vec<LineError>,
}

impl FormatError {
    fn single(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            errors: vec![LineError {
                line,
                message: message.into(),
            }],
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for FormatError {}

/// Either kind of model file.
#[derive(Debug, Clone)]
pub enum ModelFile {
    Hdta(HdtaModel),
    Ta(TimedAutomaton),
}

struct Line<'a> {
    no: usize,
    keyword: &'a str,
    /// Words after the keyword, up to the first `|`.
    head: Vec<&'a str>,
    /// `|`-separated fields after the head.
    fields: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            return None;
        }
        let mut parts = content.split('|');
        let mut head = parts.next().unwrap_or("").split_whitespace();
        let keyword = head.next().unwrap_or("");
        Some(Line {
            no: i + 1,
            keyword,
            head: head.collect(),
            fields: parts.map(str::trim).collect(),
        })
    })
}

fn words(field: &str) -> Vec<&str> {
    field.split_whitespace().filter(|w| *w != "-").collect()
}

fn field_or_dash(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(" ")
    }
}

/// Header, clock and action declarations shared by both formats.
struct Header {
    clocks: ClockSet,
    actions: BTreeSet<String>,
    initial: Option<(usize, String)>,
    finals: Vec<(usize, String)>,
}

fn read_header(text: &str, kind: &str, errors: &mut Vec<LineError>) -> Header {
    let mut h = Header {
        clocks: ClockSet::default(),
        actions: BTreeSet::new(),
        initial: None,
        finals: Vec::new(),
    };
    let mut err = |line: usize, m: String| errors.push(LineError { line, message: m });
    let mut saw_header = false;
    for (n, l) in lines(text).enumerate() {
        if n == 0 {
            if l.keyword != kind || l.head != ["1"] || !l.fields.is_empty() {
                err(l.no, format!("expected header `{kind} 1`"));
            }
            saw_header = true;
            continue;
        }
        match l.keyword {
            "clocks" => {
                for c in &l.head {
                    if let Err(e) = h.clocks.push(c.to_string()) {
                        err(l.no, e.to_string());
                    }
                }
            }
            "actions" => {
                for a in &l.head {
                    if !crate::clocks::is_identifier(a) {
                        err(l.no, format!("invalid action name `{a}`"));
                    } else if !h.actions.insert(a.to_string()) {
                        err(l.no, format!("duplicate action `{a}`"));
                    }
                }
            }
            "initial" => match (&h.initial, l.head.as_slice()) {
                (Some(_), _) => err(l.no, "initial declared twice".to_string()),
                (None, [name]) => h.initial = Some((l.no, name.to_string())),
                _ => err(l.no, "expected `initial NAME`".to_string()),
            },
            "final" => {
                for f in &l.head {
                    h.finals.push((l.no, f.to_string()));
                }
            }
            _ => {}
        }
    }
    if !saw_header {
        err(0, format!("empty file, expected header `{kind} 1`"));
    }
    h
}

fn constraint(
    clocks: &ClockSet,
    text: &str,
    line: usize,
    errors: &mut Vec<LineError>,
) -> ClockConstraint {
    clocks.parse_clock_constraint(text).unwrap_or_else(|e| {
        errors.push(LineError {
            line,
            message: e.to_string(),
        });
        ClockConstraint::truth()
    })
}

fn clock_list(
    clocks: &ClockSet,
    text: &str,
    line: usize,
    errors: &mut Vec<LineError>,
) -> Vec<ClockId> {
    clocks.parse_clock_list(text).unwrap_or_else(|e| {
        errors.push(LineError {
            line,
            message: e.to_string(),
        });
        Vec::new()
    })
}

/// Parses and validates an HDTA file. All syntax errors are reported
/// together; validation runs only on syntactically clean input.
pub fn parse_hdta(text: &str) -> Result<HdtaModel, FormatError> {
    let mut errors = Vec::new();
    let h = read_header(text, "hdta", &mut errors);
    let mut cubes = Vec::new();
    let mut line_of: HashMap<String, usize> = HashMap::new();
    for l in lines(text).skip(1) {
        match l.keyword {
            "clocks" | "actions" | "initial" | "final" => {}
            "cube" => {
                let ([name, dim], 5) = (l.head.as_slice(), l.fields.len()) else {
                    errors.push(LineError {
                        line: l.no,
                        message: "expected `cube NAME DIM | LOWER | UPPER | LABEL | INV | EXIT`"
                            .to_string(),
                    });
                    continue;
                };
                let Ok(dim) = dim.parse::<usize>() else {
                    errors.push(LineError {
                        line: l.no,
                        message: format!("bad dimension `{dim}`"),
                    });
                    continue;
                };
                let lower: Vec<String> = words(l.fields[0]).into_iter().map(String::from).collect();
                let upper: Vec<String> = words(l.fields[1]).into_iter().map(String::from).collect();
                if lower.len() != dim || upper.len() != dim {
                    errors.push(LineError {
                        line: l.no,
                        message: format!(
                            "cube `{name}` of dimension {dim} lists {} lower and {} upper faces",
                            lower.len(),
                            upper.len()
                        ),
                    });
                    continue;
                }
                let label: Multiset = words(l.fields[2]).into_iter().collect();
                let inv = constraint(&h.clocks, l.fields[3], l.no, &mut errors);
                let exit = clock_list(&h.clocks, l.fields[4], l.no, &mut errors);
                line_of.entry(name.to_string()).or_insert(l.no);
                cubes.push(CubeSpec {
                    name: name.to_string(),
                    lower,
                    upper,
                    label,
                    inv,
                    exit,
                });
            }
            other => errors.push(LineError {
                line: l.no,
                message: format!("unknown record `{other}`"),
            }),
        }
    }
    if !errors.is_empty() {
        return Err(FormatError { errors });
    }
    let Some((_, initial)) = h.initial else {
        return Err(FormatError::single(0, "no initial state"));
    };
    let finals: Vec<String> = h.finals.into_iter().map(|(_, f)| f).collect();
    HdtaModel::assemble(h.clocks, h.actions, cubes, &initial, &finals).map_err(|e| {
        let line = e.cube().and_then(|c| line_of.get(c)).copied().unwrap_or(0);
        FormatError::single(line, e.to_string())
    })
}

fn write_common(out: &mut String, kind: &str, clocks: &ClockSet, actions: &BTreeSet<String>) {
    out.push_str(&format!("{kind} 1\n"));
    out.push_str(&format!("clocks {}\n", clocks.names().join(" ")).replace(" \n", "\n"));
    let acts: Vec<&str> = actions.iter().map(String::as_str).collect();
    out.push_str(&format!("actions {}\n", acts.join(" ")).replace(" \n", "\n"));
}

fn names(clocks: &ClockSet, ids: &[ClockId]) -> Vec<String> {
    ids.iter().map(|&c| clocks.name(c).to_string()).collect()
}

/// Canonical text of an HDTA; `parse_hdta` of the output yields an equal model.
pub fn write_hdta(model: &HdtaModel) -> String {
    let mut out = String::new();
    let clocks = model.clocks();
    write_common(&mut out, "hdta", clocks, &model.hda().alphabet);
    out.push_str(&format!("initial {}\n", model.name(model.initial())));
    let finals = model.final_names();
    if !finals.is_empty() {
        out.push_str(&format!("final {}\n", finals.join(" ")));
    }
    for c in model.to_specs() {
        let label: Vec<String> = c.label.iter().map(String::from).collect();
        out.push_str(&format!(
            "cube {} {} | {} | {} | {} | {} | {}\n",
            c.name,
            c.lower.len(),
            field_or_dash(&c.lower),
            field_or_dash(&c.upper),
            field_or_dash(&label),
            c.inv.render(clocks),
            field_or_dash(&names(clocks, &c.exit)),
        ));
    }
    out
}

/// Parses and validates a timed-automaton file.
pub fn parse_ta(text: &str) -> Result<TimedAutomaton, FormatError> {
    let mut errors = Vec::new();
    let h = read_header(text, "ta", &mut errors);
    let mut locations: Vec<(String, ClockConstraint)> = Vec::new();
    let mut loc_line: HashMap<String, usize> = HashMap::new();
    let mut raw_edges = Vec::new();
    for l in lines(text).skip(1) {
        match l.keyword {
            "clocks" | "actions" | "initial" | "final" => {}
            "location" => {
                let ([name], 1) = (l.head.as_slice(), l.fields.len()) else {
                    errors.push(LineError {
                        line: l.no,
                        message: "expected `location NAME | INVARIANT`".to_string(),
                    });
                    continue;
                };
                if loc_line.insert(name.to_string(), l.no).is_some() {
                    errors.push(LineError {
                        line: l.no,
                        message: format!("duplicate location `{name}`"),
                    });
                    continue;
                }
                let inv = constraint(&h.clocks, l.fields[0], l.no, &mut errors);
                locations.push((name.to_string(), inv));
            }
            "edge" => {
                let ([name, src, tgt], 3) = (l.head.as_slice(), l.fields.len()) else {
                    errors.push(LineError {
                        line: l.no,
                        message: "expected `edge NAME SOURCE TARGET | GUARD | ACTION | RESETS`"
                            .to_string(),
                    });
                    continue;
                };
                let guard = constraint(&h.clocks, l.fields[0], l.no, &mut errors);
                let action = match words(l.fields[1]).as_slice() {
                    [a] => a.to_string(),
                    _ => {
                        errors.push(LineError {
                            line: l.no,
                            message: "edge needs exactly one action".to_string(),
                        });
                        continue;
                    }
                };
                let resets = clock_list(&h.clocks, l.fields[2], l.no, &mut errors);
                raw_edges.push((
                    l.no,
                    name.to_string(),
                    src.to_string(),
                    tgt.to_string(),
                    guard,
                    action,
                    resets,
                ));
            }
            other => errors.push(LineError {
                line: l.no,
                message: format!("unknown record `{other}`"),
            }),
        }
    }
    let index: HashMap<&str, usize> = locations
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.as_str(), i))
        .collect();
    let lookup = |line: usize, name: &str, errors: &mut Vec<LineError>| -> usize {
        index.get(name).copied().unwrap_or_else(|| {
            errors.push(LineError {
                line,
                message: format!("unknown location `{name}`"),
            });
            0
        })
    };
    let mut edges = Vec::new();
    for (no, name, src, tgt, guard, action, resets) in raw_edges {
        let source = lookup(no, &src, &mut errors);
        let target = lookup(no, &tgt, &mut errors);
        edges.push((
            no,
            TaEdge {
                name,
                source,
                guard,
                action,
                resets,
                target,
            },
        ));
    }
    let initial = match &h.initial {
        Some((no, n)) => lookup(*no, n, &mut errors),
        None => {
            errors.push(LineError {
                line: 0,
                message: "no initial state".to_string(),
            });
            0
        }
    };
    let finals: BTreeSet<usize> = h
        .finals
        .iter()
        .map(|(no, f)| lookup(*no, f, &mut errors))
        .collect();
    if !errors.is_empty() {
        return Err(FormatError { errors });
    }
    let edge_lines: Vec<usize> = edges.iter().map(|(no, _)| *no).collect();
    let (names, invariants): (Vec<String>, Vec<ClockConstraint>) = locations.into_iter().unzip();
    TimedAutomaton::new(
        h.clocks,
        h.actions,
        names,
        invariants,
        initial,
        finals,
        edges.into_iter().map(|(_, e)| e).collect(),
    )
    .map_err(|e| {
        let line = e.edge_index().map(|i| edge_lines[i]).unwrap_or(0);
        FormatError::single(line, e.to_string())
    })
}

/// Canonical text of a timed automaton.
pub fn write_ta(ta: &TimedAutomaton) -> String {
    let mut out = String::new();
    write_common(&mut out, "ta", &ta.clocks, &ta.alphabet);
    out.push_str(&format!("initial {}\n", ta.locations[ta.initial]));
    if !ta.finals.is_empty() {
        let f: Vec<&str> = ta
            .finals
            .iter()
            .map(|&i| ta.locations[i].as_str())
            .collect();
        out.push_str(&format!("final {}\n", f.join(" ")));
    }
    for (name, inv) in ta.locations.iter().zip(&ta.invariants) {
        out.push_str(&format!("location {name} | {}\n", inv.render(&ta.clocks)));
    }
    for e in &ta.edges {
        out.push_str(&format!(
            "edge {} {} {} | {} | {} | {}\n",
            e.name,
            ta.locations[e.source],
            ta.locations[e.target],
            e.guard.render(&ta.clocks),
            e.action,
            field_or_dash(&names(&ta.clocks, &e.resets)),
        ));
    }
    out
}

/// Dispatches on the header line.
pub fn parse_model(text: &str) -> Result<ModelFile, FormatError> {
    let first = lines(text).next();
    match first.as_ref().map(|l| l.keyword) {
        Some("hdta") => parse_hdta(text).map(ModelFile::Hdta),
        Some("ta") => parse_ta(text).map(ModelFile::Ta),
        Some(_) => Err(FormatError::single(
            first.map_or(0, |l| l.no),
            "expected header `hdta 1` or `ta 1`",
        )),
        None => Err(FormatError::single(0, "no initial state")),
    }
}
