//! Higher-dimensional timed automata (HDTA).
//!
//! Models are precubical sets whose cubes carry clock invariants and exit
//! sets. Reachability is decided on zones ([`hdta::zone_reach`]) and
//! cross-checked against a region-graph oracle and a bounded concrete
//! search. [`compose::tensor`] builds parallel compositions and
//! [`convert`] moves between classical timed automata and HDTA.

pub mod batch;
pub mod clocks;
pub mod compose;
pub mod convert;
pub mod fixtures;
pub mod format;
pub mod hdta;
pub mod milner;
pub mod precubical;
pub mod random;

pub use hdta::HdtaModel;
