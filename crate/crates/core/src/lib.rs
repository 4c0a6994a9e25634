//! Static fault-tree analysis.
//!
//! A [`FaultTree`] is a DAG of AND/OR/NOR/NAND/XOR/NOT gates over basic
//! failure events, each carrying a lifetime model. The crate computes
//!
//! * minimal cut sets of coherent (AND/OR) trees ([`cutset`]),
//! * the exact top-event probability by inclusion-exclusion over those cut
//!   sets ([`pie`]),
//! * reference values by exhaustive enumeration and seeded Monte Carlo
//!   sampling ([`oracle`]), which also cover non-coherent trees.
//!
//! All probability results assume mutually independent basic events.

pub mod cutset;
pub mod distributions;
mod error;
pub mod format;
pub mod gates;
pub mod model;
pub mod oracle;
pub mod pie;
pub mod report;
pub mod solar;
mod sum;

pub use cutset::{cut_sets, mcs, minimize, CutSet, McsList};
pub use distributions::{LifetimeModel, MissionTime};
pub use error::{Error, Result, TreeError};
pub use format::{parse_ft, print_ft, ParseError};
pub use gates::{assign_probabilities, ProbAssignment};
pub use model::{EventId, EventState, FaultTree, GateKind, TreeBuilder};
pub use oracle::{enum_prob, mc_prob, McEstimate};
pub use pie::{pie_probability, pie_term_count, PieResult};
pub use report::{top_probability, AnalysisReport, Method};
pub use sum::CompensatedSum;
