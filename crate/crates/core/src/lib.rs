//! Structure learning for graphical log-linear models on categorical contingency tables.
//!
//! The search starts from complete independence and keeps two lists of factor subsets: sets
//! still awaiting a mutual-conditional-independence (MCI) test, and sets that passed one. A set
//! that fails gets its most significant within-set edge added to the model, and every pending
//! set containing both endpoints is split in two. When nothing is pending, the accepted sets are
//! the maximal independent sets of the learned graph.
//!
//! Module map:
//!
//! - [`tabular`]: contingency tables, cell indexing, CSV ingestion, margins.
//! - [`graphs`]: undirected graphs, maximal cliques / independent sets, chordality, DOT.
//! - [`loglinear`]: generating classes, parameter counting, IPF fitting, fit statistics.
//! - [`inference`]: chi-square tails, goodness-of-fit and nested deviance tests.
//! - [`mci`]: the mutual-conditional-independence test for one factor subset.
//! - [`selection`]: the forward-selection state machine and its trace.

pub mod error;
pub mod graphs;
pub mod inference;
pub mod loglinear;
pub mod mci;
pub mod selection;
pub mod tabular;

pub use error::{Error, Result};
pub use graphs::{UndirectedGraph, VertexSet, VertexSetFamily};
pub use inference::TestOutcome;
pub use loglinear::{FitResult, GeneratingClass, IpfSettings};
pub use mci::MciTestRecord;
pub use selection::{SelectionState, SelectionTrace, Step};
pub use tabular::{CellIndex, ContingencyTable, Factor};
