//! Semantics, frame conditions, filtration, bisimulation, proof checking and
//! bounded countermodel search for interpretability logics over ordinary and
//! generalized Veltman models.

pub mod bisim;
pub mod decide;
pub mod filtration;
pub mod formula;
pub mod hilbert;
pub mod model;
pub mod properties;
pub mod random;
pub mod worldset;

pub use formula::{parse, Formula, FormulaSet, ParseError};
pub use hilbert::{Logic, SchemaId};
pub use model::{GenFrame, GenModel, OrdFrame, OrdModel, Valuation};
pub use worldset::{Antichain, WorldSet};
