//! Exact graded polynomial algebra over jet variables.

mod field;
mod jet;
mod multi_index;
mod poly;

pub use field::{FieldId, FieldRole, FieldSpec, IndexGroup, Indices, Parity, Signature, Symmetry};
pub use jet::JetVariable;
pub use multi_index::MultiIndex;
pub use poly::{normalize, Density, Factor, GradedPoly, Homogeneity, Monomial, PolyDisplay, Term};
