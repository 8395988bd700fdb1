//! Antifield extension, stage operators, the Koszul-Tate differential and
//! bounded homology searches.

mod complex;
mod homology;

pub use complex::{
    GeneratorCheck, KTComplex, NilpotencyReport, Stage, StageFamily, StageOperator, DEFAULT_MAX_STAGES,
};
pub use homology::{
    antifield_number, chain_terms, is_boundary, is_cycle, noether_search, noether_search_in,
    noether_span_check, regularity_probe, top_linear_cycles, BoundarySolver, Grading, NoetherBasis, ProbeReport,
    SpanCheck,
};
