//! Exact linear algebra for finitely presented multiparameter persistence
//! modules over prime fields.
//!
//! The pipeline: parse a free resolution in the scc2020 format
//! ([`scc_io`]), contract it against the coordinate projections
//! ([`contraction`]), run it through the tensored cover complex to obtain a
//! flat-injective presentation matrix ([`cech`]), and answer rank-invariant
//! queries from any of the three presentation kinds, cross-checked by a
//! brute-force pointwise expansion ([`oracle`]).

mod dense;

pub mod cech;
pub mod contraction;
pub mod corpus;
pub mod field;
pub mod grade;
pub mod gmatrix;
pub mod oracle;
pub mod scc_io;

pub use cech::{
    cech_boundary, cech_tensor, flange_presentation, flange_presentation_preimage,
    flange_presentation_with, layer_subsets, PipelineError, PipelineOptions, Strategy,
};
pub use contraction::{
    assemble_s, compute_contraction, compute_contraction_fast, AcyclicityError, ContractionMethod,
    ContractionSet, Representative,
};
pub use field::{FieldError, FieldScalar, Fp};
pub use grade::{ExtCoord, ExtGrade};
pub use gmatrix::GradedMatrix;
pub use oracle::{
    default_box, expand_fip, expand_free, hilbert_csv, random_box_sum, rank_fip, rank_free,
    rank_injective, rank_oracle, BoxSum, GradeBox, PointwiseModule, QueryError, RankQuery,
};
pub use scc_io::{FlatInjectivePresentation, FreeResolution, SccError};
