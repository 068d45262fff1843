//! Constructive samplers of points of varieties of sums of powers.
//!
//! [`mindeg_decompose`] slices a minimal-degree variety through a point,
//! [`sample_vsp`] produces random decompositions of forms of canonical shape
//! with any number of terms above the canonical length, and
//! [`extend_decomposition`] pads a decomposition with extra forms.

mod mindeg;
mod sampler;

pub use mindeg::{
    mindeg_decompose, mindeg_decompose_extended, random_point, rnc_slice, SpanDecomposition, RESAMPLE_BUDGET, SPAN_TOL,
};
pub use sampler::{
    canonical_length, decompose_canonical, extend_decomposition, sample_vsp, sample_vsp_detailed, VspSample,
    SAMPLE_TOL,
};
