//! p-adic numbers and unramified extensions at fixed working precision.

pub mod scalar;
pub mod unramified;

pub use scalar::PadicScalar;
pub use unramified::{
    has_primitive_ell_root, norm_correct, norm_to_base, norm_trace_to_base, teichmuller, UnramifiedElement, UnramifiedField,
};
