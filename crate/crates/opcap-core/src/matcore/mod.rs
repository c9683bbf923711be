//! Dense complex linear algebra.
//!
//! Everything here works on small dense matrices (dimension up to a few
//! hundred). Entropies use the natural logarithm.

pub mod eigen;
pub mod matrix;
pub mod norms;
pub mod random;

pub use eigen::{eigh, eigvalsh, Spectrum};
pub use matrix::{
    kron, kron_all, max_entangled_state, max_entangled_vector, partial_trace, trace_out_first,
    trace_out_second, CMatrix, C64, ONE, ZERO,
};
pub use norms::{
    binary_entropy, schatten_norm, shannon_entropy, von_neumann_entropy, PNorm,
};
pub use random::{sample, RandomSource, Sample, SampleKind};
