//! Quantum channels: Kraus representations, conditional expectations, the
//! VN-channel constructor and the concrete families built from it.

pub mod channel;
pub mod conditions;
pub mod families;
pub mod subalgebra;
pub mod symbol;
pub mod vn;

pub use channel::{
    complete_dephasing, completely_depolarizing, dephasing, direct_sum, extended_output_norm,
    identity_channel, make_channel, make_labelled, partial_trace_channel, qudit_dephasing, tensor,
    Channel,
};
pub use conditions::{build_b_and_check, ConditionReport};
pub use families::{
    clifford, crossed_product, depolarizing, group_random_unitary, group_schur,
    nonunital_twirl_schur, pauli, CrossedCase, Family,
};
pub use subalgebra::{conditional_expectation, projection_choi, SubalgebraSpec};
pub use symbol::{SymbolAlgebra, SymbolDensity};
pub use vn::{stinespring_isometry, vn_channel, VNChannelSpec};
