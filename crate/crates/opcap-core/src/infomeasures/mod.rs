//! Information measures of channels and the optimizers that estimate their
//! suprema over inputs.

pub mod comparison;
pub mod cqe;
pub mod entropic;
pub mod optimizer;
pub mod pnorm;

pub use comparison::{comparison_probe, comparison_probe_many, comparison_probe_pair, ComparisonSlack};
pub use cqe::{cqe_shift_check, cqe_shift_slacks, cqe_triple, EnsembleMember, RateTriple};
pub use entropic::{channel_entropies, channel_information, ChannelEvaluator, Entropies, InfoKind};
pub use optimizer::{
    maximize_information, maximize_information_with, OptResult, OptimizerConfig, DEFAULT_SEED,
};
pub use pnorm::{
    choi_vv_norm, entropy_pnorm_derivative, purification_matrix, q_p_ratio, q_p_ratio_with,
    ratio_at, RatioResult,
};
