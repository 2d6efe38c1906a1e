//! Channel models, capacities and parameter optimizers.

pub mod bec;
pub mod capacity;
pub mod qec;
pub mod reference;

pub use bec::{
    bec_capacity, bec_mutual_information, bec_mutual_information_derivative, binary_entropy, golden_section_max,
    max_second_difference, AsymmetricBec, CapacityResult, GridPoint,
};
pub use capacity::{
    default_ceiling, duplex_capacity, duplex_unidirectional_rate, exhaustive_duplex_k, optimize_duplex_k,
    optimize_duplex_k_with, optimize_telex, optimize_telex_with, telex_capacity, telex_efficiency, MessageWeights,
    Strategy, TelexOptimum,
};
pub use qec::{qec_apply, BranchSampler, QecBranch, QecModel, QecOutput};
pub use reference::{discrepancy_report, DiscrepancyReport, ReferenceCheck};
