//! Simulator and bounds calculator for multi-user networks of programmable
//! reflecting surfaces with multi-order reflections.
//!
//! The crate builds effective channels through arbitrary cascades of
//! uniform-linear-array surfaces, designs reflection weights, computes
//! capacities and per-user rates, and evaluates closed-form sum-rate bounds
//! for chain, complete and edgeless network topologies.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`] - complex SVD, minimum-norm least squares.
//! * [`mod@array`] - array geometry, steering vectors, response pattern.
//! * [`channel`] - single-surface channels and inter-surface channels.
//! * [`network`] - path enumeration and the multi-order network channel.
//! * [`beamforming`] - weight design and zero-forcing decoding.
//! * [`capacity`] - log-det capacity, SINR sum-rates, single-surface bound.
//! * [`topology`] - graph bounds and equal-length path decomposition.
//! * [`scenario`] - TOML scenario configs.
//!
//! Everything is a pure function over immutable inputs; values are safe to
//! share across threads and seeded randomness is reproducible.

pub mod array;
pub mod beamforming;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod network;
pub mod scenario;
pub mod topology;

pub use array::{
    beampattern, beampattern_magnitude_closed_form, combined_steering, steering_vector, Angle,
    Pose, UlaSurface,
};
pub use beamforming::{
    interference_free_weights, mrc_weights, optimal_positions, random_weights, zf_decode,
    InterferenceFreeSolution, MrcDesign, TransceiverPair,
};
pub use capacity::{logdet_capacity, single_irs_bound, sinr_sum_rate, RateParams};
pub use channel::{
    edge_amplitude_from_loss_db, inter_irs_channel_exact, inter_irs_channel_farfield,
    single_irs_channel, InterIrsLink, WeightVector,
};
pub use error::{Error, Result};
pub use network::{
    index_matrix, index_rows_with_revisit, index_rows_without_revisit, network_channel,
    network_channel_order, AttachedPair, EffectiveChannel, IndexMatrix, NetworkScenario,
};
pub use scenario::parse_scenario;
pub use topology::{
    bound_cg_equal, bound_cg_general, bound_lg, bound_lg_with_edge_loss, bound_ng,
    decompose_complete_graph, equal_path_count, lg_channel_check, lg_scenario, CgEqualBound,
    DecompositionPlan, GraphKind, NetworkGraph,
};
