//! Bath evolutions: Stinespring channels, composition, strong symmetry of
//! the dilation, and the cluster-state dephasing example.

pub mod channel;
pub mod cluster;
pub mod experiment;
pub mod spec;

pub use channel::{
    apply_channel, compose_channels, is_strongly_symmetric_channel, BathState, Channel, CptpCheck, JointUnitary,
    StrongSymmetryCheck,
};
pub use cluster::{
    cluster_dephasing_channel, cluster_dephasing_channel_with, cluster_stabilizers, dephasing_channel, random_channel,
    random_strongly_symmetric_channel, stabilizer_expectations, ClusterBath,
};
pub use experiment::{irreversibility_experiment, IrreversibilityReport};
pub use spec::{BathSpec, ChannelSpec};
