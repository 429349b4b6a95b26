//! Ionescu–Wainger denominator and rational sets, partition families and
//! the O-property decomposition.

mod denominators;
mod oprop;
mod partitions;
mod projection;

pub use denominators::{
    build_denominator_set, build_rational_set, build_un, DenominatorSet, RationalSet, MAX_N0, RATIONAL_BUDGET,
};
pub use oprop::{decompose_o_property, o_property_check, pi_of, ODecomposition, OPropertyFamily, OPropertyOutcome};
pub use partitions::{partition_bound, partition_family, PartitionFamily, VERIFY_BUDGET};
pub use projection::{projection_bump, projection_multiplier, ProjectionMultiplier, ProjectionValue};
