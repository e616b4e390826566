//! Random regular digraph matrices: exact counting and sampling, the
//! shuffling coupling, discrepancy checks and exact rank.

pub mod coupling;
pub mod discrepancy;
pub mod error;
pub mod matrix;
pub mod rank;
pub mod rng;
pub mod sampler;
pub mod scalar;

pub use coupling::{
    apply_plan, cross_set, determinant_walk, enumerate_plans, expected_cross_size, locate_patches, make_restricted_plan,
    make_shuffle_plan, walk_decomposition, DeterminantWalk, PatchParams, PatchResult, ShufflePlan, WalkDecomposition,
};
pub use discrepancy::{DiscrepancyReport, EventReport, GoodEventConfig};
pub use error::{Error, Result};
pub use matrix::{hadamard, CoEx, Matrix01, RegularityWitness, SignMatrix, SignedMatrix};
pub use rank::{corank_exact, is_singular, rank_mod_p, IntMatrix, LevelSetProfile, RankMethod, RankResult};
pub use rng::{seeded, trial_stream, LabRng};
pub use sampler::{count, enumerate_all, sample_exact, sample_mcmc, CountResult, RrdSampler, SampleConfig, SampleMode};
pub use scalar::{ExactScalar, Scalar};

pub type Rational = num_rational::BigRational;

pub type Walk = WalkDecomposition<Rational>;
pub type WalkF64 = WalkDecomposition<f64>;
pub type WalkF32 = WalkDecomposition<f32>;
pub type DetWalk = DeterminantWalk<Rational>;
pub type DetWalkF64 = DeterminantWalk<f64>;
pub type LevelProfile = LevelSetProfile;
