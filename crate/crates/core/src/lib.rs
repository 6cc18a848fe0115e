//! Measurement simulator for finite-dimensional quantum systems.
//!
//! Besides the textbook Born rule ([`born`]) and imprecise measurement with
//! resolution amplitudes ([`imprecise`]), the crate implements a sequential
//! Born rule for devices built from arbitrary, possibly nonorthogonal,
//! measurement states ([`sequential`]): every ordering of the device's states
//! is applied one state at a time, each step forking into an affirmative or a
//! null result.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar to `f64`; `*F32` aliases are provided for
//! single precision.

pub mod born;
pub mod error;
pub mod hilbert;
pub mod imprecise;
pub mod linalg;
pub mod scalar;
pub mod scenarios;
pub mod sequential;

pub use error::{Error, Result};
pub use scalar::Real;

pub use born::{born_distribution, collapse_projective};
pub use hilbert::{
    evolve_unitary, inner_product, normalize, phase_equal, project_affirmative, project_null,
    random_state,
};
pub use imprecise::{
    imprecise_collapse, imprecise_distribution, orthogonality_metric, reduced_operator,
};
pub use scenarios::{build_example, chain_run, rotate_2d, ChainMode, ExampleId};
pub use sequential::{
    brute_force_oracle, marginal_probability, measure_exact, measure_exact_with, measure_sampled,
    measure_sampled_with, total_variation_distance, Decision, Mode,
};

pub type StateVector = hilbert::StateVector<f64>;
pub type HermitianOperator = hilbert::HermitianOperator<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type OrthonormalBasisMeasurement = born::OrthonormalBasisMeasurement<f64>;
pub type ValueDistribution = born::ValueDistribution<f64>;
pub type MeasurementDevice = sequential::MeasurementDevice<f64>;
pub type Outcome = sequential::Outcome<f64>;
pub type OutcomeDistribution = sequential::OutcomeDistribution<f64>;
pub type PathRecord = sequential::PathRecord<f64>;
pub type MeasureOptions = sequential::MeasureOptions<f64>;
pub type ResolutionMatrix = imprecise::ResolutionMatrix<f64>;
pub type ReducedOperator = imprecise::ReducedOperator<f64>;
pub type Scenario = scenarios::Scenario<f64>;
pub type ScenarioOptions = scenarios::ScenarioOptions<f64>;
pub type ExampleParams = scenarios::ExampleParams<f64>;
pub type ChainStage = scenarios::ChainStage<f64>;
pub type ChainTrace = scenarios::ChainTrace<f64>;

pub type StateVectorF32 = hilbert::StateVector<f32>;
pub type MeasurementDeviceF32 = sequential::MeasurementDevice<f32>;
pub type OutcomeDistributionF32 = sequential::OutcomeDistribution<f32>;
pub type ResolutionMatrixF32 = imprecise::ResolutionMatrix<f32>;
