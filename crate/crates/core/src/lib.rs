//! Robust transmit covariance design for MISO wiretap channels with
//! norm-bounded eavesdropper channel uncertainty.
//!
//! Everything is generic over the scalar type (`f64` or `f32`); the modules
//! [`f64`] and [`f32`] fix it.

pub mod cj;
pub mod conic;
pub mod dt;
pub mod linalg;
pub mod model;
pub mod oracles;
pub mod power;
pub mod qos;
pub mod scalar;

pub use scalar::Real;

macro_rules! scalar_aliases {
    ($name:ident, $t:ty) => {
        pub mod $name {
            pub type ComplexVector = crate::linalg::ComplexVector<$t>;
            pub type HermitianMatrix = crate::linalg::HermitianMatrix<$t>;
            pub type PencilPair = crate::linalg::PencilPair<$t>;
            pub type SystemParams = crate::model::SystemParams<$t>;
            pub type ChannelSet = crate::model::ChannelSet<$t>;
            pub type MismatchPair = crate::model::MismatchPair<$t>;
            pub type SchemeResult = crate::model::SchemeResult<$t>;
            pub type RobustSettings = crate::dt::RobustSettings<$t>;
            pub type SolverSettings = crate::conic::SolverSettings<$t>;
            pub type ConicProblem = crate::conic::ConicProblem<$t>;
            pub type PowerSplit = crate::power::PowerSplit<$t>;
            pub type ChannelConstants = crate::power::ChannelConstants<$t>;
            pub type CondensationState = crate::power::CondensationState<$t>;
            pub type JointSettings = crate::power::JointSettings<$t>;
        }
    };
}

scalar_aliases!(f64, f64);
scalar_aliases!(f32, f32);
