use alloc::string::String;

use crate::qstate::Label;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid subsystem `{name}`: {reason}")]
    InvalidSubsystem { name: String, reason: &'static str },

    #[error("label {label} is not a basis label of subsystem `{subsystem}`")]
    UnknownLabel { subsystem: String, label: Label },

    #[error("basis tuple has {got} labels but the state has {expected} subsystems")]
    TupleLength { expected: usize, got: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("state amplitudes contain NaN or infinite values")]
    NonFinite,

    #[error("subsystem index {index} out of range for a state with {count} subsystems")]
    SubsystemIndex { index: usize, count: usize },

    #[error("operator targets do not match the addressed subsystems: {0}")]
    TargetMismatch(&'static str),

    #[error("operator is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("Hamiltonian is not Hermitian (max |H - H†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("outcome {label} has probability {probability:e}, below the post-selection floor")]
    ZeroProbability { label: Label, probability: f64 },

    #[error("subsystem is entangled with the rest of the state (weight on {label} is {probability})")]
    NotFactorizable { label: Label, probability: f64 },

    #[error("states have different subsystem structure")]
    StructureMismatch,

    #[error("not a physical density matrix: {0}")]
    NonPhysical(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("detuning is zero; off-resonant and dispersive operations need Δ ≠ 0")]
    ZeroDetuning,

    #[error("coupling `{0}` is zero; the requested interaction time is unbounded")]
    ZeroCoupling(&'static str),

    #[error("cavity holds no photons; a beamsplitter or mirror would act as the identity")]
    NoPhotons,

    #[error("invalid interaction time {0}")]
    InvalidTime(f64),

    #[error("no decoder candidate reaches the acceptance threshold (best probability {best})")]
    DecodeBelowThreshold { best: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
