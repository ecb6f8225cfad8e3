//! The superdense-coding pipeline: Charlie's pair, Alice's encoding and
//! Bob's two-blackbox decoding, with an oracle Bell analyzer and sweeps.

mod decode;
mod prepare;
mod run;

use core::f64::consts::PI;

pub use decode::{
    blackbox1, blackbox1_heralded, blackbox2_paper, decode_oracle, ramsey_branch_sign, unique_argmax, Blackbox1Outcome,
    Blackbox2Outcome, OracleDecision, OracleMeasurement, CANONICAL_OUTCOME, INTERNAL_OUTCOMES, MOMENTUM_OUTCOMES,
};
pub use prepare::{prepare_hyperentangled_pair, prepare_hypersuperposition, reference_pair, PairPreparation};
pub use run::{
    bob_reduced_density, confusion_matrix, discrimination_sweep, encode, momentum_concurrence, run_sdc, ConfusionMatrix,
    MomentumConcurrence, SdcReport, SweepPoint,
};

use crate::dynamics::{BraggConfig, PhaseMode, PhysicalParams};
use crate::{Error, Result};

/// How Bob turns the post-Blackbox-1 momentum state into bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    /// Beamsplitters on both atoms and a momentum reading, taken literally.
    PaperLiteral,
    /// Square-root measurement over the four candidate Bell states.
    #[default]
    Oracle,
}

/// Which Blackbox 1 outcomes are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PostselectPolicy {
    /// Only (g_A, e_B).
    #[default]
    SingleOutcome,
    /// Any outcome, with a σ_z on Bob's momentum where the branch sign differs.
    AllOutcomesCorrected,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdcConfig {
    pub params: PhysicalParams,
    pub bragg: BraggConfig,
    pub phase_mode: PhaseMode,
    /// Phase α of the phase gates, in [0, 2π].
    pub encode_phase: f64,
    pub decoder: DecoderKind,
    pub postselect_policy: PostselectPolicy,
    pub seed: u64,
}

impl Default for SdcConfig {
    fn default() -> Self {
        Self {
            params: PhysicalParams::rb85(),
            bragg: BraggConfig::default(),
            phase_mode: PhaseMode::Full,
            encode_phase: PI,
            decoder: DecoderKind::Oracle,
            postselect_policy: PostselectPolicy::SingleOutcome,
            seed: 0,
        }
    }
}

impl SdcConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.bragg.validate(&self.params)?;
        if !(0.0..=2.0 * PI).contains(&self.encode_phase) {
            return Err(Error::InvalidParameter("encode phase must lie in [0, 2π]"));
        }
        Ok(())
    }

    /// Copy with a different encode phase.
    pub fn with_encode_phase(&self, encode_phase: f64) -> Self {
        Self { encode_phase, ..*self }
    }
}
