use alloc::string::String;
use alloc::vec::Vec;

use super::{
    blackbox1, blackbox1_heralded, blackbox2_paper, prepare_hyperentangled_pair, unique_argmax, DecoderKind,
    OracleMeasurement, PostselectPolicy, SdcConfig, CANONICAL_OUTCOME, INTERNAL_OUTCOMES,
};
use crate::dynamics::PhaseMode;
use crate::elements::{apply_encoding_gate, table2_state, AtomSlots, Message, INTERNAL_A, INTERNAL_B, MOMENTUM_A, MOMENTUM_B};
use crate::linalg::CMatrix;
use crate::qstate::{concurrence, phase_invariant_fidelity, pure_bipartite_concurrence, CompositeState, Label};
use crate::{Error, Result, TOLERANCES};

/// Alice's encoding of `message` on her half of the pair.
pub fn encode(pair: &CompositeState, message: Message, config: &SdcConfig) -> Result<CompositeState> {
    apply_encoding_gate(pair, AtomSlots::ALICE, message.gate(config.encode_phase), &config.params, config.phase_mode)
}

/// Reduced density matrix of Bob's atom on (internal_B, momentum_B).
pub fn bob_reduced_density(pair: &CompositeState) -> Result<CMatrix> {
    pair.reduced_density(&[INTERNAL_B, MOMENTUM_B])
}

/// Entanglement measures of a two-atom state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumConcurrence {
    /// Wootters concurrence of ρ(momentum_A, momentum_B) with the internal
    /// levels traced out. The two branches differ in the internal levels as
    /// well, so this vanishes for the hyperentangled pair.
    pub reduced: f64,
    /// Wootters concurrence of the momentum state Blackbox 1 leaves after
    /// heralding (g_A, e_B).
    pub heralded: f64,
    /// Pure-state concurrence across the Alice:Bob cut.
    pub atoms: f64,
}

pub fn momentum_concurrence(pair: &CompositeState) -> Result<MomentumConcurrence> {
    let reduced = concurrence(&pair.reduced_density(&[MOMENTUM_A, MOMENTUM_B])?)?;
    let (_, momenta) = blackbox1_heralded(pair, CANONICAL_OUTCOME, false)?;
    let heralded = concurrence(&momenta.reduced_density(&[0, 1])?)?;
    let atoms = pure_bipartite_concurrence(pair, &[INTERNAL_A, MOMENTUM_A])?;
    Ok(MomentumConcurrence { reduced, heralded, atoms })
}

/// Transcript of one pipeline run.
#[derive(Clone, Debug, PartialEq)]
pub struct SdcReport {
    pub message: Message,
    pub decoder: DecoderKind,
    pub phase_mode: PhaseMode,
    pub postselect_policy: PostselectPolicy,
    pub encode_phase: f64,
    pub seed: u64,
    /// Fidelity of the encoded pair to the reference row for `message`, up
    /// to global phase.
    pub encoded_state_fidelity: f64,
    /// Probability of heralding the auxiliary atom in |g⟩.
    pub aux_probability: f64,
    pub blackbox1_outcome: (Label, Label),
    pub blackbox1_probability: f64,
    /// `aux_probability · blackbox1_probability`.
    pub pipeline_yield: f64,
    /// Wootters concurrence of the momentum state after Blackbox 1.
    pub momentum_concurrence: f64,
    /// Probabilities of the readings 00, 01, 10, 11. For the literal decoder
    /// these are (momentum_A, momentum_B) readings with P₀ ↦ 0 and P₋₂ ↦ 1;
    /// for the oracle they are the square-root-measurement outcomes.
    pub outcome_distribution: [f64; 4],
    /// `None` when the literal decoder ties or the oracle falls below
    /// threshold.
    pub decoded_bits: Option<Message>,
    /// Named states along the pipeline.
    pub snapshots: Vec<(String, CompositeState)>,
}

/// prepare → encode → Blackbox 1 → decoder.
pub fn run_sdc(message: Message, config: &SdcConfig) -> Result<SdcReport> {
    config.validate()?;
    let prep = prepare_hyperentangled_pair(config)?;
    let encoded = encode(&prep.state, message, config)?;
    let encoded_state_fidelity = phase_invariant_fidelity(&encoded, &table2_state(message, config.encode_phase))?;
    let bb1 = blackbox1(&encoded, config)?;
    let momentum_concurrence = concurrence(&bb1.momenta.reduced_density(&[0, 1])?)?;
    let (outcome_distribution, decoded_bits) = match config.decoder {
        DecoderKind::PaperLiteral => {
            let out = blackbox2_paper(&bb1.momenta, config)?;
            (out.distribution, out.decoded)
        }
        DecoderKind::Oracle => {
            let p = OracleMeasurement::new(config.encode_phase)?.probabilities(&bb1.momenta)?;
            let decoded = unique_argmax(&p)
                .filter(|&i| p[i] >= 1.0 - TOLERANCES.decode_overlap)
                .map(Message::from_index);
            (p, decoded)
        }
    };
    let mut snapshots = prep.stages;
    snapshots.push((String::from("encoded"), encoded));
    snapshots.push((String::from("after_blackbox1"), bb1.momenta));
    Ok(SdcReport {
        message,
        decoder: config.decoder,
        phase_mode: config.phase_mode,
        postselect_policy: config.postselect_policy,
        encode_phase: config.encode_phase,
        seed: config.seed,
        encoded_state_fidelity,
        aux_probability: prep.aux_probability,
        blackbox1_outcome: bb1.outcome,
        blackbox1_probability: bb1.probability,
        pipeline_yield: prep.aux_probability * bb1.probability,
        momentum_concurrence,
        outcome_distribution,
        decoded_bits,
        snapshots,
    })
}

/// Decode probabilities, rows = sent message, columns = decoded message.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfusionMatrix {
    pub rows: [[f64; 4]; 4],
    /// Whether the literal decoder's most likely reading is tied for a row.
    /// The row itself still spreads the probability over the readings.
    pub tied: [bool; 4],
}

impl ConfusionMatrix {
    /// Mean of the diagonal.
    pub fn message_success(&self) -> f64 {
        (0..4).map(|i| self.rows[i][i]).sum::<f64>() / 4.0
    }

    /// Mean fraction of correctly decoded bits.
    pub fn bit_success(&self) -> f64 {
        let mut total = 0.0;
        for (sent, row) in self.rows.iter().enumerate() {
            for (got, p) in row.iter().enumerate() {
                let wrong = (sent ^ got).count_ones() as f64;
                total += p * (2.0 - wrong) / 2.0;
            }
        }
        total / 4.0
    }
}

fn decoder_row(momenta: &CompositeState, config: &SdcConfig, oracle: &OracleMeasurement) -> Result<[f64; 4]> {
    match config.decoder {
        DecoderKind::PaperLiteral => Ok(blackbox2_paper(momenta, config)?.distribution),
        DecoderKind::Oracle => oracle.probabilities(momenta),
    }
}

/// Confusion matrix of the configured decoder over the whole pipeline. Under
/// the corrected policy each row averages over the four Blackbox 1 outcomes
/// with their Born weights.
pub fn confusion_matrix(config: &SdcConfig) -> Result<ConfusionMatrix> {
    config.validate()?;
    let pair = prepare_hyperentangled_pair(config)?.state;
    let oracle = OracleMeasurement::new(config.encode_phase)?;
    let mut rows = [[0.0; 4]; 4];
    let mut tied = [false; 4];
    for m in Message::ALL {
        let encoded = encode(&pair, m, config)?;
        let row = &mut rows[m.index()];
        match config.postselect_policy {
            PostselectPolicy::SingleOutcome => {
                let (_, momenta) = blackbox1_heralded(&encoded, CANONICAL_OUTCOME, false)?;
                *row = decoder_row(&momenta, config, &oracle)?;
            }
            PostselectPolicy::AllOutcomesCorrected => {
                for outcome in INTERNAL_OUTCOMES {
                    let (p, momenta) = blackbox1_heralded(&encoded, outcome, true)?;
                    for (r, q) in row.iter_mut().zip(decoder_row(&momenta, config, &oracle)?) {
                        *r += p * q;
                    }
                }
            }
        }
        tied[m.index()] = config.decoder == DecoderKind::PaperLiteral && unique_argmax(row).is_none();
    }
    Ok(ConfusionMatrix { rows, tied })
}

/// One cell of [`discrimination_sweep`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Mean fraction of bits the oracle decodes correctly.
    pub success_probability: f64,
    /// Mean probability of decoding the whole message correctly.
    pub message_success_probability: f64,
}

/// Oracle decode success against the phase-gate angle.
pub fn discrimination_sweep(config: &SdcConfig, alpha_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidParameter("phase grid is empty"));
    }
    alpha_grid
        .iter()
        .map(|&alpha| {
            let cfg = SdcConfig { decoder: DecoderKind::Oracle, ..config.with_encode_phase(alpha) };
            let cm = confusion_matrix(&cfg)?;
            Ok(SweepPoint { alpha, success_probability: cm.bit_success(), message_success_probability: cm.message_success() })
        })
        .collect()
}
