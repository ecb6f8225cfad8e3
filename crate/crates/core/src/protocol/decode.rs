use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PostselectPolicy, SdcConfig};
use crate::dynamics::ramsey_unitary;
use crate::elements::{apply_beamsplitter, table2_state, Message, INTERNAL_A, INTERNAL_B, P0, PM2};
use crate::linalg::{psd_inv_sqrt, CMatrix, CVector};
use crate::qstate::{CompositeState, Label, SubsystemSpec};
use crate::{Error, Propagator, Provenance, Result, C64, TOLERANCES};

/// Internal outcome (Alice, Bob) kept by the single-outcome policy.
pub const CANONICAL_OUTCOME: (Label, Label) = (Label::G, Label::E);

/// All four internal outcomes in (g,g), (g,e), (e,g), (e,e) order.
pub const INTERNAL_OUTCOMES: [(Label, Label); 4] =
    [(Label::G, Label::G), (Label::G, Label::E), (Label::E, Label::G), (Label::E, Label::E)];

/// Momentum readings (Alice, Bob) in bit order 00, 01, 10, 11.
pub const MOMENTUM_OUTCOMES: [(Label, Label); 4] = [(P0, P0), (P0, PM2), (PM2, P0), (PM2, PM2)];

/// Relative sign the Ramsey zones put between the excited and ground
/// branches of a (g,g)/(e,e) superposition when (a, b) is detected:
/// `⟨a|R|e⟩⟨b|R|e⟩ / ⟨a|R|g⟩⟨b|R|g⟩`.
pub fn ramsey_branch_sign(outcome: (Label, Label)) -> f64 {
    let r = ramsey_unitary();
    let m = r.matrix();
    let row = |l: Label| if l == Label::G { 0 } else { 1 };
    let ratio = |l: Label| (m[(row(l), 1)] / m[(row(l), 0)]).re;
    ratio(outcome.0) * ratio(outcome.1)
}

fn bob_z() -> Propagator {
    let m = CMatrix::from_diagonal(&CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
    Propagator::new(m, vec![SubsystemSpec::momentum_pair("momentum")], Provenance::Analytic, 0.0).expect("σ_z is unitary")
}

fn ramsey_both(state: &CompositeState) -> Result<CompositeState> {
    let r = ramsey_unitary();
    state.apply_local(&r, &[INTERNAL_A])?.apply_local(&r, &[INTERNAL_B])
}

/// Blackbox 1 with a given internal outcome: Ramsey on Alice, Ramsey on Bob,
/// post-select both internal levels on `outcome` and return the
/// probability with the normalized (momentum_A, momentum_B) state. With
/// `correct`, outcomes whose branch sign differs from the canonical (g, e)
/// one get a σ_z on Bob's momentum so every branch leaves the same state.
pub fn blackbox1_heralded(state: &CompositeState, outcome: (Label, Label), correct: bool) -> Result<(f64, CompositeState)> {
    let rotated = ramsey_both(state)?;
    let (p, momenta) = rotated.postselect_many(&[(INTERNAL_A, outcome.0), (INTERNAL_B, outcome.1)])?;
    if correct && ramsey_branch_sign(outcome) != ramsey_branch_sign(CANONICAL_OUTCOME) {
        return Ok((p, momenta.apply_local(&bob_z(), &[1])?));
    }
    Ok((p, momenta))
}

/// Result of Blackbox 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Blackbox1Outcome {
    pub outcome: (Label, Label),
    pub probability: f64,
    /// Normalized state on (momentum_A, momentum_B).
    pub momenta: CompositeState,
    /// Seed of the draw, for the all-outcomes policy.
    pub seed: Option<u64>,
}

/// Blackbox 1 under the configured policy. The single-outcome policy keeps
/// only (g_A, e_B); the corrected policy draws the internal outcome from
/// the Born distribution with `config.seed` and applies the sign fix.
pub fn blackbox1(state: &CompositeState, config: &SdcConfig) -> Result<Blackbox1Outcome> {
    match config.postselect_policy {
        PostselectPolicy::SingleOutcome => {
            let (probability, momenta) = blackbox1_heralded(state, CANONICAL_OUTCOME, false)?;
            Ok(Blackbox1Outcome { outcome: CANONICAL_OUTCOME, probability, momenta, seed: None })
        }
        PostselectPolicy::AllOutcomesCorrected => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let rotated = ramsey_both(state)?;
            let a = rotated.sample_measurement_with(INTERNAL_A, &mut rng)?;
            let b = a.collapsed.sample_measurement_with(INTERNAL_B, &mut rng)?;
            let outcome = (a.outcome, b.outcome);
            let (probability, momenta) = blackbox1_heralded(state, outcome, true)?;
            Ok(Blackbox1Outcome { outcome, probability, momenta, seed: Some(config.seed) })
        }
    }
}

/// Literal Blackbox 2 result.
#[derive(Clone, Debug, PartialEq)]
pub struct Blackbox2Outcome {
    /// Probabilities of [`MOMENTUM_OUTCOMES`].
    pub distribution: [f64; 4],
    /// Bits of the unique most likely reading; `None` on a tie.
    pub decoded: Option<Message>,
}

/// Beamsplitter (αt = π/4) on both momenta, then a momentum reading of
/// each atom with P₀ ↦ 0 and P₋₂ ↦ 1.
pub fn blackbox2_paper(momenta: &CompositeState, config: &SdcConfig) -> Result<Blackbox2Outcome> {
    check_momenta(momenta)?;
    let mut s = apply_beamsplitter(momenta, 0, &config.params, config.phase_mode)?;
    s = apply_beamsplitter(&s, 1, &config.params, config.phase_mode)?;
    let mut distribution = [0.0; 4];
    for (slot, &(a, b)) in distribution.iter_mut().zip(&MOMENTUM_OUTCOMES) {
        *slot = s.probability(&[a, b])?;
    }
    Ok(Blackbox2Outcome { distribution, decoded: unique_argmax(&distribution).map(Message::from_index) })
}

/// Index of the unique largest entry; entries within the decode tolerance
/// of the maximum count as ties.
pub fn unique_argmax(values: &[f64]) -> Option<usize> {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut leaders = values.iter().enumerate().filter(|(_, &v)| best - v <= TOLERANCES.decode_overlap);
    let first = leaders.next()?.0;
    if leaders.next().is_some() {
        None
    } else {
        Some(first)
    }
}

fn check_momenta(s: &CompositeState) -> Result<()> {
    let pair = SubsystemSpec::momentum_pair("m");
    if s.subsystems().len() == 2 && s.subsystems().iter().all(|x| x.same_basis(&pair)) {
        Ok(())
    } else {
        Err(Error::StructureMismatch)
    }
}

/// Square-root measurement over the four candidate momentum states that
/// the four reference encodings leave after the canonical Blackbox 1.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleMeasurement {
    /// Measurement vectors, one per message.
    vectors: Vec<CVector>,
}

impl OracleMeasurement {
    pub fn new(encode_phase: f64) -> Result<Self> {
        let mut candidates = Vec::with_capacity(4);
        for m in Message::ALL {
            let (_, momenta) = blackbox1_heralded(&table2_state(m, encode_phase), CANONICAL_OUTCOME, true)?;
            candidates.push(CVector::from_column_slice(momenta.amplitudes()));
        }
        let mut gram = CMatrix::zeros(4, 4);
        for c in &candidates {
            gram += c * c.adjoint();
        }
        let root = psd_inv_sqrt(&gram, 1e-12);
        Ok(Self { vectors: candidates.iter().map(|c| &root * c).collect() })
    }

    /// Probability of each decoded message.
    pub fn probabilities(&self, momenta: &CompositeState) -> Result<[f64; 4]> {
        check_momenta(momenta)?;
        let psi = CVector::from_column_slice(momenta.amplitudes());
        let mut p = [0.0; 4];
        for (slot, v) in p.iter_mut().zip(&self.vectors) {
            *slot = v.dotc(&psi).norm_sqr();
        }
        Ok(p)
    }
}

/// Oracle decision for one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleDecision {
    pub bits: Message,
    pub probability: f64,
    pub probabilities: [f64; 4],
}

/// Bell analysis of a post-Blackbox-1 momentum state: accepts the message
/// whose square-root-measurement probability is at least `1 − 1e-9`.
pub fn decode_oracle(momenta: &CompositeState, config: &SdcConfig) -> Result<OracleDecision> {
    let probabilities = OracleMeasurement::new(config.encode_phase)?.probabilities(momenta)?;
    let (best, &probability) = probabilities
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four candidates");
    if probability < 1.0 - TOLERANCES.decode_overlap {
        return Err(Error::DecodeBelowThreshold { best: probability });
    }
    Ok(OracleDecision { bits: Message::from_index(best), probability, probabilities })
}
