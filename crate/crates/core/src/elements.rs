//! Atom-optics elements and Alice's four encoding gates.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use core::fmt;

use num_traits::Euclid;

use crate::dynamics::{dispersive_phase_propagator, offresonant_bragg_propagator, PhaseMode, PhysicalParams};
use crate::linalg::CMatrix;
use crate::qstate::{make_state, CompositeState, Label, SubsystemSpec};
use crate::{Error, Propagator, Provenance, Result, C64};

pub const P0: Label = Label::Momentum(0);
pub const PM2: Label = Label::Momentum(-2);

/// Subsystem positions of a shared pair: (internal_A, internal_B,
/// momentum_A, momentum_B).
pub const INTERNAL_A: usize = 0;
pub const INTERNAL_B: usize = 1;
pub const MOMENTUM_A: usize = 2;
pub const MOMENTUM_B: usize = 3;

/// Subsystem list of a two-atom pair.
pub fn pair_subsystems() -> Vec<SubsystemSpec> {
    vec![
        SubsystemSpec::internal("internal_A"),
        SubsystemSpec::internal("internal_B"),
        SubsystemSpec::momentum_pair("momentum_A"),
        SubsystemSpec::momentum_pair("momentum_B"),
    ]
}

/// Subsystem list of a single hyperentangled atom.
pub fn atom_subsystems() -> Vec<SubsystemSpec> {
    vec![SubsystemSpec::internal("internal"), SubsystemSpec::momentum_pair("momentum")]
}

/// Two classical bits. `x` selects the phase, `y` the momentum flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    pub x: bool,
    pub y: bool,
}

/// Table-row name of a message (β_xy).
pub type BellLabel = Message;

impl Message {
    pub const ALL: [Message; 4] = [
        Message { x: false, y: false },
        Message { x: false, y: true },
        Message { x: true, y: false },
        Message { x: true, y: true },
    ];

    pub const fn new(x: bool, y: bool) -> Self {
        Self { x, y }
    }

    /// Parses "00", "01", "10" or "11".
    pub fn parse(bits: &str) -> Result<Self> {
        let b = bits.as_bytes();
        let bit = |c: u8| match c {
            b'0' => Ok(false),
            b'1' => Ok(true),
            _ => Err(Error::InvalidParameter("message bits must be 0 or 1")),
        };
        if b.len() != 2 {
            return Err(Error::InvalidParameter("a message is exactly two bits"));
        }
        Ok(Self { x: bit(b[0])?, y: bit(b[1])? })
    }

    /// Row index 0..4 in the order 00, 01, 10, 11.
    pub fn index(self) -> usize {
        (self.x as usize) << 1 | self.y as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn gate(self, encode_phase: f64) -> GateKind {
        match (self.x, self.y) {
            (false, false) => GateKind::Identity,
            (false, true) => GateKind::Not,
            (true, false) => GateKind::Phase(encode_phase),
            (true, true) => GateKind::PhaseNot(encode_phase),
        }
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.x as u8, self.y as u8)
    }
}

/// Alice's encoding operation. The phase variants carry the encode phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    Identity,
    Not,
    Phase(f64),
    PhaseNot(f64),
}

/// Where Alice's atom sits inside a larger state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomSlots {
    pub internal: usize,
    pub momentum: usize,
}

impl AtomSlots {
    pub const ALICE: AtomSlots = AtomSlots { internal: INTERNAL_A, momentum: MOMENTUM_A };
    pub const BOB: AtomSlots = AtomSlots { internal: INTERNAL_B, momentum: MOMENTUM_B };
    pub const SINGLE: AtomSlots = AtomSlots { internal: 0, momentum: 1 };
}

fn bragg_element(state: &CompositeState, momentum: usize, params: &PhysicalParams, mode: PhaseMode, angle: f64) -> Result<CompositeState> {
    if params.photon_number == 0 {
        return Err(Error::NoPhotons);
    }
    let t = params.bragg_time(params.photon_number, angle)?;
    state.apply_local(&offresonant_bragg_propagator(params, t, mode)?, &[momentum])
}

/// Cavity beamsplitter, αt = π/4, on one momentum pair.
pub fn apply_beamsplitter(state: &CompositeState, momentum: usize, params: &PhysicalParams, mode: PhaseMode) -> Result<CompositeState> {
    bragg_element(state, momentum, params, mode, FRAC_PI_4)
}

/// Cavity mirror, αt = π/2, on one momentum pair.
pub fn apply_mirror(state: &CompositeState, momentum: usize, params: &PhysicalParams, mode: PhaseMode) -> Result<CompositeState> {
    bragg_element(state, momentum, params, mode, FRAC_PI_2)
}

/// Phase `e^{iα}` picked up by |e, n⟩ in the dispersive phase cavity, with
/// the interaction time chosen so that `(n+1)μ²t/Δ ≡ −α (mod 2π)`.
pub fn dispersive_encoding_factor(params: &PhysicalParams, encode_phase: f64) -> Result<C64> {
    if !(0.0..=2.0 * PI).contains(&encode_phase) {
        return Err(Error::InvalidParameter("encode phase must lie in [0, 2π]"));
    }
    if params.detuning == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let rate = params.coupling * params.coupling / params.detuning;
    if rate == 0.0 {
        return Err(Error::ZeroCoupling("coupling"));
    }
    let n = params.photon_number;
    // θ = (n+1)μ²t/Δ must share the sign of Δ for t ≥ 0
    let turn = 2.0 * PI;
    let theta = if params.detuning > 0.0 { Euclid::rem_euclid(&-encode_phase, &turn) } else { -Euclid::rem_euclid(&encode_phase, &turn) };
    let t = theta / ((n + 1) as f64 * rate);
    let u = dispersive_phase_propagator(params, t, n)?;
    let excited = n as usize + (n as usize + 1);
    Ok(u.matrix()[(excited, excited)])
}

/// Diagonal unitary on (internal, momentum) multiplying the single arm
/// |e, `arm`⟩ by `factor`.
fn arm_phase(arm: Label, factor: C64) -> Result<Propagator> {
    let specs = vec![SubsystemSpec::internal("internal"), SubsystemSpec::momentum_pair("momentum")];
    let mut m = CMatrix::identity(4, 4);
    let k = 2 + specs[1].index_of(arm).ok_or(Error::InvalidParameter("arm must be P0 or P-2"))?;
    m[(k, k)] = factor;
    Propagator::new(m, specs, Provenance::Analytic, 0.0)
}

/// Applies Alice's gate to the atom at `slots`.
///
/// Identity passes through a vacuum cavity. Not is the Bragg mirror on the
/// momentum. Phase sends only the |e, P₋₂⟩ arm through a dispersive cavity,
/// which multiplies it by `e^{iα}`. Phase-not mirrors first and then phases
/// the |e, P₀⟩ arm.
pub fn apply_encoding_gate(
    state: &CompositeState,
    slots: AtomSlots,
    kind: GateKind,
    params: &PhysicalParams,
    mode: PhaseMode,
) -> Result<CompositeState> {
    let targets = [slots.internal, slots.momentum];
    match kind {
        GateKind::Identity => {
            state.subsystem(slots.internal)?;
            state.subsystem(slots.momentum)?;
            Ok(state.clone())
        }
        GateKind::Not => apply_mirror(state, slots.momentum, params, mode),
        GateKind::Phase(alpha) => {
            let factor = dispersive_encoding_factor(params, alpha)?;
            state.apply_local(&arm_phase(PM2, factor)?, &targets)
        }
        GateKind::PhaseNot(alpha) => {
            let factor = dispersive_encoding_factor(params, alpha)?;
            let flipped = apply_mirror(state, slots.momentum, params, mode)?;
            flipped.apply_local(&arm_phase(P0, factor)?, &targets)
        }
    }
}

/// Momentum labels (ground arm, excited arm) of a row.
fn arms(y: bool) -> (Label, Label) {
    if y {
        (PM2, P0)
    } else {
        (P0, PM2)
    }
}

fn excited_coefficient(m: Message, encode_phase: f64) -> C64 {
    let minus_i = C64::new(0.0, -1.0);
    if m.x {
        minus_i * C64::cis(encode_phase)
    } else {
        minus_i
    }
}

/// Single-atom reference ket on (internal, momentum):
/// `(|g, a⟩ − i e^{iαx}|e, b⟩)/√2` with (a, b) = (P₀, P₋₂), swapped when y = 1.
pub fn table1_state(m: Message, encode_phase: f64) -> CompositeState {
    let (a, b) = arms(m.y);
    make_state(atom_subsystems(), &[(&[Label::G, a], C64::new(1.0, 0.0)), (&[Label::E, b], excited_coefficient(m, encode_phase))])
        .expect("reference kets are valid")
}

/// Two-atom reference ket on (internal_A, internal_B, momentum_A,
/// momentum_B): Alice's momentum follows [`table1_state`], Bob's stays
/// (P₀ on the ground arm, P₋₂ on the excited arm).
pub fn table2_state(m: Message, encode_phase: f64) -> CompositeState {
    let (a, b) = arms(m.y);
    make_state(
        pair_subsystems(),
        &[
            (&[Label::G, Label::G, a, P0], C64::new(1.0, 0.0)),
            (&[Label::E, Label::E, b, PM2], excited_coefficient(m, encode_phase)),
        ],
    )
    .expect("reference kets are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::qstate::phase_invariant_fidelity;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params() -> PhysicalParams {
        PhysicalParams::rb85()
    }

    fn beta00() -> CompositeState {
        table1_state(Message::new(false, false), PI)
    }

    fn momentum_state(l: Label) -> CompositeState {
        CompositeState::basis(vec![SubsystemSpec::momentum_pair("m")], &[l]).unwrap()
    }

    #[test]
    fn message_parsing_and_order() {
        assert_eq!(Message::parse("01").unwrap(), Message::new(false, true));
        assert!(Message::parse("2").is_err());
        assert!(Message::parse("012").is_err());
        assert!(Message::parse("0x").is_err());
        for (i, m) in Message::ALL.iter().enumerate() {
            assert_eq!(m.index(), i);
            assert_eq!(Message::from_index(i), *m);
            assert_eq!(Message::parse(&alloc::format!("{m}")).unwrap(), *m);
        }
    }

    #[test]
    fn beamsplitter_outputs() {
        let p = params();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let out = apply_beamsplitter(&momentum_state(P0), 0, &p, PhaseMode::Full).unwrap();
        assert!((out.amplitudes()[0] - c(0.0, h)).norm() < 1e-12);
        assert!((out.amplitudes()[1] - c(-h, 0.0)).norm() < 1e-12);
        let out = apply_beamsplitter(&momentum_state(PM2), 0, &p, PhaseMode::Full).unwrap();
        assert!((out.amplitudes()[0] - c(-h, 0.0)).norm() < 1e-12);
        assert!((out.amplitudes()[1] - c(0.0, h)).norm() < 1e-12);
    }

    #[test]
    fn two_beamsplitters_make_a_mirror() {
        let p = params();
        let once = apply_beamsplitter(&momentum_state(P0), 0, &p, PhaseMode::Full).unwrap();
        let twice = apply_beamsplitter(&once, 0, &p, PhaseMode::Full).unwrap();
        assert_abs_diff_eq!(twice.probability(&[PM2]).unwrap(), 1.0, epsilon = 1e-12);
        let mirror = apply_mirror(&momentum_state(P0), 0, &p, PhaseMode::Full).unwrap();
        assert_abs_diff_eq!(phase_invariant_fidelity(&twice, &mirror).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn beamsplitter_needs_photons() {
        let p = PhysicalParams { photon_number: 0, ..params() };
        assert_eq!(apply_beamsplitter(&momentum_state(P0), 0, &p, PhaseMode::Full), Err(Error::NoPhotons));
    }

    #[test]
    fn identity_gate_leaves_state() {
        let out = apply_encoding_gate(&beta00(), AtomSlots::SINGLE, GateKind::Identity, &params(), PhaseMode::Full).unwrap();
        assert_eq!(out, beta00());
    }

    #[test]
    fn not_gate_flips_momentum() {
        for mode in [PhaseMode::Full, PhaseMode::Paper] {
            let out = apply_encoding_gate(&beta00(), AtomSlots::SINGLE, GateKind::Not, &params(), mode).unwrap();
            let target = table1_state(Message::new(false, true), PI);
            assert_abs_diff_eq!(phase_invariant_fidelity(&out, &target).unwrap(), 1.0, epsilon = 1e-12);
        }
        // the full-mode mirror carries −i, the Paper-mode mirror +i
        let full = apply_encoding_gate(&beta00(), AtomSlots::SINGLE, GateKind::Not, &params(), PhaseMode::Full).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((full.amplitude(&[Label::G, PM2]).unwrap() - c(0.0, -h)).norm() < 1e-12);
        let paper = apply_encoding_gate(&beta00(), AtomSlots::SINGLE, GateKind::Not, &params(), PhaseMode::Paper).unwrap();
        assert!((paper.amplitude(&[Label::G, PM2]).unwrap() - c(0.0, h)).norm() < 1e-12);
    }

    #[test]
    fn phase_gate_at_pi() {
        let out = apply_encoding_gate(&beta00(), AtomSlots::SINGLE, GateKind::Phase(PI), &params(), PhaseMode::Full).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(&[Label::G, P0]).unwrap() - c(h, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&[Label::E, PM2]).unwrap() - c(0.0, h)).norm() < 1e-9);
    }

    #[test]
    fn gates_reproduce_table_rows() {
        for &alpha in &[PI, 0.4, 2.0, 5.5] {
            for m in Message::ALL {
                for mode in [PhaseMode::Full, PhaseMode::Paper] {
                    let out = apply_encoding_gate(&beta00(), AtomSlots::SINGLE, m.gate(alpha), &params(), mode).unwrap();
                    let f = phase_invariant_fidelity(&out, &table1_state(m, alpha)).unwrap();
                    assert_abs_diff_eq!(f, 1.0, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn dispersive_factor_tracks_encode_phase() {
        for &alpha in &[0.0, 0.3, PI, 4.0, 2.0 * PI] {
            let f = dispersive_encoding_factor(&params(), alpha).unwrap();
            assert!((f - C64::cis(alpha)).norm() < 1e-9, "{alpha}: {f}");
            let neg = PhysicalParams { detuning: -params().detuning, ..params() };
            let f = dispersive_encoding_factor(&neg, alpha).unwrap();
            assert!((f - C64::cis(alpha)).norm() < 1e-9, "{alpha}: {f}");
        }
        assert!(dispersive_encoding_factor(&params(), -0.1).is_err());
        assert!(dispersive_encoding_factor(&params(), 7.0).is_err());
        let p = PhysicalParams { detuning: 0.0, ..params() };
        assert_eq!(dispersive_encoding_factor(&p, PI), Err(Error::ZeroDetuning));
    }

    #[test]
    fn phase_gate_composes_additively() {
        let (a1, a2) = (0.7, 1.9);
        let p = params();
        let s = beta00();
        let two = apply_encoding_gate(&apply_encoding_gate(&s, AtomSlots::SINGLE, GateKind::Phase(a1), &p, PhaseMode::Full).unwrap(), AtomSlots::SINGLE, GateKind::Phase(a2), &p, PhaseMode::Full).unwrap();
        let one = apply_encoding_gate(&s, AtomSlots::SINGLE, GateKind::Phase(a1 + a2), &p, PhaseMode::Full).unwrap();
        for (a, b) in two.amplitudes().iter().zip(one.amplitudes()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn not_twice_is_identity_up_to_phase() {
        let p = params();
        let s = table1_state(Message::new(true, false), 1.1);
        let twice = apply_encoding_gate(&apply_encoding_gate(&s, AtomSlots::SINGLE, GateKind::Not, &p, PhaseMode::Full).unwrap(), AtomSlots::SINGLE, GateKind::Not, &p, PhaseMode::Full).unwrap();
        assert_abs_diff_eq!(phase_invariant_fidelity(&twice, &s).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gates_act_only_on_alice() {
        let p = params();
        let pair = table2_state(Message::new(false, false), PI);
        let bob = pair.reduced_density(&[INTERNAL_B, MOMENTUM_B]).unwrap();
        for m in Message::ALL {
            let out = apply_encoding_gate(&pair, AtomSlots::ALICE, m.gate(PI), &p, PhaseMode::Full).unwrap();
            assert!(max_abs_diff(&out.reduced_density(&[INTERNAL_B, MOMENTUM_B]).unwrap(), &bob) <= 1e-12);
            assert_abs_diff_eq!(phase_invariant_fidelity(&out, &table2_state(m, PI)).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn table_rows_at_pi() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let b11 = table1_state(Message::new(true, true), PI);
        assert!((b11.amplitude(&[Label::G, PM2]).unwrap() - c(h, 0.0)).norm() < 1e-15);
        assert!((b11.amplitude(&[Label::E, P0]).unwrap() - c(0.0, h)).norm() < 1e-15);
        let b01 = table1_state(Message::new(false, true), PI);
        assert!((b01.amplitude(&[Label::E, P0]).unwrap() - c(0.0, -h)).norm() < 1e-15);
        // rows are mutually orthogonal exactly at α = π
        for a in Message::ALL {
            for b in Message::ALL {
                let f = phase_invariant_fidelity(&table1_state(a, PI), &table1_state(b, PI)).unwrap();
                assert_abs_diff_eq!(f, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }
}
