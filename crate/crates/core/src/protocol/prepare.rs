use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use super::SdcConfig;
use crate::dynamics::{
    cavity_bragg_propagator, classical_pi_pulse, jc_swap_propagator, ramsey_unitary, resonant_vacuum_propagator,
};
use crate::elements::{atom_subsystems, pair_subsystems, INTERNAL_A, INTERNAL_B, MOMENTUM_A, MOMENTUM_B, P0, PM2};
use crate::linalg::CMatrix;
use crate::qstate::{make_state, CompositeState, Label, SubsystemSpec};
use crate::{Error, Propagator, Provenance, Result, C64};

/// One atom in a superposition of internal levels and momenta, on
/// (internal, momentum): a resonant pass through the vacuum cavity for
/// t = 2π/β, after which the untouched cavity is factored out.
pub fn prepare_hypersuperposition(config: &SdcConfig) -> Result<CompositeState> {
    config.validate()?;
    let mut specs = atom_subsystems();
    specs.push(SubsystemSpec::fock("cavity", 1)?);
    let one = C64::new(1.0, 0.0);
    let input = make_state(specs, &[(&[Label::G, P0, Label::Fock(0)], one), (&[Label::E, P0, Label::Fock(0)], one)])?;
    let t = config.params.hypersuperposition_time()?;
    let u = resonant_vacuum_propagator(&config.params, t, config.phase_mode)?;
    input.apply_local(&u, &[0, 1, 2])?.factor_out(2, Label::Fock(0))
}

/// Output of the Bell-pair preparation.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPreparation {
    /// Pair on (internal_A, internal_B, momentum_A, momentum_B).
    pub state: CompositeState,
    /// Probability of detecting the auxiliary atom in |g⟩.
    pub aux_probability: f64,
    /// Named intermediate states, in order.
    pub stages: Vec<(String, CompositeState)>,
}

/// Controlled unitary on (internal, momentum) applying `pulse` to the
/// internal level of the P₋₂ arm only.
fn arm_selective(pulse: &Propagator) -> Result<Propagator> {
    let mut m = CMatrix::identity(4, 4);
    // index = internal·2 + momentum, P₋₂ is momentum index 1
    for r in 0..2 {
        for c in 0..2 {
            m[(2 * r + 1, 2 * c + 1)] = pulse.matrix()[(r, c)];
        }
    }
    Propagator::new(m, atom_subsystems(), Provenance::Analytic, pulse.elapsed())
}

/// Charlie's hyperentangled pair.
///
/// 1. Two ground-state atoms at P₀ cross a cavity in (|0⟩+|1⟩)/√2
///    off-resonantly, each for the one-photon mirror time.
/// 2. An auxiliary ground-state atom swaps the cavity excitation onto
///    itself (resonant JC, μ_s t = 3π/2) and the cavity, now in |0⟩, is
///    factored out.
/// 3. The auxiliary atom crosses a Ramsey zone and is detected in |g⟩.
/// 4. A classical π pulse (phase `laser_phase`) drives g → e on the P₋₂
///    arm of both atoms.
pub fn prepare_hyperentangled_pair(config: &SdcConfig) -> Result<PairPreparation> {
    config.validate()?;
    let params = &config.params;
    let n_max = config.bragg.n_max;
    let mut stages = Vec::new();

    let mut specs = pair_subsystems();
    specs.push(SubsystemSpec::fock("cavity", n_max)?);
    let cavity = specs.len() - 1;
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut state = make_state(
        specs,
        &[(&[Label::G, Label::G, P0, P0, Label::Fock(0)], h), (&[Label::G, Label::G, P0, P0, Label::Fock(1)], h)],
    )?;
    stages.push((String::from("initial"), state.clone()));

    let t_pass = params.bragg_time(1, FRAC_PI_2)?;
    let pass = cavity_bragg_propagator(params, t_pass, config.phase_mode, n_max)?;
    state = state.apply_local(&pass, &[MOMENTUM_A, cavity])?;
    stages.push((String::from("after_atom_1"), state.clone()));
    state = state.apply_local(&pass, &[MOMENTUM_B, cavity])?;
    stages.push((String::from("after_atom_2"), state.clone()));

    if params.aux_coupling == 0.0 {
        return Err(Error::ZeroCoupling("aux_coupling"));
    }
    state = state.tensor(&CompositeState::basis(vec![SubsystemSpec::internal("aux")], &[Label::G])?);
    let aux = state.subsystems().len() - 1;
    let swap = jc_swap_propagator(params.aux_coupling, 3.0 * FRAC_PI_2 / params.aux_coupling, n_max)?;
    state = state.apply_local(&swap, &[aux, cavity])?.factor_out(cavity, Label::Fock(0))?;
    let aux = aux - 1;
    stages.push((String::from("after_swap"), state.clone()));

    state = state.apply_local(&ramsey_unitary(), &[aux])?;
    let (aux_probability, heralded) = state.postselect(aux, Label::G)?;
    state = heralded;
    stages.push((String::from("heralded"), state.clone()));

    if params.rabi_frequency == 0.0 {
        return Err(Error::ZeroCoupling("rabi_frequency"));
    }
    let pulse = classical_pi_pulse(params.rabi_frequency, params.laser_phase, PI / params.rabi_frequency)?;
    let drive = arm_selective(&pulse)?;
    state = state.apply_local(&drive, &[INTERNAL_A, MOMENTUM_A])?;
    state = state.apply_local(&drive, &[INTERNAL_B, MOMENTUM_B])?;
    stages.push((String::from("bell"), state.clone()));

    Ok(PairPreparation { state, aux_probability, stages })
}

/// The momentum Bell state the pipeline targets:
/// `(|g,g,P₀,P₀⟩ − i|e,e,P₋₂,P₋₂⟩)/√2`.
pub fn reference_pair() -> CompositeState {
    make_state(
        pair_subsystems(),
        &[(&[Label::G, Label::G, P0, P0], C64::new(1.0, 0.0)), (&[Label::E, Label::E, PM2, PM2], C64::new(0.0, -1.0))],
    )
    .expect("reference ket is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::PhaseMode;
    use crate::qstate::phase_invariant_fidelity;
    use approx::assert_abs_diff_eq;

    fn config(mode: PhaseMode) -> SdcConfig {
        SdcConfig { phase_mode: mode, ..SdcConfig::default() }
    }

    fn stage<'a>(p: &'a PairPreparation, name: &str) -> &'a CompositeState {
        &p.stages.iter().find(|(n, _)| n == name).unwrap().1
    }

    #[test]
    fn hypersuperposition_in_both_modes() {
        let h = FRAC_1_SQRT_2;
        let paper = prepare_hypersuperposition(&config(PhaseMode::Paper)).unwrap();
        let target = make_state(atom_subsystems(), &[(&[Label::G, P0], C64::new(1.0, 0.0)), (&[Label::E, PM2], C64::new(0.0, -1.0))]).unwrap();
        assert_abs_diff_eq!(phase_invariant_fidelity(&paper, &target).unwrap(), 1.0, epsilon = 1e-12);
        let full = prepare_hypersuperposition(&config(PhaseMode::Full)).unwrap();
        assert_abs_diff_eq!(phase_invariant_fidelity(&full, &target).unwrap(), 0.75, epsilon = 1e-12);
        let branch = C64::new(0.0, -h) * C64::cis(-PI / 3.0);
        assert!((full.amplitude(&[Label::E, PM2]).unwrap() - branch).norm() < 1e-12);
        for s in [&paper, &full] {
            assert_abs_diff_eq!(s.probability(&[Label::G, P0]).unwrap(), 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(s.probability(&[Label::E, PM2]).unwrap(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn hypersuperposition_needs_coupling() {
        let mut cfg = SdcConfig::default();
        cfg.params.coupling = 0.0;
        assert_eq!(prepare_hypersuperposition(&cfg), Err(Error::ZeroCoupling("coupling")));
    }

    #[test]
    fn pair_matches_reference_in_both_modes() {
        for mode in [PhaseMode::Full, PhaseMode::Paper] {
            let p = prepare_hyperentangled_pair(&config(mode)).unwrap();
            assert_abs_diff_eq!(p.aux_probability, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(phase_invariant_fidelity(&p.state, &reference_pair()).unwrap(), 1.0, epsilon = 1e-12);
            let nonzero = p.state.amplitudes().iter().filter(|a| a.norm() > 1e-12).count();
            assert_eq!(nonzero, 2);
        }
    }

    #[test]
    fn intermediate_stages() {
        let h = FRAC_1_SQRT_2;
        let one = |s: &CompositeState, labels: &[Label], want: C64| {
            let got = s.amplitude(labels).unwrap();
            assert!((got - want).norm() < 1e-12, "{labels:?}: {got} vs {want}");
        };
        let full = prepare_hyperentangled_pair(&config(PhaseMode::Full)).unwrap();
        let paper = prepare_hyperentangled_pair(&config(PhaseMode::Paper)).unwrap();
        let f0 = Label::Fock(0);
        let f1 = Label::Fock(1);
        // first pass: the one-photon branch picks up −i (+i without e^{2iαt})
        one(stage(&full, "after_atom_1"), &[Label::G, Label::G, PM2, P0, f1], C64::new(0.0, -h));
        one(stage(&paper, "after_atom_1"), &[Label::G, Label::G, PM2, P0, f1], C64::new(0.0, h));
        for p in [&full, &paper] {
            one(stage(p, "after_atom_2"), &[Label::G, Label::G, P0, P0, f0], C64::new(h, 0.0));
            one(stage(p, "after_atom_2"), &[Label::G, Label::G, PM2, PM2, f1], C64::new(-h, 0.0));
            one(stage(p, "after_swap"), &[Label::G, Label::G, P0, P0, Label::G], C64::new(h, 0.0));
            one(stage(p, "after_swap"), &[Label::G, Label::G, PM2, PM2, Label::E], C64::new(0.0, -h));
            one(stage(p, "heralded"), &[Label::G, Label::G, P0, P0], C64::new(h, 0.0));
            one(stage(p, "heralded"), &[Label::G, Label::G, PM2, PM2], C64::new(0.0, -h));
            one(&p.state, &[Label::G, Label::G, P0, P0], C64::new(h, 0.0));
            one(&p.state, &[Label::E, Label::E, PM2, PM2], C64::new(0.0, -h));
        }
    }

    #[test]
    fn pair_needs_couplings() {
        let mut cfg = SdcConfig::default();
        cfg.params.coupling = 0.0;
        assert_eq!(prepare_hyperentangled_pair(&cfg).unwrap_err(), Error::ZeroCoupling("coupling"));
        let mut cfg = SdcConfig::default();
        cfg.params.aux_coupling = 0.0;
        assert_eq!(prepare_hyperentangled_pair(&cfg).unwrap_err(), Error::ZeroCoupling("aux_coupling"));
    }
}
