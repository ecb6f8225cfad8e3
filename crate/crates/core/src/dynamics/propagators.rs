//! Closed-form propagators.

use alloc::vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{PhaseMode, PhysicalParams};
use crate::linalg::CMatrix;
use crate::qstate::SubsystemSpec;
use crate::{Error, Propagator, Provenance, Result, C64};

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

fn analytic(matrix: CMatrix, targets: alloc::vec::Vec<SubsystemSpec>, t: f64) -> Result<Propagator> {
    Propagator::new(matrix, targets, Provenance::Analytic, t)
}

/// 2×2 Bragg rotation on (P₀, P₋₂) after rate `alpha` for time `t`.
fn bragg_block(alpha: f64, t: f64, mode: PhaseMode) -> [[C64; 2]; 2] {
    let at = alpha * t;
    let global = match mode {
        PhaseMode::Full => C64::cis(2.0 * at),
        PhaseMode::Paper => C64::new(1.0, 0.0),
    };
    let c = global * at.cos();
    let s = global * C64::new(0.0, at.sin());
    [[c, s], [s, c]]
}

/// Off-resonant first-order Bragg propagator on the momentum pair
/// (P₀, P₋₂): `e^{2iαt} [[cos αt, i sin αt], [i sin αt, cos αt]]` with
/// α = μ²n/4Δ. Valid for Δ ≫ ω_r; this is not checked.
pub fn offresonant_bragg_propagator(params: &PhysicalParams, t: f64, mode: PhaseMode) -> Result<Propagator> {
    check_time(t)?;
    let alpha = params.rabi_alpha()?;
    let b = bragg_block(alpha, t, mode);
    let m = CMatrix::from_row_slice(2, 2, &[b[0][0], b[0][1], b[1][0], b[1][1]]);
    analytic(m, vec![SubsystemSpec::momentum_pair("momentum")], t)
}

/// Off-resonant Bragg pass through a cavity whose photon number is itself
/// quantum: the Fock-`n` sector rotates at α_n = μ²n/4Δ. Acts on
/// (momentum pair ⊗ Fock 0..=n_max).
pub fn cavity_bragg_propagator(params: &PhysicalParams, t: f64, mode: PhaseMode, n_max: u32) -> Result<Propagator> {
    check_time(t)?;
    let fock = SubsystemSpec::fock("cavity", n_max)?;
    let nf = fock.dimension();
    let mut m = CMatrix::zeros(2 * nf, 2 * nf);
    for n in 0..=n_max {
        let b = bragg_block(params.rabi_alpha_for(n)?, t, mode);
        let n = n as usize;
        for (r, row) in b.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m[(r * nf + n, c * nf + n)] = v;
            }
        }
    }
    analytic(m, vec![SubsystemSpec::momentum_pair("momentum"), fock], t)
}

/// Resonant pass of an atom through the vacuum cavity, on
/// (internal ⊗ momentum pair ⊗ Fock {0, 1}).
///
/// The |e,0⟩ sector evolves as `e^{−iβt/6}[cos(βt/4) − i sin(βt/4) σ_x]`
/// with β = μ²/ω_r; |g,0⟩ is frozen and the one-photon sectors, which are
/// adiabatically eliminated, are left alone.
pub fn resonant_vacuum_propagator(params: &PhysicalParams, t: f64, mode: PhaseMode) -> Result<Propagator> {
    check_time(t)?;
    let beta = params.beta();
    let mut m = CMatrix::identity(8, 8);
    let prefactor = match mode {
        PhaseMode::Full => C64::cis(-beta * t / 6.0),
        PhaseMode::Paper => C64::new(1.0, 0.0),
    };
    let c = prefactor * (beta * t / 4.0).cos();
    let s = prefactor * C64::new(0.0, -(beta * t / 4.0).sin());
    // index = internal·4 + momentum·2 + fock
    let (e_p0, e_pm2) = (4, 6);
    m[(e_p0, e_p0)] = c;
    m[(e_pm2, e_pm2)] = c;
    m[(e_p0, e_pm2)] = s;
    m[(e_pm2, e_p0)] = s;
    analytic(
        m,
        vec![SubsystemSpec::internal("internal"), SubsystemSpec::momentum_pair("momentum"), SubsystemSpec::fock("cavity", 1)?],
        t,
    )
}

/// Dispersive phase from `H = μ²/Δ (a a†|e⟩⟨e| − a†a|g⟩⟨g|)` on
/// (internal ⊗ Fock 0..=n_max).
pub fn dispersive_phase_propagator(params: &PhysicalParams, t: f64, n_max: u32) -> Result<Propagator> {
    check_time(t)?;
    if params.detuning == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let rate = params.coupling * params.coupling / params.detuning;
    let fock = SubsystemSpec::fock("cavity", n_max)?;
    let nf = fock.dimension();
    let mut m = CMatrix::zeros(2 * nf, 2 * nf);
    for n in 0..nf {
        m[(n, n)] = C64::cis(n as f64 * rate * t);
        m[(nf + n, nf + n)] = C64::cis(-((n + 1) as f64) * rate * t);
    }
    analytic(m, vec![SubsystemSpec::internal("internal"), fock], t)
}

/// Resonant Jaynes-Cummings exchange `H = μ_s(σ₊a + σ₋a†)` on
/// (internal ⊗ Fock 0..=n_max): |g,m⟩ ↔ |e,m−1⟩ at rate μ_s√m.
/// |e,n_max⟩ has no partner inside the truncation and is left invariant.
pub fn jc_swap_propagator(aux_coupling: f64, t: f64, n_max: u32) -> Result<Propagator> {
    check_time(t)?;
    if !aux_coupling.is_finite() {
        return Err(Error::InvalidParameter("auxiliary coupling must be finite"));
    }
    let fock = SubsystemSpec::fock("cavity", n_max)?;
    let nf = fock.dimension();
    let mut m = CMatrix::identity(2 * nf, 2 * nf);
    for photons in 1..nf {
        let theta = aux_coupling * (photons as f64).sqrt() * t;
        let (g, e) = (photons, nf + photons - 1);
        m[(g, g)] = C64::new(theta.cos(), 0.0);
        m[(e, e)] = C64::new(theta.cos(), 0.0);
        m[(g, e)] = C64::new(0.0, -theta.sin());
        m[(e, g)] = C64::new(0.0, -theta.sin());
    }
    analytic(m, vec![SubsystemSpec::internal("aux"), fock], t)
}

/// Ramsey zone acting as a Hadamard on the internal levels.
pub fn ramsey_unitary() -> Propagator {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let m = CMatrix::from_row_slice(2, 2, &[C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)]);
    Propagator::new(m, vec![SubsystemSpec::internal("internal")], Provenance::Analytic, 0.0)
        .expect("Hadamard is unitary")
}

/// Classical drive `H = Ω_r/2 (e^{−iφ}σ₊ + e^{iφ}σ₋)` for time `t`.
pub fn classical_pi_pulse(rabi: f64, phi: f64, t: f64) -> Result<Propagator> {
    check_time(t)?;
    if !rabi.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidParameter("Rabi frequency and phase must be finite"));
    }
    let half = rabi * t / 2.0;
    let c = C64::new(half.cos(), 0.0);
    let s = C64::new(0.0, -half.sin());
    let m = CMatrix::from_row_slice(2, 2, &[c, s * C64::cis(phi), s * C64::cis(-phi), c]);
    analytic(m, vec![SubsystemSpec::internal("internal")], t)
}
