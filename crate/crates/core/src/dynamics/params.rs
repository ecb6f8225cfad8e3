#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Physical constants of one run. Frequencies are angular (rad/s), ħ = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Atomic mass in kg.
    pub mass: f64,
    /// Recoil frequency ω_r = ħk²/2M.
    pub recoil_frequency: f64,
    /// Atom-cavity coupling μ.
    pub coupling: f64,
    /// Atom-cavity detuning Δ.
    pub detuning: f64,
    /// Photon number n of the Bragg and gate cavities.
    pub photon_number: u32,
    /// Auxiliary-atom coupling μ_s.
    pub aux_coupling: f64,
    /// Classical Rabi frequency Ω_r.
    pub rabi_frequency: f64,
    /// Classical laser phase φ.
    pub laser_phase: f64,
}

impl PhysicalParams {
    /// Rb-85 in a 780 nm cavity lattice: ω_r = 2.4e4 rad/s, μ = 2π·16.4 MHz,
    /// Δ = 2π·1 GHz, one photon. The auxiliary atom shares the cavity
    /// coupling; the classical drive runs at 2π·1 MHz with φ = −π/2.
    pub fn rb85() -> Self {
        let two_pi = 2.0 * core::f64::consts::PI;
        Self {
            mass: 85.0 * AMU,
            recoil_frequency: 2.4e4,
            coupling: two_pi * 16.4e6,
            detuning: two_pi * 1.0e9,
            photon_number: 1,
            aux_coupling: two_pi * 16.4e6,
            rabi_frequency: two_pi * 1.0e6,
            laser_phase: -core::f64::consts::FRAC_PI_2,
        }
    }

    /// Builds parameters from a wavenumber instead of a recoil frequency.
    pub fn with_wavenumber(mut self, wavenumber: f64) -> Result<Self> {
        if !(wavenumber > 0.0) || !wavenumber.is_finite() {
            return Err(Error::InvalidParameter("wavenumber must be positive"));
        }
        self.recoil_frequency = recoil_from_wavenumber(wavenumber, self.mass);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.mass,
            self.recoil_frequency,
            self.coupling,
            self.detuning,
            self.aux_coupling,
            self.rabi_frequency,
            self.laser_phase,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("parameters must be finite"));
        }
        if !(self.mass > 0.0) {
            return Err(Error::InvalidParameter("mass must be positive"));
        }
        if !(self.recoil_frequency > 0.0) {
            return Err(Error::InvalidParameter("recoil frequency must be positive"));
        }
        if self.coupling < 0.0 || self.aux_coupling < 0.0 || self.rabi_frequency < 0.0 {
            return Err(Error::InvalidParameter("couplings and Rabi frequency must be non-negative"));
        }
        Ok(())
    }

    /// Implied wavenumber k = √(2Mω_r/ħ), 1/m.
    pub fn wavenumber(&self) -> f64 {
        (2.0 * self.mass * self.recoil_frequency / HBAR).sqrt()
    }

    /// Two-photon Bragg Rabi frequency α = μ²n/4Δ for `n` photons.
    pub fn rabi_alpha_for(&self, n: u32) -> Result<f64> {
        if self.detuning == 0.0 {
            return Err(Error::ZeroDetuning);
        }
        Ok(self.coupling * self.coupling * n as f64 / (4.0 * self.detuning))
    }

    /// α for the configured photon number.
    pub fn rabi_alpha(&self) -> Result<f64> {
        self.rabi_alpha_for(self.photon_number)
    }

    /// β = μ²/ω_r.
    pub fn beta(&self) -> f64 {
        self.coupling * self.coupling / self.recoil_frequency
    }

    /// Interaction time giving |α| t = `angle` with `n` photons.
    pub fn bragg_time(&self, n: u32, angle: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::NoPhotons);
        }
        let alpha = self.rabi_alpha_for(n)?;
        if alpha == 0.0 {
            return Err(Error::ZeroCoupling("coupling"));
        }
        Ok(angle / alpha.abs())
    }

    /// Resonant interaction time t = 2π/β of the hypersuperposition step.
    pub fn hypersuperposition_time(&self) -> Result<f64> {
        let beta = self.beta();
        if beta == 0.0 {
            return Err(Error::ZeroCoupling("coupling"));
        }
        Ok(2.0 * core::f64::consts::PI / beta)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::rb85()
    }
}

/// ω_r = ħk²/2M.
pub fn recoil_from_wavenumber(wavenumber: f64, mass: f64) -> f64 {
    HBAR * wavenumber * wavenumber / (2.0 * mass)
}

/// Truncation of the momentum lattice and Fock space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraggConfig {
    /// Bragg order l₀; only first order (2) is supported.
    pub order: i32,
    pub l_min: i32,
    pub l_max: i32,
    pub n_max: u32,
}

impl Default for BraggConfig {
    fn default() -> Self {
        Self { order: 2, l_min: -3, l_max: 1, n_max: 3 }
    }
}

impl BraggConfig {
    pub fn validate(&self, params: &PhysicalParams) -> Result<()> {
        if self.order != 2 {
            return Err(Error::InvalidParameter("only first-order Bragg diffraction (order 2) is modeled"));
        }
        if self.l_min > -self.order || self.l_max < 0 {
            return Err(Error::InvalidParameter("momentum range must contain 0 and -order"));
        }
        if self.n_max < params.photon_number + 1 {
            return Err(Error::InvalidParameter("Fock truncation must hold n + 1 photons"));
        }
        Ok(())
    }
}

/// Which analytic phases are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PhaseMode {
    /// Every phase of the closed-form solutions.
    #[default]
    Full,
    /// Drops the e^{2iαt} Bragg factor and the e^{−iβt/6} resonant branch
    /// phase, so intermediate kets carry the reduced-propagator signs.
    Paper,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rb85_derived_quantities() {
        let p = PhysicalParams::rb85();
        p.validate().unwrap();
        let mu = 2.0 * core::f64::consts::PI * 16.4e6;
        let delta = 2.0 * core::f64::consts::PI * 1e9;
        assert_relative_eq!(p.rabi_alpha().unwrap(), mu * mu / (4.0 * delta), max_relative = 1e-15);
        assert_relative_eq!(p.beta(), mu * mu / 2.4e4, max_relative = 1e-15);
        // implied k sits near the 780 nm lattice (about 784 nm)
        let lambda = 2.0 * core::f64::consts::PI / p.wavenumber();
        assert!(lambda > 7.0e-7 && lambda < 8.5e-7, "{lambda}");
    }

    #[test]
    fn wavenumber_round_trip() {
        let p = PhysicalParams::rb85();
        let q = p.with_wavenumber(p.wavenumber()).unwrap();
        assert_relative_eq!(q.recoil_frequency, p.recoil_frequency, max_relative = 1e-12);
        assert!(p.with_wavenumber(0.0).is_err());
    }

    #[test]
    fn zero_detuning_and_zero_photons() {
        let p = PhysicalParams { detuning: 0.0, ..PhysicalParams::rb85() };
        assert_eq!(p.rabi_alpha(), Err(Error::ZeroDetuning));
        assert_eq!(PhysicalParams::rb85().bragg_time(0, 1.0), Err(Error::NoPhotons));
        let q = PhysicalParams { coupling: 0.0, ..PhysicalParams::rb85() };
        assert_eq!(q.hypersuperposition_time(), Err(Error::ZeroCoupling("coupling")));
    }

    #[test]
    fn bragg_config_checks() {
        let p = PhysicalParams::rb85();
        BraggConfig::default().validate(&p).unwrap();
        assert!(BraggConfig { l_min: -1, ..Default::default() }.validate(&p).is_err());
        assert!(BraggConfig { l_max: -1, ..Default::default() }.validate(&p).is_err());
        assert!(BraggConfig { n_max: 1, ..Default::default() }.validate(&p).is_err());
        assert!(BraggConfig { order: 4, ..Default::default() }.validate(&p).is_err());
    }
}
