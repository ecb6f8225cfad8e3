use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{build_bragg_hamiltonian, evolve_numeric, BraggConfig, PhysicalParams};
use crate::qstate::{CompositeState, Label};
use crate::{Error, Result};

/// Populations at one grid time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviationSample {
    pub time: f64,
    /// Numeric (P₀, P₋₂) populations of the |g, n⟩ manifold.
    pub numeric: (f64, f64),
    /// Closed-form (cos²αt, sin²αt).
    pub analytic: (f64, f64),
    pub deviation: f64,
    /// Population outside {|g,n,P₀⟩, |g,n,P₋₂⟩}.
    pub leakage: f64,
}

/// Closed-form Bragg populations against the full Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationReport {
    pub samples: Vec<DeviationSample>,
    pub max_deviation: f64,
    pub max_leakage: f64,
    /// Δ/(μ√n); infinite when μ√n = 0.
    pub detuning_ratio: f64,
    /// Δ/ω_r.
    pub detuning_over_recoil: f64,
}

/// Evolves |g, n, P₀⟩ under the truncated Bragg Hamiltonian at each time of
/// `t_grid` and compares the (P₀, P₋₂) populations with the off-resonant
/// closed form.
pub fn compare_analytic_numeric(params: &PhysicalParams, cfg: &BraggConfig, t_grid: &[f64]) -> Result<DeviationReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty"));
    }
    let h = build_bragg_hamiltonian(params, cfg)?;
    let alpha = params.rabi_alpha()?;
    let n = Label::Fock(params.photon_number);
    let start = CompositeState::basis(h.subsystems().to_vec(), &[Label::G, Label::Momentum(0), n])?;
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let out = evolve_numeric(&h, &start, t)?;
        let p0 = out.probability(&[Label::G, Label::Momentum(0), n])?;
        let pm2 = out.probability(&[Label::G, Label::Momentum(-2), n])?;
        let (c, s) = ((alpha * t).cos(), (alpha * t).sin());
        let analytic = (c * c, s * s);
        samples.push(DeviationSample {
            time: t,
            numeric: (p0, pm2),
            analytic,
            deviation: (p0 - analytic.0).abs().max((pm2 - analytic.1).abs()),
            leakage: (1.0 - p0 - pm2).max(0.0),
        });
    }
    let max_deviation = samples.iter().map(|s| s.deviation).fold(0.0, f64::max);
    let max_leakage = samples.iter().map(|s| s.leakage).fold(0.0, f64::max);
    let vacuum_rabi = params.coupling * (params.photon_number as f64).sqrt();
    Ok(DeviationReport {
        samples,
        max_deviation,
        max_leakage,
        detuning_ratio: if vacuum_rabi > 0.0 { params.detuning / vacuum_rabi } else { f64::INFINITY },
        detuning_over_recoil: params.detuning / params.recoil_frequency,
    })
}

/// `params` with the detuning set to `ratio · μ√n`.
pub fn with_detuning_ratio(params: &PhysicalParams, ratio: f64) -> PhysicalParams {
    PhysicalParams { detuning: ratio * params.coupling * (params.photon_number as f64).sqrt(), ..*params }
}

/// `points` evenly spaced times over one mirror time, `[0, π/2α]`.
pub fn mirror_time_grid(params: &PhysicalParams, points: usize) -> Result<Vec<f64>> {
    let end = params.bragg_time(params.photon_number, core::f64::consts::FRAC_PI_2)?;
    if points < 2 {
        return Err(Error::InvalidParameter("a time grid needs at least two points"));
    }
    Ok((0..points).map(|i| end * i as f64 / (points - 1) as f64).collect())
}
