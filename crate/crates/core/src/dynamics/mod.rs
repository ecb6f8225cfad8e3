//! Hamiltonians, the brute-force evolution oracle and closed-form
//! propagators.

mod compare;
mod hamiltonian;
mod params;
mod propagators;

pub use compare::{compare_analytic_numeric, mirror_time_grid, with_detuning_ratio, DeviationReport, DeviationSample};
pub use hamiltonian::{
    build_bragg_hamiltonian, evolve_numeric, evolve_rk45, numeric_propagator, Hamiltonian, EXPM_MAX_DIM, RK_TOLERANCE,
};
pub use params::{recoil_from_wavenumber, BraggConfig, PhaseMode, PhysicalParams, AMU, HBAR};
pub use propagators::{
    cavity_bragg_propagator, classical_pi_pulse, dispersive_phase_propagator, jc_swap_propagator,
    offresonant_bragg_propagator, ramsey_unitary, resonant_vacuum_propagator,
};
