//! Superdense coding over Bragg-diffracted, hyperentangled atoms in cavity QED.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`qstate`]: dense state vectors over labeled tensor-product spaces,
//!   local unitaries, post-selection, reduced density matrices and
//!   entanglement metrics.
//! * [`dynamics`]: the atom-cavity Hamiltonian, a brute-force evolution
//!   oracle and the closed-form propagators it is checked against.
//! * [`elements`]: beamsplitters, mirrors and the four encoding gates.
//! * [`protocol`]: preparation, encoding, the two decoding stages and
//!   the sweeps built on top of them.
//!
//! All frequencies are angular (rad/s) and ħ = 1 throughout; conversion from
//! SI-flavored inputs happens at the configuration boundary.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod elements;
mod error;
pub mod linalg;
pub mod propagator;
pub mod protocol;
pub mod qstate;

pub use error::{Error, Result};
pub use propagator::{Propagator, Provenance};

/// Complex amplitude type used everywhere.
pub type C64 = num_complex::Complex64;

/// Numerical tolerances shared by every module.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Maximum deviation of a state norm from one.
    pub norm: f64,
    /// Maximum entry of `U†U - I` for a matrix to count as unitary.
    pub unitarity: f64,
    /// Branch probabilities below this are treated as impossible.
    pub probability_floor: f64,
    /// Maximum entry of `H - H†`, relative to the largest entry of `H`.
    pub hermiticity: f64,
    /// A decoder candidate is accepted when its probability is at least
    /// `1 - decode_overlap`.
    pub decode_overlap: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    norm: 1e-10,
    unitarity: 1e-8,
    probability_floor: 1e-12,
    hermiticity: 1e-12,
    decode_overlap: 1e-9,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOLERANCES
    }
}
