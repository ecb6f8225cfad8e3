use alloc::vec::Vec;

use crate::linalg::{unitarity_deviation, CMatrix};
use crate::qstate::SubsystemSpec;
use crate::{Error, Result, TOLERANCES};

/// Where a propagator's matrix came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form expression.
    Analytic,
    /// Exponentiated Hamiltonian.
    Numeric,
}

/// A unitary on an ordered list of subsystems.
///
/// The matrix acts on the row-major product basis of `targets`, so a
/// propagator on `(internal, momentum)` has the internal label as the most
/// significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagator {
    matrix: CMatrix,
    targets: Vec<SubsystemSpec>,
    provenance: Provenance,
    elapsed: f64,
}

impl Propagator {
    pub fn new(matrix: CMatrix, targets: Vec<SubsystemSpec>, provenance: Provenance, elapsed: f64) -> Result<Self> {
        let dim: usize = targets.iter().map(SubsystemSpec::dimension).product();
        if targets.is_empty() || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::TargetMismatch("matrix size differs from the product of target dimensions"));
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= TOLERANCES.unitarity) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix, targets, provenance, elapsed })
    }

    pub fn identity(targets: Vec<SubsystemSpec>) -> Self {
        let dim: usize = targets.iter().map(SubsystemSpec::dimension).product();
        Self { matrix: CMatrix::identity(dim, dim), targets, provenance: Provenance::Analytic, elapsed: 0.0 }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[SubsystemSpec] {
        &self.targets
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Interaction time in seconds (zero for instantaneous elements).
    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), elapsed: -self.elapsed, ..self.clone() }
    }

    /// `self` applied after `first`, i.e. the matrix product `self · first`.
    pub fn after(&self, first: &Propagator) -> Result<Self> {
        if self.targets.len() != first.targets.len()
            || !self.targets.iter().zip(&first.targets).all(|(a, b)| a.same_basis(b))
        {
            return Err(Error::TargetMismatch("composed propagators act on different bases"));
        }
        let provenance = if self.provenance == first.provenance { self.provenance } else { Provenance::Numeric };
        Ok(Self {
            matrix: &self.matrix * &first.matrix,
            targets: self.targets.clone(),
            provenance,
            elapsed: self.elapsed + first.elapsed,
        })
    }
}
