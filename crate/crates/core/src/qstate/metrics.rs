use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::CompositeState;
use crate::linalg::{hermitian_eigen, hermiticity_deviation, CMatrix};
use crate::{Error, Result, C64};

const DENSITY_TOLERANCE: f64 = 1e-9;

impl CompositeState {
    /// Reduced density matrix of the subsystems in `keep`, in that order.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<CMatrix> {
        if keep.is_empty() {
            return Err(Error::TargetMismatch("nothing to keep"));
        }
        let (offsets, bases) = self.split_offsets(keep)?;
        let d = offsets.len();
        let mut rho = CMatrix::zeros(d, d);
        for &b in &bases {
            for (i, &oi) in offsets.iter().enumerate() {
                let ai = self.amplitudes[b + oi];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, &oj) in offsets.iter().enumerate() {
                    rho[(i, j)] += ai * self.amplitudes[b + oj].conj();
                }
            }
        }
        Ok(rho)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &CompositeState) -> Result<C64> {
        if !self.same_structure(other) {
            return Err(Error::StructureMismatch);
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }
}

/// `|⟨a|b⟩|²`, blind to a global phase on either side.
pub fn phase_invariant_fidelity(a: &CompositeState, b: &CompositeState) -> Result<f64> {
    let overlap = a.inner(b)?.norm_sqr() / (a.norm() * a.norm() * b.norm() * b.norm());
    Ok(overlap.min(1.0))
}

fn check_density(rho: &CMatrix) -> Result<Vec<f64>> {
    if hermiticity_deviation(rho) > DENSITY_TOLERANCE {
        return Err(Error::NonPhysical("not Hermitian"));
    }
    let trace: C64 = rho.diagonal().iter().sum();
    if (trace.re - 1.0).abs() > DENSITY_TOLERANCE || trace.im.abs() > DENSITY_TOLERANCE {
        return Err(Error::NonPhysical("trace differs from one"));
    }
    let (values, _) = hermitian_eigen(rho);
    if values.iter().any(|&v| v < -DENSITY_TOLERANCE) {
        return Err(Error::NonPhysical("negative eigenvalue"));
    }
    Ok(values)
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// `C = max(0, λ₁ − λ₂ − λ₃ − λ₄)` with `λᵢ` the decreasing singular values
/// of `τ = Φᵀ (σ_y⊗σ_y) Φ`, where the columns of Φ are the eigenvectors of
/// ρ scaled by the square roots of their eigenvalues. This avoids taking
/// square roots of round-off sized eigenvalues, which would cost half the
/// digits for nearly pure states.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    if rho.shape() != (4, 4) {
        return Err(Error::NonPhysical("concurrence needs a 4x4 two-qubit density matrix"));
    }
    let values = check_density(rho)?;
    let (_, vectors) = hermitian_eigen(rho);
    let mut phi = vectors;
    for (j, v) in values.iter().enumerate() {
        let w = C64::new(v.max(0.0).sqrt(), 0.0);
        phi.column_mut(j).iter_mut().for_each(|z| *z *= w);
    }
    // σ_y ⊗ σ_y is real: antidiagonal (-1, 1, 1, -1).
    let mut yy = CMatrix::zeros(4, 4);
    for (i, s) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        yy[(i, 3 - i)] = C64::new(s, 0.0);
    }
    let tau = phi.transpose() * yy * &phi;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Concurrence `√(2(1 − Tr ρ_A²))` of a pure state across the cut between
/// `part` and the remaining subsystems. Equals the Wootters value for two
/// qubits and is 1 for a maximally entangled pair of effective qubits.
pub fn pure_bipartite_concurrence(state: &CompositeState, part: &[usize]) -> Result<f64> {
    let rho = state.reduced_density(part)?;
    let purity = (&rho * &rho).trace().re;
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}
