use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{BraggConfig, PhysicalParams};
use crate::linalg::{expm, hermiticity_deviation, CMatrix, CVector};
use crate::qstate::{momentum_in_hbar_k, CompositeState, Label, SubsystemSpec};
use crate::{Error, Propagator, Provenance, Result, C64, TOLERANCES};

/// Largest dimension handled by the dense exponential; above it
/// [`evolve_numeric`] integrates instead.
pub const EXPM_MAX_DIM: usize = 256;

/// Step-control tolerance of the adaptive integrator.
pub const RK_TOLERANCE: f64 = 1e-10;

/// Hermitian generator on an ordered list of subsystems (ħ = 1, rad/s).
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    matrix: CMatrix,
    subsystems: Vec<SubsystemSpec>,
}

impl Hamiltonian {
    pub fn new(matrix: CMatrix, subsystems: Vec<SubsystemSpec>) -> Result<Self> {
        let dim: usize = subsystems.iter().map(SubsystemSpec::dimension).product();
        if subsystems.is_empty() || matrix.shape() != (dim, dim) {
            return Err(Error::TargetMismatch("matrix size differs from the product of subsystem dimensions"));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = hermiticity_deviation(&matrix);
        if !(deviation <= TOLERANCES.hermiticity * scale) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix, subsystems })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn subsystems(&self) -> &[SubsystemSpec] {
        &self.subsystems
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Atom-cavity Bragg Hamiltonian in the rotating-wave approximation on
/// (internal ⊗ momentum lattice ⊗ Fock):
///
/// `H = P²/2M + Δ/2 σ_z + μ cos(kx)(a σ₊ + a† σ₋)`
///
/// The kinetic term is `(l₀/2 + l)² ω_r` on lattice site `l`, and `cos kx`
/// shifts `l` by ±1 with weight ½, so |g,m,l⟩ couples to |e,m−1,l±1⟩ with
/// strength `μ√m/2`.
pub fn build_bragg_hamiltonian(params: &PhysicalParams, cfg: &BraggConfig) -> Result<Hamiltonian> {
    params.validate()?;
    cfg.validate(params)?;
    let internal = SubsystemSpec::internal("internal");
    let lattice = SubsystemSpec::momentum_lattice("momentum", cfg.l_min, cfg.l_max)?;
    let fock = SubsystemSpec::fock("cavity", cfg.n_max)?;
    let (nl, nf) = (lattice.dimension(), fock.dimension());
    let dim = 2 * nl * nf;
    let index = |internal: usize, site: usize, photons: usize| (internal * nl + site) * nf + photons;

    let mut h = CMatrix::zeros(dim, dim);
    for (site, label) in lattice.labels().iter().enumerate() {
        let Label::Momentum(l) = *label else { unreachable!("lattice labels are momenta") };
        let p = momentum_in_hbar_k(l, cfg.order) as f64;
        let kinetic = p * p * params.recoil_frequency;
        for m in 0..nf {
            h[(index(0, site, m), index(0, site, m))] = C64::new(kinetic - params.detuning / 2.0, 0.0);
            h[(index(1, site, m), index(1, site, m))] = C64::new(kinetic + params.detuning / 2.0, 0.0);
        }
    }
    for site in 0..nl {
        for m in 1..nf {
            let g = C64::new(params.coupling * (m as f64).sqrt() / 2.0, 0.0);
            for neighbor in [site.wrapping_sub(1), site + 1] {
                if neighbor < nl {
                    let (a, b) = (index(0, site, m), index(1, neighbor, m - 1));
                    h[(a, b)] = g;
                    h[(b, a)] = g;
                }
            }
        }
    }
    Hamiltonian::new(h, vec![internal, lattice, fock])
}

fn check_state(h: &Hamiltonian, state: &CompositeState) -> Result<()> {
    let ok = h.subsystems.len() == state.subsystems().len()
        && h.subsystems.iter().zip(state.subsystems()).all(|(a, b)| a.same_basis(b));
    if ok {
        Ok(())
    } else {
        Err(Error::StructureMismatch)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

/// `exp(−iHt)` as a numeric propagator.
pub fn numeric_propagator(h: &Hamiltonian, t: f64) -> Result<Propagator> {
    check_time(t)?;
    let u = expm(&(h.matrix() * C64::new(0.0, -t)));
    Propagator::new(u, h.subsystems.clone(), Provenance::Numeric, t)
}

/// Brute-force Schrödinger evolution `exp(−iHt)|ψ⟩`: dense exponential up
/// to [`EXPM_MAX_DIM`], adaptive Dormand-Prince integration above.
pub fn evolve_numeric(h: &Hamiltonian, state: &CompositeState, t: f64) -> Result<CompositeState> {
    check_state(h, state)?;
    check_time(t)?;
    let psi = CVector::from_column_slice(state.amplitudes());
    let out = if h.dimension() <= EXPM_MAX_DIM {
        expm(&(h.matrix() * C64::new(0.0, -t))) * psi
    } else {
        evolve_rk45(h.matrix(), psi, t, RK_TOLERANCE)
    };
    CompositeState::from_amplitudes(state.subsystems().to_vec(), out.iter().copied().collect())
}

// Dormand-Prince 5(4) tableau; the generator is time independent, so the
// node fractions are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dψ/dt = −iHψ` over `[0, t]` with an adaptive Dormand-Prince
/// 5(4) scheme; `tol` bounds the local error per step (absolute and
/// relative).
pub fn evolve_rk45(h: &CMatrix, psi: CVector, t: f64, tol: f64) -> CVector {
    let minus_i = C64::new(0.0, -1.0);
    let rhs = |y: &CVector| (h * y) * minus_i;
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut step = (0.1 / scale).min(t);
    let mut y = psi;
    let mut now = 0.0;
    let mut k: Vec<CVector> = vec![CVector::zeros(y.len()); 7];
    while now < t {
        step = step.min(t - now);
        k[0] = rhs(&y);
        for s in 1..7 {
            let mut stage = y.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                if A[s][j] != 0.0 {
                    stage += kj * C64::new(A[s][j] * step, 0.0);
                }
            }
            k[s] = rhs(&stage);
        }
        let mut high = y.clone();
        let mut err = CVector::zeros(y.len());
        for (s, ks) in k.iter().enumerate() {
            high += ks * C64::new(B5[s] * step, 0.0);
            err += ks * C64::new((B5[s] - B4[s]) * step, 0.0);
        }
        let ratio = err
            .iter()
            .zip(y.iter().zip(high.iter()))
            .map(|(e, (a, b))| e.norm() / (tol + tol * a.norm().max(b.norm())))
            .fold(0.0, f64::max);
        if ratio <= 1.0 {
            now += step;
            y = high;
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        step *= factor;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{offresonant_bragg_propagator, PhaseMode};
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bragg_hamiltonian_shape_and_hermiticity() {
        let p = PhysicalParams::rb85();
        let h = build_bragg_hamiltonian(&p, &BraggConfig::default()).unwrap();
        assert_eq!(h.dimension(), 2 * 5 * 4);
        assert_eq!(hermiticity_deviation(h.matrix()), 0.0);
        // |g, m=1, l=0⟩ couples to |e, 0, l=±1⟩ only
        let nf = 4;
        // internal g, lattice index 3 (l = 0), one photon
        let g1_p0 = 3 * nf + 1;
        let partners: Vec<usize> = (0..h.dimension()).filter(|&j| j != g1_p0 && h.matrix()[(g1_p0, j)].norm() > 0.0).collect();
        assert_eq!(partners, vec![(5 + 2) * nf, (5 + 4) * nf]);
        assert_abs_diff_eq!(h.matrix()[(g1_p0, partners[0])].re, p.coupling / 2.0);
    }

    #[test]
    fn zero_coupling_gives_diagonal_hamiltonian() {
        let p = PhysicalParams { coupling: 0.0, ..PhysicalParams::rb85() };
        let h = build_bragg_hamiltonian(&p, &BraggConfig::default()).unwrap();
        for i in 0..h.dimension() {
            for j in 0..h.dimension() {
                if i != j {
                    assert_eq!(h.matrix()[(i, j)], c(0.0, 0.0));
                }
            }
        }
        let spec = h.subsystems().to_vec();
        let psi = CompositeState::basis(spec, &[Label::G, Label::Momentum(0), Label::Fock(1)]).unwrap();
        let out = evolve_numeric(&h, &psi, 1e-3).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert_abs_diff_eq!(a.norm(), b.norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(Hamiltonian::new(m, vec![SubsystemSpec::internal("i")]), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn evolution_of_diagonal_hamiltonian() {
        let (e1, e2, t) = (1.5, -0.25, 2.0);
        let m = CMatrix::from_row_slice(2, 2, &[c(e1, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(e2, 0.0)]);
        let h = Hamiltonian::new(m, vec![SubsystemSpec::internal("i")]).unwrap();
        let psi = CompositeState::from_amplitudes(vec![SubsystemSpec::internal("i")], vec![c(0.6, 0.0), c(0.8, 0.0)]).unwrap();
        let out = evolve_numeric(&h, &psi, t).unwrap();
        assert!((out.amplitudes()[0] - C64::cis(-e1 * t) * 0.6).norm() < 1e-14);
        assert!((out.amplitudes()[1] - C64::cis(-e2 * t) * 0.8).norm() < 1e-14);
        assert_eq!(evolve_numeric(&h, &psi, 0.0).unwrap(), psi);
        assert!(evolve_numeric(&h, &psi, -1.0).is_err());
    }

    #[test]
    fn rk45_agrees_with_exponential() {
        let p = PhysicalParams { coupling: 3.0, detuning: 40.0, recoil_frequency: 0.5, ..PhysicalParams::rb85() };
        let h = build_bragg_hamiltonian(&p, &BraggConfig::default()).unwrap();
        let psi = CVector::from_fn(h.dimension(), |i, _| if i == (3 * 4 + 1) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let t = 2.5;
        let a = evolve_rk45(h.matrix(), psi.clone(), t, 1e-11);
        let b = expm(&(h.matrix() * c(0.0, -t))) * psi;
        let diff = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn numeric_propagator_is_unitary() {
        let h = build_bragg_hamiltonian(&PhysicalParams::rb85(), &BraggConfig::default()).unwrap();
        let u = numeric_propagator(&h, 2e-6).unwrap();
        assert_eq!(u.provenance(), Provenance::Numeric);
        assert!(u.unitarity_deviation() < 1e-9);
    }

    #[test]
    fn deep_bragg_mirror_from_full_hamiltonian() {
        // Δ/μ√n = 100 with the Rb-85 recoil and coupling
        let base = PhysicalParams::rb85();
        let p = PhysicalParams { detuning: 100.0 * base.coupling, ..base };
        let cfg = BraggConfig::default();
        let h = build_bragg_hamiltonian(&p, &cfg).unwrap();
        let t = p.bragg_time(1, FRAC_PI_2).unwrap();
        let psi = CompositeState::basis(h.subsystems().to_vec(), &[Label::G, Label::Momentum(0), Label::Fock(1)]).unwrap();
        let out = evolve_numeric(&h, &psi, t).unwrap();
        let pm2 = out.probability(&[Label::G, Label::Momentum(-2), Label::Fock(1)]).unwrap();
        assert!(pm2 >= 0.98, "{pm2}");
        let analytic = offresonant_bragg_propagator(&p, t, PhaseMode::Full).unwrap();
        assert!(analytic.matrix()[(1, 0)].norm_sqr() > 0.999_999);
    }
}
