//! Small dense linear-algebra helpers on complex matrices.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest entry magnitude of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U†U - I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    if n != u.ncols() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// `max |H - H†|`.
pub fn hermiticity_deviation(h: &CMatrix) -> f64 {
    if h.nrows() != h.ncols() {
        return f64::INFINITY;
    }
    max_abs_diff(h, &h.adjoint())
}

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

// Padé coefficients b_k for degrees 3, 5, 7, 9 and 13, with the matching
// 1-norm bounds θ_m below which the degree-m approximant is accurate to
// double precision without scaling.
const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA_13: f64 = 5.371920351148152;

fn scale(m: &CMatrix, s: f64) -> CMatrix {
    m * C64::new(s, 0.0)
}

fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let eye = CMatrix::identity(n, n);
    let a2 = a * a;
    let mut power = eye.clone();
    let mut u = scale(&eye, b[1]);
    let mut v = scale(&eye, b[0]);
    for k in (2..b.len()).step_by(2) {
        power = &power * &a2;
        v += scale(&power, b[k]);
        if k + 1 < b.len() {
            u += scale(&power, b[k + 1]);
        }
    }
    (a * u, v)
}

fn pade_13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &PADE_13;
    let n = a.nrows();
    let eye = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (scale(&a6, b[13]) + scale(&a4, b[11]) + scale(&a2, b[9]))
        + scale(&a6, b[7])
        + scale(&a4, b[5])
        + scale(&a2, b[3])
        + scale(&eye, b[1]);
    let v = &a6 * (scale(&a6, b[12]) + scale(&a4, b[10]) + scale(&a2, b[8]))
        + scale(&a6, b[6])
        + scale(&a4, b[4])
        + scale(&a2, b[2])
        + scale(&eye, b[0]);
    (a * u_inner, v)
}

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant (degree chosen from the 1-norm, up to 13).
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    for &(degree, theta) in THETA.iter() {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &PADE_3,
                5 => &PADE_5,
                7 => &PADE_7,
                _ => &PADE_9,
            };
            let (u, v) = pade_low(a, coeffs);
            return pade_solve(u, v);
        }
    }
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = scale(a, 0.5_f64.powi(squarings));
    let (u, v) = pade_13(&scaled);
    let mut r = pade_solve(u, v);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

fn pade_solve(u: CMatrix, v: CMatrix) -> CMatrix {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for norms within θ_m")
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are returned in
/// ascending order with eigenvectors as matching columns.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Square root of a positive semidefinite Hermitian matrix. Small negative
/// eigenvalues from round-off are clamped to zero.
pub fn psd_sqrt(h: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let roots = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
    );
    &vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint()
}

/// Moore-Penrose inverse square root of a PSD Hermitian matrix: eigenvalues
/// at or below `cutoff` are treated as outside the support.
pub fn psd_inv_sqrt(h: &CMatrix, cutoff: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let inv = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| {
            if v > cutoff {
                C64::new(1.0 / v.sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }),
    );
    &vectors * CMatrix::from_diagonal(&inv) * vectors.adjoint()
}
