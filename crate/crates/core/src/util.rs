//! Small shared numeric helpers.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// Absolute floor applied under every relative tolerance, so comparisons
/// against a zero scale remain meaningful.
pub(crate) const ABS_FLOOR: f64 = 1e-300;

/// Relative tolerance at a given problem scale, with the absolute floor.
pub(crate) fn tol_at(scale: f64, rel: f64) -> f64 {
    (rel * scale).max(ABS_FLOOR)
}

pub(crate) fn is_finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn vec_finite(v: &Array1<Complex64>) -> bool {
    v.iter().all(|&z| is_finite_c(z))
}

pub(crate) fn mat_finite(m: &Array2<Complex64>) -> bool {
    m.iter().all(|&z| is_finite_c(z))
}

/// Largest entry magnitude of a matrix.
pub(crate) fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm of a matrix.
pub(crate) fn frob(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean norm of a vector.
pub(crate) fn l2(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Cartesian inner product, conjugating the first argument.
pub(crate) fn cart_inner(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}
