#![allow(dead_code)]

//! Shared helpers for the integration suites.

use ndarray::Array2;
use num_complex::Complex64;
use opspace::{CoeffVector, Space};
use rand_chacha::ChaCha8Rng;

/// The four inner-product families, cycled by index. All spaces produced here
/// are valid with moderate conditioning.
pub fn space_variant(rng: &mut ChaCha8Rng, variant: usize, dim: usize) -> Space {
    match variant % 4 {
        0 => Space::cartesian(dim).unwrap(),
        1 => {
            let weights: Vec<f64> = (0..dim)
                .map(|_| 0.2 + 2.8 * rand::Rng::random::<f64>(rng))
                .collect();
            Space::diagonal_weighted(weights).unwrap()
        }
        2 => {
            let gram = opspace_testkit::hpd_well_conditioned(rng, dim, 0.25, 4.0);
            Space::operator_weighted(gram).unwrap()
        }
        _ => {
            let transform = opspace_testkit::full_column_rank(rng, dim + 2, dim, 0.5, 2.0);
            Space::transformed(transform).unwrap()
        }
    }
}

pub fn vector_in(rng: &mut ChaCha8Rng, dim: usize) -> CoeffVector {
    CoeffVector::from_array(opspace_testkit::complex_vector(rng, dim)).unwrap()
}

pub fn operator_between(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
) -> (opspace::operator::Operator, Array2<Complex64>) {
    let m = opspace_testkit::complex_matrix(rng, rows, cols);
    let op = opspace::operator::Operator::new(
        Space::cartesian(cols).unwrap(),
        Space::cartesian(rows).unwrap(),
        m.clone(),
    )
    .unwrap();
    (op, m)
}
