//! Finite-dimensional complex inner-product spaces.
//!
//! A [`Space`] couples a dimension with one of four inner-product families:
//! the plain Cartesian product, a diagonally weighted product (positive weight
//! per coordinate), an operator-weighted product `(a, W b)` for a Hermitian
//! positive-definite `W`, and a transformed product `(B a, B b)` for a
//! full-column-rank `B`. The induced norm and metric come with it.
//!
//! Construction rejects malformed shapes and non-finite numbers outright;
//! the semantic requirements (weight positivity, Hermiticity, definiteness,
//! rank) are checked by [`Space::validate`], which reports every violation
//! rather than failing fast.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};
use crate::power::hermitian_extremes;
use crate::util::{cart_inner, is_finite_c, mat_finite, max_abs, vec_finite};

/// Ratio of smallest to largest eigenvalue below which a weighting gram is
/// treated as not positive definite.
pub const GRAM_POSITIVITY_RATIO: f64 = 1e-12;
/// Relative defect above which a weighting gram is reported non-Hermitian.
pub const GRAM_HERMITICITY_TOL: f64 = 1e-10;

const VALIDATE_SEED: u64 = 0x5eed_0001;

/// Complex coefficient column of fixed positive length with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector {
    entries: Array1<Complex64>,
}

impl CoeffVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        Self::from_array(Array1::from_vec(entries))
    }

    pub fn from_array(entries: Array1<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty {
                context: "coefficient vector",
            });
        }
        if !vec_finite(&entries) {
            return Err(Error::NonFinite {
                context: "coefficient vector",
            });
        }
        Ok(Self { entries })
    }

    /// Vector of real entries; handy for literals in examples and tests.
    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_array(Array1::zeros(len))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, index: usize) -> Complex64 {
        self.entries[index]
    }

    pub fn as_array(&self) -> &Array1<Complex64> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.entries.iter()
    }

    pub fn scale(&self, factor: Complex64) -> CoeffVector {
        CoeffVector {
            entries: self.entries.mapv(|z| z * factor),
        }
    }

    pub fn add(&self, other: &CoeffVector) -> Result<CoeffVector> {
        self.check_len(other.len())?;
        CoeffVector::from_array(&self.entries + &other.entries)
    }

    pub fn sub(&self, other: &CoeffVector) -> Result<CoeffVector> {
        self.check_len(other.len())?;
        CoeffVector::from_array(&self.entries - &other.entries)
    }

    fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "coefficient vector pair",
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Which inner-product family governs a space.
#[derive(Clone, Debug, PartialEq)]
pub enum InnerProduct {
    Cartesian,
    /// `(a, b) = sum_j w_j conj(a_j) b_j` with strictly positive weights.
    DiagonalWeighted {
        weights: Array1<f64>,
    },
    /// `(a, b) = (a, W b)_Cartesian` for Hermitian positive-definite `W`.
    OperatorWeighted {
        gram: Array2<Complex64>,
    },
    /// `(a, b) = (B a, B b)_Cartesian` for full-column-rank `B`.
    Transformed {
        transform: Array2<Complex64>,
    },
}

/// A finite-dimensional Hilbert space: dimension plus inner-product choice.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    dim: usize,
    ip: InnerProduct,
}

impl Space {
    pub fn cartesian(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty { context: "space" });
        }
        Ok(Self {
            dim,
            ip: InnerProduct::Cartesian,
        })
    }

    pub fn diagonal_weighted(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty { context: "space" });
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::NonFinite {
                context: "diagonal weights",
            });
        }
        Ok(Self {
            dim: weights.len(),
            ip: InnerProduct::DiagonalWeighted {
                weights: Array1::from_vec(weights),
            },
        })
    }

    pub fn operator_weighted(gram: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = gram.dim();
        if rows == 0 {
            return Err(Error::Empty { context: "space" });
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if !mat_finite(&gram) {
            return Err(Error::NonFinite {
                context: "weighting gram",
            });
        }
        Ok(Self {
            dim: rows,
            ip: InnerProduct::OperatorWeighted { gram },
        })
    }

    /// Space of dimension `transform.ncols()` under `(B a, B b)`.
    pub fn transformed(transform: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = transform.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::Empty { context: "space" });
        }
        if !mat_finite(&transform) {
            return Err(Error::NonFinite {
                context: "transform matrix",
            });
        }
        Ok(Self {
            dim: cols,
            ip: InnerProduct::Transformed { transform },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.ip
    }

    /// Inner product of `a` and `b` under this space, conjugate-linear in `a`
    /// and linear in `b`.
    pub fn inner(&self, a: &CoeffVector, b: &CoeffVector) -> Result<Complex64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let value = match &self.ip {
            InnerProduct::Cartesian => cart_inner(a.as_array(), b.as_array()),
            InnerProduct::DiagonalWeighted { weights } => a
                .iter()
                .zip(b.iter())
                .zip(weights.iter())
                .map(|((x, y), &w)| x.conj() * y * w)
                .sum(),
            InnerProduct::OperatorWeighted { gram } => {
                let wb = gram.dot(b.as_array());
                cart_inner(a.as_array(), &wb)
            }
            InnerProduct::Transformed { transform } => {
                let ba = transform.dot(a.as_array());
                let bb = transform.dot(b.as_array());
                cart_inner(&ba, &bb)
            }
        };
        if !is_finite_c(value) {
            return Err(Error::NonFinite {
                context: "inner product",
            });
        }
        Ok(value)
    }

    /// Norm induced by the inner product.
    pub fn norm(&self, a: &CoeffVector) -> Result<f64> {
        let self_product = self.inner(a, a)?;
        Ok(self_product.re.max(0.0).sqrt())
    }

    /// Metric induced by the norm, `||a - b||`.
    pub fn metric(&self, a: &CoeffVector, b: &CoeffVector) -> Result<f64> {
        self.norm(&a.sub(b)?)
    }

    /// Check the semantic invariants of the inner-product choice and list
    /// every violation found.
    pub fn validate(&self) -> SpaceValidation {
        let mut violations = Vec::new();
        match &self.ip {
            InnerProduct::Cartesian => {}
            InnerProduct::DiagonalWeighted { weights } => {
                for (index, &value) in weights.iter().enumerate() {
                    if value <= 0.0 {
                        violations.push(Violation::NonPositiveWeight { index, value });
                    }
                }
            }
            InnerProduct::OperatorWeighted { gram } => {
                let adjoint = gram.t().mapv(|z| z.conj());
                let defect = max_abs(&(gram - &adjoint));
                let scale = max_abs(gram).max(f64::MIN_POSITIVE);
                if defect > GRAM_HERMITICITY_TOL * scale {
                    violations.push(Violation::GramNotHermitian {
                        relative_defect: defect / scale,
                    });
                }
                let hermitized = (gram + &adjoint).mapv(|z| 0.5 * z);
                let (min_eigenvalue, max_eigenvalue) =
                    hermitian_extremes(&hermitized.view(), VALIDATE_SEED);
                if min_eigenvalue <= GRAM_POSITIVITY_RATIO * max_eigenvalue.abs() {
                    violations.push(Violation::GramNotPositiveDefinite {
                        min_eigenvalue,
                        max_eigenvalue,
                    });
                }
            }
            InnerProduct::Transformed { transform } => {
                let adjoint = transform.t().mapv(|z| z.conj());
                let gram = adjoint.dot(transform);
                let (min_eigenvalue, max_eigenvalue) =
                    hermitian_extremes(&gram.view(), VALIDATE_SEED);
                if min_eigenvalue <= GRAM_POSITIVITY_RATIO * max_eigenvalue.abs() {
                    violations.push(Violation::TransformRankDeficient {
                        min_gram_eigenvalue: min_eigenvalue,
                        max_gram_eigenvalue: max_eigenvalue,
                    });
                }
            }
        }
        SpaceValidation { violations }
    }

    /// Error unless [`Space::validate`] reports no violations.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSpace(report.to_string()))
        }
    }

    fn check_dim(&self, v: &CoeffVector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "vector against space",
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// A single violated space invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonPositiveWeight {
        index: usize,
        value: f64,
    },
    GramNotHermitian {
        relative_defect: f64,
    },
    GramNotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },
    TransformRankDeficient {
        min_gram_eigenvalue: f64,
        max_gram_eigenvalue: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveWeight { index, value } => {
                write!(f, "weight {index} is not positive ({value})")
            }
            Violation::GramNotHermitian { relative_defect } => {
                write!(f, "gram is not hermitian (relative defect {relative_defect:.3e})")
            }
            Violation::GramNotPositiveDefinite {
                min_eigenvalue,
                max_eigenvalue,
            } => write!(
                f,
                "gram is not positive definite (eigenvalues span {min_eigenvalue:.3e}..{max_eigenvalue:.3e})"
            ),
            Violation::TransformRankDeficient {
                min_gram_eigenvalue,
                max_gram_eigenvalue,
            } => write!(
                f,
                "transform is column-rank deficient (gram eigenvalues span {min_gram_eigenvalue:.3e}..{max_gram_eigenvalue:.3e})"
            ),
        }
    }
}

/// Outcome of [`Space::validate`]; empty means the space is a legal
/// inner-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceValidation {
    pub violations: Vec<Violation>,
}

impl SpaceValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SpaceValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cartesian_orthogonal_units() {
        let space = Space::cartesian(2).unwrap();
        let e1 = CoeffVector::from_reals(&[1.0, 0.0]).unwrap();
        let e2 = CoeffVector::from_reals(&[0.0, 1.0]).unwrap();
        assert_eq!(space.inner(&e1, &e2).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn cartesian_self_product_sums_magnitudes() {
        let space = Space::cartesian(2).unwrap();
        let a = CoeffVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let got = space.inner(&a, &a).unwrap();
        assert!((got - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_weighted_example() {
        let space = Space::diagonal_weighted(vec![2.0, 3.0]).unwrap();
        let a = CoeffVector::from_reals(&[1.0, 0.0]).unwrap();
        let b = CoeffVector::from_reals(&[1.0, 1.0]).unwrap();
        assert!((space.inner(&a, &b).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_gram_matches_cartesian() {
        let mut rng = opspace_testkit::rng(42);
        let gram: Array2<Complex64> = Array2::eye(3);
        let weighted = Space::operator_weighted(gram).unwrap();
        let cartesian = Space::cartesian(3).unwrap();
        for _ in 0..50 {
            let a = CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 3)).unwrap();
            let b = CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 3)).unwrap();
            let lhs = weighted.inner(&a, &b).unwrap();
            let rhs = cartesian.inner(&a, &b).unwrap();
            assert!((lhs - rhs).norm() <= 1e-14 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn norm_examples() {
        let space = Space::cartesian(2).unwrap();
        let a = CoeffVector::from_reals(&[3.0, 4.0]).unwrap();
        assert!((space.norm(&a).unwrap() - 5.0).abs() < 1e-15);

        let zero = CoeffVector::zeros(2).unwrap();
        assert_eq!(space.norm(&zero).unwrap(), 0.0);

        let weighted = Space::diagonal_weighted(vec![4.0, 1.0]).unwrap();
        let e1 = CoeffVector::from_reals(&[1.0, 0.0]).unwrap();
        assert!((weighted.norm(&e1).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn metric_of_orthonormal_units_is_sqrt2() {
        let space = Space::cartesian(2).unwrap();
        let e1 = CoeffVector::from_reals(&[1.0, 0.0]).unwrap();
        let e2 = CoeffVector::from_reals(&[0.0, 1.0]).unwrap();
        assert!((space.metric(&e1, &e2).unwrap() - 2.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(space.metric(&e1, &e1).unwrap(), 0.0);
    }

    #[test]
    fn metric_is_symmetric_on_random_pairs() {
        let mut rng = opspace_testkit::rng(7);
        let space = Space::diagonal_weighted(vec![0.5, 1.5, 2.5]).unwrap();
        for _ in 0..50 {
            let a = CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 3)).unwrap();
            let b = CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 3)).unwrap();
            let d1 = space.metric(&a, &b).unwrap();
            let d2 = space.metric(&b, &a).unwrap();
            assert!((d1 - d2).abs() <= 1e-14 * (1.0 + d1));
        }
    }

    #[test]
    fn validate_flags_nonpositive_weight() {
        let space = Space::diagonal_weighted(vec![1.0, -1.0]).unwrap();
        let report = space.validate();
        assert!(!report.is_valid());
        assert!(matches!(
            report.violations[0],
            Violation::NonPositiveWeight { index: 1, .. }
        ));
    }

    #[test]
    fn validate_flags_indefinite_gram() {
        let gram = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let space = Space::operator_weighted(gram).unwrap();
        let report = space.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::GramNotPositiveDefinite { .. })));
    }

    #[test]
    fn validate_accepts_cartesian() {
        for dim in [1usize, 2, 7] {
            assert!(Space::cartesian(dim).unwrap().validate().is_valid());
        }
    }

    #[test]
    fn validate_flags_rank_deficient_transform() {
        // two equal columns
        let b = array![[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 1.0), c(0.0, 1.0)]];
        let space = Space::transformed(b).unwrap();
        let report = space.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TransformRankDeficient { .. })));
    }

    #[test]
    fn rejects_nonfinite_and_mismatched() {
        assert!(CoeffVector::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CoeffVector::new(vec![]).is_err());
        let space = Space::cartesian(2).unwrap();
        let short = CoeffVector::from_reals(&[1.0]).unwrap();
        let ok = CoeffVector::from_reals(&[1.0, 2.0]).unwrap();
        assert!(space.inner(&short, &ok).is_err());
        assert!(space.norm(&short).is_err());
    }

    #[test]
    fn transformed_matches_operator_weighted_gram() {
        let mut rng = opspace_testkit::rng(11);
        let b = opspace_testkit::complex_matrix(&mut rng, 4, 3);
        let bh = b.t().mapv(|z| z.conj());
        let gram = bh.dot(&b);
        let transformed = Space::transformed(b).unwrap();
        let weighted = Space::operator_weighted(gram).unwrap();
        for _ in 0..50 {
            let x = CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 3)).unwrap();
            let y = CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 3)).unwrap();
            let lhs = transformed.inner(&x, &y).unwrap();
            let rhs = weighted.inner(&x, &y).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
