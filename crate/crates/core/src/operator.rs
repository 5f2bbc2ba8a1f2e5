//! Operators between two (possibly different) spaces, stored as matrices.
//!
//! Matrix entries are the numbers obtained against orthonormal bases of the
//! domain and range, so every product, adjoint, and norm below is plain
//! Cartesian matrix algebra; which bases were used at assembly is the
//! caller's bookkeeping. The adjoint is therefore exactly the conjugate
//! transpose, and the defining relation `(mu, A eta) = (A^H mu, eta)` holds in
//! those coordinates even when the two spaces carry different inner products.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::power;
use crate::space::{CoeffVector, Space};
use crate::util::{frob, mat_finite, max_abs, tol_at};

/// Default relative tolerance for Hermiticity checks.
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;

/// The four equivalent summation routes to the Hilbert-Schmidt norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsMethod {
    /// Apply the operator to each domain basis vector and sum squared norms.
    ColumnSums,
    /// Sum the squared magnitudes of all matrix entries.
    EntrySquares,
    /// Trace of the domain-side gram `A^H A`.
    TraceDomainGram,
    /// Trace of the range-side gram `A A^H`.
    TraceRangeGram,
}

/// Supremum-norm estimate from power iteration on the smaller gram operator.
#[derive(Clone, Copy, Debug)]
pub struct SupNormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Exact Hilbert-Schmidt norm of the entries dropped by a truncation; it
/// bounds the worst-case application error of the truncated operator.
#[derive(Clone, Copy, Debug)]
pub struct TruncationCertificate {
    pub kept_rows: usize,
    pub kept_cols: usize,
    pub tail_hs_norm: f64,
}

/// A linear operator from a domain space to a range space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    domain: Space,
    range: Space,
    elements: Array2<Complex64>,
}

impl Operator {
    pub fn new(domain: Space, range: Space, elements: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = elements.dim();
        if rows != range.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator rows against range",
                expected: range.dim(),
                found: rows,
            });
        }
        if cols != domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator columns against domain",
                expected: domain.dim(),
                found: cols,
            });
        }
        if !mat_finite(&elements) {
            return Err(Error::NonFinite {
                context: "operator elements",
            });
        }
        Ok(Self {
            domain,
            range,
            elements,
        })
    }

    /// Identity operator on a space.
    pub fn identity(space: &Space) -> Self {
        Self {
            domain: space.clone(),
            range: space.clone(),
            elements: Array2::eye(space.dim()),
        }
    }

    /// Outer product `|ket><bra|`: entry (j, k) is `ket_j * conj(bra_k)`.
    pub fn outer(
        ket: &CoeffVector,
        bra: &CoeffVector,
        range: &Space,
        domain: &Space,
    ) -> Result<Self> {
        if ket.len() != range.dim() {
            return Err(Error::DimensionMismatch {
                context: "outer-product ket against range",
                expected: range.dim(),
                found: ket.len(),
            });
        }
        if bra.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "outer-product bra against domain",
                expected: domain.dim(),
                found: bra.len(),
            });
        }
        let elements = Array2::from_shape_fn((range.dim(), domain.dim()), |(j, k)| {
            ket.entry(j) * bra.entry(k).conj()
        });
        Self::new(domain.clone(), range.clone(), elements)
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn range(&self) -> &Space {
        &self.range
    }

    pub fn elements(&self) -> &Array2<Complex64> {
        &self.elements
    }

    /// (rows, cols) = (range dimension, domain dimension).
    pub fn shape(&self) -> (usize, usize) {
        self.elements.dim()
    }

    /// Matrix-vector product; `v` in domain coordinates, result in range
    /// coordinates.
    pub fn apply(&self, v: &CoeffVector) -> Result<CoeffVector> {
        if v.len() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                expected: self.domain.dim(),
                found: v.len(),
            });
        }
        let out: Array1<Complex64> = self.elements.dot(v.as_array());
        CoeffVector::from_array(out)
    }

    /// Conjugate transpose with domain and range swapped.
    pub fn adjoint(&self) -> Operator {
        Operator {
            domain: self.range.clone(),
            range: self.domain.clone(),
            elements: self.elements.t().mapv(|z| z.conj()),
        }
    }

    /// Matrix product `self * other`; `other` acts first.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        if other.range.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator composition",
                expected: self.domain.dim(),
                found: other.range.dim(),
            });
        }
        Operator::new(
            other.domain.clone(),
            self.range.clone(),
            self.elements.dot(&other.elements),
        )
    }

    /// Entry-wise difference; shapes must agree.
    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                context: "operator difference",
                expected: self.shape().0 * self.shape().1,
                found: other.shape().0 * other.shape().1,
            });
        }
        Operator::new(
            self.domain.clone(),
            self.range.clone(),
            &self.elements - &other.elements,
        )
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            domain: self.domain.clone(),
            range: self.range.clone(),
            elements: self.elements.mapv(|z| z * factor),
        }
    }

    /// Hilbert-Schmidt norm by the requested summation route. All four agree
    /// within rounding; keeping them separate makes the equivalence testable.
    pub fn hs_norm(&self, method: HsMethod) -> f64 {
        match method {
            HsMethod::EntrySquares => frob(&self.elements),
            HsMethod::ColumnSums => {
                let (rows, cols) = self.shape();
                let mut total = 0.0f64;
                for k in 0..cols {
                    let mut e: Array1<Complex64> = Array1::zeros(cols);
                    e[k] = Complex64::new(1.0, 0.0);
                    let col = self.elements.dot(&e);
                    let mut col_sq = 0.0;
                    for j in 0..rows {
                        col_sq += col[j].norm_sqr();
                    }
                    total += col_sq;
                }
                total.sqrt()
            }
            HsMethod::TraceDomainGram => {
                let gram = self.elements.t().mapv(|z| z.conj()).dot(&self.elements);
                let trace: f64 = (0..gram.nrows()).map(|i| gram[[i, i]].re).sum();
                trace.max(0.0).sqrt()
            }
            HsMethod::TraceRangeGram => {
                let gram = self.elements.dot(&self.elements.t().mapv(|z| z.conj()));
                let trace: f64 = (0..gram.nrows()).map(|i| gram[[i, i]].re).sum();
                trace.max(0.0).sqrt()
            }
        }
    }

    /// Largest singular value, estimated by power iteration on the smaller of
    /// the two gram operators. Successive Rayleigh quotients stall the power
    /// phase, after which a Rayleigh-quotient polish sharpens the value;
    /// deterministic for a fixed seed. Non-convergence after `max_iters`
    /// power steps is flagged, with the best estimate still returned.
    pub fn sup_norm_estimate(
        &self,
        rel_tol: f64,
        max_iters: usize,
        seed: u64,
    ) -> Result<SupNormEstimate> {
        if rel_tol <= 0.0 || !rel_tol.is_finite() {
            return Err(Error::BadTolerance(rel_tol));
        }
        let (rows, cols) = self.shape();
        let gram = if cols <= rows {
            self.elements.t().mapv(|z| z.conj()).dot(&self.elements)
        } else {
            self.elements.dot(&self.elements.t().mapv(|z| z.conj()))
        };
        let sigma = frob(&gram);
        if sigma <= crate::util::ABS_FLOOR {
            return Ok(SupNormEstimate {
                value: 0.0,
                converged: true,
                iterations: 0,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tol_abs = tol_at(sigma, rel_tol);
        let first =
            power::extremal_hermitian(&gram.view(), &[], sigma, tol_abs, max_iters, &mut rng);
        let mut value = first.value;
        let mut converged = first.converged;
        let mut iterations = first.iterations;
        // when the two leading gram eigenvalues nearly tie, the polish can
        // settle on the second one; a run in the orthogonal complement
        // recovers the other member of the pair
        if gram.nrows() > 1 {
            let orth = [first.vector];
            let second =
                power::extremal_hermitian(&gram.view(), &orth, sigma, tol_abs, max_iters, &mut rng);
            iterations += second.iterations;
            if second.value > value {
                value = second.value;
                converged = second.converged;
            }
        }
        Ok(SupNormEstimate {
            value: value.max(0.0).sqrt(),
            converged,
            iterations,
        })
    }

    /// Keep the top-left `keep_rows x keep_cols` block (zero-padded back to
    /// the original shape) and certify the Hilbert-Schmidt norm of everything
    /// dropped.
    pub fn truncate(
        &self,
        keep_rows: usize,
        keep_cols: usize,
    ) -> Result<(Operator, TruncationCertificate)> {
        let (rows, cols) = self.shape();
        if keep_rows < 1 || keep_rows > rows {
            return Err(Error::TruncationOutOfRange {
                axis: "row",
                given: keep_rows,
                max: rows,
            });
        }
        if keep_cols < 1 || keep_cols > cols {
            return Err(Error::TruncationOutOfRange {
                axis: "column",
                given: keep_cols,
                max: cols,
            });
        }
        let mut kept = Array2::zeros((rows, cols));
        let mut tail_sq = 0.0f64;
        for j in 0..rows {
            for k in 0..cols {
                if j < keep_rows && k < keep_cols {
                    kept[[j, k]] = self.elements[[j, k]];
                } else {
                    tail_sq += self.elements[[j, k]].norm_sqr();
                }
            }
        }
        let truncated = Operator::new(self.domain.clone(), self.range.clone(), kept)?;
        Ok((
            truncated,
            TruncationCertificate {
                kept_rows: keep_rows,
                kept_cols: keep_cols,
                tail_hs_norm: tail_sq.sqrt(),
            },
        ))
    }

    /// Largest deviation from conjugate-transpose symmetry, relative to the
    /// largest entry magnitude.
    pub fn hermitian_defect(&self) -> Result<f64> {
        let (rows, cols) = self.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let scale = max_abs(&self.elements);
        if scale == 0.0 {
            return Ok(0.0);
        }
        let mut worst = 0.0f64;
        for j in 0..rows {
            for k in 0..cols {
                worst = worst.max((self.elements[[j, k]] - self.elements[[k, j]].conj()).norm());
            }
        }
        Ok(worst / scale)
    }

    /// True when the matrix equals its conjugate transpose within `tol`
    /// relative to the largest entry magnitude.
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        Ok(self.hermitian_defect()? <= tol)
    }
}
