//! Orthonormal basis sets, expansion, and the shift to Cartesian coordinates.
//!
//! [`gram_schmidt`] orthonormalizes a list of vectors under whatever inner
//! product the space carries, skipping and reporting inputs that are
//! numerically linear combinations of earlier ones. A second projection pass
//! is always applied, which keeps the output Gram matrix within 1e-10 of the
//! identity even for nearly dependent inputs; a single pass does not.
//!
//! [`Basis::to_cartesian_coords`] implements the coordinate change that turns
//! any inner product into the plain Cartesian one: a vector is replaced by its
//! expansion coefficients on a full orthonormal basis, after which inner
//! products of images reduce to row-times-column sums.
//!
//! Input order is taken as given; it decides which members of a dependent set
//! get reported as dependent.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{CoeffVector, Space};

/// An input is declared linearly dependent when its post-projection remainder
/// is below this fraction of its own norm.
pub const DEPENDENCY_RATIO: f64 = 1e-10;

/// An ordered orthonormal set of vectors in one space.
///
/// Producers guarantee orthonormality at their stated tolerance
/// ([`gram_schmidt`] within 1e-10, eigensolvers within 1e-8);
/// [`Basis::gram_defect`] measures it.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    space: Space,
    vectors: Vec<CoeffVector>,
}

/// Result of [`gram_schmidt`]: the orthonormal basis plus the indices of
/// inputs that were skipped as dependent on earlier ones.
#[derive(Clone, Debug)]
pub struct GramSchmidtOutcome {
    pub basis: Basis,
    pub dependent: Vec<usize>,
}

/// Expansion of a vector on a basis: the coefficients and the norm of what
/// the basis could not represent.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub coefficients: CoeffVector,
    pub residual_norm: f64,
}

impl Basis {
    /// Wrap vectors as a basis for `space`, checking shapes only.
    pub fn new(space: Space, vectors: Vec<CoeffVector>) -> Result<Self> {
        if vectors.len() > space.dim() {
            return Err(Error::DimensionMismatch {
                context: "basis size against space dimension",
                expected: space.dim(),
                found: vectors.len(),
            });
        }
        for v in &vectors {
            if v.len() != space.dim() {
                return Err(Error::DimensionMismatch {
                    context: "basis vector against space",
                    expected: space.dim(),
                    found: v.len(),
                });
            }
        }
        Ok(Self { space, vectors })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.vectors.len() == self.space.dim()
    }

    pub fn vector(&self, index: usize) -> &CoeffVector {
        &self.vectors[index]
    }

    pub fn vectors(&self) -> &[CoeffVector] {
        &self.vectors
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn gram_defect(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                let got = self.space.inner(a, b)?;
                worst = worst.max((got - Complex64::new(expected, 0.0)).norm());
            }
        }
        Ok(worst)
    }

    /// Expansion coefficients `(b_j, v)` and the residual norm of the part of
    /// `v` outside the basis span.
    pub fn expand(&self, v: &CoeffVector) -> Result<Expansion> {
        if self.vectors.is_empty() {
            return Err(Error::Empty { context: "basis" });
        }
        let mut coefficients = Vec::with_capacity(self.vectors.len());
        let mut remainder = v.clone();
        for b in &self.vectors {
            let c = self.space.inner(b, v)?;
            coefficients.push(c);
            remainder = remainder.sub(&b.scale(c))?;
        }
        Ok(Expansion {
            coefficients: CoeffVector::new(coefficients)?,
            residual_norm: self.space.norm(&remainder)?,
        })
    }

    /// Linear combination `sum_j coefficients_j * basis_j`.
    pub fn reconstruct(&self, coefficients: &CoeffVector) -> Result<CoeffVector> {
        if coefficients.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch {
                context: "coefficients against basis size",
                expected: self.vectors.len(),
                found: coefficients.len(),
            });
        }
        let mut acc = CoeffVector::zeros(self.space.dim())?;
        for (b, &c) in self.vectors.iter().zip(coefficients.iter()) {
            acc = acc.add(&b.scale(c))?;
        }
        Ok(acc)
    }

    /// Coefficient column of `v` on this (full) basis. Inner products of
    /// images under the plain Cartesian product equal inner products of the
    /// originals under the space's own product.
    pub fn to_cartesian_coords(&self, v: &CoeffVector) -> Result<CoeffVector> {
        if !self.is_full() {
            return Err(Error::BasisNotFull {
                have: self.vectors.len(),
                need: self.space.dim(),
            });
        }
        let mut coords = Vec::with_capacity(self.vectors.len());
        for b in &self.vectors {
            coords.push(self.space.inner(b, v)?);
        }
        CoeffVector::new(coords)
    }
}

/// Orthonormalize `inputs` under the space's inner product.
///
/// Inputs that are numerically linear combinations of earlier ones (remainder
/// below [`DEPENDENCY_RATIO`] times their own norm) are skipped and reported.
/// An all-zero input set yields an empty basis. Each emitted vector is scaled
/// so its largest-magnitude entry is real and positive, making the output
/// deterministic.
pub fn gram_schmidt(space: &Space, inputs: &[CoeffVector]) -> Result<GramSchmidtOutcome> {
    space.ensure_valid()?;
    let mut kept: Vec<CoeffVector> = Vec::new();
    let mut dependent = Vec::new();

    for (index, input) in inputs.iter().enumerate() {
        if input.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                context: "gram-schmidt input",
                expected: space.dim(),
                found: input.len(),
            });
        }
        let input_norm = space.norm(input)?;
        let mut v = input.clone();
        // one projection pass plus one reorthogonalization pass
        for _ in 0..2 {
            for b in &kept {
                let c = space.inner(b, &v)?;
                v = v.sub(&b.scale(c))?;
            }
        }
        let remainder = space.norm(&v)?;
        if remainder <= DEPENDENCY_RATIO * input_norm {
            dependent.push(index);
            continue;
        }
        let mut unit = v.scale(Complex64::new(1.0 / remainder, 0.0));
        unit = canonical_phase(&unit);
        kept.push(unit);
    }

    Ok(GramSchmidtOutcome {
        basis: Basis::new(space.clone(), kept)?,
        dependent,
    })
}

/// Rotate a vector by a unit scalar so its largest-magnitude entry (first
/// such entry on ties) is real and positive.
pub(crate) fn canonical_phase(v: &CoeffVector) -> CoeffVector {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    if best_mag == 0.0 {
        return v.clone();
    }
    let phase = v.entry(best) / best_mag;
    v.scale(phase.conj())
}
