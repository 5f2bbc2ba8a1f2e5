//! Hermitian eigendecomposition by repeated extremal extraction and deflation.
//!
//! Each stage finds the largest-magnitude eigenpair of the current operator
//! and subtracts the found projector, `A_{n+1} = A_n - r_n |b_n><b_n|`, so the
//! next stage's extremal eigenvalue is the next one down in magnitude and the
//! supremum norm of every deflated operator equals the magnitude of the next
//! eigenvalue. Iterates are re-projected against the found vectors each step,
//! which keeps rounding noise from re-entering the deflated directions.
//!
//! Eigenvalues within `DEGENERACY_RATIO` of each other (relative to the
//! leading magnitude) are treated as one eigenspace and their vectors
//! re-orthonormalized together. Every eigenvector is scaled so its
//! largest-magnitude entry is real and positive.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{canonical_phase, gram_schmidt, Basis};
use crate::error::{Error, Result};
use crate::operator::{Operator, DEFAULT_HERMITIAN_TOL};
use crate::power;
use crate::space::{CoeffVector, Space};
use crate::util::{cart_inner, frob, l2, tol_at, ABS_FLOOR};

/// Default per-eigenpair relative residual tolerance.
pub const DEFAULT_EIG_REL_TOL: f64 = 1e-10;
/// Iteration cap per extracted eigenpair.
pub const MAX_EIG_ITERATIONS: usize = 10_000;
/// Eigenvalues closer than this (relative to the leading magnitude) form one
/// eigenspace.
pub const DEGENERACY_RATIO: f64 = 1e-8;

/// Ordered eigenpairs of a Hermitian operator.
///
/// Eigenvalues are sorted by descending magnitude, positive before negative
/// on magnitude ties. `residuals[j]` is `||A b_j - r_j b_j||` recomputed
/// against the original operator; `converged[j]` records whether it met the
/// requested tolerance.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Basis,
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Per-property outcome of [`verify_eigen_properties`].
#[derive(Clone, Debug)]
pub struct EigenReport {
    pub reality: bool,
    pub ordering: bool,
    pub orthogonality: bool,
    pub residuals: bool,
    pub sup_norm_match: bool,
    pub max_rayleigh_imag: f64,
    pub max_gram_defect: f64,
    pub max_residual: f64,
    pub sup_norm_gap: f64,
}

impl EigenReport {
    pub fn all_pass(&self) -> bool {
        self.reality && self.ordering && self.orthogonality && self.residuals && self.sup_norm_match
    }
}

/// Leading `k` eigenpairs of a Hermitian operator by deflation.
///
/// Per-pair convergence means `||A b - r b|| <= rel_tol * |r_1|`; pairs that
/// miss it are flagged, not dropped. Deterministic for a fixed seed.
pub fn hermitian_eig(
    a: &Operator,
    k: usize,
    rel_tol: f64,
    seed: u64,
) -> Result<EigenDecomposition> {
    if rel_tol <= 0.0 || !rel_tol.is_finite() {
        return Err(Error::BadTolerance(rel_tol));
    }
    let defect = a.hermitian_defect()?;
    if defect > DEFAULT_HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.domain().dim();
    if k < 1 || k > n {
        return Err(Error::CountOutOfRange {
            requested: k,
            max: n,
        });
    }

    let elements = a.elements();
    let mut working: Array2<Complex64> = elements.to_owned();
    let scale0 = frob(&working);
    let zero_floor = (f64::EPSILON * scale0 * n as f64).max(ABS_FLOOR);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut values: Vec<f64> = Vec::with_capacity(k);
    let mut vectors: Vec<Array1<Complex64>> = Vec::with_capacity(k);

    for _stage in 0..k {
        let sigma = frob(&working);
        let leading = values
            .first()
            .map(|r: &f64| r.abs())
            .unwrap_or(scale0)
            .max(ABS_FLOOR);
        let target = tol_at(leading, rel_tol);

        if sigma <= zero_floor {
            // remainder is numerically zero: the rest of the spectrum is 0
            let v = power::completion_vector(&vectors, n, &mut rng);
            values.push(0.0);
            vectors.push(v);
            continue;
        }

        let found = power::extremal_hermitian(
            &working.view(),
            &vectors,
            sigma,
            target,
            MAX_EIG_ITERATIONS,
            &mut rng,
        );
        // value against the original operator, deflation noise excluded
        let rayleigh = cart_inner(&found.vector, &elements.dot(&found.vector)).re;
        // deflate: working -= r |b><b|
        for j in 0..n {
            for t in 0..n {
                working[[j, t]] -=
                    Complex64::new(rayleigh, 0.0) * found.vector[j] * found.vector[t].conj();
            }
        }
        values.push(rayleigh);
        vectors.push(found.vector);
    }

    let r1 = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    regroup_degenerate(&values, &mut vectors, r1)?;

    // canonical phase on every eigenvector
    let space = Space::cartesian(n)?;
    let mut coeff_vectors: Vec<CoeffVector> = Vec::with_capacity(values.len());
    for v in &vectors {
        let cv = CoeffVector::from_array(v.clone())?;
        coeff_vectors.push(canonical_phase(&cv));
    }

    // descending magnitude; within a magnitude tie (up to rounding) the
    // positive eigenvalue comes first, then discovery order
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].abs().partial_cmp(&values[i].abs()).unwrap());
    let tie = tol_at(r1, 1e-12);
    let mut run = 0usize;
    while run < order.len() {
        let mut end = run + 1;
        while end < order.len()
            && (values[order[end]].abs() - values[order[run]].abs()).abs() <= tie
        {
            end += 1;
        }
        order[run..end].sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        run = end;
    }

    let tol_abs = tol_at(r1, rel_tol);
    let mut eigenvalues = Vec::with_capacity(order.len());
    let mut ordered_vectors = Vec::with_capacity(order.len());
    let mut residuals = Vec::with_capacity(order.len());
    let mut converged = Vec::with_capacity(order.len());
    for &i in &order {
        let v = coeff_vectors[i].as_array();
        let av = elements.dot(v);
        let res = l2(&(&av - &v.mapv(|z| z * values[i])));
        eigenvalues.push(values[i]);
        ordered_vectors.push(coeff_vectors[i].clone());
        residuals.push(res);
        converged.push(res <= tol_abs);
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: Basis::new(space, ordered_vectors)?,
        residuals,
        converged,
    })
}

/// Re-orthonormalize eigenvectors that share an eigenvalue up to
/// `DEGENERACY_RATIO * r1`. Exactly degenerate clusters (equal to rounding)
/// additionally get a canonical basis: Gram-Schmidt of the unit vectors
/// projected into the eigenspace, so the output does not depend on the seed.
fn regroup_degenerate(values: &[f64], vectors: &mut [Array1<Complex64>], r1: f64) -> Result<()> {
    if values.is_empty() {
        return Ok(());
    }
    let n = vectors[0].len();
    let cluster_tol = tol_at(r1, DEGENERACY_RATIO);
    let exact_tol = tol_at(r1, 1e-12);
    let space = Space::cartesian(n)?;

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());

    let mut start = 0usize;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && (values[order[end]] - values[order[end - 1]]).abs() <= cluster_tol
        {
            end += 1;
        }
        let slots = &order[start..end];
        if slots.len() > 1 {
            let members: Vec<CoeffVector> = slots
                .iter()
                .map(|&i| CoeffVector::from_array(vectors[i].clone()))
                .collect::<Result<_>>()?;

            let spread = values[slots[slots.len() - 1]] - values[slots[0]];
            let replacement = if spread.abs() <= exact_tol {
                canonical_subspace_basis(&space, &members)?
            } else {
                None
            };
            let replacement = match replacement {
                Some(basis) => Some(basis),
                None => {
                    let redone = gram_schmidt(&space, &members)?;
                    (redone.basis.len() == members.len()).then_some(redone.basis)
                }
            };
            // a dependent member would mean the cluster lost rank; keep the
            // original vectors in that case rather than shrink the set
            if let Some(basis) = replacement {
                for (slot, fresh) in slots.iter().zip(basis.vectors()) {
                    vectors[*slot] = fresh.as_array().clone();
                }
            }
        }
        start = end;
    }
    Ok(())
}

/// Deterministic orthonormal basis of the subspace spanned by `members`:
/// Gram-Schmidt over the canonical unit vectors projected into it. Returns
/// `None` when the projection loses rank numerically.
fn canonical_subspace_basis(space: &Space, members: &[CoeffVector]) -> Result<Option<Basis>> {
    let n = space.dim();
    let mut candidates = Vec::with_capacity(n);
    for i in 0..n {
        let mut projected: Array1<Complex64> = Array1::zeros(n);
        for m in members {
            let v = m.as_array();
            let coeff = v[i].conj();
            projected = &projected + &v.mapv(|z| z * coeff);
        }
        candidates.push(CoeffVector::from_array(projected)?);
    }
    let out = gram_schmidt(space, &candidates)?;
    if out.basis.len() == members.len() {
        Ok(Some(out.basis))
    } else {
        Ok(None)
    }
}

/// Assemble `sum_j r_j |b_j><b_j|` on the given space.
pub fn spectral_reconstruct(d: &EigenDecomposition, space: &Space) -> Result<Operator> {
    let n = space.dim();
    let mut acc: Array2<Complex64> = Array2::zeros((n, n));
    for (value, vector) in d.eigenvalues.iter().zip(d.eigenvectors.vectors()) {
        if vector.len() != n {
            return Err(Error::DimensionMismatch {
                context: "eigenvector against reconstruction space",
                expected: n,
                found: vector.len(),
            });
        }
        let v = vector.as_array();
        for j in 0..n {
            for t in 0..n {
                acc[[j, t]] += Complex64::new(*value, 0.0) * v[j] * v[t].conj();
            }
        }
    }
    Operator::new(space.clone(), space.clone(), acc)
}

/// Check every eigen property the decomposition is supposed to satisfy:
/// real Rayleigh quotients, nonincreasing magnitudes, pairwise orthonormal
/// vectors, small recomputed residuals, and leading magnitude equal to the
/// supremum norm.
pub fn verify_eigen_properties(
    a: &Operator,
    d: &EigenDecomposition,
    tol: f64,
) -> Result<EigenReport> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::BadTolerance(tol));
    }
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    for v in d.eigenvectors.vectors() {
        if v.len() != cols {
            return Err(Error::DimensionMismatch {
                context: "eigenvector against operator",
                expected: cols,
                found: v.len(),
            });
        }
    }

    let r1 = d.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let elements = a.elements();
    let mut max_rayleigh_imag = 0.0f64;
    let mut max_residual = 0.0f64;
    for (value, vector) in d.eigenvalues.iter().zip(d.eigenvectors.vectors()) {
        let v = vector.as_array();
        let av = elements.dot(v);
        max_rayleigh_imag = max_rayleigh_imag.max(cart_inner(v, &av).im.abs());
        max_residual = max_residual.max(l2(&(&av - &v.mapv(|z| z * *value))));
    }

    let mut ordering = true;
    for w in d.eigenvalues.windows(2) {
        if w[1].abs() > w[0].abs() + tol_at(r1, tol) {
            ordering = false;
        }
    }

    let max_gram_defect = d.eigenvectors.gram_defect()?;

    let sup = a.sup_norm_estimate(1e-9, MAX_EIG_ITERATIONS, 0x5eed_0002)?;
    let sup_norm_gap = (r1 - sup.value).abs();

    let scale = r1.max(ABS_FLOOR);
    Ok(EigenReport {
        reality: max_rayleigh_imag <= tol_at(scale, tol),
        ordering,
        orthogonality: max_gram_defect <= tol,
        residuals: max_residual <= tol_at(scale, tol),
        sup_norm_match: sup_norm_gap <= tol_at(sup.value.max(scale), tol),
        max_rayleigh_imag,
        max_gram_defect,
        max_residual,
        sup_norm_gap,
    })
}
