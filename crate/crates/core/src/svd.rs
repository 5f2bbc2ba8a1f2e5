//! Singular-value decomposition of an operator between two spaces.
//!
//! The decomposition is driven by the Hermitian eigenproblem of the smaller
//! of the two gram operators (`A^H A` on the domain side or `A A^H` on the
//! range side; both carry the same nonzero spectrum). The eigenvectors give
//! one orthonormal system and the other is produced by applying the operator
//! and renormalizing, which pairs the two systems triple by triple:
//! `A psi_n = s_n phi_n`.
//!
//! Triples whose singular value falls at or below `rel_tol` times the leading
//! one are dropped and counted, since the pairing divides by `s_n`. The order
//! of triples with exactly equal singular values is an implementation
//! artifact and not specified.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::operator::{HsMethod, Operator};
use crate::space::{CoeffVector, Space};
use crate::spectral::hermitian_eig;
use crate::util::{cart_inner, l2, tol_at, ABS_FLOOR};

/// Default rel_tol: convergence target and zero-singular-value cutoff.
pub const DEFAULT_SVD_REL_TOL: f64 = 1e-12;
/// Relative gap for flagging a pass in [`sum_rule_check`].
pub const SUM_RULE_GAP_TOL: f64 = 1e-8;

/// Ordered singular triples `(s_j, psi_j, phi_j)` with `A psi_j = s_j phi_j`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Nonnegative, nonincreasing.
    pub singular_values: Vec<f64>,
    /// Right system (domain side), orthonormal.
    pub right_vectors: Basis,
    /// Left system (range side), orthonormal.
    pub left_vectors: Basis,
    /// Requested triples dropped because their value fell below the cutoff.
    pub dropped: usize,
    /// Per-kept-triple convergence flags from the eigensolver.
    pub converged: Vec<bool>,
}

impl SvdResult {
    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }
}

/// Per-property outcome of [`verify_svd`].
#[derive(Clone, Debug)]
pub struct SvdReport {
    pub values_sorted: bool,
    pub right_orthonormal: bool,
    pub left_orthonormal: bool,
    pub pairing: bool,
    pub adjoint_pairing: bool,
    pub max_right_defect: f64,
    pub max_left_defect: f64,
    pub max_pairing_residual: f64,
    pub max_adjoint_residual: f64,
}

impl SvdReport {
    pub fn all_pass(&self) -> bool {
        self.values_sorted
            && self.right_orthonormal
            && self.left_orthonormal
            && self.pairing
            && self.adjoint_pairing
    }
}

/// Sum-rule comparison of the squared singular values against the squared
/// Hilbert-Schmidt norm.
#[derive(Clone, Copy, Debug)]
pub struct SumRuleReport {
    pub sum_s_squared: f64,
    pub hs_norm_squared: f64,
    /// Relative gap; defined as 0 for the zero operator.
    pub gap: f64,
    pub pass: bool,
}

/// Leading `k` singular triples of `a`.
pub fn svd(a: &Operator, k: usize, rel_tol: f64, seed: u64) -> Result<SvdResult> {
    if rel_tol <= 0.0 || !rel_tol.is_finite() {
        return Err(Error::BadTolerance(rel_tol));
    }
    let (rows, cols) = a.shape();
    let max_k = rows.min(cols);
    if k < 1 || k > max_k {
        return Err(Error::CountOutOfRange {
            requested: k,
            max: max_k,
        });
    }

    // drive the smaller gram operator
    let domain_side = cols <= rows;
    let adjoint = a.adjoint();
    let gram = if domain_side {
        adjoint.compose(a)?
    } else {
        a.compose(&adjoint)?
    };
    let eig = hermitian_eig(&gram, k, rel_tol, seed)?;

    let s1 = eig
        .eigenvalues
        .first()
        .map(|c| c.max(0.0).sqrt())
        .unwrap_or(0.0);
    let cutoff = rel_tol * s1;

    let mut singular_values = Vec::new();
    let mut right: Vec<Array1<Complex64>> = Vec::new();
    let mut left: Vec<Array1<Complex64>> = Vec::new();
    let mut converged = Vec::new();
    let mut dropped = 0usize;

    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        if s <= cutoff || s <= ABS_FLOOR {
            dropped += 1;
            continue;
        }
        let eigvec = eig.eigenvectors.vector(idx).as_array().clone();
        let (psi, phi) = if domain_side {
            let mut image = a.elements().dot(&eigvec).mapv(|z| z / s);
            reorthonormalize(&mut image, &left);
            (eigvec, image)
        } else {
            let mut image = adjoint.elements().dot(&eigvec).mapv(|z| z / s);
            reorthonormalize(&mut image, &right);
            (image, eigvec)
        };
        // joint phase: largest entry of psi real positive, phi rotated along
        let (psi, phi) = joint_phase(psi, phi);
        singular_values.push(s);
        right.push(psi);
        left.push(phi);
        converged.push(eig.converged[idx]);
    }

    let domain_space = Space::cartesian(cols)?;
    let range_space = Space::cartesian(rows)?;
    let right_vectors = Basis::new(
        domain_space,
        right
            .into_iter()
            .map(CoeffVector::from_array)
            .collect::<Result<_>>()?,
    )?;
    let left_vectors = Basis::new(
        range_space,
        left.into_iter()
            .map(CoeffVector::from_array)
            .collect::<Result<_>>()?,
    )?;

    Ok(SvdResult {
        singular_values,
        right_vectors,
        left_vectors,
        dropped,
        converged,
    })
}

/// Project `v` against the already accepted system and renormalize. Keeps
/// degenerate clusters orthonormal without re-phasing the vector.
fn reorthonormalize(v: &mut Array1<Complex64>, accepted: &[Array1<Complex64>]) {
    for _ in 0..2 {
        for u in accepted {
            let c = cart_inner(u, v);
            *v = &*v - &u.mapv(|z| z * c);
        }
    }
    let nrm = l2(v);
    if nrm > ABS_FLOOR {
        *v = v.mapv(|z| z / nrm);
    }
}

fn joint_phase(
    psi: Array1<Complex64>,
    phi: Array1<Complex64>,
) -> (Array1<Complex64>, Array1<Complex64>) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in psi.iter().enumerate() {
        if z.norm() > best_mag {
            best_mag = z.norm();
            best = i;
        }
    }
    if best_mag == 0.0 {
        return (psi, phi);
    }
    let u = (psi[best] / best_mag).conj();
    (psi.mapv(|z| z * u), phi.mapv(|z| z * u))
}

/// Assemble `sum_j s_j |phi_j><psi_j|`.
pub fn svd_reconstruct(r: &SvdResult) -> Result<Operator> {
    let domain = r.right_vectors.space().clone();
    let range = r.left_vectors.space().clone();
    let mut acc: Array2<Complex64> = Array2::zeros((range.dim(), domain.dim()));
    for ((s, psi), phi) in r
        .singular_values
        .iter()
        .zip(r.right_vectors.vectors())
        .zip(r.left_vectors.vectors())
    {
        let p = psi.as_array();
        let f = phi.as_array();
        for j in 0..range.dim() {
            for t in 0..domain.dim() {
                acc[[j, t]] += Complex64::new(*s, 0.0) * f[j] * p[t].conj();
            }
        }
    }
    Operator::new(domain, range, acc)
}

/// Factored form `(V, D, U)` with `A = V D U^H`: columns of `U` are the right
/// vectors, columns of `V` the left vectors, `D` diagonal with the singular
/// values. Dimensions are trimmed to the kept rank.
pub fn to_factored_form(r: &SvdResult) -> Result<(Operator, Operator, Operator)> {
    let rank = r.singular_values.len();
    if rank == 0 {
        return Err(Error::EmptyDecomposition);
    }
    let coeff_space = Space::cartesian(rank)?;
    let domain = r.right_vectors.space().clone();
    let range = r.left_vectors.space().clone();

    let mut u: Array2<Complex64> = Array2::zeros((domain.dim(), rank));
    for (j, psi) in r.right_vectors.vectors().iter().enumerate() {
        for i in 0..domain.dim() {
            u[[i, j]] = psi.entry(i);
        }
    }
    let mut v: Array2<Complex64> = Array2::zeros((range.dim(), rank));
    for (j, phi) in r.left_vectors.vectors().iter().enumerate() {
        for i in 0..range.dim() {
            v[[i, j]] = phi.entry(i);
        }
    }
    let mut d: Array2<Complex64> = Array2::zeros((rank, rank));
    for (j, s) in r.singular_values.iter().enumerate() {
        d[[j, j]] = Complex64::new(*s, 0.0);
    }

    Ok((
        Operator::new(coeff_space.clone(), range, v)?,
        Operator::new(coeff_space.clone(), coeff_space.clone(), d)?,
        Operator::new(coeff_space, domain, u)?,
    ))
}

/// Compare `sum_j s_j^2` against `||A||_HS^2`; the two agree at full rank.
pub fn sum_rule_check(r: &SvdResult, a: &Operator) -> SumRuleReport {
    let sum_s_squared: f64 = r.singular_values.iter().map(|s| s * s).sum();
    let hs = a.hs_norm(HsMethod::EntrySquares);
    let hs_norm_squared = hs * hs;
    let gap = if hs_norm_squared <= ABS_FLOOR {
        0.0
    } else {
        (sum_s_squared - hs_norm_squared).abs() / hs_norm_squared
    };
    SumRuleReport {
        sum_s_squared,
        hs_norm_squared,
        gap,
        pass: gap <= SUM_RULE_GAP_TOL,
    }
}

/// Check the invariants of a decomposition against its operator: sorted
/// nonnegative values, orthonormal systems on both sides, and the pairing
/// relations `A psi = s phi` and `A^H phi = s psi`.
///
/// Pairing is certified for triples with `s_n >= sqrt(tol) * s_1`. Below
/// that, the gram eigenproblem the decomposition is built on cannot separate
/// the triple from rounding noise at the requested tolerance, so no pairing
/// statement is provable either way.
pub fn verify_svd(a: &Operator, r: &SvdResult, tol: f64) -> Result<SvdReport> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::BadTolerance(tol));
    }
    let (rows, cols) = a.shape();
    if r.right_vectors.space().dim() != cols || r.left_vectors.space().dim() != rows {
        return Err(Error::DimensionMismatch {
            context: "decomposition against operator",
            expected: rows * cols,
            found: r.right_vectors.space().dim() * r.left_vectors.space().dim(),
        });
    }

    let mut values_sorted = true;
    for w in r.singular_values.windows(2) {
        if w[1] > w[0] {
            values_sorted = false;
        }
    }
    if r.singular_values.iter().any(|&s| s < 0.0) {
        values_sorted = false;
    }

    let s1 = r.singular_values.first().copied().unwrap_or(0.0);
    let max_right_defect = r.right_vectors.gram_defect()?;
    let max_left_defect = r.left_vectors.gram_defect()?;

    let adjoint = a.adjoint();
    let certifiable = tol.sqrt() * s1;
    let mut max_pairing_residual = 0.0f64;
    let mut max_adjoint_residual = 0.0f64;
    for ((s, psi), phi) in r
        .singular_values
        .iter()
        .zip(r.right_vectors.vectors())
        .zip(r.left_vectors.vectors())
    {
        if *s < certifiable {
            continue;
        }
        let apsi = a.elements().dot(psi.as_array());
        let target = phi.as_array().mapv(|z| z * Complex64::new(*s, 0.0));
        max_pairing_residual = max_pairing_residual.max(l2(&(&apsi - &target)));

        let aphi = adjoint.elements().dot(phi.as_array());
        let target = psi.as_array().mapv(|z| z * Complex64::new(*s, 0.0));
        max_adjoint_residual = max_adjoint_residual.max(l2(&(&aphi - &target)));
    }

    let scale = tol_at(s1, tol);
    Ok(SvdReport {
        values_sorted,
        right_orthonormal: max_right_defect <= tol,
        left_orthonormal: max_left_defect <= tol,
        pairing: max_pairing_residual <= scale,
        adjoint_pairing: max_adjoint_residual <= scale,
        max_right_defect,
        max_left_defect,
        max_pairing_residual,
        max_adjoint_residual,
    })
}
