//! Reference solvers and random generators shared by the workspace test suites.
//!
//! Everything here is deliberately independent of the `opspace` crate: the
//! eigensolver is a cyclic complex Jacobi iteration and the SVD is a one-sided
//! Jacobi orthogonalization, so they share no code path with the power-iteration
//! and deflation routines they are used to check.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex vector with re/im entries uniform in [-1, 1].
pub fn complex_vector(rng: &mut ChaCha8Rng, n: usize) -> Array1<Complex64> {
    Array1::from_shape_fn(n, |_| {
        Complex64::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        )
    })
}

/// Complex matrix with re/im entries uniform in [-1, 1].
pub fn complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((rows, cols), |_| {
        Complex64::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        )
    })
}

/// Random Hermitian matrix built as (M + M^H) / 2.
pub fn hermitian_matrix(rng: &mut ChaCha8Rng, n: usize) -> Array2<Complex64> {
    let m = complex_matrix(rng, n, n);
    let mh = m.t().mapv(|z| z.conj());
    (&m + &mh).mapv(|z| 0.5 * z)
}

/// Random Hermitian positive definite matrix, M^H M + delta * I.
pub fn hpd_matrix(rng: &mut ChaCha8Rng, n: usize, delta: f64) -> Array2<Complex64> {
    let m = complex_matrix(rng, n, n);
    let mh = m.t().mapv(|z| z.conj());
    let mut g = mh.dot(&m);
    for i in 0..n {
        g[[i, i]] += Complex64::new(delta, 0.0);
    }
    g
}

/// Random unitary matrix from Gram-Schmidt on a random complex matrix.
///
/// Columns are re-drawn if a degenerate (numerically dependent) draw occurs,
/// so the result is always exactly n columns.
pub fn unitary_matrix(rng: &mut ChaCha8Rng, n: usize) -> Array2<Complex64> {
    let mut q: Vec<Array1<Complex64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut v = complex_vector(rng, n);
        for w in &q {
            let proj: Complex64 = w.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            v = &v - &w.mapv(|z| z * proj);
        }
        // second pass keeps the columns orthogonal to machine precision
        for w in &q {
            let proj: Complex64 = w.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            v = &v - &w.mapv(|z| z * proj);
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            q.push(v.mapv(|z| z / nrm));
        }
    }
    let mut u = Array2::zeros((n, n));
    for (j, col) in q.iter().enumerate() {
        for i in 0..n {
            u[[i, j]] = col[i];
        }
    }
    u
}

/// Hermitian positive definite matrix with eigenvalues drawn uniformly from
/// `[min_eig, max_eig]`, built as `U D U^H` from a random unitary.
pub fn hpd_well_conditioned(
    rng: &mut ChaCha8Rng,
    n: usize,
    min_eig: f64,
    max_eig: f64,
) -> Array2<Complex64> {
    let u = unitary_matrix(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| min_eig + (max_eig - min_eig) * rng.random::<f64>())
        .collect();
    let mut scaled = u.clone();
    for j in 0..n {
        for i in 0..n {
            scaled[[i, j]] *= d[j];
        }
    }
    scaled.dot(&u.t().mapv(|z| z.conj()))
}

/// Rectangular matrix (rows >= cols) with full column rank and singular
/// values drawn uniformly from `[min_sv, max_sv]`.
pub fn full_column_rank(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    min_sv: f64,
    max_sv: f64,
) -> Array2<Complex64> {
    assert!(rows >= cols, "full_column_rank needs rows >= cols");
    let u = unitary_matrix(rng, rows);
    let v = unitary_matrix(rng, cols);
    let mut core = Array2::<Complex64>::zeros((rows, cols));
    for j in 0..cols {
        core[[j, j]] = Complex64::new(min_sv + (max_sv - min_sv) * rng.random::<f64>(), 0.0);
    }
    u.dot(&core).dot(&v.t().mapv(|z| z.conj()))
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns values sorted by descending magnitude with matching
/// eigenvector columns.
pub fn jacobi_hermitian_eig(h: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "jacobi_hermitian_eig needs a square matrix");
    let mut a = h.clone();
    let mut v: Array2<Complex64> = Array2::eye(n);
    let scale = frob(&a).max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let phi = apq.arg();
                let g = apq.norm();
                let theta = 0.5 * (2.0 * g).atan2(app - aqq);
                let (c, s) = (theta.cos(), theta.sin());
                // J = [[c, -s], [s e^{-i phi}, c e^{-i phi}]] zeroes the (p,q) entry
                let e = Complex64::from_polar(1.0, -phi);
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(-s, 0.0);
                let jqp = e * s;
                let jqq = e * c;
                // columns: A <- A J
                for i in 0..n {
                    let aip = a[[i, p]];
                    let aiq = a[[i, q]];
                    a[[i, p]] = aip * jpp + aiq * jqp;
                    a[[i, q]] = aip * jpq + aiq * jqq;
                }
                // rows: A <- J^H A
                for i in 0..n {
                    let api = a[[p, i]];
                    let aqi = a[[q, i]];
                    a[[p, i]] = jpp.conj() * api + jqp.conj() * aqi;
                    a[[q, i]] = jpq.conj() * api + jqq.conj() * aqi;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * jpp + viq * jqp;
                    v[[i, q]] = vip * jpq + viq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| a[[i, i]].re).collect();
    order.sort_by(|&i, &j| {
        vals[j]
            .abs()
            .partial_cmp(&vals[i].abs())
            .unwrap()
            .then(vals[j].partial_cmp(&vals[i]).unwrap())
    });
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs = Array2::zeros((n, n));
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            sorted_vecs[[r, k]] = v[[r, i]];
        }
    }
    (sorted_vals, sorted_vecs)
}

/// Singular values (descending) with left and right singular vectors, by
/// one-sided Jacobi orthogonalization of the columns.
pub fn jacobi_svd(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>, Array2<Complex64>) {
    let (m, n) = a.dim();
    if m < n {
        let ah = a.t().mapv(|z| z.conj());
        let (s, u, v) = jacobi_svd(&ah);
        return (s, v, u);
    }
    let mut w = a.clone();
    let mut v: Array2<Complex64> = Array2::eye(n);
    let scale = frob(&w).max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    app += w[[i, p]].norm_sqr();
                    aqq += w[[i, q]].norm_sqr();
                    apq += w[[i, p]].conj() * w[[i, q]];
                }
                if apq.norm() <= 1e-15 * (app * aqq).sqrt().max(1e-30 * scale * scale) {
                    continue;
                }
                rotated = true;
                let phi = apq.arg();
                let g = apq.norm();
                let theta = 0.5 * (2.0 * g).atan2(app - aqq);
                let (c, s) = (theta.cos(), theta.sin());
                let e = Complex64::from_polar(1.0, -phi);
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(-s, 0.0);
                let jqp = e * s;
                let jqq = e * c;
                for i in 0..m {
                    let wip = w[[i, p]];
                    let wiq = w[[i, q]];
                    w[[i, p]] = wip * jpp + wiq * jqp;
                    w[[i, q]] = wip * jpq + wiq * jqq;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * jpp + viq * jqp;
                    v[[i, q]] = vip * jpq + viq * jqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut svals: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[[i, j]].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svals[j].partial_cmp(&svals[i]).unwrap());
    let mut u = Array2::zeros((m, n));
    let mut vr = Array2::zeros((n, n));
    for (k, &j) in order.iter().enumerate() {
        let s = svals[j];
        if s > 1e-300 {
            for i in 0..m {
                u[[i, k]] = w[[i, j]] / s;
            }
        }
        for i in 0..n {
            vr[[i, k]] = v[[i, j]];
        }
    }
    svals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    (svals, u, vr)
}

/// Midpoint-rule double integral of f over [a0, a1] x [b0, b1] with n points
/// per side.
pub fn midpoint_double_integral<F>(f: F, a: (f64, f64), b: (f64, f64), n: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let hx = (a.1 - a.0) / n as f64;
    let hy = (b.1 - b.0) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let x = a.0 + (i as f64 + 0.5) * hx;
        for j in 0..n {
            let y = b.0 + (j as f64 + 0.5) * hy;
            total += f(x, y);
        }
    }
    total * hx * hy
}

fn frob(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[(f64, f64)]]) -> Array2<Complex64> {
        let m = rows.len();
        let n = rows[0].len();
        Array2::from_shape_fn((m, n), |(i, j)| Complex64::new(rows[i][j].0, rows[i][j].1))
    }

    #[test]
    fn jacobi_eig_matches_known_spectrum() {
        // pauli-x: eigenvalues +1, -1
        let h = mat(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]);
        let (vals, vecs) = jacobi_hermitian_eig(&h);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] + 1.0).abs() < 1e-12);
        // residual check H v = lambda v
        for k in 0..2 {
            for i in 0..2 {
                let hv: Complex64 = (0..2).map(|j| h[[i, j]] * vecs[[j, k]]).sum();
                assert!((hv - vecs[[i, k]] * vals[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_eig_random_residuals() {
        let mut r = rng(7);
        for _ in 0..20 {
            let n = 2 + (r.random::<u32>() % 7) as usize;
            let h = hermitian_matrix(&mut r, n);
            let (vals, vecs) = jacobi_hermitian_eig(&h);
            let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-30);
            for k in 0..n {
                let mut res = 0.0f64;
                for i in 0..n {
                    let hv: Complex64 = (0..n).map(|j| h[[i, j]] * vecs[[j, k]]).sum();
                    res += (hv - vecs[[i, k]] * vals[k]).norm_sqr();
                }
                assert!(res.sqrt() <= 1e-11 * scale, "residual {}", res.sqrt());
            }
        }
    }

    #[test]
    fn jacobi_svd_reconstructs() {
        let mut r = rng(11);
        for &(m, n) in &[(3usize, 5usize), (6, 4), (4, 4), (1, 3)] {
            let a = complex_matrix(&mut r, m, n);
            let (s, u, v) = jacobi_svd(&a);
            let k = m.min(n);
            // A ~= U S V^H over the leading k triples
            let mut rec = Array2::<Complex64>::zeros((m, n));
            for t in 0..k {
                for i in 0..m {
                    for j in 0..n {
                        rec[[i, j]] += u[[i, t]] * s[t] * v[[j, t]].conj();
                    }
                }
            }
            let err = frob(&(&a - &rec));
            assert!(
                err <= 1e-10 * frob(&a).max(1.0),
                "svd reconstruct err {err}"
            );
            for t in 1..k {
                assert!(s[t] <= s[t - 1] + 1e-12);
            }
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(3);
        let u = unitary_matrix(&mut r, 6);
        let uh = u.t().mapv(|z| z.conj());
        let prod = uh.dot(&u);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[[i, j]] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn midpoint_integral_converges() {
        // integral of 1/(y-x)^2 over [0,1]x[2,3] = ln(4/3)
        let exact = (4.0f64 / 3.0).ln();
        let approx = midpoint_double_integral(
            |x, y| 1.0 / ((y - x) * (y - x)),
            (0.0, 1.0),
            (2.0, 3.0),
            256,
        );
        assert!((approx - exact).abs() < 1e-5);
    }
}
