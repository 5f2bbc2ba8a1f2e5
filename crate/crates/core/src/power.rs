//! Iterative extraction of extremal Hermitian eigenpairs.
//!
//! The workhorse is a shifted power iteration: iterating on `sign * H + sigma * I`
//! with `sigma` an upper bound of the supremum norm makes the shifted spectrum
//! nonnegative, so the iteration converges to the algebraically largest (sign = +1)
//! or smallest (sign = -1) eigenvalue of `H` and the sign ambiguity of the extremal
//! eigenvalue is resolved by comparing the two runs. A few Rayleigh-quotient
//! iteration steps polish the pair afterwards; plain power iteration stalls when
//! the relative spectral gap is small.

use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::util::{cart_inner, l2, ABS_FLOOR};

/// Iterate collapse threshold below which a fresh start vector is drawn.
const COLLAPSE_FLOOR: f64 = 1e-14;
/// Power-phase iterations before handing over to Rayleigh-quotient polish.
const POWER_PHASE_CAP: usize = 500;
/// Rayleigh-quotient iteration steps per extraction.
const RQI_CAP: usize = 10;
/// Consecutive stagnant Rayleigh quotients that end the power phase early.
const STAGNATION_RUNS: usize = 3;

pub(crate) struct Extremal {
    pub value: f64,
    pub vector: Array1<Complex64>,
    pub converged: bool,
    pub iterations: usize,
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Array1<Complex64> {
    loop {
        let v = Array1::from_shape_fn(n, |_| {
            Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        });
        let nrm = l2(&v);
        if nrm > 1e-3 {
            return v.mapv(|z| z / nrm);
        }
    }
}

/// Remove the components of `v` along each (orthonormal) vector in `orth`.
/// Two passes keep the result orthogonal to working precision.
pub(crate) fn project_out(orth: &[Array1<Complex64>], v: &mut Array1<Complex64>) {
    for _ in 0..2 {
        for u in orth {
            let c = cart_inner(u, v);
            *v = &*v - &u.mapv(|z| z * c);
        }
    }
}

fn rayleigh_and_residual(h: &ArrayView2<Complex64>, v: &Array1<Complex64>) -> (f64, f64) {
    let hv = h.dot(v);
    let lam = cart_inner(v, &hv).re;
    let res = l2(&(&hv - &v.mapv(|z| z * lam)));
    (lam, res)
}

/// One shifted power-iteration run converging towards the algebraically
/// largest eigenvalue of `sign * H` restricted to the complement of `orth`.
fn power_run(
    h: &ArrayView2<Complex64>,
    orth: &[Array1<Complex64>],
    sign: f64,
    sigma: f64,
    tol_abs: f64,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, Array1<Complex64>, f64, usize) {
    let n = h.nrows();
    let mut v = random_unit(rng, n);
    project_out(orth, &mut v);
    let nrm = l2(&v);
    if nrm > COLLAPSE_FLOOR {
        v = v.mapv(|z| z / nrm);
    }
    let mut prev = f64::NAN;
    let mut stagnant = 0usize;
    let mut best = (0.0f64, v.clone(), f64::INFINITY);
    let mut iters = 0usize;

    for it in 0..cap.min(POWER_PHASE_CAP) {
        iters = it + 1;
        let hv = h.dot(&v);
        let mut w = hv.mapv(|z| z * sign) + &v.mapv(|z| z * sigma);
        project_out(orth, &mut w);
        let nw = l2(&w);
        if nw < COLLAPSE_FLOOR * sigma.max(1.0) {
            v = random_unit(rng, n);
            project_out(orth, &mut v);
            let nv = l2(&v);
            if nv > COLLAPSE_FLOOR {
                v = v.mapv(|z| z / nv);
            }
            prev = f64::NAN;
            stagnant = 0;
            continue;
        }
        v = w.mapv(|z| z / nw);
        let (lam, res) = rayleigh_and_residual(h, &v);
        if res < best.2 {
            best = (lam, v.clone(), res);
        }
        if res <= tol_abs {
            return (lam, v, res, iters);
        }
        if prev.is_finite() && (lam - prev).abs() <= 1e-13 * lam.abs().max(sigma) {
            stagnant += 1;
            if stagnant >= STAGNATION_RUNS {
                break;
            }
        } else {
            stagnant = 0;
        }
        prev = lam;
    }
    (best.0, best.1, best.2, iters)
}

/// Rayleigh-quotient iteration polish of a candidate eigenpair. Runs down to
/// the machine-level floor rather than the requested tolerance; the extra
/// accuracy is nearly free (cubic convergence) and keeps deflation noise and
/// downstream pairing corrections at rounding level.
fn rqi_polish(
    h: &ArrayView2<Complex64>,
    orth: &[Array1<Complex64>],
    mut value: f64,
    mut vector: Array1<Complex64>,
    mut residual: f64,
    sigma: f64,
) -> (f64, Array1<Complex64>, f64, usize) {
    let n = h.nrows();
    let floor = f64::EPSILON * sigma * n as f64;
    let mut steps = 0usize;
    for _ in 0..RQI_CAP {
        if residual <= floor {
            break;
        }
        steps += 1;
        let mut shifted = h.to_owned();
        for i in 0..n {
            shifted[[i, i]] -= Complex64::new(value, 0.0);
        }
        let x = match lu_solve(&shifted, &vector) {
            Some(x) => x,
            None => {
                // exact-shift singularity: jitter once and retry
                let jitter = 1e-13 * value.abs().max(sigma).max(1.0);
                for i in 0..n {
                    shifted[[i, i]] -= Complex64::new(jitter, 0.0);
                }
                match lu_solve(&shifted, &vector) {
                    Some(x) => x,
                    None => break,
                }
            }
        };
        let mut x = x;
        project_out(orth, &mut x);
        let nx = l2(&x);
        if nx < ABS_FLOOR || !nx.is_finite() {
            break;
        }
        let candidate = x.mapv(|z| z / nx);
        let (lam, res) = rayleigh_and_residual(h, &candidate);
        if res >= residual {
            break;
        }
        vector = candidate;
        value = lam;
        residual = res;
    }
    (value, vector, residual, steps)
}

/// Extremal (largest-magnitude) eigenpair of a Hermitian matrix restricted to
/// the orthogonal complement of `orth`. Magnitude ties resolve to the positive
/// eigenvalue.
pub(crate) fn extremal_hermitian(
    h: &ArrayView2<Complex64>,
    orth: &[Array1<Complex64>],
    sigma: f64,
    tol_abs: f64,
    max_iters: usize,
    rng: &mut ChaCha8Rng,
) -> Extremal {
    let n = h.nrows();
    if sigma <= ABS_FLOOR {
        // numerically zero restriction: any unit vector in the complement works
        let vector = completion_vector(orth, n, rng);
        return Extremal {
            value: 0.0,
            vector,
            converged: true,
            iterations: 0,
        };
    }

    let cap = max_iters.max(1);
    let (hi_val, hi_vec, hi_res, hi_it) = power_run(h, orth, 1.0, sigma, tol_abs, cap, rng);
    let (lo_val, lo_vec, lo_res, lo_it) = power_run(h, orth, -1.0, sigma, tol_abs, cap, rng);
    let mut iterations = hi_it + lo_it;

    // descending magnitude, positive first on ties
    let take_hi = if (hi_val.abs() - lo_val.abs()).abs() <= 1e-12 * sigma {
        hi_val >= lo_val
    } else {
        hi_val.abs() > lo_val.abs()
    };
    let (value, vector, residual) = if take_hi {
        (hi_val, hi_vec, hi_res)
    } else {
        (lo_val, lo_vec, lo_res)
    };

    let (value, vector, residual, rqi_steps) = rqi_polish(h, orth, value, vector, residual, sigma);
    iterations += rqi_steps;

    Extremal {
        value,
        vector,
        converged: residual <= tol_abs,
        iterations,
    }
}

/// Smallest and largest algebraic eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_extremes(h: &ArrayView2<Complex64>, seed: u64) -> (f64, f64) {
    let sigma = crate::util::frob(&h.to_owned());
    if sigma <= ABS_FLOOR {
        return (0.0, 0.0);
    }
    let tol_abs = 1e-12 * sigma;
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let (hi, hv, hr, _) = power_run(h, &[], 1.0, sigma, tol_abs, 10_000, &mut rng);
    let (hi, _, _, _) = rqi_polish(h, &[], hi, hv, hr, sigma);
    let (lo, lv, lr, _) = power_run(h, &[], -1.0, sigma, tol_abs, 10_000, &mut rng);
    let (lo, _, _, _) = rqi_polish(h, &[], lo, lv, lr, sigma);
    (lo, hi)
}

/// First canonical unit vector with a usable component orthogonal to `orth`.
pub(crate) fn completion_vector(
    orth: &[Array1<Complex64>],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Array1<Complex64> {
    for i in 0..n {
        let mut e: Array1<Complex64> = Array1::zeros(n);
        e[i] = Complex64::new(1.0, 0.0);
        project_out(orth, &mut e);
        let nrm = l2(&e);
        if nrm > 0.5 {
            return e.mapv(|z| z / nrm);
        }
    }
    // orth nearly spans the space; fall back to a random remainder
    loop {
        let mut v = random_unit(rng, n);
        project_out(orth, &mut v);
        let nrm = l2(&v);
        if nrm > COLLAPSE_FLOOR {
            return v.mapv(|z| z / nrm);
        }
    }
}

/// Dense complex solve by LU with partial pivoting. Returns `None` when a
/// pivot vanishes or the solution overflows.
pub(crate) fn lu_solve(a: &Array2<Complex64>, b: &Array1<Complex64>) -> Option<Array1<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return None;
    }
    let mut m = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = m[[col, col]].norm();
        for r in (col + 1)..n {
            let mag = m[[r, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag <= ABS_FLOOR {
            return None;
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = m[[col, c]];
                m[[col, c]] = m[[pivot_row, c]];
                m[[pivot_row, c]] = tmp;
            }
            let tmp = x[col];
            x[col] = x[pivot_row];
            x[pivot_row] = tmp;
        }
        let pivot = m[[col, col]];
        for r in (col + 1)..n {
            let factor = m[[r, col]] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[[col, c]];
                m[[r, c]] -= factor * v;
            }
            let xc = x[col];
            x[r] -= factor * xc;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for c in (col + 1)..n {
            acc -= m[[col, c]] * x[c];
        }
        x[col] = acc / m[[col, col]];
        if !crate::util::is_finite_c(x[col]) {
            return None;
        }
    }
    Some(x)
}
