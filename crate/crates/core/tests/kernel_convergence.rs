//! Sum-rule convergence of the discretized Helmholtz kernel under grid
//! refinement, checked against a high-resolution quadrature of the squared
//! kernel magnitude.

use opspace::kernel::{discretize, GridSpec, KernelSpec, QuadRule};
use opspace::operator::HsMethod;
use opspace::svd::{sum_rule_check, svd};

const WAVENUMBER: f64 = 10.0;
const SOURCE: (f64, f64) = (0.0, 1.0);
const RECEIVER: (f64, f64) = (2.0, 3.0);

fn oracle_integral() -> f64 {
    // |G|^2 = 1 / (x2 - x1)^2 for the unit-amplitude Helmholtz kernel
    opspace_testkit::midpoint_double_integral(
        |x1, x2| 1.0 / ((x2 - x1) * (x2 - x1)),
        SOURCE,
        RECEIVER,
        512,
    )
}

fn hs_squared(points: usize) -> f64 {
    let source = GridSpec::new(SOURCE.0, SOURCE.1, points, QuadRule::Midpoint).unwrap();
    let receiver = GridSpec::new(RECEIVER.0, RECEIVER.1, points, QuadRule::Midpoint).unwrap();
    let disc = discretize(
        &KernelSpec::Helmholtz1D {
            wavenumber: WAVENUMBER,
        },
        &source,
        &receiver,
    )
    .unwrap();
    let hs = disc.op.hs_norm(HsMethod::EntrySquares);
    hs * hs
}

#[test]
fn sum_rule_error_shrinks_monotonically_under_refinement() {
    let exact = oracle_integral();
    let errors: Vec<f64> = [8usize, 16, 32]
        .iter()
        .map(|&n| (hs_squared(n) - exact).abs())
        .collect();
    assert!(
        errors[1] < errors[0] && errors[2] < errors[1],
        "errors not monotone: {errors:?}"
    );
    // 32 points per side lands within 1% of the 512-point oracle
    assert!(
        errors[2] <= 0.01 * exact,
        "32-point error {} vs oracle {exact}",
        errors[2]
    );
}

#[test]
fn helmholtz_channels_decay() {
    let source = GridSpec::new(SOURCE.0, SOURCE.1, 32, QuadRule::Midpoint).unwrap();
    let receiver = GridSpec::new(RECEIVER.0, RECEIVER.1, 32, QuadRule::Midpoint).unwrap();
    let disc = discretize(
        &KernelSpec::Helmholtz1D {
            wavenumber: WAVENUMBER,
        },
        &source,
        &receiver,
    )
    .unwrap();
    let r = svd(&disc.op, 10, 1e-12, 1).unwrap();
    assert!(r.len() >= 8, "kept {} triples", r.len());
    for w in r.singular_values.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12));
    }
    let ratio = r.singular_values[7] / r.singular_values[0];
    assert!(ratio < 0.9, "s8/s1 = {ratio}");

    let full = svd(&disc.op, 32, 1e-12, 1).unwrap();
    let report = sum_rule_check(&full, &disc.op);
    assert!(report.pass, "sum-rule gap {}", report.gap);
}
