//! Discretization of continuous integral kernels into operator matrices.
//!
//! A [`GridSpec`] carries a 1D interval with a midpoint or trapezoid
//! quadrature rule; its weights define a diagonally weighted space in which
//! the discrete inner product approximates `integral conj(f) g dx`.
//!
//! [`discretize`] assembles the matrix entry as
//! `sqrt(w2_j) * G(x2_j; x1_k) * sqrt(w1_k)`, absorbing the quadrature
//! weights on both sides. The stored matrix therefore lives in the shifted
//! (Cartesian) coordinates of the weighted spaces, its application reproduces
//! the quadrature of `integral G(x2; x1) f(x1) dx1` at the receiver nodes, and
//! its squared Hilbert-Schmidt norm equals the double quadrature of `|G|^2`
//! exactly.
//!
//! The built-in kernel is the 1D Helmholtz Green's function
//! `exp(ik|x2 - x1|) / |x2 - x1|` (proportionality constant fixed to 1);
//! its singularity is excluded by requiring a positive gap between the source
//! and receiver intervals rather than regularized.

use ndarray::Array2;
use num_complex::Complex64;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::{CoeffVector, Space};
use crate::util::mat_finite;

/// Quadrature rule attached to a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    Midpoint,
    Trapezoid,
}

impl QuadRule {
    pub fn name(&self) -> &'static str {
        match self {
            QuadRule::Midpoint => "midpoint",
            QuadRule::Trapezoid => "trapezoid",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "midpoint" => Some(QuadRule::Midpoint),
            "trapezoid" => Some(QuadRule::Trapezoid),
            _ => None,
        }
    }
}

impl fmt::Display for QuadRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A 1D interval with node count and quadrature rule.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    lower: f64,
    upper: f64,
    points: usize,
    rule: QuadRule,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, points: usize, rule: QuadRule) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::NonFinite {
                context: "grid bounds",
            });
        }
        if lower >= upper {
            return Err(Error::BadGridBounds { lower, upper });
        }
        if points == 0 {
            return Err(Error::Empty { context: "grid" });
        }
        if rule == QuadRule::Trapezoid && points < 2 {
            return Err(Error::TooFewPoints { points });
        }
        Ok(Self {
            lower,
            upper,
            points,
            rule,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn rule(&self) -> QuadRule {
        self.rule
    }

    /// Node positions of the quadrature rule.
    pub fn nodes(&self) -> Vec<f64> {
        match self.rule {
            QuadRule::Midpoint => {
                let h = (self.upper - self.lower) / self.points as f64;
                (0..self.points)
                    .map(|i| self.lower + (i as f64 + 0.5) * h)
                    .collect()
            }
            QuadRule::Trapezoid => {
                let h = (self.upper - self.lower) / (self.points - 1) as f64;
                (0..self.points)
                    .map(|i| self.lower + i as f64 * h)
                    .collect()
            }
        }
    }

    /// Quadrature weights; all strictly positive.
    pub fn weights(&self) -> Vec<f64> {
        match self.rule {
            QuadRule::Midpoint => {
                let h = (self.upper - self.lower) / self.points as f64;
                vec![h; self.points]
            }
            QuadRule::Trapezoid => {
                let h = (self.upper - self.lower) / (self.points - 1) as f64;
                (0..self.points)
                    .map(|i| {
                        if i == 0 || i == self.points - 1 {
                            0.5 * h
                        } else {
                            h
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Complex kernel samples on a receiver-by-source grid pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedKernel {
    samples: Array2<Complex64>,
    row_grid: GridSpec,
    col_grid: GridSpec,
}

impl TabulatedKernel {
    /// Rows index the receiver (row) grid, columns the source (column) grid.
    pub fn new(samples: Array2<Complex64>, row_grid: GridSpec, col_grid: GridSpec) -> Result<Self> {
        let (rows, cols) = samples.dim();
        if rows != row_grid.points() || cols != col_grid.points() {
            return Err(Error::SampleShapeMismatch {
                rows,
                cols,
                expected_rows: row_grid.points(),
                expected_cols: col_grid.points(),
            });
        }
        if !mat_finite(&samples) {
            return Err(Error::NonFinite {
                context: "kernel samples",
            });
        }
        Ok(Self {
            samples,
            row_grid,
            col_grid,
        })
    }

    pub fn samples(&self) -> &Array2<Complex64> {
        &self.samples
    }

    pub fn row_grid(&self) -> &GridSpec {
        &self.row_grid
    }

    pub fn col_grid(&self) -> &GridSpec {
        &self.col_grid
    }
}

/// A continuous kernel to discretize.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    /// `exp(ik|x2 - x1|)/|x2 - x1|` with wavenumber `k > 0`.
    Helmholtz1D {
        wavenumber: f64,
    },
    Tabulated(TabulatedKernel),
}

/// An operator matrix together with the quadrature-weighted spaces it
/// connects and the grids that generated them.
#[derive(Clone, Debug)]
pub struct DiscretizedOperator {
    /// Matrix in shifted coordinates (square-root weights absorbed).
    pub op: Operator,
    pub source_space: Space,
    pub receiver_space: Space,
    pub source_grid: GridSpec,
    pub receiver_grid: GridSpec,
}

/// Which side of a discretized operator a vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Receiver,
}

impl DiscretizedOperator {
    fn side_weights(&self, side: Side) -> Vec<f64> {
        match side {
            Side::Source => self.source_grid.weights(),
            Side::Receiver => self.receiver_grid.weights(),
        }
    }

    /// Node samples -> shifted coordinates (multiply by sqrt weights).
    pub fn shift_from_node(&self, side: Side, v: &CoeffVector) -> Result<CoeffVector> {
        let weights = self.side_weights(side);
        if v.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                context: "node vector against grid",
                expected: weights.len(),
                found: v.len(),
            });
        }
        CoeffVector::new(
            v.iter()
                .zip(weights.iter())
                .map(|(z, w)| z * w.sqrt())
                .collect(),
        )
    }

    /// Shifted coordinates -> node samples (divide by sqrt weights).
    pub fn node_from_shift(&self, side: Side, v: &CoeffVector) -> Result<CoeffVector> {
        let weights = self.side_weights(side);
        if v.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                context: "shifted vector against grid",
                expected: weights.len(),
                found: v.len(),
            });
        }
        CoeffVector::new(
            v.iter()
                .zip(weights.iter())
                .map(|(z, w)| z / w.sqrt())
                .collect(),
        )
    }
}

/// Diagonally weighted space whose weights are the grid's quadrature weights.
pub fn make_weighted_space(grid: &GridSpec) -> Space {
    Space::diagonal_weighted(grid.weights()).expect("grid weights are positive and finite")
}

/// 1D Helmholtz Green's function `exp(ik|x2 - x1|)/|x2 - x1|`.
pub fn helmholtz1d(k: f64, x2: f64, x1: f64) -> Result<Complex64> {
    if !k.is_finite() || !x2.is_finite() || !x1.is_finite() {
        return Err(Error::NonFinite {
            context: "kernel arguments",
        });
    }
    let r = (x2 - x1).abs();
    if r == 0.0 {
        return Err(Error::CoincidentPoints { x: x1 });
    }
    Ok(Complex64::from_polar(1.0, k * r) / r)
}

fn intervals_disjoint(a: &GridSpec, b: &GridSpec) -> bool {
    a.upper() < b.lower() || b.upper() < a.lower()
}

/// Assemble the quadrature-weighted matrix of a kernel between a source grid
/// (columns) and a receiver grid (rows).
pub fn discretize(
    kernel: &KernelSpec,
    source: &GridSpec,
    receiver: &GridSpec,
) -> Result<DiscretizedOperator> {
    let sw = source.weights();
    let rw = receiver.weights();
    let samples: Array2<Complex64> = match kernel {
        KernelSpec::Helmholtz1D { wavenumber } => {
            if *wavenumber <= 0.0 || !wavenumber.is_finite() {
                return Err(Error::BadWavenumber(*wavenumber));
            }
            if !intervals_disjoint(source, receiver) {
                return Err(Error::OverlappingIntervals);
            }
            let sn = source.nodes();
            let rn = receiver.nodes();
            let mut out = Array2::zeros((receiver.points(), source.points()));
            for (j, &x2) in rn.iter().enumerate() {
                for (k, &x1) in sn.iter().enumerate() {
                    out[[j, k]] = helmholtz1d(*wavenumber, x2, x1)?;
                }
            }
            out
        }
        KernelSpec::Tabulated(tab) => {
            let (rows, cols) = tab.samples().dim();
            if rows != receiver.points() || cols != source.points() {
                return Err(Error::SampleShapeMismatch {
                    rows,
                    cols,
                    expected_rows: receiver.points(),
                    expected_cols: source.points(),
                });
            }
            tab.samples().clone()
        }
    };

    let elements = Array2::from_shape_fn((receiver.points(), source.points()), |(j, k)| {
        samples[[j, k]] * (rw[j].sqrt() * sw[k].sqrt())
    });
    let op = Operator::new(
        Space::cartesian(source.points())?,
        Space::cartesian(receiver.points())?,
        elements,
    )?;

    Ok(DiscretizedOperator {
        op,
        source_space: make_weighted_space(source),
        receiver_space: make_weighted_space(receiver),
        source_grid: source.clone(),
        receiver_grid: receiver.clone(),
    })
}

const KERNEL_MAGIC: &str = "KERNEL v1";

/// Read a tabulated kernel from the line-oriented text format:
///
/// ```text
/// KERNEL v1
/// rows <m> cols <n>
/// rowgrid <lower> <upper> <rule>
/// colgrid <lower> <upper> <rule>
/// <re> <im>        (m * n lines, row-major)
/// ```
pub fn load_kernel_samples(path: impl AsRef<Path>) -> Result<KernelSpec> {
    let path = path.as_ref();
    let path_str = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| Error::KernelFileIo {
        path: path_str.clone(),
        source,
    })?;
    let malformed = |reason: &str| Error::MalformedKernelFile {
        path: path_str.clone(),
        reason: reason.to_string(),
    };

    let mut lines = text.lines();
    let magic = lines
        .next()
        .ok_or_else(|| malformed("missing header line"))?;
    if magic.trim() != KERNEL_MAGIC {
        return Err(malformed("first line is not 'KERNEL v1'"));
    }

    let counts = lines.next().ok_or_else(|| malformed("missing size line"))?;
    let parts: Vec<&str> = counts.split_whitespace().collect();
    let (rows, cols) = match parts.as_slice() {
        ["rows", m, "cols", n] => {
            let rows: usize = m
                .parse()
                .map_err(|_| malformed("row count is not an integer"))?;
            let cols: usize = n
                .parse()
                .map_err(|_| malformed("column count is not an integer"))?;
            (rows, cols)
        }
        _ => return Err(malformed("size line must be 'rows <m> cols <n>'")),
    };
    if rows == 0 || cols == 0 {
        return Err(malformed("row and column counts must be positive"));
    }

    let row_grid = parse_grid_line(
        lines
            .next()
            .ok_or_else(|| malformed("missing rowgrid line"))?,
        "rowgrid",
        rows,
        &malformed,
    )?;
    let col_grid = parse_grid_line(
        lines
            .next()
            .ok_or_else(|| malformed("missing colgrid line"))?,
        "colgrid",
        cols,
        &malformed,
    )?;

    let mut samples = Vec::with_capacity(rows * cols);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let re: f64 = it
            .next()
            .ok_or_else(|| malformed("sample line is empty"))?
            .parse()
            .map_err(|_| malformed("sample real part does not parse"))?;
        let im: f64 = it
            .next()
            .ok_or_else(|| malformed("sample line has no imaginary part"))?
            .parse()
            .map_err(|_| malformed("sample imaginary part does not parse"))?;
        if it.next().is_some() {
            return Err(malformed("sample line has trailing fields"));
        }
        samples.push(Complex64::new(re, im));
    }
    if samples.len() != rows * cols {
        return Err(Error::SampleCountMismatch {
            path: path_str,
            expected: rows * cols,
            found: samples.len(),
        });
    }

    let samples = Array2::from_shape_vec((rows, cols), samples)
        .expect("sample count was checked against the declared shape");
    Ok(KernelSpec::Tabulated(TabulatedKernel::new(
        samples, row_grid, col_grid,
    )?))
}

fn parse_grid_line(
    line: &str,
    tag: &str,
    points: usize,
    malformed: &dyn Fn(&str) -> Error,
) -> Result<GridSpec> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != tag {
        return Err(malformed(&format!(
            "{tag} line must be '{tag} <lower> <upper> <rule>'"
        )));
    }
    let lower: f64 = parts[1]
        .parse()
        .map_err(|_| malformed(&format!("{tag} lower bound does not parse")))?;
    let upper: f64 = parts[2]
        .parse()
        .map_err(|_| malformed(&format!("{tag} upper bound does not parse")))?;
    let rule = QuadRule::parse(parts[3])
        .ok_or_else(|| malformed(&format!("{tag} rule must be 'midpoint' or 'trapezoid'")))?;
    GridSpec::new(lower, upper, points, rule)
}

/// Write a tabulated kernel in the format read by [`load_kernel_samples`].
/// Numbers use shortest round-trip formatting, so a load reproduces the
/// samples bit-exactly.
pub fn save_kernel_samples(path: impl AsRef<Path>, kernel: &TabulatedKernel) -> Result<()> {
    let path = path.as_ref();
    let (rows, cols) = kernel.samples().dim();
    let mut text = String::new();
    text.push_str(KERNEL_MAGIC);
    text.push('\n');
    text.push_str(&format!("rows {rows} cols {cols}\n"));
    text.push_str(&format!(
        "rowgrid {} {} {}\n",
        kernel.row_grid().lower(),
        kernel.row_grid().upper(),
        kernel.row_grid().rule()
    ));
    text.push_str(&format!(
        "colgrid {} {} {}\n",
        kernel.col_grid().lower(),
        kernel.col_grid().upper(),
        kernel.col_grid().rule()
    ));
    for j in 0..rows {
        for k in 0..cols {
            let z = kernel.samples()[[j, k]];
            text.push_str(&format!("{} {}\n", z.re, z.im));
        }
    }
    std::fs::write(path, text).map_err(|source| Error::KernelFileIo {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HsMethod;

    #[test]
    fn midpoint_weights_are_uniform() {
        let grid = GridSpec::new(0.0, 1.0, 4, QuadRule::Midpoint).unwrap();
        assert_eq!(grid.weights(), vec![0.25; 4]);
        let nodes = grid.nodes();
        assert!((nodes[0] - 0.125).abs() < 1e-15);
        assert!((nodes[3] - 0.875).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_weights_halve_endpoints() {
        let grid = GridSpec::new(0.0, 1.0, 3, QuadRule::Trapezoid).unwrap();
        assert_eq!(grid.weights(), vec![0.25, 0.5, 0.25]);
        assert_eq!(grid.nodes(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_one_integrates_to_length() {
        for rule in [QuadRule::Midpoint, QuadRule::Trapezoid] {
            let grid = GridSpec::new(-1.0, 2.5, 7, rule).unwrap();
            let space = make_weighted_space(&grid);
            let ones = CoeffVector::from_reals(&[1.0; 7]).unwrap();
            let got = space.inner(&ones, &ones).unwrap().re;
            assert!((got - 3.5).abs() < 1e-12, "{rule}: {got}");
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 0.0, 4, QuadRule::Midpoint).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0, QuadRule::Midpoint).is_err());
        assert!(GridSpec::new(0.0, 1.0, 1, QuadRule::Trapezoid).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 3, QuadRule::Midpoint).is_err());
    }

    #[test]
    fn helmholtz_point_values() {
        // unit separation has unit modulus for any wavenumber
        let g = helmholtz1d(3.7, 2.0, 1.0).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-15);

        let g = helmholtz1d(0.0, 2.0, 0.0).unwrap();
        assert!((g - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        let g = helmholtz1d(std::f64::consts::PI, 1.0, 0.0).unwrap();
        assert!((g - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        assert!(matches!(
            helmholtz1d(1.0, 0.5, 0.5),
            Err(Error::CoincidentPoints { .. })
        ));
    }

    #[test]
    fn constant_kernel_hs_norm_is_product_of_lengths() {
        let source = GridSpec::new(0.0, 1.0, 5, QuadRule::Midpoint).unwrap();
        let receiver = GridSpec::new(2.0, 3.0, 4, QuadRule::Trapezoid).unwrap();
        let ones = Array2::from_elem((4, 5), Complex64::new(1.0, 0.0));
        let kernel = KernelSpec::Tabulated(
            TabulatedKernel::new(ones, receiver.clone(), source.clone()).unwrap(),
        );
        let disc = discretize(&kernel, &source, &receiver).unwrap();
        let hs = disc.op.hs_norm(HsMethod::EntrySquares);
        assert!((hs * hs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_samples_give_zero_operator() {
        let source = GridSpec::new(0.0, 1.0, 2, QuadRule::Midpoint).unwrap();
        let receiver = GridSpec::new(2.0, 3.0, 2, QuadRule::Midpoint).unwrap();
        let zeros = Array2::zeros((2, 2));
        let kernel = KernelSpec::Tabulated(
            TabulatedKernel::new(zeros, receiver.clone(), source.clone()).unwrap(),
        );
        let disc = discretize(&kernel, &source, &receiver).unwrap();
        assert!(disc.op.elements().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn helmholtz_rejects_overlap_and_touching() {
        let kernel = KernelSpec::Helmholtz1D { wavenumber: 10.0 };
        let a = GridSpec::new(0.0, 1.0, 4, QuadRule::Midpoint).unwrap();
        let b = GridSpec::new(0.5, 1.5, 4, QuadRule::Midpoint).unwrap();
        assert!(matches!(
            discretize(&kernel, &a, &b),
            Err(Error::OverlappingIntervals)
        ));
        let touching = GridSpec::new(1.0, 2.0, 4, QuadRule::Midpoint).unwrap();
        assert!(matches!(
            discretize(&kernel, &a, &touching),
            Err(Error::OverlappingIntervals)
        ));
        let apart = GridSpec::new(2.0, 3.0, 4, QuadRule::Midpoint).unwrap();
        assert!(discretize(&kernel, &a, &apart).is_ok());
        assert!(matches!(
            discretize(&KernelSpec::Helmholtz1D { wavenumber: 0.0 }, &a, &apart),
            Err(Error::BadWavenumber(_))
        ));
    }

    #[test]
    fn apply_reproduces_quadrature_of_integral() {
        let source = GridSpec::new(0.0, 1.0, 6, QuadRule::Midpoint).unwrap();
        let receiver = GridSpec::new(2.0, 3.0, 5, QuadRule::Trapezoid).unwrap();
        let kernel = KernelSpec::Helmholtz1D { wavenumber: 4.0 };
        let disc = discretize(&kernel, &source, &receiver).unwrap();

        let mut rng = opspace_testkit::rng(71);
        let f_nodes =
            CoeffVector::from_array(opspace_testkit::complex_vector(&mut rng, 6)).unwrap();
        let shifted = disc.shift_from_node(Side::Source, &f_nodes).unwrap();
        let g_shift = disc.op.apply(&shifted).unwrap();
        let g_nodes = disc.node_from_shift(Side::Receiver, &g_shift).unwrap();

        let sn = source.nodes();
        let sw = source.weights();
        for (j, &x2) in receiver.nodes().iter().enumerate() {
            let mut direct = Complex64::new(0.0, 0.0);
            for (k, &x1) in sn.iter().enumerate() {
                direct += helmholtz1d(4.0, x2, x1).unwrap() * f_nodes.entry(k) * sw[k];
            }
            assert!(
                (direct - g_nodes.entry(j)).norm() <= 1e-12 * direct.norm().max(1.0),
                "node {j}"
            );
        }
    }

    #[test]
    fn kernel_file_round_trip_is_bit_exact() {
        let dir = std::env::temp_dir().join(format!("opspace-kernel-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.kern");

        let mut rng = opspace_testkit::rng(73);
        let row_grid = GridSpec::new(2.0, 3.0, 3, QuadRule::Midpoint).unwrap();
        let col_grid = GridSpec::new(0.0, 1.0, 4, QuadRule::Trapezoid).unwrap();
        let samples = opspace_testkit::complex_matrix(&mut rng, 3, 4);
        let kernel = TabulatedKernel::new(samples.clone(), row_grid, col_grid).unwrap();

        save_kernel_samples(&path, &kernel).unwrap();
        let loaded = load_kernel_samples(&path).unwrap();
        match loaded {
            KernelSpec::Tabulated(t) => {
                assert_eq!(t.samples().dim(), (3, 4));
                for j in 0..3 {
                    for k in 0..4 {
                        let a = t.samples()[[j, k]];
                        let b = samples[[j, k]];
                        assert_eq!(a.re.to_bits(), b.re.to_bits());
                        assert_eq!(a.im.to_bits(), b.im.to_bits());
                    }
                }
                assert_eq!(t.row_grid().rule(), QuadRule::Midpoint);
                assert_eq!(t.col_grid().rule(), QuadRule::Trapezoid);
            }
            _ => panic!("expected tabulated kernel"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn kernel_file_error_paths_are_distinct() {
        let dir = std::env::temp_dir().join(format!("opspace-kernel-err-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();

        let missing = dir.join("missing.kern");
        assert!(matches!(
            load_kernel_samples(&missing),
            Err(Error::KernelFileIo { .. })
        ));

        let truncated = dir.join("truncated.kern");
        std::fs::write(&truncated, "KERNEL v1\nrows 2 cols 2\n").unwrap();
        assert!(matches!(
            load_kernel_samples(&truncated),
            Err(Error::MalformedKernelFile { .. })
        ));

        let bad_magic = dir.join("magic.kern");
        std::fs::write(&bad_magic, "KERNELv2\n").unwrap();
        assert!(matches!(
            load_kernel_samples(&bad_magic),
            Err(Error::MalformedKernelFile { .. })
        ));

        let short = dir.join("short.kern");
        std::fs::write(
            &short,
            "KERNEL v1\nrows 2 cols 2\nrowgrid 2 3 midpoint\ncolgrid 0 1 midpoint\n1 0\n2 0\n3 0\n",
        )
        .unwrap();
        assert!(matches!(
            load_kernel_samples(&short),
            Err(Error::SampleCountMismatch { .. })
        ));
        std::fs::remove_dir_all(&dir).ok();
    }
}
