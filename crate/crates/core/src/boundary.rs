//! Closed parametric curves, their trapezoidal discretization, the Nyström
//! matrices of the single-layer operator, and Fourier-weighted Sobolev Gram
//! matrices.
//!
//! Nodal vectors stack two components per node: entry `2 j + c` holds
//! component `c` at node `j`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::elastic::{self, dot, ElasticMedium, Frequency, Point};
use crate::error::{Error, Result};

/// Catalog of smooth closed curves, all traversed counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Circle { center: Point, radius: f64 },
    Ellipse { center: Point, a: f64, b: f64 },
    /// `center + scale (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)`
    Kite { center: Point, scale: f64 },
    /// `center + scale sqrt(cos^2 t + 0.25 sin^2 t) (cos t, sin t)`
    Peanut { center: Point, scale: f64 },
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::Circle { radius, .. } => radius > 0.0,
            Shape::Ellipse { a, b, .. } => a > 0.0 && b > 0.0,
            Shape::Kite { scale, .. } | Shape::Peanut { scale, .. } => scale > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("shape size parameters must be positive: {self:?}")))
        }
    }

    pub fn center(&self) -> Point {
        match *self {
            Shape::Circle { center, .. }
            | Shape::Ellipse { center, .. }
            | Shape::Kite { center, .. }
            | Shape::Peanut { center, .. } => center,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Circle { .. } => "circle",
            Shape::Ellipse { .. } => "ellipse",
            Shape::Kite { .. } => "kite",
            Shape::Peanut { .. } => "peanut",
        }
    }

    /// gamma(t) and gamma'(t).
    pub fn eval(&self, t: f64) -> (Point, Point) {
        let (s, c) = t.sin_cos();
        match *self {
            Shape::Circle { center, radius } => (
                [center[0] + radius * c, center[1] + radius * s],
                [-radius * s, radius * c],
            ),
            Shape::Ellipse { center, a, b } => ([center[0] + a * c, center[1] + b * s], [-a * s, b * c]),
            Shape::Kite { center, scale } => {
                let (s2, c2) = (2.0 * t).sin_cos();
                (
                    [center[0] + scale * (c + 0.65 * c2 - 0.65), center[1] + scale * 1.5 * s],
                    [scale * (-s - 1.3 * s2), scale * 1.5 * c],
                )
            }
            Shape::Peanut { center, scale } => {
                let q = c * c + 0.25 * s * s;
                let rad = q.sqrt();
                let drad = -0.75 * s * c / rad;
                (
                    [center[0] + scale * rad * c, center[1] + scale * rad * s],
                    [scale * (drad * c - rad * s), scale * (drad * s + rad * c)],
                )
            }
        }
    }

    /// Whether `x` lies strictly inside the curve (winding number test on a
    /// fine polygon).
    pub fn contains(&self, x: Point) -> bool {
        const N: usize = 720;
        let mut winding = 0.0;
        let mut prev = self.eval(0.0).0;
        for k in 1..=N {
            let cur = self.eval(2.0 * PI * k as f64 / N as f64).0;
            let a = [prev[0] - x[0], prev[1] - x[1]];
            let b = [cur[0] - x[0], cur[1] - x[1]];
            winding += (a[0] * b[1] - a[1] * b[0]).atan2(dot(a, b));
            prev = cur;
        }
        winding.abs() > PI
    }
}

/// A closed curve given by its parametrisation over [0, 2 pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricBoundary {
    pub shape: Shape,
}

impl ParametricBoundary {
    pub fn new(shape: Shape) -> Result<Self> {
        shape.validate()?;
        Ok(ParametricBoundary { shape })
    }
}

impl From<Shape> for ParametricBoundary {
    fn from(shape: Shape) -> Self {
        ParametricBoundary { shape }
    }
}

/// Equispaced-parameter quadrature of a closed curve.
#[derive(Debug, Clone)]
pub struct BoundaryDiscretization {
    pub boundary: ParametricBoundary,
    pub n: usize,
    pub params: Vec<f64>,
    pub nodes: Vec<Point>,
    pub tangents: Vec<Point>,
    pub normals: Vec<Point>,
    pub jacobians: Vec<f64>,
    /// Trapezoid weight 2 pi / n, shared by all nodes.
    pub weight: f64,
}

impl BoundaryDiscretization {
    /// Number of scalar unknowns (two per node).
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Arc-length quadrature weight of node j.
    pub fn arc_weight(&self, j: usize) -> f64 {
        self.weight * self.jacobians[j]
    }

    pub fn perimeter(&self) -> f64 {
        self.jacobians.iter().sum::<f64>() * self.weight
    }

    pub fn mean_jacobian(&self) -> f64 {
        self.jacobians.iter().sum::<f64>() / self.n as f64
    }

    /// Nodal vector sampling a vector field on the nodes.
    pub fn sample<F: Fn(Point) -> [Complex64; 2]>(&self, f: F) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        for (j, &x) in self.nodes.iter().enumerate() {
            let u = f(x);
            v[2 * j] = u[0];
            v[2 * j + 1] = u[1];
        }
        v
    }
}

pub fn discretize(boundary: &ParametricBoundary, n: usize) -> Result<BoundaryDiscretization> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::Parameter(format!("node count must be even and >= 8, got {n}")));
    }
    boundary.shape.validate()?;
    let mut params = Vec::with_capacity(n);
    let mut nodes = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut jacobians = Vec::with_capacity(n);
    for j in 0..n {
        let t = 2.0 * PI * j as f64 / n as f64;
        let (x, dx) = boundary.shape.eval(t);
        let jac = dx[0].hypot(dx[1]);
        if !(jac > 0.0) {
            return Err(Error::Parameter("parametrisation has a vanishing derivative".into()));
        }
        let tau = [dx[0] / jac, dx[1] / jac];
        params.push(t);
        nodes.push(x);
        tangents.push(tau);
        normals.push([tau[1], -tau[0]]);
        jacobians.push(jac);
    }
    Ok(BoundaryDiscretization {
        boundary: *boundary,
        n,
        params,
        nodes,
        tangents,
        normals,
        jacobians,
        weight: 2.0 * PI / n as f64,
    })
}

/// Weights R_j(t) of the trigonometric quadrature for
/// `int_0^{2pi} log(4 sin^2((t - tau)/2)) f(tau) dtau ~ sum_j R_j(t) f(t_j)`.
pub fn log_quadrature_weights(n: usize, t: f64) -> Vec<f64> {
    let half = n / 2;
    (0..n)
        .map(|j| {
            let d = t - 2.0 * PI * j as f64 / n as f64;
            let mut s = 0.0;
            for m in 1..half {
                s += (m as f64 * d).cos() / m as f64;
            }
            -4.0 * PI / n as f64 * s - 4.0 * PI / (n * n) as f64 * (half as f64 * d).cos()
        })
        .collect()
}

/// Dense Nyström matrix of a single-layer operator.
#[derive(Debug, Clone)]
pub struct BoundaryOperatorMatrix {
    pub matrix: DMatrix<Complex64>,
    pub frequency: Frequency,
}

impl BoundaryOperatorMatrix {
    /// 2-norm condition number from the singular values.
    pub fn condition_estimate(&self) -> f64 {
        let sv = self.matrix.clone().singular_values();
        let max = sv.max();
        let min = sv.min();
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Symmetrisation `(Gamma0 S + (Gamma0 S)^H) / 2` of the quadratic form
    /// `phi^H Gamma0 S phi`, with Gamma0 the L2 quadrature Gram.
    pub fn weighted_symmetrization(&self, disc: &BoundaryDiscretization) -> DMatrix<Complex64> {
        let mut a = self.matrix.clone();
        for r in 0..a.nrows() {
            let w = disc.arc_weight(r / 2);
            a.row_mut(r).scale_mut(w);
        }
        (&a + a.adjoint()).scale(0.5)
    }
}

/// Local kernel blocks A (log part) and B (smooth part) between parameter t
/// with point x and source node j, both excluding the source Jacobian.
fn kernel_blocks(
    x: Point,
    t: f64,
    disc: &BoundaryDiscretization,
    j: usize,
    medium: &ElasticMedium,
    freq: Frequency,
) -> Result<([[f64; 2]; 2], [[Complex64; 2]; 2])> {
    let y = disc.nodes[j];
    let dx = [x[0] - y[0], x[1] - y[1]];
    let r = dx[0].hypot(dx[1]);
    let rhat = [dx[0] / r, dx[1] / r];
    let (phi1, phi2) = elastic::split_coefficients(r, medium, freq)?;
    let (l1, l2) = elastic::split_log_parts(r, medium, freq);
    let s = (0.5 * (t - disc.params[j])).sin();
    let log4sin2 = (4.0 * s * s).ln();
    let mut a = [[0.0; 2]; 2];
    let mut b = [[Complex64::new(0.0, 0.0); 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            let id = if p == q { 1.0 } else { 0.0 };
            let rr = rhat[p] * rhat[q];
            a[p][q] = 0.5 * (l1 * id + l2 * rr);
            b[p][q] = phi1 * id + phi2 * rr - a[p][q] * log4sin2;
        }
    }
    Ok((a, b))
}

fn diagonal_blocks(
    disc: &BoundaryDiscretization,
    i: usize,
    limits: (f64, Complex64, Complex64),
) -> ([[f64; 2]; 2], [[Complex64; 2]; 2]) {
    let (l1, r1, r2) = limits;
    let tau = disc.tangents[i];
    let log_jac = disc.jacobians[i].ln();
    let mut a = [[0.0; 2]; 2];
    let mut b = [[Complex64::new(0.0, 0.0); 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            let id = if p == q { 1.0 } else { 0.0 };
            a[p][q] = 0.5 * l1 * id;
            b[p][q] = (r1 + l1 * log_jac) * id + r2 * (tau[p] * tau[q]);
        }
    }
    (a, b)
}

/// Nyström matrix of `(S phi)(x) = int G(x, y) phi(y) ds(y)` on the nodes,
/// using the log-split kernel with the trigonometric log-weight rule.
pub fn assemble_single_layer(
    disc: &BoundaryDiscretization,
    medium: &ElasticMedium,
    frequency: Frequency,
) -> Result<BoundaryOperatorMatrix> {
    let n = disc.n;
    let limits = elastic::split_diagonal_limits(medium, frequency);
    let log_weights = log_quadrature_weights(n, 0.0);
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<Complex64>> {
            // two matrix rows per node, stored back to back
            let mut out = vec![Complex64::new(0.0, 0.0); 2 * 2 * n];
            for j in 0..n {
                let (a, b) = if i == j {
                    diagonal_blocks(disc, i, limits)
                } else {
                    kernel_blocks(disc.nodes[i], disc.params[i], disc, j, medium, frequency)?
                };
                let rw = log_weights[(i + n - j) % n];
                let jac = disc.jacobians[j];
                for p in 0..2 {
                    for q in 0..2 {
                        out[p * 2 * n + 2 * j + q] = (b[p][q] * disc.weight + a[p][q] * rw) * jac;
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    for (i, row) in rows.iter().enumerate() {
        for p in 0..2 {
            for c in 0..2 * n {
                matrix[(2 * i + p, c)] = row[p * 2 * n + c];
            }
        }
    }
    Ok(BoundaryOperatorMatrix { matrix, frequency })
}

/// Single-layer potential of a nodal density evaluated on the boundary at an
/// arbitrary parameter value (Nyström interpolation).
pub fn single_layer_on_boundary(
    disc: &BoundaryDiscretization,
    medium: &ElasticMedium,
    frequency: Frequency,
    density: &DVector<Complex64>,
    t: f64,
) -> Result<[Complex64; 2]> {
    let (x, _) = disc.boundary.shape.eval(t);
    let weights = log_quadrature_weights(disc.n, t);
    let mut u = [Complex64::new(0.0, 0.0); 2];
    for j in 0..disc.n {
        let (a, b) = kernel_blocks(x, t, disc, j, medium, frequency)?;
        let jac = disc.jacobians[j];
        for p in 0..2 {
            for q in 0..2 {
                u[p] += (b[p][q] * disc.weight + a[p][q] * weights[j]) * jac * density[2 * j + q];
            }
        }
    }
    Ok(u)
}

/// Single-layer potential at a point away from the boundary (trapezoid rule).
pub fn single_layer_potential(
    disc: &BoundaryDiscretization,
    medium: &ElasticMedium,
    density: &DVector<Complex64>,
    x: Point,
) -> Result<[Complex64; 2]> {
    let mut u = [Complex64::new(0.0, 0.0); 2];
    for j in 0..disc.n {
        let g = elastic::green_tensor(x, disc.nodes[j], medium)?;
        let v = g.apply([density[2 * j], density[2 * j + 1]]);
        let w = disc.arc_weight(j);
        u[0] += v[0] * w;
        u[1] += v[1] * w;
    }
    Ok(u)
}

/// Sobolev exponent of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevExponent {
    MinusHalf,
    Zero,
    PlusHalf,
}

impl SobolevExponent {
    pub fn value(self) -> f64 {
        match self {
            SobolevExponent::MinusHalf => -0.5,
            SobolevExponent::Zero => 0.0,
            SobolevExponent::PlusHalf => 0.5,
        }
    }
}

/// Real symmetric positive definite Gram matrix of a discrete H^s norm.
#[derive(Debug, Clone)]
pub struct SobolevGram {
    pub exponent: SobolevExponent,
    pub matrix: DMatrix<f64>,
}

impl SobolevGram {
    /// `v^H Gamma v`.
    pub fn norm_squared(&self, v: &DVector<Complex64>) -> f64 {
        let gv = self.apply(v);
        v.dotc(&gv).re
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(v.len());
        for r in 0..self.matrix.nrows() {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.matrix.ncols() {
                acc += v[c] * self.matrix[(r, c)];
            }
            out[r] = acc;
        }
        out
    }

    pub fn complex(&self) -> DMatrix<Complex64> {
        self.matrix.map(Complex64::from)
    }

    /// Symmetric positive square root via the eigendecomposition.
    pub fn sqrt(&self) -> Result<DMatrix<f64>> {
        let eig = self.matrix.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::Numerical("Gram matrix is not positive definite".into()));
        }
        let root = eig.eigenvalues.map(f64::sqrt);
        Ok(&eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
    }
}

/// Gram matrix `D^{1/2} C_s D^{1/2}` with `D = diag(weight * jacobian)` and
/// `C_s` the circulant applying `(1 + m^2)^s` to Fourier mode m of each
/// component. `C_0 = I`, so s = 0 is the plain quadrature Gram; on a circle
/// the construction equals the mean-Jacobian-scaled Fourier norm.
pub fn sobolev_gram(disc: &BoundaryDiscretization, exponent: SobolevExponent) -> SobolevGram {
    let n = disc.n;
    let s = exponent.value();
    let half = (n / 2) as i64;
    // circulant symbol c(k) = (1/n) sum_m (1+m^2)^s cos(2 pi m k / n), m in (-n/2, n/2]
    let symbol: Vec<f64> = (0..n)
        .map(|k| {
            let k = k.min(n - k);
            let mut acc = 0.0;
            for m in (1 - half)..=half {
                let mf = m as f64;
                acc += (1.0 + mf * mf).powf(s) * (2.0 * PI * mf * k as f64 / n as f64).cos();
            }
            acc / n as f64
        })
        .collect();
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let c = if s == 0.0 {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            } else {
                symbol[(i + n - j) % n]
            };
            let v = c * (disc.arc_weight(i) * disc.arc_weight(j)).sqrt();
            matrix[(2 * i, 2 * j)] = v;
            matrix[(2 * i + 1, 2 * j + 1)] = v;
        }
    }
    SobolevGram { exponent, matrix }
}
