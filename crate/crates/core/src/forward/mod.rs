//! Exterior Dirichlet problem, far-field patterns, and the discrete far-field
//! (`F`) and data-to-pattern (`G`) operators.
//!
//! Far-field data are stored as scalar coefficients on the direction set:
//! the P coefficient is `xhat . u_p^inf(xhat)` and the S coefficient is
//! `xhat_perp . u_s^inf(xhat)`. Coefficient vectors of length `2m` hold all
//! P coefficients first, then all S coefficients, directions ascending.

pub mod ffd;

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::boundary::{BoundaryDiscretization, BoundaryOperatorMatrix};
use crate::elastic::{self, dot, perp, unit_direction, ElasticMedium, Frequency, Point};
use crate::error::{Error, Result};

/// Largest single-layer condition number accepted by the solver.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Equispaced directions `d_j = (cos 2 pi j/m, sin 2 pi j/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    pub m: usize,
    pub directions: Vec<Point>,
    pub weight: f64,
}

impl DirectionSet {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || m % 2 != 0 {
            return Err(Error::Parameter(format!("direction count must be even and >= 2, got {m}")));
        }
        let directions = (0..m).map(|j| unit_direction(2.0 * PI * j as f64 / m as f64)).collect();
        Ok(DirectionSet { m, directions, weight: 2.0 * PI / m as f64 })
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }
}

/// Noise applied to a far-field matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseInfo {
    pub level: f64,
    pub seed: u64,
}

/// Discrete far-field operator in block form `[pp ps; sp ss]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldOperatorMatrix {
    pub m: usize,
    pub matrix: DMatrix<Complex64>,
    pub medium: ElasticMedium,
    pub noise: Option<NoiseInfo>,
}

impl FarFieldOperatorMatrix {
    pub fn new(matrix: DMatrix<Complex64>, medium: ElasticMedium, noise: Option<NoiseInfo>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || dim == 0 || dim % 4 != 0 {
            return Err(Error::Data(format!(
                "far-field matrix must be 2m x 2m with m even, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Data("far-field matrix has non-finite entries".into()));
        }
        Ok(FarFieldOperatorMatrix { m: dim / 2, matrix, medium, noise })
    }

    pub fn noise_level(&self) -> f64 {
        self.noise.map_or(0.0, |n| n.level)
    }
}

/// Discrete data-to-pattern operator, `2m x 2n`.
#[derive(Debug, Clone)]
pub struct DataToPatternMatrix {
    pub matrix: DMatrix<Complex64>,
}

/// LU factorization of a single-layer matrix, reused for every right-hand
/// side.
pub struct SingleLayerSolver {
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    pub condition: f64,
    dim: usize,
}

impl SingleLayerSolver {
    pub fn new(disc: &BoundaryDiscretization, s: &BoundaryOperatorMatrix) -> Result<Self> {
        if s.frequency != Frequency::Real {
            return Err(Error::Parameter("the exterior solver needs the real-frequency operator".into()));
        }
        let dim = disc.dim();
        if s.matrix.nrows() != dim || s.matrix.ncols() != dim {
            return Err(Error::Parameter(format!(
                "operator is {}x{} but the discretization has {} unknowns",
                s.matrix.nrows(),
                s.matrix.ncols(),
                dim
            )));
        }
        let condition = s.condition_estimate();
        if !(condition < CONDITION_LIMIT) {
            return Err(Error::InteriorEigenvalue { condition, threshold: CONDITION_LIMIT });
        }
        Ok(SingleLayerSolver { lu: s.matrix.clone().lu(), condition, dim })
    }

    pub fn solve(&self, rhs: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if rhs.nrows() != self.dim {
            return Err(Error::Parameter(format!(
                "right-hand side has {} rows, expected {}",
                rhs.nrows(),
                self.dim
            )));
        }
        self.lu
            .solve(rhs)
            .ok_or_else(|| Error::Numerical("single-layer matrix is singular".into()))
    }

    pub fn solve_vec(&self, rhs: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let m = self.solve(&DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice()))?;
        Ok(m.column(0).into_owned())
    }
}

/// Density of the single-layer representation of the radiating solution
/// with boundary values `f`.
pub fn solve_exterior_dirichlet(
    disc: &BoundaryDiscretization,
    s: &BoundaryOperatorMatrix,
    f: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    SingleLayerSolver::new(disc, s)?.solve_vec(f)
}

/// Matrix mapping a nodal density to the P and S far-field coefficients.
pub fn farfield_coefficient_matrix(
    disc: &BoundaryDiscretization,
    dirs: &DirectionSet,
    medium: &ElasticMedium,
) -> DMatrix<Complex64> {
    let (cp, cs) = elastic::farfield_prefactors(medium);
    let m = dirs.m;
    DMatrix::from_fn(2 * m, disc.dim(), |row, col| {
        let (j, c) = (col / 2, col % 2);
        let y = disc.nodes[j];
        let w = disc.arc_weight(j);
        if row < m {
            let xhat = dirs.directions[row];
            cp * Complex64::from_polar(1.0, -medium.kp * dot(xhat, y)) * (xhat[c] * w)
        } else {
            let xhat = dirs.directions[row - m];
            cs * Complex64::from_polar(1.0, -medium.ks * dot(xhat, y)) * (perp(xhat)[c] * w)
        }
    })
}

/// Far-field patterns (u_p^inf, u_s^inf) of the single-layer potential with
/// nodal density `phi`, one pair per direction.
pub fn scattered_farfield(
    phi: &DVector<Complex64>,
    disc: &BoundaryDiscretization,
    dirs: &DirectionSet,
    medium: &ElasticMedium,
) -> Result<Vec<(elastic::CVec2, elastic::CVec2)>> {
    let zero = Complex64::new(0.0, 0.0);
    dirs.directions
        .iter()
        .map(|&xhat| {
            let mut up = [zero; 2];
            let mut us = [zero; 2];
            for j in 0..disc.n {
                let (kp, ks) = elastic::farfield_kernel(xhat, disc.nodes[j], medium)?;
                let w = disc.arc_weight(j);
                let v = [phi[2 * j] * w, phi[2 * j + 1] * w];
                for a in 0..2 {
                    up[a] += kp[a][0] * v[0] + kp[a][1] * v[1];
                    us[a] += ks[a][0] * v[0] + ks[a][1] * v[1];
                }
            }
            Ok((up, us))
        })
        .collect()
}

/// Scalar P/S coefficients of a far-field pattern list.
pub fn farfield_coefficients(patterns: &[(elastic::CVec2, elastic::CVec2)], dirs: &DirectionSet) -> DVector<Complex64> {
    let m = dirs.m;
    let mut out = DVector::zeros(2 * m);
    for (i, ((up, us), &xhat)) in patterns.iter().zip(&dirs.directions).enumerate() {
        let xp = perp(xhat);
        out[i] = up[0] * xhat[0] + up[1] * xhat[1];
        out[m + i] = us[0] * xp[0] + us[1] * xp[1];
    }
    out
}

/// Herglotz weights `e^{-i pi/4} sqrt(k_beta / omega)` for the P and S parts.
pub fn herglotz_weights(medium: &ElasticMedium) -> (Complex64, Complex64) {
    let phase = Complex64::from_polar(1.0, -FRAC_PI_4);
    (
        phase * (medium.kp / medium.omega).sqrt(),
        phase * (medium.ks / medium.omega).sqrt(),
    )
}

/// Nodal values at `points` of the Herglotz wave with coefficient vector g,
/// as a `2 points.len() x 2m` matrix (direction quadrature included).
pub fn herglotz_matrix_at(points: &[Point], dirs: &DirectionSet, medium: &ElasticMedium) -> DMatrix<Complex64> {
    let (wp, ws) = herglotz_weights(medium);
    let m = dirs.m;
    DMatrix::from_fn(2 * points.len(), 2 * m, |row, col| {
        let (k, c) = (row / 2, row % 2);
        let x = points[k];
        if col < m {
            let d = dirs.directions[col];
            wp * Complex64::from_polar(1.0, medium.kp * dot(d, x)) * (d[c] * dirs.weight)
        } else {
            let d = dirs.directions[col - m];
            ws * Complex64::from_polar(1.0, medium.ks * dot(d, x)) * (perp(d)[c] * dirs.weight)
        }
    })
}

/// Traces on the nodes of the unit-amplitude incident waves, one column per
/// incidence: P waves for all directions, then S waves.
fn incident_traces(disc: &BoundaryDiscretization, dirs: &DirectionSet, medium: &ElasticMedium) -> DMatrix<Complex64> {
    let m = dirs.m;
    DMatrix::from_fn(disc.dim(), 2 * m, |row, col| {
        let (k, c) = (row / 2, row % 2);
        let x = disc.nodes[k];
        if col < m {
            let d = dirs.directions[col];
            Complex64::from_polar(d[c], medium.kp * dot(d, x))
        } else {
            let d = dirs.directions[col - m];
            Complex64::from_polar(perp(d)[c], medium.ks * dot(d, x))
        }
    })
}

/// Far-field operator by solving one exterior problem per incident plane
/// wave (shared LU factorization).
pub fn assemble_farfield_operator(
    scatterer: &BoundaryDiscretization,
    s: &BoundaryOperatorMatrix,
    medium: &ElasticMedium,
    dirs: &DirectionSet,
) -> Result<FarFieldOperatorMatrix> {
    let solver = SingleLayerSolver::new(scatterer, s)?;
    let rhs = -incident_traces(scatterer, dirs, medium);
    let densities = solver.solve(&rhs)?;
    let mut f = farfield_coefficient_matrix(scatterer, dirs, medium) * densities;
    let (wp, ws) = herglotz_weights(medium);
    let m = dirs.m;
    for col in 0..2 * m {
        let scale = (if col < m { wp } else { ws }) * dirs.weight;
        f.column_mut(col).iter_mut().for_each(|z| *z *= scale);
    }
    FarFieldOperatorMatrix::new(f, *medium, None)
}

/// Data-to-pattern operator `G = FF S^{-1}`.
pub fn assemble_data_to_pattern(
    scatterer: &BoundaryDiscretization,
    s: &BoundaryOperatorMatrix,
    medium: &ElasticMedium,
    dirs: &DirectionSet,
) -> Result<DataToPatternMatrix> {
    let solver = SingleLayerSolver::new(scatterer, s)?;
    let densities = solver.solve(&DMatrix::identity(scatterer.dim(), scatterer.dim()))?;
    let ff = farfield_coefficient_matrix(scatterer, dirs, medium);
    let matrix = ff * densities;
    Ok(DataToPatternMatrix { matrix })
}

/// Additive complex Gaussian noise scaled to the Frobenius norm of F.
///
/// Entries of E are drawn row-major from a ChaCha20 stream seeded with
/// `seed` (via `SeedableRng::seed_from_u64`); each entry takes two standard
/// normal samples (real part first), scaled by `1/sqrt(2)` so that
/// `E|e|^2 = 1`. The perturbation is `level ||F||_fro / (2m) * E`.
pub fn add_noise(f: &FarFieldOperatorMatrix, level: f64, seed: u64) -> Result<FarFieldOperatorMatrix> {
    if !(level >= 0.0 && level < 1.0) {
        return Err(Error::Parameter(format!("noise level must lie in [0, 1), got {level}")));
    }
    let mut out = f.clone();
    out.noise = Some(NoiseInfo { level, seed });
    if level == 0.0 {
        return Ok(out);
    }
    let dim = f.matrix.nrows();
    let scale = level * f.matrix.norm() / dim as f64 * std::f64::consts::FRAC_1_SQRT_2;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for r in 0..dim {
        for c in 0..dim {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            out.matrix[(r, c)] += Complex64::new(re, im) * scale;
        }
    }
    Ok(out)
}
