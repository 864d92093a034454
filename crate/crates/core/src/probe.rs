//! Monotonicity probe: weighted direction space, Herglotz matrices on test
//! disks, the Hermitian operator `Re(F) + H_B^* H_B`, eigenvalue counting and
//! localized densities.
//!
//! Operators on the direction space are represented in weighted coordinates
//! `c = W^{1/2} g`, in which the weighted inner product is the Euclidean one
//! and Gram adjoints become conjugate transposes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::boundary::{discretize, sobolev_gram, BoundaryDiscretization, ParametricBoundary, Shape, SobolevExponent, SobolevGram};
use crate::elastic::{ElasticMedium, Point};
use crate::error::{Error, Result};
use crate::forward::{herglotz_matrix_at, DataToPatternMatrix, DirectionSet, FarFieldOperatorMatrix};

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Direction space with the diagonal weight matrix of the inner product.
#[derive(Debug, Clone)]
pub struct WeightedDirectionSpace {
    pub dirs: DirectionSet,
    /// Diagonal of W: `(omega/kp) 2 pi/m` on P entries, `(omega/ks) 2 pi/m` on S entries.
    pub weights: DVector<f64>,
}

impl WeightedDirectionSpace {
    pub fn new(dirs: DirectionSet, medium: &ElasticMedium) -> Self {
        let m = dirs.m;
        let wp = medium.omega / medium.kp * dirs.weight;
        let ws = medium.omega / medium.ks * dirs.weight;
        let weights = DVector::from_fn(2 * m, |i, _| if i < m { wp } else { ws });
        WeightedDirectionSpace { dirs, weights }
    }

    pub fn dim(&self) -> usize {
        2 * self.dirs.m
    }

    pub fn sqrt_weights(&self) -> DVector<f64> {
        self.weights.map(f64::sqrt)
    }

    /// `g -> W^{1/2} g`.
    pub fn to_weighted(&self, g: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_fn(g.len(), |i, _| g[i] * self.weights[i].sqrt())
    }

    /// `c -> W^{-1/2} c`.
    pub fn from_weighted(&self, c: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_fn(c.len(), |i, _| c[i] / self.weights[i].sqrt())
    }

    /// `W^{1/2} A W^{-1/2}` for an operator on the direction space.
    pub fn conjugate(&self, a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let s = self.sqrt_weights();
        DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| a[(r, c)] * (s[r] / s[c]))
    }
}

/// `conj(g)^T W h`.
pub fn weighted_inner(g: &DVector<Complex64>, h: &DVector<Complex64>, space: &WeightedDirectionSpace) -> Result<Complex64> {
    if g.len() != space.dim() || h.len() != space.dim() {
        return Err(Error::Parameter(format!(
            "vectors of length {} and {} do not match the direction space of dimension {}",
            g.len(),
            h.len(),
            space.dim()
        )));
    }
    Ok((0..g.len()).map(|i| g[i].conj() * h[i] * space.weights[i]).sum())
}

/// Weighted operator norm `||W^{1/2} A W^{-1/2}||_2`.
pub fn weighted_operator_norm(a: &DMatrix<Complex64>, space: &WeightedDirectionSpace) -> f64 {
    space.conjugate(a).singular_values().max()
}

/// Circular probing domain with its boundary discretization.
#[derive(Debug, Clone)]
pub struct TestDisk {
    pub center: Point,
    pub radius: f64,
    pub nb: usize,
    pub disc: BoundaryDiscretization,
}

impl TestDisk {
    pub fn new(center: Point, radius: f64, nb: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.iter().all(|c| c.is_finite()) {
            return Err(Error::Parameter(format!("invalid test disk center {center:?} radius {radius}")));
        }
        if nb < 16 || nb % 2 != 0 {
            return Err(Error::Parameter(format!("test disk node count must be even and >= 16, got {nb}")));
        }
        let disc = discretize(&ParametricBoundary::new(Shape::Circle { center, radius })?, nb)?;
        Ok(TestDisk { center, radius, nb, disc })
    }

    /// H^{1/2} Gram of the disk boundary.
    pub fn gram(&self) -> SobolevGram {
        sobolev_gram(&self.disc, SobolevExponent::PlusHalf)
    }
}

/// Herglotz matrix `2 nB x 2m`: nodal values on the disk boundary.
pub fn herglotz_matrix(disk: &TestDisk, space: &WeightedDirectionSpace, medium: &ElasticMedium) -> DMatrix<Complex64> {
    herglotz_matrix_at(&disk.disc.nodes, &space.dirs, medium)
}

/// Gram adjoint `H_B^* = W^{-1} H_B^H Gamma_B`.
pub fn herglotz_adjoint(h: &DMatrix<Complex64>, gram: &SobolevGram, space: &WeightedDirectionSpace) -> DMatrix<Complex64> {
    let mut out = h.adjoint() * gram.complex();
    for r in 0..out.nrows() {
        let w = space.weights[r];
        out.row_mut(r).iter_mut().for_each(|z| *z /= w);
    }
    out
}

/// Herglotz energy form in weighted coordinates:
/// `W^{-1/2} H_B^H Gamma_B H_B W^{-1/2}`.
pub fn herglotz_energy(h: &DMatrix<Complex64>, gram: &SobolevGram, space: &WeightedDirectionSpace) -> Result<DMatrix<Complex64>> {
    Ok(herglotz_energy_with_root(h, &gram.sqrt()?, space))
}

/// As [`herglotz_energy`] with the Gram square root precomputed.
pub fn herglotz_energy_with_root(
    h: &DMatrix<Complex64>,
    root: &DMatrix<f64>,
    space: &WeightedDirectionSpace,
) -> DMatrix<Complex64> {
    let s = space.sqrt_weights();
    let mut b = root.map(Complex64::from) * h;
    for c in 0..b.ncols() {
        let inv = 1.0 / s[c];
        b.column_mut(c).iter_mut().for_each(|z| *z *= inv);
    }
    b.adjoint() * b
}

/// Hermitian part `(A + A^H)/2`.
pub fn hermitian_part(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (a + a.adjoint()).scale(0.5)
}

/// The Hermitian probe operator for one test disk, in weighted coordinates.
#[derive(Debug, Clone)]
pub struct ProbeOperator {
    pub matrix: DMatrix<Complex64>,
    pub center: Point,
    pub radius: f64,
}

/// Weighted-coordinate real part of F, `Sym(W^{1/2} F W^{-1/2})`.
pub fn real_part_weighted(f: &FarFieldOperatorMatrix, space: &WeightedDirectionSpace) -> Result<DMatrix<Complex64>> {
    if f.m != space.dirs.m {
        return Err(Error::Parameter(format!(
            "far-field operator has m = {} but the direction space has m = {}",
            f.m, space.dirs.m
        )));
    }
    Ok(hermitian_part(&space.conjugate(&f.matrix)))
}

/// `M = Sym(W^{1/2} F W^{-1/2}) + W^{-1/2} H_B^H Gamma_B H_B W^{-1/2}`.
pub fn probe_operator(
    f: &FarFieldOperatorMatrix,
    disk: &TestDisk,
    space: &WeightedDirectionSpace,
    gram: &SobolevGram,
) -> Result<ProbeOperator> {
    let re_f = real_part_weighted(f, space)?;
    probe_from_real_part(&re_f, disk, space, gram, &f.medium)
}

/// As [`probe_operator`] with the weighted real part of F precomputed.
pub fn probe_from_real_part(
    re_f: &DMatrix<Complex64>,
    disk: &TestDisk,
    space: &WeightedDirectionSpace,
    gram: &SobolevGram,
    medium: &ElasticMedium,
) -> Result<ProbeOperator> {
    probe_with_root(re_f, disk, space, &gram.sqrt()?, medium)
}

/// As [`probe_from_real_part`] with the square root of the H^{1/2} Gram
/// precomputed. The Gram of a circle depends only on its radius and node
/// count, so one root serves every disk of a sweep.
pub fn probe_with_root(
    re_f: &DMatrix<Complex64>,
    disk: &TestDisk,
    space: &WeightedDirectionSpace,
    root: &DMatrix<f64>,
    medium: &ElasticMedium,
) -> Result<ProbeOperator> {
    if root.nrows() != disk.disc.dim() {
        return Err(Error::Parameter("Gram matrix does not match the test disk discretization".into()));
    }
    if re_f.nrows() != space.dim() || re_f.ncols() != space.dim() {
        return Err(Error::Parameter("real part of F does not match the direction space".into()));
    }
    let h = herglotz_matrix(disk, space, medium);
    let energy = herglotz_energy_with_root(&h, root, space);
    let matrix = hermitian_part(&(re_f + energy));
    Ok(ProbeOperator { matrix, center: disk.center, radius: disk.radius })
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut eigs: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    if eigs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigensolver produced non-finite values".into()));
    }
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending with matching
/// eigenvector columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check_hermitian(m)?;
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

fn check_hermitian(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Parameter(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let scale = m.norm();
    let asym = (m - m.adjoint()).norm();
    if asym > HERMITIAN_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Parameter(format!("matrix is not Hermitian (relative asymmetry {:.3e})", asym / scale)));
    }
    Ok(())
}

/// Eigenvalues with the number lying strictly above a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCount {
    pub eigenvalues: Vec<f64>,
    pub delta: f64,
    pub count_above: usize,
}

pub fn count_above(eigs: &[f64], delta: f64) -> Result<EigenCount> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("threshold must be positive, got {delta}")));
    }
    let mut eigenvalues = eigs.to_vec();
    eigenvalues.sort_by(f64::total_cmp);
    let count_above = eigenvalues.iter().filter(|&&l| l > delta).count();
    Ok(EigenCount { eigenvalues, delta, count_above })
}

/// Gram-weighted pieces of the localization pencil for one scatterer and
/// one test disk, all in weighted direction coordinates.
pub struct LocalizationPencil {
    /// Herglotz energy on the test disk boundary.
    pub energy: DMatrix<Complex64>,
    /// `||G^* g||^2` in H^{-1/2} of the scatterer boundary.
    pub leakage: DMatrix<Complex64>,
}

impl LocalizationPencil {
    pub fn new(
        disk: &TestDisk,
        space: &WeightedDirectionSpace,
        medium: &ElasticMedium,
        g: &DataToPatternMatrix,
        scatterer: &BoundaryDiscretization,
    ) -> Result<Self> {
        if g.matrix.nrows() != space.dim() || g.matrix.ncols() != scatterer.dim() {
            return Err(Error::Parameter("data-to-pattern matrix does not match the spaces".into()));
        }
        let energy = herglotz_energy(&herglotz_matrix(disk, space, medium), &disk.gram(), space)?;
        // G^* = Gamma0^{-1} G^H W; in weighted coordinates its H^{-1/2} energy is
        // W^{1/2} G Gamma0^{-1} Gamma_{-1/2} Gamma0^{-1} G^H W^{1/2}.
        let gm = sobolev_gram(scatterer, SobolevExponent::MinusHalf);
        let mut adj = g.matrix.adjoint();
        let s = space.sqrt_weights();
        for r in 0..adj.nrows() {
            let inv_l2 = 1.0 / scatterer.arc_weight(r / 2);
            adj.row_mut(r).iter_mut().for_each(|z| *z *= inv_l2);
        }
        for c in 0..adj.ncols() {
            let sc = s[c];
            adj.column_mut(c).iter_mut().for_each(|z| *z *= sc);
        }
        let root = gm.sqrt()?.map(Complex64::from);
        let b = root * adj;
        let leakage = b.adjoint() * b;
        Ok(LocalizationPencil { energy, leakage })
    }

    /// `||H_B g||^2` in H^{1/2}(dB) for g in unweighted coordinates.
    pub fn energy_norm(&self, g: &DVector<Complex64>, space: &WeightedDirectionSpace) -> f64 {
        let c = space.to_weighted(g);
        c.dotc(&(&self.energy * &c)).re.max(0.0).sqrt()
    }

    /// `||G^* g||` in H^{-1/2}(dD) for g in unweighted coordinates.
    pub fn leakage_norm(&self, g: &DVector<Complex64>, space: &WeightedDirectionSpace) -> f64 {
        let c = space.to_weighted(g);
        c.dotc(&(&self.leakage * &c)).re.max(0.0).sqrt()
    }
}

/// One member of a localized sequence.
#[derive(Debug, Clone)]
pub struct LocalizedDensity {
    pub sigma: f64,
    /// Density in unweighted coordinates.
    pub g: DVector<Complex64>,
    /// Top generalized eigenvalue of the pencil.
    pub ratio: f64,
}

/// Top generalized eigenvectors of `(A, G~^H G~ + sigma I)` for each sigma,
/// normalized to unit `C`-norm.
pub fn localized_density(
    pencil: &LocalizationPencil,
    space: &WeightedDirectionSpace,
    sigmas: &[f64],
) -> Result<Vec<LocalizedDensity>> {
    if sigmas.is_empty() || sigmas.iter().any(|&s| !(s > 0.0)) || sigmas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parameter("sigmas must be positive and strictly decreasing".into()));
    }
    let dim = space.dim();
    let mut out = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let mut c = pencil.leakage.clone();
        for i in 0..dim {
            c[(i, i)] += Complex64::from(sigma);
        }
        let c = hermitian_part(&c);
        let chol = c
            .cholesky()
            .ok_or_else(|| Error::Numerical(format!("regularized pencil is not positive definite at sigma {sigma}")))?;
        let l = chol.l();
        // L^{-1} A L^{-H}
        let la = l
            .solve_lower_triangular(&pencil.energy)
            .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
        let reduced = l
            .solve_lower_triangular(&la.adjoint())
            .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?
            .adjoint();
        let (values, vectors) = hermitian_eigen(&hermitian_part(&reduced))?;
        let top = vectors.column(dim - 1).into_owned();
        let v = l
            .adjoint()
            .solve_upper_triangular(&top)
            .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
        out.push(LocalizedDensity { sigma, g: space.from_weighted(&v), ratio: values[dim - 1] });
    }
    Ok(out)
}
