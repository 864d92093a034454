//! Isotropic elastic medium, plane waves and the Navier Green's tensor.
//!
//! The Green's tensor is evaluated in split form
//! `G(x, y) = phi1(r) I + phi2(r) rhat rhat^T`, `rhat = (x - y)/r`, with
//!
//! ```text
//! phi1 = i/(4 mu) H0(ks r) - i/(4 w^2 r) [ks H1(ks r) - kp H1(kp r)]
//! phi2 = i/(4 w^2) [kp^2 H0(kp r) - ks^2 H0(ks r) + (2/r)(ks H1(ks r) - kp H1(kp r))]
//! ```
//!
//! Each coefficient is further written as `L(r) log r + R(r)` with `L, R`
//! analytic in `r^2`; the boundary quadrature consumes `L` and the `r -> 0`
//! limits of `R`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{self, EULER_GAMMA};

pub type Point = [f64; 2];
pub type CVec2 = [Complex64; 2];
pub type CMat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Lame constants, angular frequency and the derived wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
    pub kp: f64,
    pub ks: f64,
}

impl ElasticMedium {
    pub fn new(lambda: f64, mu: f64, omega: f64) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite() && omega.is_finite()) {
            return Err(Error::Parameter("medium parameters must be finite".into()));
        }
        if !(mu > 0.0 && lambda + mu > 0.0) {
            return Err(Error::Parameter(format!(
                "strong ellipticity requires mu > 0 and lambda + mu > 0 (lambda = {lambda}, mu = {mu})"
            )));
        }
        if omega <= 0.0 {
            return Err(Error::Parameter(format!("angular frequency must be positive, got {omega}")));
        }
        Ok(ElasticMedium {
            lambda,
            mu,
            omega,
            kp: omega / (lambda + 2.0 * mu).sqrt(),
            ks: omega / mu.sqrt(),
        })
    }

    /// P-wave modulus lambda + 2 mu.
    pub fn p_modulus(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn wavenumber(&self, wave: WaveType) -> f64 {
        match wave {
            WaveType::P => self.kp,
            WaveType::S => self.ks,
        }
    }
}

/// Shorthand for [`ElasticMedium::new`].
pub fn make_medium(lambda: f64, mu: f64, omega: f64) -> Result<ElasticMedium> {
    ElasticMedium::new(lambda, mu, omega)
}

/// Compressional or shear wave component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveType {
    P,
    S,
}

/// Counter-clockwise rotation by a right angle, d_perp = (-d2, d1).
#[inline]
pub fn perp(d: Point) -> Point {
    [-d[1], d[0]]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn unit_direction(theta: f64) -> Point {
    [theta.cos(), theta.sin()]
}

/// Incident plane wave `ap d e^{i kp d.x} + as d_perp e^{i ks d.x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSpec {
    pub direction: Point,
    pub ap: Complex64,
    pub as_: Complex64,
}

impl PlaneWaveSpec {
    pub fn new(direction: Point, ap: Complex64, as_: Complex64) -> Result<Self> {
        let norm = direction[0].hypot(direction[1]);
        if (norm - 1.0).abs() > 1e-14 {
            return Err(Error::Parameter(format!("direction must be a unit vector (|d| = {norm})")));
        }
        if ap == ZERO && as_ == ZERO {
            return Err(Error::Parameter("plane wave amplitudes are both zero".into()));
        }
        Ok(PlaneWaveSpec { direction, ap, as_ })
    }

    pub fn pressure(direction: Point) -> Result<Self> {
        Self::new(direction, Complex64::new(1.0, 0.0), ZERO)
    }

    pub fn shear(direction: Point) -> Result<Self> {
        Self::new(direction, ZERO, Complex64::new(1.0, 0.0))
    }
}

pub fn incident_field(spec: &PlaneWaveSpec, medium: &ElasticMedium, x: Point) -> CVec2 {
    let d = spec.direction;
    let dp = perp(d);
    let phase = dot(d, x);
    let ep = Complex64::from_polar(1.0, medium.kp * phase) * spec.ap;
    let es = Complex64::from_polar(1.0, medium.ks * phase) * spec.as_;
    [ep * d[0] + es * dp[0], ep * d[1] + es * dp[1]]
}

/// 2x2 complex value of the Green's tensor at one point pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensorValue(pub CMat2);

impl GreenTensorValue {
    fn from_split(phi1: Complex64, phi2: Complex64, rhat: Point) -> Self {
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = phi2 * (rhat[i] * rhat[j]);
            }
            m[i][i] += phi1;
        }
        GreenTensorValue(m)
    }

    pub fn apply(&self, v: CVec2) -> CVec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        GreenTensorValue([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Frequency at which a boundary operator is built: the physical real
/// frequency of the medium, or the imaginary unit (the coercive reference
/// operator).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frequency {
    Real,
    ImaginaryUnit,
}

/// Kernel-split coefficients (phi1, phi2) at distance r > 0.
pub fn split_coefficients(r: f64, medium: &ElasticMedium, freq: Frequency) -> Result<(Complex64, Complex64)> {
    match freq {
        Frequency::Real => split_real(r, medium),
        Frequency::ImaginaryUnit => split_imag(r, medium),
    }
}

fn split_real(r: f64, medium: &ElasticMedium) -> Result<(Complex64, Complex64)> {
    let hp = specfun::hankel1_pair(medium.kp * r)?;
    let hs = specfun::hankel1_pair(medium.ks * r)?;
    let (kp, ks, w2) = (medium.kp, medium.ks, medium.omega * medium.omega);
    let i = Complex64::i();
    let diff1 = hs.order1 * ks - hp.order1 * kp;
    let phi1 = i / (4.0 * medium.mu) * hs.order0 - i / (4.0 * w2 * r) * diff1;
    let phi2 = i / (4.0 * w2) * (hp.order0 * (kp * kp) - hs.order0 * (ks * ks) + diff1 * (2.0 / r));
    Ok((phi1, phi2))
}

/// At omega = i the wavenumbers become i*kappa with kappa = 1/sqrt(modulus);
/// H0(i t) = 2/(i pi) K0(t) and H1(i t) = -2/pi K1(t) turn the split into
/// real functions.
fn split_imag(r: f64, medium: &ElasticMedium) -> Result<(Complex64, Complex64)> {
    let (cp, cs) = imag_decay_rates(medium);
    let kp = specfun::modbessel_k_pair(cp * r)?;
    let ks = specfun::modbessel_k_pair(cs * r)?;
    let diff1 = cs * ks.order1 - cp * kp.order1;
    let phi1 = ks.order0 / (2.0 * PI * medium.mu) + diff1 / (2.0 * PI * r);
    let phi2 = -(cs * cs * ks.order0 - cp * cp * kp.order0) / (2.0 * PI) - diff1 / (PI * r);
    Ok((phi1.into(), phi2.into()))
}

/// Decay rates (kappa_p, kappa_s) of the kernel at omega = i.
pub fn imag_decay_rates(medium: &ElasticMedium) -> (f64, f64) {
    (1.0 / medium.p_modulus().sqrt(), 1.0 / medium.mu.sqrt())
}

/// Coefficients (L1, L2) of `log r` in phi1 and phi2.
pub fn split_log_parts(r: f64, medium: &ElasticMedium, freq: Frequency) -> (f64, f64) {
    match freq {
        Frequency::Real => {
            let (kp, ks, w2) = (medium.kp, medium.ks, medium.omega * medium.omega);
            let jp = specfun::bessel_j_pair(kp * r);
            let js = specfun::bessel_j_pair(ks * r);
            let d = j1_over_r_diff(ks, kp, r, js.order1, jp.order1);
            let l1 = -js.order0 / (2.0 * PI * medium.mu) + d / (2.0 * PI * w2);
            let l2 = -(kp * kp * jp.order0 - ks * ks * js.order0 + 2.0 * d) / (2.0 * PI * w2);
            (l1, l2)
        }
        Frequency::ImaginaryUnit => {
            let (cp, cs) = imag_decay_rates(medium);
            let ip = specfun::modbessel_i_pair(cp * r);
            let is = specfun::modbessel_i_pair(cs * r);
            let d = i1_over_r_diff(cs, cp, r, is.order1, ip.order1);
            let l1 = -is.order0 / (2.0 * PI * medium.mu) + d / (2.0 * PI);
            let l2 = (cs * cs * is.order0 - cp * cp * ip.order0) / (2.0 * PI) - d / PI;
            (l1, l2)
        }
    }
}

/// (ks J1(ks r) - kp J1(kp r)) / r, with its r -> 0 limit.
fn j1_over_r_diff(ks: f64, kp: f64, r: f64, j1s: f64, j1p: f64) -> f64 {
    if r == 0.0 {
        0.5 * (ks * ks - kp * kp)
    } else {
        (ks * j1s - kp * j1p) / r
    }
}

fn i1_over_r_diff(cs: f64, cp: f64, r: f64, i1s: f64, i1p: f64) -> f64 {
    if r == 0.0 {
        0.5 * (cs * cs - cp * cp)
    } else {
        (cs * i1s - cp * i1p) / r
    }
}

/// Limits as r -> 0 of the smooth remainders: (L1(0), R1(0), R2(0)).
/// L2(0) vanishes identically.
///
/// Derived from the ascending series of H0 and H1, written for complex
/// wavenumbers so the same expression covers omega = i.
pub fn split_diagonal_limits(medium: &ElasticMedium, freq: Frequency) -> (f64, Complex64, Complex64) {
    let i = Complex64::i();
    let (kp, ks, w2) = match freq {
        Frequency::Real => (
            Complex64::from(medium.kp),
            Complex64::from(medium.ks),
            Complex64::from(medium.omega * medium.omega),
        ),
        Frequency::ImaginaryUnit => {
            let (cp, cs) = imag_decay_rates(medium);
            (i * cp, i * cs, Complex64::from(-1.0))
        }
    };
    let mu = medium.mu;
    let l1 = -(1.0 / mu + 1.0 / medium.p_modulus()) / (4.0 * PI);
    let (kp2, ks2) = (kp * kp, ks * ks);
    let log_p = (kp / 2.0).ln();
    let log_s = (ks / 2.0).ln();
    let r1 = i / (4.0 * mu) - (log_s + EULER_GAMMA) / (2.0 * PI * mu)
        + i / (4.0 * w2)
            * ((kp2 - ks2) / 2.0
                + i * ((kp2 * log_p - ks2 * log_s) / PI - (kp2 - ks2) * (1.0 - 2.0 * EULER_GAMMA) / (2.0 * PI)));
    let r2 = (ks2 - kp2) / (4.0 * PI * w2);
    let r1 = match freq {
        Frequency::Real => r1,
        Frequency::ImaginaryUnit => Complex64::from(r1.re),
    };
    let r2 = match freq {
        Frequency::Real => r2,
        Frequency::ImaginaryUnit => Complex64::from(r2.re),
    };
    (l1, r1, r2)
}

fn green_at(x: Point, y: Point, medium: &ElasticMedium, freq: Frequency) -> Result<GreenTensorValue> {
    let dx = [x[0] - y[0], x[1] - y[1]];
    let r = dx[0].hypot(dx[1]);
    if r == 0.0 {
        return Err(Error::Singularity);
    }
    let (phi1, phi2) = split_coefficients(r, medium, freq)?;
    Ok(GreenTensorValue::from_split(phi1, phi2, [dx[0] / r, dx[1] / r]))
}

/// Green's tensor of the Navier equation at the medium's frequency.
pub fn green_tensor(x: Point, y: Point, medium: &ElasticMedium) -> Result<GreenTensorValue> {
    green_at(x, y, medium, Frequency::Real)
}

/// Green's tensor with omega replaced by the imaginary unit.
pub fn green_tensor_imag(x: Point, y: Point, medium: &ElasticMedium) -> Result<GreenTensorValue> {
    green_at(x, y, medium, Frequency::ImaginaryUnit)
}

/// Far-field amplitudes of the single-layer kernel:
/// `kp_amp * xhat xhat^T e^{-i kp xhat.y}` and
/// `ks_amp * (I - xhat xhat^T) e^{-i ks xhat.y}`.
pub fn farfield_prefactors(medium: &ElasticMedium) -> (Complex64, Complex64) {
    let phase = Complex64::from_polar(1.0, FRAC_PI_4);
    let p = phase / (medium.p_modulus() * (8.0 * PI * medium.kp).sqrt());
    let s = phase / (medium.mu * (8.0 * PI * medium.ks).sqrt());
    (p, s)
}

/// Far-field kernels (Kp, Ks) for observation direction `xhat` and source `y`.
pub fn farfield_kernel(xhat: Point, y: Point, medium: &ElasticMedium) -> Result<(CMat2, CMat2)> {
    let norm = xhat[0].hypot(xhat[1]);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("observation direction must be unit (|xhat| = {norm})")));
    }
    let (cp, cs) = farfield_prefactors(medium);
    let phase = dot(xhat, y);
    let ap = cp * Complex64::from_polar(1.0, -medium.kp * phase);
    let as_ = cs * Complex64::from_polar(1.0, -medium.ks * phase);
    let mut kp = [[ZERO; 2]; 2];
    let mut ks = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let proj = xhat[i] * xhat[j];
            let id = if i == j { 1.0 } else { 0.0 };
            kp[i][j] = ap * proj;
            ks[i][j] = as_ * (id - proj);
        }
    }
    Ok((kp, ks))
}

/// Compressional and shear parts `u_p = -(1/kp^2) grad div u` and
/// `u_s = (1/ks^2) curl curl u` of a field, by central differences.
///
/// The vector curl of a scalar is taken as `(d2 w, -d1 w)`, the convention
/// under which `u_p + u_s = u` for solutions of the Navier equation.
pub fn helmholtz_components<F>(field: F, x: Point, medium: &ElasticMedium, h: f64) -> Result<(CVec2, CVec2)>
where
    F: Fn(Point) -> Result<CVec2>,
{
    if !(h > 0.0) {
        return Err(Error::Parameter("finite-difference step must be positive".into()));
    }
    let at = |a: f64, b: f64| field([x[0] + a * h, x[1] + b * h]);
    let c = at(0.0, 0.0)?;
    let (e, w, n, s) = (at(1.0, 0.0)?, at(-1.0, 0.0)?, at(0.0, 1.0)?, at(0.0, -1.0)?);
    let (ne, nw, se, sw) = (at(1.0, 1.0)?, at(-1.0, 1.0)?, at(1.0, -1.0)?, at(-1.0, -1.0)?);
    let h2 = h * h;
    let d11 = |k: usize| (e[k] - c[k] * 2.0 + w[k]) / h2;
    let d22 = |k: usize| (n[k] - c[k] * 2.0 + s[k]) / h2;
    let d12 = |k: usize| (ne[k] - nw[k] - se[k] + sw[k]) / (4.0 * h2);
    let grad_div = [d11(0) + d12(1), d12(0) + d22(1)];
    let curl_curl = [d12(1) - d22(0), d12(0) - d11(1)];
    let kp2 = medium.kp * medium.kp;
    let ks2 = medium.ks * medium.ks;
    Ok((
        [-grad_div[0] / kp2, -grad_div[1] / kp2],
        [curl_curl[0] / ks2, curl_curl[1] / ks2],
    ))
}
