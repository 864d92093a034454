//! Cylinder functions of orders 0 and 1.
//!
//! J and Y use their ascending series (with the logarithmic term for Y) up
//! to [`ASYMPTOTIC_CROSSOVER`] and Hankel's large-argument expansion above
//! it. K uses the logarithmic ascending series for `x <= 2` and Steed's
//! continued fraction beyond. I is only ever needed for moderate arguments
//! and always uses its ascending series.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Argument above which J and Y switch to the asymptotic expansion.
pub const ASYMPTOTIC_CROSSOVER: f64 = 12.5;

const K_SERIES_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 400;

/// Values of a cylinder function at orders 0 and 1 for one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair<T> {
    pub order0: T,
    pub order1: T,
}

impl<T: Copy> BesselPair<T> {
    pub fn get(&self, order: u32) -> T {
        if order == 0 {
            self.order0
        } else {
            self.order1
        }
    }
}

fn check_order(order: u32) -> Result<()> {
    if order > 1 {
        return Err(Error::Domain(format!("only orders 0 and 1 are provided, got {order}")));
    }
    Ok(())
}

fn check_positive(z: f64, what: &str) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("{what} requires a finite positive argument, got {z}")));
    }
    Ok(())
}

/// J_order(z) and Y_order(z) for real z > 0.
pub fn bessel_jy(order: u32, z: f64) -> Result<(f64, f64)> {
    check_order(order)?;
    let (j, y) = jy_pair(z)?;
    Ok((j.get(order), y.get(order)))
}

/// J0, J1 and Y0, Y1 at the same argument.
pub fn jy_pair(z: f64) -> Result<(BesselPair<f64>, BesselPair<f64>)> {
    check_positive(z, "Bessel J/Y")?;
    Ok(if z <= ASYMPTOTIC_CROSSOVER {
        jy_series(z)
    } else {
        jy_asymptotic(z)
    })
}

/// J0 and J1 for real z >= 0 (no branch point, so z = 0 is allowed).
pub fn bessel_j_pair(z: f64) -> BesselPair<f64> {
    if z <= ASYMPTOTIC_CROSSOVER {
        j_series(z)
    } else {
        jy_asymptotic(z).0
    }
}

/// Hankel function of the first kind, H_order(z) = J_order(z) + i Y_order(z).
pub fn hankel1(order: u32, z: f64) -> Result<Complex64> {
    check_order(order)?;
    Ok(hankel1_pair(z)?.get(order))
}

pub fn hankel1_pair(z: f64) -> Result<BesselPair<Complex64>> {
    let (j, y) = jy_pair(z)?;
    Ok(BesselPair {
        order0: Complex64::new(j.order0, y.order0),
        order1: Complex64::new(j.order1, y.order1),
    })
}

/// Modified Bessel function of the second kind K_order(x), x > 0.
pub fn modbessel_k(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    Ok(modbessel_k_pair(x)?.get(order))
}

pub fn modbessel_k_pair(x: f64) -> Result<BesselPair<f64>> {
    check_positive(x, "modified Bessel K")?;
    Ok(if x <= K_SERIES_LIMIT {
        k_series(x)
    } else {
        k_continued_fraction(x)
    })
}

/// Modified Bessel function of the first kind I0, I1 for x >= 0.
pub fn modbessel_i_pair(x: f64) -> BesselPair<f64> {
    let q = 0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 0.5 * x);
    let (mut i0, mut i1) = (t0, t1);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        i0 += t0;
        i1 += t1;
        if t0 <= f64::EPSILON * 1e-3 * i0 && t1 <= f64::EPSILON * 1e-3 * i1 {
            break;
        }
    }
    BesselPair { order0: i0, order1: i1 }
}

fn j_series(z: f64) -> BesselPair<f64> {
    let q = -0.25 * z * z;
    let (mut t0, mut t1) = (1.0, 0.5 * z);
    let (mut j0, mut j1) = (t0, t1);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        j0 += t0;
        j1 += t1;
        if t0.abs() < 1e-18 && t1.abs() < 1e-18 {
            break;
        }
    }
    BesselPair { order0: j0, order1: j1 }
}

fn jy_series(z: f64) -> (BesselPair<f64>, BesselPair<f64>) {
    let j = j_series(z);
    let q = -0.25 * z * z;
    let log_half = (0.5 * z).ln();

    // Y0 tail: sum_{k>=1} (-1)^{k+1} H_k (z^2/4)^k / (k!)^2
    // Y1 tail: sum_{k>=0} (-1)^k (psi(k+1) + psi(k+2)) (z/2)^{2k+1} / (k!(k+1)!)
    let mut harmonic = 0.0;
    let mut t0 = 1.0;
    let mut t1 = 0.5 * z;
    let mut tail0 = 0.0;
    let mut tail1 = (1.0 - 2.0 * EULER_GAMMA) * t1;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        let d0 = -harmonic * t0;
        let psi_sum = 2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        let d1 = psi_sum * t1;
        tail0 += d0;
        tail1 += d1;
        if d0.abs() < 1e-18 && d1.abs() < 1e-18 {
            break;
        }
    }
    let y0 = FRAC_2_PI * ((log_half + EULER_GAMMA) * j.order0 + tail0);
    let y1 = -FRAC_2_PI / z + FRAC_2_PI * log_half * j.order1 - tail1 / PI;
    (j, BesselPair { order0: y0, order1: y1 })
}

/// Hankel's expansion J = sqrt(2/(pi z)) (P cos chi - Q sin chi),
/// Y = sqrt(2/(pi z)) (P sin chi + Q cos chi), chi = z - (nu/2 + 1/4) pi.
fn jy_asymptotic(z: f64) -> (BesselPair<f64>, BesselPair<f64>) {
    let amp = (FRAC_2_PI / z).sqrt();
    let mut j = [0.0; 2];
    let mut y = [0.0; 2];
    for nu in 0..2 {
        let mu = 4.0 * (nu * nu) as f64;
        let (p, q) = hankel_pq(mu, z);
        let chi = z - (0.5 * nu as f64 + 0.25) * PI;
        let (s, c) = reduced_sin_cos(z, chi - z);
        j[nu] = amp * (p * c - q * s);
        y[nu] = amp * (p * s + q * c);
    }
    (
        BesselPair { order0: j[0], order1: j[1] },
        BesselPair { order0: y[0], order1: y[1] },
    )
}

/// sin and cos of `z + shift` computed through the angle-addition formula,
/// so the large argument is reduced only once.
fn reduced_sin_cos(z: f64, shift: f64) -> (f64, f64) {
    let (sz, cz) = z.sin_cos();
    let (ss, cs) = shift.sin_cos();
    (sz * cs + cz * ss, cz * cs - sz * ss)
}

fn hankel_pq(mu: f64, z: f64) -> (f64, f64) {
    let inv8z = 1.0 / (8.0 * z);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) * inv8z / k as f64;
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn k_series(x: f64) -> BesselPair<f64> {
    let i = modbessel_i_pair(x);
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();
    let mut harmonic = 0.0;
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut tail0 = 0.0;
    let mut tail1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        let d0 = harmonic * t0;
        let d1 = (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * t1;
        tail0 += d0;
        tail1 += d1;
        if d0 < 1e-18 * tail0.abs().max(1.0) && d1 < 1e-18 * tail1.abs().max(1.0) {
            break;
        }
    }
    BesselPair {
        order0: -(log_half + EULER_GAMMA) * i.order0 + tail0,
        order1: 1.0 / x + log_half * i.order1 - 0.25 * x * tail1,
    }
}

/// Steed's CF2 evaluation of K0 and K1 (Temme's normalisation), valid for x >= 2.
fn k_continued_fraction(x: f64) -> BesselPair<f64> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    BesselPair { order0: k0, order1: k1 }
}

/// Leading large-argument modulus sqrt(2/(pi z)) of H0.
pub fn hankel_modulus_asymptote(z: f64) -> f64 {
    (FRAC_2_PI / z).sqrt()
}
