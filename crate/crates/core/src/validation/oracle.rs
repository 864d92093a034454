//! Reference evaluations used only to check the production code paths.
//!
//! Cylinder functions are summed from their ascending series in binary
//! fixed-point arithmetic with a few hundred fractional bits, which makes
//! the cancellation in the series harmless for every argument the checks
//! touch (|z| <= 100). Nothing here is shared with [`crate::specfun`].

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{Float, ToPrimitive, Zero};

const FRAC_BITS: u64 = 448;

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651";
const GAMMA_DIGITS: &str = "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174674951463144725";

/// Binary fixed-point real with `FRAC_BITS` fractional bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero();
        }
        let (mantissa, exp, sign) = x.integer_decode();
        let mut v = BigInt::from(mantissa);
        let shift = FRAC_BITS as i64 + exp as i64;
        if shift >= 0 {
            v <<= shift as u64;
        } else {
            v >>= (-shift) as u64;
        }
        Fixed(if sign < 0 { -v } else { v })
    }

    fn from_decimal(s: &str) -> Self {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Fixed((digits << FRAC_BITS) / scale)
    }

    pub fn pi() -> Self {
        Self::from_decimal(PI_DIGITS)
    }

    pub fn euler_gamma() -> Self {
        Self::from_decimal(GAMMA_DIGITS)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.0.bits();
        if bits == 0 {
            return 0.0;
        }
        let drop = bits.saturating_sub(62);
        let head = (&self.0 >> drop).to_f64().unwrap_or(0.0);
        head * 2f64.powi(drop as i32 - FRAC_BITS as i32)
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &other.0)
    }

    pub fn div_int(&self, d: i64) -> Fixed {
        Fixed(&self.0 / d)
    }

    pub fn mul_int(&self, m: i64) -> Fixed {
        Fixed(&self.0 * m)
    }

    pub fn is_negligible(&self) -> bool {
        self.0.bits() < 24
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Fixed {
        assert!(self.0.sign() == Sign::Plus, "ln of non-positive value");
        // self = m * 2^e with m in [1, 2)
        let e = self.0.bits() as i64 - 1 - FRAC_BITS as i64;
        let m = if e >= 0 {
            Fixed(&self.0 >> e as u64)
        } else {
            Fixed(&self.0 << (-e) as u64)
        };
        let ln_m = atanh_series(&(&m - &Fixed::from_int(1)).div(&(&m + &Fixed::from_int(1))));
        let ln2 = atanh_series(&Fixed::from_int(1).div_int(3));
        &ln_m + &ln2.mul_int(e)
    }
}

/// 2 atanh(y) = ln((1+y)/(1-y)) for |y| <= 1/3.
fn atanh_series(y: &Fixed) -> Fixed {
    let y2 = y * y;
    let mut power = y.clone();
    let mut sum = Fixed::zero();
    let mut k = 1i64;
    loop {
        let term = power.div_int(k);
        if term.is_negligible() {
            break;
        }
        sum = &sum + &term;
        power = &power * &y2;
        k += 2;
    }
    sum.mul_int(2)
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 * &rhs.0) >> FRAC_BITS)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

/// Complex fixed-point value.
#[derive(Clone, Debug)]
pub struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl CFixed {
    pub fn real(re: Fixed) -> Self {
        CFixed { re, im: Fixed::zero() }
    }

    pub fn imag(im: Fixed) -> Self {
        CFixed { re: Fixed::zero(), im }
    }

    pub fn scale(&self, s: &Fixed) -> CFixed {
        CFixed { re: &self.re * s, im: &self.im * s }
    }

    pub fn div_int(&self, d: i64) -> CFixed {
        CFixed { re: self.re.div_int(d), im: self.im.div_int(d) }
    }

    pub fn times_i(&self) -> CFixed {
        CFixed { re: -&self.im, im: self.re.clone() }
    }

    pub fn is_negligible(&self) -> bool {
        self.re.is_negligible() && self.im.is_negligible()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn recip(&self) -> CFixed {
        let den = &(&self.re * &self.re) + &(&self.im * &self.im);
        CFixed { re: self.re.div(&den), im: (-&self.im).div(&den) }
    }
}

impl Add for &CFixed {
    type Output = CFixed;
    fn add(self, rhs: &CFixed) -> CFixed {
        CFixed { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &CFixed {
    type Output = CFixed;
    fn sub(self, rhs: &CFixed) -> CFixed {
        CFixed { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &CFixed {
    type Output = CFixed;
    fn mul(self, rhs: &CFixed) -> CFixed {
        CFixed {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

/// Argument of the series: a point on the positive real or imaginary axis,
/// for which log(z/2) is known in closed form.
#[derive(Clone, Copy, Debug)]
pub enum SeriesArg {
    Real(f64),
    Imag(f64),
}

/// (J0, J1, Y0, Y1) at the given argument.
pub fn cylinder_series(arg: SeriesArg) -> [Complex64; 4] {
    let pi = Fixed::pi();
    let gamma = Fixed::euler_gamma();
    let (z, log_half) = match arg {
        SeriesArg::Real(x) => {
            let xf = Fixed::from_f64(x);
            let lh = xf.div_int(2).ln();
            (CFixed::real(xf), CFixed::real(lh))
        }
        SeriesArg::Imag(x) => {
            let xf = Fixed::from_f64(x);
            let lh = xf.div_int(2).ln();
            (CFixed::imag(xf), CFixed { re: lh, im: pi.div_int(2) })
        }
    };
    let half_z = z.div_int(2);
    let q = &half_z * &half_z;
    let minus_q = CFixed { re: -&q.re, im: -&q.im };

    let mut j0 = CFixed::real(Fixed::from_int(1));
    let mut j1 = half_z.clone();
    let mut t0 = j0.clone();
    let mut t1 = j1.clone();
    let mut harmonic = Fixed::zero();
    let one_minus_2g = &Fixed::from_int(1) - &gamma.mul_int(2);
    let mut tail0 = CFixed::real(Fixed::zero());
    let mut tail1 = t1.scale(&one_minus_2g);
    let mut k: i64 = 1;
    loop {
        harmonic = &harmonic + &Fixed::from_int(1).div_int(k);
        t0 = (&t0 * &minus_q).div_int(k * k);
        t1 = (&t1 * &minus_q).div_int(k * (k + 1));
        j0 = &j0 + &t0;
        j1 = &j1 + &t1;
        // (-1)^{k+1} H_k (z^2/4)^k/(k!)^2 = -H_k * t0
        let d0 = t0.scale(&-&harmonic);
        let psi_sum = &(&harmonic.mul_int(2) + &Fixed::from_int(1).div_int(k + 1)) - &gamma.mul_int(2);
        let d1 = t1.scale(&psi_sum);
        tail0 = &tail0 + &d0;
        tail1 = &tail1 + &d1;
        if k > 8 && t0.is_negligible() && t1.is_negligible() && d0.is_negligible() && d1.is_negligible() {
            break;
        }
        k += 1;
    }
    let two_over_pi = Fixed::from_int(2).div(&pi);
    let log_plus_gamma = &log_half + &CFixed::real(gamma);
    let y0 = (&(&log_plus_gamma * &j0) + &tail0).scale(&two_over_pi);
    let y1 = &(&(&log_half * &j1).scale(&two_over_pi) - &z.recip().scale(&two_over_pi))
        - &tail1.scale(&Fixed::from_int(1).div(&pi));
    [j0.to_c64(), j1.to_c64(), y0.to_c64(), y1.to_c64()]
}

/// J_n(x), Y_n(x) for real x > 0.
pub fn bessel_jy_reference(order: u32, x: f64) -> (f64, f64) {
    let v = cylinder_series(SeriesArg::Real(x));
    let n = order as usize;
    (v[n].re, v[2 + n].re)
}

/// H_n^{(1)}(i x) for x > 0 from the complex-argument series.
pub fn hankel1_imag_axis_reference(order: u32, x: f64) -> Complex64 {
    let v = cylinder_series(SeriesArg::Imag(x));
    let n = order as usize;
    v[n] + Complex64::i() * v[2 + n]
}
