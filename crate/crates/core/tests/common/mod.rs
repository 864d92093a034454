//! Helpers shared by the integration tests.
#![allow(dead_code)]

use elmono::elastic::{green_tensor, helmholtz_components, CVec2, ElasticMedium, Point};
use num_complex::Complex64;

/// `sqrt(R) e^{-ik R}` times the P (or S) part of a Green's tensor column at
/// `R xhat`.
pub fn extracted_amplitude(medium: &ElasticMedium, z: Point, e: Point, xhat: Point, radius: f64, shear: bool) -> CVec2 {
    let e = [Complex64::from(e[0]), Complex64::from(e[1])];
    let column = |x: Point| Ok(green_tensor(x, z, medium)?.apply(e));
    let x = [radius * xhat[0], radius * xhat[1]];
    let (up, us) = helmholtz_components(column, x, medium, 1e-2).unwrap();
    let (k, u) = if shear { (medium.ks, us) } else { (medium.kp, up) };
    let scale = Complex64::from_polar(radius.sqrt(), -k * radius);
    [u[0] * scale, u[1] * scale]
}

pub fn richardson(near: CVec2, far: CVec2) -> CVec2 {
    [far[0] * 2.0 - near[0], far[1] * 2.0 - near[1]]
}

pub fn vdiff(a: CVec2, b: CVec2) -> f64 {
    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
}

pub fn vnorm(a: CVec2) -> f64 {
    a[0].norm().max(a[1].norm())
}
