//! Far-field synthesis for time-harmonic elastic scattering by a rigid
//! obstacle in the plane, and shape reconstruction by eigenvalue counting of
//! `Re(F) + H_B^* H_B` over a sweep of test disks `B`.

pub mod boundary;
pub mod config;
pub mod elastic;
pub mod error;
pub mod forward;
pub mod probe;
pub mod reconstruct;
pub mod specfun;

pub use error::{Error, Result};
pub mod validation;
