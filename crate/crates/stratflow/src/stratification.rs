//! Background density profiles and linear-theory reference quantities.
//!
//! The undisturbed fluid is stratified in density; profiles are static-stable
//! (non-increasing with height).  The exponential profile
//! rho0(z) = rho00 * exp(-z/H) is the default; a linear profile
//! rho0(z) = rho00 - a*z and a constant profile are also supported.

use crate::error::{Error, Result};

pub const G: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StratificationProfile {
    /// rho0(z) = rho00 * exp(-z/H), scale H in meters.
    Exponential { rho00: f64, scale_h: f64 },
    /// rho0(z) = rho00 - a*z, gradient a in kg/m^4.
    Linear { rho00: f64, a: f64 },
    Constant { rho00: f64 },
}

impl StratificationProfile {
    pub fn exponential(rho00: f64, scale_h: f64) -> Result<Self> {
        if rho00 <= 0.0 || scale_h <= 0.0 {
            return Err(Error::Config(format!(
                "exponential profile needs rho00 > 0 and H > 0 (got {rho00}, {scale_h})"
            )));
        }
        Ok(StratificationProfile::Exponential { rho00, scale_h })
    }

    /// `height` is the domain height; the profile must stay positive over it.
    pub fn linear(rho00: f64, a: f64, height: f64) -> Result<Self> {
        if rho00 <= 0.0 || a < 0.0 || rho00 - a * height <= 0.0 {
            return Err(Error::Config(format!(
                "linear profile must stay positive and non-increasing over [0, {height}] (rho00 = {rho00}, a = {a})"
            )));
        }
        Ok(StratificationProfile::Linear { rho00, a })
    }

    pub fn constant(rho00: f64) -> Result<Self> {
        if rho00 <= 0.0 {
            return Err(Error::Config(format!("constant density must be positive (got {rho00})")));
        }
        Ok(StratificationProfile::Constant { rho00 })
    }

    /// Density at z = 0, the maximum of the profile.
    pub fn rho_bottom(&self) -> f64 {
        match *self {
            StratificationProfile::Exponential { rho00, .. }
            | StratificationProfile::Linear { rho00, .. }
            | StratificationProfile::Constant { rho00 } => rho00,
        }
    }

    /// Stratification scale of the exponential profile, if that is the kind.
    pub fn scale(&self) -> Option<f64> {
        match *self {
            StratificationProfile::Exponential { scale_h, .. } => Some(scale_h),
            _ => None,
        }
    }

    /// Background density without the domain check; z may be any finite value.
    #[inline]
    pub fn rho0_unchecked(&self, z: f64) -> f64 {
        match *self {
            StratificationProfile::Exponential { rho00, scale_h } => rho00 * (-z / scale_h).exp(),
            StratificationProfile::Linear { rho00, a } => rho00 - a * z,
            StratificationProfile::Constant { rho00 } => rho00,
        }
    }
}

/// Background density at height z within the domain.
pub fn rho0(profile: &StratificationProfile, z: f64, domain_height: f64) -> Result<f64> {
    if !(0.0..=domain_height).contains(&z) {
        return Err(Error::OutOfDomain {
            z,
            height: domain_height,
        });
    }
    Ok(profile.rho0_unchecked(z))
}

/// Brunt-Vaisala frequency N in rad/s: N^2 = -(g/rho0) d rho0/dz, evaluated
/// at z = 0 for the linear profile.  Zero for constant density.
pub fn buoyancy_frequency(profile: &StratificationProfile) -> f64 {
    match *profile {
        StratificationProfile::Exponential { scale_h, .. } => (G / scale_h).sqrt(),
        StratificationProfile::Linear { rho00, a } => (G * a / rho00).sqrt(),
        StratificationProfile::Constant { .. } => 0.0,
    }
}

/// Fastest internal-wave phase speed in a channel of the given depth,
/// c = N * depth / pi (gravest vertical mode, long-wave limit).
pub fn max_linear_phase_speed(profile: &StratificationProfile, depth: f64) -> f64 {
    buoyancy_frequency(profile) * depth / std::f64::consts::PI
}
