//! Pointwise physics kernels in normalized units.
//!
//! Lengths are measured in reduced Compton wavelengths `λ = ħ/(m_e c)`, times
//! in `τ = ħ/(m_e c²)`, momenta in `m_e c`, electric fields in the critical
//! field `E_crit = m_e² c³/(e ħ)` and densities in the ion background density
//! `n0`. The dimensionless density is `N0 = n0 h³/(m_e c)³`.
//!
//! Every kernel is a pure function of its arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// CODATA 2018 values (SI). The first four are exact or defining constants.
pub mod si {
    /// Speed of light in vacuum, m/s.
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    /// Elementary charge, C.
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Electron mass, kg.
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    /// Vacuum permittivity, F/m.
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    /// Fine-structure constant.
    pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

    /// Critical (Schwinger) field `m_e² c³ / (e ħ)`, V/m.
    pub fn critical_field() -> f64 {
        ELECTRON_MASS * ELECTRON_MASS * SPEED_OF_LIGHT.powi(3) / (ELEMENTARY_CHARGE * HBAR)
    }

    /// Reduced Compton wavelength `ħ/(m_e c)`, m.
    pub fn compton_length() -> f64 {
        HBAR / (ELECTRON_MASS * SPEED_OF_LIGHT)
    }

    /// Compton time `ħ/(m_e c²)`, s.
    pub fn compton_time() -> f64 {
        compton_length() / SPEED_OF_LIGHT
    }
}

/// Default small-field cutoff for the Schwinger kernels.
pub const DEFAULT_EPS_FIELD: f64 = 1e-8;

/// Normalized physical constants of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsParams {
    /// Dimensionless background density `n0 h³/(m_e c)³`.
    pub n0: f64,
    /// Fine-structure constant.
    pub alpha: f64,
    /// Normalized plasma frequency squared; always derived from `n0` and `alpha`.
    pub omega_pe_sq: f64,
    /// Normalized recombination coefficient.
    pub a: f64,
    /// Below this |E| the Schwinger kernels return exactly zero.
    pub eps_field: f64,
}

impl PhysicsParams {
    pub fn new(n0: f64, alpha: f64, a: f64, eps_field: f64) -> Result<Self> {
        let omega = derived_plasma_frequency(n0, alpha)?;
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "recombination coefficient a must be >= 0, got {a}"
            )));
        }
        if !(eps_field > 0.0 && eps_field.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eps_field must be > 0, got {eps_field}"
            )));
        }
        Ok(Self {
            n0,
            alpha,
            omega_pe_sq: omega * omega,
            a,
            eps_field,
        })
    }

    /// Dense-plasma parameters of the reference run: `N0 = 0.2`, CODATA `α`.
    pub fn reference() -> Self {
        Self::new(0.2, si::FINE_STRUCTURE, 0.0, DEFAULT_EPS_FIELD).expect("valid defaults")
    }

    pub fn omega_pe(&self) -> f64 {
        self.omega_pe_sq.sqrt()
    }

    pub fn schwinger_rate(&self, e: f64) -> Result<f64> {
        schwinger_rate_norm(e, self.n0, self.eps_field)
    }

    pub fn displacement_flux(&self, e: f64, gamma: f64) -> Result<f64> {
        displacement_flux(e, gamma, self.n0, self.eps_field)
    }
}

/// Normalized electron plasma frequency `sqrt(2 α N0) / (2π)`.
pub fn derived_plasma_frequency(n0: f64, alpha: f64) -> Result<f64> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::InvalidParameter(format!("N0 must be > 0, got {n0}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be > 0, got {alpha}"
        )));
    }
    Ok((2.0 * alpha * n0).sqrt() / (2.0 * PI))
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v.is_infinite() {
        Err(Error::InvalidState(format!("{name} is not finite ({v})")))
    } else {
        Ok(())
    }
}

/// `exp(-π/|E|)`, with the small-field guard applied.
fn suppression(e: f64, eps_field: f64) -> Option<f64> {
    let abs = e.abs();
    if abs < eps_field {
        return None;
    }
    let s = (-PI / abs).exp();
    (s > 0.0).then_some(s)
}

/// Normalized Schwinger pair-creation rate `(E²/N0) exp(-π/|E|)`.
///
/// Returns exactly zero for `|E| < eps_field` or when the exponential
/// underflows (|E| below roughly 4.4e-3).
pub fn schwinger_rate_norm(e: f64, n0: f64, eps_field: f64) -> Result<f64> {
    check_finite("E", e)?;
    Ok(match suppression(e, eps_field) {
        Some(s) => e * e / n0 * s,
        None => 0.0,
    })
}

/// Schwinger pair-creation rate in SI units (pairs per m³ per s) for a field
/// given in V/m.
pub fn schwinger_rate_si(e_field: f64) -> Result<f64> {
    check_finite("E", e_field)?;
    if e_field == 0.0 {
        return Ok(0.0);
    }
    let ec = si::critical_field();
    let lambda = si::compton_length();
    let prefactor = si::SPEED_OF_LIGHT / ((2.0 * PI).powi(3) * lambda.powi(4));
    let ratio = e_field / ec;
    Ok(prefactor * ratio * ratio * (-PI / ratio.abs()).exp())
}

/// Converts an SI pair-creation rate into normalized units for density `N0`,
/// i.e. divides by `n0/τ = N0 c / ((2π)³ λ⁴)`.
pub fn si_rate_to_normalized(rate_si: f64, n0: f64) -> f64 {
    rate_si * si::compton_length().powi(3) * si::compton_time() * (2.0 * PI).powi(3) / n0
}

/// Relativistic gamma factor for a normalized momentum.
#[inline]
pub fn lorentz_gamma(p: f64) -> f64 {
    (1.0 + p * p).sqrt()
}

/// Spatial offset flux `γ q0 / E = γ (E/N0) exp(-π/|E|)`; odd in `E`.
pub fn displacement_flux(e: f64, gamma: f64, n0: f64, eps_field: f64) -> Result<f64> {
    check_finite("E", e)?;
    check_finite("gamma", gamma)?;
    Ok(match suppression(e, eps_field) {
        Some(s) => gamma * e / n0 * s,
        None => 0.0,
    })
}

fn check_density(name: &str, n: f64) -> Result<()> {
    check_finite(name, n)?;
    if n < 0.0 {
        return Err(Error::InvalidState(format!("{name} is negative ({n})")));
    }
    Ok(())
}

/// Pair annihilation loss `a n_e n_p`.
pub fn recombination_loss(n_e: f64, n_p: f64, a: f64) -> Result<f64> {
    check_density("n_e", n_e)?;
    check_density("n_p", n_p)?;
    Ok(a * n_e * n_p)
}

/// Momentum exchange from annihilation, `-a n_other (p_self - p_other)`.
pub fn recombination_momentum_exchange(
    p_self: f64,
    p_other: f64,
    n_other: f64,
    a: f64,
) -> Result<f64> {
    check_finite("p", p_self)?;
    check_finite("p", p_other)?;
    check_density("n", n_other)?;
    Ok(-a * n_other * (p_self - p_other))
}
