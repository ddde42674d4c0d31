//! Physical layer: path loss, Rayleigh fading and uniform-disc placement.
//!
//! The received SNR of a user at distance r is g = c_L·|h|²·r^{−a} with
//! |h|² ~ Exp(1) and r distributed with density 2t/R² on [0, R].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::hyp1f1_ratio;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Converts a noise density in dBm/Hz to W/Hz.
pub fn dbm_per_hz_to_w_per_hz(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Physical-layer and population constants of one cell. All quantities are
/// linear scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// L, number of users sharing the band.
    pub num_users: u32,
    /// Transmit power per user, W.
    pub tx_power_w: f64,
    /// Total bandwidth W, split equally among the L users, Hz.
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    /// N₀, W/Hz.
    pub noise_density_w_per_hz: f64,
    /// Path-loss exponent a.
    pub pathloss_exp: f64,
    pub cell_radius_m: f64,
}

impl NetworkParams {
    /// Simulation defaults: L = 30, 1 W, 20 MHz, 2.4 GHz, −174 dBm/Hz, a = 3,
    /// with a 500 m cell.
    pub fn table1() -> Self {
        Self {
            num_users: 30,
            tx_power_w: 1.0,
            bandwidth_hz: 20e6,
            carrier_hz: 2.4e9,
            noise_density_w_per_hz: dbm_per_hz_to_w_per_hz(-174.0),
            pathloss_exp: 3.0,
            cell_radius_m: 500.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "NetworkParams";
        if self.num_users < 1 {
            return Err(domain(OP, "num_users must be at least 1"));
        }
        let positive = [
            ("tx_power_w", self.tx_power_w),
            ("bandwidth_hz", self.bandwidth_hz),
            ("carrier_hz", self.carrier_hz),
            ("noise_density_w_per_hz", self.noise_density_w_per_hz),
            ("cell_radius_m", self.cell_radius_m),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(OP, format!("{name} must be finite and positive, got {v}")));
            }
        }
        if !(self.pathloss_exp.is_finite() && self.pathloss_exp >= 1.0) {
            return Err(domain(
                OP,
                format!("pathloss_exp must be at least 1, got {}", self.pathloss_exp),
            ));
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Mean SNR at the cell edge, c_L·R^{−a}.
    pub fn edge_snr(&self) -> f64 {
        snr_scale(self) * self.cell_radius_m.powf(-self.pathloss_exp)
    }

    /// Radius at which the mean SNR equals `edge_snr`.
    pub fn radius_for_edge_snr(&self, edge_snr: f64) -> f64 {
        (snr_scale(self) / edge_snr).powf(1.0 / self.pathloss_exp)
    }

    pub fn with_radius(mut self, radius_m: f64) -> Self {
        self.cell_radius_m = radius_m;
        self
    }
}

/// c_L = L·𝒫/(N₀·W)·(λ/4π)².
pub fn snr_scale(params: &NetworkParams) -> f64 {
    let ratio = params.wavelength_m() / (4.0 * std::f64::consts::PI);
    f64::from(params.num_users) * params.tx_power_w / (params.noise_density_w_per_hz * params.bandwidth_hz)
        * ratio
        * ratio
}

/// Dimensionless CDF argument (y/c_L)·Rᵃ.
pub fn cdf_argument(y: f64, params: &NetworkParams) -> f64 {
    y / snr_scale(params) * params.cell_radius_m.powf(params.pathloss_exp)
}

/// ₁F₁(2/a; 1+2/a; −(y/c_L)Rᵃ) = 1 − F_g(y). Infinite y maps to 0.
pub fn snr_ccdf(y: f64, params: &NetworkParams) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(domain("snr_cdf", format!("threshold must be nonnegative, got {y}")));
    }
    if y == f64::INFINITY {
        return Ok(0.0);
    }
    let x = cdf_argument(y, params);
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    hyp1f1_ratio(2.0 / params.pathloss_exp, x)
}

/// F_g(y) = P(g ≤ y) = 1 − ₁F₁(2/a; 1+2/a; −(y/c_L)Rᵃ).
pub fn snr_cdf(y: f64, params: &NetworkParams) -> Result<f64> {
    Ok((1.0 - snr_ccdf(y, params)?).clamp(0.0, 1.0))
}
