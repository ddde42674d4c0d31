//! Similarity and rate models, and the SNR breakpoints derived from them.
//!
//! Rates are normalized per Hz of user bandwidth and per unit I/D, so the
//! bit rate is log₂(1 + g/Γ)/μ and the semantic rate is M(g)/k. The
//! bandwidth share W/L and the information scale I/D cancel out of every
//! threshold.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invariant, numeric, Result};
use crate::linkmodel::NetworkParams;

/// Generalized-logistic fit of semantic similarity against SNR (in dB) for a
/// fixed number `k` of semantic symbols per word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimilarityFit {
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    pub k: u32,
}

impl SimilarityFit {
    /// DeepSC text-transmission fit with k = 5 symbols per word.
    pub fn deepsc() -> Self {
        Self {
            a1: 0.37,
            a2: 0.98,
            c1: 0.2525,
            c2: -0.7895,
            k: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "SimilarityFit";
        if !(0.0 <= self.a1 && self.a1 < self.a2 && self.a2 <= 1.0) {
            return Err(domain(
                OP,
                format!("need 0 <= a1 < a2 <= 1, got a1={}, a2={}", self.a1, self.a2),
            ));
        }
        if !(self.c1.is_finite() && self.c1 > 0.0) {
            return Err(domain(OP, format!("c1 must be positive, got {}", self.c1)));
        }
        if !self.c2.is_finite() {
            return Err(domain(OP, format!("c2 must be finite, got {}", self.c2)));
        }
        if self.k < 1 {
            return Err(domain(OP, "k must be at least 1"));
        }
        Ok(())
    }
}

/// Rate and QoS configuration shared by all users.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateConfig {
    /// μ, bits per word.
    pub mu: u32,
    /// Target BER of the uncoded M-QAM link.
    pub ber: f64,
    /// Forces Γ = 1 (capacity-achieving BitCom).
    pub use_capacity: bool,
    /// Similarity threshold M_th.
    pub m_th: f64,
    /// Outage rate threshold R_out, normalized suts/s per Hz.
    pub r_out: f64,
    /// I/D scale used only when converting normalized rates to suts/s.
    pub info_per_word: f64,
}

impl RateConfig {
    /// Simulation defaults: μ = 40, BER = 1e−3, M_th = 0.75, R_out = 0.04.
    pub fn table1() -> Self {
        Self {
            mu: 40,
            ber: 1e-3,
            use_capacity: false,
            m_th: 0.75,
            r_out: 0.04,
            info_per_word: 1.0,
        }
    }

    pub fn validate(&self, fit: &SimilarityFit) -> Result<()> {
        const OP: &str = "RateConfig";
        if self.mu < 1 {
            return Err(domain(OP, "mu must be at least 1"));
        }
        if !(self.m_th > fit.a1 && self.m_th < fit.a2) {
            return Err(domain(
                OP,
                format!(
                    "m_th={} must lie strictly inside (a1, a2) = ({}, {})",
                    self.m_th, fit.a1, fit.a2
                ),
            ));
        }
        if !(self.r_out.is_finite() && self.r_out > 0.0) {
            return Err(domain(OP, format!("r_out must be positive, got {}", self.r_out)));
        }
        if !(self.info_per_word.is_finite() && self.info_per_word > 0.0) {
            return Err(domain(
                OP,
                format!("info_per_word must be positive, got {}", self.info_per_word),
            ));
        }
        gamma_gap(self).map(|_| ())
    }

    /// Converts a normalized rate to suts/s for a user holding W/L of the band.
    pub fn to_suts_per_second(&self, normalized: f64, params: &NetworkParams) -> f64 {
        normalized * params.bandwidth_hz / f64::from(params.num_users) * self.info_per_word
    }
}

/// M(g) = A1 + (A2 − A1)/(1 + exp(−(C1·10·log₁₀g + C2))).
pub fn similarity(g: f64, fit: &SimilarityFit) -> Result<f64> {
    if g.is_nan() || g <= 0.0 {
        return Err(domain("similarity", format!("SNR must be positive, got {g}")));
    }
    let exponent = fit.c1 * 10.0 * g.log10() + fit.c2;
    Ok(fit.a1 + (fit.a2 - fit.a1) / (1.0 + (-exponent).exp()))
}

/// SNR at which the similarity equals `m`, for A1 < m < A2.
pub fn inv_similarity(m: f64, fit: &SimilarityFit) -> Result<f64> {
    if !(m > fit.a1 && m < fit.a2) {
        return Err(domain(
            "inv_similarity",
            format!("target {m} outside the open interval ({}, {})", fit.a1, fit.a2),
        ));
    }
    let log_term = ((fit.a2 - m) / (m - fit.a1)).ln();
    Ok(10f64.powf(-(log_term + fit.c2) / (10.0 * fit.c1)))
}

/// SNR gap Γ = −ln(5·BER)/1.5, floored at 1; exactly 1 with `use_capacity`.
pub fn gamma_gap(cfg: &RateConfig) -> Result<f64> {
    if cfg.use_capacity {
        return Ok(1.0);
    }
    if !(cfg.ber > 0.0 && cfg.ber < 0.2) {
        return Err(domain(
            "gamma_gap",
            format!("BER must lie in (0, 0.2), got {}", cfg.ber),
        ));
    }
    Ok((-(5.0 * cfg.ber).ln() / 1.5).max(1.0))
}

fn bit_rate_with_gap(g: f64, gamma: f64, mu: u32) -> f64 {
    (g / gamma).ln_1p() / LN_2 / f64::from(mu)
}

/// Normalized BitCom rate log₂(1 + g/Γ)/μ.
pub fn bit_rate(g: f64, cfg: &RateConfig) -> Result<f64> {
    if g.is_nan() || g < 0.0 {
        return Err(domain("bit_rate", format!("SNR must be nonnegative, got {g}")));
    }
    Ok(bit_rate_with_gap(g, gamma_gap(cfg)?, cfg.mu))
}

/// Normalized SemCom rate M(g)/k.
pub fn sem_rate(g: f64, fit: &SimilarityFit) -> Result<f64> {
    Ok(similarity(g, fit)? / f64::from(fit.k))
}

/// Position of k·R_out relative to the similarity asymptotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateBand {
    /// k·R_out ≤ A1: SemCom never falls below R_out.
    Low,
    /// A1 < k·R_out < A2: SemCom is in outage below g_sem.
    Mid,
    /// k·R_out ≥ A2: SemCom is always in outage.
    High,
}

/// The seven mutually exclusive branches of the hybrid outage closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// k·R_out ≤ A1, g_bit ≤ g_min.
    LowBitBelowQos,
    /// k·R_out ≤ A1, g_min ≤ g_bit ≤ g_max.
    LowQosLimited,
    /// mid band, g_sem ≤ g_bit ≤ g_min.
    MidBitBelowQos,
    /// mid band, g_sem ≤ g_min ≤ g_bit ≤ g_max.
    MidQosLimited,
    /// mid band, g_min ≤ g_sem ≤ g_bit ≤ g_max.
    MidSemLimited,
    /// mid band, g_max ≤ g_bit ≤ g_sem.
    MidAboveCrossing,
    /// k·R_out ≥ A2, g_max ≤ g_bit.
    Saturated,
}

/// Which SNR breakpoint the hybrid outage probability is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutageArgument {
    Bit,
    Min,
    Sem,
}

impl Regime {
    /// 1-based branch index in the closed-form table.
    pub fn index(self) -> u8 {
        match self {
            Regime::LowBitBelowQos => 1,
            Regime::LowQosLimited => 2,
            Regime::MidBitBelowQos => 3,
            Regime::MidQosLimited => 4,
            Regime::MidSemLimited => 5,
            Regime::MidAboveCrossing => 6,
            Regime::Saturated => 7,
        }
    }

    pub fn outage_argument(self) -> OutageArgument {
        match self {
            Regime::LowBitBelowQos | Regime::MidBitBelowQos | Regime::MidAboveCrossing | Regime::Saturated => {
                OutageArgument::Bit
            }
            Regime::LowQosLimited | Regime::MidQosLimited => OutageArgument::Min,
            Regime::MidSemLimited => OutageArgument::Sem,
        }
    }

    /// Classifies breakpoints into the first branch whose conditions hold.
    /// Ties resolve to the lower index. `None` means no branch applies, which
    /// happens only when R_s and R_b cross more than once.
    pub fn classify(band: RateBand, g_bit: f64, g_min: f64, g_sem: Option<f64>, g_max: f64) -> Option<Regime> {
        match (band, g_sem) {
            (RateBand::Low, _) => {
                if g_bit <= g_min {
                    Some(Regime::LowBitBelowQos)
                } else if g_bit <= g_max {
                    Some(Regime::LowQosLimited)
                } else {
                    None
                }
            }
            (RateBand::Mid, Some(g_sem)) => {
                if g_sem <= g_bit && g_bit <= g_min {
                    Some(Regime::MidBitBelowQos)
                } else if g_sem <= g_min && g_min <= g_bit && g_bit <= g_max {
                    Some(Regime::MidQosLimited)
                } else if g_min <= g_sem && g_sem <= g_bit && g_bit <= g_max {
                    Some(Regime::MidSemLimited)
                } else if g_max <= g_bit && g_bit <= g_sem {
                    Some(Regime::MidAboveCrossing)
                } else {
                    None
                }
            }
            (RateBand::Mid, None) => None,
            (RateBand::High, _) => (g_max <= g_bit).then_some(Regime::Saturated),
        }
    }
}

/// Derived SNR breakpoints of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateThresholds {
    pub gamma: f64,
    /// Below g_bit BitCom is in outage.
    pub g_bit: f64,
    /// Minimum SNR meeting the similarity threshold.
    pub g_min: f64,
    /// Below g_sem SemCom is in outage; absent outside the mid band.
    pub g_sem: Option<f64>,
    /// Largest SNR where R_s = R_b; above it BitCom is faster.
    pub g_max: f64,
    pub band: RateBand,
    pub regime: Regime,
}

impl RateThresholds {
    /// G = [g_min, g_max] is empty and the hybrid reduces to pure BitCom.
    pub fn is_degenerate(&self) -> bool {
        self.g_max <= self.g_min
    }

    /// SNR at which the hybrid outage CDF is evaluated.
    pub fn outage_threshold(&self) -> f64 {
        match self.regime.outage_argument() {
            OutageArgument::Bit => self.g_bit,
            OutageArgument::Min => self.g_min,
            // classify only yields Sem-limited branches when g_sem exists
            OutageArgument::Sem => self.g_sem.unwrap_or(self.g_bit),
        }
    }

    /// SNR interval on which a user is served by SemCom above R_out, i.e.
    /// the complement of SemCom outage intersected with G. `None` when empty.
    pub fn utilization_window(&self) -> Option<(f64, f64)> {
        let lo = match (self.band, self.g_sem) {
            (RateBand::High, _) | (RateBand::Mid, None) => return None,
            (RateBand::Low, _) => self.g_min,
            (RateBand::Mid, Some(g_sem)) => self.g_min.max(g_sem),
        };
        (lo < self.g_max).then_some((lo, self.g_max))
    }
}

/// Largest root of R_s(g) = R_b(g).
///
/// Starts at g_hi = Γ(2^{μ·A2/k} − 1), where R_b already equals the SemCom
/// supremum, scans downward on a fine log grid (first over [g_hi·1e−6, g_hi],
/// then further down if needed) and bisects the first sign change.
pub fn solve_g_max(gamma: f64, mu: u32, fit: &SimilarityFit) -> Result<f64> {
    const OP: &str = "solve_g_max";
    let diff = |g: f64| -> Result<f64> { Ok(sem_rate(g, fit)? - bit_rate_with_gap(g, gamma, mu)) };
    let g_hi = gamma * (f64::from(mu) * fit.a2 / f64::from(fit.k) * LN_2).exp_m1();
    if !(g_hi.is_finite() && g_hi > 0.0) {
        return Err(numeric(
            OP,
            format!("upper bracket {g_hi} is not a positive finite SNR"),
        ));
    }
    if diff(g_hi)? >= 0.0 {
        return Err(numeric(OP, format!("R_s >= R_b at the upper bracket g = {g_hi}")));
    }
    const STEP: f64 = 1.05;
    let mut hi = g_hi;
    let mut lo = hi / STEP;
    loop {
        if lo < 1e-250 {
            return Err(numeric(
                OP,
                format!("no crossing of R_s and R_b below g = {g_hi}; BitCom dominates everywhere"),
            ));
        }
        if diff(lo)? > 0.0 {
            break;
        }
        hi = lo;
        lo /= STEP;
    }
    // diff(lo) > 0 > diff(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = diff(mid)?;
        if d == 0.0 {
            return Ok(mid);
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (dl, dh) = (diff(lo)?.abs(), diff(hi)?.abs());
    Ok(if dl <= dh { lo } else { hi })
}

/// All breakpoints and the active branch for one rate configuration.
pub fn thresholds(cfg: &RateConfig, fit: &SimilarityFit) -> Result<RateThresholds> {
    fit.validate()?;
    cfg.validate(fit)?;
    let gamma = gamma_gap(cfg)?;
    let g_bit = gamma * (f64::from(cfg.mu) * cfg.r_out * LN_2).exp_m1();
    let g_min = inv_similarity(cfg.m_th, fit)?;
    let k_r_out = f64::from(fit.k) * cfg.r_out;
    let band = if k_r_out <= fit.a1 {
        RateBand::Low
    } else if k_r_out >= fit.a2 {
        RateBand::High
    } else {
        RateBand::Mid
    };
    let g_sem = match band {
        RateBand::Mid => Some(inv_similarity(k_r_out, fit)?),
        _ => None,
    };
    let g_max = solve_g_max(gamma, cfg.mu, fit)?;
    let regime = Regime::classify(band, g_bit, g_min, g_sem, g_max).ok_or_else(|| {
        invariant(
            "thresholds",
            format!(
                "no outage branch matches g_bit={g_bit}, g_min={g_min}, g_sem={g_sem:?}, g_max={g_max}, band={band:?}; \
                 R_s and R_b likely cross more than once"
            ),
        )
    })?;
    Ok(RateThresholds {
        gamma,
        g_bit,
        g_min,
        g_sem,
        g_max,
        band,
        regime,
    })
}

/// Rate of a hybrid user: SemCom on [g_min, g_max], BitCom elsewhere.
pub fn hybrid_rate(g: f64, thr: &RateThresholds, cfg: &RateConfig, fit: &SimilarityFit) -> Result<f64> {
    if g.is_nan() || g <= 0.0 {
        return Err(domain("hybrid_rate", format!("SNR must be positive, got {g}")));
    }
    if thr.is_degenerate() || g <= thr.g_min || g >= thr.g_max {
        bit_rate(g, cfg)
    } else {
        sem_rate(g, fit)
    }
}

/// Number of sign changes of R_s − R_b over an SNR grid. More than one
/// indicates the crossing defining g_max is not unique.
pub fn crossing_count(cfg: &RateConfig, fit: &SimilarityFit, grid: &[f64]) -> Result<usize> {
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for &g in grid {
        let above = sem_rate(g, fit)? > bit_rate(g, cfg)?;
        if let Some(p) = prev {
            if p != above {
                count += 1;
            }
        }
        prev = Some(above);
    }
    Ok(count)
}
