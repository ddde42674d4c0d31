//! Monte Carlo oracle. Event membership is decided from the raw similarity
//! and rate curves, never from the closed-form breakpoints.
//!
//! Realizations are grouped in blocks of 2¹⁶. Block b draws from a ChaCha8
//! stream keyed by (seed, b), so the sample sequence does not depend on how
//! blocks are spread over threads, and counts are merged as integers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linkmodel::{snr_scale, NetworkParams};
use crate::ratemodel::{gamma_gap, RateConfig, SimilarityFit};

pub const BLOCK_SIZE: u64 = 1 << 16;

/// Below this many samples the estimate is flagged as low precision.
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub n_samples: u64,
    /// sqrt(p̂(1 − p̂)/n).
    pub std_error: f64,
    pub seed: u64,
    pub low_precision: bool,
}

impl McEstimate {
    fn from_count(hits: u64, n: u64, seed: u64) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            estimate: p,
            n_samples: n,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            seed,
            low_precision: n < MIN_SAMPLES,
        }
    }

    /// |value − estimate| ≤ k·std_error.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (value - self.estimate).abs() <= k * self.std_error
    }
}

/// Events estimated by simulation. Per-user events look at one user; count
/// events simulate all L users of a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McEvent {
    BitOutage,
    SemOutage,
    HybridOutage,
    SemUtilization,
    /// Exactly this many users of the hybrid network in outage.
    ExactCount(u32),
    /// Number of hybrid users in outage within [Ll, Lu].
    RangeCount(u32, u32),
    /// Number of users served semantically above R_out within [lo, hi].
    UtilizationCount(u32, u32),
}

impl McEvent {
    fn is_count(self) -> bool {
        matches!(
            self,
            McEvent::ExactCount(_) | McEvent::RangeCount(..) | McEvent::UtilizationCount(..)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McScenario {
    pub params: NetworkParams,
    pub cfg: RateConfig,
    pub fit: SimilarityFit,
}

/// One user's draw: distance, fading power and resulting SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserDraw {
    pub distance: f64,
    pub fading: f64,
    pub snr: f64,
}

/// Uniform on the open interval (0, 1) from the top 53 bits.
pub fn open_uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// r = R·sqrt(u₁), |h|² = −ln u₂, g = c_L·|h|²·r^{−a}.
pub fn snr_from_uniforms(u1: f64, u2: f64, c_l: f64, params: &NetworkParams) -> UserDraw {
    let distance = params.cell_radius_m * u1.sqrt();
    let fading = -u2.ln();
    UserDraw {
        distance,
        fading,
        snr: c_l * fading * distance.powf(-params.pathloss_exp),
    }
}

pub fn draw_user<R: RngCore>(rng: &mut R, c_l: f64, params: &NetworkParams) -> UserDraw {
    let u1 = open_uniform(rng);
    let u2 = open_uniform(rng);
    snr_from_uniforms(u1, u2, c_l, params)
}

/// Linear SNR of one user placed uniformly in the cell under Rayleigh fading.
pub fn sample_user<R: RngCore>(rng: &mut R, params: &NetworkParams) -> f64 {
    draw_user(rng, snr_scale(params), params).snr
}

/// Outcome of one user under the three transmission schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UserOutcome {
    pub bit_outage: bool,
    pub sem_outage: bool,
    pub hybrid_outage: bool,
    pub sem_served: bool,
}

/// Rate curves of a scenario, evaluated pointwise.
#[derive(Debug, Clone, Copy)]
pub struct RawRates {
    gamma: f64,
    mu: f64,
    k: f64,
    m_th: f64,
    r_out: f64,
    fit: SimilarityFit,
}

impl RawRates {
    pub fn new(cfg: &RateConfig, fit: &SimilarityFit) -> Result<Self> {
        fit.validate()?;
        cfg.validate(fit)?;
        Ok(Self {
            gamma: gamma_gap(cfg)?,
            mu: f64::from(cfg.mu),
            k: f64::from(fit.k),
            m_th: cfg.m_th,
            r_out: cfg.r_out,
            fit: *fit,
        })
    }

    pub fn outcome(&self, g: f64) -> UserOutcome {
        let f = &self.fit;
        let sim = f.a1 + (f.a2 - f.a1) / (1.0 + (-(f.c1 * 10.0 * g.log10() + f.c2)).exp());
        let r_s = sim / self.k;
        let r_b = (g / self.gamma).ln_1p() / std::f64::consts::LN_2 / self.mu;
        let qos = sim >= self.m_th;
        let sem_selected = qos && r_s >= r_b;
        let bit_outage = r_b <= self.r_out;
        let sem_outage = !qos || r_s <= self.r_out;
        let hybrid_outage = if sem_selected { r_s <= self.r_out } else { bit_outage };
        UserOutcome {
            bit_outage,
            sem_outage,
            hybrid_outage,
            sem_served: sem_selected && r_s > self.r_out,
        }
    }
}

fn validate_event(ev: McEvent, num_users: u32) -> Result<()> {
    let ok = match ev {
        McEvent::ExactCount(m) => m <= num_users,
        McEvent::RangeCount(lo, hi) | McEvent::UtilizationCount(lo, hi) => lo <= hi && hi <= num_users,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(domain(
            "estimate",
            format!("{ev:?} is out of range for L = {num_users}"),
        ))
    }
}

fn hit(ev: McEvent, first: &UserOutcome, outages: u32, served: u32) -> bool {
    match ev {
        McEvent::BitOutage => first.bit_outage,
        McEvent::SemOutage => first.sem_outage,
        McEvent::HybridOutage => first.hybrid_outage,
        McEvent::SemUtilization => first.sem_served,
        McEvent::ExactCount(m) => outages == m,
        McEvent::RangeCount(lo, hi) => (lo..=hi).contains(&outages),
        McEvent::UtilizationCount(lo, hi) => (lo..=hi).contains(&served),
    }
}

/// Estimates several events from the same n realizations. If any event is a
/// count event every realization holds L users and per-user events use the
/// first of them; otherwise a realization is a single user.
///
/// Runs on the current rayon pool.
pub fn estimate_many(events: &[McEvent], n: u64, seed: u64, scenario: &McScenario) -> Result<Vec<McEstimate>> {
    if n == 0 {
        return Err(domain("estimate", "need at least one sample"));
    }
    let params = &scenario.params;
    params.validate()?;
    for &ev in events {
        validate_event(ev, params.num_users)?;
    }
    let rates = RawRates::new(&scenario.cfg, &scenario.fit)?;
    let c_l = snr_scale(params);
    let users = if events.iter().any(|e| e.is_count()) {
        params.num_users
    } else {
        1
    };
    let blocks = n.div_ceil(BLOCK_SIZE);

    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b);
            let len = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
            let mut hits = vec![0u64; events.len()];
            for _ in 0..len {
                let mut first = None;
                let (mut outages, mut served) = (0u32, 0u32);
                for _ in 0..users {
                    let o = rates.outcome(draw_user(&mut rng, c_l, params).snr);
                    outages += u32::from(o.hybrid_outage);
                    served += u32::from(o.sem_served);
                    first.get_or_insert(o);
                }
                let first = first.expect("at least one user per realization");
                for (h, &ev) in hits.iter_mut().zip(events) {
                    *h += u64::from(hit(ev, &first, outages, served));
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; events.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts.into_iter().map(|h| McEstimate::from_count(h, n, seed)).collect())
}

pub fn estimate(event: McEvent, n: u64, seed: u64, scenario: &McScenario) -> Result<McEstimate> {
    Ok(estimate_many(&[event], n, seed, scenario)?[0])
}

/// The generator used for block `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
