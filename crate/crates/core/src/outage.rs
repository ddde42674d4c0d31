//! Closed-form per-user, network, generalized and utilization probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invariant, Result};
use crate::linkmodel::{cdf_argument, snr_ccdf, snr_cdf, NetworkParams};
use crate::ratemodel::{RateBand, RateThresholds, Regime};
use crate::specfun::{ln_binom_pmf, LogSumExp};

/// Allowed drift between the composed hybrid outage and the branch table.
const BRANCH_AGREEMENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageReport {
    pub pi_h: f64,
    pub pi_b: f64,
    pub pi_s: f64,
    /// Probability a user is served semantically above R_out.
    pub pi_g: f64,
    pub regime: Regime,
}

/// Which users must be in outage for the network to count as in outage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetOutageMode {
    AllInOutage,
    AtLeastOne,
}

pub fn report(thr: &RateThresholds, params: &NetworkParams) -> Result<OutageReport> {
    Ok(OutageReport {
        pi_h: user_outage_hybrid(thr, params)?,
        pi_b: user_outage_bit(thr, params)?,
        pi_s: user_outage_sem(thr, params)?,
        pi_g: sem_util_prob(thr, params)?,
        regime: thr.regime,
    })
}

/// F_g(b) − F_g(a) for a ≤ b, taken as a difference of tails.
fn cdf_interval(a: f64, b: f64, params: &NetworkParams) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    Ok((snr_ccdf(a, params)? - snr_ccdf(b, params)?).max(0.0))
}

/// Hybrid outage assembled from the event sets: BitCom outage off the
/// SemCom interval G = [g_min, g_max] plus SemCom outage on it.
fn hybrid_by_composition(thr: &RateThresholds, params: &NetworkParams) -> Result<f64> {
    let f = |y: f64| snr_cdf(y, params);
    if thr.is_degenerate() {
        return f(thr.g_bit);
    }
    let bit_off_g = f(thr.g_bit.min(thr.g_min))? + cdf_interval(thr.g_max, thr.g_bit, params)?;
    let sem_on_g = match (thr.band, thr.g_sem) {
        (RateBand::Low, _) => 0.0,
        (RateBand::Mid, Some(g_sem)) => cdf_interval(thr.g_min, g_sem.min(thr.g_max), params)?,
        (RateBand::Mid, None) => {
            return Err(invariant("user_outage_hybrid", "mid band without g_sem"));
        }
        (RateBand::High, _) => cdf_interval(thr.g_min, thr.g_max, params)?,
    };
    Ok(bit_off_g + sem_on_g)
}

/// Π_h. Computed by composition and checked against the single CDF
/// evaluation selected by the regime.
pub fn user_outage_hybrid(thr: &RateThresholds, params: &NetworkParams) -> Result<f64> {
    let composed = hybrid_by_composition(thr, params)?;
    let tabled = snr_cdf(thr.outage_threshold(), params)?;
    if (composed - tabled).abs() > BRANCH_AGREEMENT {
        return Err(invariant(
            "user_outage_hybrid",
            format!(
                "branch {} gives {tabled} but the event composition gives {composed}",
                thr.regime.index()
            ),
        ));
    }
    Ok(composed.clamp(0.0, 1.0))
}

/// Π_b = F_g(g_bit).
pub fn user_outage_bit(thr: &RateThresholds, params: &NetworkParams) -> Result<f64> {
    snr_cdf(thr.g_bit, params)
}

/// Π_s for a network using SemCom only.
pub fn user_outage_sem(thr: &RateThresholds, params: &NetworkParams) -> Result<f64> {
    match (thr.band, thr.g_sem) {
        (RateBand::High, _) => Ok(1.0),
        (RateBand::Mid, Some(g_sem)) if g_sem > thr.g_min => snr_cdf(g_sem, params),
        _ => snr_cdf(thr.g_min, params),
    }
}

/// Π^L or 1 − (1 − Π)^L.
pub fn network_outage(pi: f64, num_users: u32, mode: NetOutageMode) -> Result<f64> {
    if !(0.0..=1.0).contains(&pi) {
        return Err(domain(
            "network_outage",
            format!("probability must lie in [0, 1], got {pi}"),
        ));
    }
    if num_users == 0 {
        return Err(domain("network_outage", "need at least one user"));
    }
    let l = f64::from(num_users);
    Ok(match mode {
        NetOutageMode::AllInOutage => pi.powf(l),
        NetOutageMode::AtLeastOne => -((l * (-pi).ln_1p()).exp_m1()),
    })
}

/// P(Ll ≤ X ≤ Lu) for X ~ Binomial(L, p), accumulated in log space.
pub fn binom_range_prob(p: f64, num_users: u32, ll: u32, lu: u32) -> Result<f64> {
    const OP: &str = "binom_range_prob";
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(OP, format!("probability must lie in [0, 1], got {p}")));
    }
    if ll > lu || lu > num_users {
        return Err(domain(
            OP,
            format!("need 0 <= Ll <= Lu <= L, got Ll={ll}, Lu={lu}, L={num_users}"),
        ));
    }
    let n = u64::from(num_users);
    if p == 0.0 {
        return Ok(if ll == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if lu == num_users { 1.0 } else { 0.0 });
    }
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    let mut acc = LogSumExp::new();
    for m in u64::from(ll)..=u64::from(lu) {
        acc.push(ln_binom_pmf(n, m, ln_p, ln_q));
    }
    Ok(acc.value().min(1.0))
}

/// f_{n,m}(p) = C(n, m) pᵐ (1−p)^{n−m}; zero outside 0 ≤ m ≤ n.
pub fn binom_pmf(p: f64, n: u32, m: i64) -> f64 {
    if m < 0 || m > i64::from(n) {
        return 0.0;
    }
    let m = m as u64;
    let n = u64::from(n);
    match p {
        _ if p <= 0.0 => f64::from(u8::from(m == 0)),
        _ if p >= 1.0 => f64::from(u8::from(m == n)),
        _ => ln_binom_pmf(n, m, p.ln(), (-p).ln_1p()).exp(),
    }
}

/// Π_g = Pr(g in the utilization window).
pub fn sem_util_prob(thr: &RateThresholds, params: &NetworkParams) -> Result<f64> {
    match thr.utilization_window() {
        None => Ok(0.0),
        Some((lo, hi)) => Ok(cdf_interval(lo, hi, params)?.min(1.0)),
    }
}

/// dΠ_g/dR at the radius in `params`.
///
/// With x = y·Rᵃ/c_L, d/dR ₁F₁(2/a; 1+2/a; −x) = (2/R)(e^{−x} − ₁F₁), so
/// dΠ_g/dR = (2/R)[₁F₁(x_hi) − ₁F₁(x_lo) − e^{−x_hi} + e^{−x_lo}].
pub fn sem_util_prob_deriv(thr: &RateThresholds, params: &NetworkParams) -> Result<f64> {
    let r = params.cell_radius_m;
    if !(r.is_finite() && r > 0.0) {
        return Err(domain(
            "sem_util_prob_deriv",
            format!("radius must be positive, got {r}"),
        ));
    }
    let Some((lo, hi)) = thr.utilization_window() else {
        return Ok(0.0);
    };
    let (x_lo, x_hi) = (cdf_argument(lo, params), cdf_argument(hi, params));
    let bracket = snr_ccdf(hi, params)? - snr_ccdf(lo, params)? - (-x_hi).exp() + (-x_lo).exp();
    Ok(2.0 / r * bracket)
}

/// d f_{L,m}/dR = p′·L·(f_{L−1,m−1} − f_{L−1,m}), where p′ = dp/dR.
pub fn binom_pmf_deriv(p: f64, dp: f64, num_users: u32, m: u32) -> Result<f64> {
    if num_users == 0 || m > num_users {
        return Err(domain(
            "binom_pmf_deriv",
            format!("need 0 <= m <= L, L >= 1, got m={m}, L={num_users}"),
        ));
    }
    let l1 = num_users - 1;
    let m = i64::from(m);
    Ok(dp * f64::from(num_users) * (binom_pmf(p, l1, m - 1) - binom_pmf(p, l1, m)))
}

/// d/dR Σ_{m=Ll}^{Lu} f_{L,m}; the sum telescopes to p′·L·(f_{L−1,Ll−1} − f_{L−1,Lu}).
pub fn binom_range_deriv(p: f64, dp: f64, num_users: u32, ll: u32, lu: u32) -> Result<f64> {
    if num_users == 0 || ll > lu || lu > num_users {
        return Err(domain(
            "binom_range_deriv",
            format!("need 0 <= Ll <= Lu <= L, got Ll={ll}, Lu={lu}, L={num_users}"),
        ));
    }
    let l1 = num_users - 1;
    Ok(dp * f64::from(num_users) * (binom_pmf(p, l1, i64::from(ll) - 1) - binom_pmf(p, l1, i64::from(lu))))
}
