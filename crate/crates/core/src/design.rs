//! Cell-radius design: meeting a generalized-outage target, and maximizing
//! the probability that the number of semantically served users lands in a
//! range.

use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Error, Result};
use crate::linkmodel::{snr_ccdf, snr_scale, NetworkParams};
use crate::outage::{binom_range_prob, sem_util_prob, sem_util_prob_deriv};
use crate::ratemodel::RateThresholds;
use crate::specfun::{hyp1f1_ratio, inv_reg_inc_beta_int, lambert_w0, log_binomial};

/// Outage target: at most probability `p_th` that `ll` or more of the L users
/// are in outage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignTarget {
    pub p_th: f64,
    pub ll: u32,
    pub lu: u32,
    /// Largest admissible ₁F₁ value, 1 − I⁻¹_{p_th}(Ll, L−Ll+1).
    pub u_th: f64,
}

impl DesignTarget {
    pub fn new(p_th: f64, ll: u32, lu: u32, num_users: u32) -> Result<Self> {
        const OP: &str = "DesignTarget";
        if !(p_th > 0.0 && p_th < 1.0) {
            return Err(domain(OP, format!("p_th must lie in (0, 1), got {p_th}")));
        }
        if !(1 <= ll && ll <= lu && lu <= num_users) {
            return Err(domain(
                OP,
                format!("need 1 <= Ll <= Lu <= L, got Ll={ll}, Lu={lu}, L={num_users}"),
            ));
        }
        let pi_max = inv_reg_inc_beta_int(p_th, ll, num_users - ll + 1)?;
        let u_th = 1.0 - pi_max;
        if !(u_th > 0.0 && u_th < 1.0) {
            return Err(Error::Boundary {
                op: OP,
                detail: format!("u_th = {u_th} is numerically 0 or 1"),
            });
        }
        Ok(Self { p_th, ll, lu, u_th })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    ClosedFormA2,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSolution {
    pub radius: f64,
    pub method: SolveMethod,
    /// ₁F₁(2/a; 1+2/a; −y_th·Rᵃ/c_L) − u_th at the returned radius.
    pub residual: f64,
}

/// Largest radius meeting the target; any smaller cell also meets it.
pub fn radius_for_outage_threshold(
    target: &DesignTarget,
    thr: &RateThresholds,
    params: &NetworkParams,
) -> Result<RadiusSolution> {
    radius_for_threshold_snr(target, thr.outage_threshold(), params)
}

/// As [`radius_for_outage_threshold`] for a user in outage below `y_th`,
/// e.g. g_bit for a BitCom-only network.
pub fn radius_for_threshold_snr(target: &DesignTarget, y_th: f64, params: &NetworkParams) -> Result<RadiusSolution> {
    params.validate()?;
    let (radius, method) = if params.pathloss_exp == 2.0 {
        (
            radius_closed_form_a2(y_th, target.u_th, params)?,
            SolveMethod::ClosedFormA2,
        )
    } else {
        (radius_numeric(y_th, target.u_th, params)?, SolveMethod::Numeric)
    };
    let residual = snr_ccdf(y_th, &params.with_radius(radius))? - target.u_th;
    Ok(RadiusSolution {
        radius,
        method,
        residual,
    })
}

fn check_design_inputs(op: &'static str, y_th: f64, u_th: f64) -> Result<()> {
    if !(y_th.is_finite() && y_th > 0.0) {
        return Err(domain(op, format!("y_th must be positive, got {y_th}")));
    }
    if u_th.is_nan() || u_th <= 0.0 || u_th >= 1.0 {
        return Err(Error::Boundary {
            op,
            detail: format!("u_th must lie strictly inside (0, 1), got {u_th}"),
        });
    }
    Ok(())
}

/// R = sqrt((c_L/y_th)·(1/u + W₀(−(1/u)·e^{−1/u}))), valid for a = 2 only.
pub fn radius_closed_form_a2(y_th: f64, u_th: f64, params: &NetworkParams) -> Result<f64> {
    if params.pathloss_exp != 2.0 {
        return Err(Error::WrongExponent(params.pathloss_exp));
    }
    check_design_inputs("radius_closed_form_a2", y_th, u_th)?;
    let inv = 1.0 / u_th;
    let x = inv + lambert_w0(-inv * (-inv).exp())?;
    Ok((snr_scale(params) / y_th * x).sqrt())
}

/// Solves ₁F₁(2/a; 1+2/a; −x) = u for x > 0 by bisection; the left side
/// falls strictly from 1 to 0.
pub fn solve_hyp1f1_level(s: f64, u: f64) -> Result<f64> {
    const OP: &str = "solve_hyp1f1_level";
    let f = |x: f64| -> Result<f64> { Ok(hyp1f1_ratio(s, x)? - u) };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(numeric(OP, format!("no bracket for u = {u}")));
        }
    }
    bisect(f, lo, hi)
}

/// Bisection to adjacent floats, given f(lo) > 0 ≥ f(hi) or the reverse.
fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let positive_at_lo = f(lo)? > 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (vl, vh) = (f(lo)?.abs(), f(hi)?.abs());
    Ok(if vl <= vh { lo } else { hi })
}

/// Radius solving ₁F₁(2/a; 1+2/a; −y_th·Rᵃ/c_L) = u_th for any a.
pub fn radius_numeric(y_th: f64, u_th: f64, params: &NetworkParams) -> Result<f64> {
    check_design_inputs("radius_numeric", y_th, u_th)?;
    let a = params.pathloss_exp;
    let x = solve_hyp1f1_level(2.0 / a, u_th)?;
    Ok((snr_scale(params) * x / y_th).powf(1.0 / a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilRootKind {
    /// dΠ_g/dR = 0: the radius maximizing Π_g.
    Peak,
    /// Smaller root of the Π_g level equation.
    LevelInner,
    /// Larger root of the Π_g level equation.
    LevelOuter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilRoot {
    pub radius: f64,
    pub kind: UtilRootKind,
    pub pi_g: f64,
    /// P(Ll ≤ users served semantically ≤ Lu) at this radius.
    pub range_prob: f64,
    /// dΠ_g/dR for the peak, Π_g − level for level roots.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum UtilDesign {
    /// G is empty or SemCom is always in outage: Π_g ≡ 0.
    NoSemanticOperation,
    Roots {
        /// Ordered by radius.
        roots: Vec<UtilRoot>,
        /// Stationary value of Π_g for the range sum; absent when Ll = 0
        /// or Lu = L.
        level: Option<f64>,
        /// false when the level exceeds max Π_g and only the peak is returned.
        level_attainable: bool,
    },
}

impl UtilDesign {
    /// Root with the largest range probability.
    pub fn best(&self) -> Option<&UtilRoot> {
        match self {
            UtilDesign::NoSemanticOperation => None,
            UtilDesign::Roots { roots, .. } => roots.iter().max_by(|a, b| a.range_prob.total_cmp(&b.range_prob)),
        }
    }
}

/// Π_g at which Σ_{m=Ll}^{Lu} f_{L,m} is stationary:
/// 1/(1 + (C(L−1,Lu)/C(L−1,Ll−1))^{1/(Lu−Ll+1)}).
pub fn util_level(num_users: u32, ll: u32, lu: u32) -> Result<f64> {
    if !(1 <= ll && ll <= lu && lu < num_users) {
        return Err(domain(
            "util_level",
            format!("need 1 <= Ll <= Lu < L, got Ll={ll}, Lu={lu}, L={num_users}"),
        ));
    }
    let n = u64::from(num_users - 1);
    let log_ratio = log_binomial(n, u64::from(lu))? - log_binomial(n, u64::from(ll - 1))?;
    Ok(1.0 / (1.0 + (log_ratio / f64::from(lu - ll + 1)).exp()))
}

/// Π_g below this marks the inner end of the radius search.
const TINY_UTIL: f64 = 1e-9;

/// Radii at which the range probability over semantically served users is
/// stationary: the Π_g peak plus up to two roots of the level equation.
pub fn optimal_sem_util_radius(ll: u32, lu: u32, thr: &RateThresholds, params: &NetworkParams) -> Result<UtilDesign> {
    const OP: &str = "optimal_sem_util_radius";
    params.validate()?;
    let num_users = params.num_users;
    if ll > lu || lu > num_users {
        return Err(domain(
            OP,
            format!("need 0 <= Ll <= Lu <= L, got Ll={ll}, Lu={lu}, L={num_users}"),
        ));
    }
    let Some((lo, hi)) = thr.utilization_window() else {
        return Ok(UtilDesign::NoSemanticOperation);
    };
    let a = params.pathloss_exp;
    let c_l = snr_scale(params);
    let radius_of = |x_lo: f64| (c_l * x_lo / lo).powf(1.0 / a);
    let at = |r: f64| params.with_radius(r);
    let pi_g = |r: f64| sem_util_prob(thr, &at(r));
    let deriv = |r: f64| sem_util_prob_deriv(thr, &at(r));

    // the peak depends only on x_lo = lo·Rᵃ/c_L; scan upward for the sign change
    let mut x = 1e-6 * lo / hi;
    while deriv(radius_of(x))? <= 0.0 {
        x /= 16.0;
        if x < 1e-300 {
            return Err(numeric(OP, "dΠ_g/dR is not positive for small cells"));
        }
    }
    let mut x_prev = x;
    loop {
        x *= 2.0;
        if deriv(radius_of(x))? < 0.0 {
            break;
        }
        x_prev = x;
        if x > 1e300 {
            return Err(numeric(OP, "dΠ_g/dR never turns negative"));
        }
    }
    let r_peak = bisect(deriv, radius_of(x_prev), radius_of(x))?;
    let pi_peak = pi_g(r_peak)?;

    let make = |r: f64, kind: UtilRootKind, residual: f64| -> Result<UtilRoot> {
        let p = pi_g(r)?;
        Ok(UtilRoot {
            radius: r,
            kind,
            pi_g: p,
            range_prob: binom_range_prob(p, num_users, ll, lu)?,
            residual,
        })
    };
    let peak = make(r_peak, UtilRootKind::Peak, deriv(r_peak)?)?;

    if ll == 0 || lu == num_users {
        return Ok(UtilDesign::Roots {
            roots: vec![peak],
            level: None,
            level_attainable: false,
        });
    }
    let level = util_level(num_users, ll, lu)?;
    if level >= pi_peak {
        return Ok(UtilDesign::Roots {
            roots: vec![peak],
            level: Some(level),
            level_attainable: false,
        });
    }
    let gap = |r: f64| -> Result<f64> { Ok(pi_g(r)? - level) };

    // R₀ with Π_g(R₀) ≈ TINY_UTIL, below any inner root
    let mut r0 = r_peak;
    while pi_g(r0)? > TINY_UTIL.min(0.5 * level) {
        r0 /= 2.0;
    }
    let inner = bisect(gap, r0, r_peak)?;

    let mut r1 = 10.0 * r_peak;
    while pi_g(r1)? > level {
        r1 *= 10.0;
        if !r1.is_finite() {
            return Err(numeric(OP, "Π_g does not decay below the level"));
        }
    }
    let outer = bisect(gap, r_peak, r1)?;
    let roots = vec![
        make(inner, UtilRootKind::LevelInner, gap(inner)?)?,
        peak,
        make(outer, UtilRootKind::LevelOuter, gap(outer)?)?,
    ];
    Ok(UtilDesign::Roots {
        roots,
        level: Some(level),
        level_attainable: true,
    })
}
