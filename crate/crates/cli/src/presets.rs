//! Figure presets. Each preset starts from the given base config (normally
//! the built-in defaults) and sets the sweep, variants and counts of one
//! figure.

use serde_json::{json, Value};

use crate::config::{Metric, ScenarioConfig, Sweep, SweepAxis, Variant};
use crate::error::{CliError, CliResult};

pub const PRESETS: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "validate"];

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

fn variant(name: String, overrides: Value) -> Variant {
    let Value::Object(map) = overrides else {
        unreachable!("overrides are built as objects")
    };
    Variant { name, overrides: map }
}

/// Free-space propagation at 1 mW, used by the cell-size figures.
fn free_space_milliwatt(cfg: &mut ScenarioConfig) {
    cfg.network.pathloss_exp = 2.0;
    cfg.network.tx_power_w = 1e-3;
}

pub fn apply_preset(name: &str, base: ScenarioConfig) -> CliResult<ScenarioConfig> {
    let mut cfg = base;
    cfg.label = name.to_string();
    cfg.variants.clear();
    match name {
        "fig2" => {
            // network outage (at least one user) against edge SNR, M_th and Γ varied
            cfg.sweep = Sweep {
                axis: SweepAxis::EdgeSnrDb,
                grid: grid(0.0, 60.0, 1.0),
            };
            for m_th in [0.6, 0.75, 0.9] {
                for (tag, capacity) in [("ber", false), ("capacity", true)] {
                    cfg.variants.push(variant(
                        format!("mth{m_th}_{tag}"),
                        json!({"rate": {"m_th": m_th, "use_capacity": capacity}}),
                    ));
                }
            }
        }
        "fig3" => {
            cfg.sweep = Sweep {
                axis: SweepAxis::EdgeSnrDb,
                grid: grid(0.0, 60.0, 1.0),
            };
            for r_out in [0.04, 0.08, 0.12, 0.16, 0.2] {
                cfg.variants
                    .push(variant(format!("rout{r_out}"), json!({"rate": {"r_out": r_out}})));
            }
        }
        "fig4" => {
            // P(3 or more users in outage) against radius
            free_space_milliwatt(&mut cfg);
            cfg.counts.ll = 3;
            cfg.counts.lu = None;
            cfg.sweep = Sweep {
                axis: SweepAxis::RadiusM,
                grid: grid(10.0, 1500.0, 10.0),
            };
            cfg.design.p_th = vec![1e-6, 1e-3];
            for l in [10, 50] {
                for r_out in [0.12, 0.16] {
                    for m_th in [0.75, 0.9] {
                        cfg.variants.push(variant(
                            format!("L{l}_rout{r_out}_mth{m_th}"),
                            json!({"network": {"num_users": l}, "rate": {"r_out": r_out, "m_th": m_th}}),
                        ));
                    }
                }
            }
        }
        "fig5" => {
            free_space_milliwatt(&mut cfg);
            cfg.rate.r_out = 0.12;
            cfg.counts.lu = None;
            cfg.sweep = Sweep {
                axis: SweepAxis::RadiusM,
                grid: grid(10.0, 1500.0, 10.0),
            };
            cfg.design.p_th = vec![1e-6, 1e-3];
            for l in [10, 50] {
                for ll in [2, 4] {
                    cfg.variants.push(variant(
                        format!("L{l}_ll{ll}"),
                        json!({"network": {"num_users": l}, "counts": {"ll": ll}}),
                    ));
                }
            }
        }
        "fig6" => {
            // Π_g against radius
            cfg.sweep = Sweep {
                axis: SweepAxis::RadiusM,
                grid: grid(20.0, 6000.0, 20.0),
            };
            for (m_th, r_out) in rate_pairs() {
                cfg.variants.push(variant(
                    format!("mth{m_th}_rout{r_out}"),
                    json!({"rate": {"m_th": m_th, "r_out": r_out}}),
                ));
            }
        }
        "fig7" => {
            // P(Ll..Lu users served semantically) against radius
            cfg.sweep = Sweep {
                axis: SweepAxis::RadiusM,
                grid: grid(20.0, 6000.0, 20.0),
            };
            for (l, ll, lu) in [(30, 5, 10), (10, 2, 4)] {
                for (m_th, r_out) in rate_pairs() {
                    cfg.variants.push(variant(
                        format!("L{l}_util{ll}-{lu}_mth{m_th}_rout{r_out}"),
                        json!({
                            "network": {"num_users": l},
                            "rate": {"m_th": m_th, "r_out": r_out},
                            "counts": {"util_ll": ll, "util_lu": lu},
                        }),
                    ));
                }
            }
        }
        "validate" => {
            // closed forms against simulation in all three rate bands. Three
            // users keep both network modes resolvable at 1e6 realizations;
            // the saturated variant gets more power so Π_b stays mid-range.
            cfg.network.num_users = 3;
            cfg.counts.ll = 2;
            cfg.counts.lu = None;
            cfg.counts.util_ll = 1;
            cfg.counts.util_lu = Some(2);
            cfg.sweep = Sweep {
                axis: SweepAxis::RadiusM,
                grid: vec![750.0, 1000.0, 1500.0],
            };
            cfg.mc.samples = 1_000_000;
            cfg.mc.seed = 20_240_601;
            cfg.mc.metrics = Metric::ALL.to_vec();
            cfg.mc.check = true;
            cfg.variants
                .push(variant("low_band".into(), json!({"rate": {"r_out": 0.04}})));
            cfg.variants.push(variant(
                "mid_band".into(),
                json!({"rate": {"r_out": 0.16, "m_th": 0.6}}),
            ));
            cfg.variants.push(variant(
                "saturated".into(),
                json!({"rate": {"r_out": 0.2}, "network": {"tx_power_w": 200.0}}),
            ));
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown preset {other:?}; expected one of {PRESETS:?}"
            )))
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// (M_th, R_out) pairs. The last two put kR_out above M_th so that g_sem,
/// not g_min, sets the lower edge of the utilization window.
fn rate_pairs() -> [(f64, f64); 4] {
    [(0.75, 0.04), (0.9, 0.04), (0.75, 0.16), (0.9, 0.19)]
}
