//! Scenario documents. A config is a JSON object layered over the built-in
//! defaults, so any section or field may be omitted. Log-scale inputs carry
//! a `_db` / `_dbm_per_hz` suffix and are converted here.

use std::collections::HashSet;
use std::path::Path;

use semcell::linkmodel::dbm_per_hz_to_w_per_hz;
use semcell::{thresholds, NetworkParams, RateConfig, SimilarityFit};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub num_users: u32,
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub noise_density_dbm_per_hz: f64,
    pub pathloss_exp: f64,
    pub cell_radius_m: f64,
}

impl NetworkSection {
    pub fn table1() -> Self {
        Self {
            num_users: 30,
            tx_power_w: 1.0,
            bandwidth_hz: 20e6,
            carrier_hz: 2.4e9,
            noise_density_dbm_per_hz: -174.0,
            pathloss_exp: 3.0,
            cell_radius_m: 500.0,
        }
    }

    pub fn to_params(&self) -> NetworkParams {
        NetworkParams {
            num_users: self.num_users,
            tx_power_w: self.tx_power_w,
            bandwidth_hz: self.bandwidth_hz,
            carrier_hz: self.carrier_hz,
            noise_density_w_per_hz: dbm_per_hz_to_w_per_hz(self.noise_density_dbm_per_hz),
            pathloss_exp: self.pathloss_exp,
            cell_radius_m: self.cell_radius_m,
        }
    }
}

/// User-count ranges. `ll`..`lu` is the generalized-outage range and
/// `util_ll`..`util_lu` the semantic-utilization range; an absent upper
/// bound means L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counts {
    pub ll: u32,
    pub lu: Option<u32>,
    pub util_ll: u32,
    pub util_lu: Option<u32>,
}

impl Default for Counts {
    fn default() -> Self {
        Self {
            ll: 1,
            lu: None,
            util_ll: 1,
            util_lu: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedCounts {
    pub ll: u32,
    pub lu: u32,
    pub util_ll: u32,
    pub util_lu: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Mean SNR at the cell edge, dB; sets the radius.
    EdgeSnrDb,
    RadiusM,
    MTh,
    ROut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
}

/// Named set of section overrides merged over the base config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub name: String,
    #[serde(default)]
    pub overrides: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    PiH,
    PiB,
    PiS,
    PiG,
    NetAll,
    NetAny,
    SRange,
    UtilRange,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::PiH,
        Metric::PiB,
        Metric::PiS,
        Metric::PiG,
        Metric::NetAll,
        Metric::NetAny,
        Metric::SRange,
        Metric::UtilRange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::PiH => "pi_h",
            Metric::PiB => "pi_b",
            Metric::PiS => "pi_s",
            Metric::PiG => "pi_g",
            Metric::NetAll => "net_all",
            Metric::NetAny => "net_any",
            Metric::SRange => "s_range",
            Metric::UtilRange => "util_range",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    /// Realizations per grid point; 0 disables simulation.
    pub samples: u64,
    pub seed: u64,
    pub metrics: Vec<Metric>,
    /// Fail the run when a simulated metric misses its closed form by more
    /// than three standard errors.
    pub check: bool,
}

impl Default for McSection {
    fn default() -> Self {
        Self {
            samples: 0,
            seed: 1,
            metrics: Metric::ALL.to_vec(),
            check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    /// Outage targets for the radius design, each with `counts.ll`.
    pub p_th: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub label: String,
    pub network: NetworkSection,
    pub similarity: SimilarityFit,
    pub rate: RateConfig,
    pub counts: Counts,
    pub sweep: Sweep,
    pub variants: Vec<Variant>,
    pub mc: McSection,
    pub design: DesignSection,
}

/// One fully resolved variant, in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedVariant {
    pub name: String,
    pub params: NetworkParams,
    pub cfg: RateConfig,
    pub fit: SimilarityFit,
    pub counts: ResolvedCounts,
}

/// Recursively overlays `patch` onto `base`; objects merge, anything else
/// replaces.
pub fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (slot, p) => *slot = p.clone(),
    }
}

fn from_value_with_path<T: DeserializeOwned>(value: Value, prefix: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let full = match (prefix.is_empty(), path.as_str()) {
            (true, _) => path.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{path}"),
        };
        CliError::Config(format!("{full}: {}", e.into_inner()))
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("config sections serialize")
}

fn core_config_error(context: &str, e: semcell::Error) -> CliError {
    match e {
        semcell::Error::Domain { .. } | semcell::Error::Boundary { .. } => CliError::Config(format!("{context}: {e}")),
        _ => CliError::Solver(format!("{context}: {e}")),
    }
}

impl ScenarioConfig {
    /// Default parameters swept over a handful of radii.
    pub fn table1() -> Self {
        Self {
            label: "table1".into(),
            network: NetworkSection::table1(),
            similarity: SimilarityFit::deepsc(),
            rate: RateConfig::table1(),
            counts: Counts::default(),
            sweep: Sweep {
                axis: SweepAxis::RadiusM,
                grid: vec![100.0, 250.0, 500.0, 1000.0, 2000.0],
            },
            variants: Vec::new(),
            mc: McSection::default(),
            design: DesignSection::default(),
        }
    }

    /// Parses a config document, or the `config` member of a run manifest.
    pub fn from_json_str(text: &str) -> CliResult<Self> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        if let Some(inner) = doc.get("config").filter(|_| doc.get("tool").is_some()).cloned() {
            doc = inner;
        }
        if !doc.is_object() {
            return Err(CliError::Config("top level must be a JSON object".into()));
        }
        let mut base = serde_json::to_value(Self::table1()).expect("defaults serialize");
        // a user grid or variant list replaces the default wholesale
        merge(&mut base, &doc);
        let cfg: Self = from_value_with_path(base, "")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn resolve_one(
        &self,
        name: &str,
        overrides: &serde_json::Map<String, Value>,
        prefix: &str,
    ) -> CliResult<ResolvedVariant> {
        const SECTIONS: [&str; 4] = ["network", "similarity", "rate", "counts"];
        for key in overrides.keys() {
            if !SECTIONS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "{prefix}.{key}: only {SECTIONS:?} can be overridden"
                )));
            }
        }
        let section = |key: &str, base: Value| -> Value {
            let mut v = base;
            if let Some(p) = overrides.get(key) {
                merge(&mut v, p);
            }
            v
        };
        let network: NetworkSection = from_value_with_path(
            section("network", to_value(&self.network)),
            &format!("{prefix}.network"),
        )?;
        let fit: SimilarityFit = from_value_with_path(
            section("similarity", to_value(&self.similarity)),
            &format!("{prefix}.similarity"),
        )?;
        let cfg: RateConfig = from_value_with_path(section("rate", to_value(&self.rate)), &format!("{prefix}.rate"))?;
        let counts: Counts =
            from_value_with_path(section("counts", to_value(&self.counts)), &format!("{prefix}.counts"))?;

        let params = network.to_params();
        let ctx = if name.is_empty() {
            "config".to_string()
        } else {
            format!("variant {name}")
        };
        params.validate().map_err(|e| core_config_error(&ctx, e))?;
        fit.validate().map_err(|e| core_config_error(&ctx, e))?;
        let l = params.num_users;
        let resolved = ResolvedCounts {
            ll: counts.ll,
            lu: counts.lu.unwrap_or(l),
            util_ll: counts.util_ll,
            util_lu: counts.util_lu.unwrap_or(l),
        };
        if resolved.ll > resolved.lu || resolved.lu > l {
            return Err(CliError::Config(format!(
                "{prefix}.counts: need ll <= lu <= L, got ll={}, lu={}, L={l}",
                resolved.ll, resolved.lu
            )));
        }
        if resolved.util_ll > resolved.util_lu || resolved.util_lu > l {
            return Err(CliError::Config(format!(
                "{prefix}.counts: need util_ll <= util_lu <= L, got util_ll={}, util_lu={}, L={l}",
                resolved.util_ll, resolved.util_lu
            )));
        }
        // rate axes vary the rate config per point; check the base anyway
        match self.sweep.axis {
            SweepAxis::MTh | SweepAxis::ROut => cfg.validate(&fit).map_err(|e| core_config_error(&ctx, e))?,
            _ => {
                thresholds(&cfg, &fit).map_err(|e| core_config_error(&ctx, e))?;
            }
        }
        Ok(ResolvedVariant {
            name: name.to_string(),
            params,
            cfg,
            fit,
            counts: resolved,
        })
    }

    /// The variants to run; a config without variants runs once as `base`.
    pub fn resolve(&self) -> CliResult<Vec<ResolvedVariant>> {
        if self.variants.is_empty() {
            return Ok(vec![self.resolve_one("base", &serde_json::Map::new(), "")?]);
        }
        self.variants
            .iter()
            .enumerate()
            .map(|(i, v)| self.resolve_one(&v.name, &v.overrides, &format!("variants[{i}].overrides")))
            .collect()
    }

    /// The top-level sections alone, ignoring variants.
    pub fn resolve_base(&self) -> CliResult<ResolvedVariant> {
        self.resolve_one("base", &serde_json::Map::new(), "")
    }

    pub fn validate(&self) -> CliResult<()> {
        let grid = &self.sweep.grid;
        if grid.is_empty() {
            return Err(CliError::Config("sweep.grid: must not be empty".into()));
        }
        if let Some(i) = grid.iter().position(|x| !x.is_finite()) {
            return Err(CliError::Config(format!("sweep.grid[{i}]: must be finite")));
        }
        if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!(
                "sweep.grid[{}]: grid must be strictly increasing ({} after {})",
                i + 1,
                grid[i + 1],
                grid[i]
            )));
        }
        let positive = matches!(self.sweep.axis, SweepAxis::RadiusM | SweepAxis::ROut);
        if positive {
            if let Some(i) = grid.iter().position(|&x| x <= 0.0) {
                return Err(CliError::Config(format!(
                    "sweep.grid[{i}]: must be positive on this axis"
                )));
            }
        }
        let mut names = HashSet::new();
        for (i, v) in self.variants.iter().enumerate() {
            let ok = !v.name.is_empty()
                && v.name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
            if !ok {
                return Err(CliError::Config(format!(
                    "variants[{i}].name: {:?} must be non-empty and use only letters, digits, '.', '_' or '-'",
                    v.name
                )));
            }
            if !names.insert(v.name.as_str()) {
                return Err(CliError::Config(format!(
                    "variants[{i}].name: duplicate name {:?}",
                    v.name
                )));
            }
        }
        if self.mc.samples > 0 && self.mc.metrics.is_empty() {
            return Err(CliError::Config(
                "mc.metrics: must list at least one metric when mc.samples > 0".into(),
            ));
        }
        if let Some(i) = self.design.p_th.iter().position(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(CliError::Config(format!("design.p_th[{i}]: must lie in (0, 1)")));
        }
        self.resolve().map(|_| ())
    }
}
