//! Sweep evaluation, CSV and manifest output, and closed-form/simulation
//! cross-checks.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use semcell::design::{optimal_sem_util_radius, radius_for_threshold_snr, util_level};
use semcell::linkmodel::db_to_linear;
use semcell::montecarlo::{estimate_many, McEstimate};
use semcell::outage::{binom_range_prob, network_outage, report};
use semcell::{
    radius_for_outage_threshold, snr_scale, thresholds, DesignTarget, McEvent, McScenario, NetOutageMode,
    NetworkParams, RadiusSolution, RateConfig, RateThresholds, SimilarityFit, UtilDesign,
};
use serde::{Deserialize, Serialize};

use crate::config::{Metric, ResolvedCounts, ResolvedVariant, ScenarioConfig, SweepAxis};
use crate::error::{CliError, CliResult};

/// Closed-form columns, in output order.
pub const CLOSED_FORM_COLUMNS: [&str; 14] = [
    "pi_h",
    "pi_b",
    "pi_s",
    "net_all",
    "net_any",
    "net_all_b",
    "net_any_b",
    "net_all_s",
    "net_any_s",
    "s_range",
    "s_range_b",
    "pi_g",
    "util_range",
    "regime",
];

/// Shortest representation that parses back to the same f64.
pub fn format_f64(x: f64) -> String {
    if x != 0.0 && x.is_finite() && (x.abs() < 1e-4 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub axis_value: f64,
    pub closed: ClosedForm,
    pub mc: Vec<(Metric, McEstimate)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub pi_h: f64,
    pub pi_b: f64,
    pub pi_s: f64,
    pub net_all: f64,
    pub net_any: f64,
    pub net_all_b: f64,
    pub net_any_b: f64,
    pub net_all_s: f64,
    pub net_any_s: f64,
    pub s_range: f64,
    pub s_range_b: f64,
    pub pi_g: f64,
    pub util_range: f64,
    pub regime: u8,
}

impl ClosedForm {
    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::PiH => self.pi_h,
            Metric::PiB => self.pi_b,
            Metric::PiS => self.pi_s,
            Metric::PiG => self.pi_g,
            Metric::NetAll => self.net_all,
            Metric::NetAny => self.net_any,
            Metric::SRange => self.s_range,
            Metric::UtilRange => self.util_range,
        }
    }

    fn values(&self) -> [f64; 13] {
        [
            self.pi_h,
            self.pi_b,
            self.pi_s,
            self.net_all,
            self.net_any,
            self.net_all_b,
            self.net_any_b,
            self.net_all_s,
            self.net_any_s,
            self.s_range,
            self.s_range_b,
            self.pi_g,
            self.util_range,
        ]
    }
}

fn mc_event(m: Metric, l: u32, c: &ResolvedCounts) -> McEvent {
    match m {
        Metric::PiH => McEvent::HybridOutage,
        Metric::PiB => McEvent::BitOutage,
        Metric::PiS => McEvent::SemOutage,
        Metric::PiG => McEvent::SemUtilization,
        Metric::NetAll => McEvent::RangeCount(l, l),
        Metric::NetAny => McEvent::RangeCount(1, l),
        Metric::SRange => McEvent::RangeCount(c.ll, c.lu),
        Metric::UtilRange => McEvent::UtilizationCount(c.util_ll, c.util_lu),
    }
}

/// Per-point simulation seed, independent of scheduling.
pub fn point_seed(seed: u64, variant: usize, point: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(((variant as u64) << 32) | point as u64))
}

fn core_error(context: String, e: semcell::Error) -> CliError {
    match e {
        semcell::Error::Domain { .. } | semcell::Error::Boundary { .. } => CliError::Config(format!("{context}: {e}")),
        _ => CliError::Solver(format!("{context}: {e}")),
    }
}

/// Network and rate configuration at one sweep point.
pub fn point_inputs(v: &ResolvedVariant, axis: SweepAxis, x: f64) -> (NetworkParams, RateConfig) {
    let mut params = v.params;
    let mut cfg = v.cfg;
    match axis {
        SweepAxis::EdgeSnrDb => params = params.with_radius(params.radius_for_edge_snr(db_to_linear(x))),
        SweepAxis::RadiusM => params = params.with_radius(x),
        SweepAxis::MTh => cfg.m_th = x,
        SweepAxis::ROut => cfg.r_out = x,
    }
    (params, cfg)
}

pub fn closed_form(
    thr: &RateThresholds,
    params: &NetworkParams,
    counts: &ResolvedCounts,
) -> semcell::Result<ClosedForm> {
    let r = report(thr, params)?;
    let l = params.num_users;
    let net = |p: f64, mode| network_outage(p, l, mode);
    Ok(ClosedForm {
        pi_h: r.pi_h,
        pi_b: r.pi_b,
        pi_s: r.pi_s,
        net_all: net(r.pi_h, NetOutageMode::AllInOutage)?,
        net_any: net(r.pi_h, NetOutageMode::AtLeastOne)?,
        net_all_b: net(r.pi_b, NetOutageMode::AllInOutage)?,
        net_any_b: net(r.pi_b, NetOutageMode::AtLeastOne)?,
        net_all_s: net(r.pi_s, NetOutageMode::AllInOutage)?,
        net_any_s: net(r.pi_s, NetOutageMode::AtLeastOne)?,
        s_range: binom_range_prob(r.pi_h, l, counts.ll, counts.lu)?,
        s_range_b: binom_range_prob(r.pi_b, l, counts.ll, counts.lu)?,
        pi_g: r.pi_g,
        util_range: binom_range_prob(r.pi_g, l, counts.util_ll, counts.util_lu)?,
        regime: r.regime.index(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub c_l: f64,
    pub edge_snr: f64,
    pub thresholds: RateThresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDerived {
    pub axis_value: f64,
    pub thresholds: RateThresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignEntry {
    pub p_th: f64,
    pub ll: u32,
    pub u_th: f64,
    pub hybrid: RadiusSolution,
    pub bitcom: RadiusSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilEntry {
    pub ll: u32,
    pub lu: u32,
    pub level: Option<f64>,
    pub design: UtilDesign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantManifest {
    pub name: String,
    pub csv: String,
    pub network: NetworkParams,
    pub rate: RateConfig,
    pub similarity: SimilarityFit,
    pub counts: ResolvedCounts,
    /// Breakpoints at the variant's base rate configuration.
    pub derived: Derived,
    /// Breakpoints at every grid point, for sweeps that move them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointDerived>,
    pub design: Vec<DesignEntry>,
    pub util: UtilEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub library_version: String,
    pub seed: u64,
    pub mc_samples: u64,
    pub config: ScenarioConfig,
    pub variants: Vec<VariantManifest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantRun {
    pub manifest: VariantManifest,
    pub header: Vec<String>,
    pub points: Vec<PointResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub variant: String,
    pub axis_value: f64,
    pub metric: Metric,
    pub analytic: f64,
    pub estimate: McEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub manifest: Manifest,
    pub variants: Vec<VariantRun>,
    /// Closed-form/simulation pairs compared, and those outside 3σ.
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
}

fn header(metrics: &[Metric], with_mc: bool) -> Vec<String> {
    let mut h = vec!["axis_value".to_string()];
    h.extend(CLOSED_FORM_COLUMNS.iter().map(|s| s.to_string()));
    if with_mc {
        for m in metrics {
            h.push(format!("mc_{}", m.name()));
            h.push(format!("mc_{}_stderr", m.name()));
        }
    }
    h
}

fn variant_manifest(config: &ScenarioConfig, v: &ResolvedVariant) -> CliResult<VariantManifest> {
    let ctx = |what: &str| format!("variant {}: {what}", v.name);
    let thr = thresholds(&v.cfg, &v.fit).map_err(|e| core_error(ctx("thresholds"), e))?;
    let params = v.params;
    let l = params.num_users;
    let derived = Derived {
        c_l: snr_scale(&params),
        edge_snr: params.edge_snr(),
        thresholds: thr,
    };
    let points = match config.sweep.axis {
        SweepAxis::MTh | SweepAxis::ROut => config
            .sweep
            .grid
            .iter()
            .map(|&x| {
                let (_, cfg) = point_inputs(v, config.sweep.axis, x);
                let t = thresholds(&cfg, &v.fit).map_err(|e| core_error(ctx(&format!("axis value {x}")), e))?;
                Ok(PointDerived {
                    axis_value: x,
                    thresholds: t,
                })
            })
            .collect::<CliResult<Vec<_>>>()?,
        _ => Vec::new(),
    };
    let mut design = Vec::new();
    if v.counts.ll >= 1 {
        for &p_th in &config.design.p_th {
            let what = format!("radius design p_th={p_th}");
            let target = DesignTarget::new(p_th, v.counts.ll, l, l).map_err(|e| core_error(ctx(&what), e))?;
            let hybrid = radius_for_outage_threshold(&target, &thr, &params).map_err(|e| core_error(ctx(&what), e))?;
            let bitcom =
                radius_for_threshold_snr(&target, thr.g_bit, &params).map_err(|e| core_error(ctx(&what), e))?;
            design.push(DesignEntry {
                p_th,
                ll: v.counts.ll,
                u_th: target.u_th,
                hybrid,
                bitcom,
            });
        }
    }
    let (ull, ulu) = (v.counts.util_ll, v.counts.util_lu);
    let util_design =
        optimal_sem_util_radius(ull, ulu, &thr, &params).map_err(|e| core_error(ctx("utilization design"), e))?;
    let level = if ull >= 1 && ulu < l {
        util_level(l, ull, ulu).ok()
    } else {
        None
    };
    Ok(VariantManifest {
        name: v.name.clone(),
        csv: format!("{}.csv", v.name),
        network: params,
        rate: v.cfg,
        similarity: v.fit,
        counts: v.counts,
        derived,
        points,
        design,
        util: UtilEntry {
            ll: ull,
            lu: ulu,
            level,
            design: util_design,
        },
    })
}

fn eval_point(
    config: &ScenarioConfig,
    v: &ResolvedVariant,
    vi: usize,
    pi: usize,
    x: f64,
    base_thr: &RateThresholds,
) -> CliResult<PointResult> {
    let (mc_samples, seed) = (config.mc.samples, config.mc.seed);
    let ctx = || format!("variant {} at {:?} = {x}", v.name, config.sweep.axis);
    let (params, cfg) = point_inputs(v, config.sweep.axis, x);
    let thr = match config.sweep.axis {
        SweepAxis::MTh | SweepAxis::ROut => thresholds(&cfg, &v.fit).map_err(|e| core_error(ctx(), e))?,
        _ => *base_thr,
    };
    params.validate().map_err(|e| core_error(ctx(), e))?;
    let closed = closed_form(&thr, &params, &v.counts).map_err(|e| core_error(ctx(), e))?;
    let mut mc = Vec::new();
    if mc_samples > 0 {
        let metrics = &config.mc.metrics;
        let events: Vec<_> = metrics
            .iter()
            .map(|&m| mc_event(m, params.num_users, &v.counts))
            .collect();
        let scenario = McScenario {
            params,
            cfg,
            fit: v.fit,
        };
        let est = estimate_many(&events, mc_samples, point_seed(seed, vi, pi), &scenario)
            .map_err(|e| core_error(ctx(), e))?;
        mc = metrics.iter().copied().zip(est).collect();
    }
    Ok(PointResult {
        axis_value: x,
        closed,
        mc,
    })
}

/// Evaluates every variant over the grid. Grid points run in parallel on
/// the current rayon pool; results keep axis order.
pub fn evaluate(config: &ScenarioConfig) -> CliResult<RunOutput> {
    config.validate()?;
    let variants = config.resolve()?;
    let mc_samples = config.mc.samples;
    let seed = config.mc.seed;
    let mut runs = Vec::with_capacity(variants.len());
    let mut comparisons = 0;
    let mut mismatches = Vec::new();
    for (vi, v) in variants.iter().enumerate() {
        let manifest = variant_manifest(config, v)?;
        let base_thr = manifest.derived.thresholds;
        let points = config
            .sweep
            .grid
            .par_iter()
            .enumerate()
            .map(|(pi, &x)| eval_point(config, v, vi, pi, x, &base_thr))
            .collect::<CliResult<Vec<_>>>()?;
        for p in &points {
            for (m, est) in &p.mc {
                comparisons += 1;
                let analytic = p.closed.metric(*m);
                if !est.agrees_with(analytic, 3.0) {
                    mismatches.push(Mismatch {
                        variant: v.name.clone(),
                        axis_value: p.axis_value,
                        metric: *m,
                        analytic,
                        estimate: *est,
                    });
                }
            }
        }
        runs.push(VariantRun {
            manifest,
            header: header(&config.mc.metrics, mc_samples > 0),
            points,
        });
    }
    let manifest = Manifest {
        tool: "semcell".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        library_version: semcell::VERSION.into(),
        seed,
        mc_samples,
        config: config.clone(),
        variants: runs.iter().map(|r| r.manifest.clone()).collect(),
    };
    Ok(RunOutput {
        manifest,
        variants: runs,
        comparisons,
        mismatches,
    })
}

pub fn csv_bytes(run: &VariantRun) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&run.header)?;
    for p in &run.points {
        let mut rec = vec![format_f64(p.axis_value)];
        rec.extend(p.closed.values().iter().map(|&x| format_f64(x)));
        rec.push(p.closed.regime.to_string());
        for (_, e) in &p.mc {
            rec.push(format_f64(e.estimate));
            rec.push(format_f64(e.std_error));
        }
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Writes one CSV per variant and `manifest.json` into `dir`.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for run in &out.variants {
        let path = dir.join(&run.manifest.csv);
        fs::write(&path, csv_bytes(run)?)?;
        written.push(path);
    }
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&out.manifest).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text)?;
    written.push(path);
    Ok(written)
}

pub fn describe_mismatch(m: &Mismatch) -> String {
    format!(
        "{} at axis value {}: {} closed form {} vs simulated {} ± {}",
        m.variant,
        format_f64(m.axis_value),
        m.metric.name(),
        format_f64(m.analytic),
        format_f64(m.estimate.estimate),
        format_f64(m.estimate.std_error)
    )
}
