use std::path::Path;
use std::process::{Command, Output};

use semcell::design::radius_for_threshold_snr;
use semcell::{radius_for_outage_threshold, thresholds, DesignTarget};
use semcell_cli::config::{ScenarioConfig, SweepAxis};
use semcell_cli::presets::{apply_preset, PRESETS};
use semcell_cli::runner::{csv_bytes, evaluate, write_outputs, Manifest};
use serde_json::Value;

fn semcell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semcell"))
        .args(args)
        .env_remove("SEMCELL_THREADS")
        .output()
        .unwrap()
}

fn preset(name: &str) -> ScenarioConfig {
    apply_preset(name, ScenarioConfig::table1()).unwrap()
}

#[test]
fn shipped_config_is_the_default() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/table1.json");
    assert_eq!(ScenarioConfig::load(&path).unwrap(), ScenarioConfig::table1());
}

#[test]
fn table1_defaults() {
    let v = ScenarioConfig::table1().resolve_base().unwrap();
    let p = v.params;
    assert_eq!(p.num_users, 30);
    assert_eq!(p.tx_power_w, 1.0);
    assert_eq!(p.bandwidth_hz, 20e6);
    assert_eq!(p.carrier_hz, 2.4e9);
    assert_eq!(p.pathloss_exp, 3.0);
    assert!((p.noise_density_w_per_hz / 10f64.powf(-20.4) - 1.0).abs() < 1e-12);
    assert_eq!(v.fit.k, 5);
    assert_eq!((v.fit.a1, v.fit.a2, v.fit.c1, v.fit.c2), (0.37, 0.98, 0.2525, -0.7895));
    assert_eq!(v.cfg.mu, 40);
    assert_eq!(v.cfg.m_th, 0.75);
    assert_eq!(v.cfg.r_out, 0.04);
    assert_eq!(v.cfg.ber, 1e-3);
    assert!(!v.cfg.use_capacity);
}

#[test]
fn preset_parameters() {
    let base = ScenarioConfig::table1().resolve_base().unwrap();

    let fig2 = preset("fig2").resolve().unwrap();
    assert_eq!(fig2.len(), 6);
    for v in &fig2 {
        assert_eq!(v.params, base.params);
        assert_eq!(v.cfg.r_out, 0.04);
    }
    let mut m: Vec<_> = fig2.iter().map(|v| (v.cfg.m_th, v.cfg.use_capacity)).collect();
    m.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(
        m,
        [
            (0.6, false),
            (0.6, true),
            (0.75, false),
            (0.75, true),
            (0.9, false),
            (0.9, true)
        ]
    );

    let fig3 = preset("fig3").resolve().unwrap();
    let r: Vec<_> = fig3.iter().map(|v| v.cfg.r_out).collect();
    assert_eq!(r, [0.04, 0.08, 0.12, 0.16, 0.2]);
    assert!(fig3.iter().all(|v| v.cfg.m_th == 0.75 && v.params == base.params));

    for name in ["fig4", "fig5"] {
        let cfg = preset(name);
        assert_eq!(cfg.sweep.axis, SweepAxis::RadiusM);
        assert_eq!(cfg.design.p_th, [1e-6, 1e-3]);
        for v in cfg.resolve().unwrap() {
            assert_eq!(v.params.pathloss_exp, 2.0);
            assert_eq!(v.params.tx_power_w, 1e-3);
            assert!([10, 50].contains(&v.params.num_users));
            assert_eq!(v.counts.lu, v.params.num_users);
            assert_eq!(v.params.bandwidth_hz, base.params.bandwidth_hz);
        }
    }
    let fig4 = preset("fig4").resolve().unwrap();
    assert_eq!(fig4.len(), 8);
    assert!(fig4
        .iter()
        .all(|v| v.counts.ll == 3 && [0.12, 0.16].contains(&v.cfg.r_out)));
    let fig5 = preset("fig5").resolve().unwrap();
    assert!(fig5
        .iter()
        .all(|v| v.cfg.r_out == 0.12 && [2, 4].contains(&v.counts.ll)));

    let fig7 = preset("fig7").resolve().unwrap();
    assert!(fig7
        .iter()
        .any(|v| (v.params.num_users, v.counts.util_ll, v.counts.util_lu) == (30, 5, 10)));
}

#[test]
fn all_presets_evaluate() {
    for name in PRESETS {
        let mut cfg = preset(name);
        cfg.mc.samples = 0;
        let out = evaluate(&cfg).unwrap();
        assert_eq!(out.variants.len(), cfg.variants.len(), "{name}");
        for run in &out.variants {
            assert_eq!(run.points.len(), cfg.sweep.grid.len());
        }
    }
}

#[test]
fn fig4_crossing_matches_design() {
    let out = evaluate(&preset("fig4")).unwrap();
    for run in &out.variants {
        let m = &run.manifest;
        let thr = thresholds(&m.rate, &m.similarity).unwrap();
        for d in &m.design {
            let target = DesignTarget::new(d.p_th, 3, m.network.num_users, m.network.num_users).unwrap();
            let r = radius_for_outage_threshold(&target, &thr, &m.network).unwrap();
            assert_eq!(r, d.hybrid);
            let b = radius_for_threshold_snr(&target, thr.g_bit, &m.network).unwrap();
            assert_eq!(b, d.bitcom);
            // the s_range column crosses p_th between the grid points around the radius
            let below = run
                .points
                .iter()
                .rev()
                .find(|p| p.axis_value <= d.hybrid.radius)
                .unwrap();
            let above = run.points.iter().find(|p| p.axis_value > d.hybrid.radius).unwrap();
            assert!(
                below.closed.s_range <= d.p_th && above.closed.s_range > d.p_th,
                "{} {}",
                m.name,
                d.p_th
            );
            let below = run.points.iter().rev().find(|p| p.axis_value <= d.bitcom.radius);
            if let Some(below) = below {
                assert!(below.closed.s_range_b <= d.p_th);
            }
        }
    }
}

#[test]
fn manifest_reproduces_csv() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let mut cfg = preset("fig3");
    cfg.sweep.grid.truncate(20);
    cfg.mc.samples = 20_000;
    cfg.mc.metrics.truncate(3);
    let out = evaluate(&cfg).unwrap();
    write_outputs(&out, &first).unwrap();

    let manifest_path = first.join("manifest.json");
    let text = std::fs::read_to_string(&manifest_path).unwrap();
    let manifest: Manifest = serde_json::from_str(&text).unwrap();
    assert_eq!(manifest.config, cfg);
    let status = semcell(&[
        "run",
        "--config",
        manifest_path.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    for run in &out.variants {
        let a = std::fs::read(first.join(&run.manifest.csv)).unwrap();
        let b = std::fs::read(second.join(&run.manifest.csv)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, csv_bytes(run).unwrap());
    }
    assert_eq!(text, std::fs::read_to_string(second.join("manifest.json")).unwrap());
}

#[test]
fn manifest_lists_derived_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = semcell(&["run", "--preset", "fig3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["tool"], "semcell");
    let v = &m["variants"][0];
    for key in ["c_l", "edge_snr"] {
        assert!(v["derived"][key].as_f64().unwrap() > 0.0);
    }
    for key in ["gamma", "g_bit", "g_min", "g_max"] {
        assert!(v["derived"]["thresholds"][key].as_f64().unwrap() > 0.0, "{key}");
    }
    assert!(v["derived"]["thresholds"]["g_sem"].is_null());
    assert!(m["variants"][2]["derived"]["thresholds"]["g_sem"].as_f64().is_some());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();

    let bad_field = write("bad_field.json", r#"{"network": {"num_users": 10, "radius": 3}}"#);
    let o = semcell(&["run", "--config", &bad_field, "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("network"));

    let bad_value = write("bad_value.json", r#"{"rate": {"m_th": 0.99}}"#);
    assert_eq!(
        semcell(&["run", "--config", &bad_value, "--out", out]).status.code(),
        Some(2)
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(
        semcell(&["run", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let ok = write("ok.json", r#"{"network": {"num_users": 10}}"#);
    let o = semcell(&["design", "radius", "--config", &ok, "--pth", "1e-3", "--ll", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["solution"]["radius"].as_f64().unwrap() > 0.0);
    assert_eq!(
        semcell(&["design", "radius", "--config", &ok, "--pth", "1.5", "--ll", "3"])
            .status
            .code(),
        Some(2)
    );
    let o = semcell(&["design", "util", "--config", &ok, "--ll", "2", "--lu", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["design"]["outcome"], "roots");

    let o = Command::new(env!("CARGO_BIN_EXE_semcell"))
        .args(["run", "--config", &ok, "--out", out])
        .env("SEMCELL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    // net_all is ~1e-9 here; 2000 realizations see no hit, so the estimate
    // is 0 ± 0 and cannot agree with the closed form
    let rare = write(
        "rare.json",
        r#"{"network": {"num_users": 3}, "sweep": {"axis": "radius_m", "grid": [300]},
            "mc": {"samples": 2000, "metrics": ["net_all"]}}"#,
    );
    assert_eq!(
        semcell(&["run", "--config", &rare, "--out", out]).status.code(),
        Some(0)
    );
    assert_eq!(
        semcell(&["validate", "--config", &rare, "--out", out]).status.code(),
        Some(4)
    );

    let blocked = write("blocked", "");
    let o = semcell(&["run", "--config", &ok, "--out", &format!("{blocked}/sub")]);
    assert_eq!(o.status.code(), Some(1));
}
