use proptest::prelude::*;

use relmaser::config::{parse_config, PlotStyle};
use relmaser::plot::{emit_plot, Trace};
use relmaser::results::{metadata_json, read_endfire_csv, write_endfire_csv, OutputPaths};
use relmaser_core::solver::{EndfireSample, SimulationResult, Solver};
use relmaser_core::Complex64;

fn empty_result(config: &relmaser::ScenarioConfig) -> SimulationResult {
    let solver = Solver::new(config.to_scenario().resolve().unwrap()).unwrap();
    SimulationResult {
        endfire: Vec::new(),
        channel_summaries: Vec::new(),
        snapshots: Vec::new(),
        metadata: solver.metadata(),
        svea_ratio: 0.0,
    }
}

#[test]
fn empty_series_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    write_endfire_csv(&[], &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "tau_s,intensity_W_m2,E_re_V_m,E_im_V_m,intensity_norm\n"
    );
    assert!(read_endfire_csv(&path).unwrap().is_empty());
}

#[test]
fn fig1_metadata_reports_superradiance_time() {
    let config = parse_config("preset = \"fig1-beta0\"").unwrap();
    let result = empty_result(&config);
    let text = metadata_json(
        &result,
        &config,
        &OutputPaths::new(std::path::Path::new("."), "x"),
    )
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    let tr = v["derived"]["tr_rest"]["value"].as_f64().unwrap();
    assert_eq!(v["derived"]["tr_rest"]["unit"], "s");
    assert!((tr / 22e-6 - 1.0).abs() < 0.05);
    assert_eq!(tr, result.metadata.tr_rest);
    assert!(text.contains("\"value\": 2.2486683398683531e-5"));
    assert_eq!(v["config"]["sample"]["length"].as_f64().unwrap(), 4.2e13);
    assert_eq!(v["config"]["channels"][0]["ntot"].as_f64().unwrap(), 2e4);
}

#[test]
fn svg_is_byte_identical_for_identical_input() {
    let pts: Vec<(f64, f64)> = (0..5000)
        .map(|i| (i as f64 * 1e-5, (i as f64 * 0.01).sin().abs() * 1e-6))
        .collect();
    let t = vec![Trace {
        label: "β = 0".into(),
        points: pts,
    }];
    for style in [PlotStyle::Linear, PlotStyle::Log] {
        let a = emit_plot("fig1-beta0", &t, style, 1e-30).unwrap();
        let b = emit_plot("fig1-beta0", &t.clone(), style, 1e-30).unwrap();
        assert_eq!(a.as_bytes(), b.as_bytes());
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
    ]
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(rows in prop::collection::vec((finite(), 0.0..1e10f64, finite(), finite()), 0..50)) {
        let series: Vec<EndfireSample> = rows
            .iter()
            .map(|(t, i, re, im)| EndfireSample { tau: *t, intensity: *i, field: Complex64::new(*re, *im) })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_endfire_csv(&series, &path).unwrap();
        let back = read_endfire_csv(&path).unwrap();
        prop_assert_eq!(back.len(), series.len());
        for (a, b) in back.iter().zip(&series) {
            prop_assert_eq!(a.tau.to_bits(), b.tau.to_bits());
            prop_assert_eq!(a.intensity.to_bits(), b.intensity.to_bits());
            prop_assert_eq!(a.field.re.to_bits(), b.field.re.to_bits());
            prop_assert_eq!(a.field.im.to_bits(), b.field.im.to_bits());
        }
    }

    #[test]
    fn resolved_config_round_trips(
        beta in -0.95..0.95f64,
        length in 1e13..1e14f64,
        t2 in 5e-4..5e-3f64,
        t1_factor in 1.0..200.0f64,
        tau_max in 0.01..0.2f64,
        n_z in 2usize..800,
        channels in prop::collection::vec((-30i64..30, 1e3..3e4f64), 1..4),
        stride in 1usize..50,
        log in any::<bool>(),
    ) {
        let mut doc = format!(
            "name = \"p\"\n[sample]\nlength = {length:?}\n[timescales]\nt1 = {:?}\nt2 = {t2:?}\n\
             [frame]\nbeta = {beta:?}\n[grid]\nn_z = {n_z}\ntau_max = {tau_max:?}\n\
             [output]\nrecord_stride = {stride}\nplot = \"{}\"\n",
            t1_factor * t2,
            if log { "log" } else { "linear" },
        );
        for (k, n) in &channels {
            doc.push_str(&format!("[[channels]]\nk = {k}\nntot = {n:?}\n"));
        }
        // Some draws violate the step-size rule; those must be rejected, not mangled.
        match parse_config(&doc) {
            Ok(c) => {
                let again = parse_config(&c.to_toml()).unwrap();
                prop_assert_eq!(&c, &again);
                prop_assert_eq!(c.frame.beta.to_bits(), beta.to_bits());
            }
            Err(e) => prop_assert_eq!(e.category(), "constraint"),
        }
    }
}
