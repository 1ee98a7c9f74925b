use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hmpareto::formats::read_estimates;
use hmpareto::models::predict_all;
use hmpareto::pareto::pareto_frontier;
use hmpareto::{PerfParams, PlatformSpec, PowerParams};

const PERF_JSON: &str = r#"{"f":0.9251,"perf":1.897,"t_l_ref":60,"f_ref":800000000,"noise_time_sigma":0}"#;
const POWER_JSON: &str =
    r#"{"alpha_b":2.914e-28,"beta_b":9.342e-11,"alpha_l":5.953e-29,"beta_l":1.033e-10,"noise_power_sigma":0}"#;

fn hmpareto(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmpareto"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = hmpareto(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn assert_fails_with_one_line(out: &Output) {
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.starts_with("hmpareto: "), "{err}");
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn enumerate_counts_the_odroid_space() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ok(dir.path(), &["enumerate", "--platform", "odroid-xu3", "--count-only"]), "6384\n");
    let listing = ok(dir.path(), &["enumerate"]);
    assert_eq!(listing.lines().count(), 6385);
    assert_eq!(listing.lines().next(), Some("b,l,fb_hz,fl_hz"));
}

#[test]
fn platform_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("tiny.json"),
        r#"{"big":{"core_count":1,"frequencies_hz":[1e9]},"little":{"core_count":1,"frequencies_hz":[5e8,6e8]}}"#,
    )
    .unwrap();
    assert_eq!(ok(dir.path(), &["enumerate", "--platform", "tiny.json", "--count-only"]), "6\n");
    fs::write(dir.path().join("bad.json"), r#"{"big":{"core_count":1,"frequencies_hz":[]}}"#).unwrap();
    assert_fails_with_one_line(&hmpareto(dir.path(), &["enumerate", "--platform", "bad.json"]));
}

#[test]
fn pareto_on_empty_estimates_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.csv"), "").unwrap();
    assert_fails_with_one_line(&hmpareto(dir.path(), &["pareto", "--estimates", "empty.csv", "--gnuplot"]));
    fs::write(dir.path().join("header.csv"), "b,L,fb_hz,fl_hz,time_s,energy_j,p_seq_w,p_par_w\n").unwrap();
    assert_fails_with_one_line(&hmpareto(dir.path(), &["pareto", "--estimates", "header.csv"]));
    assert_eq!(files(dir.path()), ["empty.csv", "header.csv"]);
}

#[test]
fn bad_invocations_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["enumerate", "--bogus"][..],
        &["frobnicate"],
        &["fit-power", "--measurements", "missing.csv"],
        &["sample", "--count", "7000"],
        &["sample", "--count", "3", "--start-index", "0"],
    ] {
        assert_fails_with_one_line(&hmpareto(dir.path(), args));
    }
    fs::write(dir.path().join("perf.json"), PERF_JSON).unwrap();
    fs::write(dir.path().join("power.json"), POWER_JSON).unwrap();
    let out = hmpareto(
        dir.path(),
        &["predict", "--perf-params", "perf.json", "--power-params", "power.json", "--config", "5,4,2e9,1.4e9"],
    );
    assert_fails_with_one_line(&out);
    fs::write(dir.path().join("m.csv"), "app,b,l,fb_hz,fl_hz,time_s,power_w,repeat\nx,0,0,2e9,1e9,1,1,1\n").unwrap();
    let out = hmpareto(dir.path(), &["fit-power", "--measurements", "m.csv", "--out", "p.json"]);
    assert_fails_with_one_line(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"), "{:?}", out);
    assert!(!dir.path().join("p.json").exists());
}

#[test]
fn fit_speedup_takes_the_median_ratio() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pairs.csv"), "f_hz,t_little_s,t_big_s\n8e8,19,10\n1e9,18,10\n1.2e9,40,20\n").unwrap();
    assert_eq!(ok(dir.path(), &["fit-speedup", "--pairs", "pairs.csv"]), "1.9\n");
}

#[test]
fn predict_single_configuration_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("perf.json"), PERF_JSON).unwrap();
    fs::write(dir.path().join("power.json"), POWER_JSON).unwrap();
    let csv = ok(
        dir.path(),
        &["predict", "--perf-params", "perf.json", "--power-params", "power.json", "--config", "4,4,2000000000,1400000000"],
    );
    let est = read_estimates::<f64, _>(csv.as_bytes()).unwrap();
    let platform = PlatformSpec::odroid_xu3();
    let q = PowerParams::for_platform(&platform, 2.914e-28, 9.342e-11, 5.953e-29, 1.033e-10);
    let all = predict_all(&PerfParams::new(0.9251, 1.897, 60.0, 800e6), &q, &platform).unwrap();
    let expected = all.iter().find(|e| e.config == est[0].config).unwrap();
    assert_eq!(&est[0], expected);
}

/// sample → simulate → fit → predict → pareto on a noiseless synthetic
/// application must give the ground-truth frontier.
#[test]
fn noiseless_pipeline_reproduces_the_ground_truth_frontier() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("perf.json"), PERF_JSON).unwrap();
    fs::write(d.join("power.json"), POWER_JSON).unwrap();
    ok(d, &["simulate", "--perf-params", "perf.json", "--power-params", "power.json", "--count", "95", "--out", "power_runs.csv"]);
    ok(
        d,
        &["simulate", "--perf-params", "perf.json", "--power-params", "power.json", "--count", "50", "--start-index", "500", "--out", "time_runs.csv"],
    );
    ok(d, &["fit-power", "--measurements", "power_runs.csv", "--out", "power_fit.json"]);
    ok(d, &["fit-perf", "--perf", "1.897", "--tl-ref", "60", "--f-ref", "8e8", "--measurements", "time_runs.csv", "--out", "perf_fit.json"]);
    ok(d, &["predict", "--perf-params", "perf_fit.json", "--power-params", "power_fit.json", "--out", "est.csv"]);
    ok(d, &["pareto", "--estimates", "est.csv", "--gnuplot"]);

    let fitted = read_estimates::<f64, _>(fs::File::open(d.join("frontier.csv")).unwrap()).unwrap();
    let platform = PlatformSpec::odroid_xu3();
    let q = PowerParams::for_platform(&platform, 2.914e-28, 9.342e-11, 5.953e-29, 1.033e-10);
    let truth = pareto_frontier(&predict_all(&PerfParams::new(0.9251, 1.897, 60.0, 800e6), &q, &platform).unwrap()).unwrap();
    let configs = |v: &[hmpareto::Estimate]| v.iter().map(|e| e.config).collect::<Vec<_>>();
    assert_eq!(configs(&fitted), configs(&truth));

    let dat = fs::read_to_string(d.join("frontier.dat")).unwrap();
    assert_eq!(dat.lines().count(), truth.len() + 1);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(d.join("frontier.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "pareto");
    assert_eq!(manifest["inputs"][0], "est.csv");
    assert_eq!(manifest["outputs"], serde_json::json!(["frontier.csv", "frontier.dat"]));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(d.join("power_runs.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 0);
    assert_eq!(manifest["platform_ref"], "odroid-xu3");

    let ranks: Vec<String> = fs::read_to_string(d.join("frontier.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_owned())
        .collect();
    assert_eq!(ranks, (1..=truth.len()).map(|r| r.to_string()).collect::<Vec<_>>());
}

#[test]
fn compare_reports_each_reference() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("est.csv"),
        "b,L,fb_hz,fl_hz,time_s,energy_j,p_seq_w,p_par_w\n4,4,2e9,1.4e9,10,100,1,1\n4,4,1e9,1e9,20,50,1,1\n4,4,1e9,5e8,30,60,1,1\n",
    )
    .unwrap();
    fs::write(d.join("ref.csv"), "label,time_s,energy_j\nperformance,10,100\nondemand,25,80\n").unwrap();
    let report: serde_json::Value = serde_json::from_str(&ok(d, &["compare", "--estimates", "est.csv", "--measurements", "ref.csv"])).unwrap();
    assert_eq!(report[0]["label"], "performance");
    assert_eq!(report[0]["energy_saving_pct"], 0.0);
    assert_eq!(report[0]["speedup_pct"], 0.0);
    assert_eq!(report[1]["label"], "ondemand");
    assert_eq!(report[1]["energy_saving_pct"], 37.5);
    assert_eq!(report[1]["speedup_pct"], 20.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("perf.json"), r#"{"f":0.8,"perf":1.897,"t_l_ref":60,"f_ref":800000000}"#).unwrap();
    fs::write(d.join("power.json"), r#"{"alpha_b":2.914e-28,"beta_b":9.342e-11,"alpha_l":5.953e-29,"beta_l":1.033e-10}"#).unwrap();
    let steps: [&[&str]; 5] = [
        &["simulate", "--perf-params", "perf.json", "--power-params", "power.json", "--count", "95", "--seed", "7", "--out", "runs.csv"],
        &["fit-power", "--measurements", "runs.csv", "--out", "power_fit.json"],
        &["fit-perf", "--perf", "1.897", "--tl-ref", "60", "--f-ref", "8e8", "--measurements", "runs.csv", "--out", "perf_fit.json"],
        &["predict", "--perf-params", "perf_fit.json", "--power-params", "power_fit.json", "--out", "est.csv"],
        &["pareto", "--estimates", "est.csv", "--gnuplot"],
    ];
    let outputs = ["runs.csv", "power_fit.json", "perf_fit.json", "est.csv", "frontier.csv", "frontier.dat"];
    let snapshot = |d: &Path| -> Vec<Vec<u8>> {
        for s in steps {
            ok(d, s);
        }
        outputs.iter().map(|f| fs::read(d.join(f)).unwrap()).collect()
    };
    let first = snapshot(d);
    let second = snapshot(d);
    assert_eq!(first, second);

    let strip = |name: &str| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_slice(&fs::read(d.join(name)).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("created_unix_s");
        v
    };
    let before = strip("runs.csv.manifest.json");
    ok(d, steps[0]);
    assert_eq!(before, strip("runs.csv.manifest.json"));

    ok(d, &["simulate", "--perf-params", "perf.json", "--power-params", "power.json", "--count", "95", "--seed", "8", "--out", "runs.csv"]);
    assert_ne!(fs::read(d.join("runs.csv")).unwrap(), first[0]);
}
