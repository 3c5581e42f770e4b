use std::path::{Path, PathBuf};
use std::process::Command;

use gapscope::config::{Band, ExperimentConfig};
use gapscope::csvio;
use gapscope::manifest::{sha256_hex, Manifest};
use gapscope::plot;
use gapscope::runner::{run_experiment, BenchRow, ResultRow, RunOptions};
use gapscope_core::Shots;

const BIN: &str = env!("CARGO_BIN_EXE_gapscope");

fn small_ising(extra: &str) -> String {
    format!(
        r#"{{"preset": "ising-paper", "sweep": {{"parameter": "h3_over_j1", "values": [2.5, 4.0, 5.5]}}, "seed": 9{extra}}}"#
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn gapscope(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reruns_are_byte_identical_and_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.json", &small_ising(r#", "workers": 1"#));
    let many = write(dir.path(), "many.json", &small_ising(r#", "workers": 3"#));
    for (cfg, out) in [(&one, "a"), (&one, "b"), (&many, "c")] {
        let o = gapscope(&["run", "--config", s(cfg), "--out-dir", s(&dir.path().join(out))]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["estimates.csv", "series.csv", "curves.csv", "benchmark.csv", "gaps.svg", "waves.svg"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        assert_eq!(a, std::fs::read(dir.path().join("b").join(f)).unwrap(), "{f}");
        assert_eq!(a, std::fs::read(dir.path().join("c").join(f)).unwrap(), "{f} with 3 workers");
    }
    let m = Manifest::load(&dir.path().join("a/manifest.json")).unwrap();
    let est = std::fs::read(dir.path().join("a/estimates.csv")).unwrap();
    assert_eq!(m.outputs["estimates.csv"], sha256_hex(&est));
}

#[test]
fn seed_flag_changes_sampled_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &small_ising(""));
    for (seed, out) in [("1", "a"), ("2", "b")] {
        assert!(gapscope(&["run", "--config", s(&cfg), "--seed", seed, "--out-dir", s(&dir.path().join(out))]).status.success());
    }
    let read = |d: &str| std::fs::read(dir.path().join(d).join("series.csv")).unwrap();
    assert_ne!(read("a"), read("b"));
    let m = Manifest::load(&dir.path().join("b/manifest.json")).unwrap();
    assert_eq!(m.config["seed"], 2);
}

#[test]
fn corrupt_geometry_fails_alone() {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/molecules/h2");
    for e in std::fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let values = "[0.5, 0.74, 1.0]";
    let clean = ExperimentConfig::from_json_in(
        &format!(r#"{{"preset": "molecule-paper", "model": {{"path": "index.json"}}, "sweep": {{"parameter": "bond_length_angstrom", "values": {values}}}}}"#),
        dir.path(),
    )
    .unwrap();
    let before = run_experiment(&clean, RunOptions::default()).unwrap();
    assert_eq!(before.failed(), 0);

    std::fs::write(dir.path().join("h2_0.740.json"), "{ not json").unwrap();
    let after = run_experiment(&clean, RunOptions::default()).unwrap();
    assert_eq!(after.failed(), 1);
    assert!(!after.rows[1].is_ok() && after.rows[1].error.is_some());
    for k in [0, 2] {
        assert_eq!(before.rows[k], after.rows[k]);
    }

    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"preset": "molecule-paper", "model": {{"path": "index.json"}}, "sweep": {{"parameter": "bond_length_angstrom", "values": {values}}}}}"#),
    );
    let o = gapscope(&["run", "--config", s(&cfg), "--out-dir", s(&dir.path().join("out"))]);
    assert_eq!(o.status.code(), Some(3));
    let rows = csvio::read_estimates(csvio::open(&dir.path().join("out/estimates.csv")).unwrap()).unwrap();
    assert_eq!(rows.iter().filter(|r| r.status == "failed").count(), 1);
}

#[test]
fn budget_is_accounted_and_non_default_splits_flagged() {
    let c = ExperimentConfig::from_json(&small_ising(r#", "ap": {"steps": 10}, "evo": {"steps": 50, "nodes": 25}"#)).unwrap();
    let out = run_experiment(&c, RunOptions::default()).unwrap();
    assert!(out.points.iter().all(|p| p.trotter_steps == Some(60)));
    let m = Manifest::new(&out);
    assert!(m.budget.non_default && m.budget.total == 60);
    assert!(out.warnings.iter().any(|w| w.contains("60")));

    let d = ExperimentConfig::from_json(&small_ising("")).unwrap();
    let m = Manifest::new(&run_experiment(&d, RunOptions::default()).unwrap());
    assert!(!m.budget.non_default && m.budget.total == 40);
    assert!(m.points.iter().all(|p| p.trotter_steps == Some(40) && p.delta_tau.is_some() && !p.pilot_scores.is_empty()));
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"preset": "ising-paper", "evo": {"nodez": 3}}"#);
    let o = gapscope(&["validate", "--config", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nodez"));
    let o = gapscope(&["run", "--preset", "nope", "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = gapscope(&["validate", "--preset", "molecule-paper"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ap"]["steps"], 5);
}

#[test]
fn csv_tables_round_trip_bit_exact() {
    let c = ExperimentConfig::from_json(&small_ising("")).unwrap();
    let out = run_experiment(&c, RunOptions::default()).unwrap();
    let mut buf = Vec::new();
    csvio::write_estimates(&mut buf, &out.rows).unwrap();
    assert_eq!(csvio::read_estimates(&buf[..]).unwrap(), out.rows);
    buf.clear();
    csvio::write_series(&mut buf, &out.series).unwrap();
    assert_eq!(csvio::read_series(&buf[..]).unwrap(), out.series);
    buf.clear();
    csvio::write_curves(&mut buf, &out.curves).unwrap();
    assert_eq!(csvio::read_curves(&buf[..]).unwrap(), out.curves);
}

#[test]
fn oracle_and_plot_commands_reproduce_run_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &small_ising(""));
    let run = dir.path().join("run");
    assert!(gapscope(&["run", "--config", s(&cfg), "--out-dir", s(&run)]).status.success());

    let bench = dir.path().join("bench.csv");
    let o = gapscope(&["oracle", "--config", s(&cfg), "--refine", "3", "-o", s(&bench)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&bench).unwrap(), std::fs::read(run.join("benchmark.csv")).unwrap());

    let fig = dir.path().join("fig.svg");
    let est = run.join("estimates.csv");
    let o = gapscope(&["plot", "--est", s(&est), "--bench", s(&bench), "--config", s(&cfg), "-o", s(&fig)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&fig).unwrap(), std::fs::read(run.join("gaps.svg")).unwrap());

    let o = gapscope(&[
        "plot",
        "--mode",
        "waves",
        "--series",
        s(&run.join("series.csv")),
        "--curves",
        s(&run.join("curves.csv")),
        "-o",
        s(&fig),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&fig).unwrap(), std::fs::read(run.join("waves.svg")).unwrap());

    let amp = dir.path().join("amp.csv");
    assert!(gapscope(&["oracle", "--config", s(&cfg), "--amplitude", "-o", s(&amp)]).status.success());
    let rows = csvio::read_bench(csvio::open(&amp).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.amplitude.unwrap() >= 0.5 - 1e-6));
}

#[test]
fn circuit_dump_has_forty_steps_of_gates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &small_ising(""));
    let dump = dir.path().join("circuit.txt");
    assert!(gapscope(&["run", "--config", s(&cfg), "--out-dir", s(dir.path()), "--dump-circuit", s(&dump)]).status.success());
    let c = gapscope_core::CircuitIR::parse_dump(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(c.two_qubit_depth(), 80);
    assert_eq!(c.count(gapscope_core::GateKind::Ms), 160);
}

fn golden_rows() -> (Vec<ResultRow>, Vec<BenchRow>) {
    let row = |x: f64, g: Option<f64>, sd: f64| ResultRow {
        sweep_value: x,
        status: if g.is_some() { "ok" } else { "failed" }.into(),
        gap_est: g,
        gap_std: g.map(|_| sd),
        amplitude: None,
        phase: None,
        offset: None,
        gap_exact: None,
        rel_err: None,
        shots: Shots::Finite(8192),
        backend: "statevector".into(),
        delta_tau: None,
        t_max: None,
        refined: None,
        residual_rms: None,
        runtime_s: None,
        error: None,
    };
    let rows = vec![row(1.0, Some(0.4), 0.05), row(2.0, Some(1.05), 0.02), row(3.0, None, 0.0), row(4.0, Some(3.0), 0.1)];
    let bench = (0..=12).map(|k| {
        let x = 1.0 + 0.25 * k as f64;
        BenchRow { sweep_value: x, gap_exact: (x - 1.0).max(0.0) + 0.1, amplitude: None }
    });
    (rows, bench.collect())
}

#[test]
fn sweep_plot_matches_golden_file() {
    let (rows, bench) = golden_rows();
    let bands = [Band { lo: 0.0, hi: 1.5, label: "infrared limit".into() }];
    let svg = plot::sweep_svg(&rows, &bench, &bands, "h3 / J1");
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sweep.svg");
    if std::env::var_os("GAPSCOPE_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
        std::fs::write(&golden, &svg).unwrap();
    }
    assert_eq!(svg, std::fs::read_to_string(&golden).unwrap());
    assert_eq!(svg.matches("<circle").count(), 3);
    assert!(svg.contains("stroke-dasharray") && svg.contains("infrared limit"));
}
