//! End-to-end tests of the `pairfluid` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pairfluid::output::{read_snapshot, MANIFEST_FILE, SERIES_FILE};
use pairfluid::parse_config;

fn pairfluid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairfluid"))
        .args(args)
        .output()
        .unwrap()
}

/// Writes `body` plus an `output.dir` line into `dir/run.cfg`.
fn write_config(dir: &Path, body: &str) -> (PathBuf, PathBuf) {
    let out = dir.join("out");
    let path = dir.join("run.cfg");
    std::fs::write(&path, format!("{body}\noutput.dir = {}\n", out.display())).unwrap();
    (path, out)
}

const SHORT: &str = "\
grid.cells = 512
solver.t_end = 300
output.snapshot_every = 4
";

fn series_rows(dir: &Path) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(dir.join(SERIES_FILE)).unwrap();
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn short_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), SHORT);
    let res = pairfluid(&["run", cfg.to_str().unwrap()]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(out.join(MANIFEST_FILE).exists());
    assert!(out.join("fields_000000.csv").exists());
    let rows = series_rows(&out);
    assert!(rows.len() > 2);
    assert_eq!(rows.last().unwrap()[0], 300.0);
    // pair count never decreases without recombination
    for w in rows.windows(2) {
        assert!(w[1][6] >= w[0][6]);
    }
}

#[test]
fn default_config_runs_until_wave_breaking() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), "");
    let res = pairfluid(&["run", cfg.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert_eq!(res.status.code(), Some(2), "{stderr}");
    assert!(stderr.contains("numerical breakdown"));
    // everything up to the last valid state is still written
    let rows = series_rows(&out);
    assert!(rows.last().unwrap()[0] > 1000.0);
    let manifest = std::fs::read_to_string(out.join(MANIFEST_FILE)).unwrap();
    assert!(manifest.contains("# status: aborted"));
}

#[test]
fn invalid_parameter_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), "physics.N0 = -1");
    let res = pairfluid(&["run", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&res.stderr).is_empty());
    assert!(!out.join(SERIES_FILE).exists());
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        "grid.colour = 3",
        "solver.dt = 1\nsolver.cfl = 0.4",
        "solver.t_end = soon",
    ] {
        let (cfg, _) = write_config(dir.path(), body);
        let res = pairfluid(&["run", cfg.to_str().unwrap()]);
        assert_eq!(res.status.code(), Some(1), "{body}");
        assert!(
            String::from_utf8_lossy(&res.stderr).contains("line"),
            "{body}"
        );
    }
    assert_eq!(pairfluid(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn missing_config_exits_3() {
    let res = pairfluid(&["run", "/nonexistent/run.cfg"]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn check_passes() {
    let res = pairfluid(&["check"]);
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert_eq!(res.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn version_prints_name() {
    let res = pairfluid(&["version"]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stdout).starts_with("pairfluid "));
}

#[test]
fn init_writes_initial_state_only() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), "physics.alpha = 7.299270072992701e-3");
    let res = pairfluid(&["init", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let rows = series_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][6], 0.0);
    assert!(rows[0][9] <= 1e-12);
    let snap = read_snapshot(out.join("fields_000000.csv")).unwrap();
    assert_eq!(snap.t, 0.0);
    let (j, peak) = snap
        .e
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |acc, (j, &v)| {
            if v.abs() > acc.1 {
                (j, v.abs())
            } else {
                acc
            }
        });
    assert!((peak - 0.44373).abs() / 0.44373 <= 3e-3);
    assert!(snap.x[j].abs() <= 2.0 * (snap.x[1] - snap.x[0]));
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut outs = Vec::new();
    for dir in [&a, &b] {
        let (cfg, out) = write_config(dir.path(), SHORT);
        assert_eq!(
            pairfluid(&["run", cfg.to_str().unwrap()]).status.code(),
            Some(0)
        );
        outs.push(out);
    }
    let mut names: Vec<_> = std::fs::read_dir(&outs[0])
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n != MANIFEST_FILE)
        .collect();
    names.sort();
    assert!(names.len() > 3);
    for name in names {
        let x = std::fs::read(outs[0].join(&name)).unwrap();
        let y = std::fs::read(outs[1].join(&name)).unwrap();
        assert!(x == y, "{name:?} differs");
    }
}

#[test]
fn manifest_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), SHORT);
    assert_eq!(
        pairfluid(&["run", cfg.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let manifest = std::fs::read_to_string(out.join(MANIFEST_FILE)).unwrap();
    let mut config = parse_config(&manifest).unwrap();

    // the manifest lists a digest for every file it was written after
    let digests: Vec<&str> = manifest
        .lines()
        .skip_while(|l| !l.starts_with("# output digests"))
        .skip(1)
        .collect();
    assert_eq!(digests.len(), std::fs::read_dir(&out).unwrap().count() - 1);

    let rerun = dir.path().join("rerun");
    config.output.dir = rerun.clone();
    let cfg2 = dir.path().join("rerun.cfg");
    std::fs::write(&cfg2, config.to_text()).unwrap();
    assert_eq!(
        pairfluid(&["run", cfg2.to_str().unwrap()]).status.code(),
        Some(0)
    );
    assert_eq!(
        std::fs::read(out.join(SERIES_FILE)).unwrap(),
        std::fs::read(rerun.join(SERIES_FILE)).unwrap()
    );
    let second = std::fs::read_to_string(rerun.join(MANIFEST_FILE)).unwrap();
    let strip = |text: &str, dir: &Path| text.replace(&dir.display().to_string(), "<dir>");
    assert_eq!(strip(&manifest, &out), strip(&second, &rerun));
}
