mod common;

use common::*;
use nanowire_core::io;

fn kv(path: &std::path::Path) -> std::collections::BTreeMap<String, String> {
    io::read_key_values(path).unwrap()
}

fn number(map: &std::collections::BTreeMap<String, String>, key: &str) -> f64 {
    map[key].parse().unwrap()
}

#[test]
fn unknown_command_prints_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanowire(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("unknown command `frobnicate`"));
    assert!(err.contains("usage: nanowire"));
    assert_eq!(nanowire(dir.path(), &[]).status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanowire(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("--set"));
}

#[test]
fn flat_trace_is_a_fit_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("B_T,G_S\n");
    for b in -8..=8 {
        text.push_str(&format!("{b},1e-5\n"));
    }
    std::fs::write(dir.path().join("flat.csv"), text).unwrap();
    let o = nanowire(dir.path(), &["fit-wl", "flat.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[fit] degenerate"), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "# n_parallel=1\nB_T,G_S\n0,1\n1,1\nabc,1\n").unwrap();
    let o = nanowire(dir.path(), &["fit-wl", "bad.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[parse] line 5:"), "{}", stderr(&o));

    let o = nanowire(dir.path(), &["simulate-wl", "--set", "l_phi=abc"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[parse] parameter l_phi"), "{}", stderr(&o));

    std::fs::write(dir.path().join("bad.conf"), "l_phi 1\n").unwrap();
    let o = nanowire(dir.path(), &["simulate-wl", "--config", "bad.conf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[parse]"));
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanowire(dir.path(), &["simulate-wl", "--set", "l_phi=-1e-7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[domain]"), "{}", stderr(&o));

    let o = nanowire(dir.path(), &["shape-minimize", "--set", "r_lo=5", "--set", "r_hi=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[domain]"));

    let o = nanowire(dir.path(), &["fit-wl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("expects 1 input file"));
}

#[test]
fn simulate_then_fit_recovers_coherence_length() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| ok(nanowire(dir.path(), args));
    run(&["simulate-wl", "--out", "clean", "--set", "noise_sigma=0", "--set", "l_phi=2.1e-7", "--set", "n_parallel=34"]);
    run(&["fit-wl", "clean/trace.csv", "--out", "clean"]);
    let r = kv(&dir.path().join("clean/fit_result.txt"));
    assert!((number(&r, "l_phi") / 2.1e-7 - 1.0).abs() < 1e-6);
    assert_eq!(r["converged"], "true");

    run(&["simulate-wl", "--out", "noisy", "--seed", "9"]);
    run(&["fit-wl", "noisy/trace.csv", "--out", "noisy"]);
    let r = kv(&dir.path().join("noisy/fit_result.txt"));
    assert!((number(&r, "l_phi") - 130e-9).abs() < 3.0 * number(&r, "l_phi_err"));
}

#[test]
fn command_line_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.conf"), "# test\nl_phi=2e-7\nnoise_sigma=0\n").unwrap();
    let run = |args: &[&str]| ok(nanowire(dir.path(), args));
    run(&["simulate-wl", "--config", "run.conf", "--out", "a"]);
    run(&["simulate-wl", "--config", "run.conf", "--set", "l_phi=1.5e-7", "--out", "b"]);
    for (sub, expected) in [("a", 2e-7), ("b", 1.5e-7)] {
        run(&["fit-wl", &format!("{sub}/trace.csv"), "--out", sub]);
        let r = kv(&dir.path().join(sub).join("fit_result.txt"));
        assert!((number(&r, "l_phi") / expected - 1.0).abs() < 1e-6, "{sub}");
    }
}

#[test]
fn unused_parameters_are_warned_about() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(nanowire(dir.path(), &["shape-minimize", "--set", "gamma_tpo=1"]));
    assert!(stderr(&o).contains("unused parameter `gamma_tpo`"));
}

#[test]
fn shape_defaults_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let conf = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/shape_defaults.conf");
    let o = ok(nanowire(dir.path(), &["shape-minimize", "--config", conf]));
    assert!(stderr(&o).is_empty(), "{}", stderr(&o));
    let r = kv(&dir.path().join("out/shape_result.txt"));
    assert!(number(&r, "aspect_ratio") > number(&r, "aspect_ratio_strain_off"));
    assert!((number(&r, "aspect_ratio_strain_off") - 0.56 / 1.32).abs() < 1e-6);
}

#[test]
fn pipeline_is_deterministic_and_self_consistent() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = full_pipeline(a.path(), 42);
    let fb = full_pipeline(b.path(), 42);
    assert_eq!(fa.len(), fb.len());
    let mut compared = 0;
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.strip_prefix(a.path()).unwrap(), y.strip_prefix(b.path()).unwrap());
        if is_numeric_table(x) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{}", x.display());
            compared += 1;
        }
    }
    assert!(compared >= 12);

    for path in &fa {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = || std::fs::read_to_string(path).unwrap();
        if name.ends_with(".dat") {
            assert!(!io::parse_table(&text()).unwrap().is_empty(), "{name}");
        } else if name == "trace.csv" {
            io::parse_trace_csv(path).unwrap();
        } else if name.ends_with(".gpa1") {
            io::read_raster(path).unwrap();
        } else if name.ends_with("_result.txt") {
            assert!(!io::parse_key_values(&text()).unwrap().is_empty());
        }
    }

    let c = tempfile::tempdir().unwrap();
    let fc = full_pipeline(c.path(), 43);
    let trace = |dir: &std::path::Path| std::fs::read(dir.join("sim/trace.csv")).unwrap();
    assert_ne!(trace(a.path()), trace(c.path()));
    drop(fc);
}

#[test]
fn outputs_stay_inside_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    full_pipeline(dir.path(), 1);
    let mut top: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    top.sort();
    assert_eq!(top, ["fit", "gpa", "lattice", "scan", "shape", "sim", "tlm", "tlm.csv"]);
}
