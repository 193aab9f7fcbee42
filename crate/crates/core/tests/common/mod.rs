#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn nanowire(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nanowire"))
        .current_dir(cwd)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[track_caller]
pub fn ok(o: Output) -> Output {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    o
}

/// Runs every subcommand once, each writing into `dir/<command>`.
pub fn full_pipeline(dir: &Path, seed: u64) -> Vec<PathBuf> {
    let seed = seed.to_string();
    let run = |args: &[&str]| ok(nanowire(dir, args));
    run(&["simulate-wl", "--out", "sim", "--seed", &seed, "--set", "n_parallel=34"]);
    run(&["fit-wl", "sim/trace.csv", "--out", "fit", "--set", "lso_bound=true", "--set", "lso_points_per_decade=20"]);
    run(&[
        "synth-lattice", "--out", "lattice", "--seed", &seed,
        "--set", "rows=256", "--set", "cols=256", "--set", "noise_sigma=0.2",
        "--set", "win_row0=72", "--set", "win_col0=72", "--set", "win_rows=112", "--set", "win_cols=112",
    ]);
    run(&[
        "gpa", "lattice/lattice.gpa1", "--out", "gpa", "--set", "period_nm=0.35",
        "--set", "ref_row0=29", "--set", "ref_col0=29", "--set", "ref_rows=14", "--set", "ref_cols=198",
    ]);
    run(&[
        "line-scan", "gpa/strain.gpa1", "--out", "scan",
        "--set", "p0_row=128", "--set", "p0_col=30", "--set", "p1_row=128", "--set", "p1_col=226", "--set", "width=3",
    ]);
    run(&["shape-minimize", "--out", "shape"]);
    std::fs::write(
        dir.join("tlm.csv"),
        "# n_parallel=34\nL_m,R_ohm\n5e-7,61\n1e-6,88\n1.5e-6,112\n2e-6,141\n",
    )
    .unwrap();
    run(&["tlm", "tlm.csv", "--out", "tlm", "--set", "control_R=1e9"]);
    let mut files = Vec::new();
    for sub in ["sim", "fit", "lattice", "gpa", "scan", "shape", "tlm"] {
        for entry in std::fs::read_dir(dir.join(sub)).unwrap() {
            files.push(entry.unwrap().path());
        }
    }
    files.sort();
    files
}

/// Machine-readable outputs (reports carry input paths and are excluded).
pub fn is_numeric_table(path: &Path) -> bool {
    let name = path.file_name().unwrap().to_string_lossy();
    name.ends_with(".dat") || name.ends_with(".csv") || name.ends_with(".gpa1") || name.ends_with("_result.txt")
}
