#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// One pinned invocation per subcommand, with the golden file it must match.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("phase_shifts.csv", &["phase-shifts", "--alpha", "0.5", "--m=-2..2", "--method", "analytic"]),
    ("spectrum.csv", &["spectrum", "--m", "0", "--alpha", "0.5", "--n", "3", "--numeric"]),
    ("algebra_check.json", &["algebra-check", "--m", "0", "--alpha", "0.5", "-N", "64"]),
    ("hellmann.json", &["hellmann", "--m", "0", "--alpha", "0.5", "--level", "0"]),
    ("fredholm.csv", &["fredholm", "--alpha", "0.5", "--m", "0"]),
    ("cross_section.csv", &["cross-section", "--alpha", "1", "--angles", "6"]),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn abphase(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_abphase"));
    cmd.args(args).env("SOURCE_DATE_EPOCH", "0").env_remove("ABPHASE_THREADS");
    if let Some(n) = threads {
        cmd.env("ABPHASE_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}
