#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// One representative run per subcommand; `--no-timestamp` is appended.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("deriv.json", &["deriv", "--function", "t^2", "--alpha", "0.5", "--at", "1,4", "--format", "json"]),
    (
        "integ.json",
        &["integ", "--function", "exp(t)", "--alpha", "0.5", "--gamma", "1.5", "--from", "0.5", "--to", "2", "--format", "json"],
    ),
    (
        "taylor.csv",
        &["taylor", "--function", "exp(t)", "--center", "0", "--order", "3", "--sweep", "--from", "0", "--to", "2", "--format", "csv"],
    ),
    (
        "remainder.json",
        &["remainder", "--function", "sin(t)", "--alpha", "0.7", "--center", "1", "--at", "2", "--order", "2", "--format", "json"],
    ),
    (
        "inequality.json",
        &[
            "inequality", "--theorem", "holder", "--function", "1", "--g", "1", "--r", "2", "--s", "2", "--from", "1", "--to", "4",
            "--alpha", "0.5", "--format", "json",
        ],
    ),
    ("verify.csv", &["verify", "--suite", "ftc", "--trials", "8", "--seed", "3", "--format", "csv"]),
];

pub fn vfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vfrac"))
        .args(args)
        .env_remove("VFRAC_QUAD_TOL")
        .output()
        .expect("binary runs")
}

pub fn golden_args(args: &[&'static str]) -> Vec<&'static str> {
    let mut v = args.to_vec();
    v.push("--no-timestamp");
    v
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}
