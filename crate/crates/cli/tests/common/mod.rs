//! Helpers for driving the `lamina` binary.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Run {
    pub fn text(&self) -> String {
        String::from_utf8(self.stdout.clone()).expect("utf-8 output")
    }
}

pub fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .display()
        .to_string()
}

pub fn lamina<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lamina"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Split a command line on spaces and expand `@name` to a fixture path.
pub fn args(line: &str) -> Vec<String> {
    line.split_whitespace()
        .map(|a| match a.strip_prefix('@') {
            Some(name) => fixture(name),
            None => a.to_string(),
        })
        .collect()
}

/// One invocation of every subcommand, all with successful exits.
pub const EVERY_COMMAND: &[&str] = &[
    "validate @s04.ttk",
    "cones @s04.ttk",
    "cones @g2.ttk",
    "cones @st2.fsf",
    "cones @golden_l.fsf",
    "vertex-cycles @t12.ttk",
    "split @s04.ttk @s04_drive.ttw",
    "split @s04.ttk @s04_drive.ttw --branch 5",
    "split @s04.ttk @s04_golden.ttw --float",
    "drive @s04.ttk @s04_drive.ttw --steps 20",
    "drive @s04.ttk @s04_golden.ttw --steps 6",
    "periodicity @s04.ttk @s04_golden.ttw",
    "periodicity @s04.ttk @s04_drive.ttw --steps 10",
    "saddle-connections @st2.fsf --length 3",
    "saddle-connections @golden_l.fsf --length 2 --matrix 1,1,0,1",
    "saddle-connections @pillowcase.fsf --length 3 --float --geodesic 0.5",
    "k-epsilon @st2.fsf --eps 1/10 --float --geodesic -3",
    "k-epsilon @pillowcase.fsf --eps 1",
    "horocycle-avg @golden_l.fsf --direction 1,1.4142135623730951 --normalize --delta 0.05 --t-max 50 --dt 0.1 --report 0.02,0.01",
    "sl2z orbit --point 1,0 --radius 10 --depth 40",
    "sl2z gap --point 1,1/2+1/2*sqrt5 --radius 5 --depth 10",
    "sl2z gap --point 1,1.618033988749895 --radius 5 --depth 10 --float",
    "sl2z classify --point 14,15",
    "sl2z classify --point 1,1.4142135623730951 --float",
    "sl2z lebesgue --matrix 1,1,0,1 --samples 20000 --seed 3",
];

pub fn scratch_dir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temporary directory")
}

pub fn path_in(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}
