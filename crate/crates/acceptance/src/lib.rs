//! Reporting helpers for the acceptance criteria in `tests/acceptance.rs`.
//!
//! Each criterion collects its problems in a [`Criterion`] and prints one
//! `[PASS]`/`[FAIL]` line straight to stderr, so the line shows up even when
//! the test harness captures output.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

pub struct Criterion {
    id: u32,
    title: &'static str,
    start: Instant,
    problems: Vec<String>,
}

impl Criterion {
    pub fn start(id: u32, title: &'static str) -> Self {
        Criterion { id, title, start: Instant::now(), problems: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(msg());
        }
    }

    pub fn problem(&mut self, msg: String) {
        self.problems.push(msg);
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    /// Records a problem when the criterion has run for `limit_s` seconds or more.
    pub fn runtime_below(&mut self, limit_s: f64) {
        let secs = self.elapsed().as_secs_f64();
        self.check(secs < limit_s, || format!("runtime {secs:.3} s exceeds {limit_s} s"));
    }

    /// Prints the verdict line and panics with the collected problems.
    pub fn finish(self) {
        let status = if self.problems.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{status}] criterion {:>2}: {} ({:.3} s)",
            self.id,
            self.title,
            self.elapsed().as_secs_f64()
        );
        for p in &self.problems {
            line.push_str(&format!("\n         - {p}"));
        }
        let _ = writeln!(std::io::stderr(), "{line}");
        assert!(self.problems.is_empty(), "criterion {} failed:\n{}", self.id, self.problems.join("\n"));
    }
}

/// Path of the `polybohr` binary in the current target directory, built on
/// demand when this package is tested on its own.
pub fn polybohr_binary() -> PathBuf {
    let exe = std::env::current_exe().expect("test executable path");
    let profile_dir = exe.parent().and_then(|deps| deps.parent()).expect("target profile directory");
    let bin = profile_dir.join(format!("polybohr{}", std::env::consts::EXE_SUFFIX));
    if !bin.exists() {
        let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
        let mut cmd = Command::new(cargo);
        cmd.args(["build", "--quiet", "--package", "polybohr", "--bin", "polybohr"]);
        if profile_dir.file_name().is_some_and(|p| p == "release") {
            cmd.arg("--release");
        }
        let status = cmd.status().expect("cargo runs");
        assert!(status.success(), "building the polybohr binary failed");
    }
    bin
}
