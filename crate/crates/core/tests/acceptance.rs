//! Runs every acceptance criterion, prints one line per criterion and fails
//! if any of them fails. Byte-identical reruns are checked against the
//! binary.

use std::process::{Command, ExitCode};

use radon_core::verify::{run_criterion, CRITERIA};

const SEED: u64 = 7;

fn determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_radon"))
            .args(["verify", "--suite", "all", "--seed", &SEED.to_string(), "--output"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        // exit status 1 only reports failed criteria; the file must exist either way
        if out.status.code() == Some(2) {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))
    };
    let a = run("first.json")?;
    let b = run("second.json")?;
    if a == b {
        Ok(format!("{} bytes, identical", a.len()))
    } else {
        Err("summaries differ".into())
    }
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in CRITERIA {
        match run_criterion(id, SEED) {
            Ok(r) => {
                println!("criterion {id:>3}: {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name);
                if !r.passed {
                    println!("    detail: {}", r.detail);
                    failed.push(id.to_string());
                }
            }
            Err(e) => {
                println!("criterion {id:>3}: FAIL (error: {e})");
                failed.push(id.to_string());
            }
        }
    }
    match determinism() {
        Ok(msg) => println!("criterion  12: PASS (byte-identical summaries: {msg})"),
        Err(e) => {
            println!("criterion  12: FAIL ({e})");
            failed.push("12".into());
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
