use std::path::PathBuf;
use std::process::{Command, Output};

pub fn qdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdisc"))
        .args(args)
        .env_remove("QDISC_TOL")
        .env_remove("QDISC_THREADS")
        .output()
        .expect("qdisc runs")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares `actual` with the stored golden file; `QDISC_UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("QDISC_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs from golden file\n--- expected\n{expected}\n--- actual\n{actual}"))
    }
}

#[allow(dead_code)]
pub const GOLDEN_CASES: [(&str, &[&str]); 3] = [
    ("dims_n3.json", &["dims", "--n", "3"]),
    ("scan_n2_eta05_steps4.csv", &["scan", "--n", "2", "--eta1", "0.5", "--steps", "4"]),
    ("optimal_n2_eta05_overlap0.json", &["optimal", "--n", "2", "--eta1", "0.5", "--overlap-sq", "0"]),
];
