//! Runs the full invariant suite and prints the report.
use qudit_discriminator::harness::{verify_all, Tolerances};

fn main() -> qudit_discriminator::Result<()> {
    let n_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let report = verify_all(n_max, Tolerances::default())?;
    print!("{report}");
    if !report.all_passed() {
        std::process::exit(1);
    }
    Ok(())
}
