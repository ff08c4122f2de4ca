//! Haar-averaged success by sampling, compared with the closed form, plus a
//! full photon-level run of the programmable discriminator.
use qudit_discriminator::harness::{mc_success, simulate_programmable};
use qudit_discriminator::povm::{average_success, omega1_from_x, Priors};

fn main() -> qudit_discriminator::Result<()> {
    let priors = Priors::from_eta1(0.4)?;
    let w = omega1_from_x(2.0)?;
    for n in [2, 3, 5] {
        let est = mc_success(n, w, priors, 20_000, 9)?;
        let exact = average_success(n, w, priors)?;
        println!(
            "n = {n}: sampled {:.5} +- {:.5}, closed form {exact:.5}, z = {:.2}",
            est.mean,
            est.stderr,
            est.z_score(exact)
        );
    }
    let run = simulate_programmable(3, priors, w, 50_000, 4)?;
    println!(
        "photon simulation: success {:.5} vs {:.5} ({:.2} sigma), misidentifications {}",
        run.success_empirical,
        run.success_analytic,
        run.z_score(),
        run.errors
    );
    Ok(())
}
