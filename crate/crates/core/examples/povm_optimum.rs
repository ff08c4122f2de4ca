//! Sweeps the prior and reports the optimal measurement setting.
use qudit_discriminator::povm::{optimal_average, total_povm, Priors};

fn main() -> qudit_discriminator::Result<()> {
    let n = 3;
    println!("eta1   regime   x*      omega1*   P_avg");
    for k in 1..10 {
        let priors = Priors::from_eta1(k as f64 / 10.0)?;
        let r = optimal_average(n, priors)?;
        println!("{:.1}    {:<7}  {:.4}  {:.5}   {:.6}", priors.eta1, r.regime, r.x_star, r.omega1_star, r.value);
    }
    let povm = total_povm(n, 0.9553)?;
    povm.validate(1e-10)?;
    println!("min eigenvalues at omega1 = 0.9553: {:?}", povm.min_eigenvalues());
    Ok(())
}
