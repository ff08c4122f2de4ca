//! Success probability for a concrete pair of pure states, from the closed
//! form and from the operators, across several qudit dimensions.
use qudit_discriminator::harness::haar_pair;
use qudit_discriminator::povm::{optimal_pure, pure_success, pure_success_from_operators, Priors, ReciprocalBasis};

fn main() -> qudit_discriminator::Result<()> {
    let priors = Priors::equal();
    let omega1 = 0.9553;
    for n in 2..=5 {
        let (a, b) = haar_pair(n, 2024, 0)?;
        let overlap = a.inner(&b)?.norm_sqr();
        let povm = ReciprocalBasis::new(n)?.povm(omega1)?;
        let closed = pure_success(&a, &b, omega1, priors, n)?;
        let direct = pure_success_from_operators(&povm, &a, &b, priors)?;
        println!(
            "n = {n}: |<a|b>|^2 = {overlap:.4}  closed {closed:.10}  operators {direct:.10}  ratio {:.10}",
            closed / (1.0 - overlap)
        );
    }
    let best = optimal_pure(0.25, priors)?;
    println!("best success at overlap 0.25 and equal priors: {:.6} ({})", best.value, best.regime);
    Ok(())
}
