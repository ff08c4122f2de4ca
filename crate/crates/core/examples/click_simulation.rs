//! Samples detector clicks from the three-mode discriminator.
use qudit_discriminator::optics::{discriminator_network, simulate_clicks, DiscriminatorNetwork};
use qudit_discriminator::povm::omega1_from_x;
use qudit_discriminator::spaces::{SpaceSpec, StateVector};

fn main() -> qudit_discriminator::Result<()> {
    let net = discriminator_network(omega1_from_x(2.0)?)?;
    for (label, input) in [("g", DiscriminatorNetwork::input_g()), ("h", DiscriminatorNetwork::input_h())] {
        let exact = net.probabilities(&input)?;
        let stats = simulate_clicks(&net.interferometer, &StateVector::new(SpaceSpec::single(3)?, input)?, 100_000, 1)?;
        println!("input {label}: exact [D1, D2, F] = {exact:.4?}, sampled = {:.4?}", stats.frequencies());
    }
    Ok(())
}
