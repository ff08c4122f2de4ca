//! Decomposes a random unitary into two-mode layers, writes the network in
//! the text format, and reads it back.
use qudit_discriminator::harness::random_unitary;
use qudit_discriminator::linalg;
use qudit_discriminator::linalg::C64;
use qudit_discriminator::optics::{prepare_state_network, reck_decompose, Interferometer};

fn main() -> qudit_discriminator::Result<()> {
    let u = random_unitary(4, 42)?;
    let net = reck_decompose(&u)?;
    println!("{} layers, reconstruction error {:.2e}", net.layers().len(), linalg::max_abs_diff(&net.unitary(), &u));
    let text = net.to_text();
    print!("{text}");
    let back = Interferometer::from_text(&text)?;
    println!("text round trip error {:.2e}", linalg::max_abs_diff(&back.unitary(), &u));

    let amps = [C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(-0.5, 0.0), C64::new(0.0, -0.5)];
    let prep = prepare_state_network(&amps)?;
    println!(
        "state preparation uses {} layers; first column {:?}",
        prep.layers().len(),
        prep.unitary().column(0).as_slice()
    );
    Ok(())
}
