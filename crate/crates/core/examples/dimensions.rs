//! Prints the subspace dimension table for a few qudit sizes, both from the
//! closed formulas and from ranks of the constructed projectors.
use qudit_discriminator::spaces::{dimension_table, measured_dimension_table, TAU_RANK};

fn main() -> qudit_discriminator::Result<()> {
    for n in 2..=4 {
        let formula = dimension_table(n)?;
        let measured = measured_dimension_table(n, TAU_RANK)?;
        println!("n = {n}");
        for ((name, f), (_, m)) in formula.rows().into_iter().zip(measured.rows()) {
            println!("  {name:<10} formula {f:>4}  measured {m:>4}");
        }
    }
    Ok(())
}
