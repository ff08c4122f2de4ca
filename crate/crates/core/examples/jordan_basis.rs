//! Builds the paired g/h bases for n = 3 and shows their principal angles.
use qudit_discriminator::jordan::{self, build_gh_bases};

fn main() -> qudit_discriminator::Result<()> {
    let set = build_gh_bases(3)?;
    println!("{} Jordan pairs on {} qudits of dimension 3", set.len(), set.space().factors());
    let angles = jordan::jordan_angles(&set.g, &set.h)?;
    println!("cosines: {:?}", angles.cosines);
    println!("angles (deg): {:?}", angles.angles().iter().map(|a| a.to_degrees()).collect::<Vec<_>>());
    println!("cross-Gram deviation from -I/2: {:.2e}", jordan::overlap_matrix(&set)?.max_deviation);
    println!("density rebuilt from blocks vs direct form: {:.2e}", jordan::density_consistency(3)?);
    Ok(())
}
