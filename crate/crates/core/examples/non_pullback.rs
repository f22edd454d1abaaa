//! No one-parameter pullback reproduces the spectra of a lattice flow.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ccrlab::classify::{pullback_obstruction, random_direction};
use ccrlab::cone::Functional;
use ccrlab::lattice::Lattice;
use ccrlab::rational::{format_vec, ivec};

fn main() -> ccrlab::Result<()> {
    let e = Functional::from_direction(&ivec(&[1, 1]))?;
    let n = Lattice::new(2, vec![ivec(&[1, -1])])?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for mu in [e.direction().to_vec(), random_direction(2, &mut rng), random_direction(2, &mut rng)] {
        let w = pullback_obstruction(&n, &e, &mu)?;
        println!(
            "mu {:>12}: w = {:>12}  lattice {}  pullback {}  valid {}",
            format_vec(&mu),
            format_vec(&w.w),
            w.lattice_spectrum,
            w.pullback_spectrum,
            w.is_valid()
        );
    }
    Ok(())
}
