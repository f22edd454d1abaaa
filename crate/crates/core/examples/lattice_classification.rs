//! Two lattices in e^⊥: equal up to a change of basis, or told apart by a
//! spectral witness.

use ccrlab::classify::{equivalent_lattices, spectrum_type};
use ccrlab::cone::Functional;
use ccrlab::lattice::Lattice;
use ccrlab::rational::{format_vec, ivec, q};

fn main() -> ccrlab::Result<()> {
    let e = Functional::from_direction(&ivec(&[1, 1, 1]))?;
    let a = Lattice::new(3, vec![ivec(&[1, -1, 0]), ivec(&[0, 1, -1])])?;
    let b = Lattice::new(3, vec![ivec(&[1, 0, -1]), ivec(&[-1, 1, 0])])?;
    let c = Lattice::new(3, vec![ivec(&[1, -1, 0]), vec![q(0, 1), q(1, 2), q(-1, 2)]])?;

    for (name, other) in [("b", &b), ("c", &c)] {
        let eq = equivalent_lattices(&a, other, &e)?;
        println!("a ~ {name}: {}", eq.equivalent);
        if let Some(cert) = eq.certificate {
            println!(
                "  witness {}: spectrum {} in a, {} in {name}",
                format_vec(&cert.witness),
                cert.spectrum_a,
                cert.spectrum_b
            );
        }
    }
    println!("spectrum of e itself: {}", spectrum_type(e.direction(), &a, &e)?);
    Ok(())
}
