//! Type I from a nonzero cocycle and an irreducible window representation.

use ccrlab::classify::type_one_report;
use ccrlab::rational::ivec;
use ccrlab::scenario::{generate_family, ScenarioSpec};

fn main() -> ccrlab::Result<()> {
    let quadrant = vec![ivec(&[1, 0]), ivec(&[0, 1])];
    for (lattice, k) in [(vec![ivec(&[1, -1])], 1), (vec![ivec(&[1, -1])], 2), (vec![], 1)] {
        let mut spec = ScenarioSpec::new("q2", quadrant.clone(), lattice.clone());
        spec.k = k;
        let r = type_one_report(&generate_family(&spec)?)?;
        println!(
            "rank {} k={k}: cocycle dim {}, commutant {}, type I {} ({})",
            lattice.len(),
            r.cocycle_dim,
            r.commutant_dim,
            r.type_one,
            r.note()
        );
    }
    Ok(())
}
