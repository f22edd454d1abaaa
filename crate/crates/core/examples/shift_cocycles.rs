//! Window shifts, the cocycle identity and the stable cocycle dimension.

use num_complex::Complex64;

use ccrlab::rational::ivec;
use ccrlab::scenario::{generate_family, ScenarioSpec};
use ccrlab::shiftrep::{cocycle_residual, cocycle_space_dim, semigroup_generators, AdditiveCocycle, Multiplicity, ShiftRep};

fn main() -> ccrlab::Result<()> {
    let mut spec = ScenarioSpec::new("q2", vec![ivec(&[1, 0]), ivec(&[0, 1])], vec![ivec(&[1, -1])]);
    spec.k = 2;
    let s = generate_family(&spec)?;
    let rep = ShiftRep::build(&s.pspace, &s.window, Multiplicity::Finite(s.k))?;
    let gens = semigroup_generators(&rep);
    println!("{} member cells, Hilbert dimension {}", rep.n_members(), rep.dim());
    println!("generators: {:?}", gens.iter().map(|g| g.as_vec()).collect::<Vec<_>>());

    let diag = rep.verify(&gens)?;
    println!("isometry {} semigroup {} range {}", diag.isometry, diag.semigroup, diag.range);

    let c = AdditiveCocycle::canonical(vec![Complex64::new(0.5, 1.0), Complex64::new(-1.0, 0.25)]);
    let r = cocycle_residual(&rep, &c, &gens[0], &gens[1])?;
    println!("cocycle residual at (g0, g1): {r}");

    let space = cocycle_space_dim(&s.pspace, s.k, &[], &s.ladder)?;
    println!("cocycle space: dim {} (raw {:?}, exponents {:?})", space.dim, space.raw_dims, space.growth_exponents);
    Ok(())
}
