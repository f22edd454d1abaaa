//! Bounded versus linear growth of μ(A \ aA) over a window ladder.

use ccrlab::index::interior_points;
use ccrlab::rational::ivec;
use ccrlab::scenario::{generate_family, ScenarioSpec};

fn main() -> ccrlab::Result<()> {
    let octant = vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])];
    let cases = [
        ("rank 2", vec![ivec(&[1, -1, 0]), ivec(&[0, 1, -1])]),
        ("rank 1", vec![ivec(&[1, -1, 0])]),
    ];
    for (name, lattice) in cases {
        let s = generate_family(&ScenarioSpec::new(name, octant.clone(), lattice))?;
        let (compact, reason) = s.pspace.boundary_compact();
        let mask = s.pspace.mask(&s.window)?;
        let (a, _) = interior_points(&mask, false)?;
        let g = s.pspace.growth_profile(&a, &s.ladder)?;
        println!("{name}: {reason}");
        for (l, mu) in &g.points {
            println!("  L = {l:6.2}  μ = {mu:.4}");
        }
        println!("  fitted slope {:.4}, {:?}, compact {compact}", g.slope, g.class);
    }
    Ok(())
}
