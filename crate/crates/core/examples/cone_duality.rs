//! Dual of a wedge in the plane and an interior functional for it.

use ccrlab::cone::{interior_unit, Cone};
use ccrlab::rational::{dot, format_vec, ivec};

fn main() -> ccrlab::Result<()> {
    let p = Cone::from_generators(&[ivec(&[2, 1]), ivec(&[1, 3])])?;
    let dual = p.dual_cone()?;
    println!("P  generators:");
    for g in p.generators() {
        println!("  {}", format_vec(g));
    }
    println!("P* generators:");
    for g in dual.generators() {
        let pairings: Vec<String> = p.generators().iter().map(|v| dot(v, g).to_string()).collect();
        println!("  {}  pairs with P as [{}]", format_vec(g), pairings.join(", "));
    }
    let e = interior_unit(&dual, None)?;
    println!("e = {} (unit {:?}), interior: {}", format_vec(e.direction()), e.unit(), e.is_interior_to(&p));
    Ok(())
}
