//! Gram rank of the covariance kernel at two interior points.

use ccrlab::index::{index_of, IndexOptions};
use ccrlab::rational::{format_vec, ivec};
use ccrlab::scenario::{generate_family, ScenarioSpec};

fn main() -> ccrlab::Result<()> {
    let octant = vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])];
    let s = generate_family(&ScenarioSpec::new("q3", octant, vec![ivec(&[1, -1, 0]), ivec(&[0, 1, -1])]))?;
    for k in 1..=3 {
        let r = index_of(&s.pspace, &s.window, &s.ladder, &IndexOptions::new(k, 1))?;
        println!(
            "k={k}: index {} at {} and {}, ranks {:?}",
            r.index,
            format_vec(&r.point_a),
            format_vec(&r.point_b),
            r.ranks
        );
    }
    Ok(())
}
