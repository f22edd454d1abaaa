//! Polyhedral cones with exact rational data.
//!
//! A [`Cone`] keeps both descriptions: extreme rays (V-representation) and
//! inward facet normals (H-representation). Converting between the two is a
//! double description (Motzkin) pass; the dual cone simply swaps them.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, dot, primitive_direction, Q, QVec};

/// Largest dimension for which [`Cone::dual_cone`] returns a V-representation.
pub const MAX_VREP_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    generators: Vec<QVec>,
    facets: Vec<QVec>,
}

impl Cone {
    /// Builds the cone spanned by `generators`. Redundant generators are
    /// dropped; the stored rays are primitive integer vectors in sorted order.
    pub fn from_generators(generators: &[QVec]) -> Result<Self> {
        let dim = generators
            .first()
            .map(Vec::len)
            .ok_or(Error::NotSpanning { dim: 0 })?;
        if dim == 0 {
            return Err(Error::NotSpanning { dim });
        }
        if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        let nonzero: Vec<QVec> = generators
            .iter()
            .filter(|g| !rational::is_zero_vec(g))
            .cloned()
            .collect();
        if rational::rank(&nonzero) < dim {
            return Err(Error::NotSpanning { dim });
        }
        let facets = extreme_rays(&nonzero, dim);
        if rational::rank(&facets) < dim {
            return Err(Error::NotPointed);
        }
        let generators = extreme_rays(&facets, dim);
        Ok(Self {
            dim,
            generators,
            facets,
        })
    }

    /// Non-negative orthant of R^d.
    pub fn orthant(dim: usize) -> Self {
        let gens: Vec<QVec> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { rational::qi(1) } else { rational::qi(0) })
                    .collect()
            })
            .collect();
        Self::from_generators(&gens).expect("orthant is spanning and pointed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme rays as primitive integer vectors.
    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    /// Inward facet normals: the cone is `{x : <f|x> >= 0 for every facet f}`.
    pub fn facets(&self) -> &[QVec] {
        &self.facets
    }

    /// H-representation of the dual cone: `{y : <v|y> >= 0}` for the generators `v`.
    /// Available in every dimension.
    pub fn dual_halfspaces(&self) -> &[QVec] {
        &self.generators
    }

    /// The dual cone `{y : <x|y> >= 0 for all x in P}` with its V-representation.
    pub fn dual_cone(&self) -> Result<Cone> {
        if self.dim > MAX_VREP_DIM {
            return Err(Error::DimensionTooLarge {
                dim: self.dim,
                max: MAX_VREP_DIM,
            });
        }
        Ok(Cone {
            dim: self.dim,
            generators: self.facets.clone(),
            facets: self.generators.clone(),
        })
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.in_cone(x, false)
    }

    /// Exact membership: every facet inequality holds (strictly when `strict`).
    pub fn in_cone(&self, x: &[Q], strict: bool) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        self.facets.iter().all(|f| {
            let v = dot(f, x);
            if strict {
                v.is_positive()
            } else {
                !v.is_negative()
            }
        })
    }

    /// `x <= y` in the cone order, i.e. `y - x` lies in the cone.
    pub fn leq(&self, x: &[Q], y: &[Q]) -> bool {
        self.contains(&rational::sub(y, x))
    }

    /// Pointedness certificate: no nonzero `x` with `x` and `-x` both in the cone.
    pub fn is_pointed(&self) -> bool {
        rational::rank(&self.facets) == self.dim
    }

    /// Same cone as `other` (mutual generator containment).
    pub fn same_as(&self, other: &Cone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Radius `R` with `{y in P : <y|e> <= c} ⊆ ball(0, R)`.
    ///
    /// Every `y` in the slab is `Σ t_j v̂_j` with unit generators, so
    /// `|y| <= Σ t_j <= c / min_j <v̂_j|e>`.
    pub fn slab_radius(&self, e: &Functional, c: &Q) -> Result<f64> {
        if c.is_negative() {
            return Err(Error::Invalid("slab level must be nonnegative".into()));
        }
        if !e.is_interior_to(self) {
            return Err(Error::NotInteriorFunctional);
        }
        let min_pairing = self
            .generators
            .iter()
            .map(|g| {
                let gf = rational::to_f64_vec(g);
                let n = gf.iter().map(|x| x * x).sum::<f64>().sqrt();
                gf.iter().zip(&e.unit).map(|(a, b)| a * b).sum::<f64>() / n
            })
            .fold(f64::INFINITY, f64::min);
        Ok(rational::to_f64(c) / min_pairing)
    }
}

/// A unit functional `e`, carried both as an exact rational direction and as
/// its normalized floating-point value.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    dir: QVec,
    unit: Vec<f64>,
}

impl Functional {
    /// Normalizes a nonzero rational direction.
    pub fn from_direction(dir: &[Q]) -> Result<Self> {
        if rational::is_zero_vec(dir) {
            return Err(Error::ZeroDirection);
        }
        let dir = primitive_direction(dir);
        let f = rational::to_f64_vec(&dir);
        let n = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(Self {
            unit: f.iter().map(|x| x / n).collect(),
            dir,
        })
    }

    /// Primitive integer vector pointing along `e`.
    pub fn direction(&self) -> &[Q] {
        &self.dir
    }

    pub fn unit(&self) -> &[f64] {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    /// Sign-exact pairing `<x|dir>`; `<x|e>` is this divided by `|dir|`.
    pub fn pairing_dir(&self, x: &[Q]) -> Q {
        dot(x, &self.dir)
    }

    pub fn pairing(&self, x: &[Q]) -> f64 {
        let n = rational::to_f64(&rational::norm_sq(&self.dir)).sqrt();
        rational::to_f64(&self.pairing_dir(x)) / n
    }

    /// `<v|e> > 0` for every generator `v` of `cone`, i.e. `e` lies in `Int(P*)`.
    pub fn is_interior_to(&self, cone: &Cone) -> bool {
        cone.dim() == self.dim()
            && cone
                .generators()
                .iter()
                .all(|g| dot(g, &self.dir).is_positive())
    }
}

/// Picks a unit vector in the interior of `pstar`.
///
/// Without a hint this is the normalized sum of the generators of `pstar`.
/// A hint is accepted as-is when it is strictly interior.
pub fn interior_unit(pstar: &Cone, hint: Option<&[Q]>) -> Result<Functional> {
    let candidate: QVec = match hint {
        Some(h) => {
            if h.len() != pstar.dim() {
                return Err(Error::DimensionMismatch {
                    expected: pstar.dim(),
                    got: h.len(),
                });
            }
            h.to_vec()
        }
        None => pstar
            .generators()
            .iter()
            .fold(vec![Q::zero(); pstar.dim()], |acc, g| rational::add(&acc, g)),
    };
    let strictly_inside = !rational::is_zero_vec(&candidate) && pstar.in_cone(&candidate, true);
    if !strictly_inside {
        return Err(match hint {
            Some(_) => Error::NotInteriorFunctional,
            None => Error::EmptyInterior,
        });
    }
    Functional::from_direction(&candidate)
}

/// Extreme rays of the pointed cone `{y : <a|y> >= 0 for every row a}` by the
/// double description method. `rows` must have rank `dim`. Rays come back as
/// primitive integer vectors, sorted.
pub fn extreme_rays(rows: &[QVec], dim: usize) -> Vec<QVec> {
    // Initial simplicial cone from `dim` independent rows; its rays are the
    // columns of the inverse of the selected block.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<QVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if rational::rank(&trial) > basis.len() {
            basis = trial;
            chosen.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis.len(), dim, "constraint rows must have full rank");
    let inv = rational::inverse(&basis).expect("independent rows");
    let mut rays: Vec<QVec> = rational::transpose(&inv);
    let mut processed: Vec<usize> = chosen.clone();

    for (i, a) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        let mut next: Vec<QVec> = (0..rays.len())
            .filter(|&j| !vals[j].is_negative())
            .map(|j| rays[j].clone())
            .collect();
        if !neg.is_empty() {
            let tight = |r: &QVec| -> Vec<usize> {
                processed
                    .iter()
                    .copied()
                    .filter(|&k| dot(&rows[k], r).is_zero())
                    .collect()
            };
            let tight_sets: Vec<Vec<usize>> = rays.iter().map(tight).collect();
            for &p in &pos {
                for &n in &neg {
                    let common: Vec<QVec> = tight_sets[p]
                        .iter()
                        .filter(|k| tight_sets[n].contains(k))
                        .map(|&k| rows[k].clone())
                        .collect();
                    if common.len() + 2 < dim {
                        continue;
                    }
                    if rational::rank(&common) + 2 != dim {
                        continue;
                    }
                    let new_ray = rational::sub(
                        &rational::scale(&rays[n], &vals[p]),
                        &rational::scale(&rays[p], &vals[n]),
                    );
                    next.push(primitive_direction(&new_ray));
                }
            }
        }
        processed.push(i);
        rays = next;
    }

    let mut out: Vec<QVec> = rays
        .into_iter()
        .filter(|r| !rational::is_zero_vec(r))
        .map(|r| primitive_direction(&r))
        .collect();
    out.sort();
    out.dedup();
    out
}
