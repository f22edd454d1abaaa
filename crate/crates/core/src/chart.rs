//! Coordinates on the quotient `R^d / N = R^{d-r} × T^r`.
//!
//! A point `x` is written uniquely as `x = Σ y_i f_i + B ũ` with `f_i` an
//! orthogonal rational basis of `span(B)^⊥`; the torus coordinate is
//! `u = ũ mod Z^r`. The first complement vector is the direction of `e`
//! whenever `N` is nontrivial, so `y_1` measures height along `e`.

use num_traits::{One, Zero};

use crate::cone::Functional;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::rational::{self, Q, QVec};

#[derive(Debug, Clone)]
pub struct QuotientChart {
    lattice: Lattice,
    e: Functional,
    complement: Vec<QVec>,
    complement_norm_sq: QVec,
    gram_inv: Vec<QVec>,
    haar: f64,
}

impl QuotientChart {
    pub fn new(lattice: Lattice, e: Functional) -> Result<Self> {
        let d = lattice.dim();
        if e.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: e.dim(),
            });
        }
        if let Some(index) = lattice
            .basis()
            .iter()
            .position(|b| !e.pairing_dir(b).is_zero())
        {
            return Err(Error::LatticeNotOrthogonal { index });
        }
        let complement = if lattice.rank() == 0 {
            (0..d)
                .map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect()
        } else {
            let mut seeds = vec![e.direction().to_vec()];
            seeds.extend(rational::nullspace(lattice.basis(), d));
            rational::gram_schmidt(&seeds)
        };
        debug_assert_eq!(complement.len(), d - lattice.rank());
        let complement_norm_sq: QVec = complement.iter().map(|f| rational::norm_sq(f)).collect();
        let gram = lattice.gram();
        let gram_inv = if gram.is_empty() {
            Vec::new()
        } else {
            rational::inverse(&gram).expect("independent lattice basis")
        };
        let det_f: Q = complement_norm_sq.iter().fold(Q::one(), |acc, x| acc * x);
        let det_b = if gram.is_empty() {
            Q::one()
        } else {
            rational::determinant(&gram)
        };
        let haar = (rational::to_f64(&det_f) * rational::to_f64(&det_b)).sqrt();
        Ok(Self {
            lattice,
            e,
            complement,
            complement_norm_sq,
            gram_inv,
            haar,
        })
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Number of non-compact directions, `d - r`.
    pub fn free_dim(&self) -> usize {
        self.complement.len()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn functional(&self) -> &Functional {
        &self.e
    }

    pub fn complement(&self) -> &[QVec] {
        &self.complement
    }

    /// Volume in R^d of the unit box in `(y, ũ)` coordinates.
    pub fn haar_factor(&self) -> f64 {
        self.haar
    }

    /// `(y, ũ)` with `x = Σ y_i f_i + B ũ`, without reducing `ũ`.
    pub fn lift_coords(&self, x: &[Q]) -> (QVec, QVec) {
        let y = self
            .complement
            .iter()
            .zip(&self.complement_norm_sq)
            .map(|(f, n)| rational::dot(x, f) / n)
            .collect();
        let bx: QVec = self.lattice.basis().iter().map(|b| rational::dot(b, x)).collect();
        let ut = rational::mat_vec(&self.gram_inv, &bx);
        (y, ut)
    }

    pub fn quotient_coords(&self, x: &[Q]) -> (QVec, QVec) {
        let (y, ut) = self.lift_coords(x);
        (y, ut.iter().map(rational::frac).collect())
    }

    /// Right inverse of [`Self::lift_coords`].
    pub fn point(&self, y: &[Q], u: &[Q]) -> QVec {
        let mut x = vec![Q::zero(); self.dim()];
        for (yi, f) in y.iter().zip(&self.complement) {
            x = rational::add(&x, &rational::scale(f, yi));
        }
        for (ui, b) in u.iter().zip(self.lattice.basis()) {
            x = rational::add(&x, &rational::scale(b, ui));
        }
        x
    }
}
