//! Discrete subgroups of R^d with rational bases, Hermite normal forms and
//! the dual lattice used for the spectral invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::Functional;
use crate::error::{Error, Result};
use crate::rational::{self, Q, QVec};

#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    basis: Vec<QVec>,
    hnf: Vec<QVec>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        lattice_equal(self, other)
    }
}

impl Lattice {
    /// Lattice spanned over Z by the given basis vectors. Requires linearly
    /// independent vectors and rank at most `dim - 1`.
    pub fn new(dim: usize, basis: Vec<QVec>) -> Result<Self> {
        if let Some(b) = basis.iter().find(|b| b.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.len(),
            });
        }
        if basis.len() >= dim || rational::rank(&basis) != basis.len() {
            return Err(Error::DegenerateLattice);
        }
        let hnf = rational_hnf(&basis);
        Ok(Self { dim, basis, hnf })
    }

    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            basis: Vec::new(),
            hnf: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    /// Canonical basis: row Hermite normal form of the basis after clearing
    /// denominators, divided back by the common denominator.
    pub fn hnf(&self) -> &[QVec] {
        &self.hnf
    }

    /// Integer coordinates of `x` in the basis, if `x` is a lattice point.
    pub fn coordinates(&self, x: &[Q]) -> Option<Vec<BigInt>> {
        let c = rational::coordinates_in(&self.basis, x)?;
        c.iter()
            .map(|ci| ci.is_integer().then(|| ci.to_integer()))
            .collect()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.coordinates(x).is_some()
    }

    /// The lattice with every basis vector multiplied by `s`.
    pub fn scaled(&self, s: &Q) -> Result<Self> {
        Self::new(
            self.dim,
            self.basis.iter().map(|b| rational::scale(b, s)).collect(),
        )
    }

    pub fn point(&self, coeffs: &[i64]) -> QVec {
        let mut x = vec![Q::zero(); self.dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            x = rational::add(&x, &rational::scale(b, &rational::qi(*c)));
        }
        x
    }

    /// Gram matrix of the basis.
    pub fn gram(&self) -> Vec<QVec> {
        rational::gram(&self.basis)
    }
}

/// Same subgroup of R^d. Rank mismatch short-circuits to `false`.
pub fn lattice_equal(a: &Lattice, b: &Lattice) -> bool {
    a.dim == b.dim && a.rank() == b.rank() && a.hnf == b.hnf
}

fn rational_hnf(basis: &[QVec]) -> Vec<QVec> {
    if basis.is_empty() {
        return Vec::new();
    }
    let den = rational::lcm_of_denominators(basis.iter().flatten());
    let dq = Q::from_integer(den.clone());
    let ints: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|b| b.iter().map(|x| (x * &dq).to_integer()).collect())
        .collect();
    integer_row_hnf(ints)
        .into_iter()
        .map(|row| row.into_iter().map(|x| Q::new(x, den.clone())).collect())
        .collect()
}

/// Row Hermite normal form of an integer matrix: echelon form under unimodular
/// row operations with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn integer_row_hnf(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let Some(cols) = m.first().map(Vec::len) else {
        return m;
    };
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
            let Some(p) = pivot else { break };
            m.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let t = m[i][c].div_floor(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &t * y;
                }
                if !m[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let t = m[i][c].div_floor(&m[r][c]);
            if t.is_zero() {
                continue;
            }
            let pivot_row = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                *x -= &t * y;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Index of the subgroup of Z^dim generated by `gens`, or `None` when they do
/// not have full rank.
pub fn integer_lattice_index(gens: &[Vec<i64>], dim: usize) -> Option<BigInt> {
    if dim == 0 {
        return Some(BigInt::one());
    }
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let h = integer_row_hnf(rows);
    if h.len() < dim {
        return None;
    }
    let mut idx = BigInt::one();
    let mut c = 0;
    for row in &h {
        while row[c].is_zero() {
            c += 1;
        }
        idx *= &row[c];
        c += 1;
    }
    Some(idx)
}

/// Dual lattice `L*` of a rank-r lattice `N` orthogonal to a functional `e`,
/// with `N^⊥ = L* ⊕ span(N)^⊥`. The 2π factor is kept symbolic: the actual
/// dual vectors are `2π` times the vectors of [`DualLattice::rational_part`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualLattice {
    rational_part: Lattice,
}

impl DualLattice {
    /// `B (BᵀB)^{-1}`: the basis dual to `B` inside `span(B)`.
    pub fn rational_part(&self) -> &Lattice {
        &self.rational_part
    }

    /// `<n|w> / 2π` for a vector `n` and the `j`-th dual basis vector `w`.
    pub fn pairing_over_two_pi(&self, n: &[Q], j: usize) -> Q {
        rational::dot(n, &self.rational_part.basis()[j])
    }
}

fn dual_basis(basis: &[QVec]) -> Vec<QVec> {
    if basis.is_empty() {
        return Vec::new();
    }
    let ginv = rational::inverse(&rational::gram(basis)).expect("independent basis");
    let dim = basis[0].len();
    (0..basis.len())
        .map(|j| {
            let mut w = vec![Q::zero(); dim];
            for (i, b) in basis.iter().enumerate() {
                w = rational::add(&w, &rational::scale(b, &ginv[i][j]));
            }
            w
        })
        .collect()
}

pub fn dual_lattice(n: &Lattice, e: &Functional) -> Result<DualLattice> {
    if e.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            got: e.dim(),
        });
    }
    if n.basis().iter().any(|b| !e.pairing_dir(b).is_zero()) {
        return Err(Error::FunctionalNotOrthogonal);
    }
    let rational_part = Lattice::new(n.dim(), dual_basis(n.basis()))?;
    Ok(DualLattice { rational_part })
}

/// Undoes [`dual_lattice`]: the dual of the rational part, with the 2π
/// factors cancelling, is the original lattice.
pub fn undual(d: &DualLattice) -> Lattice {
    let l = d.rational_part();
    Lattice::new(l.dim(), dual_basis(l.basis())).expect("dual of a lattice is a lattice")
}
