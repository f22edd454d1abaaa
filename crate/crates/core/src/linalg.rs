//! Small dense helpers on top of nalgebra, and a union-find.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Relative singular-value cutoff for numerical rank.
pub const SVD_REL_TOL: f64 = 1e-9;

/// Orthonormal basis (as columns) of the null space of `a`, using singular
/// values below `rel_tol * σ_max` as zero.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let cols = a.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if a.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let s_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let null_rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| s_max == 0.0 || svd.singular_values[i] <= rel_tol * s_max)
        .collect();
    DMatrix::from_fn(cols, null_rows.len(), |r, c| v_t[(null_rows[c], r)])
}

pub fn nullity(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    null_space(a, rel_tol).ncols()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(g: &DMatrix<Complex64>) -> Vec<f64> {
    // Real symmetric embedding [[Re, -Im], [Im, Re]] doubles every eigenvalue.
    let n = g.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = g[(i, j)];
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev.into_iter().step_by(2).collect()
}

pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }

    /// Component label (0-based, dense) for every element.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let r = self.find(i);
            if map[r] == usize::MAX {
                map[r] = next;
                next += 1;
            }
            *o = map[r];
        }
        (out, next)
    }
}
