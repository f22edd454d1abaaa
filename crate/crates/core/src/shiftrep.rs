//! The shift representation `(V_x f)(p) = f(p - x)` of a P-space on a grid
//! window, its additive cocycles, cocycle space and commutant.
//!
//! Member cells carry a `k`-dimensional fibre; Hilbert index `pos * k + c`
//! where `pos` is the position of the cell among member cells. Shifts leaving
//! the window are truncated, so every operator identity is only asserted on
//! the safe region where the truncation is invisible.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{distinct_windows, GridShift, GridWindow};
use crate::lattice::integer_lattice_index;
use crate::linalg::{null_space, symmetric_eigenvalues, UnionFind, SVD_REL_TOL};
use crate::pspace::{Mask, PSpace};
use crate::rational::{Q, QVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone)]
pub struct ShiftRep {
    mask: Mask,
    k: usize,
    members: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl ShiftRep {
    pub fn build(pspace: &PSpace, window: &GridWindow, k: Multiplicity) -> Result<Self> {
        let k = match k {
            Multiplicity::Finite(0) => {
                return Err(Error::Invalid("multiplicity must be positive".into()))
            }
            Multiplicity::Finite(k) => k,
            Multiplicity::Infinite => return Err(Error::InfiniteMultiplicity),
        };
        let mask = pspace.mask(window)?;
        let mut pos = vec![None; window.n_cells()];
        let mut members = Vec::new();
        for (idx, p) in pos.iter_mut().enumerate() {
            if mask.get(idx) {
                *p = Some(members.len());
                members.push(idx);
            }
        }
        Ok(Self {
            mask,
            k,
            members,
            pos,
        })
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn window(&self) -> &GridWindow {
        self.mask.window()
    }

    pub fn pspace(&self) -> &PSpace {
        self.mask.pspace()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_members(&self) -> usize {
        self.members.len()
    }

    /// Dimension of the discretized `L²(A) ⊗ C^k`.
    pub fn dim(&self) -> usize {
        self.members.len() * self.k
    }

    pub fn cell_volume(&self) -> f64 {
        self.window().cell_volume(self.pspace().chart())
    }

    /// Window cell index of the member at position `pos`.
    pub fn member_cell(&self, pos: usize) -> usize {
        self.members[pos]
    }

    pub fn position(&self, cell: usize) -> Option<usize> {
        self.pos[cell]
    }

    fn cell_of(&self, pos: usize) -> (Vec<i64>, Vec<i64>) {
        self.window().cell(self.members[pos])
    }

    /// Position of the cell `x + cell(pos)` if it is a member inside the window.
    fn shifted(&self, pos: usize, x: &GridShift) -> Option<usize> {
        let (j, t) = self.cell_of(pos);
        let (jj, tt) = x.apply(&j, &t);
        self.window().index(&jj, &tt).and_then(|i| self.pos[i])
    }

    fn in_window_after(&self, pos: usize, x: &GridShift) -> bool {
        let (j, t) = self.cell_of(pos);
        let (jj, tt) = x.apply(&j, &t);
        self.window().index(&jj, &tt).is_some()
    }

    /// Exact membership of `cell(pos) + x`, inside the window or not.
    fn member_after(&self, pos: usize, x: &GridShift) -> bool {
        let (j, t) = self.cell_of(pos);
        let (jj, tt) = x.apply(&j, &t);
        self.mask.member_cell(&jj, &tt)
    }

    pub fn check_sample(&self, x: &GridShift) -> Result<()> {
        let w = self.window();
        if x.dy.len() != w.free_dim() || x.du.len() != w.rank() {
            return Err(Error::SampleOffGrid("shift has the wrong number of axes".into()));
        }
        if !self
            .pspace()
            .in_semigroup(&x.point(w, self.pspace().chart()))
        {
            return Err(Error::NotInCone);
        }
        Ok(())
    }

    /// Snaps an R^d point to a grid shift of this window.
    pub fn snap(&self, x: &[Q]) -> Result<GridShift> {
        GridShift::from_point(x, self.window(), self.pspace().chart())
    }

    pub fn shift(&self, x: &GridShift) -> Result<ShiftMatrix> {
        self.check_sample(x)?;
        let map = (0..self.members.len())
            .map(|p| self.shifted(p, x))
            .collect();
        Ok(ShiftMatrix { map, k: self.k })
    }

    /// Member positions `q` with `q + x` inside the window.
    pub fn safe_cols(&self, x: &GridShift) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&q| self.in_window_after(q, x))
            .collect()
    }

    /// Member positions `p` with `p - x` inside the window.
    pub fn safe_rows(&self, x: &GridShift) -> Vec<usize> {
        let back = x.neg();
        (0..self.members.len())
            .filter(|&p| self.in_window_after(p, &back))
            .collect()
    }

    fn expand(&self, cells: &[usize]) -> Vec<usize> {
        cells
            .iter()
            .flat_map(|&p| (0..self.k).map(move |c| p * self.k + c))
            .collect()
    }

    /// Exactness diagnostics of the representation axioms on safe regions.
    pub fn verify(&self, samples: &[GridShift]) -> Result<RepDiagnostics> {
        let mats: Vec<ShiftMatrix> = samples.iter().map(|x| self.shift(x)).collect::<Result<_>>()?;
        let mut diag = RepDiagnostics::default();
        for (x, v) in samples.iter().zip(&mats) {
            let vs = v.to_sparse();
            let cols = self.expand(&self.safe_cols(x));
            let iso = vs.adjoint().mul(&vs).sub(&SparseMatrix::identity(self.dim()));
            diag.isometry = diag.isometry.max(iso.max_abs_on(&cols, &cols));

            let rows = self.safe_rows(x);
            let back = x.neg();
            let expected: Vec<f64> = (0..self.members.len())
                .flat_map(|p| {
                    let hit = if self.member_after(p, &back) { 1.0 } else { 0.0 };
                    std::iter::repeat_n(hit, self.k)
                })
                .collect();
            let e = vs.mul(&vs.adjoint()).sub(&SparseMatrix::diagonal(&expected));
            let rows = self.expand(&rows);
            diag.range = diag.range.max(e.max_abs_on(&rows, &rows));
        }
        let pairs: Vec<(usize, usize)> = (0..samples.len())
            .flat_map(|i| (0..samples.len()).map(move |j| (i, j)))
            .collect();
        let semigroup = pairs
            .par_iter()
            .map(|&(i, j)| -> Result<f64> {
                let (x, y) = (&samples[i], &samples[j]);
                let xy = x.add(y);
                let lhs = mats[i].to_sparse().mul(&mats[j].to_sparse());
                let rhs = self.shift(&xy)?.to_sparse();
                let cols: Vec<usize> = (0..self.members.len())
                    .filter(|&q| self.in_window_after(q, y) && self.in_window_after(q, &xy))
                    .collect();
                let all: Vec<usize> = (0..self.dim()).collect();
                Ok(lhs.sub(&rhs).max_abs_on(&all, &self.expand(&cols)))
            })
            .collect::<Result<Vec<_>>>()?;
        diag.semigroup = semigroup.into_iter().fold(0.0, f64::max);
        diag.samples = samples.len();
        Ok(diag)
    }

    /// `‖E_{na} f‖` for `f` the indicator of the member cell `pos` (fibre 0),
    /// for `n = 0, 1, ...` while `cell(pos) - na` stays in the window.
    pub fn purity_decay(&self, a: &GridShift, pos: usize) -> Result<Vec<f64>> {
        self.check_sample(a)?;
        if a.is_zero() {
            return Err(Error::Invalid("purity needs a nonzero shift".into()));
        }
        let mut f = vec![0.0; self.dim()];
        f[pos * self.k] = 1.0;
        let mut out = Vec::new();
        for n in 0.. {
            let na = a.times(n);
            if !self.in_window_after(pos, &na.neg()) {
                break;
            }
            // E_{na} is multiplication by 1_{na + A}.
            let v = self.shift(&na)?;
            let ef = v.apply_real(&v.apply_adjoint_real(&f));
            out.push(ef.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
        Ok(out)
    }

    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter().zip(g).map(|(a, b)| a * b.conj()).sum::<Complex64>() * self.cell_volume()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RepDiagnostics {
    pub samples: usize,
    /// `max |(V_x* V_x - I)|` on safe columns.
    pub isometry: f64,
    /// `max |V_x V_y - V_{x+y}|` on columns safe for both sides.
    pub semigroup: f64,
    /// `max |V_x V_x* - 1_{(x+A)∩A}|` on safe rows.
    pub range: f64,
}

impl RepDiagnostics {
    pub fn exact(&self) -> bool {
        self.isometry == 0.0 && self.semigroup == 0.0 && self.range == 0.0
    }
}

/// A partial permutation: column `q` goes to row `map[q]` (or is killed),
/// tensored with the identity on `C^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftMatrix {
    map: Vec<Option<usize>>,
    k: usize,
}

impl ShiftMatrix {
    pub fn dim(&self) -> usize {
        self.map.len() * self.k
    }

    pub fn map(&self) -> &[Option<usize>] {
        &self.map
    }

    /// Hilbert-level column → row map.
    pub fn hilbert_map(&self) -> Vec<Option<usize>> {
        (0..self.dim())
            .map(|i| self.map[i / self.k].map(|r| r * self.k + i % self.k))
            .collect()
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for (i, r) in self.hilbert_map().into_iter().enumerate() {
            if let Some(r) = r {
                out[r] = f[i];
            }
        }
        out
    }

    pub fn apply_adjoint(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for (i, r) in self.hilbert_map().into_iter().enumerate() {
            if let Some(r) = r {
                out[i] = f[r];
            }
        }
        out
    }

    fn apply_real(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        for (i, r) in self.hilbert_map().into_iter().enumerate() {
            if let Some(r) = r {
                out[r] = f[i];
            }
        }
        out
    }

    fn apply_adjoint_real(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        for (i, r) in self.hilbert_map().into_iter().enumerate() {
            if let Some(r) = r {
                out[i] = f[r];
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let n = self.dim();
        let mut m = SparseMatrix::zeros(n, n);
        for (c, r) in self.hilbert_map().into_iter().enumerate() {
            if let Some(r) = r {
                m.entries.insert((r, c), 1.0);
            }
        }
        m
    }
}

/// Real sparse matrix in coordinate form, enough for products of shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), f64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            if v != 0.0 {
                m.entries.insert((i, i), v);
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), &v)| ((c, r), v)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut by_row: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
        for (&(r, c), &v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(r, k), &a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    *out.entries.entry((r, c)).or_insert(0.0) += a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &v) in &other.entries {
            *out.entries.entry(k).or_insert(0.0) -= v;
        }
        out
    }

    pub fn kron_identity(&self, k: usize) -> Self {
        let mut out = Self::zeros(self.rows * k, self.cols * k);
        for (&(r, c), &v) in &self.entries {
            for i in 0..k {
                out.entries.insert((r * k + i, c * k + i), v);
            }
        }
        out
    }

    /// Largest `|entry|` in the block `rows × cols`.
    pub fn max_abs_on(&self, rows: &[usize], cols: &[usize]) -> f64 {
        let mut rmask = vec![false; self.rows];
        let mut cmask = vec![false; self.cols];
        rows.iter().for_each(|&r| rmask[r] = true);
        cols.iter().for_each(|&c| cmask[c] = true);
        self.entries
            .iter()
            .filter(|(&(r, c), _)| rmask[r] && cmask[c])
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(r, c), &v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Coordinate CSV with header `row,col,re,im`.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "row,col,re,im")?;
        for (&(r, c), &v) in &self.entries {
            if v != 0.0 {
                writeln!(out, "{r},{c},{v},0")?;
            }
        }
        Ok(())
    }
}

/// `ξ_x = λ ⊗ 1_{A \ (x + A)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveCocycle {
    lambda: Vec<Complex64>,
}

impl AdditiveCocycle {
    pub fn canonical(lambda: Vec<Complex64>) -> Self {
        Self { lambda }
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lambda: self.lambda.iter().zip(&other.lambda).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn realize(&self, rep: &ShiftRep, x: &GridShift) -> Result<Vec<Complex64>> {
        if self.lambda.len() != rep.k() {
            return Err(Error::DimensionMismatch {
                expected: rep.k(),
                got: self.lambda.len(),
            });
        }
        rep.check_sample(x)?;
        let back = x.neg();
        let support: Vec<bool> = (0..rep.n_members())
            .into_par_iter()
            .map(|p| !rep.member_after(p, &back))
            .collect();
        Ok(support
            .iter()
            .flat_map(|&s| {
                self.lambda
                    .iter()
                    .map(move |&l| if s { l } else { Complex64::new(0.0, 0.0) })
            })
            .collect())
    }
}

/// `max |ξ_{x+y} - ξ_x - V_x ξ_y|` over rows `p` with `p - x` and `p - x - y`
/// inside the window.
pub fn cocycle_residual(
    rep: &ShiftRep,
    c: &AdditiveCocycle,
    x: &GridShift,
    y: &GridShift,
) -> Result<f64> {
    let xy = x.add(y);
    let (xi_x, xi_y, xi_xy) = (c.realize(rep, x)?, c.realize(rep, y)?, c.realize(rep, &xy)?);
    let vx_xi_y = rep.shift(x)?.apply(&xi_y);
    let safe: Vec<usize> = {
        let a = rep.safe_rows(x);
        let b = rep.safe_rows(&xy);
        let b: std::collections::HashSet<usize> = b.into_iter().collect();
        a.into_iter().filter(|p| b.contains(p)).collect()
    };
    Ok(rep
        .expand(&safe)
        .into_iter()
        .map(|i| (xi_xy[i] - xi_x[i] - vx_xi_y[i]).norm())
        .fold(0.0, f64::max))
}

/// Small shifts in the cone semigroup that generate the grid group
/// `Z^{d-r} × Z_M^r`. At least two are returned.
pub fn semigroup_generators(rep: &ShiftRep) -> Vec<GridShift> {
    let w = rep.window();
    let (f, r, m) = (w.free_dim(), w.rank(), w.m() as i64);
    let axes = f + r;
    let mut candidates: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..axes {
        candidates = candidates
            .into_iter()
            .flat_map(|c| {
                (-2..=2).map(move |v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    candidates.retain(|c| c.iter().any(|&v| v != 0));
    candidates.sort_by_key(|c| (c.iter().map(|v| v.abs()).sum::<i64>(), c.iter().map(|v| -v).collect::<Vec<_>>()));
    let torus_relations: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..axes).map(|a| if a == f + i { m } else { 0 }).collect())
        .collect();
    let index_of = |gens: &[GridShift]| {
        let mut rows: Vec<Vec<i64>> = gens.iter().map(GridShift::as_vec).collect();
        rows.extend(torus_relations.iter().cloned());
        integer_lattice_index(&rows, axes)
    };
    let mut gens: Vec<GridShift> = Vec::new();
    let mut current = None;
    for c in candidates {
        let s = GridShift::new(c[..f].to_vec(), c[f..].to_vec());
        if rep.check_sample(&s).is_err() {
            continue;
        }
        let mut trial = gens.clone();
        trial.push(s);
        let idx = index_of(&trial);
        let improves = match (&current, &idx) {
            (None, _) => true,
            (Some(a), Some(b)) => b < a,
            (Some(_), None) => false,
        };
        let full = current.as_ref().is_some_and(|i: &num_bigint::BigInt| *i == 1.into());
        if improves && !full || gens.len() < 2 && !full {
            gens = trial;
            current = idx.or(current);
        }
        if gens.len() >= 2 && current.as_ref().is_some_and(|i| *i == 1.into()) {
            break;
        }
    }
    gens
}

/// Stable dimension of the additive cocycle space.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleSpace {
    pub dim: usize,
    /// Raw null-space dimension per distinct window.
    pub raw_dims: Vec<usize>,
    pub extents: Vec<f64>,
    /// Fitted log-log growth exponent of each null direction's norm ratio.
    pub growth_exponents: Vec<f64>,
}

/// Growth exponent below which a null direction counts as square-integrable.
pub const GROWTH_EXPONENT_CUTOFF: f64 = 0.5;

type VarKey = (usize, QVec, Vec<i64>, usize);

struct CocycleSystem {
    keys: Vec<VarKey>,
    /// Orthonormal null-space basis, one column per direction.
    null: DMatrix<f64>,
}

fn cocycle_system(rep: &ShiftRep, gens: &[GridShift]) -> CocycleSystem {
    let k = rep.k();
    let w = rep.window();
    let backs: Vec<GridShift> = gens.iter().map(GridShift::neg).collect();
    // Unknowns: ξ_g on member cells outside g + A.
    let mut var: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut keys = Vec::new();
    for (g, back) in backs.iter().enumerate() {
        for p in 0..rep.n_members() {
            if !rep.member_after(p, back) {
                let (j, t) = rep.cell_of(p);
                let (y, tt) = w.cell_key(&j, &t);
                for c in 0..k {
                    var.insert((g, p, c), keys.len());
                    keys.push((g, y.clone(), tt.clone(), c));
                }
            }
        }
    }
    // (V_g ξ)(p) needs ξ(p - g): fine when p - g is in the window or is not
    // a member at all; unknown otherwise.
    let lookup = |p: usize, back: &GridShift| -> Option<Option<usize>> {
        if rep.in_window_after(p, back) {
            Some(rep.shifted(p, back))
        } else if rep.member_after(p, back) {
            None
        } else {
            Some(None)
        }
    };
    let mut equations: Vec<Vec<(usize, f64)>> = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            for p in 0..rep.n_members() {
                let (Some(pi), Some(pj)) = (lookup(p, &backs[i]), lookup(p, &backs[j])) else {
                    continue;
                };
                for c in 0..k {
                    let mut terms: BTreeMap<usize, f64> = BTreeMap::new();
                    let mut push = |key: Option<usize>, s: f64| {
                        if let Some(v) = key {
                            *terms.entry(v).or_insert(0.0) += s;
                        }
                    };
                    push(var.get(&(i, p, c)).copied(), 1.0);
                    push(pi.and_then(|q| var.get(&(j, q, c)).copied()), 1.0);
                    push(var.get(&(j, p, c)).copied(), -1.0);
                    push(pj.and_then(|q| var.get(&(i, q, c)).copied()), -1.0);
                    let eq: Vec<(usize, f64)> = terms.into_iter().filter(|t| t.1 != 0.0).collect();
                    if !eq.is_empty() {
                        equations.push(eq);
                    }
                }
            }
        }
    }
    let n = keys.len();
    let mut uf = UnionFind::new(n);
    for eq in &equations {
        for t in &eq[1..] {
            uf.union(eq[0].0, t.0);
        }
    }
    let (labels, n_comp) = uf.labels();
    let mut comp_vars: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    for (v, &l) in labels.iter().enumerate() {
        comp_vars[l].push(v);
    }
    let mut comp_eqs: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    for (e, eq) in equations.iter().enumerate() {
        comp_eqs[labels[eq[0].0]].push(e);
    }
    let blocks: Vec<Vec<(usize, Vec<f64>)>> = (0..n_comp)
        .into_par_iter()
        .map(|ci| {
            let vars = &comp_vars[ci];
            let local: HashMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let mut a = DMatrix::zeros(comp_eqs[ci].len(), vars.len());
            for (r, &e) in comp_eqs[ci].iter().enumerate() {
                for &(v, s) in &equations[e] {
                    a[(r, local[&v])] += s;
                }
            }
            let z = null_space(&a, SVD_REL_TOL);
            (0..z.ncols())
                .map(|c| (ci, vars.iter().enumerate().map(|(i, _)| z[(i, c)]).collect()))
                .collect()
        })
        .collect();
    let cols: Vec<(usize, Vec<f64>)> = blocks.into_iter().flatten().collect();
    let mut null = DMatrix::zeros(n, cols.len());
    for (c, (ci, vals)) in cols.iter().enumerate() {
        for (&v, x) in comp_vars[*ci].iter().zip(vals) {
            null[(v, c)] = *x;
        }
    }
    CocycleSystem { keys, null }
}

/// Dimension of the space of additive cocycles, stable across a window ladder
/// and restricted to directions whose norm stays bounded as the window grows.
///
/// For each window the null directions are compared with the smallest window:
/// `μ = ‖v‖² / ‖v restricted to the smallest window‖²` is computed for the
/// whole null space (a generalized eigenproblem) and the ordered values are
/// fitted against the extent on a log-log scale.
pub fn cocycle_space_dim(
    pspace: &PSpace,
    k: usize,
    generators: &[GridShift],
    ladder: &[GridWindow],
) -> Result<CocycleSpace> {
    let windows = distinct_windows(ladder);
    if windows.len() < 3 {
        return Err(Error::LadderTooShort {
            distinct: windows.len(),
            required: 3,
        });
    }
    let reps: Vec<ShiftRep> = windows
        .iter()
        .map(|w| ShiftRep::build(pspace, w, Multiplicity::Finite(k)))
        .collect::<Result<_>>()?;
    let gens: Vec<GridShift> = if generators.is_empty() {
        semigroup_generators(&reps[0])
    } else {
        generators.to_vec()
    };
    if gens.len() < 2 {
        return Err(Error::Invalid("need at least two semigroup generators".into()));
    }
    for g in &gens {
        reps[0].check_sample(g)?;
    }
    let systems: Vec<CocycleSystem> = reps.iter().map(|r| cocycle_system(r, &gens)).collect();
    let raw_dims: Vec<usize> = systems.iter().map(|s| s.null.ncols()).collect();
    let extents: Vec<f64> = windows.iter().map(|w| crate::rational::to_f64(&w.extent())).collect();
    let anchor: std::collections::HashSet<&VarKey> = systems[0].keys.iter().collect();
    // Ordered norm ratios per window.
    let ratios: Vec<Vec<f64>> = systems
        .iter()
        .map(|s| {
            let rows: Vec<usize> = (0..s.keys.len()).filter(|&i| anchor.contains(&s.keys[i])).collect();
            let z0 = DMatrix::from_fn(rows.len(), s.null.ncols(), |r, c| s.null[(rows[r], c)]);
            let gram = z0.transpose() * &z0;
            let mut mu: Vec<f64> = symmetric_eigenvalues(&gram)
                .into_iter()
                .map(|ev| if ev > 1e-12 { 1.0 / ev } else { f64::INFINITY })
                .collect();
            mu.sort_by(|a, b| a.total_cmp(b));
            mu
        })
        .collect();
    let common = *raw_dims.iter().min().expect("nonempty ladder");
    let logs: Vec<f64> = extents.iter().map(|l| l.ln()).collect();
    let growth_exponents: Vec<f64> = (0..common)
        .map(|i| {
            let pts: Vec<(f64, f64)> = logs
                .iter()
                .zip(&ratios)
                .map(|(&l, mu)| (l, mu[i].ln()))
                .collect();
            if pts.iter().any(|p| !p.1.is_finite()) {
                f64::INFINITY
            } else {
                crate::pspace::least_squares_slope(&pts)
            }
        })
        .collect();
    let bounded = growth_exponents.iter().filter(|&&g| g < GROWTH_EXPONENT_CUTOFF).count();
    // Bounded directions must be present in every window.
    if raw_dims.iter().any(|&d| d < bounded) {
        return Err(Error::Unstable(format!(
            "null-space dimensions {raw_dims:?} drop below the {bounded} bounded directions"
        )));
    }
    Ok(CocycleSpace {
        dim: bounded,
        raw_dims,
        extents,
        growth_exponents,
    })
}

/// Dimension of `{X : X V_x = V_x X, X V_x* = V_x* X for all samples}`.
///
/// Each entry of the Sylvester system `X V - V X` is a difference of at most
/// two entries of `X` (or a single entry, which is then forced to vanish), so
/// the null-space dimension is the number of classes of entries linked by
/// these equalities that contain no forced zero.
pub fn commutant_dim(rep: &ShiftRep, samples: &[GridShift]) -> Result<usize> {
    let n = rep.dim();
    let maps: Vec<Vec<Option<usize>>> = samples
        .iter()
        .map(|x| rep.shift(x).map(|m| m.hilbert_map()))
        .collect::<Result<_>>()?;
    let mut uf = UnionFind::new(n * n);
    let mut zero = vec![false; n * n];
    let idx = |a: usize, b: usize| a * n + b;
    for map in &maps {
        let mut inv = vec![None; n];
        for (c, r) in map.iter().enumerate() {
            if let Some(r) = r {
                inv[*r] = Some(c);
            }
        }
        for a in 0..n {
            for b in 0..n {
                // (X V)_{ab} = X_{a, V b}, (V X)_{ab} = X_{V^{-1} a, b}
                let pairs = [
                    (map[b].map(|c| idx(a, c)), inv[a].map(|c| idx(c, b))),
                    (inv[b].map(|c| idx(a, c)), map[a].map(|c| idx(c, b))),
                ];
                for pair in pairs {
                    match pair {
                        (Some(u), Some(v)) => uf.union(u, v),
                        (Some(u), None) | (None, Some(u)) => zero[u] = true,
                        (None, None) => {}
                    }
                }
            }
        }
    }
    let (labels, n_comp) = uf.labels();
    let mut dead = vec![false; n_comp];
    for (v, &z) in zero.iter().enumerate() {
        if z {
            dead[labels[v]] = true;
        }
    }
    Ok(dead.iter().filter(|&&d| !d).count())
}
