//! Arveson index at desk scale: the covariance kernel `c_a` of a finite unit
//! set, its Gram matrix on sum-zero combinations, and the Gram rank.
//!
//! For canonical units `u = (λ, λ⃗ ⊗ 1_{A \ aA})`,
//! `c_a(u, v) = ⟨λ_u|a⟩ + conj⟨λ_v|a⟩ + (λ⃗_u · conj λ⃗_v) μ(A \ aA)`.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fock::{inner, UnitSpec};
use crate::grid::{GridShift, GridWindow};
use crate::linalg::hermitian_eigenvalues;
use crate::pspace::{Growth, Mask, PSpace};
use crate::rational::{self, Q, QVec};

type C64 = Complex64;

/// Relative eigenvalue cutoff for the Gram rank.
pub const GRAM_REL_TOL: f64 = 1e-9;

/// Unit-set sizes used for rank stabilization.
pub const DEFAULT_SIZES: [usize; 3] = [3, 6, 10];

#[derive(Debug, Clone)]
pub struct CovMatrix {
    pub units: Vec<UnitSpec>,
    pub shift: GridShift,
    pub point: QVec,
    /// Grid measure of `A \ aA`, or `None` when every cocycle coefficient is 0.
    pub measure: Option<f64>,
    pub cell_volume: f64,
    pub entries: DMatrix<C64>,
}

impl CovMatrix {
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// `G_pq = c(p,q) - c(p,K) - c(K,q) + c(K,K)` for `p, q < K`.
    pub fn gram(&self) -> DMatrix<C64> {
        let c = &self.entries;
        let last = self.len() - 1;
        let g = DMatrix::from_fn(last, last, |p, q| {
            c[(p, q)] - c[(p, last)] - c[(last, q)] + c[(last, last)]
        });
        (&g + g.adjoint()) / C64::new(2.0, 0.0)
    }

    /// `Σ_{u,v} f(u) conj f(v) c(u,v)`; real and nonnegative for sum-zero `f`.
    pub fn form(&self, f: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (i, fi) in f.iter().enumerate() {
            for (j, fj) in f.iter().enumerate() {
                s += fi * fj.conj() * self.entries[(i, j)];
            }
        }
        s
    }
}

/// Strict interiority of `a`, and (when `check_edges`) that no cell of
/// `A \ aA` sits on a boundary layer of a free axis of the window.
pub fn check_interior(a: &GridShift, mask: &Mask, check_edges: bool) -> Result<()> {
    let w = mask.window();
    let chart = mask.pspace().chart();
    if a.dy.len() != w.free_dim() || a.du.len() != w.rank() {
        return Err(Error::SampleOffGrid("shift has the wrong number of axes".into()));
    }
    if !mask.pspace().in_interior_semigroup(&a.point(w, chart)) {
        return Err(Error::UnsafeInteriorPoint);
    }
    if check_edges {
        let counts = w.counts();
        let touches = mask.diff_cells(a).into_iter().any(|idx| {
            let (j, _) = w.cell(idx);
            j.iter()
                .zip(counts)
                .any(|(&ji, &n)| ji == 0 || ji as usize + 1 == n)
        });
        if touches {
            return Err(Error::UnsafeInteriorPoint);
        }
    }
    Ok(())
}

pub fn covariance(units: &[UnitSpec], a: &GridShift, mask: &Mask) -> Result<CovMatrix> {
    if units.len() < 2 {
        return Err(Error::Invalid("covariance needs at least two units".into()));
    }
    let d = mask.pspace().dim();
    let k = units[0].cocycle.lambda().len();
    for u in units {
        if u.lambda.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: u.lambda.len(),
            });
        }
        if u.cocycle.lambda().len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: u.cocycle.lambda().len(),
            });
        }
    }
    let vacuum = units
        .iter()
        .all(|u| u.cocycle.lambda().iter().all(|z| *z == C64::new(0.0, 0.0)));
    check_interior(a, mask, !vacuum)?;
    let w = mask.window();
    let point = a.point(w, mask.pspace().chart());
    let measure = if vacuum { None } else { Some(mask.diff_measure(a)?) };
    let mu = measure.unwrap_or(0.0);
    let entries = DMatrix::from_fn(units.len(), units.len(), |i, j| {
        let (u, v) = (&units[i], &units[j]);
        u.exponent(&point) + v.exponent(&point).conj() + inner(u.cocycle.lambda(), v.cocycle.lambda()) * mu
    });
    Ok(CovMatrix {
        units: units.to_vec(),
        shift: a.clone(),
        point,
        measure,
        cell_volume: w.cell_volume(mask.pspace().chart()),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub cutoff: f64,
    pub rank: usize,
}

/// Rank of the Gram matrix. The cutoff is relative to the larger of the Gram
/// spectrum and the raw covariance entries, so that the exact cancellation of
/// character terms is not mistaken for rank.
pub fn gns_rank(c: &CovMatrix) -> Result<GramSpectrum> {
    let g = c.gram();
    let eigenvalues = hermitian_eigenvalues(&g);
    let spec = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let raw = c.entries.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let cutoff = GRAM_REL_TOL * spec.max(raw);
    if let Some(&min) = eigenvalues.first() {
        if min < -cutoff {
            return Err(Error::NotConditionallyPsd { min_eig: min });
        }
    }
    let rank = eigenvalues.iter().filter(|&&v| v > cutoff).count();
    Ok(GramSpectrum {
        eigenvalues,
        cutoff,
        rank,
    })
}

/// `count` units with `λ ∈ C^d` and cocycle coefficients in `C^k`, entries
/// uniform in the unit square.
pub fn sample_units(d: usize, k: usize, count: usize, seed: u64) -> Vec<UnitSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = move || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    (0..count)
        .map(|_| {
            let lambda: Vec<C64> = (0..d).map(|_| z()).collect();
            let coef: Vec<C64> = (0..k).map(|_| z()).collect();
            UnitSpec::new(lambda, coef)
        })
        .collect()
}

/// `x ≺ y` in the quotient order: `y - x ∈ Int(P) + N`.
pub fn precedes(pspace: &PSpace, x: &[Q], y: &[Q]) -> bool {
    pspace.in_interior_semigroup(&rational::sub(y, x))
}

/// Two distinct interior grid points, smallest first, with the second not a
/// multiple of the first. Falls back to `2a` when nothing else qualifies.
pub fn interior_points(mask: &Mask, check_edges: bool) -> Result<(GridShift, GridShift)> {
    let w = mask.window();
    let (f, r, m) = (w.free_dim(), w.rank(), w.m() as i64);
    let mut candidates: Vec<GridShift> = Vec::new();
    let dys = product(f, &(0..=6).collect::<Vec<_>>());
    let dus = product(r, &(0..m).collect::<Vec<_>>());
    for dy in &dys {
        for du in &dus {
            candidates.push(GridShift::new(dy.clone(), du.clone()));
        }
    }
    candidates.sort_by_key(|s| {
        (
            s.dy.iter().map(|v| v.abs()).sum::<i64>(),
            s.du.iter().sum::<i64>(),
            s.as_vec(),
        )
    });
    let ok = |s: &GridShift| !s.is_zero() && check_interior(s, mask, check_edges).is_ok();
    let a = candidates.iter().find(|s| ok(s)).cloned().ok_or(Error::UnsafeInteriorPoint)?;
    let multiple = |s: &GridShift| (1..=6).any(|n| a.times(n) == *s);
    let b = candidates
        .iter()
        .find(|s| ok(s) && !multiple(s))
        .cloned()
        .unwrap_or_else(|| a.times(2));
    Ok((a, b))
}

/// All `n`-tuples over `values`.
fn product(n: usize, values: &[i64]) -> Vec<Vec<i64>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.iter()
            .flat_map(|t| {
                values.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexPath {
    /// Bounded growth: canonical cocycles with random coefficients.
    Cocycles,
    /// Unbounded growth: no nonzero cocycle survives, only characters vary.
    VacuumOnly,
}

#[derive(Debug, Clone)]
pub struct IndexOptions {
    pub k: usize,
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub points: Option<(GridShift, GridShift)>,
}

impl IndexOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            sizes: DEFAULT_SIZES.to_vec(),
            points: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IndexReport {
    pub index: usize,
    /// Same rank at both points for every unit-set size.
    pub independent: bool,
    /// The two points coincide, so independence says nothing.
    pub degenerate: bool,
    /// The two largest unit sets give the same rank.
    pub stable: bool,
    pub path: IndexPath,
    pub shift_a: GridShift,
    pub shift_b: GridShift,
    pub point_a: QVec,
    pub point_b: QVec,
    /// Gram eigenvalues at `a` for the largest unit set.
    pub eigenvalues: Vec<f64>,
    pub cell_volume: f64,
    /// `(size, rank at a, rank at b)`.
    pub ranks: Vec<(usize, usize, usize)>,
    /// Gram matrix at `a` for the largest unit set.
    pub gram: DMatrix<C64>,
}

pub fn index_of(
    pspace: &PSpace,
    window: &GridWindow,
    ladder: &[GridWindow],
    opts: &IndexOptions,
) -> Result<IndexReport> {
    let mut sizes = opts.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() || sizes[0] < 2 {
        return Err(Error::Invalid("unit-set sizes must be at least 2".into()));
    }
    let mask = pspace.mask(window)?;
    let probe = match &opts.points {
        Some((a, _)) => a.clone(),
        None => interior_points(&mask, false)?.0,
    };
    let path = match pspace.growth_profile(&probe, ladder)?.class {
        Growth::Bounded => IndexPath::Cocycles,
        Growth::Linear(_) => IndexPath::VacuumOnly,
    };
    let (a, b) = match &opts.points {
        Some(p) => p.clone(),
        None => interior_points(&mask, path == IndexPath::Cocycles)?,
    };
    let mut units = sample_units(pspace.dim(), opts.k, *sizes.last().unwrap(), opts.seed);
    if path == IndexPath::VacuumOnly {
        units = units
            .into_iter()
            .map(|u| UnitSpec::new(u.lambda, vec![C64::new(0.0, 0.0); opts.k]))
            .collect();
    }
    let mut ranks = Vec::new();
    let mut last = None;
    for &size in &sizes {
        let ca = covariance(&units[..size], &a, &mask)?;
        let cb = covariance(&units[..size], &b, &mask)?;
        let (ga, gb) = (gns_rank(&ca)?, gns_rank(&cb)?);
        ranks.push((size, ga.rank, gb.rank));
        last = Some((ca, ga));
    }
    let (ca, ga) = last.expect("at least one size");
    let n = ranks.len();
    let stable = n < 2 || (ranks[n - 1].1 == ranks[n - 2].1 && ranks[n - 1].2 == ranks[n - 2].2);
    Ok(IndexReport {
        index: ga.rank,
        independent: ranks.iter().all(|r| r.1 == r.2),
        degenerate: a == b,
        stable,
        path,
        point_a: ca.point.clone(),
        point_b: b.point(window, pspace.chart()),
        shift_a: a,
        shift_b: b,
        eigenvalues: ga.eigenvalues,
        cell_volume: ca.cell_volume,
        ranks,
        gram: ca.gram(),
    })
}

/// Dense Gram matrix as CSV, one row per line, `re,im` pairs per entry.
pub fn write_gram_csv(g: &DMatrix<C64>, mut out: impl Write) -> Result<()> {
    for i in 0..g.nrows() {
        let row: Vec<String> = (0..g.ncols())
            .map(|j| format!("{:e},{:e}", g[(i, j)].re, g[(i, j)].im))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
