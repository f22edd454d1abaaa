//! Symmetric Fock space: closed-form exponential-vector kernels, a truncated
//! matrix model for Weyl operators, and weak checks of CCR-flow units.
//!
//! Inner products are linear in the first argument: `⟨f|g⟩ = Σ f_i conj(g_i)`.
//! With this convention `W(ξ) e(η) = exp(-‖ξ‖²/2 - ⟨η|ξ⟩) e(ξ + η)` and
//! `W(ξ) W(η) = exp(i Im⟨ξ|η⟩) W(ξ + η)`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridShift;
use crate::rational::{self, Q};
use crate::shiftrep::{AdditiveCocycle, ShiftRep};

pub type C64 = Complex64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `Σ f_i conj(g_i)`, unweighted.
pub fn inner(f: &[C64], g: &[C64]) -> C64 {
    f.iter().zip(g).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sq(f: &[C64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨e(f)|e(g)⟩ = exp⟨f|g⟩` for a one-particle inner product with cell weight `w`.
pub fn exp_inner(f: &[C64], g: &[C64], w: f64) -> C64 {
    (inner(f, g) * w).exp()
}

/// `Σ_{j>n} s^j / j!`, the squared norm of the part of `e(ξ)` above level `n`
/// when `s = ‖ξ‖²`.
pub fn tail_bound(s: f64, n: usize) -> f64 {
    let mut term = 1.0;
    for j in 1..=n {
        term *= s / j as f64;
    }
    let mut sum = 0.0;
    let mut j = n + 1;
    loop {
        term *= s / j as f64;
        sum += term;
        if term <= sum * 1e-17 || term == 0.0 {
            return sum;
        }
        j += 1;
    }
}

#[derive(Debug, Clone)]
pub struct TruncatedFock {
    m: usize,
    n: usize,
    basis: Vec<Vec<u8>>,
    up: Vec<Vec<Option<usize>>>,
    level: Vec<usize>,
}

impl TruncatedFock {
    /// Occupation-number basis `|α⟩`, `|α| <= n`, over `C^m`.
    pub fn new(m: usize, n: usize) -> Self {
        let mut basis: Vec<Vec<u8>> = vec![vec![0; m]];
        let mut frontier = basis.clone();
        for _ in 0..n {
            let mut next = Vec::new();
            for a in &frontier {
                // Extend only at or after the last occupied mode so every
                // multi-index is produced once.
                let start = a.iter().rposition(|&x| x > 0).unwrap_or(0);
                for i in start..m {
                    let mut b = a.clone();
                    b[i] += 1;
                    next.push(b);
                }
            }
            basis.extend(next.iter().cloned());
            frontier = next;
        }
        let index: HashMap<Vec<u8>, usize> =
            basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let level: Vec<usize> = basis.iter().map(|a| a.iter().map(|&x| x as usize).sum()).collect();
        let up = basis
            .iter()
            .map(|a| {
                (0..m)
                    .map(|i| {
                        let mut b = a.clone();
                        b[i] += 1;
                        index.get(&b).copied()
                    })
                    .collect()
            })
            .collect();
        Self {
            m,
            n,
            basis,
            up,
            level,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    /// Basis indices with `|α| <= max_level`.
    pub fn sub_block(&self, max_level: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.level[i] <= max_level).collect()
    }

    fn guard(&self, v: &[C64]) -> Result<()> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: v.len(),
            });
        }
        let s = norm_sq(v);
        let limit = self.n as f64 / 3.0;
        if s > limit {
            return Err(Error::TruncationGuard { norm_sq: s, limit });
        }
        Ok(())
    }

    pub fn creation(&self, i: usize) -> DMatrix<C64> {
        let mut a = DMatrix::zeros(self.dim(), self.dim());
        for (col, alpha) in self.basis.iter().enumerate() {
            if let Some(row) = self.up[col][i] {
                a[(row, col)] = c((alpha[i] as f64 + 1.0).sqrt());
            }
        }
        a
    }

    pub fn annihilation(&self, i: usize) -> DMatrix<C64> {
        self.creation(i).adjoint()
    }

    /// Truncated exponential vector: components `ξ^α / sqrt(α!)`.
    pub fn exp_vector(&self, xi: &[C64]) -> Result<Vec<C64>> {
        self.guard(xi)?;
        Ok(self
            .basis
            .iter()
            .map(|alpha| {
                alpha.iter().zip(xi).fold(c(1.0), |acc, (&k, z)| {
                    let fact: f64 = (1..=k as u64).map(|j| j as f64).product();
                    acc * z.powu(k as u32) / fact.sqrt()
                })
            })
            .collect())
    }

    /// Truncated Weyl operator `P_n W(ξ) P_n`, with `W(ξ) = exp(a†(ξ) - a(ξ))`
    /// and `a(ξ) = Σ conj(ξ_i) a_i`. Entries are exact products of single-mode
    /// displacement matrix elements, so the only error is the cut itself.
    pub fn weyl_matrix(&self, xi: &[C64]) -> Result<DMatrix<C64>> {
        self.guard(xi)?;
        let modes: Vec<Vec<Vec<C64>>> = xi.iter().map(|&z| displacement(z, self.n)).collect();
        let d = self.dim();
        let cols: Vec<Vec<C64>> = (0..d)
            .into_par_iter()
            .map(|j| {
                let beta = &self.basis[j];
                self.basis
                    .iter()
                    .map(|alpha| {
                        (0..self.m).fold(c(1.0), |acc, i| {
                            acc * modes[i][alpha[i] as usize][beta[i] as usize]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(DMatrix::from_fn(d, d, |r, cc| cols[cc][r]))
    }

    pub fn weyl_apply(&self, xi: &[C64], v: &[C64]) -> Result<Vec<C64>> {
        let w = self.weyl_matrix(xi)?;
        Ok((&w * DMatrix::from_column_slice(v.len(), 1, v)).iter().copied().collect())
    }

    /// `‖(1 - P_n) W(ξ) |α⟩‖` for a basis index: the weight that the full Weyl
    /// operator sends above the cut. Summed directly from the level
    /// distribution, so small leaks keep full relative precision.
    pub fn leakage(&self, xi: &[C64], col: usize) -> f64 {
        let size = self.n + LEAK_EXTRA_LEVELS;
        let beta = &self.basis[col];
        // Distribution of the total level after displacement, mode by mode.
        let mut dist = vec![1.0];
        for (i, &z) in xi.iter().enumerate() {
            let d = displacement(z, size);
            let b = beta[i] as usize;
            let p: Vec<f64> = (0..=size).map(|a| d[a][b].norm_sqr()).collect();
            let mut next = vec![0.0; (dist.len() + size).min(size * self.m + 1)];
            for (l, &q) in dist.iter().enumerate() {
                for (a, &pa) in p.iter().enumerate() {
                    if l + a < next.len() {
                        next[l + a] += q * pa;
                    }
                }
            }
            dist = next;
        }
        dist.iter().skip(self.n + 1).sum::<f64>().sqrt()
    }

    /// Residual `‖P_n W(ξ) P_n e_n(η) - exp(-‖ξ‖²/2 - ⟨η|ξ⟩) e_n(ξ + η)‖` and
    /// its analytic bound `sqrt(T(‖η‖², n))`.
    pub fn weyl_action_residual(&self, xi: &[C64], eta: &[C64]) -> Result<(f64, f64)> {
        let sum: Vec<C64> = xi.iter().zip(eta).map(|(a, b)| a + b).collect();
        self.guard(&sum)?;
        let lhs = self.weyl_apply(xi, &self.exp_vector(eta)?)?;
        let factor = (-norm_sq(xi) / 2.0 - inner(eta, xi)).exp();
        let rhs: Vec<C64> = self.exp_vector(&sum)?.iter().map(|z| z * factor).collect();
        let residual = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok((residual, tail_bound(norm_sq(eta), self.n).sqrt()))
    }

    /// `Σ sqrt(T(‖v‖², n))` over `v ∈ {ξ, η, ξ + η}`: the norm budget for the
    /// truncated exponential vectors involved in one Weyl identity.
    pub fn combined_tail(&self, xi: &[C64], eta: &[C64]) -> f64 {
        let sum: Vec<C64> = xi.iter().zip(eta).map(|(a, b)| a + b).collect();
        [xi, eta, &sum[..]]
            .iter()
            .map(|v| tail_bound(norm_sq(v), self.n).sqrt())
            .sum()
    }

    /// Weyl relation and unitarity on the sub-block `|α| <= n/2`.
    ///
    /// On that block `W_n(ξ) W_n(η) - phase W_n(ξ + η) = -P W(ξ)(1 - P) W(η) P`,
    /// so entry `(i, j)` is at most `leak(-ξ, i) leak(η, j)`; the unitarity
    /// defect is bounded the same way with `ξ` on both sides.
    pub fn verify_weyl(&self, xi: &[C64], eta: &[C64]) -> Result<WeylReport> {
        self.guard(xi)?;
        self.guard(eta)?;
        let sum: Vec<C64> = xi.iter().zip(eta).map(|(a, b)| a + b).collect();
        self.guard(&sum)?;
        let neg: Vec<C64> = xi.iter().map(|z| -z).collect();
        let phase = C64::new(0.0, inner(xi, eta).im).exp();
        let sub = self.sub_block(self.n / 2);
        let (wx, wy, ws) = (self.weyl_matrix(xi)?, self.weyl_matrix(eta)?, self.weyl_matrix(&sum)?);
        let prod = &wx * &wy;
        let round = wx.adjoint() * &wx;
        let mut relation: f64 = 0.0;
        let mut unitarity: f64 = 0.0;
        for &i in &sub {
            for &j in &sub {
                relation = relation.max((prod[(i, j)] - phase * ws[(i, j)]).norm());
                let id = if i == j { 1.0 } else { 0.0 };
                unitarity = unitarity.max((round[(i, j)] - id).norm());
            }
        }
        let max_leak = |v: &[C64]| sub.par_iter().map(|&j| self.leakage(v, j)).reduce(|| 0.0, f64::max);
        let leak_x = max_leak(xi);
        Ok(WeylReport {
            relation,
            relation_bound: max_leak(&neg) * max_leak(eta),
            unitarity,
            unitarity_bound: leak_x * leak_x,
            phase,
            tail: self.combined_tail(xi, eta),
        })
    }
}

/// Extra levels summed past the cut when measuring leakage.
const LEAK_EXTRA_LEVELS: usize = 48;

/// Absolute floating-point floor added to analytic bounds in comparisons.
pub const WEYL_ROUNDING_FLOOR: f64 = 1e-12;

/// Generalized Laguerre values `L_k^{(a)}(x)` for `k = 0..=kmax`.
fn laguerre(kmax: usize, a: usize, x: f64) -> Vec<f64> {
    let a = a as f64;
    let mut out = vec![1.0];
    if kmax >= 1 {
        out.push(1.0 + a - x);
    }
    for k in 1..kmax {
        let k_f = k as f64;
        let next = ((2.0 * k_f + 1.0 + a - x) * out[k] - (k_f + a) * out[k - 1]) / (k_f + 1.0);
        out.push(next);
    }
    out
}

/// Single-mode `⟨a|exp(z a† - conj(z) a)|b⟩` for `a, b <= size`.
fn displacement(z: C64, size: usize) -> Vec<Vec<C64>> {
    let x = z.norm_sqr();
    let g = (-x / 2.0).exp();
    let mut d = vec![vec![c(0.0); size + 1]; size + 1];
    for k in 0..=size {
        let lag = laguerre(size - k, k, x);
        // Lower triangle a = b + k, b = 0..=size-k.
        let mut ratio = 1.0; // sqrt(b! / (b + k)!)
        for j in 1..=k {
            ratio /= (j as f64).sqrt();
        }
        for b in 0..=size - k {
            if b > 0 {
                ratio *= (b as f64 / (b + k) as f64).sqrt();
            }
            let base = g * ratio * lag[b];
            d[b + k][b] = z.powu(k as u32) * base;
            if k > 0 {
                d[b][b + k] = (-z.conj()).powu(k as u32) * base;
            }
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    pub relation: f64,
    pub relation_bound: f64,
    pub unitarity: f64,
    pub unitarity_bound: f64,
    pub phase: C64,
    pub tail: f64,
}

impl WeylReport {
    /// Residuals within `factor` times their analytic bounds.
    pub fn within(&self, factor: f64) -> bool {
        self.relation <= factor * self.relation_bound + WEYL_ROUNDING_FLOOR
            && self.unitarity <= factor * self.unitarity_bound + WEYL_ROUNDING_FLOOR
    }
}

/// A unit `u_x = χ(x) T_{e(ξ_x)}` with `χ(x) = exp(Σ λ_i x_i)` and a
/// canonical additive cocycle.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSpec {
    pub lambda: Vec<C64>,
    pub cocycle: AdditiveCocycle,
}

impl UnitSpec {
    pub fn new(lambda: Vec<C64>, coefficient: Vec<C64>) -> Self {
        Self {
            lambda,
            cocycle: AdditiveCocycle::canonical(coefficient),
        }
    }

    pub fn vacuum(d: usize, k: usize) -> Self {
        Self::new(vec![c(0.0); d], vec![c(0.0); k])
    }

    /// `⟨λ|x⟩ = Σ λ_i x_i` for a real point `x`.
    pub fn exponent(&self, x: &[Q]) -> C64 {
        self.lambda
            .iter()
            .zip(x)
            .map(|(l, xi)| l * rational::to_f64(xi))
            .sum()
    }

    pub fn chi(&self, x: &[Q]) -> C64 {
        self.exponent(x).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitCheck {
    /// Relative residual of `u_{x+y} = u_x u_y` over probe pairs.
    pub semigroup: f64,
    /// Relative residual of `α_x(W(ζ)) u_x = u_x W(ζ)` over probe triples.
    pub intertwining: f64,
}

/// Tolerance for kernel-path identities.
pub const KERNEL_REL_TOL: f64 = 1e-10;

fn rel(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Weak check of the unit axioms against exponential vectors, using only the
/// closed-form kernel. Probes must be supported on cells that stay inside the
/// window under `x + y`.
pub fn unit_weak_check(
    rep: &ShiftRep,
    unit: &UnitSpec,
    x: &GridShift,
    y: &GridShift,
    probes: &[Vec<C64>],
) -> Result<UnitCheck> {
    let point = |s: &GridShift| s.point(rep.window(), rep.pspace().chart());
    unit_weak_check_with(
        rep,
        &|s| unit.chi(&point(s)),
        &|s| unit.cocycle.realize(rep, s),
        x,
        y,
        probes,
    )
}

/// [`unit_weak_check`] with the character and the cocycle supplied as
/// functions of the shift, so that broken units can be fed in as controls.
pub fn unit_weak_check_with(
    rep: &ShiftRep,
    chi: &(dyn Fn(&GridShift) -> C64 + Sync),
    cocycle: &(dyn Fn(&GridShift) -> Result<Vec<C64>> + Sync),
    x: &GridShift,
    y: &GridShift,
    probes: &[Vec<C64>],
) -> Result<UnitCheck> {
    let xy = x.add(y);
    let safe: std::collections::HashSet<usize> = rep.safe_cols(&xy).into_iter().collect();
    for p in probes {
        if p.len() != rep.dim() {
            return Err(Error::DimensionMismatch {
                expected: rep.dim(),
                got: p.len(),
            });
        }
        let leaves = p
            .iter()
            .enumerate()
            .any(|(i, z)| z.norm() != 0.0 && !safe.contains(&(i / rep.k())));
        if leaves {
            return Err(Error::UnsafeShift);
        }
    }
    let w = rep.cell_volume();
    let (vx, vy, vxy) = (rep.shift(x)?, rep.shift(y)?, rep.shift(&xy)?);
    let (xi_x, xi_y, xi_xy) = (cocycle(x)?, cocycle(y)?, cocycle(&xy)?);
    let add = |a: &[C64], b: &[C64]| -> Vec<C64> { a.iter().zip(b).map(|(p, q)| p + q).collect() };

    let mut semigroup: f64 = 0.0;
    for eta in probes {
        for zeta in probes {
            let lhs = chi(&xy) * exp_inner(&add(&xi_xy, &vxy.apply(eta)), zeta, w);
            let inner_vec = add(&xi_y, &vy.apply(eta));
            let rhs = chi(x) * chi(y) * exp_inner(&add(&xi_x, &vx.apply(&inner_vec)), zeta, w);
            semigroup = semigroup.max(rel(lhs, rhs));
        }
    }

    let mut intertwining: f64 = 0.0;
    for zeta in probes {
        let vz = vx.apply(zeta);
        for eta in probes {
            let base = add(&xi_x, &vx.apply(eta));
            // W(V_x ζ) χ(x) e(ξ_x + V_x η)
            let lhs_coef = chi(x) * (-norm_sq(&vz) * w / 2.0 - inner(&base, &vz) * w).exp();
            let lhs_vec = add(&vz, &base);
            // χ(x) e^{-‖ζ‖²/2 - ⟨η|ζ⟩} e(ξ_x + V_x(ζ + η))
            let rhs_coef = chi(x) * (-norm_sq(zeta) * w / 2.0 - inner(eta, zeta) * w).exp();
            let rhs_vec = add(&xi_x, &vx.apply(&add(zeta, eta)));
            for rho in probes {
                let lhs = lhs_coef * exp_inner(&lhs_vec, rho, w);
                let rhs = rhs_coef * exp_inner(&rhs_vec, rho, w);
                intertwining = intertwining.max(rel(lhs, rhs));
            }
        }
    }
    Ok(UnitCheck {
        semigroup,
        intertwining,
    })
}
