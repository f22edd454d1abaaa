//! P-spaces `A = ∪ φ(P + g_i)` in the quotient `R^d / N`: exact membership,
//! the compact-boundary criterion and grid measures of `A \ (x + A)`.

use std::io::{Read, Write};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chart::QuotientChart;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::grid::{distinct_windows, GridShift, GridWindow};
use crate::rational::{self, Q, QVec};

#[derive(Debug, Clone)]
pub struct PSpace {
    chart: QuotientChart,
    cone: Cone,
    translates: Vec<QVec>,
    /// `slab_radius(P, e, 1)` when `e` is interior to `P*`.
    unit_radius: Option<f64>,
    gram_inv_diag_sqrt: Vec<f64>,
    gram_inv: Vec<Vec<f64>>,
}

impl PSpace {
    pub fn new(chart: QuotientChart, cone: Cone, translates: Vec<QVec>) -> Result<Self> {
        let d = chart.dim();
        if cone.dim() != d {
            return Err(Error::ChartMismatch(format!(
                "cone lives in R^{}, chart in R^{d}",
                cone.dim()
            )));
        }
        if translates.is_empty() {
            return Err(Error::Invalid("P-space needs at least one translate".into()));
        }
        if translates.iter().any(|g| g.len() != d) {
            return Err(Error::ChartMismatch("translate has the wrong dimension".into()));
        }
        let e = chart.functional();
        let unit_radius = if e.is_interior_to(&cone) {
            Some(cone.slab_radius(e, &Q::one())?)
        } else if chart.rank() >= 2 {
            return Err(Error::ChartMismatch(
                "membership with a lattice of rank >= 2 needs e in the interior of P*".into(),
            ));
        } else {
            None
        };
        let gram = chart.lattice().gram();
        let gram_inv: Vec<Vec<f64>> = if gram.is_empty() {
            Vec::new()
        } else {
            rational::inverse(&gram)
                .expect("independent lattice basis")
                .iter()
                .map(|r| rational::to_f64_vec(r))
                .collect()
        };
        let gram_inv_diag_sqrt = (0..gram_inv.len()).map(|i| gram_inv[i][i].sqrt()).collect();
        Ok(Self {
            chart,
            cone,
            translates,
            unit_radius,
            gram_inv_diag_sqrt,
            gram_inv,
        })
    }

    /// `Q^N = φ(P)`.
    pub fn q_n(chart: QuotientChart, cone: Cone) -> Result<Self> {
        let zero = vec![Q::zero(); chart.dim()];
        Self::new(chart, cone, vec![zero])
    }

    pub fn chart(&self) -> &QuotientChart {
        &self.chart
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn translates(&self) -> &[QVec] {
        &self.translates
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Is `φ(x) ∈ A`? Exact.
    pub fn member(&self, x: &[Q]) -> bool {
        self.translates
            .iter()
            .any(|g| self.in_cone_mod_lattice(&rational::sub(x, g), false))
    }

    /// Is `φ(x) ∈ Q^N`, i.e. `x ∈ P + N`? These are the admissible shifts.
    pub fn in_semigroup(&self, x: &[Q]) -> bool {
        self.in_cone_mod_lattice(x, false)
    }

    /// Is `x ∈ Int(P) + N`? Interior points index the covariance kernel.
    pub fn in_interior_semigroup(&self, x: &[Q]) -> bool {
        self.in_cone_mod_lattice(x, true)
    }

    /// `∃ n ∈ N` with `z + n ∈ P` (or `Int P` when `strict`).
    fn in_cone_mod_lattice(&self, z: &[Q], strict: bool) -> bool {
        let basis = self.chart.lattice().basis();
        if basis.is_empty() {
            return self.cone.in_cone(z, strict);
        }
        match self.unit_radius {
            Some(unit_radius) => {
                let e = self.chart.functional();
                if e.pairing_dir(z).is_negative() {
                    return false;
                }
                // The slab through z is compact; only lattice points within
                // the radius can bring z into P.
                let radius = e.pairing(z).max(0.0) * unit_radius * (1.0 + 1e-9) + 1e-9;
                let zf = rational::to_f64_vec(z);
                let bz: Vec<f64> = basis
                    .iter()
                    .map(|b| rational::to_f64_vec(b).iter().zip(&zf).map(|(a, c)| a * c).sum())
                    .collect();
                let center: Vec<f64> = self
                    .gram_inv
                    .iter()
                    .map(|row| -row.iter().zip(&bz).map(|(a, c)| a * c).sum::<f64>())
                    .collect();
                let ranges: Vec<(i64, i64)> = center
                    .iter()
                    .zip(&self.gram_inv_diag_sqrt)
                    .map(|(c, s)| ((c - radius * s).floor() as i64 - 1, (c + radius * s).ceil() as i64 + 1))
                    .collect();
                // Facet values along the search, scaled to integers per facet:
                // a·(z + Σ k_i b_i) = α + Σ k_i β_i.
                let rows: Option<Vec<(i128, Vec<i128>)>> = self
                    .cone
                    .facets()
                    .iter()
                    .map(|a| {
                        let alpha = rational::dot(a, z);
                        let betas: Vec<Q> = basis.iter().map(|b| rational::dot(a, b)).collect();
                        let l = Q::from(rational::lcm_of_denominators(std::iter::once(&alpha).chain(&betas)));
                        let int = |x: &Q| i128::try_from((x * &l).to_integer()).ok();
                        Some((int(&alpha)?, betas.iter().map(int).collect::<Option<Vec<_>>>()?))
                    })
                    .collect();
                let Some(rows) = rows else {
                    return self.search_exact(z, strict, &ranges);
                };
                let mut k: Vec<i64> = ranges.iter().map(|r| r.0).collect();
                loop {
                    let inside = rows.iter().all(|(alpha, betas)| {
                        let v = betas
                            .iter()
                            .zip(&k)
                            .fold(*alpha, |acc, (b, &ki)| acc + b * ki as i128);
                        if strict {
                            v > 0
                        } else {
                            v >= 0
                        }
                    });
                    if inside {
                        return true;
                    }
                    if !advance(&mut k, &ranges) {
                        return false;
                    }
                }
            }
            None => {
                // Rank one: z + t b ∈ P cuts out an exact interval of t.
                let b = &basis[0];
                let mut lo: Option<Q> = None;
                let mut hi: Option<Q> = None;
                for a in self.cone.facets() {
                    let alpha = rational::dot(a, z);
                    let beta = rational::dot(a, b);
                    if beta.is_zero() {
                        if alpha.is_negative() || (strict && alpha.is_zero()) {
                            return false;
                        }
                    } else {
                        let bound = -alpha / &beta;
                        if beta.is_positive() {
                            let c = if strict { bound.floor() + Q::one() } else { bound.ceil() };
                            lo = Some(lo.map_or(c.clone(), |l| l.max(c)));
                        } else {
                            let f = if strict { bound.ceil() - Q::one() } else { bound.floor() };
                            hi = Some(hi.map_or(f.clone(), |h| h.min(f)));
                        }
                    }
                }
                match (lo, hi) {
                    (Some(l), Some(h)) => l <= h,
                    _ => true,
                }
            }
        }
    }

    /// Box search with rational vectors, for facet values too large for
    /// `i128`.
    fn search_exact(&self, z: &[Q], strict: bool, ranges: &[(i64, i64)]) -> bool {
        let basis = self.chart.lattice().basis();
        let mut k: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut p = z.to_vec();
            for (ki, b) in k.iter().zip(basis) {
                if *ki != 0 {
                    p = rational::add(&p, &rational::scale(b, &rational::qi(*ki)));
                }
            }
            if self.cone.in_cone(&p, strict) {
                return true;
            }
            if !advance(&mut k, ranges) {
                return false;
            }
        }
    }

    /// Boundary compactness for the abelian quotient `R^{d-r} × T^r`:
    /// compact exactly when `d - r = 1`.
    pub fn boundary_compact(&self) -> (bool, String) {
        let d_eff = self.chart.free_dim();
        if d_eff == 1 {
            (
                true,
                "compact: true (abelian quotient R x T^r, d_eff=1)".to_string(),
            )
        } else {
            (
                false,
                format!(
                    "compact: false (abelian quotient has an R^{d_eff} factor, d_eff={d_eff}; a compact boundary needs d_eff=1)"
                ),
            )
        }
    }

    /// Exact membership of every cell midpoint of `window`.
    pub fn mask(&self, window: &GridWindow) -> Result<Mask> {
        window.check_chart(&self.chart)?;
        let bits = (0..window.n_cells())
            .into_par_iter()
            .map(|idx| {
                let (j, t) = window.cell(idx);
                self.member(&window.center_point(&self.chart, &j, &t))
            })
            .collect();
        Ok(Mask {
            pspace: self.clone(),
            window: window.clone(),
            bits,
        })
    }

    fn check_shift(&self, x: &GridShift, window: &GridWindow) -> Result<()> {
        if x.dy.len() != window.free_dim() || x.du.len() != window.rank() {
            return Err(Error::SampleOffGrid("shift has the wrong number of axes".into()));
        }
        if !self.in_semigroup(&x.point(window, &self.chart)) {
            return Err(Error::NotInCone);
        }
        Ok(())
    }

    /// Grid quadrature of `μ((A \ (x + A)) ∩ window)`.
    pub fn diff_measure(&self, x: &GridShift, window: &GridWindow) -> Result<f64> {
        let mask = self.mask(window)?;
        mask.diff_measure(x)
    }

    /// Monte Carlo estimate of the same measure over the window, with its
    /// standard error. Sample `i` uses its own stream, so the result does not
    /// depend on the thread count.
    pub fn diff_measure_mc(
        &self,
        x: &GridShift,
        window: &GridWindow,
        samples: usize,
        seed: u64,
    ) -> Result<(f64, f64)> {
        window.check_chart(&self.chart)?;
        self.check_shift(x, window)?;
        let xp = x.point(window, &self.chart);
        const CHUNK: usize = 1000;
        let chunks = samples.div_ceil(CHUNK);
        let lo = window.y_lo().to_vec();
        let ext: QVec = window
            .y_hi()
            .iter()
            .zip(&lo)
            .map(|(a, b)| a - b)
            .collect();
        let hits: usize = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64 + 1);
                let n = CHUNK.min(samples - c * CHUNK);
                let mut hits = 0;
                for _ in 0..n {
                    let y: QVec = lo
                        .iter()
                        .zip(&ext)
                        .map(|(l, e)| l + e * random_unit(&mut rng))
                        .collect();
                    let u: QVec = (0..window.rank()).map(|_| random_unit(&mut rng)).collect();
                    let p = self.chart.point(&y, &u);
                    if self.member(&p) && !self.member(&rational::sub(&p, &xp)) {
                        hits += 1;
                    }
                }
                hits
            })
            .sum();
        let vol: f64 = ext.iter().map(rational::to_f64).product::<f64>() * self.chart.haar_factor();
        let f = hits as f64 / samples as f64;
        Ok((vol * f, vol * (f * (1.0 - f) / samples as f64).sqrt()))
    }

    /// Fits `μ_L = μ((A \ (a + A)) ∩ W_L)` against the window extent `L`.
    pub fn growth_profile(&self, a: &GridShift, ladder: &[GridWindow]) -> Result<GrowthProfile> {
        let windows = distinct_windows(ladder);
        if windows.len() < MIN_LADDER {
            return Err(Error::LadderTooShort {
                distinct: windows.len(),
                required: MIN_LADDER,
            });
        }
        let points: Vec<(f64, f64)> = windows
            .iter()
            .map(|w| Ok((rational::to_f64(&w.extent()), self.diff_measure(a, w)?)))
            .collect::<Result<_>>()?;
        let slope = least_squares_slope(&points);
        let (l_max, mu_max) = *points.last().expect("nonempty ladder");
        let class = if slope < SLOPE_EPS * (mu_max / l_max) {
            Growth::Bounded
        } else {
            Growth::Linear(slope)
        };
        Ok(GrowthProfile {
            class,
            slope,
            points,
        })
    }
}

/// Odometer step through the box `ranges`; false once it wraps around.
fn advance(k: &mut [i64], ranges: &[(i64, i64)]) -> bool {
    for (ki, r) in k.iter_mut().zip(ranges) {
        if *ki < r.1 {
            *ki += 1;
            return true;
        }
        *ki = r.0;
    }
    false
}

/// Relative slope threshold separating bounded from linear growth.
pub const SLOPE_EPS: f64 = 1e-2;
pub const MIN_LADDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    Bounded,
    Linear(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub class: Growth,
    pub slope: f64,
    /// `(L, μ_L)` per distinct window.
    pub points: Vec<(f64, f64)>,
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn random_unit(rng: &mut ChaCha8Rng) -> Q {
    const DEN: i64 = 1 << 30;
    rational::q(rng.random_range(0..DEN), DEN)
}

/// Membership of the cells of one window, with exact fallback outside it.
#[derive(Debug, Clone)]
pub struct Mask {
    pspace: PSpace,
    window: GridWindow,
    bits: Vec<bool>,
}

const MAGIC: &[u8; 7] = b"CCRLAB1";

impl Mask {
    pub fn window(&self) -> &GridWindow {
        &self.window
    }

    pub fn pspace(&self) -> &PSpace {
        &self.pspace
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, idx: usize) -> bool {
        self.bits[idx]
    }

    /// Membership of the cell `(j, t)`, inside the window or not.
    pub fn member_cell(&self, j: &[i64], t: &[i64]) -> bool {
        match self.window.index(j, t) {
            Some(idx) => self.bits[idx],
            None => self
                .pspace
                .member(&self.window.center_point(self.pspace.chart(), j, t)),
        }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Window cells in `A \ (x + A)`.
    pub fn diff_cells(&self, x: &GridShift) -> Vec<usize> {
        let back = x.neg();
        (0..self.bits.len())
            .into_par_iter()
            .filter(|&idx| {
                if !self.bits[idx] {
                    return false;
                }
                let (j, t) = self.window.cell(idx);
                let (jj, tt) = back.apply(&j, &t);
                !self.member_cell(&jj, &tt)
            })
            .collect()
    }

    pub fn diff_measure(&self, x: &GridShift) -> Result<f64> {
        self.pspace.check_shift(x, &self.window)?;
        Ok(self.diff_cells(x).len() as f64 * self.window.cell_volume(self.pspace.chart()))
    }

    /// Portable cache: magic, `d`, `r`, `M` (u32 LE), `h` and each axis'
    /// `yLo`, `yHi` (f64 LE), then the indicator bits row-major, LSB first.
    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        let w = &self.window;
        out.write_all(MAGIC)?;
        out.write_all(&(self.pspace.dim() as u32).to_le_bytes())?;
        out.write_all(&(w.rank() as u32).to_le_bytes())?;
        out.write_all(&(w.m() as u32).to_le_bytes())?;
        out.write_all(&rational::to_f64(w.h()).to_le_bytes())?;
        for (lo, hi) in w.y_lo().iter().zip(w.y_hi()) {
            out.write_all(&rational::to_f64(lo).to_le_bytes())?;
            out.write_all(&rational::to_f64(&hi).to_le_bytes())?;
        }
        out.write_all(&pack_bits(&self.bits))?;
        Ok(())
    }
}

pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    bytes
}

/// Header and bits of a cached mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskFile {
    pub d: u32,
    pub r: u32,
    pub m: u32,
    pub h: f64,
    pub y_bounds: Vec<(f64, f64)>,
    pub bits: Vec<bool>,
}

impl MaskFile {
    pub fn read_from(mut input: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        input.read_to_end(&mut buf)?;
        let bad = || Error::Parse("truncated or corrupt mask file".into());
        if buf.len() < 7 || &buf[..7] != MAGIC {
            return Err(Error::Parse("not a ccrlab mask file".into()));
        }
        let mut pos = 7;
        let u32_at = |pos: &mut usize| -> Result<u32> {
            let b = buf.get(*pos..*pos + 4).ok_or_else(bad)?;
            *pos += 4;
            Ok(u32::from_le_bytes(b.try_into().unwrap()))
        };
        let d = u32_at(&mut pos)?;
        let r = u32_at(&mut pos)?;
        let m = u32_at(&mut pos)?;
        let f64_at = |pos: &mut usize| -> Result<f64> {
            let b = buf.get(*pos..*pos + 8).ok_or_else(bad)?;
            *pos += 8;
            Ok(f64::from_le_bytes(b.try_into().unwrap()))
        };
        let h = f64_at(&mut pos)?;
        let free = d.checked_sub(r).ok_or_else(bad)? as usize;
        let mut y_bounds = Vec::with_capacity(free);
        let mut cells = 1usize;
        for _ in 0..free {
            let lo = f64_at(&mut pos)?;
            let hi = f64_at(&mut pos)?;
            cells *= ((hi - lo) / h).round() as usize;
            y_bounds.push((lo, hi));
        }
        cells *= (m as usize).pow(r);
        let bytes = &buf[pos..];
        if bytes.len() != cells.div_ceil(8) {
            return Err(bad());
        }
        let bits = (0..cells).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect();
        Ok(Self {
            d,
            r,
            m,
            h,
            y_bounds,
            bits,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Functional;
    use crate::lattice::Lattice;
    use crate::rational::{ivec, q, qi, qvec};

    fn strip_orthant() -> PSpace {
        let n = Lattice::new(2, vec![ivec(&[0, 1])]).unwrap();
        let e = Functional::from_direction(&ivec(&[1, 0])).unwrap();
        PSpace::q_n(QuotientChart::new(n, e).unwrap(), Cone::orthant(2)).unwrap()
    }

    fn wedge() -> PSpace {
        let n = Lattice::new(2, vec![ivec(&[0, 1])]).unwrap();
        let e = Functional::from_direction(&ivec(&[1, 0])).unwrap();
        let p = Cone::from_generators(&[ivec(&[1, 1]), ivec(&[1, -1])]).unwrap();
        PSpace::q_n(QuotientChart::new(n, e).unwrap(), p).unwrap()
    }

    #[test]
    fn interior_semigroup_is_strict() {
        let a = strip_orthant();
        assert!(a.in_interior_semigroup(&qvec(&[(1, 1), (-1, 2)])));
        assert!(!a.in_interior_semigroup(&qvec(&[(0, 1), (1, 2)])));
        assert!(a.in_semigroup(&qvec(&[(0, 1), (1, 2)])));
        let w = wedge();
        assert!(w.in_semigroup(&qvec(&[(1, 2), (1, 2)])));
        assert!(!w.in_interior_semigroup(&qvec(&[(1, 2), (1, 2)])));
        assert!(w.in_interior_semigroup(&qvec(&[(1, 1), (5, 2)])));
        assert!(!w.in_interior_semigroup(&ivec(&[0, 0])));
    }

    #[test]
    fn membership_examples() {
        let a = strip_orthant();
        assert!(a.member(&ivec(&[0, 0])));
        assert!(a.member(&qvec(&[(1, 1), (-1, 4)])));
        assert!(!a.member(&qvec(&[(-1, 2), (3, 10)])));
        let w = wedge();
        assert!(w.member(&ivec(&[0, 0])));
        assert!(w.member(&qvec(&[(1, 4), (3, 4)])));
        assert!(!w.member(&qvec(&[(1, 8), (1, 2)])));
        assert!(!w.member(&qvec(&[(-1, 8), (0, 1)])));
    }

    #[test]
    fn enumeration_agrees_with_interval_method() {
        // The wedge uses the slab enumeration; compare with a direct scan.
        let w = wedge();
        let p = w.cone().clone();
        for a in -8..8 {
            for b in -8..8 {
                let x = vec![q(a, 4), q(b, 3)];
                let direct = (-10..=10).any(|n| p.contains(&vec![x[0].clone(), &x[1] + qi(n)]));
                assert_eq!(w.member(&x), direct, "{x:?}");
            }
        }
    }

    #[test]
    fn boundary_criterion() {
        assert!(strip_orthant().boundary_compact().0);
        let e = Functional::from_direction(&ivec(&[1, 1])).unwrap();
        let chart = QuotientChart::new(Lattice::trivial(2), e).unwrap();
        let a = PSpace::q_n(chart, Cone::orthant(2)).unwrap();
        let (compact, reason) = a.boundary_compact();
        assert!(!compact);
        assert!(reason.contains("d_eff=2"));
    }

    #[test]
    fn strip_diff_measure_is_exact() {
        let a = strip_orthant();
        let w = GridWindow::new(vec![qi(-1)], vec![qi(6)], q(1, 4), 4, 1).unwrap();
        assert_eq!(a.diff_measure(&GridShift::new(vec![0], vec![0]), &w).unwrap(), 0.0);
        let m = a.diff_measure(&GridShift::new(vec![6], vec![0]), &w).unwrap();
        assert!((m - 1.5).abs() < 1e-12);
        assert_eq!(
            a.diff_measure(&GridShift::new(vec![-1], vec![0]), &w),
            Err(Error::NotInCone)
        );
    }

    #[test]
    fn orthant_growth_is_linear_with_slope_two() {
        let e = Functional::from_direction(&ivec(&[1, 1])).unwrap();
        let chart = QuotientChart::new(Lattice::trivial(2), e).unwrap();
        let a = PSpace::q_n(chart, Cone::orthant(2)).unwrap();
        let base = GridWindow::new(vec![qi(0), qi(0)], vec![qi(2), qi(2)], q(1, 4), 1, 0).unwrap();
        let ladder = crate::grid::ladder(&base, &[qi(1), qi(2), qi(3), qi(4)]).unwrap();
        let g = a.growth_profile(&GridShift::new(vec![4, 4], vec![]), &ladder).unwrap();
        for (l, mu) in &g.points {
            assert!((mu - (2.0 * l - 1.0)).abs() < 1e-12);
        }
        assert!(matches!(g.class, Growth::Linear(s) if (s - 2.0).abs() < 1e-9));
        let short = vec![base.clone(); 5];
        assert!(matches!(
            a.growth_profile(&GridShift::new(vec![4, 4], vec![]), &short),
            Err(Error::LadderTooShort { distinct: 1, required: 4 })
        ));
    }

    #[test]
    fn mask_file_round_trip() {
        let a = wedge();
        let w = GridWindow::new(vec![qi(0)], vec![qi(2)], q(1, 4), 4, 1).unwrap();
        let mask = a.mask(&w).unwrap();
        let mut buf = Vec::new();
        mask.write_to(&mut buf).unwrap();
        let back = MaskFile::read_from(buf.as_slice()).unwrap();
        assert_eq!(back.bits, mask.bits());
        assert_eq!((back.d, back.r, back.m), (2, 1, 4));
        assert!(MaskFile::read_from(&buf[..buf.len() - 1]).is_err());
    }
}
