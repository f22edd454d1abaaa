//! Finite grid windows on `R^{d-r} × T^r` and grid-snapped shifts.
//!
//! Cells are indexed by integer offsets `j` along the free axes and torus
//! slots `t ∈ Z_M` along the compact axes. The cell with indices `(j, t)` is
//! represented by its midpoint `y = yLo + (j + 1/2) h`, `u = (t + 1/2) / M`.
//! Linear order is y-major lexicographic, torus slots varying fastest.

use num_traits::{One, Signed, ToPrimitive};

use crate::chart::QuotientChart;
use crate::error::{Error, Result};
use crate::rational::{self, Q, QVec};

#[derive(Debug, Clone, PartialEq)]
pub struct GridWindow {
    y_lo: QVec,
    counts: Vec<usize>,
    h: Q,
    m: usize,
    rank: usize,
}

impl GridWindow {
    /// Window `[yLo, yHi]` along each free axis with step `h` and `m` slots
    /// per torus axis. The upper bound is snapped down to a whole number of
    /// steps.
    pub fn new(y_lo: QVec, y_hi: QVec, h: Q, m: usize, rank: usize) -> Result<Self> {
        if y_lo.len() != y_hi.len() {
            return Err(Error::InvalidWindow("yLo and yHi differ in length".into()));
        }
        if !h.is_positive() {
            return Err(Error::InvalidWindow("step h must be positive".into()));
        }
        if rank > 0 && m < 2 {
            return Err(Error::InvalidWindow("need at least 2 torus slots".into()));
        }
        let counts = y_lo
            .iter()
            .zip(&y_hi)
            .map(|(lo, hi)| {
                let n = ((hi - lo) / &h).floor();
                if n < rational::qi(4) {
                    Err(Error::InvalidWindow(format!(
                        "extent {} is shorter than 4 steps",
                        rational::format_rational(&(hi - lo))
                    )))
                } else {
                    Ok(n.to_integer().to_usize().expect("window too large"))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            y_lo,
            counts,
            h,
            m: if rank == 0 { 1 } else { m },
            rank,
        })
    }

    pub fn check_chart(&self, chart: &QuotientChart) -> Result<()> {
        if self.y_lo.len() != chart.free_dim() || self.rank != chart.rank() {
            return Err(Error::WindowChartMismatch(format!(
                "window has {} free and {} torus axes, chart has {} and {}",
                self.y_lo.len(),
                self.rank,
                chart.free_dim(),
                chart.rank()
            )));
        }
        Ok(())
    }

    pub fn free_dim(&self) -> usize {
        self.y_lo.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn h(&self) -> &Q {
        &self.h
    }

    /// Torus slots per compact axis (1 when there are none).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn y_lo(&self) -> &[Q] {
        &self.y_lo
    }

    pub fn y_hi(&self) -> QVec {
        self.y_lo
            .iter()
            .zip(&self.counts)
            .map(|(lo, &n)| lo + &self.h * Q::from_integer((n as i64).into()))
            .collect()
    }

    /// Largest extent along a free axis.
    pub fn extent(&self) -> Q {
        let n = self.counts.iter().copied().max().unwrap_or(0);
        &self.h * Q::from_integer((n as i64).into())
    }

    fn torus_cells(&self) -> usize {
        self.m.pow(self.rank as u32)
    }

    pub fn n_cells(&self) -> usize {
        self.counts.iter().product::<usize>() * self.torus_cells()
    }

    pub fn cell_volume(&self, chart: &QuotientChart) -> f64 {
        let h = rational::to_f64(&self.h);
        h.powi(self.free_dim() as i32) * (self.m as f64).powi(-(self.rank as i32)) * chart.haar_factor()
    }

    /// Linear index of the cell `(j, t)`; `t` is reduced mod `M`, `None` when
    /// `j` leaves the window.
    pub fn index(&self, j: &[i64], t: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for (&ji, &n) in j.iter().zip(&self.counts) {
            if ji < 0 || ji as usize >= n {
                return None;
            }
            idx = idx * n + ji as usize;
        }
        for &ti in t {
            idx = idx * self.m + ti.rem_euclid(self.m as i64) as usize;
        }
        Some(idx)
    }

    pub fn cell(&self, mut idx: usize) -> (Vec<i64>, Vec<i64>) {
        let mut t = vec![0i64; self.rank];
        for ti in t.iter_mut().rev() {
            *ti = (idx % self.m) as i64;
            idx /= self.m;
        }
        let mut j = vec![0i64; self.counts.len()];
        for (ji, &n) in j.iter_mut().zip(&self.counts).rev() {
            *ji = (idx % n) as i64;
            idx /= n;
        }
        (j, t)
    }

    /// Midpoint coordinates of a cell, also for `j` outside the window.
    pub fn center(&self, j: &[i64], t: &[i64]) -> (QVec, QVec) {
        let half = Q::new(1.into(), 2.into());
        let y = self
            .y_lo
            .iter()
            .zip(j)
            .map(|(lo, &ji)| lo + &self.h * (rational::qi(ji) + &half))
            .collect();
        let mq = rational::qi(self.m as i64);
        let u = t
            .iter()
            .map(|&ti| (rational::qi(ti.rem_euclid(self.m as i64)) + &half) / &mq)
            .collect();
        (y, u)
    }

    pub fn center_point(&self, chart: &QuotientChart, j: &[i64], t: &[i64]) -> QVec {
        let (y, u) = self.center(j, t);
        chart.point(&y, &u)
    }

    /// Same lower corner, free extents multiplied by `factor` and snapped to
    /// whole steps.
    pub fn scaled(&self, factor: &Q) -> Result<Self> {
        let y_hi = self
            .y_lo
            .iter()
            .zip(&self.counts)
            .map(|(lo, &n)| {
                let steps = (Q::from_integer((n as i64).into()) * factor).floor();
                lo + &self.h * steps
            })
            .collect();
        Self::new(self.y_lo.clone(), y_hi, self.h.clone(), self.m, self.rank)
    }

    /// Shared key for cells across nested windows with the same step: the
    /// exact midpoint `y` together with the torus slot.
    pub fn cell_key(&self, j: &[i64], t: &[i64]) -> (QVec, Vec<i64>) {
        let (y, _) = self.center(j, t);
        (y, t.iter().map(|&ti| ti.rem_euclid(self.m as i64)).collect())
    }
}

/// A translation by whole grid steps: `dy` steps of `h` along the free axes
/// and `du` torus slots. `du` is deliberately not reduced mod `M`, so the
/// shift has a definite representative in R^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridShift {
    pub dy: Vec<i64>,
    pub du: Vec<i64>,
}

impl GridShift {
    pub fn new(dy: Vec<i64>, du: Vec<i64>) -> Self {
        Self { dy, du }
    }

    pub fn zero(window: &GridWindow) -> Self {
        Self::new(vec![0; window.free_dim()], vec![0; window.rank()])
    }

    pub fn is_zero(&self) -> bool {
        self.dy.iter().chain(&self.du).all(|&v| v == 0)
    }

    /// Snaps a point of R^d to a grid shift, failing unless it is exactly one.
    pub fn from_point(x: &[Q], window: &GridWindow, chart: &QuotientChart) -> Result<Self> {
        if x.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                got: x.len(),
            });
        }
        let (y, ut) = chart.lift_coords(x);
        let steps = |v: &Q, unit: &Q| -> Result<i64> {
            let s = v / unit;
            if s.is_integer() {
                s.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::SampleOffGrid("shift too large".into()))
            } else {
                Err(Error::SampleOffGrid(format!(
                    "coordinate {} is not a multiple of {}",
                    rational::format_rational(v),
                    rational::format_rational(unit)
                )))
            }
        };
        let slot = Q::one() / rational::qi(window.m() as i64);
        Ok(Self {
            dy: y.iter().map(|v| steps(v, window.h())).collect::<Result<_>>()?,
            du: ut.iter().map(|v| steps(v, &slot)).collect::<Result<_>>()?,
        })
    }

    /// The representative `Σ dy_i h f_i + B du / M` in R^d.
    pub fn point(&self, window: &GridWindow, chart: &QuotientChart) -> QVec {
        let y: QVec = self.dy.iter().map(|&v| rational::qi(v) * window.h()).collect();
        let mq = rational::qi(window.m() as i64);
        let u: QVec = self.du.iter().map(|&v| rational::qi(v) / &mq).collect();
        chart.point(&y, &u)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dy: self.dy.iter().zip(&other.dy).map(|(a, b)| a + b).collect(),
            du: self.du.iter().zip(&other.du).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            dy: self.dy.iter().map(|a| -a).collect(),
            du: self.du.iter().map(|a| -a).collect(),
        }
    }

    pub fn times(&self, n: i64) -> Self {
        Self {
            dy: self.dy.iter().map(|a| a * n).collect(),
            du: self.du.iter().map(|a| a * n).collect(),
        }
    }

    /// Cell indices after translating `(j, t)` by this shift.
    pub fn apply(&self, j: &[i64], t: &[i64]) -> (Vec<i64>, Vec<i64>) {
        (
            j.iter().zip(&self.dy).map(|(a, b)| a + b).collect(),
            t.iter().zip(&self.du).map(|(a, b)| a + b).collect(),
        )
    }

    /// Concatenated integer vector `(dy, du)`.
    pub fn as_vec(&self) -> Vec<i64> {
        self.dy.iter().chain(&self.du).copied().collect()
    }
}

/// Windows of a ladder with distinct extents, in increasing order.
pub fn distinct_windows(ladder: &[GridWindow]) -> Vec<GridWindow> {
    let mut out: Vec<GridWindow> = ladder.to_vec();
    out.sort_by(|a, b| a.extent().cmp(&b.extent()));
    out.dedup_by(|a, b| a.extent() == b.extent());
    out
}

/// Ladder of windows obtained by scaling the base extent by each factor.
pub fn ladder(base: &GridWindow, factors: &[Q]) -> Result<Vec<GridWindow>> {
    factors.iter().map(|f| base.scaled(f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Functional;
    use crate::lattice::Lattice;
    use crate::rational::{ivec, q, qi};

    fn strip() -> (QuotientChart, GridWindow) {
        let n = Lattice::new(2, vec![ivec(&[0, 1])]).unwrap();
        let e = Functional::from_direction(&ivec(&[1, 0])).unwrap();
        let chart = QuotientChart::new(n, e).unwrap();
        let w = GridWindow::new(vec![qi(0)], vec![qi(5)], qi(1), 4, 1).unwrap();
        (chart, w)
    }

    #[test]
    fn indexing_round_trips() {
        let (_, w) = strip();
        assert_eq!(w.n_cells(), 20);
        for idx in 0..w.n_cells() {
            let (j, t) = w.cell(idx);
            assert_eq!(w.index(&j, &t), Some(idx));
        }
        assert_eq!(w.index(&[5], &[0]), None);
        assert_eq!(w.index(&[1], &[-1]), w.index(&[1], &[3]));
    }

    #[test]
    fn shifts_snap_exactly() {
        let (chart, w) = strip();
        let s = GridShift::from_point(&ivec(&[2, 5]), &w, &chart).unwrap();
        assert_eq!(s, GridShift::new(vec![2], vec![20]));
        assert_eq!(s.point(&w, &chart), ivec(&[2, 5]));
        assert!(matches!(
            GridShift::from_point(&vec![q(1, 2), qi(0)], &w, &chart),
            Err(Error::SampleOffGrid(_))
        ));
    }

    #[test]
    fn window_validation() {
        assert!(GridWindow::new(vec![qi(0)], vec![qi(3)], qi(1), 4, 1).is_err());
        assert!(GridWindow::new(vec![qi(0)], vec![qi(8)], qi(1), 1, 1).is_err());
        assert!(GridWindow::new(vec![qi(0)], vec![qi(8)], qi(0), 4, 1).is_err());
        let (chart, w) = strip();
        assert!(w.check_chart(&chart).is_ok());
        let w2 = GridWindow::new(vec![qi(0), qi(0)], vec![qi(8), qi(8)], qi(1), 4, 0).unwrap();
        assert!(matches!(w2.check_chart(&chart), Err(Error::WindowChartMismatch(_))));
    }

    #[test]
    fn scaling_snaps_to_steps() {
        let w = GridWindow::new(vec![qi(0)], vec![qi(4)], q(1, 2), 4, 1).unwrap();
        let w2 = w.scaled(&q(5, 2)).unwrap();
        assert_eq!(w2.y_hi(), vec![qi(10)]);
        assert_eq!(w2.counts(), &[20]);
    }
}
