//! A complete desk-scale instance: cone, functional, lattice, P-space,
//! multiplicity and grid.

use num_traits::Zero;

use crate::chart::QuotientChart;
use crate::cone::{interior_unit, Cone, Functional};
use crate::error::{Error, Result};
use crate::grid::{ladder, GridWindow};
use crate::lattice::Lattice;
use crate::pspace::PSpace;
use crate::rational::{self, q, qi, Q, QVec};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// One entry per free axis of the chart.
    pub y_lo: QVec,
    pub y_hi: QVec,
    pub h: Q,
    pub m: usize,
    /// Extent multipliers for the growth ladder.
    pub ladder: Vec<Q>,
}

impl GridSpec {
    /// `[-1/2, 4]` along `e`, `[-4, 4]` across, step 1/4, four torus slots.
    /// With no lattice the chart is the identity and every axis gets
    /// `[-1/2, 4]`.
    pub fn default_for(free_dim: usize, rank: usize) -> Self {
        let lo_across = if rank == 0 { q(-1, 2) } else { qi(-4) };
        let y_lo = (0..free_dim)
            .map(|i| if i == 0 { q(-1, 2) } else { lo_across.clone() })
            .collect();
        Self {
            y_lo,
            y_hi: vec![qi(4); free_dim],
            h: q(1, 4),
            m: 4,
            ladder: vec![qi(1), q(4, 3), q(5, 3), qi(2)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub cone: Vec<QVec>,
    /// Direction of `e`; `None` picks the normalized sum of the dual generators.
    pub functional: Option<QVec>,
    pub lattice: Vec<QVec>,
    /// Translates `g_i` of `A = ∪ φ(P + g_i)`; empty means `Q^N`.
    pub translates: Vec<QVec>,
    pub k: usize,
    pub grid: Option<GridSpec>,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(name: &str, cone: Vec<QVec>, lattice: Vec<QVec>) -> Self {
        Self {
            name: name.to_string(),
            cone,
            functional: None,
            lattice,
            translates: Vec::new(),
            k: 1,
            grid: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub cone: Cone,
    pub functional: Functional,
    pub lattice: Lattice,
    pub pspace: PSpace,
    pub k: usize,
    pub window: GridWindow,
    pub ladder: Vec<GridWindow>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn chart(&self) -> &QuotientChart {
        self.pspace.chart()
    }

    /// The same scenario with every free extent multiplied by `factor`.
    pub fn with_window_scale(&self, factor: &Q) -> Result<Self> {
        let mut s = self.clone();
        s.window = self.window.scaled(factor)?;
        s.ladder = self
            .ladder
            .iter()
            .map(|w| w.scaled(factor))
            .collect::<Result<_>>()?;
        Ok(s)
    }
}

/// Builds and validates a scenario: `e ∈ Int(P*)`, `N ⊂ e^⊥` and
/// `P ∩ N = {0}`. Lattices of rank other than `d - 1` are accepted with a
/// warning.
pub fn generate_family(spec: &ScenarioSpec) -> Result<Scenario> {
    let cone = Cone::from_generators(&spec.cone)?;
    let d = cone.dim();
    let pstar = cone.dual_cone()?;
    let functional = interior_unit(&pstar, spec.functional.as_deref())?;
    let lattice = Lattice::new(d, spec.lattice.clone())?;
    let chart = QuotientChart::new(lattice.clone(), functional.clone())?;
    let mut warnings = Vec::new();
    if lattice.rank() + 1 != d {
        warnings.push(format!(
            "lattice has rank {}; the canonical family uses rank {}",
            lattice.rank(),
            d - 1
        ));
    }
    check_cone_meets_lattice_trivially(&cone, &lattice)?;
    let pspace = if spec.translates.is_empty() {
        PSpace::q_n(chart.clone(), cone.clone())?
    } else {
        PSpace::new(chart.clone(), cone.clone(), spec.translates.clone())?
    };
    if spec.k == 0 {
        return Err(Error::Invalid("multiplicity must be at least 1".into()));
    }
    let grid = spec
        .grid
        .clone()
        .unwrap_or_else(|| GridSpec::default_for(chart.free_dim(), chart.rank()));
    let window = GridWindow::new(grid.y_lo, grid.y_hi, grid.h, grid.m, chart.rank())?;
    window.check_chart(&chart)?;
    let ladder = ladder(&window, &grid.ladder)?;
    Ok(Scenario {
        name: spec.name.clone(),
        cone,
        functional,
        lattice,
        pspace,
        k: spec.k,
        window,
        ladder,
        seed: spec.seed,
        warnings,
    })
}

/// No nonzero lattice vector with coefficients in `[-3, 3]` lies in `P`.
/// Since `N ⊥ e` and `e` pairs strictly positively with `P \ {0}`, this can
/// only fail on inconsistent input; the search is a cheap exact confirmation.
fn check_cone_meets_lattice_trivially(cone: &Cone, lattice: &Lattice) -> Result<()> {
    let r = lattice.rank();
    if r == 0 {
        return Ok(());
    }
    let mut coeffs = vec![-3i64; r];
    loop {
        if coeffs.iter().any(|c| !c.is_zero()) {
            let p = lattice.point(&coeffs);
            if cone.contains(&p) {
                return Err(Error::Invalid(format!(
                    "cone contains the lattice vector {}",
                    rational::format_vec(&p)
                )));
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return Ok(());
            }
            if coeffs[i] < 3 {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -3;
            i += 1;
        }
    }
}
