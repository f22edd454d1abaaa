//! Scenario files (TOML). Every number is a rational string `"p/q"`; grid
//! extents may also be decimals. Unknown keys are rejected.
//!
//! ```toml
//! name = "q2_rank1"
//! seed = 7
//! k = 1
//! checks = ["cone", "pspace", "rep", "cocycles", "fock", "index", "classify"]
//!
//! [cone]
//! generators = [["1", "0"], ["0", "1"]]
//!
//! [functional]
//! e = "auto"
//!
//! [lattice]
//! basis = [["1", "-1"]]
//!
//! [grid]
//! yLo = ["-0.5"]
//! yHi = ["4"]
//! h = "1/4"
//! M = 4
//! ladder = ["1", "4/3", "5/3", "2"]
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{self, Q, QVec};
use crate::scenario::{GridSpec, ScenarioSpec};

/// Checks in dependency order.
pub const ALL_CHECKS: [Check; 7] = [
    Check::Cone,
    Check::Pspace,
    Check::Rep,
    Check::Cocycles,
    Check::Fock,
    Check::Index,
    Check::Classify,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Cone,
    Pspace,
    Rep,
    Cocycles,
    Fock,
    Index,
    Classify,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Cone => "cone",
            Check::Pspace => "pspace",
            Check::Rep => "rep",
            Check::Cocycles => "cocycles",
            Check::Fock => "fock",
            Check::Index => "index",
            Check::Classify => "classify",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    seed: Option<u64>,
    k: Option<usize>,
    checks: Option<Vec<Check>>,
    cone: RawCone,
    functional: Option<RawFunctional>,
    lattice: Option<RawLattice>,
    pspace: Option<RawPspace>,
    grid: Option<RawGrid>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    generators: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctional {
    e: FunctionalValue,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FunctionalValue {
    Auto(String),
    Direction(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    basis: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPspace {
    translates: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(rename = "yLo")]
    y_lo: Vec<Extent>,
    #[serde(rename = "yHi")]
    y_hi: Vec<Extent>,
    h: String,
    #[serde(rename = "M")]
    m: usize,
    ladder: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Extent {
    Text(String),
    Int(i64),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub spec: ScenarioSpec,
    pub checks: Vec<Check>,
    /// Source text, hashed into reports.
    pub source: String,
}

/// `"p/q"` or an integer; decimals are refused here.
fn exact(s: &str) -> Result<Q> {
    if s.contains('.') {
        return Err(Error::Parse(format!("{s:?}: use a rational \"p/q\", not a decimal")));
    }
    rational::parse_rational(s)
}

fn exact_vecs(rows: &[Vec<String>]) -> Result<Vec<QVec>> {
    rows.iter()
        .map(|r| r.iter().map(|s| exact(s)).collect())
        .collect()
}

fn extent(e: &Extent) -> Result<Q> {
    match e {
        Extent::Text(s) => rational::parse_rational(s),
        Extent::Int(i) => Ok(rational::qi(*i)),
        // The shortest round-trip decimal is what the user wrote.
        Extent::Float(f) if f.is_finite() => rational::parse_rational(&format!("{f:?}")),
        Extent::Float(f) => Err(Error::Parse(format!("grid extent {f} is not finite"))),
    }
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    let cone = exact_vecs(&raw.cone.generators)?;
    let functional = match raw.functional.map(|f| f.e) {
        None => None,
        Some(FunctionalValue::Auto(s)) if s == "auto" => None,
        Some(FunctionalValue::Auto(s)) => {
            return Err(Error::Parse(format!("functional.e must be \"auto\" or a vector, got {s:?}")))
        }
        Some(FunctionalValue::Direction(v)) => Some(v.iter().map(|s| exact(s)).collect::<Result<QVec>>()?),
    };
    let lattice = match raw.lattice {
        Some(l) => exact_vecs(&l.basis)?,
        None => Vec::new(),
    };
    let translates = match raw.pspace {
        Some(p) => exact_vecs(&p.translates)?,
        None => Vec::new(),
    };
    let grid = match raw.grid {
        None => None,
        Some(g) => Some(GridSpec {
            y_lo: g.y_lo.iter().map(extent).collect::<Result<_>>()?,
            y_hi: g.y_hi.iter().map(extent).collect::<Result<_>>()?,
            h: exact(&g.h)?,
            m: g.m,
            ladder: match g.ladder {
                Some(l) => l.iter().map(|s| exact(s)).collect::<Result<_>>()?,
                None => GridSpec::default_for(1, 1).ladder,
            },
        }),
    };
    let mut checks = raw.checks.unwrap_or_else(|| ALL_CHECKS.to_vec());
    checks.sort();
    checks.dedup();
    Ok(ScenarioConfig {
        spec: ScenarioSpec {
            name: raw.name.unwrap_or_else(|| "scenario".to_string()),
            cone,
            functional,
            lattice,
            translates,
            k: raw.k.unwrap_or(1),
            grid,
            seed: raw.seed.unwrap_or(0),
        },
        checks,
        source: text.to_string(),
    })
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
