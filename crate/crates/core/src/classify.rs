//! Exact classification of lattice scenarios: spectra of the quotient
//! characters, lattice equivalence with a separating witness, the pullback
//! obstruction, and the type I report.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::Functional;
use crate::error::{Error, Result};
use crate::grid::GridShift;
use crate::lattice::{dual_lattice, lattice_equal, Lattice};
use crate::rational::{self, q, Q, QVec};
use crate::scenario::Scenario;
use crate::shiftrep::{commutant_dim, cocycle_space_dim, semigroup_generators, Multiplicity, ShiftRep};

/// Closure of `{exp(i⟨x|ξ⟩) : ξ ∈ N^⊥}` in the circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectrumType {
    Trivial,
    Cyclic(BigInt),
    Dense,
}

impl fmt::Display for SpectrumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumType::Trivial => write!(f, "trivial"),
            SpectrumType::Cyclic(m) => write!(f, "cyclic({m})"),
            SpectrumType::Dense => write!(f, "dense"),
        }
    }
}

/// Parses exact coordinates. Anything that is not a rational literal
/// (`sqrt(2)`, `pi`, `1e-3`) is reported as irrational input.
pub fn parse_point(entries: &[&str]) -> Result<QVec> {
    entries
        .iter()
        .map(|s| {
            if s.chars().any(|c| c.is_ascii_alphabetic()) {
                return Err(Error::IrrationalInput);
            }
            rational::parse_rational(s)
        })
        .collect()
}

/// `N^⊥ = L* ⊕ span(N)^⊥`. Outside `span(N)` the second summand already
/// sweeps the circle; inside, the pairings with a basis of `L*` are rational
/// multiples of `2π` and generate a cyclic group.
pub fn spectrum_type(x: &[Q], n: &Lattice, e: &Functional) -> Result<SpectrumType> {
    if x.len() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            got: x.len(),
        });
    }
    let dual = dual_lattice(n, e)?;
    if n.rank() == 0 {
        return Ok(if rational::is_zero_vec(x) {
            SpectrumType::Trivial
        } else {
            SpectrumType::Dense
        });
    }
    if rational::coordinates_in(n.basis(), x).is_none() {
        return Ok(SpectrumType::Dense);
    }
    let order = (0..n.rank())
        .map(|j| dual.pairing_over_two_pi(x, j).denom().clone())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    Ok(if order.is_one() {
        SpectrumType::Trivial
    } else {
        SpectrumType::Cyclic(order)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Separating witness for `N_A ≠ N_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub witness: QVec,
    /// The lattice the witness belongs to.
    pub from: Side,
    pub spectrum_a: SpectrumType,
    pub spectrum_b: SpectrumType,
    pub hnf_a: Vec<QVec>,
    pub hnf_b: Vec<QVec>,
}

impl Certificate {
    /// Trivial on the side the witness comes from and nontrivial on the other.
    pub fn is_valid(&self) -> bool {
        let (own, other) = match self.from {
            Side::A => (&self.spectrum_a, &self.spectrum_b),
            Side::B => (&self.spectrum_b, &self.spectrum_a),
        };
        *own == SpectrumType::Trivial && *other != SpectrumType::Trivial
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub certificate: Option<Certificate>,
}

/// Lattice-level equivalence for a fixed cone and functional.
pub fn equivalent_lattices(a: &Lattice, b: &Lattice, e: &Functional) -> Result<Equivalence> {
    if a.dim() != b.dim() {
        return Err(Error::IncomparableScenarios("different dimensions".into()));
    }
    if lattice_equal(a, b) {
        return Ok(Equivalence {
            equivalent: true,
            certificate: None,
        });
    }
    let pick = |own: &Lattice, other: &Lattice| own.basis().iter().find(|v| !other.contains(v)).cloned();
    let (witness, from) = match pick(a, b) {
        Some(w) => (w, Side::A),
        None => (
            pick(b, a).expect("unequal lattices differ on a basis vector"),
            Side::B,
        ),
    };
    let cert = Certificate {
        spectrum_a: spectrum_type(&witness, a, e)?,
        spectrum_b: spectrum_type(&witness, b, e)?,
        witness,
        from,
        hnf_a: a.hnf().to_vec(),
        hnf_b: b.hnf().to_vec(),
    };
    Ok(Equivalence {
        equivalent: false,
        certificate: Some(cert),
    })
}

/// Equivalence of two scenarios with the same dimension, cone and functional.
pub fn equivalent(s1: &Scenario, s2: &Scenario) -> Result<Equivalence> {
    if s1.dim() != s2.dim() {
        return Err(Error::IncomparableScenarios(format!(
            "dimensions {} and {}",
            s1.dim(),
            s2.dim()
        )));
    }
    if !s1.cone.same_as(&s2.cone) {
        return Err(Error::IncomparableScenarios("different cones".into()));
    }
    if !same_ray(s1.functional.direction(), s2.functional.direction()) {
        return Err(Error::IncomparableScenarios("different functionals".into()));
    }
    equivalent_lattices(&s1.lattice, &s2.lattice, &s1.functional)
}

fn same_ray(a: &[Q], b: &[Q]) -> bool {
    rational::primitive_direction(a) == rational::primitive_direction(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackWitness {
    pub mu: QVec,
    /// `w ∈ μ^⊥ \ N`.
    pub w: QVec,
    /// Spectrum of the quotient representation at `w`.
    pub lattice_spectrum: SpectrumType,
    /// Spectrum any pullback along `μ` has at `w`: trivial exactly when
    /// `⟨w|μ⟩ = 0`, dense otherwise.
    pub pullback_spectrum: SpectrumType,
}

impl PullbackWitness {
    pub fn is_valid(&self) -> bool {
        rational::dot(&self.w, &self.mu).is_zero() && self.lattice_spectrum != self.pullback_spectrum
    }
}

/// A vector orthogonal to `μ` outside `N`: a basis vector `b` of `μ^⊥`
/// scaled by `1/p` for the first `p >= 2` that leaves the lattice. The scan
/// ends because `b/p ∈ N` needs `p` to divide the numerators of the lattice
/// coordinates of `b`.
pub fn pullback_obstruction(lattice: &Lattice, e: &Functional, mu: &[Q]) -> Result<PullbackWitness> {
    if mu.len() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            got: mu.len(),
        });
    }
    if rational::is_zero_vec(mu) {
        return Err(Error::ZeroDirection);
    }
    let perp = rational::nullspace(&[mu.to_vec()], mu.len());
    let w = (2i64..)
        .map(|p| rational::scale(&perp[0], &q(1, p)))
        .find(|w| !lattice.contains(w))
        .expect("a discrete group cannot contain b/p for every p");
    let lattice_spectrum = spectrum_type(&w, lattice, e)?;
    let pullback_spectrum = if rational::dot(&w, mu).is_zero() {
        SpectrumType::Trivial
    } else {
        SpectrumType::Dense
    };
    Ok(PullbackWitness {
        mu: mu.to_vec(),
        w,
        lattice_spectrum,
        pullback_spectrum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeOneBasis {
    /// Nonzero cocycle and an irreducible representation.
    Irreducible,
    /// Multiplicity `k > 1`: type I of the multiplicity-one flow carries over
    /// to the tensor product with `C^k`.
    Tensoring,
    /// No nonzero cocycle.
    NoCocycle,
    /// The commutant is larger than the multiplicity accounts for.
    Reducible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeOneReport {
    pub k: usize,
    pub cocycle_dim: usize,
    pub has_nonzero_cocycle: bool,
    pub commutant_dim: usize,
    /// `commutant_dim == k²`.
    pub irreducible: bool,
    pub type_one: bool,
    pub basis: TypeOneBasis,
}

impl TypeOneReport {
    pub fn note(&self) -> &'static str {
        match self.basis {
            TypeOneBasis::Irreducible => "irreducible with a nonzero additive cocycle",
            TypeOneBasis::Tensoring => {
                "by multiplicity tensoring: commutant is M_k, the multiplicity-one flow is type I"
            }
            TypeOneBasis::NoCocycle => "no nonzero additive cocycle",
            TypeOneBasis::Reducible => "commutant exceeds the multiplicity",
        }
    }
}

pub fn type_one_report(s: &Scenario) -> Result<TypeOneReport> {
    let space = cocycle_space_dim(&s.pspace, s.k, &[], &s.ladder)?;
    type_one_from(s, space.dim)
}

/// [`type_one_report`] with the cocycle-space dimension already known.
pub fn type_one_from(s: &Scenario, cocycle_dim: usize) -> Result<TypeOneReport> {
    let rep = ShiftRep::build(&s.pspace, &s.window, Multiplicity::Finite(s.k))?;
    let gens: Vec<GridShift> = semigroup_generators(&rep);
    let commutant = commutant_dim(&rep, &gens)?;
    let has = cocycle_dim >= 1;
    let irreducible = commutant == s.k * s.k;
    let basis = match (has, irreducible, s.k) {
        (false, _, _) => TypeOneBasis::NoCocycle,
        (true, false, _) => TypeOneBasis::Reducible,
        (true, true, 1) => TypeOneBasis::Irreducible,
        (true, true, _) => TypeOneBasis::Tensoring,
    };
    Ok(TypeOneReport {
        k: s.k,
        cocycle_dim,
        has_nonzero_cocycle: has,
        commutant_dim: commutant,
        irreducible,
        type_one: matches!(basis, TypeOneBasis::Irreducible | TypeOneBasis::Tensoring),
        basis,
    })
}

/// Random rank-`r` lattice in `e^⊥` with small rational entries: integer
/// combinations of a fixed rational basis of `e^⊥` divided by small
/// denominators.
pub fn random_lattice(e: &Functional, r: usize, rng: &mut impl rand::Rng) -> Lattice {
    let d = e.dim();
    let perp = rational::nullspace(&[e.direction().to_vec()], d);
    loop {
        let basis: Vec<QVec> = (0..r)
            .map(|_| {
                let den = rng.random_range(1..=3i64);
                perp.iter().fold(vec![Q::zero(); d], |acc, b| {
                    let c = rng.random_range(-2..=2i64);
                    rational::add(&acc, &rational::scale(b, &q(c, den)))
                })
            })
            .collect();
        if let Ok(l) = Lattice::new(d, basis) {
            if l.rank() == r && l.basis().iter().all(|b| !b.iter().all(|x| x.is_zero())) {
                return l;
            }
        }
    }
}

/// `Q^+`-family `N_t = Z t v` for a fixed `v ∈ e^⊥` (rank one).
pub fn scaled_family(e: &Functional, ts: &[Q]) -> Vec<Lattice> {
    let v = rational::nullspace(&[e.direction().to_vec()], e.dim())
        .into_iter()
        .next()
        .expect("e^⊥ is nontrivial for d >= 2");
    ts.iter()
        .map(|t| Lattice::new(e.dim(), vec![rational::scale(&v, t)]).expect("nonzero multiple"))
        .collect()
}

/// Nonzero rational direction with small numerators and denominators.
pub fn random_direction(d: usize, rng: &mut impl rand::Rng) -> QVec {
    loop {
        let v: QVec = (0..d)
            .map(|_| q(rng.random_range(-5..=5i64), rng.random_range(1..=4i64)))
            .collect();
        if v.iter().any(|x| x.is_positive() || x.is_negative()) {
            return v;
        }
    }
}
