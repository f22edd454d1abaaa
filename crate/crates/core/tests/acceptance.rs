//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ccrlab::classify::{
    equivalent_lattices, pullback_obstruction, random_direction, random_lattice, scaled_family,
};
use ccrlab::cone::Functional;
use ccrlab::config::parse_config;
use ccrlab::fock::UnitSpec;
use ccrlab::grid::GridShift;
use ccrlab::index::{covariance, gns_rank, index_of, interior_points, precedes, sample_units, IndexOptions};
use ccrlab::lattice::Lattice;
use ccrlab::pspace::Growth;
use ccrlab::rational::{coordinates_in, ivec, q, qi, QVec};
use ccrlab::runner::{self, unit_battery, weyl_battery, RunOptions};
use ccrlab::scenario::{generate_family, GridSpec, Scenario, ScenarioSpec};
use ccrlab::shiftrep::{
    cocycle_residual, cocycle_space_dim, commutant_dim, semigroup_generators, AdditiveCocycle, Multiplicity,
    ShiftRep,
};

const EIGEN_REL_TOL: f64 = 1e-9;
const INDEX_TIME_LIMIT: Duration = Duration::from_secs(60);
const MAX_CELLS: usize = 10_000;
const ORTHANT_SLOPE: f64 = 2.0;
const SLOPE_REL_TOL: f64 = 0.05;
const WEYL_FACTOR: f64 = 10.0;
const KERNEL_TOL: f64 = 1e-10;
const CONTROL_MIN: f64 = 1e-6;
const ORACLE_SVD_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quadrant() -> Vec<QVec> {
    vec![ivec(&[1, 0]), ivec(&[0, 1])]
}

fn octant() -> Vec<QVec> {
    vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])]
}

fn scenario(name: &str, cone: Vec<QVec>, e: Option<QVec>, lattice: Vec<QVec>, k: usize) -> Scenario {
    let mut spec = ScenarioSpec::new(name, cone, lattice);
    spec.functional = e;
    spec.k = k;
    spec.seed = 17;
    generate_family(&spec).unwrap_or_else(|err| panic!("{name}: {err}"))
}

fn q2_rank1(k: usize) -> Scenario {
    scenario("q2_rank1", quadrant(), None, vec![ivec(&[1, -1])], k)
}

fn wedge_rank1() -> Scenario {
    scenario(
        "wedge_rank1",
        vec![ivec(&[2, 1]), ivec(&[1, 3])],
        Some(ivec(&[1, 2])),
        vec![ivec(&[2, -1])],
        1,
    )
}

fn index_one_battery() -> Vec<Scenario> {
    vec![
        scenario("d2_n1", quadrant(), None, vec![ivec(&[1, -1])], 1),
        scenario("d2_n2", quadrant(), None, vec![vec![q(1, 2), q(-1, 2)]], 1),
        scenario("d2_n3", quadrant(), None, vec![vec![q(3, 2), q(-3, 2)]], 1),
        scenario("d3_n1", octant(), None, vec![ivec(&[1, -1, 0]), ivec(&[0, 1, -1])], 1),
        scenario("d3_n2", octant(), None, vec![ivec(&[1, -1, 0]), ivec(&[1, 1, -2])], 1),
        scenario(
            "d3_n3",
            octant(),
            None,
            vec![vec![q(1, 2), q(-1, 2), qi(0)], ivec(&[0, 1, -1])],
            1,
        ),
    ]
}

/// Index one with rank stabilization at two interior points.
fn criterion_1() -> Outcome {
    ensure(ccrlab::index::GRAM_REL_TOL == EIGEN_REL_TOL, || "eigen tolerance".into())?;
    let mut notes = Vec::new();
    for s in index_one_battery() {
        ensure(s.window.n_cells() <= MAX_CELLS, || format!("{}: {} cells", s.name, s.window.n_cells()))?;
        let t = Instant::now();
        let r = index_of(&s.pspace, &s.window, &s.ladder, &IndexOptions::new(1, s.seed)).map_err(|e| e.to_string())?;
        let took = t.elapsed();
        ensure(r.index == 1, || format!("{}: index {} ranks {:?}", s.name, r.index, r.ranks))?;
        ensure(r.ranks.iter().all(|&(_, a, b)| a == 1 && b == 1), || {
            format!("{}: ranks {:?}", s.name, r.ranks)
        })?;
        ensure(r.ranks.iter().map(|t| t.0).collect::<Vec<_>>() == [3, 6, 10], || "unit sizes".into())?;
        ensure(!r.degenerate, || format!("{}: points coincide", s.name))?;
        ensure(took < INDEX_TIME_LIMIT, || format!("{}: {took:.1?}", s.name))?;
        notes.push(format!("{} {:.1?}", s.name, took));
    }
    Ok(notes.join(", "))
}

/// Index equals the cocycle-space dimension for k = 1, 2, 3.
fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for k in 1..=3 {
        let s = q2_rank1(k);
        let space = cocycle_space_dim(&s.pspace, k, &[], &s.ladder).map_err(|e| e.to_string())?;
        let r = index_of(&s.pspace, &s.window, &s.ladder, &IndexOptions::new(k, s.seed)).map_err(|e| e.to_string())?;
        ensure(r.index == space.dim && space.dim == k, || {
            format!("k={k}: index {} cocycle dim {}", r.index, space.dim)
        })?;
        notes.push(format!("k={k}: {}={}", r.index, space.dim));
    }
    Ok(notes.join(", "))
}

fn random_combination(gens: &[GridShift], rng: &mut ChaCha8Rng) -> GridShift {
    loop {
        let mut x = gens[0].times(0);
        for g in gens {
            x = x.add(&g.times(rng.random_range(0..=2)));
        }
        if !x.is_zero() {
            return x;
        }
    }
}

/// Cocycle identity with residual exactly zero.
fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total = 0;
    for s in [q2_rank1(1), q2_rank1(2), wedge_rank1()] {
        let rep = ShiftRep::build(&s.pspace, &s.window, Multiplicity::Finite(s.k)).map_err(|e| e.to_string())?;
        let gens = semigroup_generators(&rep);
        for _ in 0..50 {
            let lambda = (0..s.k)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let c = AdditiveCocycle::canonical(lambda);
            let x = random_combination(&gens, &mut rng);
            let y = random_combination(&gens, &mut rng);
            let r = cocycle_residual(&rep, &c, &x, &y).map_err(|e| e.to_string())?;
            ensure(r == 0.0, || format!("{}: residual {r:e} at {x:?}, {y:?}", s.name))?;
            total += 1;
        }
    }
    Ok(format!("{total} pairs, all residuals 0"))
}

fn growth_battery() -> Vec<Scenario> {
    vec![
        scenario("orthant", quadrant(), None, vec![], 1),
        scenario("wedge", vec![ivec(&[2, 1]), ivec(&[1, 3])], None, vec![], 1),
        q2_rank1(1),
        wedge_rank1(),
        scenario("octant_r1a", octant(), None, vec![ivec(&[1, -1, 0])], 1),
        scenario("octant_r1b", octant(), None, vec![ivec(&[1, 1, -2])], 1),
        scenario("octant_r2a", octant(), None, vec![ivec(&[1, -1, 0]), ivec(&[0, 1, -1])], 1),
        scenario(
            "octant_r2b",
            octant(),
            None,
            vec![vec![q(1, 2), q(-1, 2), qi(0)], ivec(&[1, 1, -2])],
            1,
        ),
    ]
}

/// Compact boundary exactly when the measure of A \ aA stays bounded.
fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for s in growth_battery() {
        let (compact, _) = s.pspace.boundary_compact();
        let mask = s.pspace.mask(&s.window).map_err(|e| e.to_string())?;
        let (a, _) = interior_points(&mask, false).map_err(|e| e.to_string())?;
        let g = s.pspace.growth_profile(&a, &s.ladder).map_err(|e| e.to_string())?;
        let bounded = g.class == Growth::Bounded;
        ensure(bounded == compact, || {
            format!("{}: compact {compact} but growth {:?} (slope {:.3})", s.name, g.class, g.slope)
        })?;
        notes.push(format!("{}:{}", s.name, if compact { "compact" } else { "linear" }));
    }
    // Orthant on [0, L]², a = (1, 1): μ_L = 2L - 1.
    let mut spec = ScenarioSpec::new("orthant_slope", quadrant(), vec![]);
    spec.grid = Some(GridSpec {
        y_lo: vec![qi(0), qi(0)],
        y_hi: vec![qi(2), qi(2)],
        h: q(1, 4),
        m: 1,
        ladder: vec![qi(1), qi(2), qi(3), qi(4)],
    });
    let s = generate_family(&spec).map_err(|e| e.to_string())?;
    let a = GridShift::from_point(&ivec(&[1, 1]), &s.window, s.chart()).map_err(|e| e.to_string())?;
    let g = s.pspace.growth_profile(&a, &s.ladder).map_err(|e| e.to_string())?;
    let rel = (g.slope - ORTHANT_SLOPE).abs() / ORTHANT_SLOPE;
    ensure(matches!(g.class, Growth::Linear(_)) && rel <= SLOPE_REL_TOL, || {
        format!("orthant slope {:.4}", g.slope)
    })?;
    Ok(format!("{}; orthant slope {:.4}", notes.join(" "), g.slope))
}

/// Weyl residuals within 10x of their tail bounds; unit checks and controls.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let weyl = weyl_battery(&mut rng, 5).map_err(|e| e.to_string())?;
    let ratios = [
        weyl["worstRelationRatio"].as_f64().unwrap(),
        weyl["worstUnitarityRatio"].as_f64().unwrap(),
        weyl["worstActionRatio"].as_f64().unwrap(),
    ];
    ensure(weyl["pass"] == true, || format!("weyl ratios {ratios:?}"))?;
    ensure(ratios.iter().all(|&r| r <= WEYL_FACTOR), || format!("weyl ratios {ratios:?}"))?;
    let mut worst_unit: f64 = 0.0;
    let mut weakest_control = f64::INFINITY;
    for s in [q2_rank1(1), q2_rank1(2), wedge_rank1()] {
        let u = unit_battery(&s, &mut rng).map_err(|e| e.to_string())?;
        for key in ["semigroup", "intertwining", "vacuumSemigroup", "vacuumIntertwining"] {
            worst_unit = worst_unit.max(u[key].as_f64().unwrap());
        }
        for key in ["controlCharacter", "controlCocycle"] {
            weakest_control = weakest_control.min(u[key].as_f64().unwrap());
        }
    }
    ensure(worst_unit <= KERNEL_TOL, || format!("unit residual {worst_unit:e}"))?;
    ensure(weakest_control > CONTROL_MIN, || format!("control {weakest_control:e}"))?;
    Ok(format!(
        "worst ratios relation {:.3} unitarity {:.3} action {:.3}; units {worst_unit:.1e}; controls >= {weakest_control:.1e}",
        ratios[0], ratios[1], ratios[2]
    ))
}

/// Character-only differences are null; scaling law; norm sandwich.
fn criterion_6() -> Outcome {
    let s = q2_rank1(1);
    let mask = s.pspace.mask(&s.window).map_err(|e| e.to_string())?;
    let (a, b) = interior_points(&mask, true).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // Same cocycle, different characters.
    let coef = vec![Complex64::new(0.4, -0.3)];
    let chars: Vec<UnitSpec> = (0..6)
        .map(|_| {
            UnitSpec::new(
                (0..2).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
                coef.clone(),
            )
        })
        .collect();
    let null_rank = gns_rank(&covariance(&chars, &a, &mask).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .rank;
    ensure(null_rank == 0, || format!("character-only rank {null_rank}"))?;

    let units = sample_units(2, 1, 6, 61);
    let ca = covariance(&units, &a, &mask).map_err(|e| e.to_string())?;
    let mut worst_scale: f64 = 0.0;
    let mut multiples = Vec::new();
    for n in 2..=4 {
        // Stop once n·a's difference set reaches the window edge.
        let cn = match covariance(&units, &a.times(n), &mask) {
            Ok(c) => c,
            Err(_) => break,
        };
        multiples.push(n);
        for i in 0..units.len() {
            for j in 0..units.len() {
                let budget = ca.cell_volume
                    * units[i].cocycle.lambda()[0].norm()
                    * units[j].cocycle.lambda()[0].norm();
                let err = (cn.entries[(i, j)] - ca.entries[(i, j)] * n as f64).norm();
                ensure(err <= budget + 1e-12, || format!("scaling n={n}: {err:e} > {budget:e}"))?;
                worst_scale = worst_scale.max(err / budget);
            }
        }
    }

    ensure(!multiples.is_empty(), || "no multiple of a fits the window".into())?;
    // A second interior point above `a` in the cone order.
    let rep = ShiftRep::build(&s.pspace, &s.window, Multiplicity::Finite(1)).map_err(|e| e.to_string())?;
    let cb = [b]
        .into_iter()
        .chain(semigroup_generators(&rep).iter().map(|g| a.add(g)))
        .filter_map(|y| covariance(&units, &y, &mask).ok())
        .find(|c| c.point != ca.point && precedes(&s.pspace, &ca.point, &c.point))
        .ok_or("no interior point above a")?;
    let (lo, hi, lo_p, hi_p) = (&ca, &cb, &ca.point, &cb.point);
    let n = (2..=50)
        .find(|&n| precedes(&s.pspace, hi_p, &ccrlab::rational::scale(lo_p, &qi(n))))
        .ok_or("no multiple of the smaller point dominates")?;
    for _ in 0..10 {
        let mut f: Vec<Complex64> = (0..units.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mean = f.iter().sum::<Complex64>() / units.len() as f64;
        f.iter_mut().for_each(|z| *z -= mean);
        let (na, nb) = (lo.form(&f).re, hi.form(&f).re);
        // One cell of slack per multiple on the upper side.
        let slack = n as f64 * lo.cell_volume * f.iter().map(|z| z.norm_sqr()).sum::<f64>() * units.len() as f64;
        ensure(na <= nb * (1.0 + 1e-12), || format!("lower sandwich {na} > {nb}"))?;
        ensure(nb <= n as f64 * na + slack, || format!("upper sandwich {nb} > {n}·{na}"))?;
    }
    Ok(format!(
        "character rank 0; scaling n={multiples:?} worst {worst_scale:.3} cells; sandwich factor {n}"
    ))
}

/// Mutual containment: each basis vector has integer coordinates in the other.
fn same_lattice_oracle(a: &Lattice, b: &Lattice) -> bool {
    let inside = |x: &Lattice, y: &Lattice| {
        x.basis().iter().all(|v| {
            coordinates_in(y.basis(), v).is_some_and(|c| c.iter().all(|t| t.is_integer()))
        })
    };
    inside(a, b) && inside(b, a)
}

/// Equivalence classes are HNF classes; witnesses; a pairwise distinct family.
fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();
    for (d, r) in [(2usize, 1usize), (3, 2)] {
        let e = Functional::from_direction(&vec![qi(1); d]).map_err(|e| e.to_string())?;
        let lats: Vec<Lattice> = (0..50).map(|_| random_lattice(&e, r, &mut rng)).collect();
        let mut hnf_classes: BTreeMap<Vec<QVec>, usize> = BTreeMap::new();
        let mut pairs = 0;
        for l in &lats {
            let next = hnf_classes.len();
            hnf_classes.entry(l.hnf().to_vec()).or_insert(next);
        }
        for i in 0..lats.len() {
            for j in i + 1..lats.len() {
                let eq = equivalent_lattices(&lats[i], &lats[j], &e).map_err(|e| e.to_string())?;
                let same_hnf = lats[i].hnf() == lats[j].hnf();
                let oracle = same_lattice_oracle(&lats[i], &lats[j]);
                ensure(eq.equivalent == same_hnf && same_hnf == oracle, || {
                    format!("d={d} pair ({i},{j}): equivalent {} hnf {same_hnf} oracle {oracle}", eq.equivalent)
                })?;
                match (&eq.certificate, eq.equivalent) {
                    (Some(c), false) => ensure(c.is_valid(), || format!("invalid witness for ({i},{j})"))?,
                    (None, false) => return Err(format!("no witness for ({i},{j})")),
                    _ => {}
                }
                pairs += 1;
            }
        }
        notes.push(format!("d={d}: {pairs} pairs, {} classes", hnf_classes.len()));
    }
    let e = Functional::from_direction(&ivec(&[1, 1])).map_err(|e| e.to_string())?;
    let ts: Vec<_> = (1..=50).map(|i| q(i + 6, 7)).collect();
    let family = scaled_family(&e, &ts);
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let eq = equivalent_lattices(&family[i], &family[j], &e).map_err(|e| e.to_string())?;
            ensure(!eq.equivalent, || format!("family members {i}, {j} equivalent"))?;
            ensure(eq.certificate.as_ref().is_some_and(|c| c.is_valid()), || {
                format!("family members {i}, {j}: invalid witness")
            })?;
        }
    }
    notes.push("50-member family pairwise inequivalent".into());
    Ok(notes.join("; "))
}

/// Pullback obstruction for 20 random directions per scenario.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut total = 0;
    for s in index_one_battery().into_iter().chain([wedge_rank1()]) {
        for _ in 0..20 {
            let mu = random_direction(s.dim(), &mut rng);
            let w = pullback_obstruction(&s.lattice, &s.functional, &mu).map_err(|e| e.to_string())?;
            ensure(w.is_valid(), || format!("{}: invalid witness for mu {mu:?}", s.name))?;
            total += 1;
        }
    }
    Ok(format!("{total} witnesses, 0 failures"))
}

/// Brute-force commutant: nullity of the Kronecker-form Sylvester system.
fn kronecker_nullity(rep: &ShiftRep, samples: &[GridShift]) -> usize {
    let n = rep.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let mut rows = Vec::new();
    for x in samples {
        let v = rep.shift(x).unwrap().to_sparse().to_dense();
        for m in [v.clone(), v.transpose()] {
            rows.push(m.transpose().kronecker(&id) - id.kronecker(&m));
        }
    }
    let total: usize = rows.iter().map(|b| b.nrows()).sum();
    let mut a = DMatrix::zeros(total, n * n);
    let mut r0 = 0;
    for b in &rows {
        a.view_mut((r0, 0), (b.nrows(), n * n)).copy_from(b);
        r0 += b.nrows();
    }
    let sv = a.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    n * n - sv.iter().filter(|&&s| s > ORACLE_SVD_TOL * top).count()
}

fn commutant_case(spec: &ScenarioSpec, ks: &[usize], oracle_ks: &[usize]) -> Result<usize, String> {
    let s = generate_family(spec).map_err(|e| e.to_string())?;
    let cells = s.window.n_cells();
    for &k in ks {
        let rep = ShiftRep::build(&s.pspace, &s.window, Multiplicity::Finite(k)).map_err(|e| e.to_string())?;
        let gens = semigroup_generators(&rep);
        let dim = commutant_dim(&rep, &gens).map_err(|e| e.to_string())?;
        ensure(dim == k * k, || format!("{} {cells} cells, k={k}: commutant {dim}", s.name))?;
        if oracle_ks.contains(&k) {
            let oracle = kronecker_nullity(&rep, &gens);
            ensure(oracle == dim, || format!("{} {cells} cells, k={k}: oracle {oracle} vs {dim}", s.name))?;
        }
    }
    Ok(cells)
}

/// Commutant is M_k on grids of 8 to 64 cells, matching the brute-force
/// oracle on the 8-cell line and the 16-cell quotient grid.
fn criterion_9() -> Outcome {
    let mut line = ScenarioSpec::new("half_line", vec![ivec(&[1])], vec![]);
    line.grid = Some(GridSpec {
        y_lo: vec![qi(0)],
        y_hi: vec![qi(2)],
        h: q(1, 4),
        m: 1,
        ladder: vec![qi(1), q(4, 3), q(5, 3), qi(2)],
    });
    let mut cells = vec![commutant_case(&line, &[1, 2, 3], &[1, 2, 3])?];
    // Four torus slots: with two, the half-turn of the torus commutes with
    // every grid shift.
    for (top, oracle) in [(qi(1), &[1usize, 2][..]), (qi(2), &[][..]), (qi(4), &[][..])] {
        let mut spec = ScenarioSpec::new("q2_rank1", quadrant(), vec![ivec(&[1, -1])]);
        spec.grid = Some(GridSpec {
            y_lo: vec![qi(0)],
            y_hi: vec![top],
            h: q(1, 4),
            m: 4,
            ladder: vec![qi(1), q(4, 3), q(5, 3), qi(2)],
        });
        cells.push(commutant_case(&spec, &[1, 2, 3], oracle)?);
    }
    ensure(cells.iter().all(|c| (8..=64).contains(c)), || format!("cells {cells:?}"))?;
    Ok(format!("cells {cells:?} with k = 1, 2, 3; oracle agrees"))
}

const DETERMINISM_SCENARIOS: [&str; 3] = ["q2_rank1.toml", "orthant_nolattice.toml", "q3_rank2.toml"];

/// Identical reports from two runs with the same seed.
fn criterion_10() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    for name in DETERMINISM_SCENARIOS {
        let text = std::fs::read_to_string(format!("{dir}/{name}")).map_err(|e| e.to_string())?;
        let config = parse_config(&text).map_err(|e| e.to_string())?;
        let one = runner::run(&config, None, RunOptions::default()).map_err(|e| e.to_string())?;
        let two = runner::run(&config, None, RunOptions::default()).map_err(|e| e.to_string())?;
        let (a, b) = (
            serde_json::to_string(&one.to_json(false)).unwrap(),
            serde_json::to_string(&two.to_json(false)).unwrap(),
        );
        ensure(a == b, || format!("{name}: reports differ"))?;
        ensure(one.exit_code() == 0, || format!("{name}: exit {}", one.exit_code()))?;
    }
    Ok(format!("{} scenarios byte-identical", DETERMINISM_SCENARIOS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("index one at two interior points", criterion_1),
        ("index equals cocycle dimension", criterion_2),
        ("cocycle identity exact", criterion_3),
        ("compact boundary dichotomy", criterion_4),
        ("Weyl calculus and unit checks", criterion_5),
        ("covariance nulls, scaling, sandwich", criterion_6),
        ("classification by lattice equality", criterion_7),
        ("non-pullback witnesses", criterion_8),
        ("commutant and type I", criterion_9),
        ("determinism", criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
