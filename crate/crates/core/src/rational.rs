//! Exact rational vectors and small dense matrices.
//!
//! Everything here works on `Vec<Q>` rows. Matrices are row-major `Vec<QVec>`;
//! lattice and cone code stores generator/basis vectors as rows as well.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qvec(entries: &[(i64, i64)]) -> QVec {
    entries.iter().map(|&(n, d)| q(n, d)).collect()
}

pub fn ivec(entries: &[i64]) -> QVec {
    entries.iter().map(|&n| qi(n)).collect()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: go through the ratio of f64 approximations.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn to_f64_vec(v: &[Q]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-3.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            other => other.parse().map_err(|_| bad())?,
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_q = Q::new(frac_num, scale);
        let int_q = Q::from_integer(int_part.abs());
        let mag = int_q + frac_q;
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `(p/q, r/s, ...)`.
pub fn format_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn format_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Q], s: &Q) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn norm_sq(a: &[Q]) -> Q {
    dot(a, a)
}

pub fn lcm_of_denominators<'a>(entries: impl IntoIterator<Item = &'a Q>) -> BigInt {
    entries
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a nonzero rational vector to the unique primitive integer vector
/// pointing in the same direction.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let den = lcm_of_denominators(v.iter());
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn primitive_direction(v: &[Q]) -> QVec {
    primitive_integer(v).into_iter().map(Q::from_integer).collect()
}

/// Row-reduces a copy of `rows` and returns (reduced rows, pivot columns).
pub fn rref(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec]) -> usize {
    match rows.first() {
        None => 0,
        Some(first) => rref(rows, first.len()).1.len(),
    }
}

/// Basis of `{x : rows · x = 0}` in `Q^ncols`.
pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn transpose(rows: &[QVec]) -> Vec<QVec> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Gram matrix `G_ij = <v_i|v_j>` of a list of vectors.
pub fn gram(vectors: &[QVec]) -> Vec<QVec> {
    vectors
        .iter()
        .map(|a| vectors.iter().map(|b| dot(a, b)).collect())
        .collect()
}

pub fn inverse(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    let aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[QVec]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &a[c][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

pub fn mat_vec(rows: &[QVec], v: &[Q]) -> QVec {
    rows.iter().map(|r| dot(r, v)).collect()
}

/// Coordinates `c` with `Σ c_i basis_i = x`, or `None` when `x` is outside the span.
pub fn coordinates_in(basis: &[QVec], x: &[Q]) -> Option<QVec> {
    if basis.is_empty() {
        return if is_zero_vec(x) { Some(Vec::new()) } else { None };
    }
    let g = gram(basis);
    let ginv = inverse(&g)?;
    let rhs: QVec = basis.iter().map(|b| dot(b, x)).collect();
    let c = mat_vec(&ginv, &rhs);
    let mut recon = vec![Q::zero(); x.len()];
    for (ci, b) in c.iter().zip(basis) {
        for (r, bj) in recon.iter_mut().zip(b) {
            *r += ci * bj;
        }
    }
    if recon.as_slice() == x {
        Some(c)
    } else {
        None
    }
}

/// Orthogonal (not normalized) rational basis of the span of `vectors`,
/// preserving the order and dropping dependent vectors.
pub fn gram_schmidt(vectors: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let coeff = dot(&w, u) / norm_sq(u);
            w = sub(&w, &scale(u, &coeff));
        }
        if !is_zero_vec(&w) {
            out.push(primitive_direction(&w));
        }
    }
    out
}

pub fn floor_to_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("integer out of i64 range")
}

pub fn ceil_to_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("integer out of i64 range")
}

pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
