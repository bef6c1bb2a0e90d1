//! Brute-force cross-checks.
//!
//! Nothing here touches the polyhedral code: multiplicities come from
//! counting lattice points under the staircase of `I^m`, and threshold
//! intervals from bisection with a Caratheodory-style membership test that
//! enumerates vertices of small feasibility regions.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::input::{Kind, SingularityInput};
use crate::Rational;

/// Largest dimension the counting oracle accepts.
pub const MAX_ORACLE_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Lattice refinement per unit for threshold bisection.
    pub grid_resolution: u32,
    /// Power `m` at which `n! * colength(I^m) / m^n` is evaluated.
    pub power_cap: u32,
    /// Relative tolerance, strictly between 0 and 1.
    pub tolerance: Rational,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_resolution: 64,
            power_cap: 24,
            tolerance: Rational::new(1.into(), 10.into()),
        }
    }
}

impl OracleConfig {
    pub fn with_tolerance(tolerance: Rational) -> Result<Self> {
        if !tolerance.is_positive() || tolerance >= Rational::one() {
            return Err(Error::Unsupported(format!(
                "oracle tolerance must lie in (0, 1), got {tolerance}"
            )));
        }
        Ok(OracleConfig {
            tolerance,
            ..Default::default()
        })
    }
}

type Monomial = Vec<i64>;

fn integer_generators(input: &SingularityInput) -> Result<Vec<Monomial>> {
    if input.kind() != Kind::Ideal {
        return Err(Error::Unsupported("colength needs an ideal input".into()));
    }
    if input.n() > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge {
            n: input.n(),
            max: MAX_ORACLE_DIM,
        });
    }
    let gens: Vec<Monomial> = input
        .generators()
        .iter()
        .map(|g| {
            g.coords()
                .iter()
                .map(|c| c.to_integer().to_i64())
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| Error::Unsupported("exponent too large for the oracle".into()))
        })
        .collect::<Result<_>>()?;
    let n = input.n();
    for j in 0..n {
        let has_power = gens
            .iter()
            .any(|g| g.iter().enumerate().all(|(k, &e)| k == j || e == 0));
        if !has_power {
            return Err(Error::NotPrimary);
        }
    }
    Ok(minimalize(gens))
}

/// Minimal monomial generators: drop every monomial divisible by another.
fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    // after sorting, a divisor always precedes its multiples
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.iter().zip(&g).all(|(a, b)| a <= b)) {
            kept.push(g);
        }
    }
    kept
}

fn multiply(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let prods = a
        .iter()
        .cartesian_product(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect();
    minimalize(prods)
}

/// Number of lattice points of the orthant not divisible by any generator.
/// Requires a pure power on every axis.
fn count_standard(gens: &[Monomial]) -> u64 {
    let k = gens[0].len();
    match k {
        1 => gens.iter().map(|g| g[0]).min().unwrap_or(0) as u64,
        2 => {
            let mut sorted: Vec<(i64, i64)> = gens.iter().map(|g| (g[0], g[1])).collect();
            sorted.sort();
            let bound = sorted
                .iter()
                .filter(|(_, b)| *b == 0)
                .map(|(a, _)| *a)
                .min()
                .expect("pure power on the first axis");
            let mut total = 0u64;
            let mut idx = 0;
            let mut best = i64::MAX;
            for x in 0..bound {
                while idx < sorted.len() && sorted[idx].0 <= x {
                    best = best.min(sorted[idx].1);
                    idx += 1;
                }
                total += best as u64;
            }
            total
        }
        _ => {
            let bound = gens
                .iter()
                .filter(|g| g[1..].iter().all(|&e| e == 0))
                .map(|g| g[0])
                .min()
                .expect("pure power on the first axis");
            (0..bound)
                .map(|x| {
                    let slice: Vec<Monomial> = gens
                        .iter()
                        .filter(|g| g[0] <= x)
                        .map(|g| g[1..].to_vec())
                        .collect();
                    count_standard(&minimalize(slice))
                })
                .sum()
        }
    }
}

/// `colength(I^m)` for `m = 1..=max_power`.
fn colength_series(input: &SingularityInput, max_power: u32) -> Result<Vec<u64>> {
    let base = integer_generators(input)?;
    let mut power = base.clone();
    let mut out = Vec::with_capacity(max_power as usize);
    for m in 1..=max_power {
        if m > 1 {
            power = multiply(&power, &base);
        }
        out.push(count_standard(&power));
    }
    Ok(out)
}

/// `dim O / I^m`: lattice points not componentwise above any generator of
/// `I^m`.
pub fn colength(input: &SingularityInput, m: u32) -> Result<u64> {
    if m == 0 {
        return Ok(0);
    }
    Ok(*colength_series(input, m)?.last().expect("m >= 1"))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n! * colength(I^m) / m^n` at `m = cfg.power_cap`.
pub fn multiplicity_estimate(input: &SingularityInput, cfg: &OracleConfig) -> Result<Rational> {
    let m = cfg.power_cap;
    let count = colength(input, m)?;
    let n = input.n();
    Ok(Rational::new(
        factorial(n) * BigInt::from(count),
        BigInt::from(m).pow(n as u32),
    ))
}

/// `n`-th forward difference of `m -> colength(I^m)` at `m`. Once the
/// Hilbert-Samuel function is polynomial this equals `e(I)` exactly.
pub fn multiplicity_by_differences(input: &SingularityInput, m: u32) -> Result<BigInt> {
    let n = input.n();
    let series = colength_series(input, m + n as u32)?;
    let mut diff = BigInt::zero();
    for i in 0..=n {
        let binom = factorial(n) / (factorial(i) * factorial(n - i));
        let term = binom * BigInt::from(series[(m as usize - 1) + i]);
        if (n - i).is_multiple_of(2) {
            diff += term;
        } else {
            diff -= term;
        }
    }
    Ok(diff)
}

/// Relative error `|estimate - exact| / exact`.
pub fn relative_error(estimate: &Rational, exact: &Rational) -> Rational {
    ((estimate - exact) / exact).abs()
}

fn solve_small(mut rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    // augmented square system
    let n = rows.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, p);
        let inv = rows[c][c].recip();
        for x in rows[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                let pivot = rows[c].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[n].clone()).collect())
}

/// Is there a convex combination of `pts` that is componentwise `<= x`?
/// Decided by enumerating vertices of the feasibility polytope in the
/// barycentric coordinates `mu_1..mu_{k-1}`.
fn dominated_by_hull(pts: &[&Monomial], x: &[Rational]) -> bool {
    let k = pts.len();
    let n = x.len();
    let vars = k - 1;
    let last: Vec<Rational> = pts[k - 1].iter().map(|&v| Rational::from_integer(v.into())).collect();
    // constraints as (coeffs, rhs) meaning coeffs . mu <= rhs
    let mut cons: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for j in 0..n {
        let coeffs = (0..vars)
            .map(|i| Rational::from_integer(pts[i][j].into()) - &last[j])
            .collect();
        cons.push((coeffs, &x[j] - &last[j]));
    }
    for i in 0..vars {
        let mut coeffs = vec![Rational::zero(); vars];
        coeffs[i] = -Rational::one();
        cons.push((coeffs, Rational::zero()));
    }
    cons.push((vec![Rational::one(); vars], Rational::one()));
    let feasible = |mu: &[Rational]| {
        cons.iter().all(|(c, r)| {
            let lhs = c.iter().zip(mu).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
            lhs <= *r
        })
    };
    if vars == 0 {
        return feasible(&[]);
    }
    cons.iter().combinations(vars).any(|tight| {
        let rows = tight
            .iter()
            .map(|(c, r)| {
                let mut row = c.clone();
                row.push(r.clone());
                row
            })
            .collect();
        solve_small(rows).is_some_and(|mu| feasible(&mu))
    })
}

fn member(gens: &[Monomial], x: &[Rational]) -> bool {
    let n = x.len();
    (1..=(n + 1).min(gens.len())).any(|size| {
        gens.iter()
            .combinations(size)
            .any(|subset| dominated_by_hull(&subset, x))
    })
}

/// Interval `[lo, hi]` of width `1 / grid_resolution` containing the
/// smallest `t` with `(t, ..., t)` in the Newton polyhedron, i.e. `1 / c_u`.
pub fn lct_estimate(input: &SingularityInput, cfg: &OracleConfig) -> Result<(Rational, Rational)> {
    let (d, cleared) = input.cleared();
    let gens: Vec<Monomial> = cleared
        .generators()
        .iter()
        .map(|g| {
            g.coords()
                .iter()
                .map(|c| c.to_integer().to_i64())
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| Error::Unsupported("exponent too large for the oracle".into()))
        })
        .collect::<Result<_>>()?;
    let gens = minimalize(gens);
    let n = input.n();
    let res = i64::from(cfg.grid_resolution);
    // grid point k means t = k / (res * d) on the original scale
    let at = |k: i64| -> Vec<Rational> { vec![Rational::new(k.into(), res.into()); n] };
    let upper = gens
        .iter()
        .map(|g| *g.iter().max().unwrap())
        .min()
        .unwrap();
    let (mut lo, mut hi) = (0i64, upper * res);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if member(&gens, &at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let scale = BigInt::from(res) * d;
    Ok((
        Rational::new(lo.into(), scale.clone()),
        Rational::new(hi.into(), scale),
    ))
}

/// Integer ideal of the rescaled generators `d * a`, for feeding weight
/// inputs into the counting oracle.
pub fn as_ideal(input: &SingularityInput) -> Result<(BigInt, SingularityInput)> {
    let (d, cleared) = input.cleared();
    let ideal = SingularityInput::new(cleared.n(), cleared.generators().to_vec(), Kind::Ideal)?;
    Ok((d, ideal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, rows: &[&[i64]]) -> SingularityInput {
        SingularityInput::ideal(n, rows).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn colength_examples() {
        let m = SingularityInput::maximal_power(2, 1).unwrap();
        assert_eq!(colength(&m, 1).unwrap(), 1);
        assert_eq!(colength(&ideal(2, &[&[2, 0], &[0, 3]]), 1).unwrap(), 6);
        let m2 = SingularityInput::maximal_power(2, 2).unwrap();
        assert_eq!(colength(&m2, 1).unwrap(), 3);
        // m^k in three variables: monomials of degree < k
        let m3 = SingularityInput::maximal_power(3, 1).unwrap();
        assert_eq!(colength(&m3, 4).unwrap(), 20);
    }

    #[test]
    fn colength_rejects_non_primary() {
        let err = colength(&ideal(3, &[&[1, 0, 0], &[0, 2, 0]]), 1).unwrap_err();
        assert_eq!(err, Error::NotPrimary);
    }

    #[test]
    fn colength_monotone_in_power() {
        let i = ideal(3, &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 2], &[1, 1, 1]]);
        let series = colength_series(&i, 8).unwrap();
        assert!(series.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn estimates_for_two_variable_staircase() {
        let i = ideal(2, &[&[2, 0], &[0, 3]]);
        let est = multiplicity_estimate(&i, &OracleConfig::default()).unwrap();
        assert!(relative_error(&est, &q(6, 1)) <= q(1, 10));
        assert_eq!(multiplicity_by_differences(&i, 6).unwrap(), BigInt::from(6));
        let m = SingularityInput::maximal_power(2, 1).unwrap();
        assert_eq!(multiplicity_by_differences(&m, 4).unwrap(), BigInt::from(1));
    }

    #[test]
    fn lct_intervals() {
        let cfg = OracleConfig::default();
        let (lo, hi) = lct_estimate(&ideal(3, &[&[1, 0, 0], &[0, 2, 0]]), &cfg).unwrap();
        assert!(lo < q(2, 3) && q(2, 3) <= hi);
        assert!(&hi - &lo <= q(1, 64));
        let (lo, hi) = lct_estimate(&ideal(2, &[&[2, 0], &[0, 3]]), &cfg).unwrap();
        assert!(lo < q(6, 5) && q(6, 5) <= hi);
        let (lo, hi) = lct_estimate(&SingularityInput::maximal_power(3, 2).unwrap(), &cfg).unwrap();
        assert!(lo < q(2, 3) && q(2, 3) <= hi);
    }

    #[test]
    fn tolerance_must_be_proper_fraction() {
        assert!(OracleConfig::with_tolerance(q(1, 5)).is_ok());
        assert!(OracleConfig::with_tolerance(q(0, 1)).is_err());
        assert!(OracleConfig::with_tolerance(q(1, 1)).is_err());
    }
}
