//! Codimension, Lelong number, mixed Monge-Ampere masses and the log
//! canonical threshold of a toric singularity.
//!
//! All quantities are read off the Newton polyhedron `Gamma`:
//!
//! * `nu = e_1` is the minimum of `x_1 + ... + x_n` over `Gamma`;
//! * `l` is the codimension of the zero set, i.e. the size of a minimum
//!   hitting set of the generator supports;
//! * `c_u = 1 / t*` where `(t*, ..., t*)` is the point where the diagonal
//!   enters `Gamma`;
//! * `e_k` are mixed covolumes: for an m-primary polyhedron
//!   `n! covol(a Gamma + b Delta) = sum_k binom(n, k) e_k a^k b^(n-k)`.
//!   Non-primary inputs are first regularized to `max{u, N log|z|}`, whose
//!   masses `e_k`, `k <= l`, become independent of `N` once `N` is large.
//!
//! Rational weights are cleared to integers by their common denominator `d`
//! and the results rescaled by homogeneity (`c -> d c`, `e_k -> e_k / d^k`).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::input::{ExponentVector, SingularityInput};
use crate::linalg;
use crate::lp::{self, LpOutcome, StandardLp};
use crate::newton::{NewtonPolyhedron, MAX_EXACT_DIM};
use crate::Rational;

/// Default cap on the regularization parameter is this multiple of the
/// largest apex coordinate.
pub const DEFAULT_N_MAX_FACTOR: u64 = 1 << 10;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantConfig {
    /// Upper bound for the regularization parameter `N` (on the integer
    /// scale). `None` means `2^10 * max apex coordinate`.
    pub n_max: Option<u64>,
}

/// Exact invariants of one singularity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    pub n: usize,
    /// Codimension of the zero set (of the unbounded locus for weights).
    pub l: usize,
    /// `nu_u = e_1(u)`.
    pub lelong: Rational,
    /// `e_1, ..., e_l`; `e_0 = 1` is implicit.
    pub mixed: Vec<Rational>,
    /// `c_u`.
    pub lct: Rational,
    /// Regularization parameter at which `e_1..e_l` were first seen stable,
    /// on the integer scale of the cleared generators.
    pub n_used: u64,
    /// `e_n(u_N)` at `N = n_used`, i.e. the Hilbert-Samuel multiplicity of
    /// the regularized ideal.
    pub regularized_top: Rational,
    /// Common denominator used to clear rational weights.
    pub denominator: BigInt,
    /// All minimum hitting sets of the generator supports (0-based).
    pub loci: Vec<Vec<usize>>,
}

impl InvariantSet {
    /// `e_k` for `0 <= k <= l`, with `e_0 = 1`.
    pub fn e(&self, k: usize) -> Rational {
        if k == 0 {
            Rational::one()
        } else {
            self.mixed[k - 1].clone()
        }
    }
}

/// `nu = min_a sum_j a_j`, attained at an apex.
pub fn lelong_number(input: &SingularityInput) -> Rational {
    input
        .generators()
        .iter()
        .map(ExponentVector::total)
        .min()
        .expect("inputs are nonempty")
}

/// All coordinate sets of minimum size meeting every generator support.
pub fn minimum_hitting_sets(input: &SingularityInput) -> Vec<Vec<usize>> {
    let n = input.n();
    let supports: Vec<u32> = input.generators().iter().map(ExponentVector::support).collect();
    for size in 1..=n as u32 {
        let hits: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|mask| mask.count_ones() == size)
            .filter(|mask| supports.iter().all(|s| s & mask != 0))
            .map(|mask| (0..n).filter(|j| mask & (1 << j) != 0).collect())
            .collect();
        if !hits.is_empty() {
            return hits;
        }
    }
    unreachable!("the full coordinate set hits every nonzero support")
}

/// Codimension `l` of `V(I)`: the minimum hitting-set size of the supports.
pub fn codimension(input: &SingularityInput) -> usize {
    minimum_hitting_sets(input)[0].len()
}

/// Generators of `max{u, N log|z|}`: the input plus `N e_j` for every `j`.
pub fn regularize(input: &SingularityInput, n_reg: u64) -> Result<SingularityInput> {
    if n_reg == 0 {
        return Err(Error::Unsupported("regularization parameter must be >= 1".into()));
    }
    let n = input.n();
    let big = Rational::from_integer(BigInt::from(n_reg));
    let mut gens = input.generators().to_vec();
    gens.extend((0..n).map(|j| ExponentVector::axis(n, j, big.clone())));
    SingularityInput::new(n, gens, input.kind())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `e_0, ..., e_n` of an m-primary polyhedron, read off the mixed covolume
/// polynomial `P(a, b) = n! covol(a Gamma + b Delta)`.
///
/// `P` is homogeneous of degree `n`, so it is fixed by its values at the
/// `n + 1` points `(a, b) = (i + 1, n + 1 - i)`.
pub fn mixed_polynomial(poly: &NewtonPolyhedron) -> Result<Vec<Rational>> {
    let n = poly.n();
    if n > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_EXACT_DIM });
    }
    if !poly.is_primary() {
        return Err(Error::NotPrimary);
    }
    let simplex = NewtonPolyhedron::standard_simplex(n);
    let nfact = Rational::from_integer(factorial(n));
    let mut rows = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let a = Rational::from_integer(BigInt::from(i + 1));
        let b = Rational::from_integer(BigInt::from(n + 1 - i));
        let covol = poly.scale(&a)?.minkowski_covolume(&simplex.scale(&b)?)?;
        values.push(&nfact * covol);
        rows.push(
            (0..=n)
                .map(|k| {
                    let ak: Rational = num_traits::pow(a.clone(), k);
                    let bk: Rational = num_traits::pow(b.clone(), n - k);
                    ak * bk
                })
                .collect(),
        );
    }
    let coeffs = linalg::solve(&rows, &values).expect("distinct ratios give a Vandermonde system");
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| c / Rational::from_integer(binomial(n, k)))
        .collect())
}

/// Stable mixed masses of a (possibly non-primary) input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMultiplicities {
    /// `e_1, ..., e_l` on the original scale.
    pub values: Vec<Rational>,
    pub n_used: u64,
    /// `e_n(u_N)` at `N = n_used`, original scale.
    pub regularized_top: Rational,
}

fn max_coordinate(poly: &NewtonPolyhedron) -> BigInt {
    poly.apexes()
        .iter()
        .flat_map(|a| a.coords())
        .map(|c| c.to_integer())
        .max()
        .unwrap_or_else(BigInt::one)
}

fn max_total(poly: &NewtonPolyhedron) -> BigInt {
    poly.apexes()
        .iter()
        .map(|a| a.total().ceil().to_integer())
        .max()
        .unwrap_or_else(BigInt::one)
}

/// `e_1, ..., e_l`, obtained from the regularizations `u_N` by doubling `N`
/// until the first `l` masses agree exactly for two consecutive values.
pub fn mixed_multiplicities(
    input: &SingularityInput,
    cfg: &InvariantConfig,
) -> Result<MixedMultiplicities> {
    let n = input.n();
    if n > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_EXACT_DIM });
    }
    if lelong_number(input).is_zero() {
        return Err(Error::ZeroLelong);
    }
    let l = codimension(input);
    let (d, cleared) = input.cleared();
    let base = NewtonPolyhedron::build(&cleared);
    let n_max = match cfg.n_max {
        Some(v) => v,
        None => (max_coordinate(&base) * DEFAULT_N_MAX_FACTOR)
            .to_u64()
            .unwrap_or(u64::MAX),
    };
    let masses_at = |n_reg: u64| -> Result<Vec<Rational>> {
        let reg = regularize(&cleared, n_reg)?;
        mixed_polynomial(&NewtonPolyhedron::build(&reg))
    };

    let mut n_reg = max_total(&base).to_u64().unwrap_or(u64::MAX).max(1);
    if n_reg > n_max {
        return Err(Error::NoStabilization { n_max });
    }
    let mut prev = masses_at(n_reg)?;
    loop {
        let next = n_reg.checked_mul(2).filter(|&v| v <= n_max);
        let Some(next) = next else {
            return Err(Error::NoStabilization { n_max });
        };
        let cur = masses_at(next)?;
        if cur[1..=l] == prev[1..=l] {
            break;
        }
        prev = cur;
        n_reg = next;
    }

    let d = Rational::from_integer(d);
    let rescale = |k: usize, e: &Rational| e / num_traits::pow(d.clone(), k);
    Ok(MixedMultiplicities {
        values: (1..=l).map(|k| rescale(k, &prev[k])).collect(),
        n_used: n_reg,
        regularized_top: rescale(n, &prev[n]),
    })
}

/// Log canonical threshold `c_u = 1 / t*`, with `t*` the optimum of
/// `min t  s.t.  (t, ..., t) in Gamma`.
pub fn lct(input: &SingularityInput) -> Result<Rational> {
    let (d, cleared) = input.cleared();
    let poly = NewtonPolyhedron::build(&cleared);
    let n = poly.n();
    let k = poly.apexes().len();
    // variables: lambda_1..lambda_k, t, s_1..s_n
    let width = k + 1 + n;
    let mut a = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row: Vec<Rational> = poly.apexes().iter().map(|p| p.coords()[j].clone()).collect();
        row.push(-Rational::one());
        row.resize(width, Rational::zero());
        row[k + 1 + j] = Rational::one();
        a.push(row);
    }
    let mut convex = vec![Rational::one(); k];
    convex.resize(width, Rational::zero());
    a.push(convex);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); width];
    c[k] = Rational::one();
    match lp::solve(&StandardLp { a, b, c }) {
        LpOutcome::Optimal { value, .. } if value.is_positive() => {
            Ok(Rational::from_integer(d) / value)
        }
        other => unreachable!("diagonal LP over a valid polyhedron returned {other:?}"),
    }
}

/// Computes every invariant of `input`.
pub fn compute(input: &SingularityInput, cfg: &InvariantConfig) -> Result<InvariantSet> {
    let loci = minimum_hitting_sets(input);
    let mixed = mixed_multiplicities(input, cfg)?;
    Ok(InvariantSet {
        n: input.n(),
        l: loci[0].len(),
        lelong: lelong_number(input),
        mixed: mixed.values,
        lct: lct(input)?,
        n_used: mixed.n_used,
        regularized_top: mixed.regularized_top,
        denominator: input.cleared().0,
        loci,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn ideal(n: usize, rows: &[&[i64]]) -> SingularityInput {
        SingularityInput::ideal(n, rows).unwrap()
    }

    fn worked_example() -> SingularityInput {
        ideal(3, &[&[1, 0, 0], &[0, 2, 0]])
    }

    #[test]
    fn lelong_examples() {
        assert_eq!(lelong_number(&worked_example()), q("1"));
        assert_eq!(lelong_number(&SingularityInput::maximal_power(2, 3).unwrap()), q("3"));
        assert_eq!(lelong_number(&ideal(2, &[&[2, 0], &[0, 3]])), q("2"));
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(codimension(&worked_example()), 2);
        assert_eq!(minimum_hitting_sets(&worked_example()), vec![vec![0, 1]]);
        assert_eq!(codimension(&ideal(2, &[&[2, 0], &[0, 3]])), 2);
        let normal_crossing = ideal(3, &[&[1, 1, 0]]);
        assert_eq!(codimension(&normal_crossing), 1);
        assert_eq!(minimum_hitting_sets(&normal_crossing), vec![vec![0], vec![1]]);
    }

    #[test]
    fn regularize_adds_axis_powers() {
        let reg = regularize(&worked_example(), 2).unwrap();
        let poly = NewtonPolyhedron::build(&reg);
        let expect: Vec<ExponentVector> = vec![
            ExponentVector::from_ints([0, 0, 2]),
            ExponentVector::from_ints([0, 2, 0]),
            ExponentVector::from_ints([1, 0, 0]),
        ];
        assert_eq!(poly.apexes(), expect.as_slice());
        assert!(poly.is_primary());
        assert!(regularize(&worked_example(), 0).is_err());
    }

    #[test]
    fn regularize_with_unit_parameter_contains_simplex() {
        let reg = regularize(&ideal(2, &[&[3, 1]]), 1).unwrap();
        let poly = NewtonPolyhedron::build(&reg);
        assert!(poly.contains(&[q("1/2"), q("1/2")]).unwrap());
        assert_eq!(poly, NewtonPolyhedron::standard_simplex(2));
    }

    #[test]
    fn mixed_polynomial_of_staircase() {
        let poly = NewtonPolyhedron::build(&ideal(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(mixed_polynomial(&poly).unwrap(), vec![q("1"), q("2"), q("6")]);
        let simplex = NewtonPolyhedron::standard_simplex(3);
        assert_eq!(mixed_polynomial(&simplex).unwrap(), vec![q("1"); 4]);
    }

    #[test]
    fn mixed_multiplicity_examples() {
        let cfg = InvariantConfig::default();
        let m = mixed_multiplicities(&SingularityInput::maximal_power(3, 1).unwrap(), &cfg).unwrap();
        assert_eq!(m.values, vec![q("1"); 3]);
        let p = mixed_multiplicities(&worked_example(), &cfg).unwrap();
        assert_eq!(p.values, vec![q("1"), q("2")]);
        // e_3(u_N) = N^{n-l} e_l
        assert_eq!(p.regularized_top, Rational::from_integer((2 * p.n_used).into()));
        let s = mixed_multiplicities(&ideal(2, &[&[2, 0], &[0, 3]]), &cfg).unwrap();
        assert_eq!(s.values, vec![q("2"), q("6")]);
    }

    #[test]
    fn stabilization_cap_is_enforced() {
        let cfg = InvariantConfig { n_max: Some(2) };
        assert!(matches!(
            mixed_multiplicities(&worked_example(), &cfg),
            Err(Error::NoStabilization { n_max: 2 })
        ));
    }

    #[test]
    fn lct_examples() {
        assert_eq!(lct(&worked_example()).unwrap(), q("3/2"));
        assert_eq!(lct(&SingularityInput::maximal_power(3, 2).unwrap()).unwrap(), q("3/2"));
        assert_eq!(lct(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap(), q("5/6"));
        assert_eq!(lct(&ideal(3, &[&[1, 1, 0]])).unwrap(), q("1"));
    }

    #[test]
    fn rational_weights_rescale() {
        let half = worked_example().scaled(&q("1/2")).unwrap();
        let inv = compute(&half, &InvariantConfig::default()).unwrap();
        assert_eq!(inv.lct, q("3"));
        assert_eq!(inv.lelong, q("1/2"));
        assert_eq!(inv.mixed, vec![q("1/2"), q("1/2")]);
        assert_eq!(inv.denominator, BigInt::from(2));
    }
}
