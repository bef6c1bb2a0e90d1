//! Generator data: exponent vectors and validated singularity inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A point of the nonnegative rational orthant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<Rational>);

impl ExponentVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        ExponentVector(coords)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(coords: I) -> Self {
        ExponentVector(
            coords
                .into_iter()
                .map(|c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// `s * e_j` in dimension `n`.
    pub fn axis(n: usize, j: usize, s: Rational) -> Self {
        let mut coords = vec![Rational::zero(); n];
        coords[j] = s;
        ExponentVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    /// Sum of all coordinates (the degree of the monomial).
    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Bitmask of coordinates with a positive entry.
    pub fn support(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .fold(0, |mask, (j, _)| mask | (1 << j))
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scaled(&self, t: &Rational) -> ExponentVector {
        ExponentVector(self.0.iter().map(|c| c * t).collect())
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `u = log|F|` for the monomial generators of an ideal; integer exponents.
    Ideal,
    /// `u = max_i <a_i, log|z|>`; rational coefficients allowed.
    Weight,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Ideal => "ideal",
            Kind::Weight => "weight",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Kind::Ideal),
            "weight" => Ok(Kind::Weight),
            other => Err(Error::Unsupported(format!("unknown kind {other:?}"))),
        }
    }
}

/// A validated singularity: dimension, nonempty generator list and kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityInput {
    n: usize,
    generators: Vec<ExponentVector>,
    kind: Kind,
}

impl SingularityInput {
    pub fn new(n: usize, generators: Vec<ExponentVector>, kind: Kind) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.dim(),
                });
            }
            if g.coords().iter().any(Signed::is_negative) {
                return Err(Error::NegativeCoordinate { index });
            }
            if g.is_zero() {
                return Err(Error::ZeroGenerator(index));
            }
            if kind == Kind::Ideal && !g.is_integral() {
                return Err(Error::NonIntegerExponent { index });
            }
        }
        Ok(SingularityInput { n, generators, kind })
    }

    /// Monomial ideal from integer exponent rows.
    pub fn ideal(n: usize, rows: &[&[i64]]) -> Result<Self> {
        let gens = rows
            .iter()
            .map(|r| ExponentVector::from_ints(r.iter().copied()))
            .collect();
        Self::new(n, gens, Kind::Ideal)
    }

    /// The power `m^s` of the maximal ideal, generated by all monomials of
    /// degree `s`.
    pub fn maximal_power(n: usize, s: u32) -> Result<Self> {
        fn compositions(n: usize, s: u32, prefix: &mut Vec<i64>, out: &mut Vec<ExponentVector>) {
            if prefix.len() + 1 == n {
                prefix.push(i64::from(s));
                out.push(ExponentVector::from_ints(prefix.iter().copied()));
                prefix.pop();
                return;
            }
            for k in (0..=s).rev() {
                prefix.push(i64::from(k));
                compositions(n, s - k, prefix, out);
                prefix.pop();
            }
        }
        let mut gens = Vec::new();
        if n > 0 {
            compositions(n, s, &mut Vec::with_capacity(n), &mut gens);
        }
        Self::new(n, gens, Kind::Ideal)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Same generators with one more appended.
    pub fn with_generator(&self, g: ExponentVector) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(self.n, gens, self.kind)
    }

    /// All generators multiplied by `t > 0`. The result is a weight unless
    /// `t` is a positive integer and the input is an ideal.
    pub fn scaled(&self, t: &Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        let kind = if self.kind == Kind::Ideal && t.is_integer() {
            Kind::Ideal
        } else {
            Kind::Weight
        };
        let gens = self.generators.iter().map(|g| g.scaled(t)).collect();
        Self::new(self.n, gens, kind)
    }

    /// Least common denominator `d` of all coordinates together with the
    /// integral input `d * generators`.
    pub fn cleared(&self) -> (BigInt, SingularityInput) {
        let d = self
            .generators
            .iter()
            .flat_map(|g| g.coords())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        if d.is_one() {
            return (d, self.clone());
        }
        let t = Rational::from_integer(d.clone());
        let gens = self.generators.iter().map(|g| g.scaled(&t)).collect();
        (
            d,
            SingularityInput {
                n: self.n,
                generators: gens,
                kind: self.kind,
            },
        )
    }
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn rejects_zero_generator() {
        let err = SingularityInput::ideal(2, &[&[1, 0], &[0, 0]]).unwrap_err();
        assert_eq!(err, Error::ZeroGenerator(1));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let err = SingularityInput::ideal(3, &[&[1, 0]]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn rejects_fractional_ideal_exponent() {
        let g = ExponentVector::new(vec![q("1/2"), q("0")]);
        assert_eq!(
            SingularityInput::new(2, vec![g.clone()], Kind::Ideal).unwrap_err(),
            Error::NonIntegerExponent { index: 0 }
        );
        assert!(SingularityInput::new(2, vec![g], Kind::Weight).is_ok());
    }

    #[test]
    fn rejects_negative_and_empty() {
        let g = ExponentVector::new(vec![q("-1"), q("2")]);
        assert_eq!(
            SingularityInput::new(2, vec![g], Kind::Weight).unwrap_err(),
            Error::NegativeCoordinate { index: 0 }
        );
        assert_eq!(
            SingularityInput::new(2, vec![], Kind::Weight).unwrap_err(),
            Error::NoGenerators
        );
    }

    #[test]
    fn clearing_denominators() {
        let gens = vec![
            ExponentVector::new(vec![q("1/2"), q("0")]),
            ExponentVector::new(vec![q("0"), q("2/3")]),
        ];
        let input = SingularityInput::new(2, gens, Kind::Weight).unwrap();
        let (d, cleared) = input.cleared();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(cleared.generators()[0], ExponentVector::from_ints([3, 0]));
        assert_eq!(cleared.generators()[1], ExponentVector::from_ints([0, 4]));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(q("3/6"), Rational::new(1.into(), 2.into()));
        assert_eq!(q(" 7 "), Rational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn maximal_power_lists_all_monomials() {
        let m2 = SingularityInput::maximal_power(3, 2).unwrap();
        assert_eq!(m2.generators().len(), 6);
        assert!(m2.generators().iter().all(|g| g.total() == Rational::from_integer(2.into())));
        assert_eq!(SingularityInput::maximal_power(2, 1).unwrap().generators().len(), 2);
        assert!(SingularityInput::maximal_power(2, 0).is_err());
    }

    #[test]
    fn support_mask() {
        assert_eq!(ExponentVector::from_ints([1, 0, 3]).support(), 0b101);
    }
}
