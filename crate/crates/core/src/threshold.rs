//! The `E_k` / `F_k` lower-bound ladder for `c_u` and the equality diagnosis.
//!
//! For `k <= l` the bounds are
//!
//! ```text
//! E_k = sum_{j=1..k} e_{j-1} / e_j        F_k = k * e_k^(-1/k)
//! ```
//!
//! and every valid instance satisfies `c >= E_l >= E_k >= F_k`. `F_k` is
//! never evaluated as a real number: `x >= F_k` is decided through the
//! equivalent rational test `x^k * e_k >= k^k`.
//!
//! Equality `c = F_k` can only happen at `k = l`, and then the Newton
//! polyhedron must be `s * conv(e_j : j in J) + orthant` for the unique
//! minimum hitting set `J` and `s = e_1`. Any failure of these implications
//! is reported as a [`Defect`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::input::{ExponentVector, Kind, SingularityInput};
use crate::invariants::{self, InvariantConfig, InvariantSet};
use crate::newton::NewtonPolyhedron;
use crate::Rational;

/// A violated theorem-level implication. Valid inputs never produce one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `c >= E_k`
    LctAboveE,
    /// `c >= F_k`
    LctAboveF,
    /// `E_k >= F_k`
    EAboveF,
    /// `E_l >= E_k`
    TopEAboveE,
    /// `e_k >= e_1^k`
    MassAbovePower,
}

impl Relation {
    pub fn describe(self, k: usize, l: usize) -> String {
        match self {
            Relation::LctAboveE => format!("c >= E_{k}"),
            Relation::LctAboveF => format!("c >= F_{k}"),
            Relation::EAboveF => format!("E_{k} >= F_{k}"),
            Relation::TopEAboveE => format!("E_{l} >= E_{k}"),
            Relation::MassAbovePower => format!("e_{k} >= e_1^{k}"),
        }
    }
}

/// One certified comparison `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub relation: Relation,
    pub k: usize,
    pub holds: bool,
    /// `lhs == rhs`.
    pub tight: bool,
    /// The rational comparison actually performed, e.g. `"9/2 >= 4"`.
    pub certificate: String,
}

/// `F_k = k * e_k^(-1/k)`, kept symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FBound {
    pub k: usize,
    pub e_k: Rational,
}

impl FBound {
    /// Compares `x` with `F_k` via `x^k * e_k` against `k^k`; also returns
    /// the two sides.
    pub fn compare(&self, x: &Rational) -> (Ordering, Rational, Rational) {
        let lhs = num_traits::pow(x.clone(), self.k) * &self.e_k;
        let kk = Rational::from_integer(BigInt::from(self.k).pow(self.k as u32));
        (lhs.cmp(&kk), lhs, kk)
    }

    /// Floating-point value, for display only.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        let e = self.e_k.to_f64().unwrap_or(f64::NAN);
        self.k as f64 * e.powf(-1.0 / self.k as f64)
    }
}

/// Witness of `Gamma = s * conv(e_j : j in J) + orthant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityStructure {
    /// Coordinate set `J`, 0-based.
    pub coords: Vec<usize>,
    pub s: Rational,
}

impl EqualityStructure {
    pub fn apexes(&self, n: usize) -> Vec<ExponentVector> {
        let mut v: Vec<ExponentVector> = self
            .coords
            .iter()
            .map(|&j| ExponentVector::axis(n, j, self.s.clone()))
            .collect();
        v.sort();
        v
    }
}

impl fmt::Display for EqualityStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js: Vec<String> = self.coords.iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "J = {{{}}}, s = {}", js.join(","), self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    pub invariants: InvariantSet,
    /// `E_1, ..., E_l`.
    pub e_bounds: Vec<Rational>,
    /// `F_1, ..., F_l`.
    pub f_bounds: Vec<FBound>,
    pub verdicts: Vec<Verdict>,
    /// Values of `k` for which `c = F_k` holds exactly.
    pub equality_at: Vec<usize>,
    pub equality: Option<EqualityStructure>,
    /// Witness found by the lct-free closure test.
    pub closure: Option<EqualityStructure>,
    pub defects: Vec<Defect>,
}

impl ThresholdReport {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn equality_holds(&self) -> bool {
        self.equality_at.contains(&self.invariants.l)
    }
}

fn verdict(relation: Relation, k: usize, ord: Ordering, lhs: &Rational, rhs: &Rational) -> Verdict {
    Verdict {
        relation,
        k,
        holds: ord != Ordering::Less,
        tight: ord == Ordering::Equal,
        certificate: format!("{lhs} {} {rhs}", if ord == Ordering::Less { "<" } else { ">=" }),
    }
}

/// `E_k` for `k = 1..=l`.
pub fn e_ladder(inv: &InvariantSet) -> Vec<Rational> {
    let mut acc = Rational::zero();
    (1..=inv.l)
        .map(|k| {
            acc += inv.e(k - 1) / inv.e(k);
            acc.clone()
        })
        .collect()
}

/// Evaluates and certifies every inequality of the ladder. Violations are
/// recorded as defects on the returned report.
pub fn bound_ladder(inv: &InvariantSet) -> Result<ThresholdReport> {
    if inv.lelong.is_zero() || inv.mixed.iter().any(Zero::is_zero) {
        return Err(Error::ZeroLelong);
    }
    let l = inv.l;
    let c = &inv.lct;
    let e_bounds = e_ladder(inv);
    let f_bounds: Vec<FBound> = (1..=l)
        .map(|k| FBound {
            k,
            e_k: inv.e(k),
        })
        .collect();
    let top = &e_bounds[l - 1];
    let mut verdicts = Vec::new();
    let mut defects = Vec::new();
    if inv.mixed[0] != inv.lelong {
        defects.push(Defect {
            check: "lelong",
            detail: format!("e_1 = {} differs from nu = {}", inv.mixed[0], inv.lelong),
        });
    }
    for k in 1..=l {
        let ek = &e_bounds[k - 1];
        let f = &f_bounds[k - 1];
        verdicts.push(verdict(Relation::LctAboveE, k, c.cmp(ek), c, ek));
        let (ord, lhs, rhs) = f.compare(c);
        verdicts.push(verdict(Relation::LctAboveF, k, ord, &lhs, &rhs));
        let (ord, lhs, rhs) = f.compare(ek);
        verdicts.push(verdict(Relation::EAboveF, k, ord, &lhs, &rhs));
        verdicts.push(verdict(Relation::TopEAboveE, k, top.cmp(ek), top, ek));
        let power = num_traits::pow(inv.lelong.clone(), k);
        let mass = inv.e(k);
        verdicts.push(verdict(Relation::MassAbovePower, k, mass.cmp(&power), &mass, &power));
        if k < l && top <= ek {
            defects.push(Defect {
                check: "ladder",
                detail: format!("E_{l} = {top} is not strictly above E_{k} = {ek}"),
            });
        }
    }
    for v in verdicts.iter().filter(|v| !v.holds) {
        defects.push(Defect {
            check: "ladder",
            detail: format!("{} fails: {}", v.relation.describe(v.k, l), v.certificate),
        });
    }
    for w in e_bounds.windows(2) {
        if w[1] <= w[0] {
            defects.push(Defect {
                check: "ladder",
                detail: format!("E is not strictly increasing: {} then {}", w[0], w[1]),
            });
        }
    }
    let equality_at = f_bounds
        .iter()
        .filter(|f| f.compare(c).0 == Ordering::Equal)
        .map(|f| f.k)
        .collect();
    Ok(ThresholdReport {
        invariants: inv.clone(),
        e_bounds,
        f_bounds,
        verdicts,
        equality_at,
        equality: None,
        closure: None,
        defects,
    })
}

/// Decides `c = F_l` and, when it holds, builds and checks the witness
/// `(J, s)`. Returns the witness together with any broken implication.
pub fn equality_test(
    input: &SingularityInput,
    inv: &InvariantSet,
) -> (Option<EqualityStructure>, Vec<Defect>) {
    let l = inv.l;
    let mut defects = Vec::new();
    for k in 1..=l {
        let f = FBound { k, e_k: inv.e(k) };
        if k < l && f.compare(&inv.lct).0 == Ordering::Equal {
            defects.push(Defect {
                check: "equality",
                detail: format!("c = F_{k} below the codimension l = {l}"),
            });
        }
    }
    let top = FBound { k: l, e_k: inv.e(l) };
    if top.compare(&inv.lct).0 != Ordering::Equal {
        return (None, defects);
    }

    if inv.loci.len() != 1 {
        defects.push(Defect {
            check: "equality",
            detail: format!("c = F_{l} but the minimum hitting set is not unique ({} choices)", inv.loci.len()),
        });
        return (None, defects);
    }
    let witness = EqualityStructure {
        coords: inv.loci[0].clone(),
        s: inv.lelong.clone(),
    };
    let s = &witness.s;
    if input.kind() == Kind::Ideal && !s.is_integer() {
        defects.push(Defect {
            check: "equality",
            detail: format!("ideal input with non-integral power s = {s}"),
        });
    }
    for k in 1..=l {
        let forced = num_traits::pow(s.clone(), k);
        if inv.e(k) != forced {
            defects.push(Defect {
                check: "equality",
                detail: format!("e_{k} = {} but e_1^{k} = {forced}", inv.e(k)),
            });
        }
    }
    for (i, g) in input.generators().iter().enumerate() {
        let partial = witness
            .coords
            .iter()
            .fold(Rational::zero(), |acc, &j| acc + &g.coords()[j]);
        if partial < *s {
            defects.push(Defect {
                check: "equality",
                detail: format!("generator {i} has sum {partial} over J, below s = {s}"),
            });
        }
    }
    let (d, cleared) = input.cleared();
    let poly = NewtonPolyhedron::build(&cleared);
    let scaled = EqualityStructure {
        coords: witness.coords.clone(),
        s: s * Rational::from_integer(d),
    };
    if poly.apexes() != scaled.apexes(input.n()).as_slice() {
        defects.push(Defect {
            check: "equality",
            detail: format!("Newton polyhedron is not s * Delta_J + orthant for {witness}"),
        });
    }
    (Some(witness), defects)
}

/// Checks, without using the threshold, whether `Gamma = s * Delta_J +
/// orthant` for some coordinate set `J` and `s > 0`.
///
/// Meant for ideals (where `s` is then an integer); rational weights are
/// accepted and may produce a rational `s`.
pub fn closure_power_test(input: &SingularityInput) -> Option<EqualityStructure> {
    let poly = NewtonPolyhedron::build(input);
    let apexes = poly.apexes();
    let mask = apexes.iter().fold(0u32, |m, a| m | a.support());
    let coords: Vec<usize> = (0..input.n()).filter(|j| mask & (1 << j) != 0).collect();
    let s = apexes[0].total();
    if apexes.iter().any(|a| a.total() != s) {
        return None;
    }
    for &j in &coords {
        let corner = ExponentVector::axis(input.n(), j, s.clone());
        if !poly.contains(corner.coords()).expect("same dimension") {
            return None;
        }
    }
    Some(EqualityStructure { coords, s })
}

/// Runs the whole pipeline: invariants, ladder, equality diagnosis and the
/// independent closure test, collecting defects on the report.
pub fn analyze(input: &SingularityInput, cfg: &InvariantConfig) -> Result<ThresholdReport> {
    let inv = invariants::compute(input, cfg)?;
    let mut report = bound_ladder(&inv)?;
    let (equality, defects) = equality_test(input, &inv);
    report.defects.extend(defects);
    let closure = closure_power_test(input);
    if closure != equality {
        report.defects.push(Defect {
            check: "cross-validation",
            detail: format!(
                "equality test gives {} but closure test gives {}",
                describe(&equality),
                describe(&closure)
            ),
        });
    }
    report.equality = equality;
    report.closure = closure;
    Ok(report)
}

fn describe(w: &Option<EqualityStructure>) -> String {
    w.as_ref()
        .map_or_else(|| "none".to_string(), ToString::to_string)
}

/// True iff the threshold-based equality test and the closure test agree
/// (both negative, or both positive with the same witness).
pub fn cross_validate_equality(input: &SingularityInput, cfg: &InvariantConfig) -> Result<bool> {
    let inv = invariants::compute(input, cfg)?;
    let (equality, _) = equality_test(input, &inv);
    Ok(equality == closure_power_test(input))
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

    fn run(input: &SingularityInput) -> ThresholdReport {
        analyze(input, &InvariantConfig::default()).unwrap()
    }

    fn find(r: &ThresholdReport, rel: Relation, k: usize) -> &Verdict {
        r.verdicts.iter().find(|v| v.relation == rel && v.k == k).unwrap()
    }

    #[test]
    fn worked_example_ladder() {
        let r = run(&ideal(3, &[&[1, 0, 0], &[0, 2, 0]]));
        assert!(r.is_clean(), "{:?}", r.defects);
        assert_eq!(r.e_bounds, vec![q("1"), q("3/2")]);
        let f2 = find(&r, Relation::LctAboveF, 2);
        assert!(f2.holds && !f2.tight);
        assert_eq!(f2.certificate, "9/2 >= 4");
        assert!(find(&r, Relation::LctAboveE, 2).tight);
        assert!(r.equality.is_none() && r.closure.is_none());
        assert!(r.equality_at.is_empty());
    }

    #[test]
    fn maximal_ideal_is_tight_everywhere() {
        let r = run(&SingularityInput::maximal_power(3, 1).unwrap());
        assert!(r.is_clean());
        assert_eq!(r.e_bounds[2], q("3"));
        assert!(find(&r, Relation::LctAboveF, 3).tight);
        assert!(find(&r, Relation::LctAboveE, 3).tight);
        assert_eq!(r.equality_at, vec![3]);
        assert_eq!(
            r.equality,
            Some(EqualityStructure {
                coords: vec![0, 1, 2],
                s: q("1")
            })
        );
    }

    #[test]
    fn staircase_tight_at_e_only() {
        let r = run(&ideal(2, &[&[2, 0], &[0, 3]]));
        assert!(r.is_clean());
        assert_eq!(r.e_bounds[1], q("5/6"));
        assert!(find(&r, Relation::LctAboveE, 2).tight);
        let f2 = find(&r, Relation::LctAboveF, 2);
        assert!(!f2.tight);
        assert_eq!(f2.certificate, "25/6 >= 4");
        assert!(r.equality.is_none());
    }

    #[test]
    fn scaled_coordinate_simplex_in_three_space() {
        for s in 1..=3i64 {
            let r = run(&ideal(3, &[&[s, 0, 0], &[0, s, 0]]));
            assert!(r.is_clean(), "{:?}", r.defects);
            let inv = &r.invariants;
            assert_eq!(inv.mixed, vec![q(&s.to_string()), q(&(s * s).to_string())]);
            assert_eq!(inv.lct, Rational::new(2.into(), s.into()));
            assert_eq!(
                r.equality,
                Some(EqualityStructure {
                    coords: vec![0, 1],
                    s: Rational::from_integer(s.into())
                })
            );
        }
    }

    #[test]
    fn closure_test_examples() {
        let w = closure_power_test(&ideal(3, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]])).unwrap();
        assert_eq!(w.coords, vec![0, 1]);
        assert_eq!(w.s, q("2"));
        assert!(closure_power_test(&ideal(2, &[&[2, 0], &[0, 3]])).is_none());
        let p = closure_power_test(&ideal(4, &[&[1, 0, 0, 0]])).unwrap();
        assert_eq!((p.coords, p.s), (vec![0], q("1")));
        // all apexes on x + y = 2 but the corner (0,2) is missing
        assert!(closure_power_test(&ideal(2, &[&[2, 0], &[1, 1]])).is_none());
    }

    #[test]
    fn cross_validation_examples() {
        let cfg = InvariantConfig::default();
        assert!(cross_validate_equality(&ideal(3, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]]), &cfg).unwrap());
        assert!(cross_validate_equality(&ideal(3, &[&[1, 0, 0], &[0, 2, 0]]), &cfg).unwrap());
        assert!(cross_validate_equality(&SingularityInput::maximal_power(2, 3).unwrap(), &cfg).unwrap());
    }

    #[test]
    fn non_primary_normal_crossing() {
        // z1 z2 in C^3: l = 1, nu = 2, c = 1, no equality (c * e_1 = 2 != 1)
        let r = run(&ideal(3, &[&[1, 1, 0]]));
        assert!(r.is_clean());
        assert_eq!(r.invariants.l, 1);
        assert_eq!(r.invariants.mixed, vec![q("2")]);
        assert_eq!(r.invariants.lct, q("1"));
        assert!(r.equality.is_none());
    }

    #[test]
    fn equality_test_flags_inconsistent_invariants() {
        let input = ideal(2, &[&[2, 0], &[0, 3]]);
        let mut inv = invariants::compute(&input, &InvariantConfig::default()).unwrap();
        // forge c = F_2 with a polyhedron that is not a scaled simplex
        inv.mixed[1] = q("4");
        inv.lct = q("1");
        let (w, defects) = equality_test(&input, &inv);
        assert!(w.is_some());
        assert!(!defects.is_empty());
    }

    #[test]
    fn f_bound_comparison() {
        let f = FBound { k: 2, e_k: q("2") };
        assert_eq!(f.compare(&q("3/2")).0, Ordering::Greater);
        assert_eq!(f.compare(&q("1")).0, Ordering::Less);
        assert!((f.approx() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}
