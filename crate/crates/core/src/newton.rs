//! Newton polyhedra `conv(generators) + R^n_{>=0}`.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{self, hyperplane_through};
use crate::input::{ExponentVector, SingularityInput};
use crate::lattice;
use crate::linalg::dot;
use crate::lp::{self, StandardLp};
use crate::Rational;

/// Largest ambient dimension for which covolumes are computed exactly.
pub const MAX_EXACT_DIM: usize = 4;

/// A Newton polyhedron stored by its vertex set, sorted lexicographically.
///
/// Construction always reduces to the irredundant apexes, so two polyhedra
/// are equal as sets iff their apex lists are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    n: usize,
    apexes: Vec<ExponentVector>,
}

impl NewtonPolyhedron {
    pub fn build(input: &SingularityInput) -> Self {
        Self::from_points(input.n(), input.generators().to_vec())
    }

    /// Polyhedron generated by arbitrary nonnegative points of `R^n`.
    ///
    /// Panics if `points` is empty or has mixed dimensions; callers validate
    /// through [`SingularityInput`].
    pub fn from_points(n: usize, points: Vec<ExponentVector>) -> Self {
        assert!(!points.is_empty(), "Newton polyhedron needs a generator");
        assert!(points.iter().all(|p| p.dim() == n));
        NewtonPolyhedron {
            n,
            apexes: reduce(points),
        }
    }

    /// `Gamma(m) = conv(e_1, ..., e_n) + R^n_{>=0}`.
    pub fn standard_simplex(n: usize) -> Self {
        let pts = (0..n)
            .map(|j| ExponentVector::axis(n, j, Rational::one()))
            .collect();
        Self::from_points(n, pts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apexes(&self) -> &[ExponentVector] {
        &self.apexes
    }

    /// Exact membership test `x in Gamma`.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let refs: Vec<&ExponentVector> = self.apexes.iter().collect();
        Ok(in_polyhedron(&refs, x))
    }

    pub fn minkowski_sum(&self, other: &NewtonPolyhedron) -> Result<NewtonPolyhedron> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let sums = self
            .apexes
            .iter()
            .cartesian_product(&other.apexes)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Self::from_points(self.n, sums))
    }

    pub fn scale(&self, t: &Rational) -> Result<NewtonPolyhedron> {
        if !t.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        Ok(NewtonPolyhedron {
            n: self.n,
            apexes: self.apexes.iter().map(|a| a.scaled(t)).collect(),
        })
    }

    /// True iff every coordinate axis meets the polyhedron, i.e. the
    /// complement in the orthant is bounded.
    pub fn is_primary(&self) -> bool {
        self.missing_axis().is_none()
    }

    fn missing_axis(&self) -> Option<usize> {
        (0..self.n).find(|&j| !self.apexes.iter().any(|a| a.support() == 1 << j))
    }

    /// Exact volume of `R^n_{>=0} \ Gamma`.
    pub fn covolume(&self) -> Result<Rational> {
        if self.n > MAX_EXACT_DIM {
            return Err(Error::DimensionTooLarge {
                n: self.n,
                max: MAX_EXACT_DIM,
            });
        }
        if let Some(axis) = self.missing_axis() {
            return Err(Error::UnboundedComplement { axis });
        }
        let points: Vec<&[Rational]> = self.apexes.iter().map(|a| a.coords()).collect();
        Ok(covolume_of_points(self.n, &points))
    }

    /// `covol(self + other)` without reducing the sum to its vertices.
    /// Both summands must be primary.
    pub fn minkowski_covolume(&self, other: &NewtonPolyhedron) -> Result<Rational> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.n > MAX_EXACT_DIM {
            return Err(Error::DimensionTooLarge {
                n: self.n,
                max: MAX_EXACT_DIM,
            });
        }
        if let Some(axis) = self.missing_axis().or_else(|| other.missing_axis()) {
            return Err(Error::UnboundedComplement { axis });
        }
        let sums: Vec<ExponentVector> = self
            .apexes
            .iter()
            .cartesian_product(&other.apexes)
            .map(|(a, b)| a.add(b))
            .collect();
        let kept = undominated(sums);
        let points: Vec<&[Rational]> = kept.iter().map(|a| a.coords()).collect();
        Ok(covolume_of_points(self.n, &points))
    }
}

/// LP feasibility: `exists lambda >= 0, sum lambda = 1, sum lambda_i a_i <= x`.
pub(crate) fn in_polyhedron(apexes: &[&ExponentVector], x: &[Rational]) -> bool {
    if apexes.iter().any(|a| a.coords().iter().zip(x).all(|(ai, xi)| ai <= xi)) {
        return true;
    }
    if x.iter().any(Signed::is_negative) {
        return false;
    }
    let n = x.len();
    let k = apexes.len();
    let mut a = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row: Vec<Rational> = apexes.iter().map(|p| p.coords()[j].clone()).collect();
        row.resize(k + n, Rational::zero());
        row[k + j] = Rational::one();
        a.push(row);
    }
    let mut convex = vec![Rational::one(); k];
    convex.resize(k + n, Rational::zero());
    a.push(convex);
    let mut b = x.to_vec();
    b.push(Rational::one());
    let problem = StandardLp {
        a,
        b,
        c: vec![Rational::zero(); k + n],
    };
    lp::solve(&problem).is_feasible()
}

/// Irredundant vertex set of `conv(points) + orthant`, sorted.
/// Covolume of the polyhedron generated by `points`, which may include
/// points that are not vertices.
///
/// The complement is the union of the cones from the origin over the
/// compact facets (those with a strictly positive normal), so the volume
/// is a sum of pyramids `offset * vol(projected facet) / (n * w_n)`.
fn covolume_of_points(n: usize, points: &[&[Rational]]) -> Rational {
    if let Some(v) = lattice::to_lattice(points).and_then(|lat| lattice::scaled_covolume(n, &lat)) {
        let fact: u64 = (1..=n as u64).product();
        return v / Rational::from_integer(fact.into());
    }
    rational_covolume(n, points)
}

fn rational_covolume(n: usize, points: &[&[Rational]]) -> Rational {
    let dim = Rational::from_integer(n.into());
    let mut seen: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut total = Rational::zero();
    for combo in (0..points.len()).combinations(n) {
        let refs: Vec<&[Rational]> = combo.iter().map(|&i| points[i]).collect();
        if seen
            .iter()
            .any(|(w, h)| refs.iter().all(|p| dot(w, p) == *h))
        {
            continue;
        }
        let Some((mut normal, mut offset)) = hyperplane_through(&refs) else {
            continue;
        };
        if normal[0].is_negative() {
            normal.iter_mut().for_each(|w| *w = -w.clone());
            offset = -offset;
        }
        // compact facets need a strictly positive normal
        if !normal.iter().all(Signed::is_positive) || !offset.is_positive() {
            continue;
        }
        if points.iter().any(|p| dot(&normal, p) < offset) {
            continue;
        }
        let on_facet: Vec<Vec<Rational>> = points
            .iter()
            .filter(|p| dot(&normal, p) == offset)
            .map(|p| p.to_vec())
            .collect();
        let refs: Vec<&Vec<Rational>> = on_facet.iter().collect();
        let base = hull::volume(&hull::project(&refs, n - 1));
        total += &offset * base / (&dim * &normal[n - 1]);
        seen.push((normal, offset));
    }
    total
}

/// Sorted, deduplicated points with every point that dominates another
/// one removed; such points are never vertices.
fn undominated(mut points: Vec<ExponentVector>) -> Vec<ExponentVector> {
    points.sort();
    points.dedup();
    let mut kept: Vec<ExponentVector> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let dominated = points
            .iter()
            .enumerate()
            .any(|(k, q)| k != i && p.dominates(q));
        if !dominated {
            kept.push(p.clone());
        }
    }
    kept
}

fn reduce(points: Vec<ExponentVector>) -> Vec<ExponentVector> {
    let mut kept = undominated(points);
    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        let others: Vec<&ExponentVector> = kept
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, p)| p)
            .collect();
        if in_polyhedron(&others, kept[i].coords()) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    fn poly(n: usize, rows: &[&[i64]]) -> NewtonPolyhedron {
        NewtonPolyhedron::build(&SingularityInput::ideal(n, rows).unwrap())
    }

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from_ints(v.iter().copied())
    }

    #[test]
    fn build_drops_point_above_segment() {
        let p = poly(2, &[&[2, 0], &[0, 3], &[1, 2]]);
        assert_eq!(p.apexes(), &[ev(&[0, 3]), ev(&[2, 0])]);
    }

    #[test]
    fn build_keeps_single_and_axis_generators() {
        assert_eq!(poly(2, &[&[1, 0]]).apexes(), &[ev(&[1, 0])]);
        let p = poly(3, &[&[1, 0, 0], &[0, 2, 0]]);
        assert_eq!(p.apexes(), &[ev(&[0, 2, 0]), ev(&[1, 0, 0])]);
    }

    #[test]
    fn build_keeps_boundary_vertex() {
        // (1,1) lies strictly below the segment 3x + 2y = 6? 3 + 2 = 5 < 6
        let p = poly(2, &[&[2, 0], &[0, 3], &[1, 1]]);
        assert_eq!(p.apexes().len(), 3);
        // (1, 3/2) is on the segment, hence redundant
        let gens = vec![ev(&[2, 0]), ev(&[0, 3]), ExponentVector::new(qs(&["1", "3/2"]))];
        assert_eq!(NewtonPolyhedron::from_points(2, gens).apexes().len(), 2);
    }

    #[test]
    fn membership_examples() {
        let p = poly(2, &[&[2, 0], &[0, 3]]);
        assert!(p.contains(&qs(&["1", "3/2"])).unwrap());
        assert!(!p.contains(&qs(&["1", "1"])).unwrap());
        assert!(p.contains(&qs(&["7", "0"])).unwrap());
        let p3 = poly(3, &[&[1, 0, 0], &[0, 2, 0]]);
        assert!(!p3.contains(&qs(&["0", "0", "5"])).unwrap());
        assert!(matches!(
            p3.contains(&qs(&["1", "1"])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minkowski_examples() {
        let s = poly(2, &[&[1, 0]]).minkowski_sum(&poly(2, &[&[0, 1]])).unwrap();
        assert_eq!(s.apexes(), &[ev(&[1, 1])]);

        // pairwise sums (3,0),(2,1),(1,3),(0,4); (1,3) lies above the
        // segment from (2,1) to (0,4) (3x + 2y >= 8 gives 9 >= 8)
        let t = poly(2, &[&[2, 0], &[0, 3]])
            .minkowski_sum(&poly(2, &[&[1, 0], &[0, 1]]))
            .unwrap();
        assert_eq!(t.apexes(), &[ev(&[0, 4]), ev(&[2, 1]), ev(&[3, 0])]);
    }

    #[test]
    fn scale_examples() {
        let p = poly(2, &[&[1, 1]]);
        assert_eq!(p.scale(&q("2")).unwrap().apexes(), &[ev(&[2, 2])]);
        assert_eq!(p.scale(&q("1")).unwrap(), p);
        assert_eq!(p.scale(&q("0")).unwrap_err(), Error::NonPositiveScale);
        assert_eq!(p.scale(&q("-1")).unwrap_err(), Error::NonPositiveScale);
    }

    #[test]
    fn covolume_examples() {
        for n in 1..=4 {
            let simplex = NewtonPolyhedron::standard_simplex(n);
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(simplex.covolume().unwrap(), Rational::new(1.into(), fact.into()));
            let s = 3i64;
            let scaled = simplex.scale(&q("3")).unwrap();
            assert_eq!(
                scaled.covolume().unwrap(),
                Rational::new(s.pow(n as u32).into(), fact.into())
            );
        }
        assert_eq!(poly(2, &[&[2, 0], &[0, 3]]).covolume().unwrap(), q("3"));
        // staircase with a vertex: (4,0),(1,1),(0,4)
        // triangles (0,0)-(4,0)-(1,1) and (0,0)-(1,1)-(0,4): 2 + 2
        assert_eq!(poly(2, &[&[4, 0], &[1, 1], &[0, 4]]).covolume().unwrap(), q("4"));
    }

    #[test]
    fn covolume_errors() {
        let p = poly(3, &[&[1, 0, 0], &[0, 2, 0]]);
        assert_eq!(p.covolume().unwrap_err(), Error::UnboundedComplement { axis: 2 });
        let big = NewtonPolyhedron::standard_simplex(5);
        assert_eq!(
            big.covolume().unwrap_err(),
            Error::DimensionTooLarge { n: 5, max: 4 }
        );
    }

    #[test]
    fn lattice_and_rational_covolumes_agree() {
        let sets: [&[&[i64]]; 6] = [
            &[&[2, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2], &[1, 1, 1, 1]],
            &[&[4, 0, 0, 0], &[0, 4, 0, 0], &[0, 0, 4, 0], &[0, 0, 0, 4], &[1, 1, 1, 0], &[0, 1, 2, 1]],
            &[&[3, 0, 0], &[0, 5, 0], &[0, 0, 2], &[1, 1, 1], &[2, 2, 0]],
            &[&[6, 0, 0], &[0, 6, 0], &[0, 0, 6], &[1, 2, 1], &[3, 0, 1], &[0, 1, 4]],
            &[&[7, 0], &[0, 4], &[2, 1], &[1, 3]],
            &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 9], &[1, 1, 3]],
        ];
        for rows in sets {
            let pts: Vec<ExponentVector> = rows.iter().map(|r| ev(r)).collect();
            let refs: Vec<&[Rational]> = pts.iter().map(|p| p.coords()).collect();
            let n = refs[0].len();
            assert_eq!(covolume_of_points(n, &refs), rational_covolume(n, &refs), "{rows:?}");
        }
    }

    #[test]
    fn covolume_three_dim_with_mixed_vertex() {
        // (1,1,1) has sum 3 > 2, above the simplex face: covolume of
        // 2*Delta is 8/6
        let p = poly(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 1]]);
        assert_eq!(p.apexes().len(), 3);
        assert_eq!(p.covolume().unwrap(), q("4/3"));
        // (1,1,0) sits on the face x + y + z = 2 and is redundant
        let r = poly(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0]]);
        assert_eq!(r.covolume().unwrap(), q("4/3"));
        let s = poly(3, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[1, 1, 1]]);
        // cones over the three faces through (1,1,1): each det = 16, volume 16/6
        assert_eq!(s.covolume().unwrap(), q("8"));
    }
}
