//! Facets and exact volumes of small convex hulls.
//!
//! Facets are found by brute force over `d`-subsets of the points, which is
//! fine for the handful of vertices that occur here. Volumes are computed by
//! pulling: pick a point `p` and sum the pyramids over all facets not
//! containing it, recursing on each facet after projecting out one coordinate.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::linalg::{dot, kernel_line};
use crate::Rational;

/// Supporting hyperplane `normal . x = offset` with every point on the side
/// `normal . x >= offset`; `members` indexes the points lying on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    pub members: Vec<usize>,
}

/// Hyperplane through `d` points of `R^d`, scaled so that its first nonzero
/// normal coordinate is `+-1`. `None` if the points are affinely dependent.
pub(crate) fn hyperplane_through(points: &[&[Rational]]) -> Option<(Vec<Rational>, Rational)> {
    let d = points.first()?.len();
    let base = points[0];
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(x, b)| x - b).collect())
        .collect();
    let mut normal = kernel_line(rows, d)?;
    let lead = normal.iter().find(|x| !x.is_zero())?.abs();
    for x in normal.iter_mut() {
        *x /= &lead;
    }
    let offset = dot(&normal, base);
    Some((normal, offset))
}

/// Orients a hyperplane so all points are on its nonnegative side, returning
/// the indices of points on it, or `None` if it separates the points.
fn orient(
    points: &[Vec<Rational>],
    normal: &mut [Rational],
    offset: &mut Rational,
) -> Option<Vec<usize>> {
    let mut sign = 0i8;
    let mut members = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let v = dot(normal, p) - &*offset;
        if v.is_zero() {
            members.push(i);
            continue;
        }
        let s = if v.is_positive() { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return None;
        }
    }
    if sign < 0 {
        for x in normal.iter_mut() {
            *x = -x.clone();
        }
        *offset = -offset.clone();
    }
    Some(members)
}

/// All facets of `conv(points)` in `R^d`. Returns an empty list when the
/// hull is not full-dimensional.
pub fn facets(points: &[Vec<Rational>]) -> Vec<Facet> {
    let Some(d) = points.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut found: Vec<Facet> = Vec::new();
    for combo in (0..points.len()).combinations(d) {
        if found
            .iter()
            .any(|f| combo.iter().all(|i| f.members.binary_search(i).is_ok()))
        {
            continue;
        }
        let refs: Vec<&[Rational]> = combo.iter().map(|&i| points[i].as_slice()).collect();
        let Some((mut normal, mut offset)) = hyperplane_through(&refs) else {
            continue;
        };
        let Some(members) = orient(points, &mut normal, &mut offset) else {
            continue;
        };
        if members.len() == points.len() {
            // every point on one hyperplane: lower-dimensional hull
            return Vec::new();
        }
        found.push(Facet {
            normal,
            offset,
            members,
        });
    }
    found
}

/// Drops coordinate `j` from each point.
pub(crate) fn project(points: &[&Vec<Rational>], j: usize) -> Vec<Vec<Rational>> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Exact `d`-dimensional volume of `conv(points)`; zero if degenerate.
pub fn volume(points: &[Vec<Rational>]) -> Rational {
    let Some(d) = points.first().map(Vec::len) else {
        return Rational::zero();
    };
    match d {
        0 => Rational::one(),
        1 => {
            let lo = points.iter().map(|p| &p[0]).min().unwrap();
            let hi = points.iter().map(|p| &p[0]).max().unwrap();
            hi - lo
        }
        _ => {
            let apex = &points[0];
            let dim = Rational::from_integer(d.into());
            let mut total = Rational::zero();
            for f in facets(points) {
                let height = dot(&f.normal, apex) - &f.offset;
                if height.is_zero() {
                    continue;
                }
                let (j, wj) = f
                    .normal
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, w)| !w.is_zero())
                    .expect("facet normal is nonzero");
                let members: Vec<&Vec<Rational>> = f.members.iter().map(|&i| &points[i]).collect();
                let base = volume(&project(&members, j));
                total += height * base / (&dim * wj.abs());
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn square_area() {
        let p = pts(&[&[0, 0], &[2, 0], &[2, 3], &[0, 3], &[1, 1]]);
        assert_eq!(volume(&p), q(6, 1));
        assert_eq!(facets(&p).len(), 4);
    }

    #[test]
    fn unit_simplex_volumes() {
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(volume(&tri), q(1, 2));
        let tet = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(volume(&tet), q(1, 6));
        let s4 = pts(&[
            &[0, 0, 0, 0],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]);
        assert_eq!(volume(&s4), q(1, 24));
    }

    #[test]
    fn cube_with_interior_and_coplanar_points() {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    rows.push(vec![x, y, z]);
                }
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        assert_eq!(volume(&pts(&refs)), q(8, 1));
    }

    #[test]
    fn degenerate_hull_has_zero_volume() {
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(volume(&p), q(0, 1));
    }

    #[test]
    fn skew_triangle() {
        // shoelace: (0,0),(4,1),(1,3) -> |4*3 - 1*1| / 2
        let p = pts(&[&[4, 1], &[0, 0], &[1, 3]]);
        assert_eq!(volume(&p), q(11, 2));
    }
}
