//! Integer covolumes for lattice point sets in dimensions 1 to 4.
//!
//! The complement of `conv(P) + R^n_{>=0}` is a union of lattice simplices
//! with a vertex at the origin, so `n! * covolume` is an integer and can be
//! computed without rationals.

use itertools::Itertools;
use num_integer::Integer;
use num_traits::ToPrimitive;

use num_bigint::BigInt;

use crate::Rational;

/// Coordinates larger than this fall back to exact rationals.
const LIMIT: i128 = 1 << 24;

pub(crate) fn to_lattice(points: &[&[Rational]]) -> Option<Vec<Vec<i128>>> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| {
                    if !c.is_integer() {
                        return None;
                    }
                    c.to_integer().to_i128().filter(|v| v.abs() < LIMIT)
                })
                .collect()
        })
        .collect()
}

fn cross(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn sub(p: &[i128], q: &[i128]) -> [i128; 3] {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

fn dot3(w: &[i128; 3], p: &[i128]) -> i128 {
    w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
}

fn det3(a: &[i128], b: &[i128], c: &[i128]) -> i128 {
    dot3(&cross([a[0], a[1], a[2]], [b[0], b[1], b[2]]), c)
}

/// Lower-left chain of a planar point set: the compact edges of
/// `conv(P) + R^2_{>=0}`.
fn covolume_2d(points: &[Vec<i128>]) -> i128 {
    let mut pts: Vec<(i128, i128)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_unstable();
    pts.dedup();
    // keep the staircase: strictly decreasing y as x grows
    let mut stairs: Vec<(i128, i128)> = Vec::new();
    for p in pts {
        if stairs.last().is_none_or(|q| p.1 < q.1) {
            stairs.push(p);
        }
    }
    // convex chain through the staircase
    let mut chain: Vec<(i128, i128)> = Vec::new();
    for p in stairs {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            let turn = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if turn <= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
        .windows(2)
        .map(|w| (w[0].0 * w[1].1 - w[0].1 * w[1].0).abs())
        .sum()
}

/// Convex polygon of coplanar points, ordered counterclockwise in the
/// projection onto the coordinates `(x, y)`, which must be injective on
/// their plane.
fn polygon(points: Vec<Vec<i128>>, (x, y): (usize, usize)) -> Vec<Vec<i128>> {
    let mut pts = points;
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    pts.sort_unstable_by_key(|p| (p[x], p[y]));
    let turn = |a: &[i128], b: &[i128], c: &[i128]| (b[x] - a[x]) * (c[y] - a[y]) - (b[y] - a[y]) * (c[x] - a[x]);
    let mut lower: Vec<Vec<i128>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i128>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn covolume_3d(points: &[Vec<i128>]) -> i128 {
    let mut seen: Vec<([i128; 3], i128)> = Vec::new();
    let mut total = 0;
    for combo in (0..points.len()).combinations(3) {
        let (p, q, r) = (&points[combo[0]], &points[combo[1]], &points[combo[2]]);
        if seen
            .iter()
            .any(|(w, h)| dot3(w, p) == *h && dot3(w, q) == *h && dot3(w, r) == *h)
        {
            continue;
        }
        let mut w = cross(sub(q, p), sub(r, p));
        let g = w[0].gcd(&w[1]).gcd(&w[2]);
        if g == 0 {
            continue;
        }
        if w[0] < 0 {
            w = [-w[0], -w[1], -w[2]];
        }
        w = [w[0] / g, w[1] / g, w[2] / g];
        let h = dot3(&w, p);
        if w.iter().any(|&x| x <= 0) || h <= 0 {
            continue;
        }
        if points.iter().any(|x| dot3(&w, x) < h) {
            continue;
        }
        let face = polygon(points.iter().filter(|x| dot3(&w, x) == h).cloned().collect(), (0, 1));
        total += (1..face.len() - 1)
            .map(|i| det3(&face[0], &face[i], &face[i + 1]).abs())
            .sum::<i128>();
        seen.push((w, h));
    }
    total
}

/// `6 * vol(conv(P))` for points of `Z^3`; zero when they are coplanar.
fn volume_3d(points: &[Vec<i128>]) -> i128 {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 4 {
        return 0;
    }
    let apex = pts[0].clone();
    let mut seen: Vec<([i128; 3], i128)> = Vec::new();
    let mut total = 0;
    for combo in (0..pts.len()).combinations(3) {
        let (p, q, r) = (&pts[combo[0]], &pts[combo[1]], &pts[combo[2]]);
        if seen
            .iter()
            .any(|(w, h)| dot3(w, p) == *h && dot3(w, q) == *h && dot3(w, r) == *h)
        {
            continue;
        }
        let mut w = cross(sub(q, p), sub(r, p));
        let g = w[0].gcd(&w[1]).gcd(&w[2]);
        if g == 0 {
            continue;
        }
        w = [w[0] / g, w[1] / g, w[2] / g];
        let h = dot3(&w, p);
        let below = pts.iter().any(|x| dot3(&w, x) < h);
        let above = pts.iter().any(|x| dot3(&w, x) > h);
        if below && above {
            continue;
        }
        seen.push((w, h));
        if dot3(&w, &apex) == h {
            continue;
        }
        let axes = match w.iter().position(|&c| c != 0) {
            Some(0) => (1, 2),
            Some(1) => (0, 2),
            _ => (0, 1),
        };
        let face = polygon(pts.iter().filter(|x| dot3(&w, x) == h).cloned().collect(), axes);
        total += (1..face.len() - 1)
            .map(|i| det3(&sub(&face[0], &apex), &sub(&face[i], &apex), &sub(&face[i + 1], &apex)).abs())
            .sum::<i128>();
    }
    total
}

fn det3_rows(m: [[i128; 3]; 3]) -> i128 {
    dot3(&cross(m[0], m[1]), &m[2])
}

/// Normal of the hyperplane through four points of `Z^4`, by cofactors.
fn normal_4d(p: &[i128], q: &[i128], r: &[i128], s: &[i128]) -> [i128; 4] {
    let rows: Vec<[i128; 4]> = [q, r, s]
        .iter()
        .map(|x| [x[0] - p[0], x[1] - p[1], x[2] - p[2], x[3] - p[3]])
        .collect();
    let mut w = [0i128; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let minor = |row: &[i128; 4]| {
            let mut out = [0i128; 3];
            let mut k = 0;
            for (j, &v) in row.iter().enumerate() {
                if j != i {
                    out[k] = v;
                    k += 1;
                }
            }
            out
        };
        let d = det3_rows([minor(&rows[0]), minor(&rows[1]), minor(&rows[2])]);
        *wi = if i % 2 == 0 { d } else { -d };
    }
    w
}

fn dot4(w: &[i128; 4], p: &[i128]) -> i128 {
    w.iter().zip(p).map(|(a, b)| a * b).sum()
}

/// `4! * covol`, summed over compact facets as pyramids from the origin.
fn covolume_4d(points: &[Vec<i128>]) -> Rational {
    let mut seen: Vec<([i128; 4], i128)> = Vec::new();
    let mut total = Rational::from_integer(BigInt::from(0));
    for combo in (0..points.len()).combinations(4) {
        let quad: Vec<&Vec<i128>> = combo.iter().map(|&i| &points[i]).collect();
        if seen
            .iter()
            .any(|(w, h)| quad.iter().all(|p| dot4(w, p) == *h))
        {
            continue;
        }
        let mut w = normal_4d(quad[0], quad[1], quad[2], quad[3]);
        let g = w.iter().fold(0i128, |acc, c| acc.gcd(c));
        if g == 0 {
            continue;
        }
        if w[0] < 0 {
            w.iter_mut().for_each(|c| *c = -*c);
        }
        w.iter_mut().for_each(|c| *c /= g);
        let h = dot4(&w, quad[0]);
        if w.iter().any(|&x| x <= 0) || h <= 0 {
            continue;
        }
        if points.iter().any(|x| dot4(&w, x) < h) {
            continue;
        }
        let projected: Vec<Vec<i128>> = points
            .iter()
            .filter(|x| dot4(&w, x) == h)
            .map(|x| x[..3].to_vec())
            .collect();
        let base = volume_3d(&projected);
        total += Rational::new(BigInt::from(h) * BigInt::from(base), BigInt::from(w[3]));
        seen.push((w, h));
    }
    total
}

/// `n! * covol(conv(P) + R^n_{>=0})` for `n <= 4`, or `None` for larger
/// dimensions. The polyhedron must be primary.
pub(crate) fn scaled_covolume(n: usize, points: &[Vec<i128>]) -> Option<Rational> {
    let int = |v: i128| Rational::from_integer(BigInt::from(v));
    match n {
        1 => points.iter().map(|p| p[0]).min().map(int),
        2 => Some(int(covolume_2d(points))),
        3 => Some(int(covolume_3d(points))),
        4 => Some(covolume_4d(points)),
        _ => None,
    }
}
