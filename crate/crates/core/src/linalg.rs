use num_traits::{One, Zero};

use crate::Rational;

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..rows[i].len() {
                    let delta = &f * &rows[r][k];
                    rows[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// The unique (up to scale) kernel vector of a matrix with `ncols - 1`
/// independent rows, or `None` if the kernel is not one-dimensional.
pub(crate) fn kernel_line(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Option<Vec<Rational>> {
    let pivots = rref(&mut rows, ncols);
    if pivots.len() + 1 != ncols {
        return None;
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); ncols];
    v[free] = Rational::one();
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = -rows[r][free].clone();
    }
    Some(v)
}

/// Solves the square system `m x = rhs`; `None` if singular.
pub(crate) fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rhs.len();
    let mut rows: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, n);
    if pivots.len() != n {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n].clone()).collect())
}
