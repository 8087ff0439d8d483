//! Dense Gaussian elimination over exact and truncated fields.
//!
//! Matrices are row-major `Vec<Vec<F>>`. Each routine takes a `negligible`
//! predicate deciding which entries count as zero; for exact scalars this is
//! just `is_zero`, for p-adics it is where a precision floor enters.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::padic::PadicScalar;

/// Field operations needed by the elimination routines.
pub trait Scalar: Clone + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Lower is a better pivot. `None` for zero.
    fn pivot_weight(&self) -> Option<i64>;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn pivot_weight(&self) -> Option<i64> {
        if Zero::is_zero(self) {
            None
        } else {
            // prefer small heights to limit coefficient growth
            Some((self.numer().abs().bits() + self.denom().bits()) as i64)
        }
    }
}

impl Scalar for PadicScalar {
    fn zero_like(&self) -> Self {
        PadicScalar::zero(self.prime(), self.precision())
    }
    fn one_like(&self) -> Self {
        PadicScalar::one(self.prime(), self.precision().max(1))
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_zero(&self) -> bool {
        PadicScalar::is_zero(self)
    }
    fn pivot_weight(&self) -> Option<i64> {
        self.valuation()
    }
}

/// Reduce `rows` to reduced row echelon form in place; returns pivot columns.
///
/// Entries judged negligible are replaced by exact zeros as they are met.
pub fn rref<F: Scalar>(rows: &mut [Vec<F>], negligible: &dyn Fn(&F) -> bool) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut best: Option<(usize, i64)> = None;
        for (i, row) in rows.iter_mut().enumerate().skip(r) {
            if negligible(&row[c]) {
                row[c] = row[c].zero_like();
                continue;
            }
            if let Some(w) = row[c].pivot_weight() {
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((i, w));
                }
            }
        }
        let Some((pi, _)) = best else { continue };
        rows.swap(r, pi);
        let inv = match rows[r][c].inverse() {
            Some(x) => x,
            None => continue,
        };
        for x in rows[r].iter_mut() {
            *x = x.times(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.minus(&f.times(p));
            }
            row[c] = row[c].zero_like();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn exact_zero<F: Scalar>(x: &F) -> bool {
    x.is_zero()
}

pub fn rank<F: Scalar>(rows: &[Vec<F>], negligible: &dyn Fn(&F) -> bool) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, negligible).len()
}

/// Basis of `{x : M x = 0}` where `M` has `ncols` columns.
pub fn nullspace<F: Scalar>(rows: &[Vec<F>], ncols: usize, one: &F, negligible: &dyn Fn(&F) -> bool) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, negligible);
    let zero = one.zero_like();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free].negated();
        }
        basis.push(v);
    }
    basis
}

/// Solve `M x = b`; `None` when inconsistent.
pub fn solve<F: Scalar>(rows: &[Vec<F>], b: &[F], negligible: &dyn Fn(&F) -> bool) -> Option<Vec<F>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<F>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, negligible);
    if pivots.contains(&ncols) {
        return None;
    }
    // rows past the rank must have vanished in the last column
    for row in aug.iter().skip(pivots.len()) {
        if !negligible(&row[ncols]) && !row[ncols].is_zero() {
            return None;
        }
    }
    let zero = b.first().map(|x| x.zero_like())?;
    let mut x = vec![zero; ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Coordinates of `v` in the span of `basis`, if it lies there.
pub fn coordinates<F: Scalar>(basis: &[Vec<F>], v: &[F], negligible: &dyn Fn(&F) -> bool) -> Option<Vec<F>> {
    if basis.is_empty() {
        return if v.iter().all(|x| negligible(x) || x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let n = v.len();
    let rows: Vec<Vec<F>> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    solve(&rows, v, negligible)
}

/// Transpose of a row-major matrix.
pub fn transpose<F: Clone>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    if rows.is_empty() {
        return Vec::new();
    }
    (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec<F: Scalar>(rows: &[Vec<F>], v: &[F], zero: &F) -> Vec<F> {
    rows.iter()
        .map(|r| r.iter().zip(v).fold(zero.clone(), |acc, (a, b)| acc.plus(&a.times(b))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_and_kernel_of_rational_matrix() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]];
        assert_eq!(rank(&m, &exact_zero), 2);
        let k = nullspace(&m, 3, &q(1), &exact_zero);
        assert_eq!(k.len(), 1);
        let image = mat_vec(&m, &k[0], &q(0));
        assert!(image.iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&m, &[q(1), q(3)], &exact_zero).is_none());
        let x = solve(&m, &[q(1), q(2)], &exact_zero).unwrap();
        assert_eq!(&x[0] + &x[1], q(1));
    }

    #[test]
    fn padic_elimination_tracks_precision() {
        let p = |v: i128| PadicScalar::from_int(5, v, 10);
        let m = vec![vec![p(5), p(1)], vec![p(25), p(5)]];
        // second row is 5 times the first
        assert_eq!(rank(&m, &exact_zero), 1);
    }
}
