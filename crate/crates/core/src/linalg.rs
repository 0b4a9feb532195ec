//! Dense Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot
/// columns; the pivots are strictly increasing, so the pivot set is the
/// lexicographically least one available.
pub fn rref(rows: &[Vec<Rational>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        let Some(found) = (top..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(top, found);
        let inv = a[top][col].recip();
        for x in a[top].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i == top || a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone();
            for j in col..cols {
                let delta = &factor * &a[top][j];
                a[i][j] -= delta;
            }
        }
        pivots.push(col);
        top += 1;
        if top == a.len() {
            break;
        }
    }
    a.truncate(top);
    (a, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// A basis of `{x : A x = 0}`, one vector per free column, each with a 1 in
/// its free column.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Matrix {
    let (r, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Whether `v` lies in the row space of `rows`.
pub fn in_row_space(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut extended = rows.to_vec();
    extended.push(v.to_vec());
    rank(&extended) == rank(rows)
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] / &a[col][col];
            for j in col..n {
                let delta = &factor * &a[col][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}
