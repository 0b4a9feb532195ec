//! Stability of 5-dimensional subspaces `V ⊂ S_2` in three variables.
//!
//! `V` is the kernel of a functional `λ` on quadrics. With the symmetric
//! matrix `M_ij = λ(X_i X_j)`: rank 1 means `λ` is evaluation at a point, so
//! `V` has a base point; rank 2 means `λ` lies on the secant variety of the
//! Veronese surface and `V ⊇ S_1·f` for some linear `f`, so the syzygy bundle
//! is not stable; rank 3 means stable.
//!
//! Coordinates on `S_2` use the order `X0², X0X1, X0X2, X1², X1X2, X2²`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::monomial::Monomial;
use crate::rational::{self, Rational};

/// `(i, j)` with `i <= j` for each coordinate of `S_2`, in order.
pub const QUADRIC_BASIS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Coordinate index of `X_i X_j`.
pub fn quadric_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    QUADRIC_BASIS
        .iter()
        .position(|&p| p == (i, j))
        .expect("indices below 3")
}

/// The monomials of `S_2` in coordinate order.
pub fn quadric_monomials() -> Vec<Monomial> {
    QUADRIC_BASIS
        .iter()
        .map(|&(i, j)| {
            let mut e = vec![0; 3];
            e[i] += 1;
            e[j] += 1;
            Monomial::new(e)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricFunctional {
    #[serde(with = "values_text")]
    values: [Rational; 6],
}

mod values_text {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational; 6], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Rational; 6], D::Error> {
        let text: Vec<String> = Vec::deserialize(d)?;
        let parsed: Vec<Rational> = text
            .iter()
            .map(|t| rational::parse(t).map_err(de::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        parsed
            .try_into()
            .map_err(|v: Vec<Rational>| de::Error::invalid_length(v.len(), &"six values"))
    }
}

impl QuadricFunctional {
    pub fn new(values: [Rational; 6]) -> Result<Self> {
        if values.iter().all(Zero::is_zero) {
            return Err(Error::domain("the zero functional has no kernel of dimension 5"));
        }
        Ok(QuadricFunctional { values })
    }

    pub fn values(&self) -> &[Rational; 6] {
        &self.values
    }

    /// `λ(X_i X_j)`.
    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.values[quadric_index(i, j)]
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Self::new(self.values.clone().map(|v| v * c))
    }

    /// `M_ij = λ(X_i X_j)`, with no factor of two on the diagonal.
    pub fn catalecticant(&self) -> Matrix {
        (0..3)
            .map(|i| (0..3).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecantVerdict {
    Stable,
    NotStable,
    BasePoint,
}

fn check_subspace(v: &[Vec<Rational>]) -> Result<()> {
    if v.len() != 5 || v.iter().any(|row| row.len() != 6) {
        return Err(Error::domain("expected a 5×6 coefficient matrix"));
    }
    let rank = linalg::rank(v);
    if rank != 5 {
        return Err(Error::domain(format!("subspace matrix has rank {rank}, expected 5")));
    }
    Ok(())
}

/// The functional vanishing on the row space of `v`, unique up to scale.
pub fn functional_from_subspace(v: &[Vec<Rational>]) -> Result<QuadricFunctional> {
    check_subspace(v)?;
    let kernel = linalg::nullspace(v, 6);
    let values: [Rational; 6] = kernel
        .into_iter()
        .next()
        .expect("rank 5 leaves a one-dimensional kernel")
        .try_into()
        .expect("six coordinates");
    QuadricFunctional::new(values)
}

pub fn secant_stability_test(lambda: &QuadricFunctional) -> SecantVerdict {
    match linalg::rank(&lambda.catalecticant()) {
        1 => SecantVerdict::BasePoint,
        2 => SecantVerdict::NotStable,
        _ => SecantVerdict::Stable,
    }
}

/// A nonzero linear form `f = a_0 X0 + a_1 X1 + a_2 X2` with `X_i f ∈ V` for
/// all `i`, found without the functional: each `X_i X_j` is reduced against
/// the echelon form of `V`, leaving a residue on the single free coordinate,
/// and `f` must make `Σ_j a_j residue(X_i X_j)` vanish for every `i`.
pub fn find_linear_factor(v: &[Vec<Rational>]) -> Result<Option<[Rational; 3]>> {
    check_subspace(v)?;
    let (echelon, pivots) = linalg::rref(v);
    let free = (0..6).find(|c| !pivots.contains(c)).expect("one free column");
    // Reducing e_k: pivot columns are cleared by subtracting the matching
    // echelon row, which leaves `-row[free]` on the free coordinate.
    let residue = |k: usize| -> Rational {
        if k == free {
            return rational::int(1);
        }
        let p = pivots.iter().position(|&c| c == k).expect("pivot column");
        -echelon[p][free].clone()
    };
    let system: Matrix = (0..3)
        .map(|i| (0..3).map(|j| residue(quadric_index(i, j))).collect())
        .collect();
    let Some(f) = linalg::nullspace(&system, 3).into_iter().next() else {
        return Ok(None);
    };
    for i in 0..3 {
        let mut product = vec![Rational::zero(); 6];
        for (j, a) in f.iter().enumerate() {
            product[quadric_index(i, j)] += a;
        }
        if !linalg::in_row_space(v, &product) {
            return Err(Error::Verification(format!("X{i}·f is not in V")));
        }
    }
    Ok(Some(f.try_into().expect("three coordinates")))
}

/// The 5×6 matrix whose rows are the given quadric monomials.
pub fn monomial_subspace(monomials: &[Monomial]) -> Result<Matrix> {
    let basis = quadric_monomials();
    monomials
        .iter()
        .map(|u| {
            let k = basis
                .iter()
                .position(|b| b == u)
                .ok_or_else(|| Error::domain(format!("{u} is not a quadric in X0, X1, X2")))?;
            let mut row = vec![Rational::zero(); 6];
            row[k] = rational::int(1);
            Ok(row)
        })
        .collect()
}
