//! Brute-force oracles and random generators shared by the integration
//! tests. Nothing here calls the criterion or construction code.

#![allow(dead_code)]

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use syzygy_core::criterion::Status;
use syzygy_core::exterior::ExteriorElement;
use syzygy_core::linalg::Matrix;
use syzygy_core::monomial::{enumerate_monomials, pure_powers, Monomial, MonomialSet};
use syzygy_core::rational::{ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All exponent vectors of total degree `e` in `vars` variables.
pub fn exponent_vectors(vars: usize, e: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![e]];
    }
    let mut out = Vec::new();
    for first in (0..=e).rev() {
        for mut rest in exponent_vectors(vars - 1, e - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Pure powers plus `m - n - 1` further distinct monomials of degree `d`.
pub fn random_bpf(rng: &mut impl Rng, n: u32, d: u32, m: usize) -> MonomialSet {
    let base = pure_powers(n, d);
    let mut others: Vec<Monomial> = enumerate_monomials(n, d)
        .iter()
        .filter(|u| !base.contains(u))
        .cloned()
        .collect();
    others.shuffle(rng);
    others.truncate(m - base.len());
    base.union(&MonomialSet::new(n, others).unwrap()).unwrap()
}

fn compare(extremal: Option<Rational>, reference: &Rational) -> Status {
    match extremal {
        Some(x) if &x > reference => Status::Unstable,
        Some(x) if &x == reference => Status::StrictlySemistable,
        _ => Status::Stable,
    }
}

/// Subset form by full enumeration of all `2 <= |I| <= m - 1`, on raw
/// exponent vectors. Assumes no common factor.
pub fn brute_mixed(set: &MonomialSet) -> (Status, Option<Rational>) {
    let exps: Vec<&[u32]> = set.iter().map(|u| u.exponents()).collect();
    let m = exps.len();
    let total: i64 = exps.iter().map(|e| e.iter().sum::<u32>() as i64).sum();
    let reference = ratio(-total, m as i64 - 1);
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size < 2 || size > m - 1 {
            continue;
        }
        let members: Vec<&[u32]> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| exps[i]).collect();
        let gcd_deg: i64 = (0..members[0].len())
            .map(|k| members.iter().map(|e| e[k]).min().unwrap() as i64)
            .sum();
        let sum: i64 = members.iter().map(|e| e.iter().sum::<u32>() as i64).sum();
        let value = ratio(gcd_deg - sum, size as i64 - 1);
        if best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
    }
    (compare(best.clone(), &reference), best)
}

/// Colon form over every monomial `u` of every degree `1..d`, counting
/// members divisible by `u` directly.
pub fn brute_colon(set: &MonomialSet) -> (Status, Option<Rational>) {
    let d = set.uniform_degree().expect("equal degree");
    let vars = set.num_vars();
    let m = set.len() as i64;
    let reference = ratio(m - 1, d as i64);
    let mut best: Option<Rational> = None;
    for e in 1..d {
        for u in exponent_vectors(vars, e) {
            let dim = set
                .iter()
                .filter(|v| v.exponents().iter().zip(&u).all(|(a, b)| a >= b))
                .count() as i64;
            let value = ratio(dim - 1, (d - e) as i64);
            if best.as_ref().is_none_or(|b| value > *b) {
                best = Some(value);
            }
        }
    }
    (compare(best.clone(), &reference), best)
}

pub fn small_rational(rng: &mut impl Rng, range: i64) -> Rational {
    let den = rng.gen_range(1..=3);
    ratio(rng.gen_range(-range..=range), den)
}

/// A vector of length `m` whose coordinates sum to zero, i.e. a point of
/// `span{e_i - e_j}`.
pub fn zero_sum_vector(rng: &mut impl Rng, m: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..m).map(|_| small_rational(rng, 3)).collect();
    let sum: Rational = v[..m - 1].iter().cloned().sum();
    v[m - 1] = -sum;
    v
}

/// A nonzero `δ`-closed decomposable element of degree `r` in `∧^r k^m`.
pub fn closed_decomposable(rng: &mut impl Rng, m: usize, r: usize) -> ExteriorElement {
    loop {
        let vectors: Vec<Vec<Rational>> = (0..r).map(|_| zero_sum_vector(rng, m)).collect();
        let w = ExteriorElement::wedge_vectors(m, &vectors).unwrap();
        if !w.is_zero() {
            return w;
        }
    }
}

/// A nonzero decomposable element of degree `r` with unrestricted factors.
pub fn random_decomposable(rng: &mut impl Rng, m: usize, r: usize) -> (Vec<Vec<Rational>>, ExteriorElement) {
    loop {
        let vectors: Vec<Vec<Rational>> = (0..r)
            .map(|_| (0..m).map(|_| small_rational(rng, 2)).collect())
            .collect();
        let w = ExteriorElement::wedge_vectors(m, &vectors).unwrap();
        if !w.is_zero() {
            return (vectors, w);
        }
    }
}

pub fn random_element(rng: &mut impl Rng, m: usize, r: usize, terms: usize) -> ExteriorElement {
    let all: Vec<usize> = (1..=m).collect();
    let picked = (0..terms).map(|_| {
        let mut idx: Vec<usize> = all.choose_multiple(rng, r).copied().collect();
        idx.sort_unstable();
        (idx, small_rational(rng, 4))
    });
    ExteriorElement::from_terms(m, r, picked).unwrap()
}

fn rank5(rows: &Matrix) -> bool {
    syzygy_core::linalg::rank(rows) == 5
}

/// A random rank-5 subspace of ternary quadrics. Half are generic; a third
/// contain `S_1·f` for a random linear `f`, and a sixth vanish at a random
/// rational point, so every verdict is exercised.
pub fn random_subspace(rng: &mut impl Rng) -> Matrix {
    loop {
        let rows: Matrix = match rng.gen_range(0..6) {
            0 | 1 => {
                let f: Vec<Rational> = (0..3).map(|_| small_rational(rng, 3)).collect();
                let mut rows: Matrix = (0..3)
                    .map(|i| {
                        let mut q = vec![Rational::zero(); 6];
                        for (j, a) in f.iter().enumerate() {
                            q[syzygy_core::secant::quadric_index(i, j)] += a;
                        }
                        q
                    })
                    .collect();
                for _ in 0..2 {
                    rows.push((0..6).map(|_| small_rational(rng, 3)).collect());
                }
                rows
            }
            2 => {
                // The kernel of evaluation at p = (p0 : p1 : p2).
                let p: Vec<Rational> = (0..3).map(|_| small_rational(rng, 3)).collect();
                let eval: Vec<Rational> = syzygy_core::secant::QUADRIC_BASIS
                    .iter()
                    .map(|&(i, j)| &p[i] * &p[j])
                    .collect();
                if eval.iter().all(Zero::is_zero) {
                    continue;
                }
                syzygy_core::linalg::nullspace(&[eval], 6)
            }
            _ => (0..5).map(|_| (0..6).map(|_| small_rational(rng, 4)).collect()).collect(),
        };
        if rank5(&rows) {
            return rows;
        }
    }
}
