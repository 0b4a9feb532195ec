//! Monomials in `X_0, ..., X_n` and finite sets of them.
//!
//! The canonical order throughout the crate is graded lexicographic with
//! `X_0 > X_1 > ... > X_n`. [`MonomialSet`] keeps its elements sorted from
//! the largest to the smallest monomial in that order, so `S_2` in three
//! variables reads `X0^2, X0*X1, X0*X2, X1^2, X1*X2, X2^2`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    /// The constant monomial in `vars` variables.
    pub fn one(vars: usize) -> Self {
        Monomial::new(vec![0; vars])
    }

    /// `X_i^e` in `vars` variables.
    pub fn pure_power(vars: usize, i: usize, e: u32) -> Self {
        let mut exponents = vec![0; vars];
        exponents[i] = e;
        Monomial::new(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.num_vars(), other.num_vars());
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        assert_eq!(self.num_vars(), other.num_vars());
        self.degree <= other.degree
            && self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    /// `self / divisor`, defined only when `divisor | self`.
    pub fn quotient(&self, divisor: &Monomial) -> Result<Monomial> {
        if !divisor.divides(self) {
            return Err(Error::domain(format!("{divisor} does not divide {self}")));
        }
        Ok(Monomial::new(
            self.exponents
                .iter()
                .zip(&divisor.exponents)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.num_vars(), other.num_vars());
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Appends `extra` trailing variables with exponent zero.
    pub fn embed(&self, extra: usize) -> Monomial {
        let mut exponents = self.exponents.clone();
        exponents.extend(std::iter::repeat_n(0, extra));
        Monomial {
            exponents,
            degree: self.degree,
        }
    }

    /// All divisors of `self` with degree in `min_degree..=max_degree`.
    pub fn divisors(&self, min_degree: u32, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.num_vars()];
        self.divisors_rec(0, 0, min_degree, max_degree, &mut current, &mut out);
        out
    }

    fn divisors_rec(
        &self,
        var: usize,
        deg: u32,
        lo: u32,
        hi: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if var == self.num_vars() {
            if deg >= lo {
                out.push(Monomial::new(current.clone()));
            }
            return;
        }
        for a in 0..=self.exponents[var] {
            if deg + a > hi {
                break;
            }
            current[var] = a;
            self.divisors_rec(var + 1, deg + a, lo, hi, current, out);
        }
        current[var] = 0;
    }

    /// Parses the human syntax `X0^2*X1` (or `1`) for a monomial in `vars`
    /// variables.
    pub fn parse(text: &str, vars: usize) -> Result<Monomial> {
        let mut exponents = vec![0u32; vars];
        let text = text.trim();
        if text == "1" {
            return Ok(Monomial::new(exponents));
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let bad = || Error::Parse(format!("bad factor {factor:?} in {text:?}"));
            let rest = factor
                .strip_prefix('X')
                .or_else(|| factor.strip_prefix('x'))
                .ok_or_else(bad)?;
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => (v, e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let var: usize = var.trim().parse().map_err(|_| bad())?;
            if var >= vars {
                return Err(Error::Parse(format!(
                    "variable X{var} out of range for {vars} variables"
                )));
            }
            exponents[var] += exp;
        }
        Ok(Monomial::new(exponents))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with `X_0 > X_1 > ... > X_n`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match e {
                1 => write!(f, "X{i}")?,
                _ => write!(f, "X{i}^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.exponents.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Monomial::new(Vec::<u32>::deserialize(d)?))
    }
}

/// Sorts largest-first in the canonical order.
pub fn sort_canonical(monomials: &mut [Monomial]) {
    monomials.sort_by(|a, b| b.cmp(a));
}

/// A finite set of distinct monomials in `n + 1` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialSet {
    n: u32,
    monomials: Vec<Monomial>,
    uniform_degree: Option<u32>,
}

impl MonomialSet {
    /// Validates and canonicalizes. Rejects length mismatches and duplicates,
    /// reporting the offending input position.
    pub fn new(n: u32, monomials: Vec<Monomial>) -> Result<Self> {
        let vars = n as usize + 1;
        for (pos, u) in monomials.iter().enumerate() {
            if u.num_vars() != vars {
                return Err(Error::domain(format!(
                    "monomial #{pos} has {} exponents, expected {vars}",
                    u.num_vars()
                )));
            }
        }
        let mut indexed: Vec<(usize, Monomial)> = monomials.into_iter().enumerate().collect();
        indexed.sort_by(|a, b| b.1.cmp(&a.1));
        for pair in indexed.windows(2) {
            if pair[0].1 == pair[1].1 {
                let (a, b) = (pair[0].0.min(pair[1].0), pair[0].0.max(pair[1].0));
                return Err(Error::domain(format!(
                    "monomial #{b} duplicates monomial #{a} ({})",
                    pair[0].1
                )));
            }
        }
        Ok(Self::from_sorted(n, indexed.into_iter().map(|(_, u)| u).collect()))
    }

    fn from_sorted(n: u32, monomials: Vec<Monomial>) -> Self {
        let uniform_degree = match monomials.first() {
            Some(first) if monomials.iter().all(|u| u.degree() == first.degree()) => {
                Some(first.degree())
            }
            _ => None,
        };
        MonomialSet {
            n,
            monomials,
            uniform_degree,
        }
    }

    pub fn from_exponents(n: u32, exponents: Vec<Vec<u32>>) -> Result<Self> {
        Self::new(n, exponents.into_iter().map(Monomial::new).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.n as usize + 1
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.monomials.iter()
    }

    pub fn uniform_degree(&self) -> Option<u32> {
        self.uniform_degree
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.monomials.iter().map(Monomial::degree).collect()
    }

    pub fn contains(&self, u: &Monomial) -> bool {
        self.monomials.binary_search_by(|v| u.cmp(v)).is_ok()
    }

    /// Union with another set in the same variables. Duplicates are merged.
    pub fn union(&self, other: &MonomialSet) -> Result<MonomialSet> {
        if other.n != self.n {
            return Err(Error::domain("union of sets in different variable counts"));
        }
        let mut all: Vec<Monomial> = self.monomials.iter().chain(&other.monomials).cloned().collect();
        sort_canonical(&mut all);
        all.dedup();
        Ok(Self::from_sorted(self.n, all))
    }

    pub fn insert(&self, u: Monomial) -> Result<MonomialSet> {
        self.union(&MonomialSet::new(self.n, vec![u])?)
    }

    /// Multiplies every element by `factor`.
    pub fn times(&self, factor: &Monomial) -> MonomialSet {
        let monomials = self.monomials.iter().map(|u| u.mul(factor)).collect();
        Self::from_sorted(self.n, monomials)
    }

    /// Re-expresses the set in `n + extra` variables (new variables last).
    pub fn embed(&self, extra: u32) -> MonomialSet {
        let monomials = self.monomials.iter().map(|u| u.embed(extra as usize)).collect();
        Self::from_sorted(self.n + extra, monomials)
    }

    /// The gcd of all elements (the constant monomial for an empty set).
    pub fn common_factor(&self) -> Monomial {
        let mut iter = self.monomials.iter();
        match iter.next() {
            None => Monomial::one(self.num_vars()),
            Some(first) => iter.fold(first.clone(), |g, u| g.gcd(u)),
        }
    }

    /// Divides every element by `factor`.
    pub fn divide_by(&self, factor: &Monomial) -> Result<MonomialSet> {
        let monomials = self
            .monomials
            .iter()
            .map(|u| u.quotient(factor))
            .collect::<Result<Vec<_>>>()?;
        // Division by a common divisor preserves the graded lex order.
        Ok(Self::from_sorted(self.n, monomials))
    }

    /// Base point freeness for an equal-degree set: all pure powers
    /// `X_i^d` are present.
    pub fn is_bpf(&self) -> Result<bool> {
        let d = self.require_uniform()?;
        Ok((0..self.num_vars()).all(|i| self.contains(&Monomial::pure_power(self.num_vars(), i, d))))
    }

    /// `dim (V : u)` for `u` of degree `1 <= e <= d - 1`: the number of
    /// elements of `V` divisible by `u`.
    pub fn colon_dim(&self, u: &Monomial) -> Result<usize> {
        let d = self.require_uniform()?;
        if u.num_vars() != self.num_vars() {
            return Err(Error::domain("colon monomial has the wrong number of variables"));
        }
        let e = u.degree();
        if e < 1 || e >= d {
            return Err(Error::domain(format!(
                "colon monomial degree {e} outside 1..={}",
                d.saturating_sub(1)
            )));
        }
        Ok(self.colon_dim_unchecked(u))
    }

    pub(crate) fn colon_dim_unchecked(&self, u: &Monomial) -> usize {
        self.monomials.iter().filter(|v| u.divides(v)).count()
    }

    fn require_uniform(&self) -> Result<u32> {
        self.uniform_degree
            .ok_or_else(|| Error::domain("operation requires a nonempty equal-degree monomial set"))
    }
}

impl fmt::Display for MonomialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for MonomialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialSet(n={}, {self})", self.n)
    }
}

impl<'a> IntoIterator for &'a MonomialSet {
    type Item = &'a Monomial;
    type IntoIter = std::slice::Iter<'a, Monomial>;

    fn into_iter(self) -> Self::IntoIter {
        self.monomials.iter()
    }
}

/// All monomials of degree `e` in `n + 1` variables, canonically ordered.
pub fn enumerate_monomials(n: u32, e: u32) -> MonomialSet {
    let vars = n as usize + 1;
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fill(0, e, &mut current, &mut out);
    MonomialSet::from_sorted(n, out)
}

fn fill(var: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(Monomial::new(current.clone()));
        current[var] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        current[var] = a;
        fill(var + 1, remaining - a, current, out);
    }
    current[var] = 0;
}

/// The pure powers `X_0^d, ..., X_n^d`.
pub fn pure_powers(n: u32, d: u32) -> MonomialSet {
    let vars = n as usize + 1;
    MonomialSet::from_sorted(n, (0..vars).map(|i| Monomial::pure_power(vars, i, d)).collect())
}
