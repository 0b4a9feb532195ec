//! Exterior algebra `∧W` on the basis `e_1, ..., e_m` with exact rational
//! coefficients: the Koszul differential `δ(e_i) = 1`, the quadratic
//! decomposability relations, and extraction of disjoint index families
//! from a `δ`-closed decomposable element.
//!
//! Indices are 1-based throughout, matching the usual `e_1, ..., e_m`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

/// Largest `m` for which [`find_index_families`] enumerates candidates.
pub const FAMILY_SEARCH_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    m: usize,
    r: usize,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

/// Sorts `idx` in place and returns the sign of the sorting permutation, or
/// `None` if an index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl ExteriorElement {
    pub fn zero(m: usize, r: usize) -> Self {
        ExteriorElement {
            m,
            r,
            coeffs: BTreeMap::new(),
        }
    }

    /// Degree-0 element `c`.
    pub fn scalar(m: usize, c: Rational) -> Self {
        let mut out = Self::zero(m, 0);
        if !c.is_zero() {
            out.coeffs.insert(Vec::new(), c);
        }
        out
    }

    /// Sums `c · e_{i_1} ∧ ... ∧ e_{i_r}` over the given terms. Index tuples
    /// need not be sorted: each is reordered with the matching sign, and a
    /// tuple with a repeated index contributes zero.
    pub fn from_terms(
        m: usize,
        r: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(m, r);
        for (k, (mut idx, c)) in terms.into_iter().enumerate() {
            if idx.len() != r {
                return Err(Error::domain(format!(
                    "term #{k} has {} indices, expected {r}",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > m) {
                return Err(Error::domain(format!(
                    "term #{k}: index {bad} outside 1..={m}"
                )));
            }
            if let Some(negative) = sort_with_sign(&mut idx) {
                out.accumulate(idx, if negative { -c } else { c });
            }
        }
        Ok(out)
    }

    /// The basis element `e_I`.
    pub fn basis(m: usize, idx: &[usize]) -> Result<Self> {
        Self::from_terms(m, idx.len(), [(idx.to_vec(), Rational::one())])
    }

    /// `Σ v_i e_{i+1}` for a coordinate vector `v` of length `m`.
    pub fn from_vector(v: &[Rational]) -> Self {
        let mut out = Self::zero(v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            out.accumulate(vec![i + 1], c.clone());
        }
        out
    }

    /// `w_1 ∧ ... ∧ w_r` for coordinate vectors of a common length `m`.
    pub fn wedge_vectors(m: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut acc = Self::scalar(m, Rational::one());
        for v in vectors {
            if v.len() != m {
                return Err(Error::domain(format!(
                    "vector of length {} in ambient dimension {m}",
                    v.len()
                )));
            }
            acc = acc.wedge(&Self::from_vector(v))?;
        }
        Ok(acc)
    }

    fn accumulate(&mut self, key: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> BTreeSet<Vec<usize>> {
        self.coeffs.keys().cloned().collect()
    }

    /// Coefficient of the sorted tuple `idx`.
    pub fn coeff(&self, idx: &[usize]) -> Rational {
        self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `e_{i_1} ∧ ... ∧ e_{i_r}` for an arbitrary tuple,
    /// extended antisymmetrically.
    pub fn signed_coeff(&self, idx: &[usize]) -> Rational {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => Rational::zero(),
            Some(negative) => {
                let c = self.coeff(&sorted);
                if negative {
                    -c
                } else {
                    c
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.r != other.r {
            return Err(Error::domain(format!(
                "cannot add elements of shape (m, r) = ({}, {}) and ({}, {})",
                self.m, self.r, other.m, other.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.m, self.r);
        }
        ExteriorElement {
            m: self.m,
            r: self.r,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::domain(format!(
                "ambient dimensions differ: {} and {}",
                self.m, other.m
            )));
        }
        let mut out = Self::zero(self.m, self.r + other.r);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(negative) = sort_with_sign(&mut idx) {
                    let c = x * y;
                    out.accumulate(idx, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// The Koszul differential, `δ(e_{i_1} ∧ ... ∧ e_{i_r}) =
    /// Σ_p (-1)^{p-1} e_{i_1} ∧ ... ê_{i_p} ... ∧ e_{i_r}`.
    pub fn koszul_delta(&self) -> Result<Self> {
        if self.r == 0 {
            return Err(Error::domain("δ is not defined in degree 0"));
        }
        let mut out = Self::zero(self.m, self.r - 1);
        for (idx, c) in &self.coeffs {
            for p in 0..idx.len() {
                let mut rest = idx.clone();
                rest.remove(p);
                out.accumulate(rest, if p % 2 == 0 { c.clone() } else { -c.clone() });
            }
        }
        Ok(out)
    }

    /// Whether `ω = w_1 ∧ ... ∧ w_r`, decided by the quadratic relations
    ///
    /// `Σ_{p=0}^{r} (-1)^p c_{i_1..i_{r-1} j_p} c_{j_0..ĵ_p..j_r} = 0`
    ///
    /// for all `(r-1)`-tuples `I'` and `(r+1)`-tuples `J`. Only pairs that can
    /// contain a nonzero product are generated: `I' ∪ {j_p}` and `J ∖ {j_p}`
    /// must both be in the support.
    pub fn is_decomposable(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::domain("decomposability of the zero element"));
        }
        let support: Vec<&Vec<usize>> = self.coeffs.keys().collect();
        let mut pairs = BTreeSet::new();
        for a in &support {
            for b in &support {
                for (pos, &x) in a.iter().enumerate() {
                    if b.binary_search(&x).is_ok() {
                        continue;
                    }
                    let mut i_prime = (*a).clone();
                    i_prime.remove(pos);
                    let mut j = (*b).clone();
                    let at = j.binary_search(&x).unwrap_err();
                    j.insert(at, x);
                    pairs.insert((i_prime, j));
                }
            }
        }
        let pairs: Vec<_> = pairs.into_iter().collect();
        Ok(pairs.par_iter().all(|(i_prime, j)| {
            let mut sum = Rational::zero();
            for (p, &jp) in j.iter().enumerate() {
                let mut left = i_prime.clone();
                left.push(jp);
                let mut right = j.clone();
                right.remove(p);
                let term = self.signed_coeff(&left) * self.coeff(&right);
                if p % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            sum.is_zero()
        }))
    }

    /// The vectors `⟨ω, e_K^*⟩` for `(r-1)`-tuples `K` below the support,
    /// as coordinate rows of length `m`.
    pub fn contractions(&self) -> Matrix {
        if self.r == 0 {
            return Vec::new();
        }
        let mut shadow = BTreeSet::new();
        for idx in self.coeffs.keys() {
            for p in 0..idx.len() {
                let mut k = idx.clone();
                k.remove(p);
                shadow.insert(k);
            }
        }
        shadow
            .into_iter()
            .map(|k| {
                (1..=self.m)
                    .map(|i| {
                        let mut t = k.clone();
                        t.push(i);
                        self.signed_coeff(&t)
                    })
                    .collect()
            })
            .collect()
    }

    /// Dimension of the span of the contractions; equals `r` exactly when
    /// the nonzero element is decomposable.
    pub fn contraction_rank(&self) -> usize {
        linalg::rank(&self.contractions())
    }

    /// A basis `w_1, ..., w_r` of the span of the contractions, in reduced
    /// echelon form, whose wedge is a nonzero multiple of `ω`.
    pub fn recover_factors(&self) -> Result<Matrix> {
        if self.is_zero() {
            return Err(Error::domain("cannot factor the zero element"));
        }
        let (rows, _) = linalg::rref(&self.contractions());
        if rows.len() != self.r {
            return Err(Error::domain(format!(
                "element is not decomposable: contractions span dimension {}, degree is {}",
                rows.len(),
                self.r
            )));
        }
        Ok(rows)
    }

    /// Disjoint index sets `I_1, ..., I_s` with `|I_q| >= 2`,
    /// `Σ |I_q| = r + s` and `Supp(ω) ⊇ Supp(δ e_{I_1} ∧ ... ∧ δ e_{I_s})`.
    ///
    /// The factors are brought to reduced echelon form
    /// `w_p = e_{i_p} + Σ a_{pj} e_j` (pivots `i_1 < ... < i_r`); `j_p` is the
    /// least non-pivot index with `a_{pj} != 0`, and the pivots sharing a
    /// `j` are grouped with it.
    pub fn extract_index_families(&self) -> Result<IndexFamilies> {
        if self.r == 0 {
            return Err(Error::domain("index families need degree r >= 1"));
        }
        if self.is_zero() {
            return Err(Error::domain("index families of the zero element"));
        }
        if !self.koszul_delta()?.is_zero() {
            return Err(Error::domain("element is not δ-closed"));
        }
        let rows = self.recover_factors()?;
        let (rows, pivots) = linalg::rref(&rows);
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (row, &pivot) in rows.iter().zip(&pivots) {
            let j = (0..self.m)
                .find(|c| !pivots.contains(c) && !row[*c].is_zero())
                .ok_or_else(|| {
                    Error::Verification(format!(
                        "factor with pivot e_{} has no off-pivot entry although δ(ω) = 0",
                        pivot + 1
                    ))
                })?;
            groups.entry(j).or_default().push(pivot);
        }
        let families = groups
            .into_iter()
            .map(|(j, mut members)| {
                members.push(j);
                members.sort_unstable();
                members.into_iter().map(|i| i + 1).collect()
            })
            .collect();
        let out = IndexFamilies { families };
        let check = out.check(self)?;
        if !check.holds() {
            return Err(Error::Verification(format!(
                "extracted families {out} fail their conclusions: {check:?}"
            )));
        }
        Ok(out)
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if idx.is_empty() {
                continue;
            }
            let names: Vec<String> = idx.iter().map(|i| format!("e{i}")).collect();
            write!(f, "*{}", names.join("^"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexFamilies {
    pub families: Vec<Vec<usize>>,
}

/// The individual conclusions a family list is required to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub disjoint: bool,
    pub sizes_at_least_two: bool,
    pub cardinality: bool,
    pub support_inclusion: bool,
}

impl FamilyCheck {
    pub fn holds(&self) -> bool {
        self.disjoint && self.sizes_at_least_two && self.cardinality && self.support_inclusion
    }
}

impl IndexFamilies {
    pub fn s(&self) -> usize {
        self.families.len()
    }

    /// `δ(e_{I_1}) ∧ ... ∧ δ(e_{I_s})`.
    pub fn delta_product(&self, m: usize) -> Result<ExteriorElement> {
        let mut acc = ExteriorElement::scalar(m, Rational::one());
        for family in &self.families {
            acc = acc.wedge(&ExteriorElement::basis(m, family)?.koszul_delta()?)?;
        }
        Ok(acc)
    }

    /// Evaluates every conclusion against `ω` by direct expansion.
    pub fn check(&self, omega: &ExteriorElement) -> Result<FamilyCheck> {
        let mut seen = BTreeSet::new();
        let disjoint = self.families.iter().flatten().all(|&i| seen.insert(i));
        let sizes_at_least_two = self.families.iter().all(|f| f.len() >= 2);
        let total: usize = self.families.iter().map(Vec::len).sum();
        let cardinality = total == omega.degree() + self.s();
        let support_inclusion = if disjoint && sizes_at_least_two && cardinality {
            let product = self.delta_product(omega.m())?;
            product.degree() == omega.degree()
                && product.coeffs.keys().all(|k| omega.coeffs.contains_key(k))
        } else {
            false
        };
        Ok(FamilyCheck {
            disjoint,
            sizes_at_least_two,
            cardinality,
            support_inclusion,
        })
    }
}

impl fmt::Display for IndexFamilies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .families
            .iter()
            .map(|fam| {
                let ids: Vec<String> = fam.iter().map(ToString::to_string).collect();
                format!("{{{}}}", ids.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Searches all lists of disjoint index sets of `{1..m}` for one meeting
/// the conclusions of [`ExteriorElement::extract_index_families`]. Unlike
/// extraction, this needs neither decomposability nor `δ(ω) = 0`.
pub fn find_index_families(omega: &ExteriorElement) -> Result<Option<IndexFamilies>> {
    if omega.m() > FAMILY_SEARCH_LIMIT {
        return Err(Error::Resource(format!(
            "family search enumerates subsets of 1..={}; limit is {FAMILY_SEARCH_LIMIT}",
            omega.m()
        )));
    }
    if omega.is_zero() || omega.degree() == 0 {
        return Ok(None);
    }
    let mut chosen = Vec::new();
    search_families(omega, 1, 0, &mut chosen)
}

/// Chooses families with increasing least elements; `used` is a bit mask
/// and `chosen` accumulates `Σ (|I_q| - 1)` until it reaches `r`.
fn search_families(
    omega: &ExteriorElement,
    start: usize,
    used: u32,
    chosen: &mut Vec<Vec<usize>>,
) -> Result<Option<IndexFamilies>> {
    let filled: usize = chosen.iter().map(|f| f.len() - 1).sum();
    if filled == omega.degree() {
        let candidate = IndexFamilies {
            families: chosen.clone(),
        };
        return Ok(candidate.check(omega)?.holds().then_some(candidate));
    }
    let m = omega.m();
    let need = omega.degree() - filled;
    for least in start..=m {
        if used & (1 << least) != 0 {
            continue;
        }
        let free: Vec<usize> = (least + 1..=m).filter(|&i| used & (1 << i) == 0).collect();
        // Subsets of `free` of size 1..=need complete a family led by `least`.
        for size in 1..=need.min(free.len()) {
            for pick in crate::criterion::combinations(free.len(), size) {
                let mut family = vec![least];
                family.extend(pick.iter().map(|&p| free[p]));
                let mask = family.iter().fold(used, |acc, &i| acc | (1 << i));
                chosen.push(family);
                let found = search_families(omega, least + 1, mask, chosen)?;
                chosen.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
    }
    Ok(None)
}
