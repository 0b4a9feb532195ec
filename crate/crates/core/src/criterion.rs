//! Slope (semi)stability of the syzygy sheaf attached to a monomial set.
//!
//! For distinct monomials `u_1, ..., u_m` of degrees `d_i` without common
//! factor, the syzygy sheaf is (semi)stable iff for every index set `I` with
//! `2 <= |I| <= m - 1`
//!
//! ```text
//! (deg gcd(u_i : i in I) - sum_{i in I} d_i) / (|I| - 1)  (<=) <  -(d_1 + ... + d_m) / (m - 1).
//! ```
//!
//! When all degrees equal `d` this reduces to a condition on colon spaces:
//! for every monomial `u` of degree `1 <= e <= d - 1`,
//!
//! ```text
//! (dim (V : u) - 1) / (d - e)  (<=) <  (m - 1) / d.
//! ```
//!
//! [`check_equal_degree`] implements the colon form, [`check_mixed`] the
//! subset form by exact branch-and-bound enumeration. Inputs sharing a common
//! factor are divided by it first; the factor is recorded in the verdict and
//! all reported quantities refer to the normalized set.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::count_monomials;
use crate::error::{Error, Result};
use crate::monomial::{enumerate_monomials, pure_powers, Monomial, MonomialSet};
use crate::rational::{from_small, Rational};

type Small = Ratio<i64>;

/// Default upper bound on `m` for the mixed-degree subset search.
pub const DEFAULT_SUBSET_BUDGET: usize = 20;

/// Default cap on the number of sets visited by [`exhaustive_classify`].
pub const DEFAULT_EXHAUSTIVE_GUARD: u128 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Status {
    fn compare(extremal: Option<&Rational>, reference: &Rational) -> Status {
        match extremal {
            None => Status::Stable,
            Some(x) if x < reference => Status::Stable,
            Some(x) if x == reference => Status::StrictlySemistable,
            Some(_) => Status::Unstable,
        }
    }

    pub fn is_semistable(self) -> bool {
        self != Status::Unstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    ColonMonomial,
    Subset,
}

/// One maximizer of the left-hand side.
///
/// For [`WitnessKind::ColonMonomial`], `u` is the colon monomial and `e` its
/// degree. For [`WitnessKind::Subset`], `subset` holds 0-based positions in
/// the canonical order of the set and `u`/`e` describe the gcd of the subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub u: Option<Monomial>,
    pub e: Option<u32>,
    pub subset: Option<Vec<usize>>,
    pub lhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    /// `(m - 1) / d` on the colon path, `-(sum d_i) / (m - 1)` on the subset path.
    pub reference_slope: Rational,
    /// Maximum of the left-hand side; `None` when the quantifier range is empty.
    pub extremal_value: Option<Rational>,
    pub witnesses: Vec<Witness>,
    /// Common factor divided out before checking, if any.
    pub normalized_by: Option<Monomial>,
}

impl Verdict {
    fn vacuous(reference_slope: Rational, normalized_by: Option<Monomial>) -> Self {
        Verdict {
            status: Status::Stable,
            reference_slope,
            extremal_value: None,
            witnesses: Vec::new(),
            normalized_by,
        }
    }

    pub fn is_vacuous(&self) -> bool {
        self.extremal_value.is_none()
    }
}

/// Which monomials `u` the colon check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EqualDegreeSearch {
    /// Divisors of pairwise gcds; any other `u` has `dim (V:u) <= 1`.
    #[default]
    Pruned,
    /// Every monomial of every degree `1..d`.
    Full,
}

fn normalize(set: &MonomialSet) -> Result<(MonomialSet, Option<Monomial>)> {
    let g = set.common_factor();
    if g.is_one() {
        Ok((set.clone(), None))
    } else {
        Ok((set.divide_by(&g)?, Some(g)))
    }
}

pub fn check_equal_degree(set: &MonomialSet) -> Result<Verdict> {
    check_equal_degree_with(set, EqualDegreeSearch::Pruned)
}

pub fn check_equal_degree_with(set: &MonomialSet, search: EqualDegreeSearch) -> Result<Verdict> {
    if set.len() < 2 {
        return Err(Error::domain(format!("need at least 2 monomials, got {}", set.len())));
    }
    if set.uniform_degree().is_none() {
        return Err(Error::domain("equal-degree check on a mixed-degree set"));
    }
    let (v, normalized_by) = normalize(set)?;
    let d = v.uniform_degree().expect("normalization keeps degrees equal");
    let m = v.len() as i64;
    let reference = Small::new(m - 1, i64::from(d));
    if d <= 1 {
        return Ok(Verdict::vacuous(from_small(reference), normalized_by));
    }

    let candidates: Vec<Monomial> = match search {
        EqualDegreeSearch::Full => (1..d)
            .flat_map(|e| enumerate_monomials(v.n(), e).monomials().to_vec())
            .collect(),
        EqualDegreeSearch::Pruned => pruned_candidates(&v, d),
    };

    let mut best: Option<Small> = None;
    let mut maximizers: Vec<Monomial> = Vec::new();
    for u in candidates {
        let dim = v.colon_dim_unchecked(&u) as i64;
        let lhs = Small::new(dim - 1, i64::from(d - u.degree()));
        match best {
            Some(b) if lhs < b => {}
            Some(b) if lhs == b => maximizers.push(u),
            _ => {
                best = Some(lhs);
                maximizers = vec![u];
            }
        }
    }
    maximizers.sort_by(|a, b| b.cmp(a));
    maximizers.dedup();

    let extremal = best.map(from_small);
    let reference = from_small(reference);
    let witnesses = maximizers
        .into_iter()
        .map(|u| Witness {
            kind: WitnessKind::ColonMonomial,
            e: Some(u.degree()),
            u: Some(u),
            subset: None,
            lhs: extremal.clone().expect("maximizers imply a maximum"),
        })
        .collect();
    Ok(Verdict {
        status: Status::compare(extremal.as_ref(), &reference),
        reference_slope: reference,
        extremal_value: extremal,
        witnesses,
        normalized_by,
    })
}

/// Divisors of degree `1..d` of pairwise gcds. If every pair is coprime, no
/// `u` reaches colon dimension 2 and the maximum (zero) is attained exactly
/// by the proper divisors of the elements, which are returned instead.
fn pruned_candidates(v: &MonomialSet, d: u32) -> Vec<Monomial> {
    let mons = v.monomials();
    let mut gcds: BTreeSet<Monomial> = BTreeSet::new();
    for (i, a) in mons.iter().enumerate() {
        for b in &mons[i + 1..] {
            let g = a.gcd(b);
            if !g.is_one() {
                gcds.insert(g);
            }
        }
    }
    let sources: Vec<&Monomial> = if gcds.is_empty() {
        mons.iter().collect()
    } else {
        gcds.iter().collect()
    };
    let mut out: BTreeSet<Monomial> = BTreeSet::new();
    for g in sources {
        out.extend(g.divisors(1, d - 1));
    }
    out.into_iter().collect()
}

/// Subset form of the criterion for monomials of arbitrary degrees.
pub fn check_mixed(set: &MonomialSet, subset_budget: usize) -> Result<Verdict> {
    let m = set.len();
    if m < 2 {
        return Err(Error::domain(format!("need at least 2 monomials, got {m}")));
    }
    if m > subset_budget {
        return Err(Error::Resource(format!(
            "mixed-degree check over {m} monomials exceeds the subset budget of {subset_budget}"
        )));
    }
    let (u, normalized_by) = normalize(set)?;
    let total: i64 = u.degrees().iter().map(|&d| i64::from(d)).sum();
    let reference = from_small(Small::new(-total, m as i64 - 1));

    let search = SubsetSearch::run(u.monomials(), false);
    let Some(best) = search.best else {
        return Ok(Verdict::vacuous(reference, normalized_by));
    };
    let extremal = from_small(best);
    let witnesses = search
        .maximizers
        .into_iter()
        .map(|subset| {
            let g = subset
                .iter()
                .skip(1)
                .fold(u.monomials()[subset[0]].clone(), |g, &i| g.gcd(&u.monomials()[i]));
            Witness {
                kind: WitnessKind::Subset,
                e: Some(g.degree()),
                u: Some(g),
                subset: Some(subset),
                lhs: extremal.clone(),
            }
        })
        .collect();
    Ok(Verdict {
        status: Status::compare(Some(&extremal), &reference),
        reference_slope: reference,
        extremal_value: Some(extremal),
        witnesses,
        normalized_by,
    })
}

/// Exact maximization of `(deg gcd_I - sum_I d_i) / (|I| - 1)` over
/// `2 <= |I| <= m - 1`, keeping every maximizer.
struct SubsetSearch<'a> {
    mons: &'a [Monomial],
    degs: Vec<i64>,
    max_size: usize,
    /// Restrict to subsets whose gcd has positive degree.
    shared_only: bool,
    best: Option<Small>,
    maximizers: Vec<Vec<usize>>,
}

impl<'a> SubsetSearch<'a> {
    fn run(mons: &'a [Monomial], shared_only: bool) -> Self {
        let m = mons.len();
        let mut search = SubsetSearch {
            mons,
            degs: mons.iter().map(|u| i64::from(u.degree())).collect(),
            max_size: m.saturating_sub(1),
            shared_only,
            best: None,
            maximizers: Vec::new(),
        };
        if search.max_size < 2 {
            return search;
        }
        search.seed();
        let mut subset = Vec::with_capacity(m);
        for i in 0..m {
            subset.push(i);
            let sum = search.degs[i];
            search.visit(&mut subset, mons[i].clone(), sum);
            subset.pop();
        }
        search.maximizers.sort();
        search.maximizers.dedup();
        search
    }

    fn value(&self, gcd_degree: i64, sum: i64, size: usize) -> Small {
        Small::new(gcd_degree - sum, size as i64 - 1)
    }

    /// Lower bound on the optimum from pairs and co-singletons, so pruning
    /// bites from the first node. Only the value is kept; the enumeration
    /// rediscovers the maximizers.
    fn seed(&mut self) {
        let m = self.mons.len();
        let mut best: Option<Small> = None;
        let mut offer = |v: Small| {
            if best.is_none_or(|b| v > b) {
                best = Some(v);
            }
        };
        for i in 0..m {
            for j in i + 1..m {
                let g = i64::from(self.mons[i].gcd(&self.mons[j]).degree());
                if !self.shared_only || g > 0 {
                    offer(self.value(g, self.degs[i] + self.degs[j], 2));
                }
            }
        }
        let total: i64 = self.degs.iter().sum();
        for skip in 0..m {
            let g = self
                .mons
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, u)| u)
                .fold(None::<Monomial>, |acc, u| Some(acc.map_or(u.clone(), |g| g.gcd(u))))
                .map_or(0, |g| i64::from(g.degree()));
            if !self.shared_only || g > 0 {
                offer(self.value(g, total - self.degs[skip], m - 1));
            }
        }
        self.best = best;
    }

    fn record(&mut self, subset: &[usize], value: Small) {
        match self.best {
            Some(b) if value < b => {}
            Some(b) if value == b => self.maximizers.push(subset.to_vec()),
            _ => {
                self.best = Some(value);
                self.maximizers = vec![subset.to_vec()];
            }
        }
    }

    fn visit(&mut self, subset: &mut Vec<usize>, gcd: Monomial, sum: i64) {
        let r = subset.len();
        let g = i64::from(gcd.degree());
        if self.shared_only && g == 0 {
            return;
        }
        if r >= 2 && r <= self.max_size {
            let v = self.value(g, sum, r);
            self.record(subset, v);
        }
        let last = *subset.last().expect("nonempty");
        let room = self.max_size.saturating_sub(r);
        let candidates: Vec<usize> = (last + 1..self.mons.len()).collect();
        if room == 0 || candidates.is_empty() {
            return;
        }
        if let Some(best) = self.best {
            match self.extension_bound(&gcd, sum, r, &candidates, room) {
                Some(bound) if bound >= best => {}
                _ => return,
            }
        }
        for j in candidates {
            let next_gcd = gcd.gcd(&self.mons[j]);
            subset.push(j);
            self.visit(subset, next_gcd, sum + self.degs[j]);
            subset.pop();
        }
    }

    /// Upper bound on the value of any proper superset obtained by adding
    /// `k >= 1` of the candidates: the new gcd is at most the k-th largest
    /// `deg gcd(G, u_j)` and the added degrees at least the k smallest `d_j`.
    fn extension_bound(
        &self,
        gcd: &Monomial,
        sum: i64,
        r: usize,
        candidates: &[usize],
        room: usize,
    ) -> Option<Small> {
        let mut shared: Vec<i64> = candidates
            .iter()
            .map(|&j| i64::from(gcd.gcd(&self.mons[j]).degree()))
            .collect();
        shared.sort_unstable_by(|a, b| b.cmp(a));
        let mut degs: Vec<i64> = candidates.iter().map(|&j| self.degs[j]).collect();
        degs.sort_unstable();
        let mut added = 0;
        let mut bound: Option<Small> = None;
        for k in 1..=room.min(candidates.len()) {
            added += degs[k - 1];
            let h = shared[k - 1];
            if self.shared_only && h == 0 {
                break;
            }
            let v = self.value(h, sum + added, r + k);
            if bound.is_none_or(|b| v > b) {
                bound = Some(v);
            }
        }
        bound
    }
}

/// Agreement report between the colon path and the subset path on an
/// equal-degree set.
///
/// The two paths maximize different expressions. Under the map
/// `v -> -1 / (v + d)` a subset value `(g - r d)/(r - 1)` becomes
/// `(r - 1)/(d - g)`, which is the colon-path quantity for `u = gcd_I`.
/// The two maxima coincide on subsets with `g >= 1` and colon monomials
/// with `dim (V:u) >= 2`; the remaining terms are strictly below the
/// reference on both sides and are excluded from the comparison.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub equal: Verdict,
    pub mixed: Verdict,
    pub equal_shared_max: Option<Rational>,
    pub mixed_shared_max: Option<Rational>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.equal.status == self.mixed.status && self.equal_shared_max == self.mixed_shared_max
    }
}

pub fn cross_check_report(set: &MonomialSet, subset_budget: usize) -> Result<CrossCheck> {
    let equal = check_equal_degree(set)?;
    let mixed = check_mixed(set, subset_budget)?;
    let zero = Rational::from_integer(0.into());
    let equal_shared_max = equal.extremal_value.clone().filter(|x| *x > zero);

    let (u, _) = normalize(set)?;
    let d = i64::from(u.uniform_degree().expect("equal-degree input"));
    let shared = SubsetSearch::run(u.monomials(), true);
    let mixed_shared_max = shared.best.map(|v| from_small(Small::from_integer(-1) / (v + d)));
    Ok(CrossCheck {
        equal,
        mixed,
        equal_shared_max,
        mixed_shared_max,
    })
}

/// True iff both criteria give the same status and the same extremal value
/// (compared through the transform documented on [`CrossCheck`]).
pub fn cross_check(set: &MonomialSet, subset_budget: usize) -> Result<bool> {
    Ok(cross_check_report(set, subset_budget)?.agrees())
}

/// Number of base point free `m`-subsets of `S_d` in `n + 1` variables.
pub fn bpf_subset_count(n: u32, d: u32, m: u64) -> u128 {
    let total = u128::from(count_monomials(n, d));
    let fixed = u128::from(n) + 1;
    let m = u128::from(m);
    if m < fixed || m > total {
        return 0;
    }
    binomial(total - fixed, m - fixed)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Every base point free `m`-subset of `S_d` with its equal-degree verdict,
/// in lexicographic order of the chosen non-pure monomials.
pub fn exhaustive_classify(n: u32, d: u32, m: u64, guard: u128) -> Result<Vec<(MonomialSet, Verdict)>> {
    let total = count_monomials(n, d);
    if n < 1 || d < 1 || m < u64::from(n) + 1 || m > total {
        return Err(Error::domain(format!(
            "need n >= 1, d >= 1 and {} <= m <= {total}, got (n, d, m) = ({n}, {d}, {m})",
            n + 1
        )));
    }
    if m < 2 {
        return Err(Error::domain("need at least 2 monomials"));
    }
    let count = bpf_subset_count(n, d, m);
    if count > guard {
        return Err(Error::Resource(format!(
            "{count} b.p.f. subsets exceed the enumeration guard of {guard}"
        )));
    }
    let base = pure_powers(n, d);
    let others: Vec<Monomial> = enumerate_monomials(n, d)
        .iter()
        .filter(|u| !base.contains(u))
        .cloned()
        .collect();
    let pick = (m - u64::from(n) - 1) as usize;
    let combos = combinations(others.len(), pick);
    combos
        .into_par_iter()
        .map(|combo| {
            let extra = combo.iter().map(|&i| others[i].clone()).collect();
            let set = base.union(&MonomialSet::new(n, extra)?)?;
            let verdict = check_equal_degree(&set)?;
            Ok((set, verdict))
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
