//! Explicit base point free monomial subspaces `V ⊆ S_d` of every admissible
//! dimension whose syzygy bundle is stable.
//!
//! The dispatch is recursive:
//!
//! * `n = 1`: `X_0^d` together with `X_0^{pc} X_1^{d-pc}`, `0 <= p <= m-2`.
//! * `n = 2`, `m <= 2d+1`: the union of two binary pieces sharing `X_0^d`
//!   (non-strict in general, strict after re-tuning the step sizes except at
//!   `m = d+1` and `m = 2d+1`, which get one extra mixed monomial).
//! * `n = 2`, `m >= 2d+2`: `S'_d + W·X_2` with `W` built one degree lower.
//! * `n >= 3`: three cases according to how `m` compares with `P_{n-1}(d)`.
//!
//! Every result is checked with [`check_equal_degree`] before it is
//! returned, and carries a [`ConstructionTrace`] from which
//! [`replay`] rebuilds the identical set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::count_monomials;
use crate::criterion::{check_equal_degree, Status, Verdict};
use crate::error::{Error, Result};
use crate::monomial::{enumerate_monomials, pure_powers, Monomial, MonomialSet};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    /// Every colon inequality strict: the bundle is stable.
    Strict,
    /// Equality allowed: semistable suffices.
    #[serde(rename = "nonstrict")]
    NonStrict,
}

impl Strictness {
    pub fn accepts(self, status: Status) -> bool {
        match self {
            Strictness::Strict => status == Status::Stable,
            Strictness::NonStrict => status.is_semistable(),
        }
    }
}

impl fmt::Display for Strictness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strictness::Strict => "strict",
            Strictness::NonStrict => "nonstrict",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "Thm4-Case1")]
    Thm4Case1,
    #[serde(rename = "Thm4-Case2")]
    Thm4Case2,
    #[serde(rename = "Thm4-Case3")]
    Thm4Case3,
    #[serde(rename = "R3.1")]
    R31,
    #[serde(rename = "R3.2-Case1")]
    R32Case1,
    #[serde(rename = "R3.2-Case2")]
    R32Case2,
    #[serde(rename = "R3.2-Case3")]
    R32Case3,
    #[serde(rename = "R3.3")]
    R33,
    #[serde(rename = "R3.4-Case1")]
    R34Case1,
    #[serde(rename = "R3.4-Case2")]
    R34Case2,
    #[serde(rename = "R3.4-Case3")]
    R34Case3,
    #[serde(rename = "Special-m=d+1")]
    SpecialDPlusOne,
    #[serde(rename = "Special-m=2d+1")]
    SpecialTwoDPlusOne,
    #[serde(rename = "Exceptional-(2,2,5)")]
    Exceptional225,
    #[serde(rename = "Full-S1")]
    FullS1,
}

impl Rule {
    fn is_two_piece(self) -> bool {
        matches!(
            self,
            Rule::R32Case1
                | Rule::R32Case2
                | Rule::R32Case3
                | Rule::R34Case1
                | Rule::R34Case2
                | Rule::R34Case3
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceParams {
    pub n: u32,
    pub d: u32,
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_2: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_2: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
}

impl TraceParams {
    fn new(n: u32, d: u32, m: u64) -> Self {
        TraceParams {
            n,
            d,
            m,
            ..Default::default()
        }
    }

    fn with_split(mut self, split: Split) -> Self {
        self.m_1 = Some(split.m1);
        self.m_2 = Some(split.m2);
        self.c_1 = Some(split.c1);
        self.c_2 = Some(split.c2);
        self
    }

    fn split(&self) -> Option<Split> {
        Some(Split {
            m1: self.m_1?,
            m2: self.m_2?,
            c1: self.c_1?,
            c2: self.c_2?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub rule: Rule,
    pub params: TraceParams,
    /// Which sub-branch of the rule fired, when the rule has several.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ConstructionTrace>,
}

impl ConstructionTrace {
    fn leaf(rule: Rule, params: TraceParams) -> Self {
        ConstructionTrace {
            rule,
            params,
            branch: None,
            children: Vec::new(),
        }
    }

    fn branch(mut self, branch: &str) -> Self {
        self.branch = Some(branch.to_string());
        self
    }

    fn child(mut self, child: ConstructionTrace) -> Self {
        self.children.push(child);
        self
    }

    /// Visits this node and all descendants, parents first.
    pub fn walk(&self, visit: &mut impl FnMut(&ConstructionTrace)) {
        visit(self);
        for child in &self.children {
            child.walk(visit);
        }
    }
}

/// A certified construction.
#[derive(Debug, Clone)]
pub struct Construction {
    pub set: MonomialSet,
    pub trace: ConstructionTrace,
    pub verdict: Verdict,
}

/// Sizes and step widths of the two binary pieces `V_01`, `V_02`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub m1: u32,
    pub m2: u32,
    pub c1: u32,
    pub c2: u32,
}

/// Which of the parameter relations a [`Split`] satisfies for `(d, m)`.
///
/// * `base`: `m - 1 = (m_1 - 1) + (m_2 - 1)` and
///   `d/(m-1) <= c_i <= d/(m_i - 1)`; enough for the non-strict inequalities.
/// * `strict_first`: `d/(m-1) < c_1 < d/(m_1-1)` and `d/(m-1) < c_2 <= d/(m_2-1)`.
/// * `strict_second`: the same with the strict upper bound on `c_2` instead.
///
/// Either strict relation (together with `base`) gives the strict inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitRelations {
    pub base: bool,
    pub strict_first: bool,
    pub strict_second: bool,
}

impl SplitRelations {
    pub fn strict(&self) -> bool {
        self.base && (self.strict_first || self.strict_second)
    }
}

pub fn split_relations(d: u32, m: u32, split: Split) -> SplitRelations {
    let (d, m) = (u64::from(d), u64::from(m));
    let (m1, m2, c1, c2) = (
        u64::from(split.m1),
        u64::from(split.m2),
        u64::from(split.c1),
        u64::from(split.c2),
    );
    let sizes = m1 >= 2 && m2 >= 2 && m - 1 == (m1 - 1) + (m2 - 1);
    // d/(m-1) <= c  <=>  d <= c (m-1);   c <= d/(k-1)  <=>  c (k-1) <= d.
    let base = sizes
        && d <= c1 * (m - 1)
        && c1 * (m1 - 1) <= d
        && d <= c2 * (m - 1)
        && c2 * (m2 - 1) <= d;
    let lower = d < c1 * (m - 1) && d < c2 * (m - 1);
    SplitRelations {
        base,
        strict_first: sizes && lower && c1 * (m1 - 1) < d && c2 * (m2 - 1) <= d,
        strict_second: sizes && lower && c1 * (m1 - 1) <= d && c2 * (m2 - 1) < d,
    }
}

fn check_range(n: u32, d: u32, m: u64) -> Result<()> {
    if d < 1 {
        return Err(Error::domain("degree must be at least 1"));
    }
    let (lo, hi) = match n {
        0 => return Err(Error::domain("n must be at least 1")),
        1 => (2, u64::from(d) + 1),
        _ => (u64::from(n) + 1, count_monomials(n, d)),
    };
    if m < lo || m > hi {
        return Err(Error::domain(format!(
            "m = {m} outside {lo}..={hi} for n = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// `X_0^d + sum_{p=0}^{m-2} X_0^{pc} X_1^{d-pc}` in two variables. Every
/// colon ratio `(dim (V:u) - 1)/(d - e)` of the result is at most `1/c`.
pub fn construct_n1(d: u32, m: u32, c: u32) -> Result<MonomialSet> {
    if d < 1 || m < 2 || m > d + 1 || c < 1 || (m - 1) * c > d {
        return Err(Error::domain(format!(
            "binary construction needs d >= 1, 2 <= m <= d+1, c >= 1, (m-1)c <= d; got d = {d}, m = {m}, c = {c}"
        )));
    }
    let mut mons = vec![Monomial::new(vec![d, 0])];
    for p in 0..=(m - 2) {
        mons.push(Monomial::new(vec![p * c, d - p * c]));
    }
    MonomialSet::new(1, mons)
}

/// Re-expresses a binary set in `X_0, X_target` inside `n + 1` variables.
fn place_binary(set: &MonomialSet, n: u32, target: usize) -> Result<MonomialSet> {
    let vars = n as usize + 1;
    let mons = set
        .iter()
        .map(|u| {
            let mut e = vec![0; vars];
            e[0] = u.exponents()[0];
            e[target] = u.exponents()[1];
            Monomial::new(e)
        })
        .collect();
    MonomialSet::new(n, mons)
}

fn two_piece_set(d: u32, split: Split) -> Result<MonomialSet> {
    let v01 = place_binary(&construct_n1(d, split.m1, split.c1)?, 2, 1)?;
    let v02 = place_binary(&construct_n1(d, split.m2, split.c2)?, 2, 2)?;
    v01.union(&v02)
}

fn two_piece_trace(rule: Rule, d: u32, m: u64, split: Split) -> ConstructionTrace {
    let piece = |mi: u32, ci: u32| {
        let mut p = TraceParams::new(1, d, u64::from(mi));
        p.c = Some(ci);
        ConstructionTrace::leaf(Rule::R31, p)
    };
    ConstructionTrace::leaf(rule, TraceParams::new(2, d, m).with_split(split))
        .child(piece(split.m1, split.c1))
        .child(piece(split.m2, split.c2))
}

/// `S'_d + W·X_n` where `S' = k[X_0..X_{n-1}]` and `W ⊆ S_{d-1}`.
fn lift_through_last(n: u32, d: u32, w: &MonomialSet) -> Result<MonomialSet> {
    let vars = n as usize + 1;
    let lower = enumerate_monomials(n - 1, d).embed(1);
    lower.union(&w.times(&Monomial::pure_power(vars, n as usize, 1)))
}

/// `S'_d + (X_l^{d-1} + ... + X_n^{d-1}) X_n`.
fn thm4_case2_set(n: u32, d: u32, l: u32) -> Result<MonomialSet> {
    let vars = n as usize + 1;
    let x_n = Monomial::pure_power(vars, n as usize, 1);
    let tail = (l..=n)
        .map(|j| Monomial::pure_power(vars, j as usize, d - 1).mul(&x_n))
        .collect();
    enumerate_monomials(n - 1, d).embed(1).union(&MonomialSet::new(n, tail)?)
}

fn balanced(d: u32) -> (u32, u32) {
    (d / 2, d - d / 2)
}

/// Extra monomial added to the `d`-dimensional two-piece set when `m = d+1`.
fn extra_for_d_plus_one(d: u32) -> Monomial {
    match d {
        3 => Monomial::new(vec![1, 1, 1]),
        4 => Monomial::new(vec![1, 1, 2]),
        5 => Monomial::new(vec![1, 2, 2]),
        _ => {
            let (a, b) = balanced(d);
            Monomial::new(vec![0, a, b])
        }
    }
}

fn cubic_seven() -> MonomialSet {
    MonomialSet::from_exponents(
        2,
        vec![
            vec![3, 0, 0],
            vec![1, 2, 0],
            vec![0, 3, 0],
            vec![2, 0, 1],
            vec![1, 1, 1],
            vec![0, 1, 2],
            vec![0, 0, 3],
        ],
    )
    .expect("static set is valid")
}

/// Parameters of the non-strict two-piece construction for `3 <= m <= 2d+1`.
pub fn nonstrict_split(d: u32, m: u32) -> Result<(Rule, Split)> {
    if d < 1 || m < 3 || m > 2 * d + 1 {
        return Err(Error::domain(format!(
            "two-piece construction needs 3 <= m <= 2d+1, got d = {d}, m = {m}"
        )));
    }
    Ok(if m <= d + 1 && m % 2 == 1 {
        let t = (m - 1) / 2;
        (
            Rule::R32Case1,
            Split {
                m1: t + 1,
                m2: t + 1,
                c1: d / t,
                c2: d / t,
            },
        )
    } else if m <= d + 1 {
        let t = (m - 2) / 2;
        (
            Rule::R32Case2,
            Split {
                m1: t + 2,
                m2: t + 1,
                c1: d / (t + 1),
                c2: d / t,
            },
        )
    } else {
        (
            Rule::R32Case3,
            Split {
                m1: d + 1,
                m2: m - d,
                c1: 1,
                c2: 1,
            },
        )
    })
}

/// Re-tuned parameters giving strict inequalities for
/// `3 <= m <= 2d`, `m != d + 1`.
pub fn strict_split(d: u32, m: u32) -> Result<(Rule, &'static str, Split)> {
    if d < 1 || m < 3 || m > 2 * d || m == d + 1 {
        return Err(Error::domain(format!(
            "strict two-piece construction needs 3 <= m <= 2d, m != d+1; got d = {d}, m = {m}"
        )));
    }
    if m >= d + 2 {
        let (_, split) = nonstrict_split(d, m)?;
        return Ok((Rule::R34Case3, "shared", split));
    }
    if m % 2 == 1 {
        let t = (m - 1) / 2;
        if !d.is_multiple_of(t) {
            let (_, split) = nonstrict_split(d, m)?;
            Ok((Rule::R34Case1, "t-does-not-divide-d", split))
        } else {
            let c = d / t - 1;
            Ok((
                Rule::R34Case1,
                "t-divides-d",
                Split {
                    m1: t + 1,
                    m2: t + 1,
                    c1: c,
                    c2: c,
                },
            ))
        }
    } else {
        let t = (m - 2) / 2;
        if !d.is_multiple_of(t) {
            let (_, split) = nonstrict_split(d, m)?;
            Ok((Rule::R34Case2, "t-does-not-divide-d", split))
        } else {
            Ok((
                Rule::R34Case2,
                "t-divides-d",
                Split {
                    m1: t + 2,
                    m2: t + 1,
                    c1: d / (t + 1),
                    c2: d / t - 1,
                },
            ))
        }
    }
}

/// Certifies a candidate: size, base point freeness, and the colon
/// inequalities at the requested strictness.
fn certify(
    n: u32,
    d: u32,
    m: u64,
    strictness: Strictness,
    set: MonomialSet,
    trace: ConstructionTrace,
) -> Result<Construction> {
    let fail = |what: String| {
        Error::Verification(format!(
            "{what} for (n, d, m) = ({n}, {d}, {m}) via {:?}",
            trace.rule
        ))
    };
    if set.len() as u64 != m {
        return Err(fail(format!("constructed {} monomials", set.len())));
    }
    if set.uniform_degree() != Some(d) || !set.is_bpf()? {
        return Err(fail("result is not a b.p.f. subset of S_d".into()));
    }
    let verdict = check_equal_degree(&set)?;
    if n == 1 {
        // Binary sets are certified against their 1/c bound instead.
        let c = trace.params.c.expect("binary traces record c");
        let bound: Rational = ratio(1, i64::from(c));
        if verdict.extremal_value.as_ref().is_some_and(|x| *x > bound) {
            return Err(fail(format!("colon ratio exceeds 1/{c}")));
        }
    } else if !strictness.accepts(verdict.status) {
        return Err(fail(format!("verdict {:?} does not meet {strictness}", verdict.status)));
    }
    Ok(Construction { set, trace, verdict })
}

/// An `m`-dimensional b.p.f. monomial subspace of `S_d` in `n + 1` variables.
///
/// For `n >= 2` the result meets the requested strictness; it is always
/// strict except at `(n, d, m) = (2, 2, 5)`, where strict is refused with
/// [`Error::Unattainable`]. For `n = 1` the binary construction with the
/// largest admissible step `c = floor(d / (m - 1))` is returned and
/// certified against its `1/c` bound; binary syzygy bundles split, so
/// `strictness` is not enforced there.
pub fn construct(n: u32, d: u32, m: u64, strictness: Strictness) -> Result<Construction> {
    check_range(n, d, m)?;
    match n {
        1 => {
            let m32 = m as u32;
            let c = d / (m32 - 1);
            let set = construct_n1(d, m32, c)?;
            let mut params = TraceParams::new(1, d, m);
            params.c = Some(c);
            certify(1, d, m, strictness, set, ConstructionTrace::leaf(Rule::R31, params))
        }
        2 => construct_n2(d, m, strictness),
        _ => construct_higher(n, d, m, strictness),
    }
}

/// The plane case `n = 2`, `3 <= m <= P_2(d)`.
pub fn construct_n2(d: u32, m: u64, strictness: Strictness) -> Result<Construction> {
    check_range(2, d, m)?;
    if d == 1 {
        let trace = ConstructionTrace::leaf(Rule::FullS1, TraceParams::new(2, 1, m));
        return certify(2, d, m, strictness, enumerate_monomials(2, 1), trace);
    }
    if (d, m) == (2, 5) {
        if strictness == Strictness::Strict {
            return Err(Error::Unattainable(
                "no 5-dimensional b.p.f. monomial subspace of quadrics in three variables \
                 gives a stable syzygy bundle; (n, d, m) = (2, 2, 5) is only semistable"
                    .into(),
            ));
        }
        let (rule, split) = nonstrict_split(2, 5)?;
        let inner = two_piece_trace(rule, 2, 5, split);
        let trace = ConstructionTrace::leaf(Rule::Exceptional225, TraceParams::new(2, 2, 5)).child(inner);
        return certify(2, d, m, strictness, two_piece_set(2, split)?, trace);
    }
    let m32 = m as u32;
    if m >= 2 * u64::from(d) + 2 {
        return plane_large_m(d, m, strictness);
    }
    match strictness {
        Strictness::NonStrict => {
            let (rule, split) = nonstrict_split(d, m32)?;
            certify(2, d, m, strictness, two_piece_set(d, split)?, two_piece_trace(rule, d, m, split))
        }
        Strictness::Strict if m32 == d + 1 => special_d_plus_one(d, strictness),
        Strictness::Strict if m32 == 2 * d + 1 => special_two_d_plus_one(d, strictness),
        Strictness::Strict => {
            let (rule, branch, split) = strict_split(d, m32)?;
            let trace = two_piece_trace(rule, d, m, split).branch(branch);
            certify(2, d, m, strictness, two_piece_set(d, split)?, trace)
        }
    }
}

/// `2d + 2 <= m <= P_2(d)`: `S'_d + W·X_2` with `dim W = m - d - 1` in degree `d - 1`.
fn plane_large_m(d: u32, m: u64, strictness: Strictness) -> Result<Construction> {
    let params = TraceParams::new(2, d, m);
    if d == 2 {
        let trace = ConstructionTrace::leaf(Rule::R33, params).branch("base");
        return certify(2, d, m, strictness, enumerate_monomials(2, 2), trace);
    }
    let l = m - u64::from(d) - 1;
    let inner = construct_n2(d - 1, l, Strictness::NonStrict)?;
    let set = lift_through_last(2, d, &inner.set)?;
    let mut params = params;
    params.l = Some(l);
    let trace = ConstructionTrace::leaf(Rule::R33, params).child(inner.trace);
    certify(2, d, m, strictness, set, trace)
}

fn special_d_plus_one(d: u32, strictness: Strictness) -> Result<Construction> {
    let m = u64::from(d) + 1;
    let mut params = TraceParams::new(2, d, m);
    if d == 2 {
        let trace = ConstructionTrace::leaf(Rule::SpecialDPlusOne, params).branch("explicit");
        return certify(2, d, m, strictness, pure_powers(2, 2), trace);
    }
    let base = construct_n2(d, u64::from(d), Strictness::NonStrict)?;
    let extra = extra_for_d_plus_one(d);
    let branch = if d <= 5 {
        "explicit"
    } else {
        let (a, b) = balanced(d);
        params.a = Some(a);
        params.b = Some(b);
        "balanced"
    };
    let set = base.set.insert(extra)?;
    let trace = ConstructionTrace::leaf(Rule::SpecialDPlusOne, params)
        .branch(branch)
        .child(base.trace);
    certify(2, d, m, strictness, set, trace)
}

fn special_two_d_plus_one(d: u32, strictness: Strictness) -> Result<Construction> {
    let m = 2 * u64::from(d) + 1;
    let mut params = TraceParams::new(2, d, m);
    if d == 3 {
        let trace = ConstructionTrace::leaf(Rule::SpecialTwoDPlusOne, params).branch("explicit");
        return certify(2, d, m, strictness, cubic_seven(), trace);
    }
    if d < 3 {
        return Err(Error::Verification(format!(
            "no strict rule for (n, d, m) = (2, {d}, {m})"
        )));
    }
    let base = construct_n2(d, 2 * u64::from(d), Strictness::NonStrict)?;
    let (a, b) = balanced(d);
    params.a = Some(a);
    params.b = Some(b);
    let set = base.set.insert(Monomial::new(vec![0, a, b]))?;
    let trace = ConstructionTrace::leaf(Rule::SpecialTwoDPlusOne, params)
        .branch("balanced")
        .child(base.trace);
    certify(2, d, m, strictness, set, trace)
}

/// `n >= 3`: induction on `n` and on `d`.
fn construct_higher(n: u32, d: u32, m: u64, strictness: Strictness) -> Result<Construction> {
    let mut params = TraceParams::new(n, d, m);
    if d == 1 {
        let trace = ConstructionTrace::leaf(Rule::FullS1, params);
        return certify(n, d, m, strictness, enumerate_monomials(n, 1), trace);
    }
    let lower = count_monomials(n - 1, d);
    let n64 = u64::from(n);
    if m <= lower + 1 {
        let inner = construct(n - 1, d, m - 1, Strictness::NonStrict)?;
        let set = inner
            .set
            .embed(1)
            .insert(Monomial::pure_power(n as usize + 1, n as usize, d))?;
        let trace = ConstructionTrace::leaf(Rule::Thm4Case1, params).child(inner.trace);
        certify(n, d, m, strictness, set, trace)
    } else if m <= lower + n64 {
        // The shared endpoint m = P_{n-1}(d) + n + 1 goes to the third case.
        let l = lower + n64 + 1 - m;
        params.l = Some(l);
        let set = thm4_case2_set(n, d, l as u32)?;
        certify(n, d, m, strictness, set, ConstructionTrace::leaf(Rule::Thm4Case2, params))
    } else {
        let l = m - lower;
        params.l = Some(l);
        let inner = construct(n, d - 1, l, Strictness::NonStrict)?;
        let set = lift_through_last(n, d, &inner.set)?;
        let trace = ConstructionTrace::leaf(Rule::Thm4Case3, params).child(inner.trace);
        certify(n, d, m, strictness, set, trace)
    }
}

/// Rebuilds the monomial set recorded by a trace, bottom-up, using only the
/// rule names, parameters and children stored in it.
pub fn replay(trace: &ConstructionTrace) -> Result<MonomialSet> {
    let p = &trace.params;
    let bad = |what: &str| Error::Parse(format!("malformed {:?} trace: {what}", trace.rule));
    let child = |i: usize| -> Result<MonomialSet> {
        trace.children.get(i).ok_or_else(|| bad("missing child")).and_then(replay)
    };
    let (n, d) = (p.n, p.d);
    let set = match trace.rule {
        Rule::FullS1 => enumerate_monomials(n, 1),
        Rule::R31 => {
            let c = p.c.ok_or_else(|| bad("missing c"))?;
            construct_n1(d, p.m as u32, c)?
        }
        rule if rule.is_two_piece() => {
            place_binary(&child(0)?, 2, 1)?.union(&place_binary(&child(1)?, 2, 2)?)?
        }
        Rule::Exceptional225 => child(0)?,
        Rule::R33 if trace.children.is_empty() => enumerate_monomials(2, d),
        Rule::R33 => lift_through_last(2, d, &child(0)?)?,
        Rule::SpecialDPlusOne if trace.children.is_empty() => pure_powers(2, d),
        Rule::SpecialDPlusOne => child(0)?.insert(extra_for_d_plus_one(d))?,
        Rule::SpecialTwoDPlusOne if trace.children.is_empty() => cubic_seven(),
        Rule::SpecialTwoDPlusOne => {
            let (a, b) = (p.a.ok_or_else(|| bad("missing a"))?, p.b.ok_or_else(|| bad("missing b"))?);
            child(0)?.insert(Monomial::new(vec![0, a, b]))?
        }
        Rule::Thm4Case1 => child(0)?
            .embed(1)
            .insert(Monomial::pure_power(n as usize + 1, n as usize, d))?,
        Rule::Thm4Case2 => thm4_case2_set(n, d, p.l.ok_or_else(|| bad("missing l"))? as u32)?,
        Rule::Thm4Case3 => lift_through_last(n, d, &child(0)?)?,
        _ => unreachable!("two-piece rules handled above"),
    };
    if set.len() as u64 != p.m {
        return Err(bad(&format!("replay produced {} monomials, expected {}", set.len(), p.m)));
    }
    Ok(set)
}

/// Recorded split parameters of a two-piece node, if any.
pub fn trace_split(trace: &ConstructionTrace) -> Option<Split> {
    if trace.rule.is_two_piece() {
        trace.params.split()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u32, exps: &[&[u32]]) -> MonomialSet {
        MonomialSet::from_exponents(n, exps.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn binary_pieces() {
        assert_eq!(construct_n1(4, 3, 2).unwrap(), set(1, &[&[4, 0], &[0, 4], &[2, 2]]));
        assert_eq!(construct_n1(5, 2, 5).unwrap(), set(1, &[&[5, 0], &[0, 5]]));
        assert!(construct_n1(4, 3, 3).is_err());
        assert!(construct_n1(4, 6, 1).is_err());
        assert!(construct_n1(4, 1, 1).is_err());
    }

    #[test]
    fn binary_colon_count_at_pure_power() {
        // u = X0^2 on the (6, 4, 2) piece: dim (V:u) = m - ceil(e/c) = 3.
        let v = construct_n1(6, 4, 2).unwrap();
        let u = Monomial::new(vec![2, 0]);
        assert_eq!(v.colon_dim(&u).unwrap(), 3);
    }

    #[test]
    fn explicit_plane_cases() {
        let seven = construct_n2(3, 7, Strictness::Strict).unwrap();
        assert_eq!(seven.set, cubic_seven());
        assert_eq!(seven.trace.rule, Rule::SpecialTwoDPlusOne);
        let three = construct_n2(2, 3, Strictness::Strict).unwrap();
        assert_eq!(three.set, pure_powers(2, 2));
    }

    #[test]
    fn exceptional_case() {
        assert!(matches!(
            construct_n2(2, 5, Strictness::Strict),
            Err(Error::Unattainable(_))
        ));
        let c = construct_n2(2, 5, Strictness::NonStrict).unwrap();
        assert_eq!(c.verdict.status, Status::StrictlySemistable);
        assert_eq!(c.trace.rule, Rule::Exceptional225);
    }

    #[test]
    fn higher_dimensional_cases() {
        let c = construct(3, 2, 4, Strictness::Strict).unwrap();
        assert_eq!(c.set, pure_powers(3, 2));
        assert_eq!(c.trace.rule, Rule::Thm4Case1);
        assert_eq!(c.trace.children[0].params.n, 2);

        let c = construct(3, 2, 8, Strictness::Strict).unwrap();
        assert_eq!(c.trace.rule, Rule::Thm4Case2);
        assert_eq!(c.trace.params.l, Some(2));
        let expected = enumerate_monomials(2, 2)
            .embed(1)
            .union(&set(3, &[&[0, 0, 1, 1], &[0, 0, 0, 2]]))
            .unwrap();
        assert_eq!(c.set, expected);

        let c = construct(3, 3, 20, Strictness::Strict).unwrap();
        assert_eq!(c.set, enumerate_monomials(3, 3));
        assert_eq!(c.verdict.status, Status::Stable);
        assert_eq!(c.trace.rule, Rule::Thm4Case3);
    }

    #[test]
    fn range_errors() {
        assert!(matches!(construct(2, 2, 7, Strictness::Strict), Err(Error::Domain(_))));
        assert!(matches!(construct(3, 2, 3, Strictness::Strict), Err(Error::Domain(_))));
        assert!(matches!(construct(1, 3, 5, Strictness::Strict), Err(Error::Domain(_))));
        assert!(matches!(construct(2, 0, 3, Strictness::Strict), Err(Error::Domain(_))));
    }

    #[test]
    fn binary_wrapper_uses_largest_step() {
        let c = construct(1, 7, 3, Strictness::NonStrict).unwrap();
        assert_eq!(c.trace.params.c, Some(3));
        assert_eq!(c.set, construct_n1(7, 3, 3).unwrap());
    }

    #[test]
    fn split_relations_examples() {
        // d = 6, m = 5: t = 2 divides d, so c = d/t - 1 = 2.
        let (rule, branch, split) = strict_split(6, 5).unwrap();
        assert_eq!(rule, Rule::R34Case1);
        assert_eq!(branch, "t-divides-d");
        assert_eq!((split.c1, split.c2), (2, 2));
        assert!(split_relations(6, 5, split).strict());
        // The non-strict choice c = 3 meets only the base relations.
        let (_, loose) = nonstrict_split(6, 5).unwrap();
        assert_eq!(loose.c1, 3);
        let rel = split_relations(6, 5, loose);
        assert!(rel.base && !rel.strict());
        assert!(strict_split(4, 5).is_err());
    }

    #[test]
    fn trace_serialization_uses_rule_names() {
        let c = construct(3, 2, 8, Strictness::Strict).unwrap();
        let json = serde_json::to_string(&c.trace).unwrap();
        assert!(json.contains("\"Thm4-Case2\""), "{json}");
        let back: ConstructionTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c.trace);
        assert_eq!(replay(&back).unwrap(), c.set);
    }
}
