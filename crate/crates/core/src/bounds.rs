//! The counting polynomial `P_n`, its companion `Q_{n-1}`, and the rank
//! threshold above which every base point free subspace gives a stable
//! syzygy bundle.
//!
//! `P_n(t) = (t+1)(t+2)...(t+n) / n!` counts monomials of degree `t` in
//! `n + 1` variables, and `Q_{n-1}(t) = (P_n(t) - 1) / t`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// Evaluates `P_n(t)` exactly.
pub fn eval_p(n: u32, t: &Rational) -> Rational {
    let mut acc = int(1);
    for i in 1..=n {
        acc *= t + int(i64::from(i));
        acc /= int(i64::from(i));
    }
    acc
}

/// Evaluates `Q_{n-1}(t) = (P_n(t) - 1) / t`. The value at `t = 0` is
/// rejected rather than extended by continuity.
pub fn eval_q(n: u32, t: &Rational) -> Result<Rational> {
    if t.is_zero() {
        return Err(Error::domain("Q_{n-1} is evaluated only at t != 0"));
    }
    Ok((eval_p(n, t) - int(1)) / t)
}

/// `P_n(d)` at an integer point, as a machine integer.
pub fn count_monomials(n: u32, d: u32) -> u64 {
    // C(n + d, n), computed incrementally so every intermediate is exact.
    let mut acc: u64 = 1;
    for i in 1..=u64::from(n) {
        acc = acc * (u64::from(d) + i) / i;
    }
    acc
}

/// `P_n(d - 1) + Q_{n-1}(d - 1)`: every b.p.f. subspace of dimension strictly
/// above this value is stable, and at equality semistable.
pub fn stability_threshold(n: u32, d: u32) -> Result<Rational> {
    if n < 2 || d < 2 {
        return Err(Error::domain(format!(
            "threshold requires n >= 2 and d >= 2, got n = {n}, d = {d}"
        )));
    }
    let t = int(i64::from(d) - 1);
    Ok(eval_p(n, &t) + eval_q(n, &t)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdClass {
    GuaranteedStable,
    GuaranteedSemistable,
    /// Below the threshold the rank bound says nothing either way.
    NoGuarantee,
}

pub fn classify_by_threshold(n: u32, d: u32, m: u64) -> Result<ThresholdClass> {
    let threshold = stability_threshold(n, d)?;
    let max = count_monomials(n, d);
    if m < u64::from(n) + 1 || m > max {
        return Err(Error::domain(format!(
            "m = {m} outside {}..={max} for n = {n}, d = {d}",
            n + 1
        )));
    }
    let m = Rational::from_integer(m.into());
    Ok(if m > threshold {
        ThresholdClass::GuaranteedStable
    } else if m == threshold {
        ThresholdClass::GuaranteedSemistable
    } else {
        ThresholdClass::NoGuarantee
    })
}

/// Strict inequality `Q_{n-1}(d) - Q_{n-1}(d-1) > c/d` for complete
/// intersections of `c` hypersurfaces of degree `d` in `P^n`.
pub fn flenner_gap_holds(n: u32, d: u32, c: u32) -> Result<bool> {
    if n < 2 || d < 2 || c < 1 || c >= n {
        return Err(Error::domain(format!(
            "gap inequality needs n >= 2, d >= 2, 1 <= c <= n-1; got ({n}, {d}, {c})"
        )));
    }
    let dd = int(i64::from(d));
    let gap = eval_q(n, &dd)? - eval_q(n, &(dd.clone() - int(1)))?;
    Ok(gap > Rational::new(c.into(), d.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u32,
    pub d: u32,
    #[serde(with = "rational::serde_text")]
    pub p_of_d: Rational,
    #[serde(with = "rational::serde_text")]
    pub threshold: Rational,
    pub threshold_is_integer: bool,
}

pub fn bound_report(n: u32, d: u32) -> Result<BoundReport> {
    let threshold = stability_threshold(n, d)?;
    Ok(BoundReport {
        n,
        d,
        p_of_d: eval_p(n, &int(i64::from(d))),
        threshold_is_integer: rational::is_integer(&threshold),
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn p_values() {
        assert_eq!(eval_p(2, &int(3)), int(10));
        assert_eq!(eval_p(3, &int(2)), int(10));
        for n in 1..6 {
            assert_eq!(eval_p(n, &int(0)), int(1));
        }
        // P_1(t) = t + 1 also at non-integers.
        assert_eq!(eval_p(1, &ratio(1, 2)), ratio(3, 2));
    }

    #[test]
    fn q_values() {
        assert_eq!(eval_q(2, &int(1)).unwrap(), int(2));
        assert_eq!(eval_q(2, &int(2)).unwrap(), ratio(5, 2));
        assert_eq!(eval_q(3, &int(1)).unwrap(), int(3));
        assert!(matches!(eval_q(2, &int(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn thresholds() {
        assert_eq!(stability_threshold(2, 2).unwrap(), int(5));
        assert_eq!(stability_threshold(2, 3).unwrap(), ratio(17, 2));
        assert!(stability_threshold(2, 1).is_err());
        assert!(stability_threshold(1, 3).is_err());
        let report = bound_report(2, 3).unwrap();
        assert!(!report.threshold_is_integer);
        assert_eq!(report.p_of_d, int(10));
    }

    #[test]
    fn classification() {
        use ThresholdClass::*;
        assert_eq!(classify_by_threshold(2, 2, 5).unwrap(), GuaranteedSemistable);
        assert_eq!(classify_by_threshold(2, 2, 6).unwrap(), GuaranteedStable);
        assert_eq!(classify_by_threshold(2, 3, 4).unwrap(), NoGuarantee);
        assert!(classify_by_threshold(2, 2, 7).is_err());
        assert!(classify_by_threshold(2, 2, 2).is_err());
    }

    #[test]
    fn gap_inequality() {
        assert!(!flenner_gap_holds(2, 2, 1).unwrap());
        assert!(flenner_gap_holds(3, 2, 1).unwrap());
        assert!(flenner_gap_holds(2, 3, 1).unwrap());
        assert!(flenner_gap_holds(3, 2, 3).is_err());
    }

    #[test]
    fn count_matches_polynomial() {
        for n in 1..6 {
            for d in 0..9 {
                assert_eq!(
                    Rational::from_integer(count_monomials(n, d).into()),
                    eval_p(n, &int(d.into()))
                );
            }
        }
    }
}
