use syzygy_core::bounds::count_monomials;
use syzygy_core::construct::{construct, replay, Strictness};
use syzygy_core::criterion::{check_equal_degree, Status};
use syzygy_core::Error;

fn admissible(n: u32, d: u32) -> std::ops::RangeInclusive<u64> {
    if d == 1 {
        u64::from(n) + 1..=u64::from(n) + 1
    } else {
        u64::from(n) + 1..=count_monomials(n, d)
    }
}

#[test]
fn every_admissible_triple_is_constructed_and_stable() {
    for n in 2..=4 {
        for d in 1..=6 {
            for m in admissible(n, d) {
                match construct(n, d, m, Strictness::Strict) {
                    Ok(c) => {
                        assert_eq!(c.set.len() as u64, m, "({n},{d},{m})");
                        assert!(c.set.is_bpf().unwrap(), "({n},{d},{m}) not bpf");
                        assert_eq!(c.set.uniform_degree(), Some(d));
                        assert_eq!(c.verdict.status, Status::Stable, "({n},{d},{m})");
                        assert_eq!(replay(&c.trace).unwrap(), c.set, "({n},{d},{m}) replay");
                    }
                    Err(Error::Unattainable(_)) => assert_eq!((n, d, m), (2, 2, 5)),
                    Err(e) => panic!("({n},{d},{m}): {e}"),
                }
            }
        }
    }
}

#[test]
fn nonstrict_is_semistable_everywhere() {
    for n in 2..=3 {
        for d in 1..=5 {
            for m in admissible(n, d) {
                let c = construct(n, d, m, Strictness::NonStrict)
                    .unwrap_or_else(|e| panic!("({n},{d},{m}): {e}"));
                let v = check_equal_degree(&c.set).unwrap();
                assert!(v.status.is_semistable(), "({n},{d},{m})");
            }
        }
    }
}
