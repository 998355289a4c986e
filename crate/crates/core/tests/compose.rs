//! Tensor product on random factors.

use hdta::compose::{iso_check, predicted_grade_counts, tensor, unit_model, ClockPolicy};
use hdta::hdta::{zone_reach, ZoneOptions};
use hdta::random::{random_hdta_with_clock_prefix, HdtaShape};
use proptest::prelude::*;

fn small() -> HdtaShape {
    HdtaShape {
        max_clocks: 1,
        max_cubes: 6,
        max_constant: 3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grade_counts_multiply(sa in 0u64..10_000, sb in 0u64..10_000) {
        let a = random_hdta_with_clock_prefix(sa, HdtaShape::default(), "a");
        let b = random_hdta_with_clock_prefix(sb, HdtaShape::default(), "b");
        let p = tensor(&a, &b, ClockPolicy::Reject).unwrap();
        prop_assert_eq!(p.grade_counts(), predicted_grade_counts(&a.grade_counts(), &b.grade_counts()));
        prop_assert!(p.space().validate().is_empty());
        prop_assert!(p.hda().validate_labeling().is_empty());
    }

    #[test]
    fn associative_up_to_isomorphism(sa in 0u64..10_000, sb in 0u64..10_000, sc in 0u64..10_000) {
        let a = random_hdta_with_clock_prefix(sa, small(), "a");
        let b = random_hdta_with_clock_prefix(sb, small(), "b");
        let c = random_hdta_with_clock_prefix(sc, small(), "c");
        let left = tensor(&tensor(&a, &b, ClockPolicy::Reject).unwrap(), &c, ClockPolicy::Reject).unwrap();
        let right = tensor(&a, &tensor(&b, &c, ClockPolicy::Reject).unwrap(), ClockPolicy::Reject).unwrap();
        prop_assert!(iso_check(&left, &right).is_some());
    }

    #[test]
    fn unit_is_neutral(s in 0u64..10_000) {
        let a = random_hdta_with_clock_prefix(s, HdtaShape::default(), "a");
        let p = tensor(&a, &unit_model(), ClockPolicy::Reject).unwrap();
        prop_assert!(iso_check(&p, &a).is_some());
        prop_assert_eq!(
            zone_reach(&p, ZoneOptions::default()).reachable,
            zone_reach(&a, ZoneOptions::default()).reachable
        );
    }

    #[test]
    fn prefixing_resolves_collisions(s in 0u64..10_000) {
        let a = random_hdta_with_clock_prefix(s, small(), "");
        prop_assert!(tensor(&a, &a, ClockPolicy::Reject).is_err());
        let p = tensor(&a, &a, ClockPolicy::Prefix).unwrap();
        prop_assert_eq!(p.clocks().len(), 2 * a.clocks().len());
        prop_assert!(p.clocks().names().iter().all(|n| n.starts_with("l.") || n.starts_with("r.")));
    }
}

#[test]
fn differing_invariants_are_not_isomorphic() {
    let a = hdta::fixtures::fig3();
    let b = hdta::fixtures::fig4();
    assert!(iso_check(&a, &b).is_none());
    assert!(iso_check(&b, &a).is_none());
}
