//! Conversions between timed automata and HDTA preserve reachability.

use hdta::convert::{one_dta_to_ta, ta_to_1dta, ta_zone_reach, unfold_to_ta};
use hdta::format::{parse_ta, write_ta};
use hdta::hdta::{region_reach, zone_reach, RegionOptions, ZoneOptions};
use hdta::random::{random_hdta, random_ta, HdtaShape, TaShape};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn round_trip_preserves_verdicts(seed in any::<u64>()) {
        let ta = random_ta(seed, TaShape::default());
        let expect = ta_zone_reach(&ta).reachable;
        let m = ta_to_1dta(&ta).unwrap();
        prop_assert!(m.dimension() <= 1);
        prop_assert_eq!(zone_reach(&m, ZoneOptions::default()).reachable, expect);
        prop_assert_eq!(region_reach(&m, RegionOptions::default()).unwrap().reachable, expect);
        let back = one_dta_to_ta(&m).unwrap();
        prop_assert_eq!(ta_zone_reach(&back).reachable, expect);
    }

    #[test]
    fn unfolding_preserves_verdicts(seed in any::<u64>()) {
        let m = random_hdta(seed, HdtaShape::default());
        let ta = unfold_to_ta(&m);
        prop_assert_eq!(ta.locations.len(), m.len());
        prop_assert_eq!(ta_zone_reach(&ta).reachable, zone_reach(&m, ZoneOptions::default()).reachable);
    }

    #[test]
    fn ta_text_round_trips(seed in any::<u64>()) {
        let ta = random_ta(seed, TaShape::default());
        let text = write_ta(&ta);
        let back = parse_ta(&text).unwrap();
        prop_assert_eq!(&back, &ta);
        prop_assert_eq!(write_ta(&back), text);
    }
}
