use proptest::prelude::*;

use evac_core::configspace::{canonicalize_servants, mirror, ConfigSpace, Configuration, FilterOptions};

fn config() -> impl Strategy<Value = Configuration> {
    (3usize..=8, 1usize..=3, any::<u64>()).prop_map(|(n, k, i)| {
        let space = ConfigSpace::new(n, k, FilterOptions::none());
        space.get((i % space.len() as u64) as usize)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn text_form_round_trips(c in config()) {
        let back: Configuration = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn mirror_is_an_involution_fixing_vertex_one(c in config()) {
        let m = mirror(&c);
        let one = |x: &Configuration| x.rho.iter().position(|&v| v == 1);
        prop_assert_eq!(one(&m), one(&c));
        prop_assert_eq!(mirror(&m), c);
    }

    #[test]
    fn canonical_servants_are_idempotent(c in config()) {
        let once = canonicalize_servants(&c);
        prop_assert_eq!(canonicalize_servants(&once), once);
    }
}
