use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lrpc_core::bounds::{clamp_probability, overall_failure, product_failure, syndrome_failure, BoundInputs};
use lrpc_core::{Bounds, ChainRing, ChainRingParams, GaloisRing, Submodule};

fn gr(seed: u64, p: u64, r: u32, m: usize) -> (GaloisRing, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = GaloisRing::make(p, r, m, None, &mut rng).unwrap();
    (ring, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_module_contains_products(seed in any::<u64>(), a_dim in 1usize..3, b_dim in 1usize..3) {
        let (ring, mut rng) = gr(seed, 2, 2, 6);
        let a = Submodule::random_free(&ring, a_dim, &mut rng).unwrap();
        let b = Submodule::random_free(&ring, b_dim, &mut rng).unwrap();
        let ab = a.product(&ring, &b);
        let zq = ring.base();
        for _ in 0..4 {
            let x = a.gens().iter().fold(ring.zero(), |acc, g| ring.add(&acc, &ring.scalar_mul(zq.random(&mut rng), g)));
            let y = b.gens().iter().fold(ring.zero(), |acc, g| ring.add(&acc, &ring.scalar_mul(zq.random(&mut rng), g)));
            prop_assert!(ab.contains(&ring, &ring.mul(&x, &y)));
        }
    }

    #[test]
    fn scaling_by_a_unit_round_trips(seed in any::<u64>(), dim in 0usize..4) {
        let (ring, mut rng) = gr(seed, 3, 2, 5);
        let module = Submodule::random_free(&ring, dim, &mut rng).unwrap();
        let c = ring.random_unit(&mut rng);
        let scaled = module.scale(&ring, &c).unwrap();
        prop_assert_eq!(scaled.dim(), module.dim());
        prop_assert_eq!(scaled.scale(&ring, &ring.inverse(&c).unwrap()).unwrap(), module);
    }

    #[test]
    fn intersection_is_contained_in_both(seed in any::<u64>()) {
        let (ring, mut rng) = gr(seed, 2, 3, 5);
        let a = Submodule::random_free(&ring, 3, &mut rng).unwrap();
        let b = Submodule::random_free(&ring, 3, &mut rng).unwrap();
        let both = a.intersect(&ring, &b);
        for g in both.gens() {
            prop_assert!(a.contains(&ring, g) && b.contains(&ring, g));
        }
        prop_assert!(both.dim() <= 3);
    }

    #[test]
    fn bounds_are_probabilities_and_grow_with_t(
        r in 1u32..4, lambda in 1u32..4, m in 8u32..30, redundancy in 3u32..15,
    ) {
        let zq = ChainRingParams::new(2, r).unwrap();
        let n = 2 * redundancy;
        let mut prev = 0.0;
        for t in 1..=(m - 1) / lambda {
            let inp = BoundInputs { p: zq.p(), r, m, lambda, n, k: n - redundancy, t };
            let set = Bounds::evaluate(&inp).unwrap().clamped();
            for x in [set.product, set.syndrome, set.intersection, set.overall] {
                prop_assert!((0.0..=1.0).contains(&x));
            }
            prop_assert!(set.overall >= prev);
            prev = set.overall;
            prop_assert!(overall_failure::<f64>(&inp).unwrap() >= product_failure::<f64>(&inp).unwrap());
            prop_assert!(clamp_probability(syndrome_failure::<f64>(&inp)) <= set.overall);
        }
    }
}
