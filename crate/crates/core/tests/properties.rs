//! Laws over seeded random fans and polytopes, through the public API.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toramp::amplitude::{adjoint, evaluate_amplitude, restrict_adjoint, vanishes_on_im_u, warren_adjoint};
use toramp::deform::{deformation_cone, membership, Membership};
use toramp::random;
use toramp::singular::partials;
use toramp::{Poly, Rat};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn euler_relation(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random::complete_fan(&mut rng, d, 7).unwrap();
        let mut euler = Poly::zero(fan.vars());
        for (r, p) in partials(&fan).iter().enumerate() {
            euler = &euler + &(&Poly::var(fan.vars(), r) * p);
        }
        prop_assert_eq!(euler, adjoint(&fan).scale(&Rat::from_integer(((fan.n() - d) as i64).into())));
    }

    #[test]
    fn complete_fans_vanish_on_image(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(vanishes_on_im_u(&random::complete_fan(&mut rng, d, 7).unwrap()));
    }

    #[test]
    fn every_ray_restricts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random::complete_fan(&mut rng, 3, 7).unwrap();
        for r in 0..fan.n() {
            // The identity is checked inside; an error means it failed.
            prop_assert!(restrict_adjoint(&fan, &[r]).is_ok());
        }
    }

    #[test]
    fn adjoint_over_product_is_amplitude(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random::complete_fan(&mut rng, 2, 7).unwrap();
        let x: Vec<Rat> = (0..fan.n()).map(|_| random::positive_rat(&mut rng)).collect();
        let prod: Rat = x.iter().product();
        prop_assert_eq!(evaluate_amplitude(&fan, &x).unwrap() * prod, adjoint(&fan).eval(&x).unwrap());
    }

    #[test]
    fn interior_deformations_keep_warren_degree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::polytope(&mut rng, 2, 5).unwrap();
        let z = random::interior_z(&mut rng, &p).unwrap();
        prop_assert_eq!(membership(&deformation_cone(&p).unwrap(), &z), Membership::Interior);
        let q = p.with_z(z.clone()).unwrap();
        prop_assert!(q.normal_fan().unwrap().dropped.is_empty());
        let w = warren_adjoint(&p.fan().unwrap(), &z).unwrap();
        prop_assert!(w.degree.is_some_and(|k| k <= 2));
    }
}
