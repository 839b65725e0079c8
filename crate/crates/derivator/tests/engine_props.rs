//! Property tests for the engine invariants: generator functoriality,
//! restriction composition, quasi-isomorphism detection through two
//! independent routes, shift behaviour of the bar models, and detection
//! consistency of the comparison maps.

use derivator::derops::{self, edge_map};
use derivator::diagram::{random_diagram, Diagram};
use derivator::kan;
use derivator::shapes;
use proptest::prelude::*;

const CAP: usize = kan::DEFAULT_CAP;

fn primes() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_diagrams_always_functorial(seed in 0u64..10_000, p in primes(), budget in 0usize..30) {
        let d = random_diagram(&shapes::square(), p, seed, budget).unwrap();
        prop_assert!(d.check_functoriality().is_ok());
        prop_assert!(d.total_dim() <= budget);
    }

    #[test]
    fn restriction_composes_on_the_nose(seed in 0u64..10_000, p in primes()) {
        let d = random_diagram(&shapes::square(), p, seed, 20).unwrap();
        let u = shapes::span_inclusion();
        let w = u.compose(&shapes::horizontal_into_span()).unwrap();
        let direct = d.restrict(&w).unwrap();
        let two_step = d.restrict(&u).unwrap().restrict(&shapes::horizontal_into_span()).unwrap();
        for o in 0..2 {
            prop_assert_eq!(direct.value(o), two_step.value(o));
        }
    }

    #[test]
    fn quasi_iso_routes_agree(seed in 0u64..10_000, p in primes()) {
        let f = edge_map(&random_diagram(&shapes::interval(), p, seed, 18).unwrap()).unwrap();
        prop_assert_eq!(f.is_quasi_iso(), f.is_quasi_iso_via_homology());
    }

    #[test]
    fn suspension_shifts_homology(seed in 0u64..10_000, p in primes()) {
        let x = random_diagram(&shapes::point(), p, seed, 12).unwrap().value(0).clone();
        let s = derops::susp_d(&x, CAP).unwrap().complex;
        let expected = x.shift(1).homology_dims();
        prop_assert_eq!(s.homology_dims(), expected);
    }

    #[test]
    fn constant_squares_are_bicartesian(seed in 0u64..10_000, p in primes()) {
        let x = random_diagram(&shapes::point(), p, seed, 10).unwrap().value(0).clone();
        let d = Diagram::constant(shapes::square(), x);
        prop_assert!(kan::is_cocartesian(&d, CAP).unwrap());
        prop_assert!(kan::is_cartesian(&d, CAP).unwrap());
    }

    #[test]
    fn cocartesian_detection_of_kan_outputs(seed in 0u64..10_000, p in primes()) {
        let span = random_diagram(&shapes::span(), p, seed, 16).unwrap();
        let sq = kan::ho_lan(&shapes::span_inclusion(), &span, CAP).unwrap().extended;
        prop_assert!(kan::is_cocartesian(&sq, CAP).unwrap());
        let cospan = random_diagram(&shapes::cospan(), p, seed, 16).unwrap();
        let sq = kan::ho_ran(&shapes::cospan_inclusion(), &cospan, CAP).unwrap().extended;
        prop_assert!(kan::is_cartesian(&sq, CAP).unwrap());
    }
}
