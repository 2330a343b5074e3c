mod common;

use cvdecomp::algebra::QuadPolynomial;
use cvdecomp::lie::{gbch, project_with_rest, Alphabet, TruncatedSeries};
use cvdecomp::rewrite::plan;
use proptest::prelude::*;
use rand::Rng;

fn random_concatenation(seed: u64, order: u32) -> TruncatedSeries<f64> {
    let mut r = common::rng(seed);
    let alphabet = Alphabet::uniform(r.random_range(2..=3));
    let n = r.random_range(1..=8);
    let factors: Vec<TruncatedSeries<f64>> = (0..n)
        .map(|_| {
            let g = r.random_range(0..alphabet.len()) as u8;
            TruncatedSeries::generator(&alphabet, order, g, r.random_range(-1.0..1.0))
        })
        .collect();
    gbch(&factors, order).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn gbch_of_concatenations_is_a_lie_element(seed in any::<u64>()) {
        let (_, rest) = project_with_rest(&random_concatenation(seed, 6));
        prop_assert!(rest < 1e-12, "residual {rest:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn commutator_antisymmetry_and_jacobi(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let modes = r.random_range(1..=2);
        let a = common::random_polynomial(&mut r, modes, 6, 3);
        let b = common::random_polynomial(&mut r, modes, 6, 3);
        let c = common::random_polynomial(&mut r, modes, 4, 2);
        prop_assert_eq!(a.commutator(&b), &QuadPolynomial::zero(modes) - &b.commutator(&a));
        let j1 = a.commutator(&b.commutator(&c));
        let j2 = b.commutator(&c.commutator(&a));
        let j3 = c.commutator(&a.commutator(&b));
        prop_assert!((&(&j1 + &j2) + &j3).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn plan_round_trips_exactly(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let modes = r.random_range(1..=2);
        let h = common::random_hermitian(&mut r, modes, 6, 4);
        let p = plan(&h).unwrap();
        prop_assert_eq!(p.expand(), h);
    }

    #[test]
    fn plan_trees_are_fourier_equivariant(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let modes = r.random_range(1..=2);
        let h = common::random_hermitian(&mut r, modes, 6, 3);
        let mode = r.random_range(0..modes);
        for t in plan(&h).unwrap().trees() {
            prop_assert_eq!(t.fourier_image(mode).expand(), t.expand().fourier_conjugate(mode));
        }
    }
}
