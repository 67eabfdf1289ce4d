use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stab_core::arith::primes_up_to;
use stab_core::numfield::local::{dedekind_degrees, newton_degrees};
use stab_core::numfield::{delta_hat, fixtures, local_degrees, scan_al, FieldSpec};
use stab_core::permgroup::delta_of_group;
use stab_core::StabError;

#[test]
fn chebotarev_gaussian_million() {
    let d = delta_hat(&fixtures::gaussian(), 1_000_000);
    assert!((0.49..=0.51).contains(&d.value()), "{}", d.value());
}

#[test]
fn empirical_delta_tracks_group() {
    for spec in [fixtures::gaussian(), fixtures::sextic_a4()] {
        let exact = delta_of_group(&spec.galois_group().unwrap());
        let exact = exact.numer().to_string().parse::<f64>().unwrap() / exact.denom().to_string().parse::<f64>().unwrap();
        assert!((delta_hat(&spec, 100_000).value() - exact).abs() <= 0.02);
    }
    assert!(delta_hat(&fixtures::sextic_a4(), 100_000).is_one());
}

fn random_irreducible(rng: &mut ChaCha8Rng, degree: usize) -> FieldSpec {
    loop {
        let mut poly: Vec<i64> = (0..degree).map(|_| rng.gen_range(-9..=9)).collect();
        poly.push(1);
        if let Ok(spec) = FieldSpec::new(poly, None, Default::default()) {
            return spec;
        }
    }
}

/// An odd-degree field always has a local degree of odd size, so no prime is exceptional.
#[test]
fn odd_degree_fields_have_no_exceptional_primes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for degree in [3, 3, 3, 5, 5, 5] {
        let spec = random_irreducible(&mut rng, degree);
        let scan = scan_al(&spec, 3000);
        assert!(scan.members.is_empty(), "{:?}: {:?}", spec.poly, scan.members);
        assert!(delta_hat(&spec, 20_000).is_one());
    }
}

#[test]
fn local_degrees_sum_to_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..25 {
        let deg = rng.gen_range(2..=5);
        let spec = random_irreducible(&mut rng, deg);
        for p in primes_up_to(60) {
            match local_degrees(&spec, p) {
                Ok(ls) => assert_eq!(ls.degrees.iter().sum::<usize>(), deg, "{:?} at {p}", spec.poly),
                Err(StabError::NeedsOverride { prime, .. }) => assert_eq!(prime, p),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Where the reduction is squarefree the Newton route must agree with Dedekind's.
    #[test]
    fn newton_agrees_with_dedekind(
        coeffs in prop::collection::vec(-20i64..=20, 2..=5),
        pi in 0usize..8,
    ) {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 19][pi];
        let mut poly = coeffs;
        poly.push(1);
        prop_assume!(FieldSpec::new(poly.clone(), None, Default::default()).is_ok());
        let reduced: Vec<u64> = poly.iter().map(|c| c.rem_euclid(p as i64) as u64).collect();
        let sqfree = stab_core::numfield::fpoly::is_squarefree(&stab_core::numfield::ff::PrimeField::new(p), &reduced);
        prop_assume!(sqfree);
        let mut newton = newton_degrees(&poly, p, 40).unwrap();
        newton.sort_unstable();
        prop_assert_eq!(newton, dedekind_degrees(&poly, p));
    }
}
