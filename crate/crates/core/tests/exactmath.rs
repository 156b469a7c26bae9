use fqgauss::exactmath::ntheory::{factorize, kronecker};
use fqgauss::exactmath::{cyc, sqrt_int, CycNum};
use num_integer::Integer;
use proptest::prelude::*;

fn small_cyc() -> impl Strategy<Value = CycNum> {
    (1u32..=24, prop::collection::vec((-3i64..=3, 0i64..24), 1..5)).prop_map(|(l, terms)| {
        terms.into_iter().map(|(c, j)| cyc(j, l).scale(c as i128, 1)).sum()
    })
}

proptest! {
    #[test]
    fn product_commutes_with_complex_embedding(a in small_cyc(), b in small_cyc()) {
        let (ar, ai) = a.to_complex();
        let (br, bi) = b.to_complex();
        let (pr, pi) = (&a * &b).to_complex();
        prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
        prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
    }

    #[test]
    fn root_of_unity_order(j in -50i64..50, l in 1u32..=60) {
        let n = l / (j.unsigned_abs() as u32).gcd(&l);
        prop_assert_eq!(cyc(j, l).pow(n), CycNum::one());
        if n > 1 {
            prop_assert_ne!(cyc(j, l).pow(n / factorize(n as u64)[0].0 as u32), CycNum::one());
        }
    }

    #[test]
    fn sum_and_difference_cancel(a in small_cyc(), b in small_cyc()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(a.conj().conj(), a);
    }
}

#[test]
fn square_roots_square_back() {
    for n in 1..=1000u64 {
        assert_eq!(sqrt_int(n).pow(2), CycNum::from_int(n as i128), "n = {n}");
    }
}

#[test]
fn unit_square_sums_vanish() {
    for n in [9u32, 27, 25, 49] {
        let p = factorize(n as u64)[0].0 as i64;
        for a in [1, 2] {
            let s: CycNum = (1..n as i64).filter(|x| x % p != 0).map(|x| cyc(a * x * x, n)).sum();
            assert!(s.is_zero(), "n = {n}, a = {a}");
        }
    }
}

#[test]
fn quadratic_reciprocity_spot_checks() {
    assert_eq!(kronecker(2, 7), 1);
    assert_eq!(kronecker(3, 7), -1);
    assert_eq!(kronecker(-1, 13), 1);
}

#[test]
fn rendering_uses_minimal_order() {
    assert_eq!(sqrt_int(5).minimal_order(), 5);
    assert_eq!(sqrt_int(5).embed(40).minimal_order(), 5);
    assert_eq!(cyc(5, 40).minimal_order(), 8);
    assert_eq!(CycNum::from_int(-3).to_string(), "-3");
}
