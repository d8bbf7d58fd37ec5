use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use cfprime::continuants::{self, PeakShape, SquareForm};
use cfprime::primes;
use cfprime::surd::{self, DEFAULT_PERIOD_BUDGET};
use cfprime::DigitTuple;

fn non_square() -> impl Strategy<Value = u64> {
    (2u64..5_000_000_000).prop_filter("perfect square", |d| !surd::is_square(d))
}

fn digits(max_len: usize, max_digit: u64) -> impl Strategy<Value = DigitTuple<u64>> {
    prop::collection::vec(1..=max_digit, 1..=max_len).prop_map(|v| DigitTuple::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expansion_shape(d in non_square()) {
        let e = surd::expand_full(d, DEFAULT_PERIOD_BUDGET).unwrap();
        let a0 = *e.a0();
        prop_assert!(a0 * a0 <= d);
        prop_assert!((a0 + 1) * (a0 + 1) > d);
        prop_assert_eq!(*e.period().last().unwrap(), 2 * a0);
        prop_assert!(e.is_palindromic());
        prop_assert!(e.period()[..e.period_len() - 1].iter().all(|&x| x >= 1 && x <= a0));
        let sign = if e.period_len() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(surd::pell_check(&e), sign);
        prop_assert_eq!(surd::period_length(d, DEFAULT_PERIOD_BUDGET).unwrap(), e.period_len() as u64);
    }

    #[test]
    fn widths_agree(d in non_square()) {
        let narrow = surd::expand_full(d, DEFAULT_PERIOD_BUDGET).unwrap();
        let wide = surd::expand_full(d as u128, DEFAULT_PERIOD_BUDGET).unwrap();
        let big = surd::expand_full(BigUint::from(d), DEFAULT_PERIOD_BUDGET).unwrap();
        let as_u64 = |v: &[BigUint]| v.iter().map(|x| x.to_u64().unwrap()).collect::<Vec<_>>();
        prop_assert_eq!(narrow.period(), wide.period().iter().map(|&x| x as u64).collect::<Vec<_>>());
        prop_assert_eq!(narrow.period(), as_u64(big.period()));
    }

    #[test]
    fn prefix_is_leading_part_of_period(d in non_square(), k in 1usize..40) {
        let e = surd::expand_full(d, DEFAULT_PERIOD_BUDGET).unwrap();
        let p = surd::expand_prefix(d, k).unwrap();
        let n = k.min(e.period_len());
        prop_assert_eq!(&p.digits[..], &e.period()[..n]);
        prop_assert_eq!(p.complete, k >= e.period_len());
    }

    #[test]
    fn continuants_are_symmetric(xs in digits(12, 50)) {
        prop_assert_eq!(continuants::continuant_q(&xs), continuants::continuant_q(&xs.reversed()));
    }

    #[test]
    fn cassini_signs(xs in digits(10, 100)) {
        prop_assert_eq!(continuants::cassini_even(&xs), BigInt::one());
        prop_assert_eq!(continuants::cassini_odd(&xs), -BigInt::one());
    }

    #[test]
    fn integral_squares_expand_as_built(xs in digits(4, 8), double in any::<bool>(), j in 0u32..10) {
        let shape = if double { PeakShape::Double } else { PeakShape::Single };
        let form = SquareForm::new(&xs, shape);
        if let Some((a_min, step)) = form.integral_progression() {
            let mut a = a_min + &step * j;
            while 2 * &a <= BigInt::from(*xs.entries().iter().max().unwrap()) {
                a += &step;
            }
            let value = form.value(&a);
            prop_assert!(value.is_integer());
            if let Some(d) = value.to_integer().to_u64() {
                let e = surd::expand_full(d, DEFAULT_PERIOD_BUDGET).unwrap();
                let mut want = shape.block(&xs).entries().to_vec();
                want.push(2 * a.to_u64().unwrap());
                prop_assert_eq!(e.period(), &want[..]);
            }
        }
    }

    #[test]
    fn congruence_solutions_solve(coef in -500i64..500, rhs in -500i64..500, m in 1i64..300) {
        let (c, r, md) = (BigInt::from(coef), BigInt::from(rhs), BigInt::from(m));
        if let Some((a, step)) = continuants::solve_linear_congruence(&c, &r, &md) {
            prop_assert!(a > BigInt::from(0) && a <= step);
            for k in 0..3 {
                let x = &a + &step * k;
                prop_assert_eq!((&c * &x - &r) % &md, BigInt::from(0));
            }
        } else {
            prop_assert!((1..=m).all(|x| (coef * x - rhs) % m != 0));
        }
    }

    #[test]
    fn semiprimes_are_composite(a in 2u64..4_000_000_000, b in 2u64..4_000_000_000) {
        prop_assert!(!primes::is_prime(a * b));
    }
}

#[test]
fn primality_matches_sieve() {
    let sieved = primes::primes_up_to(200_000);
    let tested: Vec<u64> = (0..=200_000).filter(|&n| primes::is_prime(n)).collect();
    assert_eq!(sieved, tested);
}
