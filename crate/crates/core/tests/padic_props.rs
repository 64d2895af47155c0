use padic_opalg::padic::{teichmuller_root, Field, Padic, Valuation};
use proptest::prelude::*;

/// `v_p(n / d)` by repeated division.
fn val_oracle(p: i128, mut n: i128, mut d: i128) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    while d % p == 0 {
        d /= p;
        v -= 1;
    }
    Some(v)
}

fn val(x: &Padic) -> Option<i64> {
    match x.valuation().unwrap() {
        Valuation::Finite(v) => Some(v),
        Valuation::Infinite => None,
    }
}

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 17])
}

fn nonzero() -> impl Strategy<Value = i64> {
    (1i64..100_000).prop_flat_map(|n| prop::bool::ANY.prop_map(move |s| if s { n } else { -n }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn valuation_is_additive(p in primes(), a in nonzero(), b in 1i64..1000, c in nonzero(), d in 1i64..1000) {
        let f = Field::new(p, 64).unwrap();
        let x = f.ratio(a, b);
        let y = f.ratio(c, d);
        let expected = val_oracle(p as i128, a as i128 * c as i128, b as i128 * d as i128);
        prop_assert_eq!(val(&(&x * &y)), expected);
        // the same holds after forcing capped representation
        prop_assert_eq!(val(&(&x.to_capped() * &y.to_capped())), expected);
    }

    #[test]
    fn residue_is_a_ring_homomorphism(p in primes(), a in -10_000i64..10_000, b in -10_000i64..10_000, d in 1i64..50) {
        let f = Field::new(p, 32).unwrap();
        let d = if d % p as i64 == 0 { d + 1 } else { d };
        let x = f.ratio(a, d);
        let y = f.int(b).to_capped();
        let rx = x.reduce_residue().unwrap();
        let ry = y.reduce_residue().unwrap();
        prop_assert_eq!((&x * &y).reduce_residue().unwrap(), rx * ry);
        prop_assert_eq!((&x + &y).reduce_residue().unwrap(), rx + ry);
        let oracle = (a.rem_euclid(p as i64) as u64 * padic_opalg::fp::inv_mod(d.rem_euclid(p as i64) as u64, p).unwrap()) % p;
        prop_assert_eq!(rx.value(), oracle);
    }

    #[test]
    fn inverse_round_trip(p in primes(), a in nonzero(), v in -5i64..5) {
        let f = Field::new(p, 40).unwrap();
        let x = f.int(a).shift(v).to_capped();
        prop_assert!((&x * &x.inv().unwrap()).same_as(&f.one()).unwrap());
    }
}

#[test]
fn sharp_ultrametric_on_grid() {
    for p in [2u64, 3, 5] {
        let f = Field::new(p, 64).unwrap();
        let grid: Vec<(i64, i64)> = (-30..=30)
            .filter(|n| *n != 0)
            .flat_map(|n| [1, 2, 3, 4, 5, 9, 25].into_iter().map(move |d| (n, d)))
            .collect();
        for &(a, b) in &grid {
            for &(c, d) in grid.iter().step_by(7) {
                let x = f.ratio(a, b);
                let y = f.ratio(c, d);
                let (vx, vy) = (val(&x).unwrap(), val(&y).unwrap());
                let s = val(&(&x + &y));
                if vx != vy {
                    assert_eq!(s, Some(vx.min(vy)), "{x} + {y}");
                } else if let Some(s) = s {
                    assert!(s >= vx);
                }
            }
        }
    }
}

#[test]
fn teichmuller_relift_agrees() {
    for (p, m) in [(5u64, 4u64), (7, 3), (7, 6), (13, 12), (17, 8)] {
        let low = teichmuller_root(&Field::new(p, 20).unwrap(), m).unwrap();
        let high_field = Field::new(p, 50).unwrap();
        let high = teichmuller_root(&high_field, m).unwrap();
        assert!(padic_opalg::padic::check_root_order(&high, m));
        let (_, u_low, n_low) = low.capped_parts().unwrap();
        let (_, u_high, _) = high.capped_parts().unwrap();
        let modulus = num_bigint::BigUint::from(p).pow(n_low);
        assert_eq!(&u_high % &modulus, u_low, "p={p} m={m}");
    }
}
