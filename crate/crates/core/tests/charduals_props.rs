use num_rational::BigRational;
use padic_opalg::charduals::{
    fourier_analyze, fourier_synthesize, haar_integrate, rational, trig_poly_approx,
    TruncatedGroup, WeightedSupNorm,
};
use padic_opalg::linalg::sup_norm;
use padic_opalg::padic::{Field, Padic};
use padic_opalg::sample::random_scalar_or_zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONFIGS: [(u64, u32, u32, u64); 5] = [
    (2, 1, 1, 3),
    (2, 2, 2, 5),
    (2, 2, 1, 5),
    (3, 1, 1, 7),
    (2, 3, 2, 17),
];

fn group(idx: usize) -> TruncatedGroup {
    let (l, k, j, p) = CONFIGS[idx];
    TruncatedGroup::new(&Field::new(p, 32).unwrap(), l, k, j).unwrap()
}

fn random_values(f: &Field, rng: &mut ChaCha8Rng, len: usize) -> Vec<Padic> {
    (0..len)
        .map(|_| random_scalar_or_zero(f, rng, -2, 3, 0.2))
        .collect()
}

#[test]
fn haar_is_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for idx in 0..CONFIGS.len() {
        let grp = group(idx);
        let g = grp.order();
        let f = random_values(grp.field(), &mut rng, g);
        let base = haar_integrate(&grp, &f);
        for b in 0..g {
            let shifted: Vec<Padic> = (0..g).map(|a| f[(a + b) % g].clone()).collect();
            assert!(haar_integrate(&grp, &shifted).same_as(&base).unwrap());
        }
    }
}

#[test]
fn characters_are_orthogonal() {
    for idx in 0..CONFIGS.len() {
        let grp = group(idx);
        let g = grp.order();
        for n in 0..g {
            for m in 0..g {
                let prod: Vec<Padic> = (0..g)
                    .map(|a| grp.character(n, a) * grp.character(m, grp.neg(a)))
                    .collect();
                let expected = if n == m { 1 } else { 0 };
                assert!(haar_integrate(&grp, &prod)
                    .same_as(&grp.field().int(expected))
                    .unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fourier_round_trip_and_norm(idx in 0..CONFIGS.len(), seed in any::<u64>()) {
        let grp = group(idx);
        let f = grp.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let func: Vec<Vec<Padic>> = (0..grp.s_order()).map(|_| random_values(f, &mut rng, grp.order())).collect();
        let phi = fourier_analyze(&grp, &func);
        let back = fourier_synthesize(&grp, &phi);
        for (r, b) in func.iter().zip(&back) {
            for (x, y) in r.iter().zip(b) {
                prop_assert!(x.same_as(y).unwrap());
            }
        }
        prop_assert_eq!(sup_norm(func.iter().flatten()).unwrap(), sup_norm(phi.iter().flatten()).unwrap());
        let coeffs: Vec<Vec<Padic>> = (0..grp.order()).map(|_| random_values(f, &mut rng, grp.s_order())).collect();
        let again = fourier_analyze(&grp, &fourier_synthesize(&grp, &coeffs));
        for (r, b) in coeffs.iter().zip(&again) {
            for (x, y) in r.iter().zip(b) {
                prop_assert!(x.same_as(y).unwrap());
            }
        }
    }

    #[test]
    fn trig_approx_postconditions(idx in 0..CONFIGS.len(), seed in any::<u64>(), eps_den in 1i64..10_000) {
        let grp = group(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let func = random_values(grp.field(), &mut rng, grp.order());
        let gamma: Vec<BigRational> = (0..grp.order()).map(|_| rational(rng.gen_range(0..50), rng.gen_range(1..1000))).collect();
        let w = WeightedSupNorm::new(gamma).unwrap();
        let eps = rational(1, eps_den);
        let approx = trig_poly_approx(&grp, &func, &w, &eps).unwrap();
        prop_assert!(approx.exact_on_subgroup);
        for &i in &approx.subgroup {
            prop_assert!(approx.values[i].same_as(&func[i]).unwrap());
        }
        prop_assert!(approx.error < eps);
    }
}
