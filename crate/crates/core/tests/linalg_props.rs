use padic_opalg::linalg::{algebra_span, commutant, is_orthonormal, sup_norm, KMatrix};
use padic_opalg::padic::{Field, Padic};
use padic_opalg::sample::{
    random_gl, random_integral_matrix, random_scalar, random_scalar_or_zero,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> Field {
    Field::new(5, 40).unwrap()
}

fn random_matrix(f: &Field, rng: &mut ChaCha8Rng, n: usize) -> KMatrix {
    KMatrix::from_fn(f, n, n, |_, _| random_scalar_or_zero(f, rng, -2, 3, 0.3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn norm_is_submultiplicative(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_integral_matrix(&f, &mut rng, 3);
        let b = random_integral_matrix(&f, &mut rng, 3);
        let ab = (&a * &b).norm().unwrap();
        prop_assert!(ab.norm_le(a.norm().unwrap().times(b.norm().unwrap())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_max_over_basis_vectors(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..5);
        let a = random_matrix(&f, &mut rng, n);
        let column_max = (0..n)
            .map(|j| {
                let e: Vec<Padic> = (0..n).map(|i| if i == j { f.one() } else { f.zero() }).collect();
                sup_norm(&a.mat_vec(&e)).unwrap()
            })
            .min()
            .unwrap();
        let norm = a.norm().unwrap();
        prop_assert_eq!(norm, column_max);
        for _ in 0..200 {
            let x: Vec<Padic> = (0..n).map(|_| random_scalar_or_zero(&f, &mut rng, -3, 3, 0.2)).collect();
            let nx = sup_norm(&x).unwrap();
            if nx.value().is_none() {
                continue;
            }
            let ax = sup_norm(&a.mat_vec(&x)).unwrap();
            // ||Ax|| <= ||A|| ||x||
            prop_assert!(ax.norm_le(norm.times(nx)));
        }
    }

    #[test]
    fn double_commutant_contains_generators(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<KMatrix> = (0..rng.gen_range(1..3)).map(|_| random_matrix(&f, &mut rng, 3)).collect();
        let c = commutant(&f, 3, &gens).unwrap();
        let cc = commutant(&f, 3, c.basis()).unwrap();
        for g in &gens {
            prop_assert!(cc.contains(g).unwrap());
        }
    }

    #[test]
    fn span_ignores_generator_order(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens: Vec<KMatrix> = (0..3).map(|_| {
            let mut m = KMatrix::zeros(&f, 3, 3);
            m.set(rng.gen_range(0..3), rng.gen_range(0..3), random_scalar(&f, &mut rng, -1, 1));
            m
        }).collect();
        let a = algebra_span(&f, 3, &gens).unwrap();
        gens.reverse();
        let b = algebra_span(&f, 3, &gens).unwrap();
        prop_assert!(a.same_span(&b).unwrap());
    }

    #[test]
    fn orthonormal_families_preserve_sup_norm(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..5);
        let q = random_gl(&f, &mut rng, n);
        let family: Vec<Vec<Padic>> = (0..n).map(|j| q.column(j)).collect();
        prop_assert!(is_orthonormal(&family).unwrap());
        for _ in 0..100 {
            let a: Vec<Padic> = (0..n).map(|_| random_scalar_or_zero(&f, &mut rng, -2, 2, 0.2)).collect();
            let combo = q.mat_vec(&a);
            prop_assert_eq!(sup_norm(&combo).unwrap(), sup_norm(&a).unwrap());
        }
    }
}
