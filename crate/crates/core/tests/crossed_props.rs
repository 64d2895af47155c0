use padic_opalg::charduals::{fourier_analyze, TruncatedGroup};
use padic_opalg::crossed::{
    build_algebras, eta, idempotent_check, idempotent_check_matrix, indicator_basis, nu_basis,
    random_structured_element, random_structured_idempotent, structure_of_commutant_element,
    verify_operator_identities, CrossedModel, StructuredCommutantElement,
};
use padic_opalg::linalg::{commutant, is_orthonormal, KMatrix};
use padic_opalg::padic::{Field, Padic};
use padic_opalg::sample::random_scalar_or_zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(p: u64, l: u64, k: u32, j: u32) -> CrossedModel {
    CrossedModel::new(&TruncatedGroup::new(&Field::new(p, 48).unwrap(), l, k, j).unwrap())
}

fn models() -> Vec<CrossedModel> {
    vec![model(3, 2, 1, 1), model(5, 2, 2, 2), model(5, 2, 2, 1)]
}

#[test]
fn operator_identities_on_spanning_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in models() {
        let grp = m.group();
        let mut phis = indicator_basis(grp);
        phis.push(
            (0..grp.s_order())
                .map(|_| random_scalar_or_zero(grp.field(), &mut rng, -2, 2, 0.1))
                .collect(),
        );
        for c in verify_operator_identities(&m, &phis).unwrap() {
            assert!(c.passed, "{}", c.name);
        }
    }
}

#[test]
fn commutant_elements_have_block_structure() {
    for m in models() {
        let alg = build_algebras(&m).unwrap();
        let comm = commutant(m.field(), m.dim(), &alg.gens_i).unwrap();
        for x in comm.basis() {
            let s = structure_of_commutant_element(&m, x)
                .unwrap()
                .expect("structured");
            assert!(s.to_matrix(&m).same_as(x).unwrap());
        }
    }
}

#[test]
fn multiplication_algebra_is_maximal_abelian() {
    for m in models() {
        let grp = m.group();
        let f = grp.field();
        let s = grp.s_order();
        let gens: Vec<KMatrix> = indicator_basis(grp)
            .iter()
            .map(|phi| KMatrix::diag(f, phi))
            .collect();
        let comm = commutant(f, s, &gens).unwrap();
        assert_eq!(comm.dim(), s);
        for g in &gens {
            assert!(comm.contains(g).unwrap());
        }
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn nu_basis_is_orthonormal_and_matches_fourier_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for m in models() {
        let grp = m.group();
        let f = grp.field();
        let nu: Vec<Vec<Padic>> = nu_basis(grp).iter().map(|v| v.flatten()).collect();
        assert!(is_orthonormal(&nu).unwrap());
        let values: Vec<Vec<Padic>> = (0..grp.s_order())
            .map(|_| {
                (0..grp.order())
                    .map(|_| random_scalar_or_zero(f, &mut rng, -1, 2, 0.2))
                    .collect()
            })
            .collect();
        let flat: Vec<Padic> = values.iter().flatten().cloned().collect();
        let coeffs = m.nu_matrix().inverse().unwrap().mat_vec(&flat);
        let phi = fourier_analyze(grp, &values);
        for n in 0..grp.order() {
            for x in 0..grp.s_order() {
                let mut acc = f.zero();
                for i in grp.g0() {
                    acc = &acc + &(&coeffs[m.nu_index(i, n)] * &eta(grp, i).unwrap()[x]);
                }
                assert!(acc.same_as(&phi[n][x]).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn idempotent_verdicts_agree(which in 0usize..3, seed in any::<u64>(), idem in any::<bool>()) {
        let m = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = if idem {
            random_structured_idempotent(m, &mut rng).unwrap()
        } else {
            random_structured_element(m, &mut rng).unwrap()
        };
        let coeff = idempotent_check(&e, m.field()).unwrap();
        prop_assert_eq!(coeff, idempotent_check_matrix(m, &e).unwrap());
        if idem {
            prop_assert!(coeff.idempotent);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn structured_elements_commute_with_generators(which in 0usize..3, seed in any::<u64>()) {
        let m = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_structured_element(m, &mut rng).unwrap();
        let a = e.to_matrix(m);
        prop_assert!(m.matrix_blocks(&a).same_as(&e.blocks(m)).unwrap());
        for g in build_algebras(m).unwrap().gens_i {
            prop_assert!(a.commutator(&g).is_zero_matrix().unwrap());
        }
        // coefficient matrices multiply like the operators
        let e2 = random_structured_element(m, &mut rng).unwrap();
        let prod = &e.coefficient_matrix(m.field()) * &e2.coefficient_matrix(m.field());
        let prod = StructuredCommutantElement::new(m, prod.to_rows()).unwrap();
        prop_assert!((&a * &e2.to_matrix(m)).same_as(&prod.to_matrix(m)).unwrap());
    }
}
