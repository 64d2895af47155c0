//! Acceptance run: one PASS/FAIL line per criterion. Every comparison is
//! exact (integer exponents, certified equality to tracked precision), so
//! the tolerance everywhere is zero.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use padic_opalg::charduals::{
    fourier_analyze, fourier_synthesize, haar_integrate, rational, trig_poly_approx,
    TruncatedGroup, WeightedSupNorm,
};
use padic_opalg::crossed::{
    central_scalars, idempotent_check, idempotent_check_matrix, indicator_basis,
    random_structured_element, random_structured_idempotent, verify_commutation_theorem,
    verify_operator_identities, CrossedModel,
};
use padic_opalg::fp::FpMatrix;
use padic_opalg::linalg::{center, sup_norm, KMatrix, NormExponent};
use padic_opalg::padic::{Field, Padic};
use padic_opalg::reduction::{
    is_baer, verify_crossed_reduction, verify_type_one_witness, BaerOptions, FiniteAlgebra,
    SearchMode, TypeVerdict,
};
use padic_opalg::sample::{random_scalar_or_zero, random_unit};
use padic_opalg::spectral::{
    check_norm_identity, check_orthogonal_sum, is_orthoprojection, multiplication_operator,
    normality_scan, sample_pairs, ScanSpec,
};
use padic_opalg::suite::{mihara_matrix, mihara_polynomial, random_orthoprojection};
use padic_opalg::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRECISION: u32 = 64;

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x0ac0_0000 + criterion)
}

fn model(p: u64, l: u64, k: u32, j: u32) -> Result<CrossedModel> {
    Ok(CrossedModel::new(&TruncatedGroup::new(
        &Field::new(p, PRECISION)?,
        l,
        k,
        j,
    )?))
}

fn criterion_1() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [3u64, 5, 17] {
        let f = Field::new(p, PRECISION)?;
        let a = mihara_matrix(&f);
        let q = mihara_polynomial(&f);
        let qa = q.eval_matrix(&a);
        let holds = a.norm()? == NormExponent::UNIT
            && (&a * &a).norm()? == NormExponent::UNIT
            && qa.norm()? == NormExponent::finite(1)
            && (&qa * &qa).is_zero_matrix()?
            && !check_norm_identity(&a, &q)?.holds;
        ok &= holds;
        notes.push(format!("p={p}:{}", if holds { "ok" } else { "bad" }));
    }
    Ok((
        ok,
        format!("|A|=|A^2|=1, |q(A)|=p^-1, q(A)^2=0 [{}]", notes.join(" ")),
    ))
}

fn criterion_2() -> Result<(bool, String)> {
    let f = Field::new(5, PRECISION)?;
    let mut r = rng(2);
    let mut ok = true;
    let mut equal_valuation_pairs = 0;
    for _ in 0..200 {
        let p = random_orthoprojection(&f, &mut r, 3)?;
        let pairs = sample_pairs(&f, &mut r, 50);
        equal_valuation_pairs += pairs
            .iter()
            .filter(|(a, b)| a.valuation().ok() == b.valuation().ok())
            .count();
        ok &= is_orthoprojection(&p)? && check_orthogonal_sum(&p, &pairs)?.is_none();
    }
    let mut rejected = true;
    for p in [3i64, 5, 17] {
        let f = Field::new(p as u64, PRECISION)?;
        let m = KMatrix::from_rows(
            &f,
            vec![vec![f.one(), f.ratio(1, p)], vec![f.zero(), f.zero()]],
        );
        rejected &=
            m.is_idempotent()? && m.norm()? == NormExponent::finite(-1) && !is_orthoprojection(&m)?;
    }
    Ok((
        ok && rejected && equal_valuation_pairs > 0,
        format!(
            "200 conjugated idempotents x 50 pairs ({equal_valuation_pairs} equal-valuation); [[1,1/p],[0,0]] rejected with |P|=p: {rejected}"
        ),
    ))
}

const CHARACTER_CONFIGS: [(u64, u32, u64); 4] = [(2, 1, 3), (2, 2, 5), (3, 1, 7), (2, 3, 17)];

fn criterion_3() -> Result<(bool, String)> {
    let mut ok = true;
    let mut pairs = 0;
    for (l, k, p) in CHARACTER_CONFIGS {
        let grp = TruncatedGroup::new(&Field::new(p, PRECISION)?, l, k, k)?;
        let g = grp.order();
        for n in 0..g {
            for m in 0..g {
                let prod: Vec<Padic> = (0..g)
                    .map(|a| grp.character(n, a) * grp.character(m, grp.neg(a)))
                    .collect();
                let delta = grp.field().int(i64::from(n == m));
                ok &= haar_integrate(&grp, &prod).same_as(&delta)?;
                pairs += 1;
            }
        }
    }
    Ok((
        ok,
        format!("{pairs} index pairs over (l,k,p) in {CHARACTER_CONFIGS:?}"),
    ))
}

fn criterion_4() -> Result<(bool, String)> {
    let mut r = rng(4);
    let mut ok = true;
    for (l, k, p) in CHARACTER_CONFIGS {
        for j in [k, 1] {
            let grp = TruncatedGroup::new(&Field::new(p, PRECISION)?, l, k, j)?;
            let f = grp.field();
            for _ in 0..100 {
                let func: Vec<Vec<Padic>> = (0..grp.s_order())
                    .map(|_| {
                        (0..grp.order())
                            .map(|_| random_scalar_or_zero(f, &mut r, -3, 3, 0.2))
                            .collect()
                    })
                    .collect();
                let phi = fourier_analyze(&grp, &func);
                for (x, y) in func
                    .iter()
                    .flatten()
                    .zip(fourier_synthesize(&grp, &phi).iter().flatten())
                {
                    ok &= x.same_as(y)?;
                }
                let again = fourier_analyze(&grp, &fourier_synthesize(&grp, &phi));
                for (x, y) in phi.iter().flatten().zip(again.iter().flatten()) {
                    ok &= x.same_as(y)?;
                }
                ok &= sup_norm(func.iter().flatten())? == sup_norm(phi.iter().flatten())?;
            }
        }
    }
    Ok((
        ok,
        "100 random functions per configuration, free and non-free; |F| = max |phi_n|".into(),
    ))
}

fn criterion_5() -> Result<(bool, String)> {
    let mut r = rng(5);
    let mut ok = true;
    let mut count = 0;
    for j in [2, 1] {
        let m = model(5, 2, 2, j)?;
        let grp = m.group();
        let mut phis = indicator_basis(grp);
        phis.push(
            (0..grp.s_order())
                .map(|_| random_unit(grp.field(), &mut r))
                .collect(),
        );
        for c in verify_operator_identities(&m, &phis)? {
            ok &= c.passed;
            count += 1;
        }
    }
    Ok((
        ok,
        format!("{count} identity families at (2,2,2,5) and (2,2,1,5)"),
    ))
}

fn criterion_6() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (p, l, k, j) in [(3, 2, 1, 1), (5, 2, 2, 2)] {
        let report = verify_commutation_theorem(&model(p, l, k, j)?)?;
        ok &= report.all_passed() && report.dim_center == 1;
        notes.push(format!(
            "({l},{k},{j},{p}) center dim {}",
            report.dim_center
        ));
    }
    let m = model(5, 2, 2, 1)?;
    let report = verify_commutation_theorem(&m)?;
    ok &= report.all_passed()
        && report.central.diagonal_scalar_blocks
        && report.central.constant_on_g0;
    // independent look at the center: every basis element has scalar diagonal blocks
    let alg = padic_opalg::crossed::build_algebras(&m)?;
    for z in center(&alg.ri)?.basis() {
        ok &= central_scalars(&m, z)?.is_some();
    }
    notes.push(format!(
        "(2,2,1,5) observed center dim {}, lambda constant on cosets: {}",
        report.dim_center, report.central.constant_on_cosets
    ));
    Ok((ok, notes.join("; ")))
}

fn criterion_7() -> Result<(bool, String)> {
    let mut r = rng(7);
    let mut ok = true;
    let mut tallies = Vec::new();
    for j in [2, 1] {
        let m = model(5, 2, 2, j)?;
        let (mut idem, mut ortho) = (0, 0);
        for i in 0..200 {
            let e = if i % 2 == 0 {
                random_structured_idempotent(&m, &mut r)?
            } else {
                random_structured_element(&m, &mut r)?
            };
            let coeff = idempotent_check(&e, m.field())?;
            let bounded = e
                .coefficient_matrix(m.field())
                .norm()?
                .norm_le(NormExponent::UNIT);
            ok &= coeff == idempotent_check_matrix(&m, &e)?;
            ok &= coeff.orthoprojection == (coeff.idempotent && bounded);
            idem += usize::from(coeff.idempotent);
            ortho += usize::from(coeff.orthoprojection);
        }
        ok &= ortho > 0 && idem > ortho;
        tallies.push(format!(
            "j={j}: {idem} idempotent, {ortho} orthoprojections"
        ));
    }
    Ok((
        ok,
        format!("200 elements per configuration ({})", tallies.join(", ")),
    ))
}

fn criterion_8() -> Result<(bool, String)> {
    let mut r = rng(8);
    let eps_grid: Vec<BigRational> = vec![
        rational(1, 1),
        rational(1, 10),
        rational(1, 100),
        rational(1, 10_000),
    ];
    let mut ok = true;
    let mut runs = 0;
    for (p, l, k) in [(5, 2, 2), (17, 2, 3), (7, 3, 1)] {
        let grp = TruncatedGroup::new(&Field::new(p, PRECISION)?, l, k, k)?;
        for _ in 0..20 {
            let f: Vec<Padic> = (0..grp.order())
                .map(|_| random_scalar_or_zero(grp.field(), &mut r, -2, 3, 0.2))
                .collect();
            let gamma = (0..grp.order())
                .map(|_| rational(r.gen_range(0..100), r.gen_range(1..1000)))
                .collect();
            let w = WeightedSupNorm::new(gamma)?;
            for eps in &eps_grid {
                let approx = trig_poly_approx(&grp, &f, &w, eps)?;
                ok &= approx.exact_on_subgroup && approx.error < *eps;
                for &i in &approx.subgroup {
                    ok &= approx.values[i].same_as(&f[i])?;
                }
                runs += 1;
            }
        }
    }
    Ok((
        ok,
        format!("{runs} runs: exact on the subgroup and weighted error < eps"),
    ))
}

fn criterion_9() -> Result<(bool, String)> {
    let opts = BaerOptions::default();
    let mut notes = Vec::new();
    let free3 = verify_crossed_reduction(&model(3, 2, 1, 1)?, &opts)?;
    let m2 = FiniteAlgebra::full(3, 2);
    let ok3 = free3.all_passed()
        && free3.dim_coefficients == 4
        && free3.baer.mode == SearchMode::Exhaustive
        && free3
            .baer
            .witness
            .as_ref()
            .is_some_and(|w| verify_type_one_witness(&m2, w, 100_000));
    notes.push(format!("(2,1,1,3) M_2(F_3) exhaustive type I: {ok3}"));
    let free5 = verify_crossed_reduction(&model(5, 2, 2, 2)?, &opts)?;
    let m4 = FiniteAlgebra::full(5, 4);
    let ok5 = free5.all_passed()
        && free5.dim_coefficients == 16
        && free5
            .baer
            .witness
            .as_ref()
            .is_some_and(|w| w.rank() == 1 && verify_type_one_witness(&m4, w, 100_000));
    notes.push(format!("(2,2,2,5) M_4(F_5) type I: {ok5}"));
    let nonfree = verify_crossed_reduction(&model(5, 2, 2, 1)?, &opts)?;
    let ok_nf = nonfree.all_passed()
        && nonfree.coset_blocks == vec![2, 2]
        && nonfree.baer.verdict == TypeVerdict::I;
    notes.push(format!(
        "(2,2,1,5) blocks {:?} type I: {ok_nf}",
        nonfree.coset_blocks
    ));
    let dual = FiniteAlgebra::truncated_polynomials(5, 2);
    let x = FpMatrix::from_ints(5, &[&[0, 1], &[0, 0]]);
    let report = is_baer(&dual, &opts)?;
    let negative = !report.is_baer
        && report.failing.as_ref().is_some_and(|w| {
            w.annihilator.len() == 1
                && FiniteAlgebra::new(
                    5,
                    2,
                    vec![FpMatrix::identity(5, 2), w.annihilator[0].clone()],
                )
                .is_ok_and(|a| a.contains(&x))
        });
    notes.push(format!("F_5[x]/(x^2) fails with ann(x): {negative}"));
    Ok((ok3 && ok5 && ok_nf && negative, notes.join("; ")))
}

fn criterion_10() -> Result<(bool, String)> {
    let f = Field::new(5, PRECISION)?;
    let mut r = rng(10);
    let mut ok = true;
    for _ in 0..50 {
        let pool: Vec<(i64, i64)> = (0..4)
            .map(|_| (r.gen_range(-30..30), [1, 5, 25][r.gen_range(0..3)]))
            .collect();
        let picks: Vec<(i64, i64)> = (0..r.gen_range(1..6))
            .map(|_| pool[r.gen_range(0..pool.len())])
            .collect();
        let values: Vec<Padic> = picks.iter().map(|&(n, d)| f.ratio(n, d)).collect();
        let (a, data) = multiplication_operator(&f, &values)?;
        // oracle: the value set as reduced fractions
        let expected: BTreeSet<BigRational> = picks.iter().map(|&(n, d)| rational(n, d)).collect();
        let got: BTreeSet<BigRational> = data
            .eigenvalues
            .iter()
            .map(|x| x.as_rational().unwrap().clone())
            .collect();
        ok &= expected == got;
        let mut spec = ScanSpec::new(5);
        spec.candidates = Some(data.eigenvalues.clone());
        ok &= normality_scan(&a, &spec, &mut r)?.is_empty();
        for e in &data.projections {
            ok &= is_orthoprojection(e)?;
        }
    }
    Ok((
        ok,
        "50 diagonal operators: spectrum = value set, no violation at degree 5, orthoprojections"
            .into(),
    ))
}

type Criterion = fn() -> Result<(bool, String)>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("Mihara counterexample", criterion_1),
        ("orthoprojection criterion", criterion_2),
        ("character orthogonality", criterion_3),
        ("Fourier round trip", criterion_4),
        ("crossed-product identities", criterion_5),
        ("commutation theorem", criterion_6),
        ("idempotent coefficients", criterion_7),
        ("trigonometric approximation", criterion_8),
        ("reduction and Baer type", criterion_9),
        ("multiplication operators", criterion_10),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (passed, note) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        println!(
            "{} {:>2} {name}: {note} ({:.1?})",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed()
        );
    }
    println!(
        "{} of 10 criteria passed in {:.1?}",
        10 - failures,
        start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
