//! The verification matrix, one test per criterion. Each test prints a
//! PASS/FAIL line (visible with `--nocapture`) and asserts it. Default
//! context: p = 5 with target precision 30 and guard 10; the quadratic
//! closed-form matrix is repeated at p = 7.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use mahler_core::closedform::{
    cross_measure_rhs, cross_polynomial, cross_zeta_rhs_jet, quadratic_zeta_rhs_jet,
};
use mahler_core::laurent::{quadratic_from_roots, LaurentPoly};
use mahler_core::measure::{higher_mahler, radius_bound, shnirelman_average, zeta_mahler, zeta_mahler_jet};
use mahler_core::padic::{agreement_valuation, PadicContext, PadicScalar};
use mahler_core::ring::Valuation;
use mahler_core::verify::{
    check_cross_measure, check_cross_zeta, check_double_sums, check_hoffman,
    check_invariance, check_combinatorial_identities, check_prefix_homomorphism,
    check_quadratic_measure, check_quadratic_zeta, pseudorandom_unit, thresholds,
};

fn context(p: u64) -> PadicContext {
    PadicContext::with_default_guard(p, 30).unwrap()
}

/// The (alpha, beta) pairs of the closed-form matrix at a given prime:
/// (1/p, p) and (6/p, p^2).
fn root_pairs(ctx: &PadicContext) -> Vec<(PadicScalar, PadicScalar)> {
    let p = ctx.prime() as i64;
    vec![
        (
            ctx.from_rational_parts(&1.into(), &p.into()).unwrap(),
            ctx.from_i64(p),
        ),
        (
            ctx.from_rational_parts(&6.into(), &p.into()).unwrap(),
            ctx.from_i64(p * p),
        ),
    ]
}

#[test]
fn c01_quadratic_measures_match_polylog_closed_form() {
    let mut worst: Option<String> = None;
    for p in [5u64, 7] {
        let ctx = context(p);
        for (alpha, beta) in root_pairs(&ctx) {
            for k in 1..=4u32 {
                let clock = Instant::now();
                let outcome = check_quadratic_measure(&alpha, &beta, k).unwrap();
                let elapsed = clock.elapsed();
                assert!(
                    outcome.pass,
                    "p={p} alpha={} k={k}: {}",
                    alpha.literal(),
                    outcome.detail
                );
                assert!(
                    elapsed.as_secs_f64() < 10.0,
                    "p={p} k={k} took {elapsed:?} (limit 10 s)"
                );
                if worst.is_none() {
                    worst = Some(outcome.detail);
                }
            }
        }
    }
    println!(
        "criterion 01 (quadratic measures vs polylog closed form, p=5 and p=7, k<=4): PASS — {}",
        worst.unwrap()
    );
}

#[test]
fn c02_worked_example_lock() {
    let ctx = context(5);
    let alpha = ctx.from_rational_parts(&1.into(), &5.into()).unwrap();
    let beta = ctx.from_i64(5);
    let f = quadratic_from_roots(&alpha, &beta);

    // m_{p,2} = 2 Li_2(25) = 50 mod 5^4
    let m2 = higher_mahler(&f, 2).unwrap();
    assert_eq!(m2.value.integer_residue(4).unwrap(), 50u32.into());

    let k2 = check_quadratic_measure(&alpha, &beta, 2).unwrap();
    assert!(k2.pass, "{}", k2.detail);
    let k3 = check_quadratic_measure(&alpha, &beta, 3).unwrap();
    assert!(k3.pass, "{}", k3.detail);

    println!(
        "criterion 02 (worked example: m_2 = 2 Li_2(25) = 50 mod 5^4, k=3 form): PASS — {}",
        k3.detail
    );
}

#[test]
fn c03_quadratic_zeta_matches_gauss_form() {
    let ctx = context(5);
    let p = ctx.from_i64(5);
    let exponents = vec![
        ctx.zero(),
        ctx.one(),
        p.clone(),
        ctx.one().add(&p),
        pseudorandom_unit(&ctx),
    ];
    for (alpha, beta) in root_pairs(&ctx) {
        // s = 0 returns exactly 1
        let f = quadratic_from_roots(&alpha, &beta);
        let z0 = zeta_mahler(&f, &ctx.zero()).unwrap();
        assert_eq!(z0.value, ctx.one(), "Z(0) must be exactly 1");

        for s in &exponents {
            let outcome = check_quadratic_zeta(&alpha, &beta, s).unwrap();
            assert!(
                outcome.pass,
                "alpha={} s={}: {}",
                alpha.literal(),
                s.literal(),
                outcome.detail
            );
        }
    }
    println!(
        "criterion 03 (quadratic zeta vs 2F1 form at s in {{0, 1, p, 1+p, random unit}}): PASS"
    );
}

#[test]
fn c04_jet_consistency() {
    let ctx = context(5);
    let (alpha, beta) = {
        let mut pairs = root_pairs(&ctx);
        pairs.remove(0)
    };
    let f = quadratic_from_roots(&alpha, &beta);
    let jet = zeta_mahler_jet(&f, 6).unwrap();

    // k! * coefficient k = m_{p,k}
    let mut fact = BigInt::from(1);
    for k in 1..=6u32 {
        fact *= BigInt::from(k);
        let engine = higher_mahler(&f, k).unwrap();
        let coeff = jet
            .value
            .coefficient(k as usize)
            .mul(&ctx.from_ratio(&BigRational::from_integer(fact.clone())).unwrap());
        let agreement = agreement_valuation(&coeff, &engine.value);
        assert!(
            agreement.at_least(thresholds::JET_DIGITS),
            "k = {k}: jet/scalar agreement {agreement}"
        );
    }

    // coefficient-by-coefficient against the closed-form jet
    let closed = quadratic_zeta_rhs_jet(&alpha, &beta, 6).unwrap();
    for k in 0..=6usize {
        let agreement = agreement_valuation(jet.value.coefficient(k), closed.value.coefficient(k));
        assert!(
            agreement.at_least(thresholds::JET_DIGITS),
            "coefficient {k}: agreement {agreement}"
        );
    }
    println!(
        "criterion 04 (jet of order 6: k! coeff_k = m_k and closed-form jet match, >= {} digits): PASS",
        thresholds::JET_DIGITS
    );
}

#[test]
fn c05_cross_polynomial_forms() {
    let clock = Instant::now();
    let ctx = context(5);
    let c = ctx.from_rational_parts(&1.into(), &5.into()).unwrap();

    let rv = check_cross_measure(&c).unwrap();
    assert!(rv.pass, "{}", rv.detail);

    let p = ctx.from_i64(5);
    for s in [ctx.zero(), ctx.one(), p] {
        let outcome = check_cross_zeta(&c, &s).unwrap();
        assert!(outcome.pass, "s={}: {}", s.literal(), outcome.detail);
    }

    // first jet coefficient of the 3F2 form is the 4F3 value
    let jet = cross_zeta_rhs_jet(&c, 2).unwrap();
    let rv_value = cross_measure_rhs(&c).unwrap();
    let agreement = agreement_valuation(jet.value.coefficient(1), &rv_value.value);
    assert!(
        agreement.at_least(thresholds::JET_DIGITS),
        "jet coefficient 1 vs first-measure form: {agreement}"
    );

    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?} (limit 60 s)");
    println!(
        "criterion 05 (cross polynomial: 4F3 first measure, 3F2 zeta at s in {{0,1,p}}, jet link; {:.1} s): PASS — {}",
        elapsed.as_secs_f64(),
        rv.detail
    );
}

#[test]
fn c06_oracle_convergence() {
    let ctx = context(5);
    let (alpha, beta) = {
        let mut pairs = root_pairs(&ctx);
        pairs.remove(0)
    };
    let f = quadratic_from_roots(&alpha, &beta);

    for k in 1..=2u32 {
        let engine = higher_mahler(&f, k).unwrap();
        let mut mu4_agreement = None;
        let mut mu24_agreement = None;
        for (tower, n) in [(1usize, 4u64), (2, 8), (2, 12), (2, 24)] {
            let avg = shnirelman_average(&f, k, tower, n).unwrap();
            let predicted = avg.diagnostics.predicted_agreement.unwrap();
            let agreement = agreement_valuation(&avg.value, &engine.value);
            assert!(
                agreement.at_least(predicted),
                "k={k} N={n}: agreement {agreement} below predicted {predicted}"
            );
            if n == 4 {
                mu4_agreement = agreement.finite();
            }
            if n == 24 {
                mu24_agreement = agreement.finite();
            }
        }
        let small = mu4_agreement.unwrap_or(i64::MAX);
        let large = mu24_agreement.unwrap_or(i64::MAX);
        assert!(
            large > small,
            "k={k}: mu_24 agreement ({large}) must strictly exceed mu_4 ({small})"
        );
    }
    println!(
        "criterion 06 (finite averages over mu_4, mu_8, mu_12, mu_24 within predicted valuations): PASS"
    );
}

#[test]
fn c07_word_algebra_and_nested_sums() {
    let algebra = check_hoffman(thresholds::HOFFMAN_MAX_WEIGHT);
    assert!(algebra.pass, "{}", algebra.detail);
    let homomorphism = check_prefix_homomorphism(
        thresholds::PREFIX_HOM_MAX_WEIGHT,
        thresholds::PREFIX_HOM_CUTOFF,
    );
    assert!(homomorphism.pass, "{}", homomorphism.detail);
    println!(
        "criterion 07 (word algebra exact; nested sums multiply: {} / {}): PASS",
        algebra.detail, homomorphism.detail
    );
}

#[test]
fn c08_double_sum_routes_agree() {
    let ctx = context(5);
    for t in [ctx.from_i64(5), ctx.from_i64(25)] {
        for outcome in check_double_sums(&ctx, &t).unwrap() {
            assert!(outcome.pass, "{}: {}", outcome.label, outcome.detail);
        }
    }
    println!(
        "criterion 08 (word route = direct double sum for k,l <= 4 at t = 5, 25, >= {} digits): PASS",
        thresholds::DOUBLE_SUM_DIGITS
    );
}

#[test]
fn c09_invariances() {
    let ctx = context(5);
    let c = ctx.from_rational_parts(&1.into(), &5.into()).unwrap();
    let f = cross_polynomial(&c);
    for outcome in check_invariance(&f, 2).unwrap() {
        assert!(outcome.pass, "{}: {}", outcome.label, outcome.detail);
    }
    println!(
        "criterion 09 (monomial measures vanish exactly; substitution invariance >= {} digits): PASS",
        thresholds::INVARIANCE_DIGITS
    );
}

#[test]
fn c10_combinatorial_identities() {
    let outcome = check_combinatorial_identities(thresholds::COMBINATORIAL_MAX_M);
    assert!(outcome.pass, "{}", outcome.detail);
    println!("criterion 10 ({}): PASS", outcome.detail);
}

#[test]
fn c11_radius_bounds_and_decay() {
    let ctx = context(5);

    // f = 1 + 5t: decay constant 1, log radius 3/4, closed disc met
    let f = LaurentPoly::from_terms(
        &ctx,
        1,
        [(vec![0], ctx.one()), (vec![1], ctx.from_i64(5))],
    );
    let rb = radius_bound(&f).unwrap();
    assert_eq!(rb.decay, Valuation::Finite(1));
    assert_eq!(rb.log_radius, Some(BigRational::new(3.into(), 4.into())));
    assert!(rb.closed_disc);

    // |m_{p,k}| <= p^{-k} for every base-field polynomial in the suite
    let c = ctx.from_rational_parts(&1.into(), &5.into()).unwrap();
    let suite: Vec<(&str, LaurentPoly<PadicContext>)> = {
        let pairs = root_pairs(&ctx);
        let mut v: Vec<(&str, LaurentPoly<PadicContext>)> = vec![
            ("one plus 5t", f.clone()),
            (
                "two-term",
                LaurentPoly::from_terms(
                    &ctx,
                    1,
                    [
                        (vec![1], ctx.one()),
                        (vec![0], ctx.from_rational_parts(&(-6).into(), &5.into()).unwrap()),
                    ],
                ),
            ),
            ("cross", cross_polynomial(&c)),
        ];
        for (alpha, beta) in &pairs {
            v.push(("quadratic", quadratic_from_roots(alpha, beta)));
        }
        v
    };
    for (name, poly) in &suite {
        for k in 1..=thresholds::DECAY_MAX_K {
            let m = higher_mahler(poly, k).unwrap();
            assert!(
                m.value.val_floor().at_least(k as i64),
                "{name} k={k}: v = {}",
                m.value.val_floor()
            );
        }
    }
    println!(
        "criterion 11 (decay constant 1 and log radius 3/4 for 1+5t; |m_k| <= p^-k for k <= {} on {} polynomials): PASS",
        thresholds::DECAY_MAX_K,
        suite.len()
    );
}
