use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use qfunc::calculus::{free_eval, popescu_eval_bound_check, row_norm};
use qfunc::expr::{parse, AlgebraMode};
use qfunc::free_series::FreeSeries;
use qfunc::linalg::OpNormOptions;
use qfunc::quantum_algebra::normal_order;
use qfunc::sampling::{random_affine, random_expr, random_free, random_tuple, sample_rng, SampleSpec};
use qfunc::scalar::{ExactComplex, Scalar, C64};
use qfunc::star::{ball_seminorm, scale_automorphism, truncated_norm, TruncatedRep};

fn exact_q(num: i64, den: i64) -> ExactComplex {
    ExactComplex::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_order_is_multiplicative(seed in any::<u64>(), num in 1i64..7, n in 1usize..4) {
        let q = exact_q(num, 7);
        let spec = SampleSpec { terms: 4, ..SampleSpec::new(n, 3) };
        let f: FreeSeries<ExactComplex> = random_free(&mut sample_rng(seed, 0), &spec);
        let g: FreeSeries<ExactComplex> = random_free(&mut sample_rng(seed, 1), &spec);
        let lhs = normal_order(&f.concat_product(&g).unwrap(), &q).unwrap();
        let rhs = normal_order(&f, &q).unwrap().product(&normal_order(&g, &q).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_multiplicative(seed in any::<u64>(), n in 1usize..3, d in 1usize..4) {
        let spec = SampleSpec::new(n, 3);
        let f: FreeSeries<C64> = random_free(&mut sample_rng(seed, 0), &spec);
        let g: FreeSeries<C64> = random_free(&mut sample_rng(seed, 1), &spec);
        let t = random_tuple(&mut sample_rng(seed, 2), n, d);
        let fg = free_eval(&f.concat_product(&g).unwrap(), &t).unwrap();
        let prod = free_eval(&f, &t).unwrap() * free_eval(&g, &t).unwrap();
        let scale = 1.0 + prod.norm();
        prop_assert!((fg - prod).norm() <= 1e-9 * scale);
    }

    #[test]
    fn scaling_commutes_with_products(seed in any::<u64>(), r in 0.05f64..0.95) {
        let q = C64::new(0.5, 0.0);
        let spec = SampleSpec::new(2, 3);
        let a = random_affine::<C64, _>(&mut sample_rng(seed, 0), &spec, &q).unwrap();
        let b = random_affine::<C64, _>(&mut sample_rng(seed, 1), &spec, &q).unwrap();
        let lhs = scale_automorphism(&a.product(&b).unwrap(), r).unwrap();
        let rhs = scale_automorphism(&a, r).unwrap().product(&scale_automorphism(&b, r).unwrap()).unwrap();
        for (alpha, c) in lhs.terms() {
            let d = rhs.coeff(alpha).cloned().unwrap_or_else(C64::zero);
            prop_assert!((c - d).norm() <= 1e-12 * (1.0 + c.norm()));
        }
        prop_assert_eq!(lhs.len(), rhs.len());
    }

    #[test]
    fn ball_seminorm_is_the_norm_of_the_scaled_element(seed in any::<u64>(), r in 0.05f64..0.95) {
        let q = C64::new(0.4, 0.0);
        let rep = TruncatedRep::new(2, 0.4, 4).unwrap();
        let a = random_affine::<C64, _>(&mut sample_rng(seed, 0), &SampleSpec::new(2, 4), &q).unwrap();
        let opts = OpNormOptions::default();
        let ball = ball_seminorm(&a, r, &rep, &opts).unwrap();
        let direct = truncated_norm(&scale_automorphism(&a, r).unwrap(), &rep, &opts).unwrap();
        prop_assert!((ball - direct).abs() <= 1e-12 * (1.0 + ball));
        // shrinking the radius cannot increase the seminorm
        let smaller = ball_seminorm(&a, r * 0.5, &rep, &opts).unwrap();
        prop_assert!(smaller <= ball + 1e-12);
    }

    #[test]
    fn row_contractions_obey_the_popescu_bound(seed in any::<u64>(), n in 1usize..4, d in 1usize..5, target in 0.05f64..0.95) {
        let raw = random_tuple(&mut sample_rng(seed, 0), n, d);
        let norm = row_norm(&raw);
        prop_assume!(norm > 1e-6);
        let t = raw.scale(C64::new(target / norm, 0.0));
        prop_assert!((row_norm(&t) - target).abs() <= 1e-9);
        let f: FreeSeries<C64> = random_free(&mut sample_rng(seed, 1), &SampleSpec::new(n, 4));
        let bound = popescu_eval_bound_check(&f, &t).unwrap();
        prop_assert!(bound.holds(1e-12), "{} > {}", bound.lhs, bound.rhs);
    }

    #[test]
    fn printed_expressions_reparse(seed in any::<u64>(), mode_ix in 0usize..4, depth in 0usize..5) {
        let mode = [AlgebraMode::Free, AlgebraMode::Affine, AlgebraMode::Torus, AlgebraMode::Star][mode_ix];
        let e = random_expr(&mut sample_rng(seed, 0), 3, mode, depth);
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed, 3, mode).unwrap(), e, "{}", printed);
    }
}

#[test]
fn parser_round_trip_on_a_thousand_expressions() {
    let mut rng = sample_rng(1000, 0);
    for k in 0..1000 {
        let mode = [AlgebraMode::Free, AlgebraMode::Affine, AlgebraMode::Torus, AlgebraMode::Star][k % 4];
        let e = random_expr(&mut rng, 4, mode, 5);
        let printed = e.to_string();
        assert_eq!(parse(&printed, 4, mode).unwrap(), e, "{printed}");
    }
}

/// Each term's degree is uniform on `0..=deg`; with one term per draw the
/// per-degree counts are binomial and must sit within three standard
/// deviations of their mean.
#[test]
fn degree_histogram_matches_the_declared_distribution() {
    let deg = 5;
    let draws = 10_000;
    let spec = SampleSpec { terms: 1, ..SampleSpec::new(3, deg) };
    let mut counts = vec![0usize; deg + 1];
    for s in 0..draws {
        let f: FreeSeries<C64> = random_free(&mut sample_rng(31, s as u64), &spec);
        counts[f.degree().expect("nonzero coefficient")] += 1;
    }
    let p = 1.0 / (deg + 1) as f64;
    let mean = draws as f64 * p;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for (k, &c) in counts.iter().enumerate() {
        assert!((c as f64 - mean).abs() <= 3.0 * sigma, "degree {k}: {c} draws, expected {mean} ± {}", 3.0 * sigma);
    }
}

#[test]
fn words_of_one_degree_are_equally_likely() {
    // n = 2, length 3: eight words, about a quarter of the draws.
    let spec = SampleSpec { terms: 1, ..SampleSpec::new(2, 3) };
    let mut counts = std::collections::BTreeMap::new();
    let mut total = 0usize;
    for s in 0..40_000u64 {
        let f: FreeSeries<C64> = random_free(&mut sample_rng(8, s), &spec);
        let word = f.terms().next().map(|(w, _)| w.letters().to_vec());
        if let Some(w) = word.filter(|w| w.len() == 3) {
            *counts.entry(w).or_insert(0usize) += 1;
            total += 1;
        }
    }
    assert_eq!(counts.len(), 8);
    let mean = total as f64 / 8.0;
    let sigma = (total as f64 * (1.0 / 8.0) * (7.0 / 8.0)).sqrt();
    for (w, c) in counts {
        assert!((c as f64 - mean).abs() <= 3.0 * sigma, "{w:?}: {c}");
    }
}
