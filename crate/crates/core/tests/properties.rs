//! Cross-module properties, each checked against an independent oracle.

use std::sync::Arc;

use bertini::arith::{
    dedekind_p_maximal, equidistribution_audit, height_ball_sample, multi_fiber_experiment, MonicPoly,
};
use bertini::ff::{primes_up_to, ExtField, Field, Fq, GaloisRing, Gr, Ring};
use bertini::fiber::{
    classify_point, classify_point_at, fiber_density_exhaustive, fiber_density_mc, lift_point,
    PointClassification, SectionModP2,
};
use bertini::geom::{closed_points_up_to, monomial_count, HomogeneousForm, ProjectiveScheme};
use bertini::sampling::chunk_rng;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn conic() -> ProjectiveScheme {
    ProjectiveScheme::from_json(r#"{"n":2,"m":1,"defining_forms":[[[[2,0,0],1],[[0,2,0],1],[[0,0,2],-1]]]}"#)
        .unwrap()
}

fn random_section(rng: &mut impl Rng, n: usize, d: usize, p: u64) -> SectionModP2 {
    let h = monomial_count(n, d);
    let c = (0..h).map(|_| rng.gen_range(0..p * p)).collect();
    SectionModP2::from_coeffs(n, d, p, c).unwrap()
}

/// Every valid lift y' = u (y + p delta) of the point gives the same verdict,
/// in every chart and at every conjugate.
fn check_lift_independence(scheme: &ProjectiveScheme, p: u64, d: usize, r: usize, seed: u64) {
    let mut rng = chunk_rng(seed, 0);
    let n = scheme.ambient_dim();
    let points = closed_points_up_to(scheme, p, r).unwrap();
    for _ in 0..6 {
        let sigma = random_section(&mut rng, n, d, p);
        for x in &points {
            let base = classify_point(&sigma, x, scheme).unwrap();
            let field: &Arc<ExtField> = x.field();
            let gr = GaloisRing::over(field).unwrap();
            for k in 0..x.degree() {
                let coords = x.conjugate(k);
                let charts: Vec<usize> = (0..=n).filter(|&i| coords[i].0 != 0).collect();
                for &chart in &charts {
                    let got = classify_point_at(&sigma, scheme, x, &coords, chart, None).unwrap().class;
                    assert_eq!(got, base, "chart {chart} conjugate {k} at {x:?}");
                    let affine: Vec<Fq> = {
                        let inv = field.inv(coords[chart]).unwrap();
                        coords.iter().map(|&c| field.mul(c, inv)).collect()
                    };
                    let y = lift_point(scheme, &gr, &affine, chart).unwrap();
                    for _ in 0..4 {
                        let unit = loop {
                            let u = gr.pack(&(0..x.degree()).map(|_| rng.gen_range(0..p * p)).collect::<Vec<_>>());
                            if gr.is_unit(u) {
                                break u;
                            }
                        };
                        let moved: Vec<Gr> = y
                            .iter()
                            .enumerate()
                            .map(|(i, &c)| {
                                if i == chart {
                                    return gr.mul(unit, c);
                                }
                                let delta = field.pack(&(0..x.degree()).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
                                gr.mul(unit, gr.add(c, gr.times_p(delta)))
                            })
                            .collect();
                        // on a proper subvariety most moves leave the mod-p^2 scheme
                        match classify_point_at(&sigma, scheme, x, &coords, chart, Some(&moved)) {
                            Ok(v) => assert_eq!(v.class, base, "lift {moved:?} at {x:?}"),
                            Err(bertini::Error::NotOnScheme(_)) => assert!(!scheme.is_projective_space()),
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lift_chart_and_conjugate_independence_on_the_plane() {
    let p2 = ProjectiveScheme::projective_space(2, None).unwrap();
    check_lift_independence(&p2, 2, 2, 2, 1);
    check_lift_independence(&p2, 3, 3, 1, 2);
}

#[test]
fn lift_chart_and_conjugate_independence_on_a_conic() {
    let c = conic();
    check_lift_independence(&c, 3, 2, 2, 3);
    check_lift_independence(&c, 5, 3, 1, 4);
}

/// a^2 b^2 - 4 b^3 - 4 a^3 c - 27 c^2 + 18 a b c for x^3 + a x^2 + b x + c.
fn cubic_disc(a: i64, b: i64, c: i64) -> BigInt {
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    &a * &a * &b * &b - 4 * &b * &b * &b - 4 * &a * &a * &a * &c - 27 * &c * &c + 18 * &a * &b * &c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cubic_discriminant_matches_closed_form(a in -60i64..=60, b in -60i64..=60, c in -60i64..=60) {
        prop_assert_eq!(MonicPoly::from_i64(&[a, b, c]).discriminant(), cubic_disc(a, b, c));
    }

    #[test]
    fn dedekind_shortcut(a in -40i64..=40, b in -40i64..=40, c in -40i64..=40, pi in 0usize..8) {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 19][pi];
        let disc = cubic_disc(a, b, c);
        prop_assume!(!disc.is_zero());
        if !(disc % BigInt::from(p * p)).is_zero() {
            prop_assert!(dedekind_p_maximal(&MonicPoly::from_i64(&[a, b, c]), p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Dedekind's criterion and a direct classification of every closed point
    /// (no jet tables) of div(F) on the fiber over p.
    #[test]
    fn dedekind_matches_point_classification(
        coeffs in prop::collection::vec(-30i64..=30, 2..=4),
        pi in 0usize..4,
    ) {
        let p = [2u64, 3, 5, 7][pi];
        let f = MonicPoly::from_i64(&coeffs);
        prop_assume!(!f.discriminant().is_zero());
        let d = f.degree();
        let p1 = ProjectiveScheme::projective_space(1, None).unwrap();
        let form: HomogeneousForm<BigInt> = f.homogenize().form().clone();
        let sigma = SectionModP2::new(&form, p).unwrap();
        let singular = closed_points_up_to(&p1, p, d)
            .unwrap()
            .iter()
            .any(|x| classify_point(&sigma, x, &p1).unwrap() == PointClassification::SingularPoint);
        prop_assert_eq!(dedekind_p_maximal(&f, p).unwrap(), !singular);
    }
}

fn exhaustive_counts(h: u32, b: i64, n: u64) -> (u64, u64) {
    let mut counts = vec![0u64; (n as usize).pow(h)];
    let width = (2 * b + 1) as u64;
    for idx in 0..width.pow(h) {
        let mut rest = idx;
        let mut cls = 0usize;
        for _ in 0..h {
            let v = (rest % width) as i64 - b;
            rest /= width;
            cls = cls * n as usize + v.rem_euclid(n as i64) as usize;
        }
        counts[cls] += 1;
    }
    (*counts.iter().min().unwrap(), *counts.iter().max().unwrap())
}

#[test]
fn equidistribution_closed_form_matches_enumeration() {
    for h in 1..=3u32 {
        for b in 1..=12u64 {
            for n in 2..=7u64 {
                let a = equidistribution_audit(h, b, n).unwrap();
                let (lo, hi) = exhaustive_counts(h, b as i64, n);
                assert_eq!(a.min_count, lo.into(), "h={h} B={b} N={n}");
                assert_eq!(a.max_count, hi.into(), "h={h} B={b} N={n}");
                if (2 * b + 1) % n == 0 {
                    assert_eq!(a.ratio, Some(BigRational::one()));
                }
            }
        }
    }
}

#[test]
fn height_ball_is_exact_with_attainable_boundary() {
    let mut rng = chunk_rng(11, 0);
    let bound = BigRational::from_integer(2.into());
    let mut seen = std::collections::HashSet::new();
    for _ in 0..20_000 {
        let f = height_ball_sample(&mut rng, 2, 2);
        assert!(f.height_at_most(&bound));
        seen.insert(f.coeffs().to_vec());
    }
    // every (a_1, a_2) in [-2, 2] x [-4, 4] shows up, corners included
    assert_eq!(seen.len(), 5 * 9);
    assert!(seen.contains(&vec![BigInt::from(-2), BigInt::from(4)]));
}

#[test]
fn single_prime_multi_fiber_matches_fiber_mc() {
    let (d, r, samples) = (6, 3, 40_000);
    let multi = multi_fiber_experiment(2, d, 1000, 2, r, samples, 21).unwrap().estimate;
    let p1 = ProjectiveScheme::projective_space(1, None).unwrap();
    let fiber = fiber_density_mc(&p1, 2, d, r, samples, 22).unwrap();
    let sd = |m: f64| (m * (1.0 - m) / samples as f64).sqrt();
    let tol = 3.0 * (sd(multi.mean).powi(2) + sd(fiber.mean).powi(2)).sqrt();
    assert!((multi.mean - fiber.mean).abs() <= tol, "{} vs {}", multi.mean, fiber.mean);
    assert_eq!(multi.reference_value, fiber.reference_value);
}

#[test]
fn exhaustive_equals_product_whenever_certified() {
    let p1 = ProjectiveScheme::projective_space(1, None).unwrap();
    let mut certified = 0;
    for (p, d, r) in [(2, 5, 1), (2, 7, 1), (3, 5, 1), (3, 7, 1), (2, 9, 2), (2, 4, 1)] {
        let e = fiber_density_exhaustive(&p1, p, d, r).unwrap();
        if e.certificate.as_ref().unwrap().surjective {
            certified += 1;
            assert_eq!(e.value(), e.reference_value, "p={p} d={d} r={r}");
        }
    }
    assert!(certified >= 3);
}

#[test]
fn galois_ring_reduction_is_a_ring_map_on_random_elements() {
    let mut rng = chunk_rng(5, 0);
    for (p, e) in [(2u64, 3usize), (3, 2), (5, 2), (7, 1)] {
        let gr = GaloisRing::new(p, e).unwrap();
        let f = gr.residue_field().clone();
        for _ in 0..200 {
            let a = gr.pack(&(0..e).map(|_| rng.gen_range(0..p * p)).collect::<Vec<_>>());
            let b = gr.pack(&(0..e).map(|_| rng.gen_range(0..p * p)).collect::<Vec<_>>());
            assert_eq!(gr.reduce(gr.mul(a, b)), f.mul(gr.reduce(a), gr.reduce(b)));
            assert_eq!(gr.reduce(gr.add(a, b)), f.add(gr.reduce(a), gr.reduce(b)));
        }
    }
}

#[test]
fn dedekind_over_all_small_primes_for_known_fields() {
    // Z[cbrt 2] is the full ring of integers; Z[sqrt 5] and Z[sqrt -3] are not
    let f = MonicPoly::from_i64(&[0, 0, -2]);
    for p in primes_up_to(50) {
        assert!(dedekind_p_maximal(&f, p).unwrap());
    }
    assert!(!dedekind_p_maximal(&MonicPoly::from_i64(&[0, -5]), 2).unwrap());
    assert!(!dedekind_p_maximal(&MonicPoly::from_i64(&[0, 3]), 2).unwrap());
    // x^3 - 10: disc -2700 = -2^2 3^3 5^2; Z[cbrt 10] fails only at 3
    let g = MonicPoly::from_i64(&[0, 0, -10]);
    let bad: Vec<u64> = primes_up_to(50).into_iter().filter(|&p| !dedekind_p_maximal(&g, p).unwrap()).collect();
    assert_eq!(bad, vec![3]);
}
