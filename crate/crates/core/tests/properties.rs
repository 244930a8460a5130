//! Property suites: algebra invariants, the Cox counting rule's structural
//! sign-pattern test, Serre-duality sanity, and symmetric-product
//! multilinearity.

use proptest::prelude::*;

use h1jump_core::algebra::gcd::{poly_gcd, squarefree_test};
use h1jump_core::algebra::parse::parse_mpoly;
use h1jump_core::algebra::poly::{rat_i, MPoly, Mono};
use h1jump_core::algebra::var::Var;
use h1jump_core::bundle::{
    jumping_family, make_extension, section_sym_product, GlobalSection, TransitionBundle,
};
use h1jump_core::cohomology::{cohomology_pe, LineBundleOnPE, SplitBundle};
use h1jump_core::cox::{cox_cohomology, cox_cohomology_with_witness};

fn arb_poly(vars: &'static [Var], max_terms: usize, max_exp: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_exp, vars.len()),
            -9i64..=9,
            1i64..=3,
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        MPoly::from_terms(terms.into_iter().map(|(exps, num, den)| {
            let mut m = Mono::unit();
            for (v, e) in vars.iter().zip(exps) {
                m = m.mul(&Mono::of_var(*v, e));
            }
            (m, num_rational::BigRational::new(num.into(), den.into()))
        }))
    })
}

const UV: [Var; 2] = [Var::U, Var::V];
const UVW: [Var; 3] = [Var::U, Var::V, Var::W];

proptest! {
    #[test]
    fn print_parse_round_trip(f in arb_poly(&UVW, 6, 4)) {
        let printed = f.to_string();
        prop_assert_eq!(parse_mpoly(&printed).unwrap(), f);
    }

    #[test]
    fn ring_distributivity(
        f in arb_poly(&UV, 4, 3),
        g in arb_poly(&UV, 4, 3),
        h in arb_poly(&UV, 4, 3),
    ) {
        prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
    }

    #[test]
    fn gcd_divides_exactly(f in arb_poly(&UV, 3, 2), g in arb_poly(&UV, 3, 2)) {
        let d = poly_gcd(&f, &g);
        if !d.is_zero() {
            prop_assert!(f.div_exact(&d).is_some());
            prop_assert!(g.div_exact(&d).is_some());
        }
    }

    #[test]
    fn squared_factors_are_detected(
        f in arb_poly(&UV, 3, 2).prop_filter("nonconstant", |p| !p.is_constant()),
        g in arb_poly(&UV, 2, 1).prop_filter("nonzero", |p| !p.is_zero()),
    ) {
        let squared = f.mul(&f).mul(&g);
        prop_assert!(!squarefree_test(&squared, &[Var::U, Var::V]).unwrap());
    }

    #[test]
    fn distinct_linear_forms_are_squarefree(coeffs in prop::collection::vec((-4i64..=4, -4i64..=4), 2..4)) {
        // pairwise non-proportional forms a*v + b*w
        let mut forms: Vec<MPoly> = Vec::new();
        for (a, b) in &coeffs {
            if *a == 0 && *b == 0 {
                continue;
            }
            let form = MPoly::var(Var::V).scale(&rat_i(*a)).add(&MPoly::var(Var::W).scale(&rat_i(*b)));
            if forms.iter().any(|f| {
                // proportional iff the 2x2 determinant of coefficients vanishes
                let det = f.coefficient(&Mono::of_var(Var::V, 1)) * rat_i(*b)
                    - f.coefficient(&Mono::of_var(Var::W, 1)) * rat_i(*a);
                det == rat_i(0)
            }) {
                continue;
            }
            forms.push(form);
        }
        prop_assume!(forms.len() >= 2);
        let product = forms.iter().fold(MPoly::one(), |acc, f| acc.mul(f));
        prop_assert!(squarefree_test(&product, &[Var::V, Var::W]).unwrap());
    }

    #[test]
    fn cox_twist_covariance(
        e1 in -2i64..=2, e2 in -2i64..=2, e3 in -2i64..=2,
        m in -2i64..=2, a in -6i64..=4, b in -3i64..=3,
    ) {
        let e = SplitBundle::of(&[e1, e2, e3]);
        let shifted = SplitBundle::of(&[e1 + m, e2 + m, e3 + m]);
        prop_assert_eq!(
            cox_cohomology(&shifted, a, b - m * a).unwrap(),
            cox_cohomology(&e, a, b).unwrap()
        );
    }

    #[test]
    fn serre_vanishing_sanity(
        e1 in -2i64..=2, e2 in -2i64..=2, e3 in -2i64..=2,
        a in -7i64..=-1, b in -4i64..=4,
    ) {
        let v = cohomology_pe(&LineBundleOnPE::new(SplitBundle::of(&[e1, e2, e3]), a, b).unwrap());
        prop_assert_eq!(v.h0, 0);
        prop_assert_eq!(v.h1, 0);
        if a > -3 {
            prop_assert_eq!(v.h2, 0);
            prop_assert_eq!(v.h3, 0);
        }
    }
}

/// The two-block sign rule, structurally: a Laurent monomial of the right
/// bidegree contributes (to the H^i matching its block pattern) iff neither
/// block has mixed signs.
#[test]
fn cox_counting_is_exactly_the_sign_rule() {
    let e = [-1i64, 0, 1];
    let split = SplitBundle::of(&e);
    for a in [-5i64, -4, -3, 0, 2] {
        for b in [-3i64, -1, 0, 2] {
            let (_, witness) = cox_cohomology_with_witness(&split, a, b).unwrap();
            let mut witnessed: std::collections::BTreeSet<(usize, [i64; 5])> =
                std::collections::BTreeSet::new();
            for (i, list) in witness.iter().enumerate() {
                for m in list {
                    witnessed.insert((i, m.exponents));
                }
            }
            // enumeration box large enough for these parameters
            for q1 in -5i64..=5 {
                for q2 in -5i64..=5 {
                    let q3 = a - q1 - q2;
                    if !(-5..=5).contains(&q3) {
                        continue;
                    }
                    let s = b + e[0] * q1 + e[1] * q2 + e[2] * q3;
                    for p0 in -7i64..=7 {
                        let p1 = s - p0;
                        if !(-7..=7).contains(&p1) {
                            continue;
                        }
                        let q_pattern = if q1 >= 0 && q2 >= 0 && q3 >= 0 {
                            Some(0)
                        } else if q1 <= -1 && q2 <= -1 && q3 <= -1 {
                            Some(2)
                        } else {
                            None
                        };
                        let p_pattern = if p0 >= 0 && p1 >= 0 {
                            Some(0)
                        } else if p0 <= -1 && p1 <= -1 {
                            Some(1)
                        } else {
                            None
                        };
                        let expected = match (q_pattern, p_pattern) {
                            (Some(i2), Some(i1)) => Some(i1 + i2),
                            _ => None,
                        };
                        let key = [p0, p1, q1, q2, q3];
                        match expected {
                            Some(h) => assert!(
                                witnessed.contains(&(h, key)),
                                "monomial {key:?} missing from H^{h} at a={a} b={b}"
                            ),
                            None => {
                                for h in 0..4 {
                                    assert!(
                                        !witnessed.contains(&(h, key)),
                                        "mixed-sign monomial {key:?} wrongly contributes at a={a} b={b}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Symmetric products are multilinear and symmetric in their arguments.
#[test]
fn sym_product_multilinear_and_symmetric() {
    let e1 = make_extension(&jumping_family())
        .specialize_parameter(&rat_i(1))
        .unwrap()
        .direct_sum(&TransitionBundle::trivial(1));
    let p = |s: &str| -> MPoly { s.parse().unwrap() };
    let g1 = GlobalSection::new(
        e1.clone(),
        0,
        vec![p("1"), p("z"), p("0")],
        vec![p("0"), p("1"), p("0")],
    )
    .unwrap();
    let g2 = GlobalSection::new(
        e1.clone(),
        0,
        vec![p("0"), p("1"), p("0")],
        vec![p("-1"), p("w"), p("0")],
    )
    .unwrap();
    let y = GlobalSection::new(
        e1.clone(),
        0,
        vec![p("0"), p("0"), p("1")],
        vec![p("0"), p("0"), p("1")],
    )
    .unwrap();
    let combo = |a: i64, b: i64, c: i64| {
        g1.scale(&rat_i(a))
            .add(&g2.scale(&rat_i(b)))
            .unwrap()
            .add(&y.scale(&rat_i(c)))
            .unwrap()
    };
    let s1 = combo(1, 2, -1);
    let s1b = combo(0, 3, 2);
    let s2 = combo(-2, 1, 1);
    // symmetry
    assert_eq!(
        section_sym_product(&[s1.clone(), s2.clone()]).unwrap(),
        section_sym_product(&[s2.clone(), s1.clone()]).unwrap()
    );
    // multilinearity in the first slot
    let lhs = section_sym_product(&[s1.add(&s1b).unwrap(), s2.clone()]).unwrap();
    let rhs = section_sym_product(&[s1, s2.clone()])
        .unwrap()
        .add(&section_sym_product(&[s1b, s2]).unwrap())
        .unwrap();
    assert_eq!(lhs, rhs);
}

/// The extension dichotomy at the level of computed splitting types:
/// type (-1, 1) iff the parameter vanishes.
#[test]
fn extension_dichotomy_over_random_parameters() {
    use rand_core::{RngCore, SeedableRng};
    let g = make_extension(&jumping_family());
    let st0 =
        h1jump_core::bundle::splitting_type(&g.specialize_parameter(&rat_i(0)).unwrap()).unwrap();
    assert_eq!(st0.degrees(), &[-1, 1]);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut seen = 0;
    while seen < 20 {
        let num = (rng.next_u64() % 21) as i64 - 10;
        let den = (rng.next_u64() % 10) as i64 + 1;
        if num == 0 {
            continue;
        }
        seen += 1;
        let c = num_rational::BigRational::new(num.into(), den.into());
        let st = h1jump_core::bundle::splitting_type(&g.specialize_parameter(&c).unwrap()).unwrap();
        assert_eq!(st.degrees(), &[0, 0], "at c = {c}");
    }
}
