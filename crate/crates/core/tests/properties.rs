use loopbv_core::bv::{bracket, check_bv_identity};
use loopbv_core::chern::{
    degree_raising, pair_top, solve_lambda, total_chern, BundleSpec, CohClass, SphereClass, Summand,
};
use loopbv_core::cpn::{additive_order, build_theorem_a, solve_mu, StringBvInstance};
use loopbv_core::{CoeffRing, DegreeWindow, Element, Monomial, PresentationExt};
use num_bigint::BigInt;
use proptest::prelude::*;

fn inst(n: usize) -> StringBvInstance<BigInt> {
    build_theorem_a(n, CoeffRing::Integers).unwrap()
}

// (n, c exponent, w exponent, v exponent)
fn monomial(n: usize) -> impl Strategy<Value = Monomial> {
    (0..=n as u32, 0..=1u32, 0..=4u32).prop_map(|(c, w, v)| Monomial::from_exponents(&[c, w, v]))
}

fn element(n: usize) -> impl Strategy<Value = Vec<(Monomial, i64)>> {
    prop::collection::vec((monomial(n), -5i64..=5), 0..4)
}

fn build(i: &StringBvInstance<BigInt>, terms: &[(Monomial, i64)]) -> Element<BigInt> {
    i.presentation.element(terms.iter().map(|(m, c)| (m.clone(), BigInt::from(*c))))
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_graded_commutative_and_associative(
        n in 1usize..=4,
        a in monomial(4), b in monomial(4), c in monomial(4),
    ) {
        let i = inst(n);
        let p = &i.presentation;
        let clip = |m: &Monomial| Monomial::from_exponents(&[m.exponent(0).min(n as u32), m.exponent(1), m.exponent(2)]);
        let (x, y, z) = (p.monomial(&clip(&a)), p.monomial(&clip(&b)), p.monomial(&clip(&c)));
        let s = sign(p.degree_of(&clip(&a)) * p.degree_of(&clip(&b)));
        prop_assert_eq!(&x * &y, (&y * &x).scale_i64(s));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn normal_form_is_idempotent_and_printable(n in 1usize..=4, t in element(4)) {
        let i = inst(n);
        let t: Vec<_> = t.into_iter().filter(|(m, _)| m.exponent(0) <= n as u32).collect();
        let x = build(&i, &t);
        let again = i.presentation.element(x.terms().iter().map(|(m, c)| (m.clone(), c.clone())));
        prop_assert_eq!(&again, &x);
        let printed = x.to_string();
        prop_assert_eq!(i.presentation.parse_element(&printed).unwrap(), x);
    }

    #[test]
    fn delta_is_linear_and_squares_to_zero(n in 1usize..=5, t1 in element(5), t2 in element(5), k in -4i64..=4) {
        let i = inst(n);
        let keep = |t: Vec<(Monomial, i64)>| t.into_iter().filter(|(m, _)| m.exponent(0) <= n as u32).collect::<Vec<_>>();
        let x = build(&i, &keep(t1));
        let y = build(&i, &keep(t2));
        let d = &i.delta;
        let lhs = d.apply(&(x.scale_i64(k) + y.clone())).unwrap();
        prop_assert_eq!(lhs, d.apply(&x).unwrap().scale_i64(k) + d.apply(&y).unwrap());
        prop_assert!(d.apply(&d.apply(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn seven_term_identity_on_random_triples(n in 1usize..=5, a in monomial(5), b in monomial(5), c in monomial(5)) {
        let i = inst(n);
        let p = &i.presentation;
        let (x, y, z) = (p.monomial(&a), p.monomial(&b), p.monomial(&c));
        prop_assert!(check_bv_identity(&i.delta, &x, &y, &z).unwrap().is_zero());
    }

    #[test]
    fn bracket_symmetry_and_derivation(n in 1usize..=4, a in monomial(4), b in monomial(4), c in monomial(4)) {
        let i = inst(n);
        let p = &i.presentation;
        let (x, y, z) = (p.monomial(&a), p.monomial(&b), p.monomial(&c));
        if x.is_zero() || y.is_zero() || z.is_zero() {
            return Ok(());
        }
        let (da, db) = (p.degree_of(&a), p.degree_of(&b));
        let br = |u: &Element<BigInt>, v: &Element<BigInt>| bracket(&i.delta, u, v).unwrap();
        prop_assert!((br(&x, &y) + br(&y, &x).scale_i64(sign((da + 1) * (db + 1)))).is_zero());
        let leibniz = br(&x, &(&y * &z)) - &br(&x, &y) * &z - (&y * &br(&x, &z)).scale_i64(sign((da + 1) * db));
        prop_assert!(leibniz.is_zero());
    }

    #[test]
    fn mu_recurrence(n in 1usize..=40) {
        let mu = solve_mu(n).unwrap().values;
        prop_assert_eq!(mu[n], 0);
        prop_assert_eq!(mu[n - 1], 1);
        for k in 1..=n {
            prop_assert_eq!(mu[k], mu[k - 1] + mu[1] - mu[0]);
        }
    }

    #[test]
    fn whitney_product(m in 0usize..=8, a in prop::collection::vec(-3i64..=3, 0..4), b in prop::collection::vec(-3i64..=3, 0..4)) {
        let x = BundleSpec::lines(m, &a);
        let y = BundleSpec::lines(m, &b);
        prop_assert_eq!(total_chern(&x.direct_sum(&y).unwrap()), total_chern(&x).mul(&total_chern(&y)));
    }

    #[test]
    fn degree_raising_kills_b_classes(m in 1usize..=6, j in 0usize..=6) {
        let t = BundleSpec::tangent(m);
        let zero = BundleSpec::new(m, Vec::new());
        prop_assert!(degree_raising(&t, &zero, SphereClass::B(j)).unwrap().is_empty());
    }
}

#[test]
fn complement_and_tangent_classes() {
    for m in 0..=8 {
        let b = BundleSpec::new(m, vec![Summand::Line(-1), Summand::Complement]);
        assert_eq!(total_chern(&b), CohClass::one(m));
    }
    for n in 1..=10usize {
        let c = total_chern(&BundleSpec::tangent(n));
        assert_eq!(pair_top(&c, n).unwrap(), BigInt::from(n + 1));
    }
    assert_eq!(total_chern(&BundleSpec::lines(3, &[0, 0])), CohClass::one(3));
}

#[test]
fn lambda_constraints() {
    for n in 1..=10usize {
        let l = solve_lambda(n).unwrap();
        for (k, lj) in l.iter().enumerate() {
            let j = k as i64 + 1;
            assert_eq!(lj.abs(), j + 1);
            assert_eq!((lj - 1).rem_euclid(j + 2), 0);
        }
    }
    for j in 1..=20i64 {
        assert_eq!((-j - 1).rem_euclid(j + 1), 0);
    }
}

#[test]
fn torsion_term_order() {
    for n in 1..=5usize {
        let i = inst(n);
        let p = &i.presentation;
        for pp in 0..=n as u32 {
            for q in 0..=5u32 {
                let m = Monomial::from_exponents(&[n as u32 + pp, 0, q + 1]);
                let x = p.term(&m, BigInt::from(n * (n + 1) / 2));
                if pp > 0 || n % 2 == 0 {
                    assert!(x.is_zero(), "n={n} p={pp}");
                } else {
                    assert_eq!(additive_order(&x), Some(2), "n={n} q={q}");
                }
            }
        }
    }
}

#[test]
fn window_is_recorded() {
    let w = DegreeWindow::new(6);
    assert!(w.describe().contains('6'));
}
