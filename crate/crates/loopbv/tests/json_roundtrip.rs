use loopbv::instance::{builtin_names, resolve};
use loopbv::json::*;
use loopbv::loopbv_core::chern::{gysin_homology, BundleSpec, GradedGroup, GroupPiece, Summand};
use loopbv::loopbv_core::cpn::build_theorem_a;
use loopbv::loopbv_core::{CoeffRing, Coefficient, DegreeWindow, Monomial, Presentation, PresentationExt, Report};
use std::sync::Arc;
use loopbv::with_instance;
use num_bigint::BigInt;
use proptest::prelude::*;

fn terms() -> impl Strategy<Value = Vec<((u32, u32, u32), i64)>> {
    prop::collection::vec(((0..=3u32, 0..=1u32, 0..=4u32), -50i64..=50), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_roundtrip(n in 1usize..=3, t in terms()) {
        let i = build_theorem_a(n, CoeffRing::Integers).unwrap();
        let p = &i.presentation;
        let x = p.element(t.iter().map(|((a, b, c), k)| (Monomial::from_exponents(&[*a, *b, *c]), BigInt::from(*k))));
        let text = serde_json::to_string(&element_to_json(&x)).unwrap();
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(element_from_json(p, &back).unwrap(), x);
    }

    #[test]
    fn report_roundtrip(n in 1usize..=3, t in terms(), inputs in prop::collection::vec("[a-z]{1,4}", 0..3)) {
        let i = build_theorem_a(n, CoeffRing::Integers).unwrap();
        let p = &i.presentation;
        let x = p.element(t.iter().map(|((a, b, c), k)| (Monomial::from_exponents(&[*a, *b, *c]), BigInt::from(*k))));
        let mut r = Report::new("bv-identity", "cap=2".into());
        r.record(inputs.clone(), x.clone());
        r.record(inputs, p.zero());
        let j = ReportJson::from_report(&r);
        let back: ReportJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        prop_assert_eq!(&back, &j);
        prop_assert_eq!(back.passed(), x.is_zero());
        if let Some(c) = back.failures.first() {
            prop_assert_eq!(element_from_json(p, &c.residual).unwrap(), x);
        }
        let audit = AuditReport::new("cpn", "cap=2", vec![j]);
        let again: AuditReport = serde_json::from_str(&serde_json::to_string(&audit).unwrap()).unwrap();
        prop_assert_eq!(again, audit);
    }

    #[test]
    fn bundle_roundtrip(base in 0usize..=8, ks in prop::collection::vec(-4i64..=4, 0..4), tangent in prop::option::of(1usize..=8), complement: bool) {
        let mut s: Vec<Summand> = ks.iter().map(|&k| Summand::Line(k)).collect();
        if let Some(m) = tangent {
            s.push(Summand::Tangent(m));
        }
        if complement {
            s.push(Summand::Complement);
        }
        let b = BundleSpec::new(base, s);
        let j = BundleSpecJson::from_spec(&b);
        let back: BundleSpecJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        prop_assert_eq!(back.to_spec().unwrap(), b);
    }

    #[test]
    fn graded_group_roundtrip(pieces in prop::collection::btree_map(-10i64..=30, (0usize..3, prop::collection::vec(2u64..9, 0..3)), 0..6)) {
        let g: GradedGroup = pieces.into_iter().map(|(d, (free, torsion))| (d, GroupPiece { free, torsion })).collect();
        let j = graded_group_to_json(&g);
        let back: GradedGroupJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        prop_assert_eq!(graded_group_from_json(&back).unwrap(), g);
    }
}

fn rebuild<C: Coefficient>(j: &PresentationJson, _like: &Arc<Presentation<C>>) -> Arc<Presentation<C>> {
    j.build::<C>().unwrap()
}

#[test]
fn presentations_roundtrip() {
    let w = DegreeWindow::new(4);
    for name in builtin_names() {
        let inst = resolve(&name, &w).unwrap();
        with_instance!(&inst, b => {
            let j = PresentationJson::from_presentation(&b.presentation);
            let back: PresentationJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
            assert_eq!(back, j);
            assert_eq!(rebuild(&back, &b.presentation).id(), b.presentation.id(), "{name}");
        });
    }
}

#[test]
fn operator_roundtrip() {
    let w = DegreeWindow::new(3);
    for name in ["cpn:2:Z", "cpn:2:Q", "s2", "hochschild:2", "cpn-rational:2"] {
        let inst = resolve(name, &w).unwrap();
        with_instance!(&inst, b => {
            let j = BvOperatorJson::from_operator(AlgebraRef::Named(name.into()), &b.delta, &w).unwrap();
            let back: BvOperatorJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
            assert_eq!(back, j);
            let op = back.to_operator(&b.presentation).unwrap();
            for e in b.presentation.window_basis(&w).unwrap() {
                assert_eq!(op.delta_monomial(&e.monomial).unwrap(), b.delta.delta_monomial(&e.monomial).unwrap());
            }
        });
    }
}

#[test]
fn inline_algebra_reference() {
    let p = resolve("s2", &DegreeWindow::new(2)).unwrap();
    let text = with_instance!(&p, b => serde_json::to_string(&AlgebraRef::Inline(PresentationJson::from_presentation(&b.presentation))).unwrap());
    let back: AlgebraRef = serde_json::from_str(&text).unwrap();
    assert!(matches!(back, AlgebraRef::Inline(_)));
    let named: AlgebraRef = serde_json::from_str("\"cpn:2:Z\"").unwrap();
    assert_eq!(named, AlgebraRef::Named("cpn:2:Z".into()));
}

#[test]
fn gysin_groups_serialize() {
    let h = gysin_homology(&BundleSpec::tangent(2)).unwrap();
    let j = graded_group_to_json(&h.groups());
    assert_eq!(j["3"], PieceJson { free: 0, torsion: vec![3] });
    assert_eq!(graded_group_from_json(&j).unwrap(), h.groups());
}
