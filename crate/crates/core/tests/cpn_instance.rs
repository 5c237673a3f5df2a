use loopbv_core::bv::{
    audit_antisymmetry, audit_bv_identity, audit_jacobi, audit_leibniz, basis_pairs, basis_triples,
    check_delta_squared, extend_delta_by_bv, BvOperator, ExtensionError, Seed,
};
use loopbv_core::cpn::*;
use loopbv_core::hopf::{check_action_laws, e_act, partial_w, ActionAudit};
use loopbv_core::{CoeffRing, DegreeWindow, Monomial, PresentationExt};
use num_bigint::BigInt;

fn inst(n: usize) -> StringBvInstance<BigInt> {
    build_theorem_a(n, CoeffRing::Integers).unwrap()
}

fn basis(i: &StringBvInstance<BigInt>, w: &DegreeWindow) -> Vec<Monomial> {
    i.presentation.window_basis(w).unwrap().into_iter().map(|e| e.monomial).collect()
}

#[test]
fn bv_axioms_small_window() {
    let w = DegreeWindow::new(2);
    for n in 1..=3 {
        let i = inst(n);
        let b = basis(&i, &w);
        assert!(check_delta_squared(&i.delta, &w).unwrap().passed());
        let t = basis_triples(&b);
        let label = w.describe();
        let r = audit_bv_identity(&i.delta, &t, &label).unwrap();
        assert!(r.passed(), "n={n} {:?}", r.failures.first());
        assert!(audit_antisymmetry(&i.delta, &basis_pairs(&b), &label).unwrap().passed());
        assert!(audit_leibniz(&i.delta, &t, &label).unwrap().passed());
        assert!(audit_jacobi(&i.delta, &t, &label).unwrap().passed());
        assert!(i.delta.validate(&w).unwrap().passed());
    }
}

#[test]
fn bracket_examples() {
    for n in 1..=5 {
        let i = inst(n);
        let p = &i.presentation;
        let br = |a: &str, b: &str| loopbv_core::bv::bracket(&i.delta, &p.gen(a), &p.gen(b)).unwrap();
        assert_eq!(br("c", "w"), -p.gen("c"));
        assert!(br("c", "c").is_zero());
        let want = p.parse_element(&format!("{}·v + {}·c^{n}·v^2", n + 1, (n + 1) * n / 2)).unwrap();
        assert_eq!(br("v", "w"), want);
    }
}

#[test]
fn seven_term_examples() {
    let i = inst(2);
    let p = &i.presentation;
    let r = loopbv_core::bv::check_bv_identity(&i.delta, &p.gen("c"), &p.gen("c"), &p.gen("w")).unwrap();
    assert!(r.is_zero());
    let i1 = inst(1);
    let q = &i1.presentation;
    let r = loopbv_core::bv::check_bv_identity(&i1.delta, &q.gen("w"), &q.gen("v"), &q.gen("v")).unwrap();
    assert!(r.is_zero());
}

#[test]
fn faulty_operator_fails_delta_squared() {
    let i = inst(2);
    let p = &i.presentation;
    let bad = i.delta.clone().with_override(p.gen_monomial("c").unwrap(), p.gen("w"));
    let r = check_delta_squared(&bad, &DegreeWindow::new(2)).unwrap();
    assert!(!r.passed());
    let zero = BvOperator::zero(p);
    assert!(check_delta_squared(&zero, &DegreeWindow::new(2)).unwrap().passed());
}

#[test]
fn extension_reproduces_closed_form() {
    let w = DegreeWindow::new(3);
    for n in 1..=3 {
        let i = inst(n);
        let seed = Seed::from_operator(&i.delta).unwrap();
        let ext = extend_delta_by_bv(&i.presentation, &seed, &w).unwrap();
        for m in basis(&i, &w) {
            assert_eq!(ext.delta_monomial(&m).unwrap(), i.delta.delta_monomial(&m).unwrap());
        }
    }
    let i = inst(2);
    let p = &i.presentation;
    let seed = Seed::from_operator(&i.delta).unwrap();
    let ext = extend_delta_by_bv(p, &seed, &w).unwrap();
    assert_eq!(ext.apply(&p.parse_element("c·w·v").unwrap()).unwrap(), p.parse_element("4·c·v").unwrap());

    let mut zero = Seed::new();
    for word in Seed::short_words(p) {
        zero.insert(word, p.zero());
    }
    let ext = extend_delta_by_bv(p, &zero, &w).unwrap();
    assert!(basis(&i, &w).iter().all(|m| ext.delta_monomial(m).unwrap().is_zero()));

    let mut bad = seed.clone();
    let wm = p.gen_monomial("w").unwrap();
    bad.insert(wm.clone(), seed.get(&wm).unwrap().clone() + p.one());
    assert!(matches!(extend_delta_by_bv(p, &bad, &w), Err(ExtensionError::Inconsistent { .. })));
}

#[test]
fn action_laws_hold() {
    for n in 1..=2 {
        let i = inst(n);
        let w = DegreeWindow::new(2);
        let lw = DegreeWindow::new(1);
        let audit = ActionAudit {
            op: &i.delta,
            table: &i.actions,
            loops: &i.loops,
            group: &i.group,
            window: &w,
            loops_window: &lw,
        };
        for r in check_action_laws(&audit).unwrap() {
            assert!(r.passed(), "n={n} {}: {:?}", r.check, r.failures.first());
        }
        assert!(i.loops.check_hopf_tables(&DegreeWindow::new(2)).unwrap().passed());
        assert!(i.group.check_hopf_tables(&DegreeWindow::new(1)).unwrap().passed());
    }
}

#[test]
fn action_examples() {
    let i = inst(1);
    let p = &i.presentation;
    let e2 = i.loops.generator(1);
    assert_eq!(i.actions.unit_image(&e2), p.gen("v"));
    let e0 = i.loops.generator(0);
    assert_eq!(i.actions.omega_act(&e0, &p.gen("v")), p.parse_element("v + c·v^2").unwrap());
    assert_eq!(partial_w(&p.gen("w")), p.one());
    assert!(partial_w(&p.gen("v").pow(3)).is_zero());
    let i2 = inst(2);
    let q = &i2.presentation;
    assert_eq!(partial_w(&q.parse_element("c·w·v").unwrap()), q.parse_element("c·v").unwrap());
    assert_eq!(e_act(2, 1, &q.parse_element("c·w").unwrap()), q.parse_element("2·c^2·v").unwrap());
}

#[test]
fn s2_and_rational_tables() {
    let w = DegreeWindow::new(6);
    let s = s2_instance(&w).unwrap();
    let p = &s.presentation;
    for k in 0..=5u32 {
        let x = p.parse_element(&format!("b·v^{k}")).unwrap();
        let want = p.parse_element(&format!("{}·v^{k} + a·v^{}", 2 * k + 1, k + 1)).unwrap();
        assert_eq!(s.delta.apply(&x).unwrap(), want, "k={k}");
    }
    for n in 1..=2 {
        let r = rational_instance(n, &DegreeWindow::new(4)).unwrap();
        let q = &r.presentation;
        for k in 0..=3i64 {
            for l in 0..=n as i64 {
                let x = q.parse_element(&format!("t^{k}·u·x^{l}")).unwrap();
                let coeff = -(k + 1) * n as i64 - k + l;
                let want = q.parse_element(&format!("{coeff}·t^{k}·x^{l}")).unwrap();
                assert_eq!(r.delta.apply(&x).unwrap(), want, "n={n} k={k} l={l}");
            }
        }
    }
}

#[test]
fn admissible_changes_are_isomorphisms() {
    let i = inst(2);
    let w = DegreeWindow::new(3);
    for s in [[1, 1, 1], [-1, 1, -1], [1, -1, 1]] {
        for alpha in 0..3 {
            assert!(admissible_change(&i, s, alpha, &w).is_ok());
        }
    }
    assert!(admissible_change(&i, [2, 1, 1], 0, &w).is_err());
}
