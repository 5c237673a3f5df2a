//! Critical-pair audit for monomial rewriting with torsion.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::element::Element;
use crate::monomial::Monomial;
use crate::presentation::{Presentation, PresentationExt};
use crate::scalar::Coefficient;
use crate::window::DegreeWindow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPairFailure<C: Coefficient> {
    pub overlap: Monomial,
    pub first: String,
    pub second: String,
    pub left: Element<C>,
    pub right: Element<C>,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport<C: Coefficient> {
    pub window: DegreeWindow,
    pub pairs_checked: usize,
    pub failures: Vec<CriticalPairFailure<C>>,
}

impl<C: Coefficient> ConfluenceReport<C> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn in_window<C: Coefficient>(p: &Presentation<C>, m: &Monomial, window: &DegreeWindow) -> bool {
    p.generators().iter().enumerate().all(|(i, g)| {
        g.degree < 0 || g.degree % 2 != 0 || m.exponent(i) <= window.cap(&g.name).max(p.nilpotency(i).unwrap_or(0))
    }) && window.max_abs_degree.is_none_or(|d| p.degree_of(m).abs() <= d)
}

/// One rewriting step with rule `r` at `m`, then the full normal form.
fn step<C: Coefficient>(p: &Arc<Presentation<C>>, r: usize, m: &Monomial) -> Element<C> {
    let rule = &p.rewrites()[r];
    let q = rule.lhs.quotient_of(m);
    let Some((neg, _)) = p.mul_monomials(&rule.lhs, &q) else {
        return p.zero();
    };
    let terms = rule.rhs.iter().filter_map(|(rm, c)| {
        p.mul_monomials(rm, &q).map(|(neg2, prod)| (prod, if neg != neg2 { -c.clone() } else { c.clone() }))
    });
    p.element(terms.collect::<Vec<_>>())
}

pub fn check_local_confluence<C: Coefficient>(
    p: &Arc<Presentation<C>>,
    window: &DegreeWindow,
) -> ConfluenceReport<C> {
    let mut failures = Vec::new();
    let mut checked = 0;
    let rules = p.rewrites();
    let label = |i: usize| alloc::format!("rewrite {} -> {}", p.format_monomial(&rules[i].lhs), rhs_text(p, i));

    for i in 0..rules.len() {
        for j in i + 1..rules.len() {
            let m = rules[i].lhs.lcm(&rules[j].lhs);
            if !in_window(p, &m, window) || odd_square(p, &m) {
                continue;
            }
            checked += 1;
            let left = step(p, i, &m);
            let right = step(p, j, &m);
            if left != right {
                failures.push(CriticalPairFailure { overlap: m, first: label(i), second: label(j), left, right });
            }
        }
        // exterior relation g² = 0 against a rule containing g
        for g in 0..p.rank() {
            if p.is_odd(g) && rules[i].lhs.exponent(g) == 1 {
                checked += 1;
                let gm = Monomial::generator(p.rank(), g);
                let right = step(p, i, &rules[i].lhs).mul_monomial(&gm);
                if !right.is_zero() {
                    failures.push(CriticalPairFailure {
                        overlap: rules[i].lhs.clone(),
                        first: alloc::format!("exterior {}^2 -> 0", p.generators()[g].name),
                        second: label(i),
                        left: p.zero(),
                        right,
                    });
                }
            }
        }
        // torsion against rewriting: m·(reduct) must vanish as well
        for t in p.torsion_rules() {
            let m = rules[i].lhs.lcm(&t.monomial);
            if !in_window(p, &m, window) || odd_square(p, &m) {
                continue;
            }
            checked += 1;
            let right = step(p, i, &m).scale(&C::from_i64(t.modulus as i64));
            if !right.is_zero() {
                failures.push(CriticalPairFailure {
                    overlap: m,
                    first: alloc::format!("torsion {}·{} = 0", t.modulus, p.format_monomial(&t.monomial)),
                    second: label(i),
                    left: p.zero(),
                    right,
                });
            }
        }
    }
    ConfluenceReport { window: window.clone(), pairs_checked: checked, failures }
}

fn odd_square<C: Coefficient>(p: &Presentation<C>, m: &Monomial) -> bool {
    (0..p.rank()).any(|i| p.is_odd(i) && m.exponent(i) > 1)
}

fn rhs_text<C: Coefficient>(p: &Presentation<C>, i: usize) -> String {
    let rule = &p.rewrites()[i];
    if rule.rhs.is_empty() {
        return String::from("0");
    }
    let parts: Vec<String> =
        rule.rhs.iter().map(|(m, c)| alloc::format!("{}·{}", c, p.format_monomial(m))).collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CoeffRing;
    use alloc::string::ToString;
    use num_bigint::BigInt;

    #[test]
    fn adversarial_fixture_is_flagged() {
        let p: Arc<Presentation<BigInt>> = Presentation::builder(CoeffRing::Integers)
            .generator("x", 0)
            .generator("y", 0)
            .order(&["x", "y"])
            .rewrite("x·y", alloc::vec![("x".to_string(), BigInt::from(1))])
            .rewrite("y·x", alloc::vec![("y".to_string(), BigInt::from(1))])
            .build()
            .unwrap();
        let r = check_local_confluence(&p, &DegreeWindow::new(3));
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].left, p.gen("x"));
        assert_eq!(r.failures[0].right, p.gen("y"));
    }

    #[test]
    fn empty_relations_are_confluent() {
        let p: Arc<Presentation<BigInt>> =
            Presentation::builder(CoeffRing::Integers).generator("x", 2).build().unwrap();
        let r = check_local_confluence(&p, &DegreeWindow::new(3));
        assert!(r.passed());
        assert_eq!(r.pairs_checked, 0);
    }
}
