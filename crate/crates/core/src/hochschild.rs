//! The Hochschild cohomology BV algebra of the cochains on ℂPⁿ and an
//! exhaustive search for BV isomorphisms with the loop homology.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::bv::BvOperator;
use crate::cpn::{build_theorem_a, CpnError, StringBvInstance};
use crate::element::Element;
use crate::hom::{AlgebraMap, MapError};
use crate::monomial::Monomial;
use crate::presentation::{Presentation, PresentationExt};
use crate::scalar::CoeffRing;
use crate::window::DegreeWindow;

#[derive(Clone, Debug)]
pub struct HochschildInstance {
    pub n: usize,
    pub presentation: Arc<Presentation<BigInt>>,
    pub delta: BvOperator<BigInt>,
}

/// ℤ[x, t] ⊗ Λ[u] / ⟨x^{n+1}, uxⁿ, (n+1)xⁿt⟩ with
/// Δ(t^k·u·x^l) = (−(k+1)n − k + l)·t^k·x^l and Δ(t^k·x^l) = 0.
pub fn build_hochschild(n: usize) -> Result<HochschildInstance, CpnError> {
    if n < 1 {
        return Err(CpnError::BadRank);
    }
    let p: Arc<Presentation<BigInt>> = Presentation::builder(CoeffRing::Integers)
        .generator("x", -2)
        .generator("u", -1)
        .generator("t", 2 * n as i64)
        .order(&["x", "u", "t"])
        .rewrite_zero(&alloc::format!("x^{}", n + 1))
        .rewrite_zero(&alloc::format!("x^{}·u", n))
        .torsion(n as u64 + 1, &alloc::format!("x^{}·t", n))
        .build()?;
    let alg = p.clone();
    let delta = BvOperator::closed(&p, "hochschild-closed-form", move |m| {
        if m.exponent(1) == 0 {
            return Ok(alg.zero());
        }
        let (l, k) = (m.exponent(0) as i64, m.exponent(2) as i64);
        let coeff = -(k + 1) * n as i64 - k + l;
        Ok(alg.term(&Monomial::from_exponents(&[l as u32, 0, k as u32]), BigInt::from(coeff)))
    });
    Ok(HochschildInstance { n, presentation: p, delta })
}

/// c ↦ ε₁x, w ↦ ε₂u, v ↦ ε₃t + α·xⁿt².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoCandidate {
    pub eps: [i64; 3],
    pub alpha: u64,
}

impl core::fmt::Display for IsoCandidate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = |e: i64| if e < 0 { "-" } else { "" };
        write!(f, "c -> {}x, w -> {}u, v -> {}t", s(self.eps[0]), s(self.eps[1]), s(self.eps[2]))?;
        if self.alpha != 0 {
            write!(f, " + {}·x^n·t^2", self.alpha)?;
        }
        Ok(())
    }
}

/// All 8(n+1) candidates, signs before α.
pub fn candidates(n: usize) -> Vec<IsoCandidate> {
    let mut out = Vec::with_capacity(8 * (n + 1));
    for e1 in [1, -1] {
        for e2 in [1, -1] {
            for e3 in [1, -1] {
                for alpha in 0..=n as u64 {
                    out.push(IsoCandidate { eps: [e1, e2, e3], alpha });
                }
            }
        }
    }
    out
}

fn candidate_map(
    src: &StringBvInstance<BigInt>,
    h: &HochschildInstance,
    cand: &IsoCandidate,
) -> Result<AlgebraMap<BigInt>, MapError<BigInt>> {
    let q = &h.presentation;
    let n = h.n as u32;
    let extra = q.term(&Monomial::from_exponents(&[n, 0, 2]), BigInt::from(cand.alpha));
    let images = [
        ("c", q.gen("x").scale_i64(cand.eps[0])),
        ("w", q.gen("u").scale_i64(cand.eps[1])),
        ("v", q.gen("t").scale_i64(cand.eps[2]) + extra),
    ];
    AlgebraMap::new(&src.presentation, q, &images)
}

/// Outcome of testing one candidate.
#[derive(Clone, Debug)]
pub struct CandidateResult {
    pub candidate: IsoCandidate,
    pub relations_ok: bool,
    pub bijective: bool,
    /// First window monomial where φ∘Δ ≠ Δ∘φ, with the residual φ(Δm) − Δ(φm).
    pub delta_failure: Option<(String, Element<BigInt>)>,
}

impl CandidateResult {
    pub fn passed(&self) -> bool {
        self.relations_ok && self.bijective && self.delta_failure.is_none()
    }
}

pub fn check_candidate(
    n: usize,
    cand: &IsoCandidate,
    window: &DegreeWindow,
) -> Result<CandidateResult, CpnError> {
    let src = build_theorem_a(n, CoeffRing::Integers)?;
    let h = build_hochschild(n)?;
    check_candidate_on(&src, &h, cand, window)
}

fn check_candidate_on(
    src: &StringBvInstance<BigInt>,
    h: &HochschildInstance,
    cand: &IsoCandidate,
    window: &DegreeWindow,
) -> Result<CandidateResult, CpnError> {
    let map = candidate_map(src, h, cand).map_err(|e| CpnError::Map(e.to_string()))?;
    let relations_ok = map.check_relations().is_ok();
    let bijective = relations_ok && map.check_isomorphism(window).is_ok();
    let mut delta_failure = None;
    for e in src.presentation.window_basis(window)? {
        let x = src.presentation.monomial(&e.monomial);
        let lhs = map.apply(&src.delta.apply(&x)?);
        let rhs = h.delta.apply(&map.apply(&x))?;
        let res = lhs - rhs;
        if !res.is_zero() {
            delta_failure = Some((src.presentation.format_monomial(&e.monomial), res));
            break;
        }
    }
    Ok(CandidateResult { candidate: *cand, relations_ok, bijective, delta_failure })
}

#[derive(Clone, Debug)]
pub struct IsoDecision {
    pub n: usize,
    pub candidates_checked: usize,
    pub iso: Option<IsoCandidate>,
    /// When no candidate works: the least failure over all candidates,
    /// preferring residuals of finite order.
    pub obstruction: Option<(IsoCandidate, String, Element<BigInt>)>,
}

fn residual_weight(x: &Element<BigInt>) -> (usize, usize) {
    let p = x.algebra();
    let free = x.terms().keys().filter(|m| p.annihilator(m) == 0).count();
    (free, x.len())
}

/// Tries every candidate; returns the first that is a ring isomorphism
/// intertwining Δ on the window.
pub fn decide_bv_iso(n: usize, window: &DegreeWindow) -> Result<IsoDecision, CpnError> {
    let src = build_theorem_a(n, CoeffRing::Integers)?;
    let h = build_hochschild(n)?;
    let all = candidates(n);
    let mut best: Option<(IsoCandidate, String, Element<BigInt>)> = None;
    for (k, cand) in all.iter().enumerate() {
        let r = check_candidate_on(&src, &h, cand, window)?;
        if r.passed() {
            return Ok(IsoDecision { n, candidates_checked: k + 1, iso: Some(*cand), obstruction: None });
        }
        if let Some((input, res)) = r.delta_failure {
            let better = match &best {
                None => true,
                Some((_, _, b)) => residual_weight(&res) < residual_weight(b),
            };
            if better {
                best = Some((*cand, input, res));
            }
        }
    }
    Ok(IsoDecision { n, candidates_checked: all.len(), iso: None, obstruction: best })
}

/// Re-checks φ(ab) = φ(a)φ(b) on all window basis pairs for a candidate.
pub fn verify_products(n: usize, cand: &IsoCandidate, window: &DegreeWindow) -> Result<bool, CpnError> {
    let src = build_theorem_a(n, CoeffRing::Integers)?;
    let h = build_hochschild(n)?;
    let map = candidate_map(&src, &h, cand).map_err(|e| CpnError::Map(e.to_string()))?;
    let p = &src.presentation;
    let basis: Vec<Element<BigInt>> =
        p.window_basis(window)?.into_iter().map(|e| p.monomial(&e.monomial)).collect();
    for a in &basis {
        for b in &basis {
            if map.apply(&(a * b)) != &map.apply(a) * &map.apply(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceCheck {
    pub degree: i64,
    /// (monomial, annihilator) on the loop-homology side.
    pub loop_side: Vec<(String, u64)>,
    pub hochschild_side: Vec<(String, u64)>,
    pub expected: Vec<u64>,
    pub ok: bool,
}

/// The pieces in degrees −1, −2 and 2n are ℤ, ℤ and ℤ ⊕ ℤ/(n+1) on both
/// sides, so generator images are forced up to the candidate family.
pub fn candidate_completeness_check(n: usize, degrees: &[i64]) -> Result<Vec<PieceCheck>, CpnError> {
    let src = build_theorem_a(n, CoeffRing::Integers)?;
    let h = build_hochschild(n)?;
    let big = DegreeWindow::new(64);
    let mut out = Vec::new();
    for &d in degrees {
        let side = |p: &Arc<Presentation<BigInt>>| -> Vec<(String, u64)> {
            let piece = p.basis_in_degree(d, &big);
            piece.entries.iter().map(|e| (p.format_monomial(&e.monomial), e.annihilator)).collect()
        };
        let loop_side = side(&src.presentation);
        let hochschild_side = side(&h.presentation);
        let expected: Vec<u64> = if d == 2 * n as i64 { alloc::vec![0, n as u64 + 1] } else { alloc::vec![0] };
        let anns = |v: &[(String, u64)]| {
            let mut a: Vec<u64> = v.iter().map(|(_, k)| *k).collect();
            a.sort_unstable();
            a
        };
        let ok = anns(&loop_side) == expected && anns(&hochschild_side) == expected;
        out.push(PieceCheck { degree: d, loop_side, hochschild_side, expected, ok });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let h = build_hochschild(2).unwrap();
        let p = &h.presentation;
        assert_eq!(h.delta.apply(&p.gen("u")).unwrap(), p.scalar(BigInt::from(-2)));
        let h1 = build_hochschild(1).unwrap();
        let q = &h1.presentation;
        assert_eq!(h1.delta.apply(&q.parse_element("t·u").unwrap()).unwrap(), q.parse_element("-3·t").unwrap());
        assert!(h1.delta.apply(&q.parse_element("t·x").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn dichotomy() {
        let w = DegreeWindow::new(3);
        let d2 = decide_bv_iso(2, &w).unwrap();
        assert_eq!(d2.iso, Some(IsoCandidate { eps: [1, -1, 1], alpha: 0 }));
        let d1 = decide_bv_iso(1, &w).unwrap();
        assert!(d1.iso.is_none());
        let (_, input, res) = d1.obstruction.unwrap();
        assert_eq!(input, "w");
        let p = res.algebra().clone();
        assert_eq!(res, p.parse_element("x·t").unwrap());
    }

    #[test]
    fn completeness() {
        for c in candidate_completeness_check(3, &[-1, -2, 6]).unwrap() {
            assert!(c.ok, "{c:?}");
        }
        let c = candidate_completeness_check(2, &[-1]).unwrap();
        assert_eq!(c[0].loop_side, [(String::from("w"), 0)]);
        assert_eq!(c[0].hochschild_side, [(String::from("u"), 0)]);
    }
}
