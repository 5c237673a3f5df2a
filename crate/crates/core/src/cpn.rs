//! The loop homology BV algebra of ℂPⁿ: the closed-form operator, the
//! action data that determines it, the inductive derivation from that data,
//! and changes of generators and coefficients.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::bv::{BvError, BvOperator};
use crate::element::Element;
use crate::error::AlgebraError;
use crate::hom::AlgebraMap;
use crate::hopf::{delta_v_multiple, ActionTable, HopfAlgebra};
use crate::linalg;
use crate::monomial::Monomial;
use crate::presentation::{Presentation, PresentationExt};
use crate::report::Report;
use crate::scalar::{binomial, CoeffRing, Coefficient};
use crate::window::DegreeWindow;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CpnError {
    #[error("n must be at least 1")]
    BadRank,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bv(#[from] BvError),
    #[error("{0}")]
    Map(String),
    #[error("internal: {0}")]
    Internal(String),
}

// generator indices in the order [c, w, v]
const C: usize = 0;
const W: usize = 1;
const V: usize = 2;

/// ℤ[c, v] ⊗ Λ[w] / ⟨c^{n+1}, cⁿw, (n+1)cⁿv⟩ with |c| = −2, |w| = −1,
/// |v| = 2n.
pub fn cpn_presentation<D: Coefficient>(n: usize, ring: CoeffRing) -> Result<Arc<Presentation<D>>, CpnError> {
    if n < 1 {
        return Err(CpnError::BadRank);
    }
    let p = Presentation::builder(ring)
        .generator("c", -2)
        .generator("w", -1)
        .generator("v", 2 * n as i64)
        .order(&["c", "w", "v"])
        .rewrite_zero(&alloc::format!("c^{}", n + 1))
        .rewrite_zero(&alloc::format!("c^{}·w", n))
        .torsion(n as u64 + 1, &alloc::format!("c^{}·v", n))
        .build()?;
    Ok(p)
}

fn cwv<D: Coefficient>(p: &Arc<Presentation<D>>, c: u32, w: u32, v: u32) -> Monomial {
    let _ = p;
    Monomial::from_exponents(&[c, w, v])
}

/// Δ(c^p·w·v^q) = [(n−p)+q(n+1)]c^p v^q + (q+1)·C(n+1,2)·c^{n+p}v^{q+1},
/// Δ(c^p v^q) = 0.
pub fn theorem_a_value<D: Coefficient>(p: &Arc<Presentation<D>>, n: usize, m: &Monomial) -> Element<D> {
    if m.exponent(W) == 0 {
        return p.zero();
    }
    let (pp, q) = (m.exponent(C), m.exponent(V));
    let lin = (n as i64 - pp as i64) + q as i64 * (n as i64 + 1);
    let tors = (q as i64 + 1) * binomial(n as i64 + 1, 2);
    p.element([
        (cwv(p, pp, 0, q), D::from_i64(lin)),
        (cwv(p, n as u32 + pp, 0, q + 1), D::from_i64(tors)),
    ])
}

pub fn theorem_a_operator<D: Coefficient>(p: &Arc<Presentation<D>>, n: usize) -> BvOperator<D> {
    let alg = p.clone();
    BvOperator::closed(p, "cpn-closed-form", move |m| Ok(theorem_a_value(&alg, n, m)))
}

/// μ_0, …, μ_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuVector {
    pub values: Vec<i64>,
}

/// Solves μ_i = μ_0 + i(μ_1 − μ_0) with μ_n = 0 and μ_{n−1} = 1.
pub fn solve_mu(n: usize) -> Result<MuVector, CpnError> {
    if n < 1 {
        return Err(CpnError::BadRank);
    }
    // unknowns (μ_0, d): μ_0 + n·d = 0, μ_0 + (n−1)·d = 1
    let a = alloc::vec![
        alloc::vec![BigInt::from(1), BigInt::from(n)],
        alloc::vec![BigInt::from(1), BigInt::from(n - 1)],
    ];
    let b = [BigInt::zero(), BigInt::from(1)];
    let x = linalg::solve_integer(&a, &b, &[0, 0]).ok_or_else(|| CpnError::Internal("μ boundary data".into()))?;
    let mu0 = x[0].to_i64().ok_or_else(|| CpnError::Internal("μ overflow".into()))?;
    let d = x[1].to_i64().ok_or_else(|| CpnError::Internal("μ overflow".into()))?;
    let values: Vec<i64> = (0..=n as i64).map(|i| mu0 + i * d).collect();
    if values.iter().enumerate().any(|(i, &m)| m != n as i64 - i as i64) {
        return Err(CpnError::Internal(alloc::format!("μ = {values:?} is not n − i")));
    }
    Ok(MuVector { values })
}

/// The data fixing Δ: E_{2i}·1, e_{2j+1} on generators, and Δ(c^i·w).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBData {
    pub n: usize,
    pub omega_values: Vec<Element<BigInt>>,
    /// `g_values[j]` = e_{2j+1} on (c, w, v).
    pub g_values: Vec<Vec<Element<BigInt>>>,
    /// Torsion part of Δ(w), a multiple of cⁿ·v.
    pub delta_w_torsion: Element<BigInt>,
    pub mu: MuVector,
}

impl TheoremBData {
    pub fn action_table(&self) -> ActionTable<BigInt> {
        ActionTable {
            module: self.omega_values[0].algebra().clone(),
            n: self.n,
            omega_values: self.omega_values.clone(),
            g_values: self.g_values.clone(),
        }
    }

    /// Δ(c^i·w) = (torsion)·c^i + μ_i·c^i.
    pub fn delta_cw(&self, i: usize) -> Element<BigInt> {
        let p = self.omega_values[0].algebra();
        let ci = p.gen("c").pow(i as u32);
        &self.delta_w_torsion * &ci + ci.scale_i64(self.mu.values[i])
    }
}

/// The stored tables: E_{2i}·1 = c^{n−i}v (plus 1 when i = 0),
/// e_{2j+1}·w = (j+1)c^{n−j}v, e·c = e·v = 0, Δ(w) = C(n+1,2)cⁿv + μ_0.
pub fn theorem_b_reference(n: usize) -> Result<TheoremBData, CpnError> {
    let p = cpn_presentation::<BigInt>(n, CoeffRing::Integers)?;
    let mu = solve_mu(n)?;
    let omega_values = (0..=n)
        .map(|i| {
            let base = p.monomial(&cwv(&p, (n - i) as u32, 0, 1));
            if i == 0 {
                base + p.one()
            } else {
                base
            }
        })
        .collect();
    let g_values = (0..=n)
        .map(|j| alloc::vec![p.zero(), p.term(&cwv(&p, (n - j) as u32, 0, 1), BigInt::from(j + 1)), p.zero()])
        .collect();
    let delta_w_torsion = p.term(&cwv(&p, n as u32, 0, 1), BigInt::from(binomial(n as i64 + 1, 2)));
    Ok(TheoremBData { n, omega_values, g_values, delta_w_torsion, mu })
}

/// A ℂPⁿ BV algebra together with its action tables.
#[derive(Clone, Debug)]
pub struct StringBvInstance<D: Coefficient> {
    pub n: usize,
    pub presentation: Arc<Presentation<D>>,
    pub delta: BvOperator<D>,
    pub actions: ActionTable<D>,
    pub loops: HopfAlgebra<D>,
    pub group: HopfAlgebra<D>,
    /// The algebra is H_{*+grading_shift} of the free loop space.
    pub grading_shift: usize,
}

fn transport<D: Coefficient>(x: &Element<BigInt>, p: &Arc<Presentation<D>>) -> Element<D> {
    p.element(x.terms().iter().map(|(m, c)| (m.clone(), D::from_bigint(c.clone()))).collect::<Vec<_>>())
}

pub fn build_theorem_a(n: usize, ring: CoeffRing) -> Result<StringBvInstance<BigInt>, CpnError> {
    if matches!(ring, CoeffRing::Rationals) {
        return Err(CpnError::Internal("use build_theorem_a_over for ℚ".into()));
    }
    build_theorem_a_over::<BigInt>(n, ring)
}

/// The closed-form instance over any coefficient ring.
pub fn build_theorem_a_over<D: Coefficient>(n: usize, ring: CoeffRing) -> Result<StringBvInstance<D>, CpnError> {
    let p = cpn_presentation::<D>(n, ring)?;
    let b = theorem_b_reference(n)?;
    let actions = ActionTable {
        module: p.clone(),
        n,
        omega_values: b.omega_values.iter().map(|x| transport(x, &p)).collect(),
        g_values: b.g_values.iter().map(|row| row.iter().map(|x| transport(x, &p)).collect()).collect(),
    };
    Ok(StringBvInstance {
        n,
        delta: theorem_a_operator(&p, n),
        presentation: p,
        actions,
        loops: HopfAlgebra::loops(n, ring),
        group: HopfAlgebra::group(n, ring),
        grading_shift: 2 * n,
    })
}

/// Reduces an integral instance to ℚ or ℤ/m; Δ and the actions are mapped
/// termwise.
pub fn change_coefficients<D: Coefficient>(
    inst: &StringBvInstance<BigInt>,
    ring: CoeffRing,
) -> Result<StringBvInstance<D>, CpnError> {
    let n = inst.n;
    let p = cpn_presentation::<D>(n, ring)?;
    let src = inst.delta.clone();
    let target = p.clone();
    let delta = BvOperator::closed(&p, "reduced", move |m| {
        let z = src.algebra().monomial(m);
        let mut out = target.zero();
        for (zm, zc) in z.terms() {
            let d = src.delta_monomial(zm)?;
            out = out.add_scaled(&transport(&d, &target), &D::from_bigint(zc.clone()));
        }
        Ok(out)
    });
    let a = &inst.actions;
    let actions = ActionTable {
        module: p.clone(),
        n,
        omega_values: a.omega_values.iter().map(|x| transport(x, &p)).collect(),
        g_values: a.g_values.iter().map(|row| row.iter().map(|x| transport(x, &p)).collect()).collect(),
    };
    Ok(StringBvInstance {
        n,
        presentation: p,
        delta,
        actions,
        loops: HopfAlgebra::loops(n, ring),
        group: HopfAlgebra::group(n, ring),
        grading_shift: inst.grading_shift,
    })
}

/// Outcome of the inductive derivation of Δ.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub operator: BvOperator<BigInt>,
    pub mu: MuVector,
    /// Derived minus closed form on every window basis monomial, plus the
    /// consistency check Δ(cⁿ·w) = Δ(0) = 0.
    pub comparison: Report<BigInt>,
}

// Δ(xyz) from the seven-term identity, x,y,z homogeneous
#[allow(clippy::too_many_arguments)]
fn seven_term(
    x: &Element<BigInt>,
    y: &Element<BigInt>,
    z: &Element<BigInt>,
    dxy: &Element<BigInt>,
    dyz: &Element<BigInt>,
    dxz: &Element<BigInt>,
    dx: &Element<BigInt>,
    dy: &Element<BigInt>,
    dz: &Element<BigInt>,
) -> Element<BigInt> {
    let s = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    let ax = x.degree().unwrap_or(0);
    let ay = y.degree().unwrap_or(0);
    dxy * z + (x * dyz).scale_i64(s(ax)) + (y * dxz).scale_i64(s((ax - 1) * ay))
        - &(dx * y) * z
        - (&(x * dy) * z).scale_i64(s(ax))
        - (&(x * y) * dz).scale_i64(s(ax + ay))
}

/// Derives Δ on the window from the action data: first Δ(c^p) and Δ(c^p·w)
/// by the seven-term identity, then one v at a time through the E_{2n} case
/// of the Δ(ax) law.
pub fn derive_theorem_a(n: usize, data: &TheoremBData, window: &DegreeWindow) -> Result<Derivation, CpnError> {
    let p = data.omega_values[0].algebra().clone();
    let loops = HopfAlgebra::<BigInt>::loops(n, CoeffRing::Integers);
    let table = data.action_table();
    let c = p.gen("c");
    let w = p.gen("w");
    let zero = p.zero();
    let cp = |k: usize| c.pow(k as u32);

    // Δ(c^k), seeds Δ(c) = Δ(c²) = 0
    let mut dc: Vec<Element<BigInt>> = alloc::vec![zero.clone(), zero.clone(), zero.clone()];
    for k in 3..=n + 1 {
        let v = seven_term(&c, &cp(k - 2), &c, &dc[k - 1], &dc[k - 1], &dc[2], &dc[1], &dc[k - 2], &dc[1]);
        dc.push(v);
    }
    // Δ(c^k·w), seeds Δ(w) and Δ(c·w)
    let mut dcw: Vec<Element<BigInt>> = alloc::vec![data.delta_cw(0), data.delta_cw(1)];
    for k in 2..=n {
        let v = seven_term(&c, &cp(k - 1), &w, &dc[k], &dcw[k - 1], &dcw[1], &dc[1], &dc[k - 1], &dcw[0]);
        dcw.push(v);
    }

    let mut comparison = Report::new("derived-vs-closed-form", window.describe());
    comparison.record(alloc::vec![alloc::format!("c^{n}·w = 0")], dcw[n].clone());

    let mut basis: Vec<Monomial> = p.window_basis(window)?.into_iter().map(|e| e.monomial).collect();
    basis.sort_by_key(|m| (m.exponent(V), m.clone()));
    let mut values: alloc::collections::BTreeMap<Monomial, Element<BigInt>> = alloc::collections::BTreeMap::new();
    for m in &basis {
        let d = if m.exponent(V) == 0 {
            if m.exponent(W) == 0 {
                dc[m.exponent(C) as usize].clone()
            } else {
                dcw[m.exponent(C) as usize].clone()
            }
        } else {
            let mut x = m.clone();
            x.set_exponent(V, m.exponent(V) - 1);
            let dx = values.get(&x).cloned().ok_or_else(|| BvError::WindowTruncated(p.format_monomial(&x)))?;
            delta_v_multiple(&table, &loops, &p.monomial(&x), &dx)
        };
        values.insert(m.clone(), d);
    }
    for m in &basis {
        let res = &values[m] - &theorem_a_value(&p, n, m);
        comparison.record(alloc::vec![p.format_monomial(m)], res);
    }
    Ok(Derivation { operator: BvOperator::table(&p, values), mu: data.mu.clone(), comparison })
}

/// A new presentation identified with an instance through a map on
/// generators, with Δ carried across.
#[derive(Clone, Debug)]
pub struct Substitution<D: Coefficient> {
    pub presentation: Arc<Presentation<D>>,
    pub map: AlgebraMap<D>,
    pub delta: BvOperator<D>,
}

/// `images` send the new generators into the instance. The map must kill
/// every relation and be bijective on the window's graded pieces; Δ is then
/// transported as φ⁻¹∘Δ∘φ.
pub fn substitute<D: Coefficient>(
    delta: &BvOperator<D>,
    presentation: &Arc<Presentation<D>>,
    images: &[(&str, Element<D>)],
    window: &DegreeWindow,
) -> Result<Substitution<D>, CpnError> {
    let err = |e: crate::hom::MapError<D>| CpnError::Map(e.to_string());
    let map = AlgebraMap::new(presentation, delta.algebra(), images).map_err(err)?;
    map.check_relations().map_err(err)?;
    map.check_isomorphism(window).map_err(err)?;
    let phi = map.clone();
    let old = delta.clone();
    let op = BvOperator::closed(presentation, "transported", move |m| {
        let img = phi.apply(&phi.source().monomial(m));
        let d = old.apply(&img)?;
        phi.preimage(&d).map_err(|e| BvError::Rule(e.to_string()))
    });
    Ok(Substitution { presentation: presentation.clone(), map, delta: op })
}

/// The S² presentation ℤ[a, v] ⊗ Λ[b] / ⟨a², ab, 2av⟩.
pub fn s2_presentation() -> Result<Arc<Presentation<BigInt>>, CpnError> {
    Ok(Presentation::builder(CoeffRing::Integers)
        .generator("a", -2)
        .generator("b", -1)
        .generator("v", 2)
        .order(&["a", "b", "v"])
        .rewrite_zero("a^2")
        .rewrite_zero("a·b")
        .torsion(2, "a·v")
        .build()?)
}

/// The S² instance through a ↦ c, b ↦ w, v ↦ v + c·v².
pub fn s2_instance(window: &DegreeWindow) -> Result<Substitution<BigInt>, CpnError> {
    let inst = build_theorem_a(1, CoeffRing::Integers)?;
    let p = &inst.presentation;
    let images = [("a", p.gen("c")), ("b", p.gen("w")), ("v", p.gen("v") + &p.gen("c") * &p.gen("v").pow(2))];
    substitute(&inst.delta, &s2_presentation()?, &images, window)
}

/// ℚ[x, t] ⊗ Λ[u] / ⟨x^{n+1}, xⁿt, uxⁿ⟩.
pub fn rational_presentation(n: usize) -> Result<Arc<Presentation<num_rational::BigRational>>, CpnError> {
    if n < 1 {
        return Err(CpnError::BadRank);
    }
    Ok(Presentation::builder(CoeffRing::Rationals)
        .generator("x", -2)
        .generator("u", -1)
        .generator("t", 2 * n as i64)
        .order(&["x", "u", "t"])
        .rewrite_zero(&alloc::format!("x^{}", n + 1))
        .rewrite_zero(&alloc::format!("x^{}·t", n))
        .rewrite_zero(&alloc::format!("x^{}·u", n))
        .build()?)
}

/// The rational instance through x ↦ c, u ↦ −w, t ↦ v.
pub fn rational_instance(
    n: usize,
    window: &DegreeWindow,
) -> Result<Substitution<num_rational::BigRational>, CpnError> {
    let inst = build_theorem_a_over::<num_rational::BigRational>(n, CoeffRing::Rationals)?;
    let p = &inst.presentation;
    let images = [("x", p.gen("c")), ("u", -p.gen("w")), ("t", p.gen("v"))];
    substitute(&inst.delta, &rational_presentation(n)?, &images, window)
}

/// c ↦ ε₁c, w ↦ ε₂w, v ↦ ε₃v + α·cⁿv², as a self-substitution.
pub fn admissible_change(
    inst: &StringBvInstance<BigInt>,
    signs: [i64; 3],
    alpha: i64,
    window: &DegreeWindow,
) -> Result<Substitution<BigInt>, CpnError> {
    let p = &inst.presentation;
    let n = inst.n;
    let extra = p.term(&Monomial::from_exponents(&[n as u32, 0, 2]), BigInt::from(alpha));
    let images = [
        ("c", p.gen("c").scale_i64(signs[0])),
        ("w", p.gen("w").scale_i64(signs[1])),
        ("v", p.gen("v").scale_i64(signs[2]) + extra),
    ];
    substitute(&inst.delta, p, &images, window)
}

/// Additive order of an integral element; `None` when it has infinite order.
pub fn additive_order(x: &Element<BigInt>) -> Option<u64> {
    let p = x.algebra();
    let mut order: u64 = 1;
    for (m, c) in x.terms() {
        let k = p.annihilator(m);
        if k == 0 {
            return None;
        }
        let g = c.gcd(&BigInt::from(k)).to_u64().unwrap_or(1);
        order = order.lcm(&(k / g));
    }
    Some(order)
}

/// Brackets of all ordered generator pairs.
pub fn generator_brackets<D: Coefficient>(
    inst: &StringBvInstance<D>,
) -> Result<Vec<(String, String, Element<D>)>, CpnError> {
    let p = &inst.presentation;
    let mut out = Vec::new();
    for a in p.generators() {
        for b in p.generators() {
            let v = crate::bv::bracket(&inst.delta, &p.gen(&a.name), &p.gen(&b.name))?;
            out.push((a.name.clone(), b.name.clone(), v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> StringBvInstance<BigInt> {
        build_theorem_a(n, CoeffRing::Integers).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let i2 = z(2);
        let p = &i2.presentation;
        assert_eq!(i2.delta.apply(&p.parse_element("w·v").unwrap()).unwrap(), p.parse_element("5·v").unwrap());
        assert_eq!(i2.delta.apply(&p.parse_element("c·w").unwrap()).unwrap(), p.gen("c"));
        let i3 = z(3);
        let q = &i3.presentation;
        assert_eq!(i3.delta.apply(&q.gen("w")).unwrap(), q.parse_element("3 + 2·c^3·v").unwrap());
        let i1 = z(1);
        let r = &i1.presentation;
        assert_eq!(i1.delta.apply(&r.gen("w")).unwrap(), r.parse_element("1 + c·v").unwrap());
        assert!(i1.delta.apply(&r.parse_element("c·v^3").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn mu_vectors() {
        assert_eq!(solve_mu(4).unwrap().values, [4, 3, 2, 1, 0]);
        assert_eq!(solve_mu(1).unwrap().values, [1, 0]);
        assert_eq!(solve_mu(7).unwrap().values[0], 7);
        assert_eq!(solve_mu(0), Err(CpnError::BadRank));
    }

    #[test]
    fn derivation_matches_closed_form() {
        for n in 1..=3 {
            let d = derive_theorem_a(n, &theorem_b_reference(n).unwrap(), &DegreeWindow::new(3)).unwrap();
            assert!(d.comparison.passed(), "n={n}: {:?}", d.comparison.failures);
        }
        let d = derive_theorem_a(2, &theorem_b_reference(2).unwrap(), &DegreeWindow::new(3)).unwrap();
        let p = d.operator.algebra().clone();
        assert_eq!(d.operator.apply(&p.parse_element("w·v^2").unwrap()).unwrap(), p.parse_element("8·v^2").unwrap());
    }

    #[test]
    fn rational_relations() {
        let i = build_theorem_a_over::<num_rational::BigRational>(2, CoeffRing::Rationals).unwrap();
        assert!(i.presentation.parse_element("c^2·v").unwrap().is_zero());
        let m = change_coefficients::<BigInt>(&z(3), CoeffRing::Modular(2)).unwrap();
        assert_eq!(m.delta.apply(&m.presentation.gen("w")).unwrap(), m.presentation.one());
    }
}
