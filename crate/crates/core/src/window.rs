//! Degree windows and enumeration of graded pieces.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::presentation::Presentation;
use crate::scalar::Coefficient;

/// Finite truncation for "for all" checks: exponent caps on generators of
/// non-negative degree, and optionally a bound on |degree|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub default_cap: u32,
    pub caps: BTreeMap<String, u32>,
    pub max_abs_degree: Option<i64>,
}

impl DegreeWindow {
    pub fn new(default_cap: u32) -> Self {
        DegreeWindow { default_cap, caps: BTreeMap::new(), max_abs_degree: None }
    }

    pub fn with_cap(mut self, name: &str, cap: u32) -> Self {
        self.caps.insert(name.to_string(), cap);
        self
    }

    pub fn with_max_abs_degree(mut self, d: i64) -> Self {
        self.max_abs_degree = Some(d);
        self
    }

    pub fn cap(&self, name: &str) -> u32 {
        self.caps.get(name).copied().unwrap_or(self.default_cap)
    }

    pub fn describe(&self) -> String {
        let mut s = alloc::format!("cap={}", self.default_cap);
        for (k, v) in &self.caps {
            s.push_str(&alloc::format!(",{k}<={v}"));
        }
        if let Some(d) = self.max_abs_degree {
            s.push_str(&alloc::format!(",|deg|<={d}"));
        }
        s
    }
}

/// A basis monomial with its torsion annihilator (0 = free).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisEntry {
    pub monomial: Monomial,
    pub annihilator: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: i64,
    pub entries: Vec<BasisEntry>,
    /// Set when the window may hide further basis monomials of this degree.
    pub truncated: bool,
}

impl<C: Coefficient> Presentation<C> {
    /// Smallest k with `g^k → 0` among the rewrite rules.
    pub fn nilpotency(&self, i: usize) -> Option<u32> {
        if self.is_odd(i) {
            return Some(2);
        }
        self.rewrites()
            .iter()
            .filter(|r| r.rhs.is_empty() && r.lhs.support().all(|j| j == i) && !r.lhs.is_one())
            .map(|r| r.lhs.exponent(i))
            .min()
    }

    fn window_bounds(&self, window: &DegreeWindow) -> Result<Vec<u32>, AlgebraError> {
        let gens = self.generators();
        let mut bounds: Vec<Option<u32>> = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            let nil = self.nilpotency(i).map(|k| k - 1);
            let b = if g.degree >= 0 {
                let cap = window.cap(&g.name);
                Some(nil.map_or(cap, |k| k.min(cap)))
            } else {
                nil
            };
            bounds.push(b);
        }
        // negative generators without nilpotency need a degree bound
        let pos: i64 = gens
            .iter()
            .zip(bounds.iter())
            .filter(|(g, _)| g.degree > 0)
            .map(|(g, b)| g.degree * b.unwrap_or(0) as i64)
            .sum();
        let mut out = Vec::with_capacity(gens.len());
        for (g, b) in gens.iter().zip(bounds) {
            match b {
                Some(b) => out.push(b),
                None => match window.max_abs_degree {
                    Some(d) => out.push(((d + pos) / -g.degree) as u32),
                    None => return Err(AlgebraError::Unbounded(g.name.clone())),
                },
            }
        }
        Ok(out)
    }

    /// All basis monomials of the window, sorted by (degree, monomial order).
    pub fn window_basis(&self, window: &DegreeWindow) -> Result<Vec<BasisEntry>, AlgebraError> {
        let bounds = self.window_bounds(window)?;
        let mut out = Vec::new();
        let mut cur = Monomial::one(self.rank());
        self.enumerate(&bounds, 0, &mut cur, &mut |m| {
            if let Some(d) = window.max_abs_degree {
                if self.degree_of(m).abs() > d {
                    return;
                }
            }
            if self.is_basis_monomial(m) {
                out.push(BasisEntry { monomial: m.clone(), annihilator: self.annihilator(m) });
            }
        });
        out.sort_by(|a, b| {
            self.degree_of(&a.monomial).cmp(&self.degree_of(&b.monomial)).then_with(|| a.monomial.cmp(&b.monomial))
        });
        Ok(out)
    }

    /// Raw monomials (possibly reducible) with exponents up to the rule
    /// left-hand sides; used to audit relation compatibility.
    pub fn window_words(&self, window: &DegreeWindow) -> Result<Vec<Monomial>, AlgebraError> {
        let mut bounds = self.window_bounds(window)?;
        for (i, b) in bounds.iter_mut().enumerate() {
            if !self.is_odd(i) {
                if let Some(k) = self.nilpotency(i) {
                    if self.generators()[i].degree < 0 || k - 1 < window.cap(&self.generators()[i].name) {
                        *b = k;
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = Monomial::one(self.rank());
        self.enumerate(&bounds, 0, &mut cur, &mut |m| out.push(m.clone()));
        out.sort();
        Ok(out)
    }

    fn enumerate(&self, bounds: &[u32], i: usize, cur: &mut Monomial, f: &mut dyn FnMut(&Monomial)) {
        if i == bounds.len() {
            f(cur);
            return;
        }
        for e in 0..=bounds[i] {
            cur.set_exponent(i, e);
            self.enumerate(bounds, i + 1, cur, f);
        }
        cur.set_exponent(i, 0);
    }

    /// Basis of the degree-`d` piece. The `truncated` flag is raised when some
    /// capped generator has no a-priori exponent bound within its cap.
    pub fn basis_in_degree(&self, d: i64, window: &DegreeWindow) -> GradedPiece {
        let gens = self.generators();
        let nil: Vec<Option<u32>> = (0..gens.len()).map(|i| self.nilpotency(i).map(|k| k - 1)).collect();
        // total |degree| that the negative generators can absorb
        let neg_room: Option<i64> = gens
            .iter()
            .zip(nil.iter())
            .filter(|(g, _)| g.degree < 0)
            .try_fold(0i64, |acc, (g, b)| b.map(|b| acc + b as i64 * -g.degree));
        let mut truncated = false;
        let mut bounds = alloc::vec![0u32; gens.len()];
        for (i, g) in gens.iter().enumerate() {
            if g.degree >= 0 {
                let cap = window.cap(&g.name);
                let apriori = match nil[i] {
                    Some(k) => Some(k),
                    None if g.degree > 0 => neg_room.map(|r| {
                        let top = d + r;
                        if top < 0 {
                            0
                        } else {
                            (top / g.degree) as u32
                        }
                    }),
                    None => None,
                };
                bounds[i] = match apriori {
                    Some(a) if a <= cap => a,
                    _ => {
                        truncated = true;
                        cap
                    }
                };
            }
        }
        let pos_room: i64 = gens.iter().zip(bounds.iter()).filter(|(g, _)| g.degree > 0).map(|(g, b)| g.degree * *b as i64).sum();
        for (i, g) in gens.iter().enumerate() {
            if g.degree < 0 {
                let from_degree = if pos_room - d < 0 { 0 } else { ((pos_room - d) / -g.degree) as u32 };
                bounds[i] = match nil[i] {
                    Some(k) => k.min(from_degree),
                    None => from_degree,
                };
            }
        }
        let mut entries = Vec::new();
        let mut cur = Monomial::one(self.rank());
        self.enumerate(&bounds, 0, &mut cur, &mut |m| {
            if self.degree_of(m) == d && self.is_basis_monomial(m) {
                entries.push(BasisEntry { monomial: m.clone(), annihilator: self.annihilator(m) });
            }
        });
        entries.sort();
        GradedPiece { degree: d, entries, truncated }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CoeffRing;
    use alloc::sync::Arc;
    use num_bigint::BigInt;

    fn cpn(n: u32) -> Arc<Presentation<BigInt>> {
        Presentation::builder(CoeffRing::Integers)
            .generator("c", -2)
            .generator("w", -1)
            .generator("v", 2 * n as i64)
            .order(&["c", "w", "v"])
            .rewrite_zero(&alloc::format!("c^{}", n + 1))
            .rewrite_zero(&alloc::format!("c^{n}·w"))
            .torsion(n as u64 + 1, &alloc::format!("c^{n}·v"))
            .build()
            .unwrap()
    }

    #[test]
    fn window_basis_counts() {
        // (n+1)(q+1) w-free plus n(q+1) with w
        for n in 1..=5u32 {
            let p = cpn(n);
            let b = p.window_basis(&DegreeWindow::new(6)).unwrap();
            assert_eq!(b.len() as u32, (2 * n + 1) * 7);
        }
    }

    #[test]
    fn truncation_flag() {
        let p = cpn(2);
        assert!(!p.basis_in_degree(0, &DegreeWindow::new(6)).truncated);
        assert!(p.basis_in_degree(40, &DegreeWindow::new(6)).truncated);
    }
}
