//! Finitely presented graded-commutative algebras.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;

use crate::element::Element;
use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::scalar::{gcd_u64, CoeffRing, Coefficient};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: &str, degree: i64) -> Self {
        Generator { name: name.to_string(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// `lhs → Σ rhs`; every rhs monomial is strictly smaller than `lhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule<C> {
    pub lhs: Monomial,
    pub rhs: Vec<(Monomial, C)>,
}

/// `modulus · monomial = 0`, and the same for every multiple of `monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionRule {
    pub modulus: u64,
    pub monomial: Monomial,
}

#[derive(Clone, Debug)]
pub struct Presentation<C> {
    generators: Vec<Generator>,
    odd: Vec<bool>,
    rewrites: Vec<RewriteRule<C>>,
    torsion: Vec<TorsionRule>,
    ring: CoeffRing,
    id: u64,
}

/// Collects generators and relations by name; [`build`](Self::build)
/// validates and fixes the generator order.
#[derive(Clone, Debug)]
pub struct PresentationBuilder<C> {
    ring: CoeffRing,
    generators: Vec<Generator>,
    order: Option<Vec<String>>,
    rewrites: Vec<(String, Vec<(String, C)>)>,
    torsion: Vec<(u64, String)>,
}

impl<C: Coefficient> PresentationBuilder<C> {
    pub fn new(ring: CoeffRing) -> Self {
        PresentationBuilder { ring, generators: Vec::new(), order: None, rewrites: Vec::new(), torsion: Vec::new() }
    }

    pub fn generator(mut self, name: &str, degree: i64) -> Self {
        self.generators.push(Generator::new(name, degree));
        self
    }

    pub fn order(mut self, names: &[&str]) -> Self {
        self.order = Some(names.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn order_owned(mut self, names: Vec<String>) -> Self {
        self.order = Some(names);
        self
    }

    pub fn rewrite(mut self, lhs: &str, rhs: Vec<(String, C)>) -> Self {
        self.rewrites.push((lhs.to_string(), rhs));
        self
    }

    pub fn rewrite_zero(self, lhs: &str) -> Self {
        self.rewrite(lhs, Vec::new())
    }

    pub fn torsion(mut self, modulus: u64, monomial: &str) -> Self {
        self.torsion.push((modulus, monomial.to_string()));
        self
    }

    pub fn build(self) -> Result<Arc<Presentation<C>>, AlgebraError> {
        if self.ring.kind() != C::KIND {
            return Err(AlgebraError::RingMismatch(self.ring.label()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
            if g.name.is_empty() || !g.name.chars().all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '\'') {
                return Err(AlgebraError::BadMonomial(g.name.clone()));
            }
        }
        let generators: Vec<Generator> = match &self.order {
            Some(order) => {
                if order.len() != self.generators.len() {
                    return Err(AlgebraError::BadOrder);
                }
                let mut out = Vec::new();
                for name in order {
                    let g = self.generators.iter().find(|g| &g.name == name).ok_or(AlgebraError::BadOrder)?;
                    if out.iter().any(|h: &Generator| &h.name == name) {
                        return Err(AlgebraError::BadOrder);
                    }
                    out.push(g.clone());
                }
                out
            }
            None => {
                let mut out: Vec<Generator> = self.generators.iter().filter(|g| g.is_odd()).cloned().collect();
                out.extend(self.generators.iter().filter(|g| !g.is_odd()).cloned());
                out
            }
        };
        let odd = generators.iter().map(Generator::is_odd).collect();
        let mut p = Presentation { generators, odd, rewrites: Vec::new(), torsion: Vec::new(), ring: self.ring, id: 0 };

        for (lhs, rhs) in &self.rewrites {
            let l = p.parse_monomial(lhs)?;
            let deg = p.degree_of(&l);
            let mut terms = Vec::new();
            for (m, c) in rhs {
                let r = p.parse_monomial(m)?;
                if c.is_zero() {
                    continue;
                }
                if p.degree_of(&r) != deg {
                    return Err(AlgebraError::NotHomogeneous(lhs.clone()));
                }
                if r >= l {
                    return Err(AlgebraError::NotDecreasing(lhs.clone()));
                }
                terms.push((r, c.clone()));
            }
            p.rewrites.push(RewriteRule { lhs: l, rhs: terms });
        }
        for (modulus, m) in &self.torsion {
            if *modulus == 0 {
                return Err(AlgebraError::ZeroModulus);
            }
            let mono = p.parse_monomial(m)?;
            p.torsion.push(TorsionRule { modulus: *modulus, monomial: mono });
        }
        p.id = p.fingerprint();
        Ok(Arc::new(p))
    }
}

impl<C: Coefficient> Presentation<C> {
    pub fn builder(ring: CoeffRing) -> PresentationBuilder<C> {
        PresentationBuilder::new(ring)
    }

    fn fingerprint(&self) -> u64 {
        let mut h = FnvHasher::default();
        for g in &self.generators {
            h.write(g.name.as_bytes());
            h.write_u8(0);
            h.write_i64(g.degree);
        }
        for r in &self.rewrites {
            h.write_u8(1);
            for e in r.lhs.exponents() {
                h.write_u32(*e);
            }
            for (m, c) in &r.rhs {
                for e in m.exponents() {
                    h.write_u32(*e);
                }
                h.write(c.to_string().as_bytes());
            }
        }
        for t in &self.torsion {
            h.write_u8(2);
            h.write_u64(t.modulus);
            for e in t.monomial.exponents() {
                h.write_u32(*e);
            }
        }
        h.write(self.ring.label().as_bytes());
        h.finish()
    }

    /// Identifies the algebra: equal for presentations with identical data.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn rewrites(&self) -> &[RewriteRule<C>] {
        &self.rewrites
    }

    pub fn torsion_rules(&self) -> &[TorsionRule] {
        &self.torsion
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub fn degree_of(&self, m: &Monomial) -> i64 {
        m.exponents().iter().zip(self.generators.iter()).map(|(e, g)| *e as i64 * g.degree).sum()
    }

    pub fn is_odd_monomial(&self, m: &Monomial) -> bool {
        self.degree_of(m).rem_euclid(2) == 1
    }

    /// Product of two valid monomials with its Koszul sign, or `None` when an
    /// odd generator would appear twice. `true` means the sign is negative.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut swaps = 0u32;
        let mut odd_in_a_after = 0u32;
        // walk generators from last to first, counting odd factors of `a`
        // that the odd factors of `b` must pass
        for i in (0..self.generators.len()).rev() {
            if !self.odd[i] {
                continue;
            }
            let ea = a.exponent(i);
            let eb = b.exponent(i);
            if ea + eb > 1 {
                return None;
            }
            if eb == 1 {
                swaps += odd_in_a_after;
            }
            if ea == 1 {
                odd_in_a_after += 1;
            }
        }
        Some((swaps % 2 == 1, a.raw_product(b)))
    }

    /// Torsion annihilator of a monomial: 0 when free, 1 when the monomial
    /// itself vanishes.
    pub fn annihilator(&self, m: &Monomial) -> u64 {
        let mut g = self.ring.modulus();
        for t in &self.torsion {
            if t.monomial.divides(m) {
                g = gcd_u64(g, t.modulus);
            }
        }
        if g > 0 && self.ring == CoeffRing::Rationals {
            1
        } else {
            g
        }
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.rewrites.iter().any(|r| r.lhs.divides(m))
    }

    /// A monomial that survives as a basis element.
    pub fn is_basis_monomial(&self, m: &Monomial) -> bool {
        !self.is_reducible(m) && self.annihilator(m) != 1
    }

    pub(crate) fn reduce_into(&self, acc: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        for rule in &self.rewrites {
            if rule.lhs.divides(&m) {
                let q = rule.lhs.quotient_of(&m);
                let neg = match self.mul_monomials(&rule.lhs, &q) {
                    Some((neg, _)) => neg,
                    None => return,
                };
                for (r, rc) in &rule.rhs {
                    if let Some((neg2, prod)) = self.mul_monomials(r, &q) {
                        let mut coeff = c.clone() * rc.clone();
                        if neg != neg2 {
                            coeff = -coeff;
                        }
                        self.reduce_into(acc, prod, coeff);
                    }
                }
                return;
            }
        }
        match acc.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                *existing = sum;
            }
            None => {
                acc.insert(m, c);
            }
        }
    }

    pub(crate) fn finish(&self, acc: BTreeMap<Monomial, C>) -> BTreeMap<Monomial, C> {
        let needs_torsion = !self.torsion.is_empty() || self.ring.modulus() != 0;
        acc.into_iter()
            .filter_map(|(m, c)| {
                let c = if needs_torsion {
                    match self.annihilator(&m) {
                        0 => c,
                        1 => return None,
                        g => c.reduce_mod(g),
                    }
                } else {
                    c
                };
                if c.is_zero() {
                    None
                } else {
                    Some((m, c))
                }
            })
            .collect()
    }

    /// Normal form of a raw linear combination. Raw monomials may contain
    /// rule left-hand sides but never an odd generator twice.
    pub fn normalize_terms<I: IntoIterator<Item = (Monomial, C)>>(&self, terms: I) -> BTreeMap<Monomial, C> {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            self.reduce_into(&mut acc, m, c);
        }
        self.finish(acc)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return String::from("1");
        }
        let mut out = String::new();
        for (i, e) in m.exponents().iter().enumerate() {
            if *e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('·');
            }
            out.push_str(&self.generators[i].name);
            if *e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        out
    }

    /// Parses `name^exp·name…` (also `*` as separator, `1` for the unit).
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial, AlgebraError> {
        let text = s.trim();
        let mut m = Monomial::one(self.generators.len());
        if text == "1" || text.is_empty() {
            return Ok(m);
        }
        for factor in text.split(['·', '*']) {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(AlgebraError::BadMonomial(s.to_string()));
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e.trim().parse().map_err(|_| AlgebraError::BadMonomial(s.to_string()))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let i = self.generator_index(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
            let e = m.exponent(i) + exp;
            if self.odd[i] && e > 1 {
                return Err(AlgebraError::OddSquare(s.to_string()));
            }
            m.set_exponent(i, e);
        }
        Ok(m)
    }

    pub fn gen_monomial(&self, name: &str) -> Result<Monomial, AlgebraError> {
        let i = self.generator_index(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(Monomial::generator(self.generators.len(), i))
    }
}

/// Constructors that need a shared handle on the presentation.
pub trait PresentationExt<C: Coefficient> {
    fn zero(&self) -> Element<C>;
    fn one(&self) -> Element<C>;
    fn gen(&self, name: &str) -> Element<C>;
    fn monomial(&self, m: &Monomial) -> Element<C>;
    fn term(&self, m: &Monomial, c: C) -> Element<C>;
    fn element<I: IntoIterator<Item = (Monomial, C)>>(&self, terms: I) -> Element<C>;
    fn parse_element(&self, s: &str) -> Result<Element<C>, AlgebraError>;
    fn scalar(&self, c: C) -> Element<C>;
}

impl<C: Coefficient> PresentationExt<C> for Arc<Presentation<C>> {
    fn zero(&self) -> Element<C> {
        Element::from_normalized(self.clone(), BTreeMap::new())
    }

    fn one(&self) -> Element<C> {
        self.scalar(C::one())
    }

    fn scalar(&self, c: C) -> Element<C> {
        self.term(&Monomial::one(self.rank()), c)
    }

    /// Panics on unknown names; use [`Presentation::gen_monomial`] to check.
    fn gen(&self, name: &str) -> Element<C> {
        let m = self.gen_monomial(name).expect("unknown generator");
        self.monomial(&m)
    }

    fn monomial(&self, m: &Monomial) -> Element<C> {
        self.term(m, C::one())
    }

    fn term(&self, m: &Monomial, c: C) -> Element<C> {
        self.element(core::iter::once((m.clone(), c)))
    }

    fn element<I: IntoIterator<Item = (Monomial, C)>>(&self, terms: I) -> Element<C> {
        let t = self.normalize_terms(terms);
        Element::from_normalized(self.clone(), t)
    }

    /// Parses sums such as `3·c^2·v - w + 1/2·v` (rationals only over ℚ).
    fn parse_element(&self, s: &str) -> Result<Element<C>, AlgebraError> {
        let bad = || AlgebraError::BadElement(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(bad());
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in text.chars() {
            if (ch == '+' || ch == '-') && !current.trim().is_empty() {
                pieces.push((negative, core::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.trim().is_empty() {
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                current.push(ch);
            }
        }
        if current.trim().is_empty() {
            return Err(bad());
        }
        pieces.push((negative, current));

        let mut terms = Vec::new();
        for (neg, piece) in pieces {
            let piece = piece.trim();
            let (coeff, mono) = match piece.split_once(['·', '*']) {
                Some((head, rest)) if self.generator_index(head.trim()).is_none() && C::parse_str(head).is_some() => {
                    (C::parse_str(head).unwrap(), rest.trim())
                }
                _ => match C::parse_str(piece) {
                    Some(c) if self.generator_index(piece).is_none() => (c, "1"),
                    _ => (C::one(), piece),
                },
            };
            let m = self.parse_monomial(mono).map_err(|_| bad())?;
            terms.push((m, if neg { -coeff } else { coeff }));
        }
        Ok(self.element(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn default_order_puts_odd_first() {
        let p: Arc<Presentation<BigInt>> = Presentation::builder(CoeffRing::Integers)
            .generator("c", -2)
            .generator("w", -1)
            .build()
            .unwrap();
        assert_eq!(p.generators()[0].name, "w");
    }

    #[test]
    fn rejects_bad_rules() {
        let r: Result<Arc<Presentation<BigInt>>, _> = Presentation::builder(CoeffRing::Integers)
            .generator("x", 2)
            .generator("y", 4)
            .rewrite("x^2", alloc::vec![(String::from("x"), BigInt::from(1))])
            .build();
        assert_eq!(r.unwrap_err(), AlgebraError::NotHomogeneous(String::from("x^2")));
        let r: Result<Arc<Presentation<BigInt>>, _> = Presentation::builder(CoeffRing::Integers)
            .generator("x", 2)
            .generator("y", 4)
            .order(&["x", "y"])
            .rewrite("y", alloc::vec![(String::from("x^2"), BigInt::from(1))])
            .build();
        assert_eq!(r.unwrap_err(), AlgebraError::NotDecreasing(String::from("y")));
        let r: Result<Arc<Presentation<BigInt>>, _> =
            Presentation::builder(CoeffRing::Rationals).generator("x", 2).build();
        assert!(matches!(r, Err(AlgebraError::RingMismatch(_))));
    }

    #[test]
    fn parse_and_format_round_trip() {
        let p = cpn(2);
        let m = p.parse_monomial("v*c^2").unwrap();
        assert_eq!(p.format_monomial(&m), "c^2·v");
        let x = p.parse_element("5·c^2·v - w + 2").unwrap();
        assert_eq!(alloc::format!("{x}"), "2 - w + 2·c^2·v");
        assert_eq!(p.parse_element(&alloc::format!("{x}")).unwrap(), x);
        assert!(p.parse_monomial("w^2").is_err());
        assert!(p.parse_element("q").is_err());
    }

    #[test]
    fn torsion_reduction_and_annihilators() {
        let p = cpn(2);
        assert_eq!(p.annihilator(&p.parse_monomial("c^2·v^3").unwrap()), 3);
        assert_eq!(p.annihilator(&p.parse_monomial("c·v").unwrap()), 0);
        assert_eq!(p.parse_element("5·c^2·v").unwrap(), p.parse_element("2·c^2·v").unwrap());
    }
}
