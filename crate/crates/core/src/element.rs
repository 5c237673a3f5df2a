use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::presentation::Presentation;
use crate::scalar::Coefficient;

/// A normal-form linear combination of monomials of one presentation.
#[derive(Clone)]
pub struct Element<C: Coefficient> {
    alg: Arc<Presentation<C>>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Element<C> {
    pub(crate) fn from_normalized(alg: Arc<Presentation<C>>, terms: BTreeMap<Monomial, C>) -> Self {
        Element { alg, terms }
    }

    pub fn algebra(&self) -> &Arc<Presentation<C>> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn same_algebra(&self, other: &Element<C>) -> bool {
        self.alg.id() == other.alg.id()
    }

    fn check(&self, other: &Element<C>) -> Result<(), AlgebraError> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(AlgebraError::MixedAlgebras)
        }
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| self.alg.degree_of(m));
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<i64, Element<C>> {
        let mut parts: BTreeMap<i64, BTreeMap<Monomial, C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts.entry(self.alg.degree_of(m)).or_default().insert(m.clone(), c.clone());
        }
        parts.into_iter().map(|(d, t)| (d, Element::from_normalized(self.alg.clone(), t))).collect()
    }

    pub fn try_add(&self, other: &Element<C>) -> Result<Element<C>, AlgebraError> {
        self.check(other)?;
        let mut acc = self.terms.clone();
        for (m, c) in &other.terms {
            match acc.get_mut(m) {
                Some(e) => *e = e.clone() + c.clone(),
                None => {
                    acc.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Element { terms: self.alg.finish(acc), alg: self.alg.clone() })
    }

    pub fn try_sub(&self, other: &Element<C>) -> Result<Element<C>, AlgebraError> {
        self.try_add(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Element<C> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Element { terms: self.alg.finish(terms), alg: self.alg.clone() }
    }

    pub fn scale(&self, k: &C) -> Element<C> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())).collect();
        Element { terms: self.alg.finish(terms), alg: self.alg.clone() }
    }

    pub fn scale_i64(&self, k: i64) -> Element<C> {
        self.scale(&C::from_i64(k))
    }

    /// Koszul-signed product in normal form.
    pub fn try_mul(&self, other: &Element<C>) -> Result<Element<C>, AlgebraError> {
        self.check(other)?;
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = self.alg.mul_monomials(m1, m2) {
                    let c = c1.clone() * c2.clone();
                    self.alg.reduce_into(&mut acc, m, if neg { -c } else { c });
                }
            }
        }
        Ok(Element { terms: self.alg.finish(acc), alg: self.alg.clone() })
    }

    /// Product with a single monomial of the same presentation.
    pub fn mul_monomial(&self, m: &Monomial) -> Element<C> {
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            if let Some((neg, p)) = self.alg.mul_monomials(m1, m) {
                self.alg.reduce_into(&mut acc, p, if neg { -c1.clone() } else { c1.clone() });
            }
        }
        Element { terms: self.alg.finish(acc), alg: self.alg.clone() }
    }

    /// Monomial on the left.
    pub fn monomial_mul(&self, m: &Monomial) -> Element<C> {
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            if let Some((neg, p)) = self.alg.mul_monomials(m, m1) {
                self.alg.reduce_into(&mut acc, p, if neg { -c1.clone() } else { c1.clone() });
            }
        }
        Element { terms: self.alg.finish(acc), alg: self.alg.clone() }
    }

    pub fn pow(&self, k: u32) -> Element<C> {
        let mut out = Element::from_normalized(self.alg.clone(), self.alg.normalize_terms(core::iter::once((Monomial::one(self.alg.rank()), C::one()))));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Applies a linear map given on monomials.
    pub fn map_linear<F>(&self, mut f: F) -> Element<C>
    where
        F: FnMut(&Monomial) -> Element<C>,
    {
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            let img = f(m);
            for (m2, c2) in img.terms {
                let v = c2 * c.clone();
                match acc.get_mut(&m2) {
                    Some(e) => {
                        let s: C = core::mem::replace(e, C::zero()) + v;
                        *e = s;
                    }
                    None => {
                        acc.insert(m2, v);
                    }
                }
            }
        }
        Element { terms: self.alg.finish(acc), alg: self.alg.clone() }
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Generic accumulator used by sweeps: `self + k·other` without rechecking.
    pub fn add_scaled(&self, other: &Element<C>, k: &C) -> Element<C> {
        self.try_add(&other.scale(k)).expect("mixed algebras")
    }
}

impl<C: Coefficient> PartialEq for Element<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl<C: Coefficient> Eq for Element<C> {}

impl<C: Coefficient> fmt::Debug for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl<C: Coefficient> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let text = alloc::format!("{c}");
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = self.alg.format_monomial(m);
            if m.is_one() {
                f.write_str(mag)?;
            } else if mag == "1" {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}·{mono}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl<'a, C: Coefficient> $tr<&'a Element<C>> for &'a Element<C> {
            type Output = Element<C>;
            /// Panics when the operands belong to different algebras.
            fn $method(self, rhs: &'a Element<C>) -> Element<C> {
                self.$call(rhs).expect("operands belong to different algebras")
            }
        }
        impl<C: Coefficient> $tr<Element<C>> for Element<C> {
            type Output = Element<C>;
            fn $method(self, rhs: Element<C>) -> Element<C> {
                (&self).$call(&rhs).expect("operands belong to different algebras")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coefficient> Neg for &Element<C> {
    type Output = Element<C>;
    fn neg(self) -> Element<C> {
        self.neg_ref()
    }
}

impl<C: Coefficient> Neg for Element<C> {
    type Output = Element<C>;
    fn neg(self) -> Element<C> {
        self.neg_ref()
    }
}
