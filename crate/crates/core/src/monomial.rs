use core::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector indexed by the generator order of a presentation.
///
/// Ordering is degree-lexicographic: total word length first, then the
/// exponent of the highest-precedence generator, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[u32; 4]>,
}

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, len) }
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial { exps: SmallVec::from_slice(exps) }
    }

    pub fn generator(len: usize, index: usize) -> Self {
        let mut m = Monomial::one(len);
        m.exps[index] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn set_exponent(&mut self, i: usize, e: u32) {
        self.exps[i] = e;
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| b - a).collect() }
    }

    /// Exponent-wise sum; the caller handles exterior squares and signs.
    pub fn raw_product(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect() }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect() }
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of generators present, in order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex_order() {
        let a = Monomial::from_exponents(&[2, 0]);
        let b = Monomial::from_exponents(&[0, 3]);
        let c = Monomial::from_exponents(&[1, 1]);
        assert!(a < b);
        assert!(c < a);
        assert!(Monomial::one(2) < c);
    }

    #[test]
    fn divisibility_and_quotient() {
        let a = Monomial::from_exponents(&[1, 2]);
        let b = Monomial::from_exponents(&[3, 2]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), Monomial::from_exponents(&[2, 0]));
        assert_eq!(a.lcm(&Monomial::from_exponents(&[0, 5])), Monomial::from_exponents(&[1, 5]));
    }
}
