//! Coefficient rings.
//!
//! Two scalar types back every computation: [`BigInt`] for ℤ and ℤ/m, and
//! [`BigRational`] for ℚ. The residue ring ℤ/m is not a separate type; a
//! presentation over ℤ/m carries the modulus and reduces every coefficient
//! during normalization.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{Debug, Display};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;

/// The coefficient ring of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffRing {
    Integers,
    Rationals,
    Modular(u64),
}

impl CoeffRing {
    pub fn kind(self) -> ScalarKind {
        match self {
            CoeffRing::Rationals => ScalarKind::Rational,
            _ => ScalarKind::Integral,
        }
    }

    /// Global modulus, 0 when there is none.
    pub fn modulus(self) -> u64 {
        match self {
            CoeffRing::Modular(m) => m,
            _ => 0,
        }
    }

    /// Parses `Z`, `Q` or `Zm:<m>`.
    pub fn parse(s: &str) -> Option<CoeffRing> {
        match s {
            "Z" => Some(CoeffRing::Integers),
            "Q" => Some(CoeffRing::Rationals),
            _ => {
                let m: u64 = s.strip_prefix("Zm:")?.parse().ok()?;
                if m >= 2 {
                    Some(CoeffRing::Modular(m))
                } else {
                    None
                }
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            CoeffRing::Integers => String::from("Z"),
            CoeffRing::Rationals => String::from("Q"),
            CoeffRing::Modular(m) => alloc::format!("Zm:{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    Integral,
    Rational,
}

/// Exact scalars usable as coefficients.
pub trait Coefficient:
    Clone
    + Eq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    const KIND: ScalarKind;

    fn from_bigint(v: BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    /// Canonical representative modulo `m` (in `[0, m)` for integers).
    /// Over ℚ every torsion class is zero, so the result is zero.
    fn reduce_mod(&self, m: u64) -> Self;

    /// The value as an integer, if it is one.
    fn to_bigint(&self) -> Option<BigInt>;

    fn parse_str(s: &str) -> Option<Self>;

    /// Solves `a·x = b` where row `i` holds modulo `moduli[i]` (0 means exact).
    fn solve_system(a: &[Vec<Self>], b: &[Self], moduli: &[u64]) -> Option<Vec<Self>>;
}

impl Coefficient for BigInt {
    const KIND: ScalarKind = ScalarKind::Integral;

    fn from_bigint(v: BigInt) -> Self {
        v
    }

    fn reduce_mod(&self, m: u64) -> Self {
        self.mod_floor(&BigInt::from(m))
    }

    fn to_bigint(&self) -> Option<BigInt> {
        Some(self.clone())
    }

    fn parse_str(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn solve_system(a: &[Vec<Self>], b: &[Self], moduli: &[u64]) -> Option<Vec<Self>> {
        linalg::solve_integer(a, b, moduli)
    }
}

impl Coefficient for BigRational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_bigint(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }

    fn reduce_mod(&self, _m: u64) -> Self {
        BigRational::zero()
    }

    fn to_bigint(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.to_integer())
        } else {
            None
        }
    }

    fn parse_str(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn solve_system(a: &[Vec<Self>], b: &[Self], moduli: &[u64]) -> Option<Vec<Self>> {
        linalg::solve_rational(a, b, moduli)
    }
}

/// Binomial coefficient C(n, k), zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    num_integer::binomial(n, k)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Signed residue in `(-m/2, m/2]`, handy for printing small signs.
pub fn symmetric_residue(v: &BigInt, m: u64) -> BigInt {
    let m = BigInt::from(m);
    let r = v.mod_floor(&m);
    if (&r * 2i32) > m {
        r - m
    } else {
        r
    }
}

pub fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

pub fn is_unit(v: &BigInt) -> bool {
    v.abs().is_one()
}
