//! BV operators: evaluation, axiom audits, brackets, and extension from
//! word-length-two seed data.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::element::Element;
use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::presentation::{Presentation, PresentationExt};
use crate::report::Report;
use crate::scalar::Coefficient;
use crate::window::DegreeWindow;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BvError {
    #[error("window-truncated: Δ is not tabulated on `{0}`")]
    WindowTruncated(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Rule(String),
}

pub type DeltaFn<C> = dyn Fn(&Monomial) -> Result<Element<C>, BvError> + Send + Sync;

#[derive(Clone)]
pub enum DeltaRule<C: Coefficient> {
    Zero,
    /// A named built-in formula evaluated on basis monomials.
    Closed { name: String, eval: Arc<DeltaFn<C>> },
    /// Finite table, linearly extended.
    Table(BTreeMap<Monomial, Element<C>>),
}

/// A degree +1 operator on a presented algebra.
#[derive(Clone)]
pub struct BvOperator<C: Coefficient> {
    algebra: Arc<Presentation<C>>,
    rule: DeltaRule<C>,
    overrides: BTreeMap<Monomial, Element<C>>,
}

impl<C: Coefficient> fmt::Debug for BvOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.rule {
            DeltaRule::Zero => String::from("zero"),
            DeltaRule::Closed { name, .. } => alloc::format!("closed:{name}"),
            DeltaRule::Table(t) => alloc::format!("table[{}]", t.len()),
        };
        write!(f, "BvOperator({kind}, overrides={})", self.overrides.len())
    }
}

impl<C: Coefficient> BvOperator<C> {
    pub fn zero(p: &Arc<Presentation<C>>) -> Self {
        BvOperator { algebra: p.clone(), rule: DeltaRule::Zero, overrides: BTreeMap::new() }
    }

    pub fn closed<F>(p: &Arc<Presentation<C>>, name: &str, f: F) -> Self
    where
        F: Fn(&Monomial) -> Result<Element<C>, BvError> + Send + Sync + 'static,
    {
        BvOperator {
            algebra: p.clone(),
            rule: DeltaRule::Closed { name: name.to_string(), eval: Arc::new(f) },
            overrides: BTreeMap::new(),
        }
    }

    pub fn table(p: &Arc<Presentation<C>>, values: BTreeMap<Monomial, Element<C>>) -> Self {
        BvOperator { algebra: p.clone(), rule: DeltaRule::Table(values), overrides: BTreeMap::new() }
    }

    /// Replaces Δ on one basis monomial; used to build faulty fixtures.
    pub fn with_override(mut self, m: Monomial, value: Element<C>) -> Self {
        self.overrides.insert(m, value);
        self
    }

    pub fn algebra(&self) -> &Arc<Presentation<C>> {
        &self.algebra
    }

    pub fn rule(&self) -> &DeltaRule<C> {
        &self.rule
    }

    pub fn closed_form_name(&self) -> Option<&str> {
        match &self.rule {
            DeltaRule::Closed { name, .. } if self.overrides.is_empty() => Some(name),
            _ => None,
        }
    }

    pub fn overrides(&self) -> &BTreeMap<Monomial, Element<C>> {
        &self.overrides
    }

    /// Δ on a basis (normal-form) monomial.
    pub fn delta_monomial(&self, m: &Monomial) -> Result<Element<C>, BvError> {
        if let Some(v) = self.overrides.get(m) {
            return Ok(v.clone());
        }
        match &self.rule {
            DeltaRule::Zero => Ok(self.algebra.zero()),
            DeltaRule::Closed { eval, .. } => eval(m),
            DeltaRule::Table(t) => {
                if m.is_one() {
                    return Ok(t.get(m).cloned().unwrap_or_else(|| self.algebra.zero()));
                }
                t.get(m).cloned().ok_or_else(|| BvError::WindowTruncated(self.algebra.format_monomial(m)))
            }
        }
    }

    /// Linear extension of Δ; the result is in normal form.
    pub fn apply(&self, x: &Element<C>) -> Result<Element<C>, BvError> {
        if x.algebra().id() != self.algebra.id() {
            return Err(AlgebraError::MixedAlgebras.into());
        }
        let mut out = self.algebra.zero();
        for (m, c) in x.terms() {
            out = out.add_scaled(&self.delta_monomial(m)?, c);
        }
        Ok(out)
    }

    /// Freezes the operator into a table on the window basis.
    pub fn tabulate(&self, window: &DegreeWindow) -> Result<BvOperator<C>, BvError> {
        let mut t = BTreeMap::new();
        for e in self.algebra.window_basis(window)? {
            t.insert(e.monomial.clone(), self.delta_monomial(&e.monomial)?);
        }
        Ok(BvOperator::table(&self.algebra, t))
    }

    /// Δ(1) = 0, degree +1 on every window monomial, and m·Δ(x) = 0 for
    /// m-torsion basis monomials x.
    pub fn validate(&self, window: &DegreeWindow) -> Result<Report<C>, BvError> {
        let p = &self.algebra;
        let mut r = Report::new("delta-well-defined", window.describe());
        let one = Monomial::one(p.rank());
        r.record(alloc::vec![String::from("1")], self.delta_monomial(&one)?);
        for e in p.window_basis(window)? {
            let d = self.delta_monomial(&e.monomial)?;
            let want = p.degree_of(&e.monomial) + 1;
            let off: Element<C> = p.element(
                d.terms().iter().filter(|(m, _)| p.degree_of(m) != want).map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>(),
            );
            r.record(alloc::vec![alloc::format!("degree {}", p.format_monomial(&e.monomial))], off);
            if e.annihilator > 1 {
                r.record(
                    alloc::vec![alloc::format!("torsion {}·{}", e.annihilator, p.format_monomial(&e.monomial))],
                    d.scale(&C::from_i64(e.annihilator as i64)),
                );
            }
        }
        Ok(r)
    }
}

pub fn apply_delta<C: Coefficient>(op: &BvOperator<C>, x: &Element<C>) -> Result<Element<C>, BvError> {
    op.apply(x)
}

fn sign(parity: i64) -> i64 {
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn degree_of<C: Coefficient>(x: &Element<C>) -> Result<i64, BvError> {
    if x.is_zero() {
        return Ok(0);
    }
    x.degree().ok_or(BvError::Algebra(AlgebraError::NonHomogeneous))
}

/// Memoized Δ and bracket evaluation for sweeps.
pub struct BvCache<'a, C: Coefficient> {
    op: &'a BvOperator<C>,
    delta: BTreeMap<Monomial, Element<C>>,
    brackets: BTreeMap<(Monomial, Monomial), Element<C>>,
}

impl<'a, C: Coefficient> BvCache<'a, C> {
    pub fn new(op: &'a BvOperator<C>) -> Self {
        BvCache { op, delta: BTreeMap::new(), brackets: BTreeMap::new() }
    }

    pub fn delta_monomial(&mut self, m: &Monomial) -> Result<Element<C>, BvError> {
        if let Some(v) = self.delta.get(m) {
            return Ok(v.clone());
        }
        let v = self.op.delta_monomial(m)?;
        self.delta.insert(m.clone(), v.clone());
        Ok(v)
    }

    pub fn delta(&mut self, x: &Element<C>) -> Result<Element<C>, BvError> {
        let mut out = self.op.algebra.zero();
        for (m, c) in x.terms() {
            out = out.add_scaled(&self.delta_monomial(m)?, c);
        }
        Ok(out)
    }

    fn bracket_monomials(&mut self, a: &Monomial, b: &Monomial) -> Result<Element<C>, BvError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.brackets.get(&key) {
            return Ok(v.clone());
        }
        let p = self.op.algebra.clone();
        let x = p.monomial(a);
        let y = p.monomial(b);
        let s = sign(p.degree_of(a));
        let dxy = self.delta(&(&x * &y))?;
        let dx = self.delta(&x)?;
        let dy = self.delta(&y)?;
        let v = dxy.scale_i64(s) - (&dx * &y).scale_i64(s) - &x * &dy;
        self.brackets.insert(key, v.clone());
        Ok(v)
    }

    /// Gerstenhaber bracket, bilinear over homogeneous monomials.
    pub fn bracket(&mut self, a: &Element<C>, b: &Element<C>) -> Result<Element<C>, BvError> {
        degree_of(a)?;
        degree_of(b)?;
        let mut out = self.op.algebra.zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let v = self.bracket_monomials(ma, mb)?;
                out = out.add_scaled(&v, &(ca.clone() * cb.clone()));
            }
        }
        Ok(out)
    }

    /// LHS − RHS of the seven-term identity.
    pub fn bv_residual(&mut self, x: &Element<C>, y: &Element<C>, z: &Element<C>) -> Result<Element<C>, BvError> {
        let dx_deg = degree_of(x)?;
        let dy_deg = degree_of(y)?;
        degree_of(z)?;
        let xy = x * y;
        let yz = y * z;
        let xz = x * z;
        let lhs = self.delta(&(&xy * z))?;
        let s_x = sign(dx_deg);
        let s_y = sign((dx_deg - 1) * dy_deg);
        let s_xy = sign(dx_deg + dy_deg);
        let rhs = &self.delta(&xy)? * z
            + (x * &self.delta(&yz)?).scale_i64(s_x)
            + (y * &self.delta(&xz)?).scale_i64(s_y)
            - &(&self.delta(x)? * y) * z
            - (&(x * &self.delta(y)?) * z).scale_i64(s_x)
            - (&xy * &self.delta(z)?).scale_i64(s_xy);
        Ok(lhs - rhs)
    }
}

/// {a,b} = (−1)^{|a|}Δ(ab) − (−1)^{|a|}(Δa)b − a(Δb).
pub fn bracket<C: Coefficient>(op: &BvOperator<C>, a: &Element<C>, b: &Element<C>) -> Result<Element<C>, BvError> {
    if !a.same_algebra(b) || a.algebra().id() != op.algebra().id() {
        return Err(AlgebraError::MixedAlgebras.into());
    }
    BvCache::new(op).bracket(a, b)
}

pub fn check_bv_identity<C: Coefficient>(
    op: &BvOperator<C>,
    x: &Element<C>,
    y: &Element<C>,
    z: &Element<C>,
) -> Result<Element<C>, BvError> {
    BvCache::new(op).bv_residual(x, y, z)
}

fn names<C: Coefficient>(p: &Presentation<C>, ms: &[&Monomial]) -> Vec<String> {
    ms.iter().map(|m| p.format_monomial(m)).collect()
}

pub fn audit_delta_squared<C: Coefficient>(
    op: &BvOperator<C>,
    basis: &[Monomial],
    window: &str,
) -> Result<Report<C>, BvError> {
    let mut cache = BvCache::new(op);
    let mut r = Report::new("delta-squared", window.to_string());
    for m in basis {
        let d = cache.delta_monomial(m)?;
        let dd = cache.delta(&d)?;
        r.record(names(op.algebra(), &[m]), dd);
    }
    Ok(r)
}

pub fn check_delta_squared<C: Coefficient>(op: &BvOperator<C>, window: &DegreeWindow) -> Result<Report<C>, BvError> {
    let basis: Vec<Monomial> = op.algebra().window_basis(window)?.into_iter().map(|e| e.monomial).collect();
    audit_delta_squared(op, &basis, &window.describe())
}

pub type Triple = (Monomial, Monomial, Monomial);

pub fn audit_bv_identity<C: Coefficient>(op: &BvOperator<C>, triples: &[Triple], window: &str) -> Result<Report<C>, BvError> {
    let p = op.algebra().clone();
    let mut cache = BvCache::new(op);
    let mut r = Report::new("bv-identity", window.to_string());
    for (x, y, z) in triples {
        let res = cache.bv_residual(&p.monomial(x), &p.monomial(y), &p.monomial(z))?;
        r.record(names(&p, &[x, y, z]), res);
    }
    Ok(r)
}

pub fn audit_antisymmetry<C: Coefficient>(
    op: &BvOperator<C>,
    pairs: &[(Monomial, Monomial)],
    window: &str,
) -> Result<Report<C>, BvError> {
    let p = op.algebra().clone();
    let mut cache = BvCache::new(op);
    let mut r = Report::new("bracket-antisymmetry", window.to_string());
    for (a, b) in pairs {
        let (x, y) = (p.monomial(a), p.monomial(b));
        let s = sign((p.degree_of(a) + 1) * (p.degree_of(b) + 1));
        let res = cache.bracket(&x, &y)? + cache.bracket(&y, &x)?.scale_i64(s);
        r.record(names(&p, &[a, b]), res);
    }
    Ok(r)
}

pub fn audit_leibniz<C: Coefficient>(op: &BvOperator<C>, triples: &[Triple], window: &str) -> Result<Report<C>, BvError> {
    let p = op.algebra().clone();
    let mut cache = BvCache::new(op);
    let mut r = Report::new("bracket-leibniz", window.to_string());
    for (a, b, c) in triples {
        let (x, y, z) = (p.monomial(a), p.monomial(b), p.monomial(c));
        let s = sign((p.degree_of(a) + 1) * p.degree_of(b));
        let res = cache.bracket(&x, &(&y * &z))? - &cache.bracket(&x, &y)? * &z - (&y * &cache.bracket(&x, &z)?).scale_i64(s);
        r.record(names(&p, &[a, b, c]), res);
    }
    Ok(r)
}

pub fn audit_jacobi<C: Coefficient>(op: &BvOperator<C>, triples: &[Triple], window: &str) -> Result<Report<C>, BvError> {
    let p = op.algebra().clone();
    let mut cache = BvCache::new(op);
    let mut r = Report::new("bracket-jacobi", window.to_string());
    for (a, b, c) in triples {
        let (x, y, z) = (p.monomial(a), p.monomial(b), p.monomial(c));
        let s = sign((p.degree_of(a) + 1) * (p.degree_of(b) + 1));
        let bc = cache.bracket(&y, &z)?;
        let ab = cache.bracket(&x, &y)?;
        let ac = cache.bracket(&x, &z)?;
        let res = cache.bracket(&x, &bc)? - cache.bracket(&ab, &z)? - cache.bracket(&y, &ac)?.scale_i64(s);
        r.record(names(&p, &[a, b, c]), res);
    }
    Ok(r)
}

/// All ordered triples of window basis monomials.
pub fn basis_triples(basis: &[Monomial]) -> Vec<Triple> {
    let mut out = Vec::with_capacity(basis.len().pow(3));
    for x in basis {
        for y in basis {
            for z in basis {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    out
}

pub fn basis_pairs(basis: &[Monomial]) -> Vec<(Monomial, Monomial)> {
    let mut out = Vec::with_capacity(basis.len().pow(2));
    for x in basis {
        for y in basis {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

/// Δ on words of length ≤ 2 (raw monomials, possibly reducible).
#[derive(Clone, Debug, Default)]
pub struct Seed<C: Coefficient> {
    values: BTreeMap<Monomial, Element<C>>,
}

impl<C: Coefficient> Seed<C> {
    pub fn new() -> Self {
        Seed { values: BTreeMap::new() }
    }

    pub fn insert(&mut self, word: Monomial, value: Element<C>) {
        self.values.insert(word, value);
    }

    pub fn get(&self, word: &Monomial) -> Option<&Element<C>> {
        self.values.get(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &Monomial> {
        self.values.keys()
    }

    /// All words of length ≤ 2 in the generators.
    pub fn short_words(p: &Presentation<C>) -> Vec<Monomial> {
        let k = p.rank();
        let mut out = alloc::vec![Monomial::one(k)];
        for i in 0..k {
            out.push(Monomial::generator(k, i));
            for j in i..k {
                if i == j && p.is_odd(i) {
                    continue;
                }
                let mut m = Monomial::generator(k, i);
                m.set_exponent(j, m.exponent(j) + 1);
                out.push(m);
            }
        }
        out
    }

    /// Seed read off an existing operator.
    pub fn from_operator(op: &BvOperator<C>) -> Result<Self, BvError> {
        let p = op.algebra().clone();
        let mut s = Seed::new();
        for w in Self::short_words(&p) {
            let v = op.apply(&p.monomial(&w))?;
            s.insert(w, v);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtensionError<C: Coefficient> {
    #[error("seed has no value on `{0}`")]
    MissingSeed(String),
    #[error("inconsistent seed on `{word}`: {first} versus {second}")]
    Inconsistent { word: String, first: Element<C>, second: Element<C> },
    #[error(transparent)]
    Bv(#[from] BvError),
}

struct Extender<'a, C: Coefficient> {
    p: Arc<Presentation<C>>,
    seed: &'a Seed<C>,
    memo: BTreeMap<Monomial, Element<C>>,
}

impl<C: Coefficient> Extender<'_, C> {
    fn word(&mut self, m: &Monomial) -> Result<Element<C>, ExtensionError<C>> {
        if let Some(v) = self.memo.get(m) {
            return Ok(v.clone());
        }
        let v = if m.total() <= 2 {
            if m.is_one() {
                self.p.zero()
            } else {
                self.seed.get(m).cloned().ok_or_else(|| ExtensionError::MissingSeed(self.p.format_monomial(m)))?
            }
        } else {
            let first = m.support().next().unwrap();
            let last = m.support().last().unwrap();
            self.split(m, first, last)?
        };
        self.memo.insert(m.clone(), v.clone());
        Ok(v)
    }

    // Δ of a product of two raw words, including the reordering sign
    fn product(&mut self, a: &Monomial, b: &Monomial) -> Result<Element<C>, ExtensionError<C>> {
        match self.p.mul_monomials(a, b) {
            Some((neg, ab)) => {
                let v = self.word(&ab)?;
                Ok(if neg { -v } else { v })
            }
            None => Ok(self.p.zero()),
        }
    }

    /// Δ(m) from the identity with m = ±x·y·z, x and z single generators.
    fn split(&mut self, m: &Monomial, xi: usize, zi: usize) -> Result<Element<C>, ExtensionError<C>> {
        let k = self.p.rank();
        let x = Monomial::generator(k, xi);
        let z = Monomial::generator(k, zi);
        let y = x.raw_product(&z).quotient_of(m);
        let (n1, xy) = self.p.mul_monomials(&x, &y).expect("factor of a valid word");
        let (n2, _) = self.p.mul_monomials(&xy, &z).expect("factor of a valid word");
        let p = self.p.clone();
        let (ex, ey, ez) = (p.monomial(&x), p.monomial(&y), p.monomial(&z));
        let dx_deg = p.degree_of(&x);
        let dy_deg = p.degree_of(&y);
        let d_xy = self.product(&x, &y)?;
        let d_yz = self.product(&y, &z)?;
        let d_xz = self.product(&x, &z)?;
        let d_x = self.word(&x)?;
        let d_y = self.word(&y)?;
        let d_z = self.word(&z)?;
        let phi = &d_xy * &ez
            + (&ex * &d_yz).scale_i64(sign(dx_deg))
            + (&ey * &d_xz).scale_i64(sign((dx_deg - 1) * dy_deg))
            - &(&d_x * &ey) * &ez
            - (&(&ex * &d_y) * &ez).scale_i64(sign(dx_deg))
            - (&(&ex * &ey) * &d_z).scale_i64(sign(dx_deg + dy_deg));
        Ok(if n1 != n2 { -phi } else { phi })
    }
}

/// Extends seed values on words of length ≤ 2 to the whole window by the
/// seven-term identity, then verifies that every other factorization, every
/// relation and every torsion rule agrees with the result.
pub fn extend_delta_by_bv<C: Coefficient>(
    p: &Arc<Presentation<C>>,
    seed: &Seed<C>,
    window: &DegreeWindow,
) -> Result<BvOperator<C>, ExtensionError<C>> {
    let mut ext = Extender { p: p.clone(), seed, memo: BTreeMap::new() };
    let words = p.window_words(window).map_err(BvError::from)?;
    for m in &words {
        let canonical = ext.word(m)?;
        if m.total() >= 3 {
            let support: Vec<usize> = m.support().collect();
            for &xi in &support {
                for &zi in &support {
                    if xi == zi && m.exponent(xi) < 2 {
                        continue;
                    }
                    let other = ext.split(m, xi, zi)?;
                    if other != canonical {
                        return Err(ExtensionError::Inconsistent {
                            word: p.format_monomial(m),
                            first: canonical,
                            second: other,
                        });
                    }
                }
            }
        }
        if p.is_reducible(m) || p.annihilator(m) == 1 {
            let mut lin = p.zero();
            for (nm, c) in p.monomial(m).terms() {
                lin = lin.add_scaled(&ext.word(nm)?, c);
            }
            if lin != canonical {
                return Err(ExtensionError::Inconsistent { word: p.format_monomial(m), first: canonical, second: lin });
            }
        } else {
            let k = p.annihilator(m);
            if k > 1 {
                let killed = canonical.scale(&C::from_i64(k as i64));
                if !killed.is_zero() {
                    return Err(ExtensionError::Inconsistent {
                        word: alloc::format!("{}·{}", k, p.format_monomial(m)),
                        first: killed,
                        second: p.zero(),
                    });
                }
            }
        }
    }
    let mut table = BTreeMap::new();
    for e in p.window_basis(window).map_err(BvError::from)? {
        let v = ext.word(&e.monomial)?;
        table.insert(e.monomial, v);
    }
    Ok(BvOperator::table(p, table))
}
