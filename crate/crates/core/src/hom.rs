//! Algebra maps given on generators, with relation checks and inversion on
//! graded pieces.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::element::Element;
use crate::monomial::Monomial;
use crate::presentation::{Presentation, PresentationExt};
use crate::scalar::Coefficient;
use crate::window::DegreeWindow;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError<C: Coefficient> {
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("`{0}` is not a generator of the source")]
    UnknownGenerator(String),
    #[error("image of `{0}` lies in the wrong algebra")]
    WrongAlgebra(String),
    #[error("image of `{generator}` has the wrong degree")]
    DegreeMismatch { generator: String },
    #[error("not a homomorphism: relation `{relation}` maps to {image}")]
    NotHomomorphism { relation: String, image: Element<C> },
    #[error("graded piece in degree {0} is not finite within the search bound")]
    Truncated(i64),
    #[error("degree {degree}: graded pieces are not isomorphic")]
    NotIsomorphic { degree: i64 },
    #[error("{0} has no preimage")]
    NoPreimage(Element<C>),
}

/// `source → target`, determined by the images of the source generators.
#[derive(Clone, Debug)]
pub struct AlgebraMap<C: Coefficient> {
    source: Arc<Presentation<C>>,
    target: Arc<Presentation<C>>,
    images: Vec<Element<C>>,
}

const SEARCH_CAP: u32 = 1 << 12;

impl<C: Coefficient> AlgebraMap<C> {
    pub fn new(
        source: &Arc<Presentation<C>>,
        target: &Arc<Presentation<C>>,
        images: &[(&str, Element<C>)],
    ) -> Result<Self, MapError<C>> {
        for (name, _) in images {
            if source.generator_index(name).is_none() {
                return Err(MapError::UnknownGenerator(name.to_string()));
            }
        }
        let mut out = Vec::with_capacity(source.rank());
        for g in source.generators() {
            let (_, img) = images
                .iter()
                .find(|(name, _)| *name == g.name)
                .ok_or_else(|| MapError::MissingImage(g.name.clone()))?;
            if img.algebra().id() != target.id() {
                return Err(MapError::WrongAlgebra(g.name.clone()));
            }
            if !img.is_zero() && img.degree() != Some(g.degree) {
                return Err(MapError::DegreeMismatch { generator: g.name.clone() });
            }
            out.push(img.clone());
        }
        Ok(AlgebraMap { source: source.clone(), target: target.clone(), images: out })
    }

    pub fn source(&self) -> &Arc<Presentation<C>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation<C>> {
        &self.target
    }

    pub fn image_of(&self, generator: usize) -> &Element<C> {
        &self.images[generator]
    }

    /// Image of a raw monomial: the ordered product of generator images.
    pub fn apply_raw(&self, m: &Monomial) -> Element<C> {
        let mut out = self.target.one();
        for (i, e) in m.exponents().iter().enumerate() {
            for _ in 0..*e {
                out = &out * &self.images[i];
            }
        }
        out
    }

    pub fn apply(&self, x: &Element<C>) -> Element<C> {
        let mut out = self.target.zero();
        for (m, c) in x.terms() {
            out = out.add_scaled(&self.apply_raw(m), c);
        }
        out
    }

    /// Every rewrite and torsion relation of the source must map to zero.
    pub fn check_relations(&self) -> Result<(), MapError<C>> {
        let p = &self.source;
        for rule in p.rewrites() {
            let mut img = self.apply_raw(&rule.lhs);
            for (m, c) in &rule.rhs {
                img = img.add_scaled(&self.apply_raw(m), &-c.clone());
            }
            if !img.is_zero() {
                return Err(MapError::NotHomomorphism { relation: p.format_monomial(&rule.lhs), image: img });
            }
        }
        for t in p.torsion_rules() {
            let img = self.apply_raw(&t.monomial).scale(&C::from_i64(t.modulus as i64));
            if !img.is_zero() {
                return Err(MapError::NotHomomorphism {
                    relation: alloc::format!("{}·{}", t.modulus, p.format_monomial(&t.monomial)),
                    image: img,
                });
            }
        }
        if p.ring().modulus() != 0 {
            let img = self.target.scalar(C::from_i64(p.ring().modulus() as i64));
            if !img.is_zero() {
                return Err(MapError::NotHomomorphism { relation: p.ring().label(), image: img });
            }
        }
        for (i, g) in p.generators().iter().enumerate() {
            if g.is_odd() {
                let sq = &self.images[i] * &self.images[i];
                if !sq.is_zero() {
                    return Err(MapError::NotHomomorphism { relation: alloc::format!("{}^2", g.name), image: sq });
                }
            }
        }
        Ok(())
    }

    fn pieces(&self, d: i64) -> Result<(Vec<Monomial>, Vec<Monomial>, Vec<u64>), MapError<C>> {
        let big = DegreeWindow::new(SEARCH_CAP);
        let src = self.source.basis_in_degree(d, &big);
        let tgt = self.target.basis_in_degree(d, &big);
        if src.truncated || tgt.truncated {
            return Err(MapError::Truncated(d));
        }
        let moduli = tgt.entries.iter().map(|e| e.annihilator).collect();
        Ok((
            src.entries.into_iter().map(|e| e.monomial).collect(),
            tgt.entries.into_iter().map(|e| e.monomial).collect(),
            moduli,
        ))
    }

    /// Solves `φ(x) = y` degree by degree.
    pub fn preimage(&self, y: &Element<C>) -> Result<Element<C>, MapError<C>> {
        let mut out = self.source.zero();
        for (d, part) in y.homogeneous_parts() {
            let (src, tgt, moduli) = self.pieces(d)?;
            let columns: Vec<Element<C>> = src.iter().map(|m| self.apply_raw(m)).collect();
            let a: Vec<Vec<C>> = tgt.iter().map(|r| columns.iter().map(|col| col.coefficient(r)).collect()).collect();
            let b: Vec<C> = tgt.iter().map(|r| part.coefficient(r)).collect();
            let x = C::solve_system(&a, &b, &moduli).ok_or_else(|| MapError::NoPreimage(part.clone()))?;
            out = out + self.source.element(src.into_iter().zip(x));
        }
        Ok(out)
    }

    /// Checks that φ is bijective on every graded piece met by the window.
    pub fn check_isomorphism(&self, window: &DegreeWindow) -> Result<(), MapError<C>> {
        let mut degrees: Vec<i64> = Vec::new();
        for p in [&self.source, &self.target] {
            let basis = p.window_basis(window).map_err(|_| MapError::Truncated(0))?;
            degrees.extend(basis.iter().map(|e| p.degree_of(&e.monomial)));
        }
        degrees.sort_unstable();
        degrees.dedup();
        let big = DegreeWindow::new(SEARCH_CAP);
        for d in degrees {
            let src = self.source.basis_in_degree(d, &big);
            let tgt = self.target.basis_in_degree(d, &big);
            if src.truncated || tgt.truncated {
                return Err(MapError::Truncated(d));
            }
            let mut a: Vec<u64> = src.entries.iter().map(|e| e.annihilator).collect();
            let mut b: Vec<u64> = tgt.entries.iter().map(|e| e.annihilator).collect();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(MapError::NotIsomorphic { degree: d });
            }
            // surjective between isomorphic finitely generated groups ⇒ bijective
            for e in &tgt.entries {
                self.preimage(&self.target.monomial(&e.monomial)).map_err(|_| MapError::NotIsomorphic { degree: d })?;
            }
        }
        Ok(())
    }
}
