//! Exact computation in finitely presented graded-commutative algebras with
//! Batalin–Vilkovisky operators, and the string-topology BV algebra of ℂPⁿ.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bv;
pub mod chern;
pub mod confluence;
pub mod cpn;
pub mod element;
pub mod error;
pub mod hochschild;
pub mod hom;
pub mod hopf;
pub mod linalg;
pub mod monomial;
pub mod presentation;
pub mod report;
pub mod scalar;
pub mod window;

pub use bv::{BvError, BvOperator};
pub use element::Element;
pub use error::AlgebraError;
pub use monomial::Monomial;
pub use hom::AlgebraMap;
pub use presentation::{Generator, Presentation, PresentationBuilder, PresentationExt};
pub use report::{Certificate, Report};
pub use scalar::{CoeffRing, Coefficient};
pub use window::{BasisEntry, DegreeWindow, GradedPiece};
