//! Computational liaison of curves over prime fields.
//!
//! The crate is organized bottom-up: [`field`] and [`ring`] provide exact
//! arithmetic, [`groebner`] the ideal operations, [`hilbert`] and
//! [`geometry`] the invariants and predicates used by [`liaison`],
//! [`resolution`] and [`deficiency`]. [`pipelines`] strings them together
//! into verification reports.

pub mod deficiency;
pub mod error;
pub mod field;
pub mod ring;
pub(crate) mod engine;
pub mod linalg;
pub mod groebner;
pub mod geometry;
pub mod hilbert;
pub mod io;
pub mod liaison;
pub mod numerology;
pub mod pipelines;
pub mod report;
pub mod resolution;

pub use error::{Error, Result};
pub use field::{PrimeField, DEFAULT_PRIME};
pub use groebner::Ideal;
pub use ring::{random_form, Ambient, MonomialOrder, MultiDegree, Polynomial, Ring};
