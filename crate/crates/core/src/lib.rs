//! Arithmetic over finite chain rings, their characters and character sums,
//! and the unimodular and Platonic graphs built from them, with numeric checks
//! of their spectra and combinatorics.

pub mod applications;
pub mod error;
pub mod graph;
pub mod reproduce;
pub mod ring;
pub mod spectral;
pub mod sums;
pub mod units;

pub use error::{Error, Result};
pub use ring::{ChainRing, Extension, Family, Ring, RingElement, Subset};
pub use units::{AdditiveCharacters, MultChar, Roots, UnitGroup};
