//! Numerical toolkit for the fish-eye/Coulomb family of Sturmian problems
//! and their atomic-physics consequences: quantized coupling constants,
//! hydrogenic and screened spectra, closed self-intersecting orbits,
//! Thomas-Fermi screening, and the (n+l, n) structure of the periodic
//! table. Every closed-form result has an independent numerical route
//! (shooting, quadrature, or finite differences) exercised by the tests.

pub mod atomstat;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod ptable;
pub mod specfun;
pub mod spectra;
pub mod sturm;
pub mod util;

pub use error::{Error, Result};
