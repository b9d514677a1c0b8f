//! Taylor shift on Bergman spaces over spherical domains.
//!
//! Functions are kept in a closed class (polynomial plus Cauchy integral of a
//! circle measure with monomial densities) on which the shift, its iterates and
//! the Kitai right inverses act exactly. Norms come from adaptive quadrature
//! against the normalized spherical measure.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod functions;
pub mod geometry;
pub mod measures;
pub mod quadrature;
pub mod syntax;
