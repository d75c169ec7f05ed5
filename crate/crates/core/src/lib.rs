//! Pointed isogeny graphs on elliptic curves and their products, explicit
//! mod-ℓ Galois modules, and verification harnesses for the rational torsion
//! they force.

pub mod curve;
pub mod field;
pub mod galmod;
pub mod isogeny;
pub mod linalg;
pub mod verify;
