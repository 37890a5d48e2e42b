//! Cohomology of complements of arrangements of subtori in a complex torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`intlat`]: exact integer lattice algebra (Smith and Hermite forms).
//! * [`arrangement`]: atoms, layers, the poset of layers, positive systems.
//! * [`topo`]: order complexes, integral reduced homology, Möbius function.
//! * [`addcoh`]: integral cohomology groups of the complement and the Leray
//!   `E_2` table.
//! * [`arimat`]: the oriented arithmetic matroid of a toric arrangement.
//! * [`ospres`]: the Orlik–Solomon type presentation of the rational
//!   cohomology ring, its NBC basis and the integral variant.

pub mod addcoh;
pub mod arimat;
pub mod arrangement;
mod error;
pub mod intlat;
pub mod ospres;
pub mod topo;

pub use error::{Error, Result};
