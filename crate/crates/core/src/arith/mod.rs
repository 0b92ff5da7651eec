//! Exact arithmetic for `Q` and `Fp(t)`: rings of integers, fraction fields,
//! places and their valuations, residue fields, and S-integrality.

pub mod field;
pub mod fppoly;
pub mod integers;
pub mod places;
pub mod residue;
pub mod ring;

pub use field::{FieldOps, Frac, FractionField};
pub use fppoly::{count_irreducibles, enumerate_monic_irreducibles, FpPoly, FpPolyRing};
pub use integers::Integers;
pub use places::{find_small_prime_outside, Place, PlaceSet};
pub use residue::{ResidueElem, ResidueField};
pub use ring::{EuclideanRing, FactorBudget, GlobalRing};
