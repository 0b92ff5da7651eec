//! Exact arithmetic dynamics over `Q` and `Fp(t)`: rational maps of the
//! projective line, good reduction, periodic and preperiodic points, explicit
//! bounds on cycle lengths, and S-unit equations.

pub mod arith;
pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod json;
pub mod projective;
pub mod ratmap;
pub mod sunit;
pub mod sweep;

pub use arith::{
    count_irreducibles, enumerate_monic_irreducibles, find_small_prime_outside, EuclideanRing,
    FactorBudget, FieldOps, FpPoly, FpPolyRing, Frac, FractionField, GlobalRing, Integers, Place,
    PlaceSet, ResidueElem, ResidueField,
};
pub use bounds::{compute_bounds, verify_report, BoundCheck, BoundContext, BoundSet};
pub use dynamics::{OrbitBudget, OrbitOutcome, OrbitReport};
pub use error::{Error, Result};
pub use projective::{LogDistance, ProjPoint, ReducedPoint};
pub use ratmap::{MultiplierValue, PointKind, RationalMap, ReducedMap};
pub use sunit::{SUnitGroup, UnitEquation, UnitEquationSolutions};
