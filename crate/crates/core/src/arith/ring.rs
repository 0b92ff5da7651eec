use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};

use crate::arith::places::Place;
use crate::arith::residue::{ResidueElem, ResidueField};
use crate::error::Result;

/// Arithmetic of a Euclidean domain whose elements are plain values and whose
/// parameters (e.g. the characteristic) live in the ring object.
pub trait EuclideanRing: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Euclidean division; `b` must be nonzero.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// The unit `u` such that `a / u` is the canonical associate of `a`
    /// (positive integer, monic polynomial). Returns one for zero.
    fn unit_part(&self, a: &Self::Elem) -> Self::Elem;
    fn unit_inverse(&self, u: &Self::Elem) -> Self::Elem;
    fn is_unit(&self, a: &Self::Elem) -> bool;

    fn characteristic(&self) -> u64;

    /// Size measure used for orbit budgets: `|a|` over the integers, the
    /// degree over `Fp[t]` (zero counts as height zero).
    fn height(&self, a: &Self::Elem) -> BigUint;

    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a / b` when `b` divides `a`.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(b) {
            return None;
        }
        let (q, r) = self.div_rem(a, b);
        self.is_zero(&r).then_some(q)
    }

    fn normalize(&self, a: &Self::Elem) -> Self::Elem {
        let u = self.unit_part(a);
        self.mul(a, &self.unit_inverse(&u))
    }

    /// Canonical gcd; `gcd(0, 0) = 0`.
    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut x = a.clone();
        let mut y = b.clone();
        while !self.is_zero(&y) {
            let (_, r) = self.div_rem(&x, &y);
            x = y;
            y = r;
        }
        self.normalize(&x)
    }

    fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// The ring of integers of a supported global field together with its places:
/// `Z` inside `Q`, or `Fp[t]` inside `Fp(t)`.
pub trait GlobalRing: EuclideanRing {
    /// Display name of the fraction field, e.g. `Q` or `F3(t)`.
    fn field_name(&self) -> String;

    /// True for `Q`, whose infinite place is the archimedean absolute value.
    fn infinity_is_archimedean(&self) -> bool;

    /// Prime integer / monic irreducible polynomial.
    fn is_prime_element(&self, a: &Self::Elem) -> bool;

    /// `ord_pi(a)` for a nonzero integral `a` and prime element `pi`.
    fn ord(&self, a: &Self::Elem, pi: &Self::Elem) -> u64 {
        debug_assert!(!self.is_zero(a));
        let mut n = 0;
        let mut cur = a.clone();
        while let Some(q) = self.exact_div(&cur, pi) {
            cur = q;
            n += 1;
        }
        n
    }

    /// Valuation of a nonzero integral element at the infinite place when that
    /// place is non-archimedean (`-deg` over `Fp[t]`).
    fn infinite_valuation(&self, a: &Self::Elem) -> Option<i64>;

    /// Residue field of a non-archimedean place.
    fn residue_field(&self, place: &Place<Self::Elem>) -> Result<ResidueField>;

    /// `|k(place)|` as an exact integer.
    fn residue_field_size(&self, place: &Place<Self::Elem>) -> Result<BigUint>;

    /// Reduction of an integral element modulo a finite prime.
    fn reduce_finite(&self, a: &Self::Elem, field: &ResidueField) -> ResidueElem;

    /// Reduction at the infinite place of `a / t^k`, where `k >= deg a`.
    fn reduce_infinite(&self, a: &Self::Elem, k: u64, field: &ResidueField) -> ResidueElem;

    /// Prime factorization of a nonzero element into canonical primes with
    /// multiplicities, ascending. Units factor as the empty list.
    fn factor(&self, a: &Self::Elem, budget: &FactorBudget) -> Result<Vec<(Self::Elem, u64)>>;

    /// Non-archimedean places in nondecreasing residue-field size, starting
    /// with the smallest; the infinite place is included when it is
    /// non-archimedean.
    fn places_by_size(&self) -> Box<dyn Iterator<Item = Place<Self::Elem>> + '_>;

    /// Roots of unity of the fraction field (`{1, -1}` or `Fp*`).
    fn torsion_units(&self) -> Vec<Self::Elem>;

    /// All canonical integral elements of height `<= bound`, in ascending
    /// order, or a budget error when there would be more than `max_count`.
    fn elements_up_to_height(&self, bound: u64, max_count: u64) -> Result<Vec<Self::Elem>>;

    /// The default `height_cap` of an orbit budget for this ring.
    fn default_height_cap(&self) -> BigUint;

    /// The transcendental generator of the field, if any, with its name in
    /// parsed expressions (`t` for `Fp(t)`).
    fn generator(&self) -> Option<(&'static str, Self::Elem)> {
        None
    }

    fn parse_place(&self, s: &str) -> Result<Place<Self::Elem>>;
    fn format_place(&self, place: &Place<Self::Elem>) -> String;
}

/// Work limit for trial-division factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Maximum number of trial divisors (integers) or candidate polynomials.
    pub max_trials: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            max_trials: 2_000_000,
        }
    }
}
