use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::ring::GlobalRing;
use crate::error::{Error, Result};

/// A place of `Q` or `Fp(t)`.
///
/// `Finite` carries a prime integer or a monic irreducible polynomial.
/// `Infinite` is the archimedean place over `Q` and the (non-archimedean)
/// place at infinity over `Fp(t)`, with uniformizer `1/t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place<E> {
    Finite(E),
    Infinite,
}

impl<E> Place<E> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    pub fn finite(&self) -> Option<&E> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinite => None,
        }
    }
}

/// A finite set of places `S` of the base field.
///
/// Over `Q` the archimedean place is always a member. Over `Fp(t)` the set
/// must be non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSet<R: GlobalRing> {
    ring: R,
    places: Vec<Place<R::Elem>>,
}

impl<R: GlobalRing> PlaceSet<R> {
    pub fn new(ring: &R, places: impl IntoIterator<Item = Place<R::Elem>>) -> Result<Self> {
        let mut out: Vec<Place<R::Elem>> = Vec::new();
        for place in places {
            if let Place::Finite(pi) = &place {
                if !ring.is_prime_element(pi) {
                    return Err(Error::Domain(format!(
                        "{} is not a canonical prime of {}",
                        ring.format(pi),
                        ring.field_name()
                    )));
                }
            }
            if out.contains(&place) {
                return Err(Error::Domain(format!(
                    "duplicate place {}",
                    ring.format_place(&place)
                )));
            }
            out.push(place);
        }
        if ring.infinity_is_archimedean() && !out.contains(&Place::Infinite) {
            return Err(Error::Domain(
                "S must contain the archimedean place".to_string(),
            ));
        }
        if out.is_empty() {
            return Err(Error::Domain("S must be non-empty".to_string()));
        }
        out.sort();
        Ok(PlaceSet {
            ring: ring.clone(),
            places: out,
        })
    }

    /// Parses a comma-separated list of place tokens (`inf`, `p:7`,
    /// `pi:1,1,1`). Because polynomial tokens contain commas themselves, a new
    /// token starts at every `inf`, `p:` or `pi:` prefix.
    pub fn parse(ring: &R, s: &str) -> Result<Self> {
        let mut tokens: Vec<String> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let starts_token = part == "inf" || part.starts_with("p:") || part.starts_with("pi:");
            match tokens.last_mut() {
                Some(last) if !starts_token => {
                    last.push(',');
                    last.push_str(part);
                }
                _ => tokens.push(part.to_string()),
            }
        }
        let places = tokens
            .iter()
            .map(|t| ring.parse_place(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, places)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn places(&self) -> &[Place<R::Elem>] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn contains(&self, place: &Place<R::Elem>) -> bool {
        self.places.contains(place)
    }

    pub fn finite_primes(&self) -> impl Iterator<Item = &R::Elem> {
        self.places.iter().filter_map(Place::finite)
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Place<R::Elem>>) -> Result<Self> {
        let mut all = self.places.clone();
        for p in extra {
            if !all.contains(&p) {
                all.push(p);
            }
        }
        Self::new(&self.ring, all)
    }

    pub fn format(&self) -> String {
        self.places
            .iter()
            .map(|p| self.ring.format_place(p))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A non-archimedean place outside `S` whose residue field is as small as
/// possible. Ties are broken by the order of [`GlobalRing::places_by_size`]
/// (finite places in degree-lexicographic order, then infinity).
///
/// Over `Fp(t)` the residue field of the result has at most
/// `(p * |S|)^2 - 1` elements.
pub fn find_small_prime_outside<R: GlobalRing>(s: &PlaceSet<R>) -> (Place<R::Elem>, BigUint) {
    let ring = s.ring();
    let place = ring
        .places_by_size()
        .find(|p| !s.contains(p))
        .expect("every global field has infinitely many places");
    let size = ring
        .residue_field_size(&place)
        .expect("places_by_size yields non-archimedean places");
    (place, size)
}
