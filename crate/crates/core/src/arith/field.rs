//! Fraction fields of the supported rings and a minimal field interface
//! shared with the residue fields.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::arith::places::{Place, PlaceSet};
use crate::arith::ring::GlobalRing;
use crate::error::{Error, Result};

/// Field arithmetic through a context object.
pub trait FieldOps {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// An element of `Q` or `Fp(t)` in lowest terms with canonical denominator.
/// Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Frac<E> {
    pub num: E,
    pub den: E,
}

/// The fraction field of a global ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionField<R> {
    pub ring: R,
}

impl<R: GlobalRing> FractionField<R> {
    pub fn new(ring: R) -> Self {
        FractionField { ring }
    }

    /// Builds `num/den` in canonical form; `den` must be nonzero.
    pub fn make(&self, num: R::Elem, den: R::Elem) -> Frac<R::Elem> {
        let r = &self.ring;
        assert!(!r.is_zero(&den), "zero denominator");
        if r.is_zero(&num) {
            return Frac {
                num: r.zero(),
                den: r.one(),
            };
        }
        let g = r.gcd(&num, &den);
        let (mut n, mut d) = (
            r.exact_div(&num, &g).unwrap(),
            r.exact_div(&den, &g).unwrap(),
        );
        let u = r.unit_inverse(&r.unit_part(&d));
        n = r.mul(&n, &u);
        d = r.mul(&d, &u);
        Frac { num: n, den: d }
    }

    pub fn from_integral(&self, a: R::Elem) -> Frac<R::Elem> {
        Frac {
            num: a,
            den: self.ring.one(),
        }
    }

    pub fn is_integral(&self, x: &Frac<R::Elem>) -> bool {
        self.ring.is_one(&x.den)
    }

    /// Normalized valuation `v_place(x)` of a nonzero element at a
    /// non-archimedean place.
    pub fn valuation(&self, x: &Frac<R::Elem>, place: &Place<R::Elem>) -> Result<i64> {
        if self.is_zero(x) {
            return Err(Error::Domain(
                "valuation of zero undefined; callers test for zero first".into(),
            ));
        }
        integral_valuation(&self.ring, &x.num, place)
            .and_then(|a| integral_valuation(&self.ring, &x.den, place).map(|b| a - b))
    }

    /// Finite places where `x` has nonzero valuation, plus the infinite place
    /// when that is non-archimedean and `v_inf(x) != 0`.
    pub fn support(
        &self,
        x: &Frac<R::Elem>,
        budget: &crate::FactorBudget,
    ) -> Result<Vec<Place<R::Elem>>> {
        if self.is_zero(x) {
            return Err(Error::Domain("support of zero".into()));
        }
        let r = &self.ring;
        let mut out: Vec<Place<R::Elem>> = r
            .factor(&x.num, budget)?
            .into_iter()
            .chain(r.factor(&x.den, budget)?)
            .map(|(p, _)| Place::Finite(p))
            .collect();
        if !r.infinity_is_archimedean() && self.valuation(x, &Place::Infinite)? != 0 {
            out.push(Place::Infinite);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// `v(x) >= 0` at every place outside `S`.
    pub fn is_s_integer(&self, x: &Frac<R::Elem>, s: &PlaceSet<R>) -> Result<bool> {
        if self.is_zero(x) {
            return Ok(true);
        }
        for place in self.support(x, &Default::default())? {
            if !s.contains(&place) && self.valuation(x, &place)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `v(x) = 0` at every place outside `S`.
    pub fn is_s_unit(&self, x: &Frac<R::Elem>, s: &PlaceSet<R>) -> Result<bool> {
        if self.is_zero(x) {
            return Err(Error::Domain("zero is never an S-unit".into()));
        }
        Ok(self
            .support(x, &Default::default())?
            .iter()
            .all(|place| s.contains(place)))
    }

    pub fn format(&self, x: &Frac<R::Elem>) -> String {
        let r = &self.ring;
        if r.is_one(&x.den) {
            return r.format(&x.num);
        }
        let wrap = |s: String| {
            if s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(r.format(&x.num)), wrap(r.format(&x.den)))
    }

    pub fn pow_i(&self, x: &Frac<R::Elem>, e: i64) -> Frac<R::Elem> {
        let r = &self.ring;
        let n = r.pow(&x.num, e.unsigned_abs());
        let d = r.pow(&x.den, e.unsigned_abs());
        if e >= 0 {
            Frac { num: n, den: d }
        } else {
            self.make(d, n)
        }
    }
}

/// Valuation of a nonzero integral element.
pub fn integral_valuation<R: GlobalRing>(
    ring: &R,
    a: &R::Elem,
    place: &Place<R::Elem>,
) -> Result<i64> {
    if ring.is_zero(a) {
        return Err(Error::Domain(
            "valuation of zero undefined; callers test for zero first".into(),
        ));
    }
    match place {
        Place::Finite(pi) => Ok(ring.ord(a, pi) as i64),
        Place::Infinite => ring.infinite_valuation(a).ok_or_else(|| {
            Error::UnsupportedPlace("the archimedean place has no valuation".into())
        }),
    }
}

impl<R: GlobalRing> FieldOps for FractionField<R> {
    type Elem = Frac<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Frac {
            num: self.ring.zero(),
            den: self.ring.one(),
        }
    }
    fn one(&self) -> Self::Elem {
        Frac {
            num: self.ring.one(),
            den: self.ring.one(),
        }
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_integral(self.ring.from_i64(n))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.ring.is_zero(&a.num)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if r.is_one(&a.den) && r.is_one(&b.den) {
            return self.from_integral(r.add(&a.num, &b.num));
        }
        let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        self.make(num, r.mul(&a.den, &b.den))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if r.is_one(&a.den) && r.is_one(&b.den) {
            return self.from_integral(r.mul(&a.num, &b.num));
        }
        self.make(r.mul(&a.num, &b.num), r.mul(&a.den, &b.den))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Frac {
            num: self.ring.neg(&a.num),
            den: a.den.clone(),
        }
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        (!self.is_zero(a)).then(|| self.make(a.den.clone(), a.num.clone()))
    }
}
