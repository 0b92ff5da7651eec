//! Points of the projective line in coprime integral coordinates, reduction
//! modulo a place, and the logarithmic distance between points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{
    field::integral_valuation, Frac, FractionField, GlobalRing, Place, ResidueElem, ResidueField,
};
use crate::error::{Error, Result};

/// A point `[x : y]` of `P^1(K)` with `x, y` coprime integral and canonically
/// scaled: `y` positive (or monic), or `[1 : 0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint<E> {
    pub x: E,
    pub y: E,
}

impl<E> ProjPoint<E> {
    /// Builds a point from coordinates already in canonical form.
    pub fn from_canonical(x: E, y: E) -> Self {
        ProjPoint { x, y }
    }
}

/// Canonical representative of `[x : y]` for integral coordinates.
pub fn normalize_integral<R: GlobalRing>(
    ring: &R,
    x: &R::Elem,
    y: &R::Elem,
) -> Result<ProjPoint<R::Elem>> {
    if ring.is_zero(y) {
        if ring.is_zero(x) {
            return Err(Error::Domain("[0 : 0] is not a point".into()));
        }
        return Ok(ProjPoint {
            x: ring.one(),
            y: ring.zero(),
        });
    }
    let g = ring.gcd(x, y);
    let (mut x, mut y) = if ring.is_one(&g) {
        (x.clone(), y.clone())
    } else {
        (
            ring.exact_div(x, &g).unwrap(),
            ring.exact_div(y, &g).unwrap(),
        )
    };
    let u = ring.unit_part(&y);
    if !ring.is_one(&u) {
        let ui = ring.unit_inverse(&u);
        x = ring.mul(&x, &ui);
        y = ring.mul(&y, &ui);
    }
    Ok(ProjPoint { x, y })
}

/// Canonical coprime integral representative of `[x_raw : y_raw]`.
pub fn normalize<R: GlobalRing>(
    ring: &R,
    x_raw: &Frac<R::Elem>,
    y_raw: &Frac<R::Elem>,
) -> Result<ProjPoint<R::Elem>> {
    // [a/b : c/d] = [a*d : c*b]
    let x = ring.mul(&x_raw.num, &y_raw.den);
    let y = ring.mul(&y_raw.num, &x_raw.den);
    normalize_integral(ring, &x, &y)
}

pub fn infinity<R: GlobalRing>(ring: &R) -> ProjPoint<R::Elem> {
    ProjPoint {
        x: ring.one(),
        y: ring.zero(),
    }
}

/// The point `[z : 1]`.
pub fn affine<R: GlobalRing>(ring: &R, z: &Frac<R::Elem>) -> ProjPoint<R::Elem> {
    ProjPoint {
        x: z.num.clone(),
        y: z.den.clone(),
    }
    .renormalized(ring)
}

impl<E: Clone> ProjPoint<E> {
    fn renormalized<R: GlobalRing<Elem = E>>(self, ring: &R) -> Self {
        normalize_integral(ring, &self.x, &self.y).expect("nonzero point")
    }
}

pub fn is_infinity<R: GlobalRing>(ring: &R, p: &ProjPoint<R::Elem>) -> bool {
    ring.is_zero(&p.y)
}

/// The affine coordinate `x/y`, or `None` at infinity.
pub fn affine_value<R: GlobalRing>(ring: &R, p: &ProjPoint<R::Elem>) -> Option<Frac<R::Elem>> {
    (!ring.is_zero(&p.y)).then(|| FractionField::new(ring.clone()).make(p.x.clone(), p.y.clone()))
}

/// Maximum of the heights of the coordinates.
pub fn point_height<R: GlobalRing>(ring: &R, p: &ProjPoint<R::Elem>) -> num_bigint::BigUint {
    ring.height(&p.x).max(ring.height(&p.y))
}

pub fn format_point<R: GlobalRing>(ring: &R, p: &ProjPoint<R::Elem>) -> String {
    format!("[{} : {}]", ring.format(&p.x), ring.format(&p.y))
}

/// Short form of a point: `inf`, or its affine value such as `-1/2`.
pub fn format_point_affine<R: GlobalRing>(ring: &R, p: &ProjPoint<R::Elem>) -> String {
    match affine_value(ring, p) {
        None => "inf".to_string(),
        Some(z) => FractionField::new(ring.clone()).format(&z),
    }
}

/// The logarithmic distance `delta_p(P1, P2)`. Equal points are at infinite
/// distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogDistance {
    Finite(u64),
    Infinite,
}

impl LogDistance {
    pub fn is_positive(&self) -> bool {
        !matches!(self, LogDistance::Finite(0))
    }
}

impl fmt::Display for LogDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogDistance::Finite(n) => write!(f, "{n}"),
            LogDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// `min(v(x), v(y))` over the nonzero coordinates.
fn min_valuation<R: GlobalRing>(
    ring: &R,
    coords: &[&R::Elem],
    place: &Place<R::Elem>,
) -> Result<i64> {
    let mut best: Option<i64> = None;
    for c in coords.iter().filter(|c| !ring.is_zero(c)) {
        let v = integral_valuation(ring, c, place)?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    best.ok_or_else(|| Error::Domain("all coordinates vanish".into()))
}

/// `delta_p(P1, P2) = v(x1*y2 - x2*y1) - min(v(x1), v(y1)) - min(v(x2), v(y2))`.
///
/// The correction terms vanish at finite places for coprime coordinates but
/// not at the infinite place of `Fp(t)`, so the full formula is evaluated.
pub fn log_distance<R: GlobalRing>(
    ring: &R,
    p1: &ProjPoint<R::Elem>,
    p2: &ProjPoint<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<LogDistance> {
    if place.is_infinite() && ring.infinity_is_archimedean() {
        return Err(Error::UnsupportedPlace(
            "logarithmic distance needs a non-archimedean place".into(),
        ));
    }
    let det = ring.sub(&ring.mul(&p1.x, &p2.y), &ring.mul(&p2.x, &p1.y));
    if ring.is_zero(&det) {
        return Ok(LogDistance::Infinite);
    }
    let v = integral_valuation(ring, &det, place)?
        - min_valuation(ring, &[&p1.x, &p1.y], place)?
        - min_valuation(ring, &[&p2.x, &p2.y], place)?;
    debug_assert!(v >= 0);
    Ok(LogDistance::Finite(v as u64))
}

/// A point of `P^1(k)` over a finite residue field: `[a : 1]` or `[1 : 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub x: ResidueElem,
    pub y: ResidueElem,
}

impl ReducedPoint {
    pub const INFINITY: ReducedPoint = ReducedPoint { x: 1, y: 0 };

    pub fn affine(a: ResidueElem) -> Self {
        ReducedPoint { x: a, y: 1 }
    }

    /// Normalizes a nonzero pair; `None` for `(0, 0)`.
    pub fn from_pair(field: &ResidueField, x: ResidueElem, y: ResidueElem) -> Option<Self> {
        if y == 0 {
            return (x != 0).then_some(Self::INFINITY);
        }
        let yi = field.inv(y).unwrap();
        Some(ReducedPoint {
            x: field.mul(x, yi),
            y: 1,
        })
    }

    pub fn is_infinity(&self) -> bool {
        self.y == 0
    }

    /// Node index in `0..=q`: `a` for `[a : 1]`, `q` for infinity.
    pub fn index(&self, q: u64) -> usize {
        if self.is_infinity() {
            q as usize
        } else {
            self.x as usize
        }
    }

    pub fn from_index(idx: usize, q: u64) -> Self {
        if idx as u64 == q {
            Self::INFINITY
        } else {
            Self::affine(idx as u64)
        }
    }

    pub fn format(&self, field: &ResidueField) -> String {
        format!("[{} : {}]", field.format(self.x), field.format(self.y))
    }
}

/// Reduces a projective tuple of integral elements modulo a place after
/// rescaling it to be primitive at that place. At a finite prime `pi` the
/// tuple is divided by `pi^m` with `m` the minimal valuation; at the infinite
/// place of `Fp(t)` it is divided by `t^k` with `k` the maximal degree.
pub fn reduce_tuple<R: GlobalRing>(
    ring: &R,
    coords: &[R::Elem],
    place: &Place<R::Elem>,
    field: &ResidueField,
) -> Result<Vec<ResidueElem>> {
    match place {
        Place::Finite(pi) => {
            let refs: Vec<&R::Elem> = coords.iter().collect();
            let m = min_valuation(ring, &refs, place)?;
            let scale = ring.pow(pi, m as u64);
            Ok(coords
                .iter()
                .map(|c| {
                    let c = if m == 0 {
                        c.clone()
                    } else {
                        ring.exact_div(c, &scale).unwrap()
                    };
                    ring.reduce_finite(&c, field)
                })
                .collect())
        }
        Place::Infinite => {
            if ring.infinity_is_archimedean() {
                return Err(Error::UnsupportedPlace(
                    "cannot reduce at the archimedean place".into(),
                ));
            }
            let refs: Vec<&R::Elem> = coords.iter().collect();
            let k = -min_valuation(ring, &refs, place)?;
            Ok(coords
                .iter()
                .map(|c| ring.reduce_infinite(c, k as u64, field))
                .collect())
        }
    }
}

/// The reduction of `P` modulo `place` in `P^1(k(place))`.
pub fn reduce_point<R: GlobalRing>(
    ring: &R,
    p: &ProjPoint<R::Elem>,
    place: &Place<R::Elem>,
    field: &ResidueField,
) -> Result<ReducedPoint> {
    let r = reduce_tuple(ring, &[p.x.clone(), p.y.clone()], place, field)?;
    Ok(ReducedPoint::from_pair(field, r[0], r[1]).expect("primitive tuple reduces to a point"))
}

/// All `q + 1` points of `P^1(F_q)`: `[a : 1]` in element order, then `[1 : 0]`.
pub fn enumerate_p1(field: &ResidueField) -> Vec<ReducedPoint> {
    field
        .elements()
        .map(ReducedPoint::affine)
        .chain(std::iter::once(ReducedPoint::INFINITY))
        .collect()
}

/// Residue-field arithmetic helper: the affine field element of a reduced
/// point.
pub fn reduced_affine(p: &ReducedPoint) -> Option<ResidueElem> {
    (!p.is_infinity()).then_some(p.x)
}
