//! Rational maps `[F(X,Y) : G(X,Y)]` of the projective line, their
//! resultants, places of bad reduction, reductions, and multipliers.

mod multiplier;
pub mod parse;

use serde::{Deserialize, Serialize};

use crate::arith::{
    field::integral_valuation, FactorBudget, FieldOps, GlobalRing, Place, ResidueElem, ResidueField,
};
use crate::error::{Error, Result};
use crate::projective::{normalize_integral, reduce_tuple, ProjPoint, ReducedPoint};

pub use multiplier::{
    chart_derivative, classify_periodic_point, cycle_multiplier, multiplier, Chart,
    MultiplierValue, PointKind,
};
pub use parse::{parse_field_element, parse_map, parse_point};

/// A rational map of degree `d >= 1` given by homogeneous forms with integral
/// coefficients. `f[i]` and `g[i]` are the coefficients of `X^i Y^(d-i)`.
///
/// The model is primitive (coefficient gcd one) and canonically scaled: the
/// first nonzero coefficient of `f[d], ..., f[0], g[d], ..., g[0]` is positive
/// or one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalMap<E> {
    f: Vec<E>,
    g: Vec<E>,
}

impl<E: Clone> RationalMap<E> {
    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn f(&self) -> &[E] {
        &self.f
    }

    pub fn g(&self) -> &[E] {
        &self.g
    }

    /// All `2(d + 1)` coefficients, `f` first.
    pub fn coefficients(&self) -> Vec<E> {
        self.f.iter().chain(&self.g).cloned().collect()
    }
}

impl<E: Clone + PartialEq> RationalMap<E> {
    /// Builds the primitive model of `[F : G]`, rejecting pairs that share a
    /// common factor or have mismatched degree.
    pub fn new<R: GlobalRing<Elem = E>>(ring: &R, f: Vec<E>, g: Vec<E>) -> Result<Self> {
        if f.len() != g.len() || f.len() < 2 {
            return Err(Error::DegenerateMap(
                "F and G must be forms of the same degree >= 1".into(),
            ));
        }
        let all: Vec<&E> = f.iter().chain(&g).collect();
        let content = all.iter().fold(ring.zero(), |acc, c| ring.gcd(&acc, c));
        if ring.is_zero(&content) {
            return Err(Error::DegenerateMap("both forms vanish".into()));
        }
        let lead = f
            .iter()
            .rev()
            .chain(g.iter().rev())
            .find(|c| !ring.is_zero(c))
            .unwrap();
        let unit = ring.unit_part(lead);
        let scale_div = ring.mul(&content, &unit);
        let norm = |v: Vec<E>| -> Vec<E> {
            v.iter()
                .map(|c| ring.exact_div(c, &scale_div).expect("content divides"))
                .collect()
        };
        let map = RationalMap {
            f: norm(f),
            g: norm(g),
        };
        if ring.is_zero(&resultant(ring, &map)) {
            return Err(Error::DegenerateMap(
                "F and G have a common factor (resultant vanishes)".into(),
            ));
        }
        Ok(map)
    }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn bareiss_determinant<R: GlobalRing>(ring: &R, mut m: Vec<Vec<R::Elem>>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    let mut sign_flip = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !ring.is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(&ring.mul(&m[i][j], &m[k][k]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = ring
                    .exact_div(&num, &prev)
                    .expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        ring.neg(&det)
    } else {
        det
    }
}

/// The `2d x 2d` Sylvester matrix of the forms, coefficients in descending
/// powers of `X`.
pub fn sylvester_matrix<T: Clone>(f: &[T], g: &[T], zero: T) -> Vec<Vec<T>> {
    let d = f.len() - 1;
    let n = 2 * d;
    let mut m = vec![vec![zero; n]; n];
    for row in 0..d {
        for (j, c) in f.iter().rev().enumerate() {
            m[row][row + j] = c.clone();
        }
        for (j, c) in g.iter().rev().enumerate() {
            m[d + row][row + j] = c.clone();
        }
    }
    m
}

/// `Res(F, G)` as the Sylvester determinant over the ring of integers.
pub fn resultant<R: GlobalRing>(ring: &R, map: &RationalMap<R::Elem>) -> R::Elem {
    bareiss_determinant(ring, sylvester_matrix(&map.f, &map.g, ring.zero()))
}

/// Determinant over a field by Gaussian elimination.
pub fn field_determinant<Fd: FieldOps>(field: &Fd, mut m: Vec<Vec<Fd::Elem>>) -> Fd::Elem {
    let n = m.len();
    let mut det = field.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !field.is_zero(&m[i][k])) else {
            return field.zero();
        };
        if piv != k {
            m.swap(k, piv);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[k][k]);
        let inv = field.inv(&m[k][k]).unwrap();
        for i in k + 1..n {
            let factor = field.mul(&m[i][k], &inv);
            if field.is_zero(&factor) {
                continue;
            }
            for j in k..n {
                let sub = field.mul(&factor, &m[k][j]);
                m[i][j] = field.sub(&m[i][j], &sub);
            }
        }
    }
    det
}

/// `v_place(Res)` for the model rescaled to be primitive at `place`. A common
/// scalar `lambda` multiplies the resultant by `lambda^(2d)`, so this is
/// `v(Res) - 2d * min v(coefficients)`.
pub fn local_resultant_valuation<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<i64> {
    let res = resultant(ring, map);
    let min_v = map
        .f
        .iter()
        .chain(&map.g)
        .filter(|c| !ring.is_zero(c))
        .map(|c| integral_valuation(ring, c, place))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap();
    Ok(integral_valuation(ring, &res, place)? - 2 * map.degree() as i64 * min_v)
}

pub fn has_good_reduction<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<bool> {
    Ok(local_resultant_valuation(ring, map, place)? == 0)
}

/// Non-archimedean places of bad reduction: the primes dividing the
/// resultant of the primitive model, plus the infinite place of `Fp(t)` when
/// the locally primitive model there has a resultant of positive valuation.
pub fn bad_places<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    budget: &FactorBudget,
) -> Result<Vec<Place<R::Elem>>> {
    let res = resultant(ring, map);
    let mut out: Vec<Place<R::Elem>> = ring
        .factor(&res, budget)?
        .into_iter()
        .map(|(p, _)| Place::Finite(p))
        .collect();
    if !ring.infinity_is_archimedean() && !has_good_reduction(ring, map, &Place::Infinite)? {
        out.push(Place::Infinite);
    }
    Ok(out)
}

/// Evaluates the form with coefficients `c` (of `X^i Y^(d-i)`) at `(x, y)`.
pub fn eval_form<R: GlobalRing>(ring: &R, c: &[R::Elem], x: &R::Elem, y: &R::Elem) -> R::Elem {
    // Homogeneous Horner: sum c_i x^i y^(d-i)
    let d = c.len() - 1;
    let mut acc = c[d].clone();
    let mut ypow = ring.one();
    for i in (0..d).rev() {
        ypow = ring.mul(&ypow, y);
        acc = ring.mul(&acc, x);
        if !ring.is_zero(&c[i]) {
            acc = ring.add(&acc, &ring.mul(&c[i], &ypow));
        }
    }
    acc
}

/// `phi(P)` in canonical coordinates.
pub fn apply<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
) -> ProjPoint<R::Elem> {
    let fx = eval_form(ring, &map.f, &p.x, &p.y);
    let gx = eval_form(ring, &map.g, &p.x, &p.y);
    normalize_integral(ring, &fx, &gx).expect("coprime forms never vanish together")
}

/// `phi^n(P)`.
pub fn iterate<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    n: usize,
) -> ProjPoint<R::Elem> {
    (0..n).fold(p.clone(), |q, _| apply(ring, map, &q))
}

/// The reduction of a map at a place of good reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMap<E> {
    pub field: ResidueField,
    pub place: Place<E>,
    pub f: Vec<ResidueElem>,
    pub g: Vec<ResidueElem>,
}

impl<E> ReducedMap<E> {
    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn eval_form(&self, c: &[ResidueElem], x: ResidueElem, y: ResidueElem) -> ResidueElem {
        let k = &self.field;
        let d = c.len() - 1;
        let mut acc = c[d];
        let mut ypow = 1;
        for i in (0..d).rev() {
            ypow = k.mul(ypow, y);
            acc = k.add(k.mul(acc, x), k.mul(c[i], ypow));
        }
        acc
    }

    pub fn apply(&self, p: &ReducedPoint) -> ReducedPoint {
        let fx = self.eval_form(&self.f, p.x, p.y);
        let gx = self.eval_form(&self.g, p.x, p.y);
        ReducedPoint::from_pair(&self.field, fx, gx).expect("good reduction keeps forms coprime")
    }

    /// Resultant of the reduced forms over the residue field.
    pub fn resultant(&self) -> ResidueElem {
        field_determinant(&self.field, sylvester_matrix(&self.f, &self.g, 0))
    }

    pub fn format_affine(&self) -> String {
        let k = &self.field;
        let fmt = |c: &[ResidueElem]| {
            let terms: Vec<String> = c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| {
                    let coef = k.format(a);
                    let coef = if coef.contains(' ') {
                        format!("({coef})")
                    } else {
                        coef
                    };
                    match (i, a) {
                        (0, _) => coef,
                        (1, 1) => "z".into(),
                        (1, _) => format!("{coef}*z"),
                        (_, 1) => format!("z^{i}"),
                        _ => format!("{coef}*z^{i}"),
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let (n, d) = (fmt(&self.f), fmt(&self.g));
        if d == "1" {
            n
        } else {
            format!("({n})/({d})")
        }
    }
}

/// Reduces the coefficients of a map modulo a place of good reduction.
pub fn reduce_map<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<ReducedMap<R::Elem>> {
    if !has_good_reduction(ring, map, place)? {
        return Err(Error::Precondition(format!(
            "map has bad reduction at {}",
            ring.format_place(place)
        )));
    }
    let field = ring.residue_field(place)?;
    let coeffs = reduce_tuple(ring, &map.coefficients(), place, &field)?;
    let d = map.degree();
    let reduced = ReducedMap {
        f: coeffs[..=d].to_vec(),
        g: coeffs[d + 1..].to_vec(),
        field,
        place: place.clone(),
    };
    debug_assert_ne!(reduced.resultant(), 0);
    Ok(reduced)
}

/// Canonical affine string `N(z)` or `(N(z))/(D(z))`.
pub fn format_affine<R: GlobalRing>(ring: &R, map: &RationalMap<R::Elem>) -> String {
    let fmt = |c: &[R::Elem]| -> String {
        let mut out = String::new();
        for (i, a) in c.iter().enumerate().rev().filter(|(_, a)| !ring.is_zero(a)) {
            let s = ring.format(a);
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if ring.characteristic() == 0 => (true, rest.to_string()),
                _ => (false, s),
            };
            let body = if body.contains(' ') {
                format!("({body})")
            } else {
                body
            };
            let mono = match i {
                0 => body,
                _ => {
                    let zpow = if i == 1 {
                        "z".to_string()
                    } else {
                        format!("z^{i}")
                    };
                    if body == "1" {
                        zpow
                    } else {
                        format!("{body}*{zpow}")
                    }
                }
            };
            if out.is_empty() {
                out = if neg { format!("-{mono}") } else { mono };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&mono);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    };
    let n = fmt(&map.f);
    let d = fmt(&map.g);
    if d == "1" {
        n
    } else {
        format!("({n})/({d})")
    }
}

/// JSON form of a map: canonical affine string and coefficient arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub affine: String,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<String>,
    #[serde(with = "crate::json::decimal")]
    pub degree: usize,
}

pub fn map_json<R: GlobalRing>(ring: &R, map: &RationalMap<R::Elem>) -> MapJson {
    MapJson {
        affine: format_affine(ring, map),
        f: map.f.iter().map(|c| ring.format(c)).collect(),
        g: map.g.iter().map(|c| ring.format(c)).collect(),
        degree: map.degree(),
    }
}
