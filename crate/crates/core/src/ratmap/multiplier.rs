use serde::{Deserialize, Serialize};

use crate::arith::{FieldOps, Frac, FractionField, GlobalRing, Place, ResidueElem};
use crate::error::{Error, Result};
use crate::projective::{affine_value, reduced_affine, ProjPoint, ReducedPoint};
use crate::ratmap::{apply, has_good_reduction, RationalMap, ReducedMap};

/// Local coordinate around a point of the projective line: `z` where the
/// point is finite, `w = 1/z` at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chart<T> {
    Finite(T),
    Infinity,
}

/// Derivative at `src` of the map written in local coordinates, the target
/// coordinate being `w = 1/z` when the image is infinity.
pub fn chart_derivative<Fd: FieldOps>(
    field: &Fd,
    f: &[Fd::Elem],
    g: &[Fd::Elem],
    src: &Chart<Fd::Elem>,
    image_is_infinity: bool,
) -> Fd::Elem {
    let d = f.len() - 1;
    // Dehomogenize: A(s)/B(s) with s = z (Y = 1) or s = w (X = 1).
    let (mut a, mut b, s0): (Vec<Fd::Elem>, Vec<Fd::Elem>, Fd::Elem) = match src {
        Chart::Finite(z) => (f.to_vec(), g.to_vec(), z.clone()),
        Chart::Infinity => (
            (0..=d).map(|j| f[d - j].clone()).collect(),
            (0..=d).map(|j| g[d - j].clone()).collect(),
            field.zero(),
        ),
    };
    if image_is_infinity {
        std::mem::swap(&mut a, &mut b);
    }
    let (av, ad) = eval_with_derivative(field, &a, &s0);
    let (bv, bd) = eval_with_derivative(field, &b, &s0);
    let num = field.sub(&field.mul(&ad, &bv), &field.mul(&av, &bd));
    field
        .div(&num, &field.mul(&bv, &bv))
        .expect("denominator is nonzero in the target chart")
}

fn eval_with_derivative<Fd: FieldOps>(
    field: &Fd,
    c: &[Fd::Elem],
    s: &Fd::Elem,
) -> (Fd::Elem, Fd::Elem) {
    let mut val = field.zero();
    let mut der = field.zero();
    for coef in c.iter().rev() {
        der = field.add(&field.mul(&der, s), &val);
        val = field.add(&field.mul(&val, s), coef);
    }
    (val, der)
}

/// Product of chart derivatives along a cycle `P_0 -> P_1 -> ... -> P_0`.
pub fn cycle_multiplier<Fd: FieldOps>(
    field: &Fd,
    f: &[Fd::Elem],
    g: &[Fd::Elem],
    cycle: &[Chart<Fd::Elem>],
) -> Fd::Elem {
    let n = cycle.len();
    (0..n).fold(field.one(), |acc, i| {
        let next_inf = cycle[(i + 1) % n] == Chart::Infinity;
        field.mul(&acc, &chart_derivative(field, f, g, &cycle[i], next_inf))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierValue<E> {
    pub value: Frac<E>,
    pub period: usize,
    pub point: ProjPoint<E>,
}

/// The multiplier `(phi^n)'(P)` of an `n`-periodic point.
pub fn multiplier<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    n: usize,
) -> Result<MultiplierValue<R::Elem>> {
    if n == 0 {
        return Err(Error::Precondition("period must be at least 1".into()));
    }
    let mut cycle = Vec::with_capacity(n);
    let mut q = p.clone();
    for _ in 0..n {
        cycle.push(q.clone());
        q = apply(ring, map, &q);
    }
    if &q != p {
        return Err(Error::Precondition(format!(
            "point is not periodic with period {n}"
        )));
    }
    let k = FractionField::new(ring.clone());
    let lift = |c: &[R::Elem]| -> Vec<Frac<R::Elem>> {
        c.iter().map(|a| k.from_integral(a.clone())).collect()
    };
    let charts: Vec<_> = cycle
        .iter()
        .map(|pt| affine_value(ring, pt).map_or(Chart::Infinity, Chart::Finite))
        .collect();
    let value = cycle_multiplier(&k, &lift(map.f()), &lift(map.g()), &charts);
    Ok(MultiplierValue {
        value,
        period: n,
        point: p.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointKind {
    Attracting,
    Indifferent,
    Repelling,
}

/// Classifies an `n`-periodic point by the valuation of its multiplier at a
/// place of good reduction.
pub fn classify_periodic_point<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    n: usize,
    place: &Place<R::Elem>,
) -> Result<PointKind> {
    if !has_good_reduction(ring, map, place)? {
        return Err(Error::Precondition(format!(
            "map has bad reduction at {}",
            ring.format_place(place)
        )));
    }
    let lambda = multiplier(ring, map, p, n)?.value;
    let k = FractionField::new(ring.clone());
    if k.is_zero(&lambda) {
        return Ok(PointKind::Attracting);
    }
    Ok(match k.valuation(&lambda, place)? {
        v if v > 0 => PointKind::Attracting,
        0 => PointKind::Indifferent,
        _ => PointKind::Repelling,
    })
}

impl<E> ReducedMap<E> {
    /// Multiplier of an `n`-periodic point of the reduced map, in the
    /// residue field.
    pub fn multiplier(&self, p: &ReducedPoint, n: usize) -> Result<ResidueElem> {
        let mut cycle = Vec::with_capacity(n);
        let mut q = *p;
        for _ in 0..n {
            cycle.push(reduced_affine(&q).map_or(Chart::Infinity, Chart::Finite));
            q = self.apply(&q);
        }
        if n == 0 || q != *p {
            return Err(Error::Precondition(format!(
                "reduced point is not periodic with period {n}"
            )));
        }
        Ok(cycle_multiplier(&self.field, &self.f, &self.g, &cycle))
    }
}
