//! S-unit groups of `Q` and `Fp(t)`, bounded enumeration of their elements,
//! and brute-force solution of `a x + b y = 1` in S-units.

use std::collections::HashSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arith::{FieldOps, Frac, FractionField, GlobalRing, Place, PlaceSet};
use crate::bounds::{evertse_bound, unit_equation_bound};
use crate::error::{Error, Result};

/// Default limit on the number of enumerated S-units.
pub const DEFAULT_UNIT_BUDGET: u64 = 1 << 22;

/// Torsion part and free generators of the S-unit group.
#[derive(Debug, Clone)]
pub struct SUnitGroup<R: GlobalRing> {
    field: FractionField<R>,
    s: PlaceSet<R>,
    pub torsion: Vec<Frac<R::Elem>>,
    pub generators: Vec<Frac<R::Elem>>,
}

impl<R: GlobalRing> SUnitGroup<R> {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn places(&self) -> &PlaceSet<R> {
        &self.s
    }

    pub fn field(&self) -> &FractionField<R> {
        &self.field
    }

    /// Number of elements [`enumerate_s_units`] yields at this cap.
    pub fn enumeration_size(&self, cap: u32) -> BigUint {
        BigUint::from(2 * cap as u64 + 1).pow(self.rank() as u32) * self.torsion.len()
    }

    pub fn contains(&self, x: &Frac<R::Elem>) -> Result<bool> {
        if self.field.is_zero(x) {
            return Ok(false);
        }
        self.field.is_s_unit(x, &self.s)
    }
}

/// Over `Q`: torsion `{1, -1}` and the finite primes of `S`. Over `Fp(t)`,
/// where `S` must contain the infinite place: torsion `Fp*` and the monic
/// irreducibles of the finite places of `S`.
pub fn s_unit_generators<R: GlobalRing>(s: &PlaceSet<R>) -> Result<SUnitGroup<R>> {
    let ring = s.ring();
    if !ring.infinity_is_archimedean() && !s.contains(&Place::Infinite) {
        return Err(Error::Unsupported(
            "S-unit groups over Fp(t) are only built when S contains the infinite place".into(),
        ));
    }
    let field = FractionField::new(ring.clone());
    let torsion = ring
        .torsion_units()
        .into_iter()
        .map(|u| field.from_integral(u))
        .collect();
    let generators = s
        .finite_primes()
        .map(|p| field.from_integral(p.clone()))
        .collect();
    Ok(SUnitGroup {
        field,
        s: s.clone(),
        torsion,
        generators,
    })
}

/// Every `u * g_1^e_1 * ... * g_r^e_r` with `|e_i| <= cap`, ordered by the
/// exponent vector (lexicographically) and then by torsion element.
pub fn enumerate_s_units<R: GlobalRing>(
    group: &SUnitGroup<R>,
    cap: u32,
    max_count: u64,
) -> Result<Vec<Frac<R::Elem>>> {
    let size = group.enumeration_size(cap);
    if size > BigUint::from(max_count) {
        return Err(Error::Budget(format!(
            "{size} S-units at cap {cap} exceed the budget of {max_count}"
        )));
    }
    let k = &group.field;
    let cap = cap as i64;
    // powers[i][e + cap] = g_i^e
    let powers: Vec<Vec<Frac<R::Elem>>> = group
        .generators
        .iter()
        .map(|g| (-cap..=cap).map(|e| k.pow_i(g, e)).collect())
        .collect();
    let width = (2 * cap + 1) as usize;
    let rest: usize = width.pow(group.rank().saturating_sub(1) as u32);
    let expand = |lead: usize| -> Vec<Frac<R::Elem>> {
        let mut out = Vec::new();
        for idx in 0..rest {
            let mut x = if group.rank() == 0 {
                k.one()
            } else {
                powers[0][lead].clone()
            };
            let mut rem = idx;
            for i in (1..group.rank()).rev() {
                x = k.mul(&x, &powers[i][rem % width]);
                rem /= width;
            }
            out.extend(group.torsion.iter().map(|u| k.mul(u, &x)));
        }
        out
    };
    let leads = if group.rank() == 0 { 1 } else { width };
    Ok((0..leads)
        .into_par_iter()
        .map(expand)
        .collect::<Vec<_>>()
        .concat())
}

/// `a x + b y = 1` with `x, y` units for `S`, searched with exponents up to
/// `cap`.
#[derive(Debug, Clone)]
pub struct UnitEquation<R: GlobalRing> {
    pub a: Frac<R::Elem>,
    pub b: Frac<R::Elem>,
    pub s: PlaceSet<R>,
    pub cap: u32,
}

impl<R: GlobalRing> UnitEquation<R> {
    pub fn new(a: Frac<R::Elem>, b: Frac<R::Elem>, s: PlaceSet<R>, cap: u32) -> Result<Self> {
        let k = FractionField::new(s.ring().clone());
        if k.is_zero(&a) || k.is_zero(&b) {
            return Err(Error::Domain(
                "unit equation coefficients must be nonzero".into(),
            ));
        }
        if cap == 0 {
            return Err(Error::Domain("exponent cap must be at least 1".into()));
        }
        Ok(UnitEquation { a, b, s, cap })
    }

    /// Whether `(x, y)` solves the equation.
    pub fn is_solution(&self, x: &Frac<R::Elem>, y: &Frac<R::Elem>) -> bool {
        let k = FractionField::new(self.s.ring().clone());
        k.add(&k.mul(&self.a, x), &k.mul(&self.b, y)) == k.one()
    }
}

/// Solutions found within the cap, with the applicable count bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitEquationSolutions<E> {
    pub solutions: Vec<(Frac<E>, Frac<E>)>,
    pub searched: u64,
    pub s_trivial: bool,
    /// Upper bound on the number of solutions, when one applies.
    pub bound: Option<BigUint>,
}

impl<E> UnitEquationSolutions<E> {
    /// `false` only when a bound applies and more solutions were found.
    pub fn within_bound(&self) -> bool {
        self.bound
            .as_ref()
            .is_none_or(|b| BigUint::from(self.solutions.len()) <= *b)
    }
}

/// The bound on solution counts for `S`: `p^(2s-2)(p^(2s-2)+p-2)/(p-1)` in
/// positive characteristic (for equations that are not S-trivial) and
/// `2^(8(2s-1))` for `Q`.
pub fn solution_count_bound<R: GlobalRing>(s: &PlaceSet<R>, s_trivial: bool) -> Option<BigUint> {
    let n = s.len() as u64;
    match s.ring().characteristic() {
        0 => Some(evertse_bound(2 * n - 2)),
        _ if s_trivial => None,
        p => Some(unit_equation_bound(p, n)),
    }
}

/// All pairs of enumerated S-units solving the equation, ordered by `x` in
/// enumeration order.
pub fn solve_unit_equation<R: GlobalRing>(
    eq: &UnitEquation<R>,
    max_count: u64,
) -> Result<UnitEquationSolutions<R::Elem>> {
    let group = s_unit_generators(&eq.s)?;
    let units = enumerate_s_units(&group, eq.cap, max_count)?;
    let k = group.field();
    let members: HashSet<&Frac<R::Elem>> = units.iter().collect();
    let b_inv = k.inv(&eq.b).expect("b is nonzero");
    let solutions: Vec<_> = units
        .par_iter()
        .filter_map(|x| {
            let y = k.mul(&k.sub(&k.one(), &k.mul(&eq.a, x)), &b_inv);
            (!k.is_zero(&y) && members.contains(&y)).then(|| (x.clone(), y))
        })
        .collect();
    debug_assert!(solutions.iter().all(|(x, y)| eq.is_solution(x, y)));
    let s_trivial = is_s_trivial(&eq.a, &eq.b, &eq.s)?;
    Ok(UnitEquationSolutions {
        solutions,
        searched: units.len() as u64,
        s_trivial,
        bound: solution_count_bound(&eq.s, s_trivial),
    })
}

/// Over the base field a power `a^n` is an S-unit exactly when `a` is, so
/// the equation is S-trivial iff both coefficients are S-units.
pub fn is_s_trivial<R: GlobalRing>(
    a: &Frac<R::Elem>,
    b: &Frac<R::Elem>,
    s: &PlaceSet<R>,
) -> Result<bool> {
    let k = FractionField::new(s.ring().clone());
    Ok(k.is_s_unit(a, s)? && k.is_s_unit(b, s)?)
}
