use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{GlobalRing, Place};
use crate::error::{Error, Result};
use crate::projective::{reduce_point, ProjPoint};
use crate::ratmap::{apply, reduce_map, RationalMap};

/// Multiplicative order of a reduced multiplier, infinite when it is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReducedOrder {
    Finite(u64),
    Infinite,
}

/// Period `m` of the reduced point and order `r` of its reduced multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodData {
    pub m: usize,
    pub r: ReducedOrder,
}

/// How the period `n` over `K` relates to `(m, r)` and the residue
/// characteristic `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MstVerdict {
    /// `n = m`
    CaseI,
    /// `n = m r`
    CaseII,
    /// `n = p^e m r` with `e >= 1`
    CaseIII {
        e: u32,
    },
    Violation,
}

/// Least `n >= 1` with `phi^n(P) = P`, or `None` if none up to `max`.
pub fn minimal_period<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    max: usize,
) -> Option<usize> {
    let mut q = apply(ring, map, p);
    for n in 1..=max {
        if &q == p {
            return Some(n);
        }
        q = apply(ring, map, &q);
    }
    None
}

/// `(m, r)` for the reduction of `P` at a place of good reduction. A
/// strictly preperiodic reduction is followed into its cycle first.
pub fn reduced_period_data<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<PeriodData> {
    let red = reduce_map(ring, map, place)?;
    let mut cur = reduce_point(ring, p, place, &red.field)?;
    let mut seen = HashMap::new();
    let mut step = 0usize;
    let m = loop {
        if let Some(&first) = seen.get(&cur) {
            break step - first;
        }
        seen.insert(cur, step);
        cur = red.apply(&cur);
        step += 1;
    };
    // cur has been seen before, so it lies on the cycle
    let lambda = red.multiplier(&cur, m)?;
    let r = match red.field.multiplicative_order(lambda) {
        Some(r) => ReducedOrder::Finite(r),
        None => ReducedOrder::Infinite,
    };
    Ok(PeriodData { m, r })
}

/// Decides which of `n = m`, `n = m r`, `n = p^e m r` holds for a point of
/// exact period `n` at a place of good reduction.
pub fn check_mst<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    n: usize,
    place: &Place<R::Elem>,
) -> Result<MstVerdict> {
    if minimal_period(ring, map, p, n) != Some(n) {
        return Err(Error::Precondition(format!(
            "{n} is not the minimal period of the point"
        )));
    }
    let data = reduced_period_data(ring, map, p, place)?;
    let char_p = ring.residue_field(place)?.characteristic() as usize;
    Ok(classify_periods(n, data, char_p))
}

fn classify_periods(n: usize, data: PeriodData, char_p: usize) -> MstVerdict {
    if n == data.m {
        return MstVerdict::CaseI;
    }
    let ReducedOrder::Finite(r) = data.r else {
        return MstVerdict::Violation;
    };
    let mr = data.m * r as usize;
    if n == mr {
        return MstVerdict::CaseII;
    }
    if !n.is_multiple_of(mr) {
        return MstVerdict::Violation;
    }
    let mut k = n / mr;
    let mut e = 0;
    while k.is_multiple_of(char_p) {
        k /= char_p;
        e += 1;
    }
    if k == 1 && e >= 1 {
        MstVerdict::CaseIII { e }
    } else {
        MstVerdict::Violation
    }
}
