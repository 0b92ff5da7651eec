//! Checkers for the divisibility and reduction properties of orbits at
//! places of good reduction. Each returns the first violation it finds.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use crate::arith::{FieldOps, FractionField, GlobalRing, Place};
use crate::dynamics::OrbitReport;
use crate::error::Result;
use crate::projective::{log_distance, reduce_point, LogDistance, ProjPoint};
use crate::ratmap::{apply, multiplier, reduce_map, PointKind, RationalMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

pub type Check = std::result::Result<(), Violation>;

fn fail(property: &'static str, detail: String) -> Check {
    Err(Violation { property, detail })
}

fn dist<R: GlobalRing>(
    ring: &R,
    a: &ProjPoint<R::Elem>,
    b: &ProjPoint<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<LogDistance> {
    log_distance(ring, a, b, place)
}

/// `delta(P1, P3) >= min(delta(P1, P2), delta(P2, P3))`.
pub fn check_triangle<R: GlobalRing>(
    ring: &R,
    pts: [&ProjPoint<R::Elem>; 3],
    place: &Place<R::Elem>,
) -> Result<Check> {
    let d13 = dist(ring, pts[0], pts[2], place)?;
    let d12 = dist(ring, pts[0], pts[1], place)?;
    let d23 = dist(ring, pts[1], pts[2], place)?;
    Ok(if d13 >= d12.min(d23) {
        Ok(())
    } else {
        fail("triangle", format!("{d13} < min({d12}, {d23})"))
    })
}

/// `delta(phi(P), phi(Q)) >= delta(P, Q)` at a place of good reduction.
pub fn check_non_expansion<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    q: &ProjPoint<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<Check> {
    let before = dist(ring, p, q, place)?;
    let after = dist(ring, &apply(ring, map, p), &apply(ring, map, q), place)?;
    Ok(if after >= before {
        Ok(())
    } else {
        fail("non-expansion", format!("{after} < {before}"))
    })
}

/// Shift invariance along a cycle: `delta(P_i, P_j) = delta(P_{i+k}, P_{j+k})`.
pub fn check_cycle_shift<R: GlobalRing>(
    ring: &R,
    cycle: &[ProjPoint<R::Elem>],
    place: &Place<R::Elem>,
) -> Result<Check> {
    let n = cycle.len();
    let table = distance_table(ring, cycle, place)?;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b) = (table[i][j], table[(i + k) % n][(j + k) % n]);
                if a != b {
                    return Ok(fail(
                        "cycle shift",
                        format!("delta(P{i}, P{j}) = {a} but shifted by {k} gives {b}"),
                    ));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// `delta(P_i, P_j) = delta(P_1, P_0)` whenever `gcd(i - j, n) = 1`.
pub fn check_cycle_coprime<R: GlobalRing>(
    ring: &R,
    cycle: &[ProjPoint<R::Elem>],
    place: &Place<R::Elem>,
) -> Result<Check> {
    let n = cycle.len();
    let table = distance_table(ring, cycle, place)?;
    let base = table[1 % n][0];
    for i in 0..n {
        for j in 0..n {
            let diff = (i as i64 - j as i64).rem_euclid(n as i64) as usize;
            if diff.gcd(&n) == 1 && table[i][j] != base {
                return Ok(fail(
                    "cycle coprime",
                    format!(
                        "delta(P{i}, P{j}) = {} != delta(P1, P0) = {base}",
                        table[i][j]
                    ),
                ));
            }
        }
    }
    Ok(Ok(()))
}

fn distance_table<R: GlobalRing>(
    ring: &R,
    pts: &[ProjPoint<R::Elem>],
    place: &Place<R::Elem>,
) -> Result<Vec<Vec<LogDistance>>> {
    pts.iter()
        .map(|a| pts.iter().map(|b| dist(ring, a, b, place)).collect())
        .collect()
}

/// Distances along a tail leading into a fixed point. With `psi = phi^n`,
/// each `psi`-chain `Q_{-K}, ..., Q_0` through the tail ends at a fixed point
/// `Q_0` of `psi`, and for `0 < a < b <= K`:
/// `delta(Q_{-b}, Q_{-a}) = delta(Q_{-b}, Q_0) <= delta(Q_{-a}, Q_0)`.
pub fn check_tail_distances<R: GlobalRing>(
    ring: &R,
    report: &OrbitReport<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<Check> {
    let (m, n) = (report.m(), report.n());
    for start in 0..m.min(n) {
        let mut chain: Vec<usize> = (0..)
            .map(|k| start + k * n)
            .take_while(|&j| j < m)
            .collect();
        chain.push(start + chain.len() * n);
        let q = |back: usize| report.point(chain[chain.len() - 1 - back]);
        let k_max = chain.len() - 1;
        for b in 2..=k_max {
            for a in 1..b {
                let dba = dist(ring, q(b), q(a), place)?;
                let db0 = dist(ring, q(b), q(0), place)?;
                let da0 = dist(ring, q(a), q(0), place)?;
                if dba != db0 || db0 > da0 {
                    return Ok(fail(
                        "tail distances",
                        format!("chain from step {start}, a = {a}, b = {b}: {dba}, {db0}, {da0}"),
                    ));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// For a cycle of length `p^e`: `delta(P_0, P_{p^k}) = delta(P_0, P_{p^k u})`
/// for `p` not dividing `u` and `u < p^(e-k)`.
pub fn check_prime_power_cycle<R: GlobalRing>(
    ring: &R,
    cycle: &[ProjPoint<R::Elem>],
    p: usize,
    place: &Place<R::Elem>,
) -> Result<Check> {
    let n = cycle.len();
    if p < 2 {
        return Ok(Ok(()));
    }
    let mut e = 0;
    let mut pe = 1;
    while pe < n {
        pe *= p;
        e += 1;
    }
    if pe != n {
        return Ok(Ok(()));
    }
    let mut pk = 1;
    for k in 0..e {
        let lhs = dist(ring, &cycle[0], &cycle[pk % n], place)?;
        let limit = n / pk;
        for u in (1..limit).filter(|u| u % p != 0) {
            let rhs = dist(ring, &cycle[0], &cycle[(pk * u) % n], place)?;
            if lhs != rhs {
                return Ok(fail(
                    "prime power cycle",
                    format!("k = {k}, u = {u}: {lhs} != {rhs}"),
                ));
            }
        }
        pk *= p;
    }
    Ok(Ok(()))
}

/// Classifies the cycle of a report by its multiplier at `place`.
pub fn cycle_kind<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    report: &OrbitReport<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<PointKind> {
    let lambda = multiplier(ring, map, &report.cycle[0], report.n())?.value;
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

/// Periodic points are never repelling at a good place; attracting cycles
/// reduce injectively; tails into indifferent cycles reduce injectively.
pub fn check_reduction_injectivity<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    report: &OrbitReport<R::Elem>,
    place: &Place<R::Elem>,
) -> Result<Check> {
    let kind = cycle_kind(ring, map, report, place)?;
    let field = reduce_map(ring, map, place)?.field;
    let injective = |pts: &[ProjPoint<R::Elem>]| -> Result<bool> {
        let mut seen = HashSet::new();
        for p in pts {
            if !seen.insert(reduce_point(ring, p, place, &field)?) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(match kind {
        PointKind::Repelling => fail(
            "never repelling",
            format!("cycle of length {} is repelling", report.n()),
        ),
        PointKind::Attracting if !injective(&report.cycle)? => fail(
            "attracting cycle reduction",
            "two cycle points share a reduction".into(),
        ),
        PointKind::Indifferent if !injective(&report.tail)? => fail(
            "indifferent tail reduction",
            "two tail points share a reduction".into(),
        ),
        _ => Ok(()),
    })
}

/// Every orbit-level property at every listed place.
pub fn check_orbit_properties<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    report: &OrbitReport<R::Elem>,
    places: &[Place<R::Elem>],
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let char_p = ring.characteristic() as usize;
    for place in places {
        let checks = [
            check_cycle_shift(ring, &report.cycle, place)?,
            check_cycle_coprime(ring, &report.cycle, place)?,
            check_tail_distances(ring, report, place)?,
            check_prime_power_cycle(ring, &report.cycle, char_p, place)?,
            check_reduction_injectivity(ring, map, report, place)?,
        ];
        out.extend(checks.into_iter().filter_map(|c| c.err()));
    }
    Ok(out)
}
