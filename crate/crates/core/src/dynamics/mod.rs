//! Orbits of rational points, exhaustive dynamics over residue fields, and
//! the period relations between a cycle and its reduction.

mod escape;
mod graph;
mod period;
pub mod properties;

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::GlobalRing;
use crate::error::{Error, Result};
use crate::projective::{
    format_point_affine, infinity, normalize_integral, point_height, ProjPoint,
};
use crate::ratmap::{apply, RationalMap};

pub use escape::{escape_bound, EscapeBound};
pub use graph::{functional_graph, FunctionalGraph, DEFAULT_NODE_BUDGET};
pub use period::{
    check_mst, minimal_period, reduced_period_data, MstVerdict, PeriodData, ReducedOrder,
};

/// Limits for a single orbit computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitBudget {
    pub max_steps: usize,
    /// Largest allowed coordinate height: absolute value over `Q`, degree
    /// over `Fp(t)`.
    pub height_cap: BigUint,
}

impl OrbitBudget {
    pub const DEFAULT_MAX_STEPS: usize = 2000;

    pub fn for_ring<R: GlobalRing>(ring: &R) -> Self {
        OrbitBudget {
            max_steps: Self::DEFAULT_MAX_STEPS,
            height_cap: ring.default_height_cap(),
        }
    }
}

/// A finite forward orbit split into its strictly preperiodic tail and its
/// cycle. `tail[0]` is the start point unless the start is periodic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitReport<E> {
    pub start: ProjPoint<E>,
    pub tail: Vec<ProjPoint<E>>,
    pub cycle: Vec<ProjPoint<E>>,
}

impl<E: Clone + Eq + std::hash::Hash> OrbitReport<E> {
    /// Tail length.
    pub fn m(&self) -> usize {
        self.tail.len()
    }

    /// Minimal period of the cycle.
    pub fn n(&self) -> usize {
        self.cycle.len()
    }

    /// `|O(P)| = m + n`.
    pub fn total(&self) -> usize {
        self.m() + self.n()
    }

    /// Point `phi^j(start)`.
    pub fn point(&self, j: usize) -> &ProjPoint<E> {
        if j < self.m() {
            &self.tail[j]
        } else {
            &self.cycle[(j - self.m()) % self.n()]
        }
    }

    /// All points of the orbit, tail first.
    pub fn points(&self) -> impl Iterator<Item = &ProjPoint<E>> {
        self.tail.iter().chain(&self.cycle)
    }

    /// Re-checks the report against the map: successor relations, cycle
    /// closure, minimality of the period, and disjointness of the points.
    pub fn validate<R: GlobalRing<Elem = E>>(
        &self,
        ring: &R,
        map: &RationalMap<E>,
    ) -> Result<(), String> {
        if self.cycle.is_empty() {
            return Err("empty cycle".into());
        }
        let first = self.tail.first().unwrap_or(&self.cycle[0]);
        if first != &self.start {
            return Err("orbit does not begin at the start point".into());
        }
        let seq: Vec<&ProjPoint<E>> = self.points().collect();
        for w in seq.windows(2) {
            if &apply(ring, map, w[0]) != w[1] {
                return Err(format!(
                    "successor of {} is wrong",
                    format_point_affine(ring, w[0])
                ));
            }
        }
        if apply(ring, map, self.cycle.last().unwrap()) != self.cycle[0] {
            return Err("cycle does not close".into());
        }
        let n = self.n();
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            let mut q = self.cycle[0].clone();
            for _ in 0..d {
                q = apply(ring, map, &q);
            }
            if q == self.cycle[0] {
                return Err(format!("period {n} is not minimal: {d} also returns"));
            }
        }
        let distinct: HashSet<&ProjPoint<E>> = seq.iter().copied().collect();
        if distinct.len() != seq.len() {
            return Err("orbit points repeat".into());
        }
        Ok(())
    }
}

/// Why an orbit computation stopped without deciding preperiodicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetStop {
    MaxSteps,
    HeightCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitOutcome<E> {
    Finite(OrbitReport<E>),
    /// The budget ran out. This is not a claim that the point is wandering.
    ExceededBudget {
        steps: usize,
        stop: BudgetStop,
    },
    /// The orbit passed the escape threshold after `steps` steps, so it is
    /// infinite.
    Wandering {
        steps: usize,
    },
}

impl<E> OrbitOutcome<E> {
    pub fn report(&self) -> Option<&OrbitReport<E>> {
        match self {
            OrbitOutcome::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn into_report(self) -> Option<OrbitReport<E>> {
        match self {
            OrbitOutcome::Finite(r) => Some(r),
            _ => None,
        }
    }
}

/// Iterates `phi` from `p`, recording visited points until one repeats.
pub fn orbit<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    budget: &OrbitBudget,
) -> OrbitOutcome<R::Elem> {
    orbit_with_escape(ring, map, p, budget, None)
}

/// [`orbit`], additionally stopping with [`OrbitOutcome::Wandering`] once a
/// point exceeds the escape threshold.
pub fn orbit_with_escape<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    p: &ProjPoint<R::Elem>,
    budget: &OrbitBudget,
    escape: Option<&EscapeBound>,
) -> OrbitOutcome<R::Elem> {
    let mut seen: HashMap<ProjPoint<R::Elem>, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut cur = p.clone();
    for step in 0..=budget.max_steps {
        let h = point_height(ring, &cur);
        if escape.is_some_and(|e| h > e.threshold) {
            return OrbitOutcome::Wandering { steps: step };
        }
        if h > budget.height_cap {
            return OrbitOutcome::ExceededBudget {
                steps: step,
                stop: BudgetStop::HeightCap,
            };
        }
        if let Some(&first) = seen.get(&cur) {
            let cycle = seq.split_off(first);
            return OrbitOutcome::Finite(OrbitReport {
                start: p.clone(),
                tail: seq,
                cycle,
            });
        }
        seen.insert(cur.clone(), seq.len());
        let next = apply(ring, map, &cur);
        seq.push(cur);
        cur = next;
    }
    OrbitOutcome::ExceededBudget {
        steps: budget.max_steps,
        stop: BudgetStop::MaxSteps,
    }
}

/// Default limit on the number of points enumerated by a search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 22;

/// All points of `P^1(K)` with coordinate height at most `bound`, ordered by
/// height and then by coordinates.
pub fn points_up_to_height<R: GlobalRing>(
    ring: &R,
    bound: u64,
    max_points: u64,
) -> Result<Vec<ProjPoint<R::Elem>>> {
    let elems = ring.elements_up_to_height(bound, max_points)?;
    let pairs = (elems.len() as u64).saturating_mul(elems.len() as u64);
    if pairs > max_points.saturating_mul(8) {
        return Err(Error::Budget(format!(
            "{pairs} coordinate pairs of height <= {bound} exceed the search budget"
        )));
    }
    let mut pts: Vec<ProjPoint<R::Elem>> = elems
        .par_iter()
        .flat_map_iter(|y| {
            elems.iter().filter_map(move |x| {
                if ring.is_zero(y) {
                    return None;
                }
                let p = normalize_integral(ring, x, y).ok()?;
                (&p.x == x && &p.y == y).then_some(p)
            })
        })
        .collect();
    pts.push(infinity(ring));
    if pts.len() as u64 > max_points {
        return Err(Error::Budget(format!(
            "{} points of height <= {bound} exceed the search budget",
            pts.len()
        )));
    }
    let mut keyed: Vec<(BigUint, ProjPoint<R::Elem>)> = pts
        .into_iter()
        .map(|p| (point_height(ring, &p), p))
        .collect();
    keyed.par_sort_unstable();
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

/// Preperiodic points found among the points of bounded height, the number
/// proven wandering, and the points whose orbits exhausted the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult<E> {
    pub height_bound: u64,
    pub examined: usize,
    pub preperiodic: Vec<OrbitReport<E>>,
    pub wandering: usize,
    pub undecided: Vec<ProjPoint<E>>,
}

/// Runs [`orbit_with_escape`] on every point of height at most
/// `height_bound`.
pub fn preperiodic_search<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    height_bound: u64,
    budget: &OrbitBudget,
    max_points: u64,
) -> Result<SearchResult<R::Elem>> {
    if height_bound == 0 {
        return Err(Error::Precondition(
            "height bound must be at least 1".into(),
        ));
    }
    let pts = points_up_to_height(ring, height_bound, max_points)?;
    let escape = escape_bound(ring, map);
    let outcomes: Vec<OrbitOutcome<R::Elem>> = pts
        .par_iter()
        .map(|p| orbit_with_escape(ring, map, p, budget, escape.as_ref()))
        .collect();
    let mut preperiodic = Vec::new();
    let mut wandering = 0;
    let mut undecided = Vec::new();
    for (p, o) in pts.iter().zip(outcomes) {
        match o {
            OrbitOutcome::Finite(r) => preperiodic.push(r),
            OrbitOutcome::Wandering { .. } => wandering += 1,
            OrbitOutcome::ExceededBudget { .. } => undecided.push(p.clone()),
        }
    }
    Ok(SearchResult {
        height_bound,
        examined: pts.len(),
        preperiodic,
        wandering,
        undecided,
    })
}

/// JSON view of an orbit outcome with points in affine notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub start: String,
    pub tail: Vec<String>,
    pub cycle: Vec<String>,
    #[serde(with = "crate::json::decimal")]
    pub m: usize,
    #[serde(with = "crate::json::decimal")]
    pub n: usize,
    pub undecided: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub wandering: bool,
}

pub fn orbit_json<R: GlobalRing>(
    ring: &R,
    start: &ProjPoint<R::Elem>,
    outcome: &OrbitOutcome<R::Elem>,
) -> OrbitJson {
    let fmt = |v: &[ProjPoint<R::Elem>]| {
        v.iter()
            .map(|p| format_point_affine(ring, p))
            .collect::<Vec<_>>()
    };
    match outcome {
        OrbitOutcome::Finite(r) => OrbitJson {
            start: format_point_affine(ring, start),
            tail: fmt(&r.tail),
            cycle: fmt(&r.cycle),
            m: r.m(),
            n: r.n(),
            undecided: false,
            wandering: false,
        },
        OrbitOutcome::ExceededBudget { .. } | OrbitOutcome::Wandering { .. } => OrbitJson {
            start: format_point_affine(ring, start),
            tail: Vec::new(),
            cycle: Vec::new(),
            m: 0,
            n: 0,
            undecided: matches!(outcome, OrbitOutcome::ExceededBudget { .. }),
            wandering: matches!(outcome, OrbitOutcome::Wandering { .. }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FpPolyRing, Integers};
    use crate::ratmap::{parse_map, parse_point};
    use num_bigint::BigInt;

    fn pts(ring: &Integers, v: &[&str]) -> Vec<ProjPoint<BigInt>> {
        v.iter().map(|s| parse_point(ring, s).unwrap()).collect()
    }

    #[test]
    fn orbit_examples() {
        let z = Integers;
        let m = parse_map(&z, "z^2 - 1").unwrap();
        let b = OrbitBudget::for_ring(&z);
        let r = orbit(&z, &m, &parse_point(&z, "0").unwrap(), &b)
            .into_report()
            .unwrap();
        assert_eq!(
            (r.tail.clone(), r.cycle.clone()),
            (vec![], pts(&z, &["0", "-1"]))
        );
        assert_eq!((r.n(), r.total()), (2, 2));
        let r = orbit(&z, &m, &parse_point(&z, "1").unwrap(), &b)
            .into_report()
            .unwrap();
        assert_eq!(r.tail, pts(&z, &["1"]));
        assert_eq!(r.cycle, pts(&z, &["0", "-1"]));
        assert_eq!(r.total(), 3);
        r.validate(&z, &m).unwrap();

        let sq = parse_map(&z, "z^2").unwrap();
        let small = OrbitBudget {
            max_steps: 2000,
            height_cap: BigUint::from(1_000_000u32),
        };
        assert_eq!(
            orbit(&z, &sq, &parse_point(&z, "2").unwrap(), &small),
            OrbitOutcome::ExceededBudget {
                steps: 5,
                stop: BudgetStop::HeightCap
            }
        );
        let few = OrbitBudget {
            max_steps: 3,
            height_cap: z.default_height_cap(),
        };
        assert!(matches!(
            orbit(&z, &sq, &parse_point(&z, "2").unwrap(), &few),
            OrbitOutcome::ExceededBudget {
                stop: BudgetStop::MaxSteps,
                ..
            }
        ));
    }

    #[test]
    fn validate_rejects_tampered_reports() {
        let z = Integers;
        let m = parse_map(&z, "z^2 - 1").unwrap();
        let good = OrbitReport {
            start: pts(&z, &["1"])[0].clone(),
            tail: pts(&z, &["1"]),
            cycle: pts(&z, &["0", "-1"]),
        };
        good.validate(&z, &m).unwrap();
        let doubled = OrbitReport {
            cycle: pts(&z, &["0", "-1", "0", "-1"]),
            ..good.clone()
        };
        assert!(doubled.validate(&z, &m).is_err());
        let wrong = OrbitReport {
            tail: pts(&z, &["2"]),
            start: pts(&z, &["2"])[0].clone(),
            ..good
        };
        assert!(wrong.validate(&z, &m).is_err());
    }

    fn affine_set<R: GlobalRing>(ring: &R, res: &SearchResult<R::Elem>) -> Vec<String> {
        res.preperiodic
            .iter()
            .map(|r| format_point_affine(ring, &r.start))
            .collect()
    }

    #[test]
    fn search_examples() {
        let z = Integers;
        let b = OrbitBudget::for_ring(&z);
        let m = parse_map(&z, "z^2 - 1").unwrap();
        let res = preperiodic_search(&z, &m, 10, &b, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(affine_set(&z, &res), vec!["-1", "0", "inf", "1"]);
        assert!(res.undecided.is_empty());
        let sq = parse_map(&z, "z^2").unwrap();
        let res = preperiodic_search(&z, &sq, 10, &b, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(affine_set(&z, &res), vec!["-1", "0", "inf", "1"]);

        let r = FpPolyRing::new(2).unwrap();
        let m = parse_map(&r, "z^2 + 1").unwrap();
        let res = preperiodic_search(&r, &m, 2, &OrbitBudget::for_ring(&r), DEFAULT_SEARCH_BUDGET)
            .unwrap();
        let found = affine_set(&r, &res);
        for p in ["0", "1", "inf"] {
            assert!(found.contains(&p.to_string()), "{p} missing from {found:?}");
        }
        for rep in &res.preperiodic {
            rep.validate(&r, &m).unwrap();
        }
    }

    #[test]
    fn point_enumeration_order() {
        let z = Integers;
        let p = points_up_to_height(&z, 2, 1000).unwrap();
        let s: Vec<String> = p.iter().map(|q| format_point_affine(&z, q)).collect();
        assert_eq!(s, vec!["-1", "0", "inf", "1", "-2", "-1/2", "1/2", "2"]);
        assert!(points_up_to_height(&z, 100, 100).is_err());
    }

    #[test]
    fn orbit_json_shape() {
        let z = Integers;
        let m = parse_map(&z, "z^2 - 1").unwrap();
        let p = parse_point(&z, "1").unwrap();
        let o = orbit(&z, &m, &p, &OrbitBudget::for_ring(&z));
        let j = serde_json::to_value(orbit_json(&z, &p, &o)).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"start": "1", "tail": ["1"], "cycle": ["0", "-1"], "m": "1", "n": "2", "undecided": false})
        );
    }
}
