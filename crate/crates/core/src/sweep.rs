//! Preperiodic-point sweeps over families of maps, with every finite orbit
//! checked against the orbit and cycle bounds.

use serde::{Deserialize, Serialize};

use crate::arith::{GlobalRing, Integers, Place, PlaceSet};
use crate::bounds::{BoundCheck, ReportVerifier};
use crate::dynamics::{preperiodic_search, OrbitBudget, OrbitReport, DEFAULT_SEARCH_BUDGET};
use crate::error::{Error, Result};
use crate::json::decimal;
use crate::ratmap::RationalMap;

/// Per-map results of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSweep {
    pub map: String,
    #[serde(with = "decimal")]
    pub examined: usize,
    #[serde(with = "decimal")]
    pub preperiodic: usize,
    #[serde(with = "decimal")]
    pub wandering: usize,
    #[serde(with = "decimal")]
    pub undecided: usize,
    #[serde(with = "decimal")]
    pub max_cycle: usize,
    #[serde(with = "decimal")]
    pub max_orbit: usize,
    /// Bound checks that failed, with the starting point of the orbit.
    pub failures: Vec<(String, BoundCheck)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    #[serde(with = "decimal")]
    pub height: u64,
    pub maps: Vec<MapSweep>,
    #[serde(with = "decimal")]
    pub max_cycle: usize,
    #[serde(with = "decimal")]
    pub max_orbit: usize,
    #[serde(with = "decimal")]
    pub failures: usize,
    #[serde(with = "decimal")]
    pub undecided: usize,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A sweep of one map, keeping the finite orbits for further checks.
pub struct MapSearch<E> {
    pub stats: MapSweep,
    pub orbits: Vec<OrbitReport<E>>,
}

/// Searches one map at the given height and checks each finite orbit
/// against the bounds for `S`.
pub fn sweep_map<R: GlobalRing>(
    ring: &R,
    label: &str,
    map: &RationalMap<R::Elem>,
    s: &PlaceSet<R>,
    height: u64,
    budget: &OrbitBudget,
) -> Result<MapSearch<R::Elem>> {
    let verifier = ReportVerifier::new(ring, map, s)?;
    let found = preperiodic_search(ring, map, height, budget, DEFAULT_SEARCH_BUDGET)?;
    let mut stats = MapSweep {
        map: label.to_string(),
        examined: found.examined,
        preperiodic: found.preperiodic.len(),
        wandering: found.wandering,
        undecided: found.undecided.len(),
        max_cycle: 0,
        max_orbit: 0,
        failures: Vec::new(),
    };
    for rep in &found.preperiodic {
        stats.max_cycle = stats.max_cycle.max(rep.n());
        stats.max_orbit = stats.max_orbit.max(rep.total());
        let start = crate::projective::format_point_affine(ring, &rep.start);
        stats.failures.extend(
            verifier
                .verify(rep)
                .into_iter()
                .filter(|c| !c.pass)
                .map(|c| (start.clone(), c)),
        );
    }
    Ok(MapSearch {
        stats,
        orbits: found.preperiodic,
    })
}

/// Sweeps a list of maps.
pub fn sweep_family<R: GlobalRing>(
    ring: &R,
    maps: &[(String, RationalMap<R::Elem>)],
    s: &PlaceSet<R>,
    height: u64,
    budget: &OrbitBudget,
) -> Result<SweepSummary> {
    let mut summary = SweepSummary {
        height,
        maps: Vec::new(),
        max_cycle: 0,
        max_orbit: 0,
        failures: 0,
        undecided: 0,
    };
    for (label, map) in maps {
        let stats = sweep_map(ring, label, map, s, height, budget)?.stats;
        summary.max_cycle = summary.max_cycle.max(stats.max_cycle);
        summary.max_orbit = summary.max_orbit.max(stats.max_orbit);
        summary.failures += stats.failures.len();
        summary.undecided += stats.undecided;
        summary.maps.push(stats);
    }
    Ok(summary)
}

/// `z^2 + c`, whose resultant is 1 for every integer `c`.
pub fn quadratic(c: i64) -> RationalMap<num_bigint::BigInt> {
    let z = Integers;
    RationalMap::new(
        &z,
        vec![c.into(), 0.into(), 1.into()],
        vec![1.into(), 0.into(), 0.into()],
    )
    .expect("z^2 + c is nondegenerate")
}

pub fn quadratic_label(c: i64) -> String {
    match c {
        0 => "z^2".into(),
        c if c < 0 => format!("z^2 - {}", -c),
        c => format!("z^2 + {c}"),
    }
}

/// Sweeps `z^2 + c` for `c` in `lo..=hi` over `Q` with `S` the archimedean
/// place alone, where cycles have length at most 3 and orbits at most 12
/// points.
pub fn verify_corollary3(lo: i64, hi: i64, height: u64) -> Result<SweepSummary> {
    if lo > hi || height == 0 {
        return Err(Error::Precondition(
            "need a non-empty range and a positive height".into(),
        ));
    }
    let z = Integers;
    let s = PlaceSet::new(&z, [Place::Infinite])?;
    let maps: Vec<_> = (lo..=hi)
        .map(|c| (quadratic_label(c), quadratic(c)))
        .collect();
    sweep_family(&z, &maps, &s, height, &OrbitBudget::for_ring(&z))
}
