use preper_core::bounds::{
    compute_bounds, preper_total_bound, ReportVerifier, DEFAULT_DIGIT_BUDGET,
};
use preper_core::dynamics::{
    escape_bound, functional_graph, orbit_json, orbit_with_escape, preperiodic_search, OrbitBudget,
};
use preper_core::projective::{format_point_affine, reduced_affine};
use preper_core::ratmap::{
    bad_places, map_json, multiplier, parse_field_element, parse_map, parse_point, reduce_map,
    resultant,
};
use preper_core::sunit::{solve_unit_equation, UnitEquation};
use preper_core::sweep::{sweep_family, verify_corollary3};
use preper_core::{
    BoundContext, FactorBudget, FractionField, GlobalRing, Place, PlaceSet, RationalMap,
};

use crate::report::*;
use crate::{BudgetArgs, Failure, Report};

type Outcome = Result<Report, Failure>;

fn provenance<R: GlobalRing>(
    ring: &R,
    map: Option<&RationalMap<R::Elem>>,
    places: Option<&PlaceSet<R>>,
) -> Provenance {
    let mut p = Provenance::new(ring.field_name());
    p.map = map.map(|m| preper_core::ratmap::format_affine(ring, m));
    p.places = places.map(PlaceSet::format);
    p
}

fn with_budget(mut p: Provenance, budget: &OrbitBudget) -> Provenance {
    p.max_steps = Some(budget.max_steps.to_string());
    p.height_cap = Some(budget.height_cap.to_string());
    p
}

fn orbit_budget<R: GlobalRing>(ring: &R, args: &BudgetArgs) -> OrbitBudget {
    let mut b = OrbitBudget::for_ring(ring);
    b.max_steps = args.max_steps;
    if let Some(cap) = &args.height_cap {
        b.height_cap = cap.clone();
    }
    b
}

/// `S` from the command line, or the bad places together with infinity.
fn places_for<R: GlobalRing>(
    ring: &R,
    map: &RationalMap<R::Elem>,
    given: Option<&str>,
) -> Result<PlaceSet<R>, Failure> {
    if let Some(s) = given {
        return Ok(PlaceSet::parse(ring, s)?);
    }
    let mut places = bad_places(ring, map, &FactorBudget::default())?;
    if !places.contains(&Place::Infinite) {
        places.push(Place::Infinite);
    }
    Ok(PlaceSet::new(ring, places)?)
}

pub fn analyze<R: GlobalRing>(ring: &R, expr: &str, places: Option<&str>) -> Outcome {
    let map = parse_map(ring, expr)?;
    let s = places_for(ring, &map, places)?;
    let verifier = ReportVerifier::new(ring, &map, &s)?;
    let bad = bad_places(ring, &map, &FactorBudget::default())?;
    Ok(Report::Analyze(AnalyzeReport {
        provenance: provenance(ring, Some(&map), Some(&s)),
        map: map_json(ring, &map),
        resultant: ring.format(&resultant(ring, &map)),
        bad_places: bad.iter().map(|p| ring.format_place(p)).collect(),
        places: s.places().iter().map(|p| ring.format_place(p)).collect(),
        bounds: verifier.bounds().clone(),
        escape_height: escape_bound(ring, &map).map(|e| e.threshold.to_string()),
    }))
}

pub fn orbit<R: GlobalRing>(
    ring: &R,
    expr: &str,
    point: &str,
    places: Option<&str>,
    budget: &BudgetArgs,
) -> Outcome {
    let map = parse_map(ring, expr)?;
    let start = parse_point(ring, point)?;
    let s = places_for(ring, &map, places)?;
    let verifier = ReportVerifier::new(ring, &map, &s)?;
    let budget = orbit_budget(ring, budget);
    let outcome = orbit_with_escape(ring, &map, &start, &budget, None);
    let (checks, mult) = match outcome.report() {
        Some(rep) => {
            let lambda = multiplier(ring, &map, &rep.cycle[0], rep.n())?;
            let k = FractionField::new(ring.clone());
            (verifier.verify(rep), Some(k.format(&lambda.value)))
        }
        None => (Vec::new(), None),
    };
    Ok(Report::Orbit(OrbitReportJson {
        provenance: with_budget(provenance(ring, Some(&map), Some(&s)), &budget),
        orbit: orbit_json(ring, &start, &outcome),
        multiplier: mult,
        checks,
    }))
}

pub fn search<R: GlobalRing>(
    ring: &R,
    expr: &str,
    height: u64,
    places: Option<&str>,
    budget: &BudgetArgs,
    cap: u64,
) -> Outcome {
    let map = parse_map(ring, expr)?;
    let s = places_for(ring, &map, places)?;
    let verifier = ReportVerifier::new(ring, &map, &s)?;
    let budget = orbit_budget(ring, budget);
    let found = preperiodic_search(ring, &map, height, &budget, cap)?;
    let failures = found
        .preperiodic
        .iter()
        .flat_map(|r| verifier.verify(r))
        .filter(|c| !c.pass)
        .collect();
    let preperiodic = found
        .preperiodic
        .iter()
        .map(|r| {
            orbit_json(
                ring,
                &r.start,
                &preper_core::OrbitOutcome::Finite(r.clone()),
            )
        })
        .collect();
    Ok(Report::Search(SearchReport {
        provenance: with_budget(provenance(ring, Some(&map), Some(&s)), &budget),
        height: height.to_string(),
        examined: found.examined.to_string(),
        wandering: found.wandering.to_string(),
        preperiodic,
        undecided: found
            .undecided
            .iter()
            .map(|p| format_point_affine(ring, p))
            .collect(),
        failures,
    }))
}

pub fn graph<R: GlobalRing>(ring: &R, expr: &str, place: &str, cap: u64) -> Outcome {
    let map = parse_map(ring, expr)?;
    let place = ring.parse_place(place)?;
    let red = reduce_map(ring, &map, &place)?;
    let g = functional_graph(&red, cap)?;
    let name = |node: usize| match reduced_affine(&g.point(node)) {
        Some(a) => red.field.format(a),
        None => "inf".to_string(),
    };
    Ok(Report::Graph(GraphReport {
        provenance: provenance(ring, Some(&map), None),
        place: ring.format_place(&place),
        reduced_map: red.format_affine(),
        q: g.q.to_string(),
        cycles: g
            .cycles
            .iter()
            .map(|c| c.iter().map(|&v| name(v)).collect())
            .collect(),
        tail_nodes: g.tail_size().to_string(),
        max_tail_depth: g.tail_depth.iter().max().copied().unwrap_or(0).to_string(),
    }))
}

pub fn bounds(p: u64, degree: u32, s: u64, map_degree: Option<u64>) -> Outcome {
    let ctx = BoundContext::new(p, degree, s, map_degree)?;
    let bounds = compute_bounds(&ctx);
    let preper_total = map_degree.and_then(|d| {
        let b = u64::try_from(&bounds.eta).ok()?;
        let c = u64::try_from(&bounds.cycle_bound).ok()?;
        preper_total_bound(b, c, d, DEFAULT_DIGIT_BUDGET)
            .ok()
            .map(|t| t.to_string())
    });
    Ok(Report::Bounds(BoundsReport {
        bounds,
        preper_total,
    }))
}

pub fn sunit_solve<R: GlobalRing>(
    ring: &R,
    a: &str,
    b: &str,
    places: &str,
    cap: u32,
    budget: u64,
) -> Outcome {
    let s = PlaceSet::parse(ring, places)?;
    let eq = UnitEquation::new(
        parse_field_element(ring, a)?,
        parse_field_element(ring, b)?,
        s.clone(),
        cap,
    )?;
    let sol = solve_unit_equation(&eq, budget)?;
    let k = FractionField::new(ring.clone());
    Ok(Report::Sunit(SunitReport {
        provenance: provenance(ring, None, Some(&s)),
        a: k.format(&eq.a),
        b: k.format(&eq.b),
        cap: cap.to_string(),
        searched: sol.searched.to_string(),
        solutions_found_within_cap: sol
            .solutions
            .iter()
            .map(|(x, y)| SolutionPair {
                x: k.format(x),
                y: k.format(y),
            })
            .collect(),
        s_trivial: sol.s_trivial,
        bound: sol.bound.as_ref().map(|b| b.to_string()),
        within_bound: sol.within_bound(),
    }))
}

pub fn sweep_quadratics(lo: i64, hi: i64, height: u64, budget: &BudgetArgs) -> Outcome {
    let z = preper_core::Integers;
    let budget = orbit_budget(&z, budget);
    let summary = if budget == OrbitBudget::for_ring(&z) {
        verify_corollary3(lo, hi, height)?
    } else {
        let s = PlaceSet::new(&z, [Place::Infinite])?;
        let maps: Vec<_> = (lo..=hi)
            .map(|c| {
                (
                    preper_core::sweep::quadratic_label(c),
                    preper_core::sweep::quadratic(c),
                )
            })
            .collect();
        sweep_family(&z, &maps, &s, height, &budget)?
    };
    let mut p = with_budget(Provenance::new(z.field_name()), &budget);
    p.map = Some(format!("z^2 + c, {lo} <= c <= {hi}"));
    p.places = Some("inf".into());
    Ok(Report::Sweep(SweepReport {
        provenance: p,
        summary,
    }))
}

/// Maps from a corpus file, one per line with `#` comments, each swept with
/// `S` the infinite place alone.
pub fn sweep_corpus<R: GlobalRing>(
    ring: &R,
    text: &str,
    height: u64,
    budget: &BudgetArgs,
) -> Outcome {
    let mut maps = Vec::new();
    for line in text.lines() {
        let expr = line.split('#').next().unwrap_or("").trim();
        if expr.is_empty() {
            continue;
        }
        let map = parse_map(ring, expr)?;
        maps.push((expr.to_string(), map));
    }
    if maps.is_empty() {
        return Err(Failure::Usage("the corpus file lists no maps".into()));
    }
    let s = PlaceSet::new(ring, [Place::Infinite])?;
    let budget = orbit_budget(ring, budget);
    let summary = sweep_family(ring, &maps, &s, height, &budget)?;
    let mut p = with_budget(provenance(ring, None, Some(&s)), &budget);
    p.map = Some(format!("{} maps from a corpus file", maps.len()));
    Ok(Report::Sweep(SweepReport {
        provenance: p,
        summary,
    }))
}
