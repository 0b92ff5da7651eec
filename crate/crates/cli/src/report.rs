use std::fmt::Write;

use preper_core::bounds::BoundCheck;
use preper_core::dynamics::OrbitJson;
use preper_core::ratmap::MapJson;
use preper_core::sweep::SweepSummary;
use preper_core::BoundSet;
use serde::{Deserialize, Serialize};

/// Where a report came from: inputs and budgets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub places: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_cap: Option<String>,
}

impl Provenance {
    pub fn new(field: String) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            field,
            map: None,
            places: None,
            max_steps: None,
            height_cap: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub provenance: Provenance,
    pub map: MapJson,
    pub resultant: String,
    pub bad_places: Vec<String>,
    pub places: Vec<String>,
    pub bounds: BoundSet,
    /// Points of larger height are never preperiodic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape_height: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReportJson {
    pub provenance: Provenance,
    pub orbit: OrbitJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<String>,
    pub checks: Vec<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub provenance: Provenance,
    pub height: String,
    pub examined: String,
    pub wandering: String,
    pub preperiodic: Vec<OrbitJson>,
    pub undecided: Vec<String>,
    pub failures: Vec<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub provenance: Provenance,
    pub place: String,
    pub reduced_map: String,
    pub q: String,
    pub cycles: Vec<Vec<String>>,
    pub tail_nodes: String,
    pub max_tail_depth: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionPair {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunitReport {
    pub provenance: Provenance,
    pub a: String,
    pub b: String,
    pub cap: String,
    pub searched: String,
    /// Solutions among the units with exponents up to the cap.
    pub solutions_found_within_cap: Vec<SolutionPair>,
    pub s_trivial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    pub within_bound: bool,
}

/// The bounds for one context. `preper_total` is present when a map degree
/// was given and the number fits the digit budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    #[serde(flatten)]
    pub bounds: BoundSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preper_total: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub provenance: Provenance,
    pub summary: SweepSummary,
}

/// The output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Report {
    Analyze(AnalyzeReport),
    Orbit(OrbitReportJson),
    Search(SearchReport),
    Graph(GraphReport),
    Bounds(BoundsReport),
    Sunit(SunitReport),
    Sweep(SweepReport),
}

impl Report {
    /// Number of failed bound checks.
    pub fn violations(&self) -> usize {
        match self {
            Report::Orbit(r) => r.checks.iter().filter(|c| !c.pass).count(),
            Report::Search(r) => r.failures.len(),
            Report::Sunit(r) => usize::from(!r.within_bound),
            Report::Sweep(r) => r.summary.failures,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Report::Analyze(r) => serde_json::to_string(r),
            Report::Orbit(r) => serde_json::to_string(r),
            Report::Search(r) => serde_json::to_string(r),
            Report::Graph(r) => serde_json::to_string(r),
            Report::Bounds(r) => serde_json::to_string(r),
            Report::Sunit(r) => serde_json::to_string(r),
            Report::Sweep(r) => serde_json::to_string(r),
        }
        .expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Analyze(r) => {
                let _ = writeln!(s, "map: {} over {}", r.map.affine, r.provenance.field);
                let _ = writeln!(s, "degree: {}", r.map.degree);
                let _ = writeln!(s, "F: [{}]", r.map.f.join(", "));
                let _ = writeln!(s, "G: [{}]", r.map.g.join(", "));
                let _ = writeln!(s, "resultant: {}", r.resultant);
                let _ = writeln!(s, "bad places: {}", list_or_none(&r.bad_places));
                let _ = writeln!(s, "S: {}", r.places.join(","));
                write_bounds(&mut s, &r.bounds);
                if let Some(h) = &r.escape_height {
                    let _ = writeln!(s, "points of height above {h} wander");
                }
            }
            Report::Orbit(r) => {
                write_orbit(&mut s, &r.orbit);
                if let Some(m) = &r.multiplier {
                    let _ = writeln!(s, "cycle multiplier: {m}");
                }
                for c in &r.checks {
                    let _ = writeln!(s, "{c}");
                }
            }
            Report::Search(r) => {
                let _ = writeln!(
                    s,
                    "height {}: {} points examined, {} preperiodic, {} wandering, {} undecided",
                    r.height,
                    r.examined,
                    r.preperiodic.len(),
                    r.wandering,
                    r.undecided.len()
                );
                for o in &r.preperiodic {
                    let _ = writeln!(s, "{}  m = {}, n = {}", o.start, o.m, o.n);
                }
                if !r.undecided.is_empty() {
                    let _ = writeln!(s, "undecided: {}", r.undecided.join(", "));
                }
                for c in &r.failures {
                    let _ = writeln!(s, "{c}");
                }
            }
            Report::Graph(r) => {
                let _ = writeln!(
                    s,
                    "reduction at {}: {} over a field of {} elements",
                    r.place, r.reduced_map, r.q
                );
                for c in &r.cycles {
                    let _ = writeln!(s, "cycle of length {}: {}", c.len(), c.join(" -> "));
                }
                let _ = writeln!(
                    s,
                    "{} tail nodes, deepest at {} steps",
                    r.tail_nodes, r.max_tail_depth
                );
            }
            Report::Bounds(b) => {
                write_bounds(&mut s, &b.bounds);
                if let Some(t) = &b.preper_total {
                    let _ = writeln!(s, "preperiodic points: at most {t}");
                }
            }
            Report::Sunit(r) => {
                let _ = writeln!(
                    s,
                    "{} x + {} y = 1: {} solutions found within cap {} ({} units searched)",
                    grouped(&r.a),
                    grouped(&r.b),
                    r.solutions_found_within_cap.len(),
                    r.cap,
                    r.searched
                );
                for p in &r.solutions_found_within_cap {
                    let _ = writeln!(s, "  x = {}, y = {}", p.x, p.y);
                }
                let _ = writeln!(s, "S-trivial: {}", r.s_trivial);
                match &r.bound {
                    Some(b) => {
                        let _ = writeln!(
                            s,
                            "solution count bound: {b} ({})",
                            if r.within_bound { "ok" } else { "FAIL" }
                        );
                    }
                    None => {
                        let _ = writeln!(s, "no solution count bound applies");
                    }
                }
            }
            Report::Sweep(r) => {
                let m = &r.summary;
                for row in &m.maps {
                    let _ = writeln!(
                        s,
                        "{:<12} preperiodic {:>3}  max cycle {}  max orbit {:>2}  undecided {}",
                        row.map, row.preperiodic, row.max_cycle, row.max_orbit, row.undecided
                    );
                    for (start, c) in &row.failures {
                        let _ = writeln!(s, "  from {start}: {c}");
                    }
                }
                let _ = writeln!(
                    s,
                    "{} maps at height {}: max cycle {}, max orbit {}, {} failures, {} undecided points",
                    m.maps.len(),
                    m.height,
                    m.max_cycle,
                    m.max_orbit,
                    m.failures,
                    m.undecided
                );
            }
        }
        s
    }
}

fn list_or_none(v: &[String]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}

fn write_orbit(s: &mut String, o: &OrbitJson) {
    if o.undecided {
        let _ = writeln!(s, "{}: no repetition within the budget", o.start);
        return;
    }
    if o.wandering {
        let _ = writeln!(s, "{}: wandering (height grows without bound)", o.start);
        return;
    }
    let _ = writeln!(s, "tail: [{}]", o.tail.join(", "));
    let _ = writeln!(s, "cycle: [{}]", o.cycle.join(", "));
    let _ = writeln!(s, "m = {}, n = {}", o.m, o.n);
}

fn write_bounds(s: &mut String, b: &BoundSet) {
    let _ = writeln!(s, "orbit size bound: {}", b.eta);
    let _ = writeln!(s, "cycle length bound: {}", b.cycle_bound);
    let _ = writeln!(s, "small residue field bound: {}", b.i_bound);
    if let Some(r) = &b.r_bound {
        let _ = writeln!(s, "solutions of a non-trivial unit equation: {r}");
    }
    if let Some(e) = &b.evertse_bound {
        let _ = writeln!(s, "solutions of x + y = 1 in S-units: {e}");
    }
}

/// Parenthesizes a coefficient that is not a single term.
fn grouped(c: &str) -> String {
    if c.contains(' ') || c.starts_with('-') {
        format!("({c})")
    } else {
        c.to_string()
    }
}
