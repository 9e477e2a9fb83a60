//! Right Kan extension carriers by brute force: for a space X and a family of
//! generator objects, the comma diagram collects every continuous map from X
//! into a generator, with one arrow per commuting generator map. The limit of
//! that diagram is computed by backtracking over arrow-compatible tuples, and
//! compared against the matching monad carrier through the canonical cone of
//! projections.
//!
//! Truncation is explicit: generators are bounded in size, and a budget caps
//! diagram growth so oversized requests fail fast instead of thrashing.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::sober::{self, FpoObject};
use crate::space::{
    enumerate_continuous_maps_up_to, limit_engine, ContinuousMap, DiagramArrowSpec, FiniteSpace,
};
use crate::stone::{self, ScObject};

/// Default cap on diagram size, counted in enumerated objects (and, with a
/// multiplier, arrows).
pub const DEFAULT_OBJECT_BUDGET: usize = 2000;

/// Arrows may outnumber objects by this factor before the budget trips.
const ARROW_BUDGET_FACTOR: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodensityError {
    #[error("comma diagram needs at least {objects} objects/arrows, over the budget {cap}")]
    BudgetExceeded { objects: usize, cap: usize },
    #[error("not a cone over the diagram: {reason}")]
    NotACone { reason: String },
    #[error("cone condition violated at arrow {arrow}: {detail}")]
    ConeConditionViolated { arrow: usize, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeneratorKind {
    /// Discrete spaces of sizes 1..=bound.
    FinSet,
    /// Sierpinski powers P(m) for m in 0..=bound.
    Sierpinski,
}

impl GeneratorKind {
    pub fn label(&self) -> &'static str {
        match self {
            GeneratorKind::FinSet => "finset",
            GeneratorKind::Sierpinski => "sierpinski",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub bound: usize,
}

impl GeneratorSpec {
    pub fn finset(bound: usize) -> Self {
        assert!(bound >= 1, "the finite-set family starts at size 1");
        assert!(bound <= 6, "discrete generators above 6 points are not supported");
        GeneratorSpec { kind: GeneratorKind::FinSet, bound }
    }

    pub fn sierpinski(bound: usize) -> Self {
        assert!(bound <= 5, "P(m) for m > 5 exceeds the point limit");
        GeneratorSpec { kind: GeneratorKind::Sierpinski, bound }
    }

    pub fn new(kind: GeneratorKind, bound: usize) -> Self {
        match kind {
            GeneratorKind::FinSet => GeneratorSpec::finset(bound),
            GeneratorKind::Sierpinski => GeneratorSpec::sierpinski(bound),
        }
    }

    /// Generator objects in ascending size order.
    pub fn objects(&self) -> Vec<FiniteSpace> {
        match self.kind {
            GeneratorKind::FinSet => (1..=self.bound).map(FiniteSpace::discrete).collect(),
            GeneratorKind::Sierpinski => (0..=self.bound)
                .map(|m| {
                    sober::sierpinski_power_with_cap(m, self.bound.max(sober::DEFAULT_INDEX_CAP))
                        .expect("bound is within the cap")
                        .space
                })
                .collect(),
        }
    }
}

/// One diagram object: a continuous map from the apex into a generator.
#[derive(Debug, Clone)]
pub struct DiagramObject {
    pub generator: usize,
    pub map: ContinuousMap,
}

/// One arrow: generator map `phi` (a point table on the generators) with
/// `phi . objects[src].map == objects[dst].map`.
#[derive(Debug, Clone)]
pub struct DiagramArrow {
    pub src: usize,
    pub dst: usize,
    pub phi: Arc<[usize]>,
}

#[derive(Debug, Clone)]
pub struct CommaDiagram {
    pub apex: FiniteSpace,
    pub spec: GeneratorSpec,
    pub generators: Vec<FiniteSpace>,
    pub objects: Vec<DiagramObject>,
    pub arrows: Vec<DiagramArrow>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
}

impl CommaDiagram {
    /// Index of the object with this generator and point table.
    pub fn object_index(&self, generator: usize, table: &[usize]) -> Option<usize> {
        self.lookup.get(&(generator, table.to_vec())).copied()
    }
}

pub fn build_comma_diagram(
    x: &FiniteSpace,
    spec: GeneratorSpec,
) -> Result<CommaDiagram, CodensityError> {
    build_comma_diagram_with_budget(x, spec, DEFAULT_OBJECT_BUDGET)
}

/// Objects are enumerated per generator in ascending size, maps in
/// lexicographic table order, deduplicated by (generator, table); arrows
/// follow in (src, generator, phi) order. Exceeding the object budget (or
/// `ARROW_BUDGET_FACTOR` times it in arrows) aborts.
pub fn build_comma_diagram_with_budget(
    x: &FiniteSpace,
    spec: GeneratorSpec,
    budget: usize,
) -> Result<CommaDiagram, CodensityError> {
    let generators = spec.objects();
    let mut objects: Vec<DiagramObject> = Vec::new();
    let mut lookup: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for (g, gen) in generators.iter().enumerate() {
        let room = budget - objects.len();
        let maps = enumerate_continuous_maps_up_to(x, gen, room).map_err(|seen| {
            CodensityError::BudgetExceeded { objects: objects.len() + seen, cap: budget }
        })?;
        for map in maps {
            let key = (g, map.mapping().to_vec());
            if lookup.contains_key(&key) {
                continue;
            }
            lookup.insert(key, objects.len());
            objects.push(DiagramObject { generator: g, map });
        }
    }
    // Generator-to-generator map tables, shared across arrows.
    let arrow_budget = budget.saturating_mul(ARROW_BUDGET_FACTOR);
    let mut phi_tables: Vec<Vec<Vec<Arc<[usize]>>>> = Vec::with_capacity(generators.len());
    for src in &generators {
        let mut row = Vec::with_capacity(generators.len());
        for dst in &generators {
            let maps = enumerate_continuous_maps_up_to(src, dst, arrow_budget).map_err(|seen| {
                CodensityError::BudgetExceeded { objects: seen, cap: arrow_budget }
            })?;
            row.push(
                maps.into_iter()
                    .map(|m| Arc::<[usize]>::from(m.mapping().to_vec()))
                    .collect::<Vec<_>>(),
            );
        }
        phi_tables.push(row);
    }
    let mut arrows: Vec<DiagramArrow> = Vec::new();
    for (i, obj) in objects.iter().enumerate() {
        for g_dst in 0..generators.len() {
            for phi in &phi_tables[obj.generator][g_dst] {
                let composed: Vec<usize> =
                    obj.map.mapping().iter().map(|&b| phi[b]).collect();
                let dst = *lookup
                    .get(&(g_dst, composed))
                    .expect("composite of an object with a generator map is an object");
                arrows.push(DiagramArrow { src: i, dst, phi: phi.clone() });
                if arrows.len() > arrow_budget {
                    return Err(CodensityError::BudgetExceeded {
                        objects: arrows.len(),
                        cap: arrow_budget,
                    });
                }
            }
        }
    }
    Ok(CommaDiagram { apex: x.clone(), spec, generators, objects, arrows, lookup })
}

/// Limit of a comma diagram: carrier, projections (one per object), and the
/// underlying coordinate tuples in lexicographic order.
#[derive(Debug, Clone)]
pub struct LimitCone {
    pub carrier: FiniteSpace,
    pub projections: Vec<ContinuousMap>,
    pub tuples: Vec<Vec<usize>>,
}

pub fn compute_limit(d: &CommaDiagram) -> LimitCone {
    let spaces: Vec<&FiniteSpace> =
        d.objects.iter().map(|o| &d.generators[o.generator]).collect();
    let specs: Vec<DiagramArrowSpec> = d
        .arrows
        .iter()
        .map(|a| DiagramArrowSpec { src: a.src, dst: a.dst, mapping: &a.phi })
        .collect();
    let (carrier, projections, tuples) = limit_engine(&spaces, &specs);
    // Every arrow's square commutes on every tuple, by construction.
    debug_assert!(d.arrows.iter().all(|a| tuples
        .iter()
        .all(|t| a.phi[t[a.src]] == t[a.dst])));
    LimitCone { carrier, projections, tuples }
}

/// A cone over a comma diagram: an apex with one leg per object.
#[derive(Debug, Clone)]
pub struct Cone {
    pub apex: FiniteSpace,
    pub legs: Vec<ContinuousMap>,
}

fn check_cone(d: &CommaDiagram, cone: &Cone) -> Result<(), CodensityError> {
    if cone.legs.len() != d.objects.len() {
        return Err(CodensityError::NotACone {
            reason: format!("{} legs for {} objects", cone.legs.len(), d.objects.len()),
        });
    }
    for (i, leg) in cone.legs.iter().enumerate() {
        if leg.domain() != &cone.apex {
            return Err(CodensityError::NotACone {
                reason: format!("leg {i} does not start at the cone apex"),
            });
        }
        if leg.codomain() != &d.generators[d.objects[i].generator] {
            return Err(CodensityError::NotACone {
                reason: format!("leg {i} does not land in its object's generator"),
            });
        }
    }
    for (a_idx, arrow) in d.arrows.iter().enumerate() {
        for p in cone.apex.points() {
            let via = arrow.phi[cone.legs[arrow.src].apply(p)];
            let direct = cone.legs[arrow.dst].apply(p);
            if via != direct {
                return Err(CodensityError::NotACone {
                    reason: format!(
                        "arrow {a_idx} ({} -> {}) disagrees at apex point {p}: {via} vs {direct}",
                        arrow.src, arrow.dst
                    ),
                });
            }
        }
    }
    Ok(())
}

/// The canonical cone from the matching monad carrier: the legs are the
/// projections induced by each object's map. The arrow condition is checked
/// and a violation reported with its arrow index (it would disprove the
/// projection equations).
pub fn candidate_cone(x: &FiniteSpace, d: &CommaDiagram) -> Result<Cone, CodensityError> {
    let (apex, legs): (FiniteSpace, Vec<ContinuousMap>) = match d.spec.kind {
        GeneratorKind::FinSet => {
            let sc: ScObject = stone::sc_object(x);
            let legs = d
                .objects
                .iter()
                .map(|o| stone::projection_psi_with(&sc, &o.map))
                .collect();
            (sc.carrier, legs)
        }
        GeneratorKind::Sierpinski => {
            let fpo: FpoObject = sober::fpo_object(x);
            let legs = d
                .objects
                .iter()
                .map(|o| sober::projection_psi_sober_with(&fpo, &o.map))
                .collect();
            (fpo.carrier, legs)
        }
    };
    let cone = Cone { apex, legs };
    for (a_idx, arrow) in d.arrows.iter().enumerate() {
        for p in cone.apex.points() {
            let via = arrow.phi[cone.legs[arrow.src].apply(p)];
            let direct = cone.legs[arrow.dst].apply(p);
            if via != direct {
                return Err(CodensityError::ConeConditionViolated {
                    arrow: a_idx,
                    detail: format!("projections disagree at carrier point {p}: {via} vs {direct}"),
                });
            }
        }
    }
    Ok(cone)
}

/// The mediating map from a cone into the limit, and whether it is a
/// homeomorphism.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub map: ContinuousMap,
    pub is_iso: bool,
}

pub fn comparison_map(
    d: &CommaDiagram,
    limit: &LimitCone,
    cone: &Cone,
) -> Result<Comparison, CodensityError> {
    check_cone(d, cone)?;
    let index: HashMap<&[usize], usize> =
        limit.tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let table: Vec<usize> = cone
        .apex
        .points()
        .map(|p| {
            let tuple: Vec<usize> = cone.legs.iter().map(|l| l.apply(p)).collect();
            *index
                .get(tuple.as_slice())
                .expect("a valid cone's value tuple is arrow-compatible, hence a limit point")
        })
        .collect();
    let map = ContinuousMap::new(cone.apex.clone(), limit.carrier.clone(), table)
        .expect("mediating map of continuous legs is continuous into the subspace topology");
    // Mediation commutes with every projection by construction; the identity
    // below restates the definition.
    debug_assert!((0..d.objects.len()).all(|i| cone
        .apex
        .points()
        .all(|p| limit.projections[i].apply(map.apply(p)) == cone.legs[i].apply(p))));
    let is_iso = map.is_homeomorphism();
    Ok(Comparison { map, is_iso })
}

/// Direct construction of the mediating map into the monad carrier: read a
/// filter membership off the cone's leg at each characteristic-map object,
/// then verify the result is a genuine filter point, continuous, commutes
/// with every projection, and agrees with the generic route through the
/// limit.
pub fn mediating_alpha(
    x: &FiniteSpace,
    d: &CommaDiagram,
    limit: &LimitCone,
    cone: &Cone,
) -> Result<ContinuousMap, CodensityError> {
    check_cone(d, cone)?;
    let alpha = match d.spec.kind {
        GeneratorKind::FinSet => {
            assert!(d.spec.bound >= 2, "characteristic maps need the two-point generator");
            let sc = stone::sc_object(x);
            // Generator index of the discrete two-point space.
            let g2 = 1usize;
            let table: Vec<usize> = cone
                .apex
                .points()
                .map(|p| {
                    let members: Vec<u64> = sc
                        .algebra
                        .elements()
                        .iter()
                        .copied()
                        .filter(|&a| {
                            let chi: Vec<usize> = x
                                .points()
                                .map(|q| usize::from(a & (1u64 << q) != 0))
                                .collect();
                            let obj = d
                                .object_index(g2, &chi)
                                .expect("indicator of a clopen set is a diagram object");
                            cone.legs[obj].apply(p) == 1
                        })
                        .collect();
                    sc.ultrafilter_index(&members)
                        .expect("cone values at indicator objects assemble into an ultrafilter")
                })
                .collect();
            ContinuousMap::new(cone.apex.clone(), sc.carrier.clone(), table)
                .expect("assembled map into the spectrum is continuous")
        }
        GeneratorKind::Sierpinski => {
            assert!(d.spec.bound >= 1, "characteristic maps need P(1)");
            let fpo = sober::fpo_object(x);
            let g1 = 1usize;
            let table: Vec<usize> = cone
                .apex
                .points()
                .map(|p| {
                    let mut mask = 0u64;
                    for (e, &a) in fpo.frame.elements().iter().enumerate() {
                        let chi = sober::open_indicator(x, a).expect("frame elements are open");
                        let obj = d
                            .object_index(g1, chi.mapping())
                            .expect("indicator of an open set is a diagram object");
                        if cone.legs[obj].apply(p) == 1 {
                            mask |= 1u64 << e;
                        }
                    }
                    fpo.filter_index(mask)
                        .expect("cone values at indicator objects assemble into a prime filter")
                })
                .collect();
            ContinuousMap::new(cone.apex.clone(), fpo.carrier.clone(), table)
                .expect("assembled map into the point space is continuous")
        }
    };
    // alpha must commute with every projection of the canonical cone.
    let canonical = candidate_cone(x, d)?;
    for (i, leg) in canonical.legs.iter().enumerate() {
        for p in cone.apex.points() {
            assert_eq!(
                leg.apply(alpha.apply(p)),
                cone.legs[i].apply(p),
                "alpha fails the projection equation at object {i}, apex point {p}"
            );
        }
    }
    // Uniqueness: alpha equals the generic mediation composed with the
    // inverse of the canonical comparison iso.
    let canonical_cmp = comparison_map(d, limit, &canonical)?;
    assert!(canonical_cmp.is_iso, "canonical comparison must be iso before mediating through it");
    let inv = canonical_cmp.map.inverse().expect("iso has a continuous inverse");
    let through_limit = comparison_map(d, limit, cone)?.map.then(&inv);
    assert_eq!(
        alpha.mapping(),
        through_limit.mapping(),
        "direct mediation differs from the generic route"
    );
    Ok(alpha)
}

/// Action of the limit construction on a map f: X -> Y between apexes, using
/// diagrams and limits over the same generator family: the coordinate of the
/// image at a Y-object (B, h) is the source coordinate at the X-object
/// (B, h . f).
pub fn limit_morphism(
    f: &ContinuousMap,
    src: (&CommaDiagram, &LimitCone),
    dst: (&CommaDiagram, &LimitCone),
) -> ContinuousMap {
    let (d_src, l_src) = src;
    let (d_dst, l_dst) = dst;
    assert!(d_src.spec == d_dst.spec, "diagrams use different generator families");
    assert!(f.domain() == &d_src.apex && f.codomain() == &d_dst.apex, "endpoint mismatch");
    let index: HashMap<&[usize], usize> =
        l_dst.tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let table: Vec<usize> = l_src
        .tuples
        .iter()
        .map(|t| {
            let image: Vec<usize> = d_dst
                .objects
                .iter()
                .map(|o| {
                    let pulled: Vec<usize> =
                        f.mapping().iter().map(|&p| o.map.apply(p)).collect();
                    let src_obj = d_src
                        .object_index(o.generator, &pulled)
                        .expect("pullback of a diagram object is a diagram object");
                    t[src_obj]
                })
                .collect();
            *index
                .get(image.as_slice())
                .expect("image tuple is arrow-compatible, hence a limit point")
        })
        .collect();
    ContinuousMap::new(l_src.carrier.clone(), l_dst.carrier.clone(), table)
        .expect("induced map between limits is continuous")
}

/// One row of a stabilization scan.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub bound: usize,
    pub objects: usize,
    pub arrows: usize,
    pub limit_points: usize,
    pub monad_points: usize,
    pub is_iso: bool,
    /// Never serialized: timings stay out of deterministic reports.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

/// Scan result across bounds: per-bound diagram sizes and iso verdicts, the
/// first bound where the comparison is iso, and whether every later scanned
/// bound stayed iso.
#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub generator: String,
    pub apex_points: usize,
    pub monad_points: usize,
    pub rows: Vec<LimitRow>,
    pub first_iso_bound: Option<usize>,
    pub stable_after_first: bool,
}

impl LimitReport {
    pub fn all_later_bounds_iso(&self) -> bool {
        self.stable_after_first
    }
}

/// Runs the comparison at each bound (ascending, deduplicated). Timing goes
/// to the log stream and the non-serialized `elapsed_ms` field, never into
/// the report's deterministic output.
pub fn stabilization_scan(
    x: &FiniteSpace,
    kind: GeneratorKind,
    bounds: &[usize],
    budget: usize,
) -> Result<LimitReport, CodensityError> {
    let mut bounds: Vec<usize> = bounds.to_vec();
    bounds.sort_unstable();
    bounds.dedup();
    let monad_points = match kind {
        GeneratorKind::FinSet => stone::sc_object(x).carrier.point_count(),
        GeneratorKind::Sierpinski => sober::fpo_object(x).carrier.point_count(),
    };
    let mut rows = Vec::new();
    let mut first_iso_bound = None;
    let mut stable_after_first = true;
    for &bound in &bounds {
        let start = Instant::now();
        let spec = GeneratorSpec::new(kind, bound);
        let d = build_comma_diagram_with_budget(x, spec, budget)?;
        let limit = compute_limit(&d);
        let cone = candidate_cone(x, &d)?;
        let cmp = comparison_map(&d, &limit, &cone)?;
        let elapsed = start.elapsed();
        log::info!(
            "scan {} bound {}: {} objects, {} arrows, limit {} points, iso {} ({} ms)",
            kind.label(),
            bound,
            d.objects.len(),
            d.arrows.len(),
            limit.carrier.point_count(),
            cmp.is_iso,
            elapsed.as_millis()
        );
        if cmp.is_iso {
            if first_iso_bound.is_none() {
                first_iso_bound = Some(bound);
            }
        } else if first_iso_bound.is_some() {
            stable_after_first = false;
        }
        rows.push(LimitRow {
            bound,
            objects: d.objects.len(),
            arrows: d.arrows.len(),
            limit_points: limit.carrier.point_count(),
            monad_points,
            is_iso: cmp.is_iso,
            elapsed_ms: elapsed.as_millis(),
        });
    }
    Ok(LimitReport {
        generator: kind.label().to_string(),
        apex_points: x.point_count(),
        monad_points,
        rows,
        first_iso_bound,
        stable_after_first,
    })
}

/// Idempotence evidence at one space: the multiplication is iso, the unit at
/// the carrier is iso, and the double carrier is homeomorphic to the carrier.
#[derive(Debug, Clone, Serialize)]
pub struct IdempotenceReport {
    pub mult_iso: bool,
    pub unit_at_carrier_iso: bool,
    pub carrier_fixed: bool,
}

impl IdempotenceReport {
    pub fn holds(&self) -> bool {
        self.mult_iso && self.unit_at_carrier_iso && self.carrier_fixed
    }
}

pub fn verify_idempotence(x: &FiniteSpace, kind: GeneratorKind) -> IdempotenceReport {
    let (carrier, double, mult_iso, unit_at_carrier_iso) = match kind {
        GeneratorKind::FinSet => {
            let sc = stone::sc_object(x);
            let sc2 = stone::sc_object(&sc.carrier);
            let mult_iso = stone::mu(x).map(|m| m.is_homeomorphism()).unwrap_or(false);
            let unit_iso = sc2.unit.is_homeomorphism();
            (sc.carrier, sc2.carrier, mult_iso, unit_iso)
        }
        GeneratorKind::Sierpinski => {
            let t = sober::fpo_object(x);
            let t2 = sober::fpo_object(&t.carrier);
            let mult_iso = sober::mu_sober(x).map(|m| m.is_homeomorphism()).unwrap_or(false);
            let unit_iso = t2.unit.is_homeomorphism();
            (t.carrier, t2.carrier, mult_iso, unit_iso)
        }
    };
    let carrier_fixed = crate::space::is_homeomorphic(&double, &carrier).is_some();
    IdempotenceReport { mult_iso, unit_at_carrier_iso, carrier_fixed }
}
