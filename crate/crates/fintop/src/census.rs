//! Exhaustive enumeration of all topologies on n labeled points, and the
//! per-space census rows combining classification, monad sizes, law results,
//! and optional limit comparisons.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

use crate::classify::{classify, Classification};
use crate::codensity::{self, CodensityError, GeneratorKind};
use crate::laws::{default_probe_panel, verify_monad_laws, SoberMonad, StoneMonad};
use crate::space::{
    full_mask, generate_topology, quasi_components, set_members, FiniteSpace, PointSet,
};
use crate::{sober, stone};

pub const DEFAULT_CENSUS_CAP: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("census on {requested} points exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error(transparent)]
    Codensity(#[from] CodensityError),
}

/// Every topology on n labeled points, in canonical space order. Search:
/// breadth-first closure growth from the indiscrete family, adding one absent
/// subset at a time and re-closing under union and intersection. Any topology
/// is reachable by adding its members one at a time (closures stay inside
/// it), so the walk is exhaustive.
pub fn enumerate_topologies(n: usize) -> Vec<FiniteSpace> {
    assert!(n <= 5, "labeled-topology enumeration beyond 5 points is not supported");
    let full = full_mask(n);
    let seed: Vec<PointSet> = if n == 0 { vec![0] } else { vec![0, full] };
    let mut seen: HashSet<Vec<PointSet>> = HashSet::new();
    let mut queue: VecDeque<Vec<PointSet>> = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back(seed);
    while let Some(family) = queue.pop_front() {
        for s in 0..=full {
            if family.contains(&s) {
                continue;
            }
            let mut extended = family.clone();
            extended.push(s);
            let closed = generate_topology(n, &extended);
            if seen.insert(closed.clone()) {
                queue.push_back(closed);
            }
        }
    }
    let mut spaces: Vec<FiniteSpace> = seen
        .into_iter()
        .map(|family| {
            FiniteSpace::validate(n, &family).expect("closure of a family is a topology")
        })
        .collect();
    spaces.sort_by(|a, b| a.canonical_cmp(b));
    spaces
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusLimitCheck {
    pub generator: String,
    pub bound: usize,
    pub is_iso: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub points: usize,
    pub open_count: usize,
    pub opens: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub classification: Classification,
    pub quasi_component_count: usize,
    pub sc_points: usize,
    pub fpo_points: usize,
    pub laws_ok: bool,
    pub limit_checks: Vec<CensusLimitCheck>,
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub cap: usize,
    pub jobs: Option<usize>,
    /// Per-row limit comparisons to run, as (generator, bound).
    pub limit_checks: Vec<(GeneratorKind, usize)>,
    pub budget: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            cap: DEFAULT_CENSUS_CAP,
            jobs: None,
            limit_checks: Vec::new(),
            budget: codensity::DEFAULT_OBJECT_BUDGET,
        }
    }
}

fn census_row(x: &FiniteSpace, opts: &CensusOptions) -> Result<CensusRow, CensusError> {
    let classification = classify(x);
    let sc_points = stone::sc_object(x).carrier.point_count();
    let fpo_points = sober::fpo_object(x).carrier.point_count();
    let probes = default_probe_panel();
    let laws_ok = verify_monad_laws(&StoneMonad, x, &probes).all_passed()
        && verify_monad_laws(&SoberMonad, x, &probes).all_passed();
    let mut limit_checks = Vec::new();
    for &(kind, bound) in &opts.limit_checks {
        let spec = codensity::GeneratorSpec::new(kind, bound);
        let d = codensity::build_comma_diagram_with_budget(x, spec, opts.budget)?;
        let limit = codensity::compute_limit(&d);
        let cone = codensity::candidate_cone(x, &d)?;
        let cmp = codensity::comparison_map(&d, &limit, &cone)?;
        limit_checks.push(CensusLimitCheck {
            generator: kind.label().to_string(),
            bound,
            is_iso: cmp.is_iso,
        });
    }
    Ok(CensusRow {
        points: x.point_count(),
        open_count: x.open_count(),
        opens: x.opens().iter().map(|&u| set_members(u)).collect(),
        classification,
        quasi_component_count: quasi_components(x).blocks.len(),
        sc_points,
        fpo_points,
        laws_ok,
        limit_checks,
    })
}

/// Census over every topology on n points. Rows come back in canonical space
/// order regardless of the worker count.
pub fn run_census(n: usize, opts: &CensusOptions) -> Result<Vec<CensusRow>, CensusError> {
    if n > opts.cap {
        return Err(CensusError::CapExceeded { requested: n, cap: opts.cap });
    }
    let spaces = enumerate_topologies(n);
    let compute = || -> Result<Vec<CensusRow>, CensusError> {
        spaces.par_iter().map(|x| census_row(x, opts)).collect()
    };
    match opts.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .expect("worker pool");
            pool.install(compute)
        }
        None => compute(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: scan every family of middle subsets and keep the
    /// ones that validate.
    fn brute_force_topologies(n: usize) -> Vec<FiniteSpace> {
        let full = full_mask(n);
        if n == 0 {
            return vec![FiniteSpace::empty()];
        }
        let middles: Vec<PointSet> = (1..full).collect();
        let mut out = Vec::new();
        for code in 0..(1u64 << middles.len()) {
            let mut family: Vec<PointSet> = vec![0, full];
            for (i, &m) in middles.iter().enumerate() {
                if code & (1u64 << i) != 0 {
                    family.push(m);
                }
            }
            if let Ok(space) = FiniteSpace::validate(n, &family) {
                if space.open_count() == family.len() {
                    out.push(space);
                }
            }
        }
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    #[test]
    fn counts_match_known_values() {
        assert_eq!(enumerate_topologies(0).len(), 1);
        assert_eq!(enumerate_topologies(1).len(), 1);
        assert_eq!(enumerate_topologies(2).len(), 4);
        assert_eq!(enumerate_topologies(3).len(), 29);
        assert_eq!(enumerate_topologies(4).len(), 355);
    }

    #[test]
    fn closure_walk_matches_brute_force() {
        for n in 0..=3 {
            assert_eq!(enumerate_topologies(n), brute_force_topologies(n), "mismatch at n={n}");
        }
    }

    #[test]
    fn brute_force_agrees_at_four_points() {
        assert_eq!(enumerate_topologies(4), brute_force_topologies(4));
    }

    #[test]
    fn census_rows_are_consistent() {
        let opts = CensusOptions {
            limit_checks: vec![(GeneratorKind::FinSet, 2)],
            ..CensusOptions::default()
        };
        let rows = run_census(2, &opts).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(row.laws_ok);
            assert_eq!(row.points, 2);
            // Finite stone spaces are exactly the discrete ones.
            assert_eq!(row.classification.is_stone, row.classification.is_discrete);
            // Spectrum size equals the quasi-component count.
            assert_eq!(row.sc_points, row.quasi_component_count);
        }
        // Discrete pair: everything true, comparison already iso at bound 2.
        let discrete = rows.iter().find(|r| r.classification.is_discrete).unwrap();
        assert!(discrete.limit_checks[0].is_iso);
    }

    #[test]
    fn census_cap_is_enforced() {
        let opts = CensusOptions::default();
        assert_eq!(
            run_census(5, &opts).unwrap_err(),
            CensusError::CapExceeded { requested: 5, cap: 4 }
        );
    }

    #[test]
    fn jobs_do_not_change_output() {
        let mut opts = CensusOptions::default();
        let serial = run_census(3, &opts).unwrap();
        opts.jobs = Some(4);
        let parallel = run_census(3, &opts).unwrap();
        let a = serde_json::to_string(&serial).unwrap();
        let b = serde_json::to_string(&parallel).unwrap();
        assert_eq!(a, b);
    }
}
