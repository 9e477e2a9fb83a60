//! The clopen-algebra monad: carrier of SC(X) is the set of ultrafilters on
//! the Boolean algebra of clopen subsets of X, topologized by the basic opens
//! D_a = { U : a in U }.
//!
//! Ultrafilters are stored extensionally (full member list). In a finite
//! Boolean algebra every ultrafilter is principal at an atom, which drives
//! the enumerator, but the membership checks and the triple-cover test work
//! on arbitrary element subsets.



use thiserror::Error;

use crate::space::{
    canonical_set_order, format_set, ContinuousMap, FiniteSpace, PointSet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoneError {
    #[error("unit at {context} is not a homeomorphism, so the multiplication does not exist")]
    UnitNotIso { context: String },
}

/// Boolean algebra of clopen subsets of a base space, elements in canonical
/// set order. Meet, join, complement are the set operations; the algebra is
/// closed under them because clopens are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClopenAlgebra {
    base: FiniteSpace,
    elements: Vec<PointSet>,
}

impl ClopenAlgebra {
    pub fn of(x: &FiniteSpace) -> Self {
        let elements: Vec<PointSet> =
            x.opens().iter().copied().filter(|&u| x.is_clopen(u)).collect();
        ClopenAlgebra { base: x.clone(), elements }
    }

    pub fn base(&self) -> &FiniteSpace {
        &self.base
    }

    /// Elements in canonical set order. The bottom (empty set) is first and
    /// the top (full set) last; they coincide only over the empty base.
    pub fn elements(&self) -> &[PointSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> PointSet {
        self.base.full_set()
    }

    pub fn bottom(&self) -> PointSet {
        0
    }

    pub fn complement(&self, a: PointSet) -> PointSet {
        self.base.full_set() & !a
    }

    pub fn element_index(&self, a: PointSet) -> Option<usize> {
        self.elements.binary_search_by(|probe| canonical_set_order(*probe, a)).ok()
    }

    pub fn contains(&self, a: PointSet) -> bool {
        self.element_index(a).is_some()
    }

    /// Minimal nonzero elements.
    pub fn atoms(&self) -> Vec<PointSet> {
        self.elements
            .iter()
            .copied()
            .filter(|&a| {
                a != 0
                    && !self
                        .elements
                        .iter()
                        .any(|&b| b != 0 && b != a && b & !a == 0)
            })
            .collect()
    }
}

/// An ultrafilter on a clopen algebra, stored as its full member list in
/// canonical set order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ultrafilter {
    members: Vec<PointSet>,
}

impl Ultrafilter {
    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn contains(&self, a: PointSet) -> bool {
        self.members.binary_search_by(|probe| canonical_set_order(*probe, a)).is_ok()
    }
}

/// All ultrafilters, one per atom, ordered by ascending atom mask. Over the
/// empty base the algebra is the one-element {0} and there are none.
pub fn ultrafilters(algebra: &ClopenAlgebra) -> Vec<Ultrafilter> {
    let mut atoms = algebra.atoms();
    atoms.sort_unstable();
    atoms
        .into_iter()
        .map(|atom| {
            let members: Vec<PointSet> =
                algebra.elements().iter().copied().filter(|&a| atom & !a == 0).collect();
            let u = Ultrafilter { members };
            debug_assert!(ultrafilter_axioms_hold(algebra, &subset_to_index_mask(algebra, &u.members)));
            u
        })
        .collect()
}

fn subset_to_index_mask(algebra: &ClopenAlgebra, members: &[PointSet]) -> u64 {
    let mut mask = 0u64;
    for &m in members {
        mask |= 1u64 << algebra.element_index(m).expect("member is an algebra element");
    }
    mask
}

/// Direct test of the ultrafilter axioms on a subset of algebra elements,
/// given as a bitmask over element indices: contains top, omits bottom,
/// closed under meet, upward closed, and decides every complement pair.
pub fn ultrafilter_axioms_hold(algebra: &ClopenAlgebra, subset: &u64) -> bool {
    let subset = *subset;
    let els = algebra.elements();
    assert!(els.len() <= 64, "algebra too large for subset masks");
    let idx = |a: PointSet| algebra.element_index(a).expect("closed operation");
    let top_i = idx(algebra.top());
    let bot_i = idx(algebra.bottom());
    if subset & (1u64 << top_i) == 0 || subset & (1u64 << bot_i) != 0 {
        return false;
    }
    for i in 0..els.len() {
        if subset & (1u64 << i) == 0 {
            continue;
        }
        for j in i..els.len() {
            if subset & (1u64 << j) == 0 {
                continue;
            }
            if subset & (1u64 << idx(els[i] & els[j])) == 0 {
                return false;
            }
        }
        for (j, &b) in els.iter().enumerate() {
            if els[i] & !b == 0 && subset & (1u64 << j) == 0 {
                return false;
            }
        }
    }
    for (i, &a) in els.iter().enumerate() {
        let ci = idx(algebra.complement(a));
        let has_a = subset & (1u64 << i) != 0;
        let has_c = subset & (1u64 << ci) != 0;
        if has_a == has_c {
            return false;
        }
    }
    true
}

/// Triple-cover test: a subset U passes iff for every triple (a0, a1, a2) of
/// elements (repeats allowed) with pairwise meets bottom and join top,
/// exactly one component lies in U.
pub fn galvin_horn_check(algebra: &ClopenAlgebra, subset: &u64) -> bool {
    let subset = *subset;
    let els = algebra.elements();
    assert!(els.len() <= 64, "algebra too large for subset masks");
    let n = els.len();
    let top = algebra.top();
    for i in 0..n {
        for j in 0..n {
            if els[i] & els[j] != 0 {
                continue;
            }
            for k in 0..n {
                if els[i] & els[k] != 0 || els[j] & els[k] != 0 {
                    continue;
                }
                if els[i] | els[j] | els[k] != top {
                    continue;
                }
                let hits = [i, j, k]
                    .iter()
                    .filter(|&&t| subset & (1u64 << t) != 0)
                    .count();
                if hits != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Basic open D_a for the spectrum: indices of ultrafilters containing `a`.
fn basic_open(ultras: &[Ultrafilter], a: PointSet) -> PointSet {
    let mut mask = 0u64;
    for (i, u) in ultras.iter().enumerate() {
        if u.contains(a) {
            mask |= 1u64 << i;
        }
    }
    mask
}

/// Spectrum of a clopen algebra: the ultrafilter space with the topology
/// generated by the basic opens D_a.
pub fn stone_space(algebra: &ClopenAlgebra) -> (FiniteSpace, Vec<Ultrafilter>) {
    let ultras = ultrafilters(algebra);
    let subbasis: Vec<PointSet> =
        algebra.elements().iter().map(|&a| basic_open(&ultras, a)).collect();
    let opens = crate::space::generate_topology(ultras.len(), &subbasis);
    let space = FiniteSpace::validate(ultras.len(), &opens).expect("generated family is a topology");
    (space, ultras)
}

/// The monad's value at a space: clopen algebra, spectrum, and the unit
/// sending a point to the ultrafilter of clopens containing it.
#[derive(Debug, Clone)]
pub struct ScObject {
    pub base: FiniteSpace,
    pub algebra: ClopenAlgebra,
    pub ultrafilters: Vec<Ultrafilter>,
    pub carrier: FiniteSpace,
    pub unit: ContinuousMap,
}

impl ScObject {
    pub fn ultrafilter_index(&self, members: &[PointSet]) -> Option<usize> {
        self.ultrafilters.iter().position(|u| u.members() == members)
    }
}

pub fn sc_object(x: &FiniteSpace) -> ScObject {
    let algebra = ClopenAlgebra::of(x);
    let (carrier, ultras) = stone_space(&algebra);
    let table: Vec<usize> = x
        .points()
        .map(|p| {
            let members: Vec<PointSet> = algebra
                .elements()
                .iter()
                .copied()
                .filter(|&a| a & (1u64 << p) != 0)
                .collect();
            ultras
                .iter()
                .position(|u| u.members() == members)
                .expect("point filter is an ultrafilter")
        })
        .collect();
    let unit = ContinuousMap::new(x.clone(), carrier.clone(), table)
        .expect("unit into the spectrum is continuous");
    ScObject { base: x.clone(), algebra, ultrafilters: ultras, carrier, unit }
}

/// Functorial action on a morphism, given precomputed endpoints:
/// SC(f)(U) = { a clopen in the codomain : f^-1(a) in U }.
pub fn sc_morphism_between(src: &ScObject, dst: &ScObject, f: &ContinuousMap) -> ContinuousMap {
    assert!(f.domain() == &src.base && f.codomain() == &dst.base, "endpoint mismatch");
    let table: Vec<usize> = src
        .ultrafilters
        .iter()
        .map(|u| {
            let members: Vec<PointSet> = dst
                .algebra
                .elements()
                .iter()
                .copied()
                .filter(|&a| u.contains(f.preimage(a)))
                .collect();
            dst.ultrafilter_index(&members).expect("pushforward of an ultrafilter is one")
        })
        .collect();
    ContinuousMap::new(src.carrier.clone(), dst.carrier.clone(), table)
        .expect("pushforward on spectra is continuous")
}

pub fn sc_morphism(f: &ContinuousMap) -> ContinuousMap {
    sc_morphism_between(&sc_object(f.domain()), &sc_object(f.codomain()), f)
}

/// Projection out of the spectrum induced by a map into a discrete space:
/// psi_f(U) = the unique b with f^-1({b}) in U. Continuity comes from
/// psi_f^-1({b}) = D_{f^-1({b})}.
pub fn projection_psi_with(sc: &ScObject, f: &ContinuousMap) -> ContinuousMap {
    assert!(f.domain() == &sc.base, "map does not start at the spectrum's base");
    let b = f.codomain();
    assert!(b.is_discrete(), "projection targets must be discrete");
    let table: Vec<usize> = sc
        .ultrafilters
        .iter()
        .map(|u| {
            let mut found = None;
            for t in b.points() {
                if u.contains(f.preimage(1u64 << t)) {
                    assert!(found.is_none(), "ultrafilter selects two fiber values");
                    found = Some(t);
                }
            }
            found.expect("the fibers cover the base, so the ultrafilter picks one")
        })
        .collect();
    ContinuousMap::new(sc.carrier.clone(), b.clone(), table)
        .expect("projection out of the spectrum is continuous")
}

pub fn projection_psi(f: &ContinuousMap) -> ContinuousMap {
    projection_psi_with(&sc_object(f.domain()), f)
}

/// Characteristic map of a clopen subset into the discrete two-point space,
/// sending members to 1.
pub fn clopen_indicator(x: &FiniteSpace, a: PointSet) -> ContinuousMap {
    assert!(x.is_clopen(a), "indicator requires a clopen subset, got {}", format_set(a));
    let table: Vec<usize> = x.points().map(|p| usize::from(a & (1u64 << p) != 0)).collect();
    ContinuousMap::new(x.clone(), FiniteSpace::discrete(2), table)
        .expect("indicator of a clopen set is continuous")
}

/// Multiplication at x: inverse of the unit at SC(x). Errors if that unit is
/// not a homeomorphism (it always is; the error path guards the claim).
pub fn mu(x: &FiniteSpace) -> Result<ContinuousMap, StoneError> {
    let sc1 = sc_object(x);
    let sc2 = sc_object(&sc1.carrier);
    let inv = sc2.unit.inverse().ok_or_else(|| StoneError::UnitNotIso {
        context: format!("SC of ({})", sc1.carrier),
    })?;
    Ok(inv)
}

/// Unit, carrier, and multiplication packaged for one space, all checked.
#[derive(Debug, Clone)]
pub struct StoneMonadWitness {
    pub object: ScObject,
    pub mult: ContinuousMap,
}

impl StoneMonadWitness {
    pub fn build(x: &FiniteSpace) -> Result<Self, StoneError> {
        let object = sc_object(x);
        let mult = mu(x)?;
        Ok(StoneMonadWitness { object, mult })
    }
}

/// Index lookup helper shared by tests: member masks of all ultrafilters as
/// element-index bitmasks.
pub fn ultrafilter_index_masks(algebra: &ClopenAlgebra) -> Vec<u64> {
    ultrafilters(algebra)
        .iter()
        .map(|u| subset_to_index_mask(algebra, u.members()))
        .collect()
}
